//! Incomplete and complete elliptic integrals of the first and second kind.
//!
//! The parameter convention is the one used throughout the crate:
//!
//! ```text
//! F(u, k) = ∫₀ᵘ (1 − k sin²θ)^(−1/2) dθ
//! E(u, k) = ∫₀ᵘ (1 − k sin²θ)^(1/2)  dθ
//! ```
//!
//! so `k` multiplies `sin²θ` directly (it is the *parameter*, not the modulus).
//!
//! Everything is reduced to Carlson's symmetric integrals `R_F` and `R_D`,
//! evaluated by the duplication algorithm. The unduloid geometry works in the
//! regime `k → 1` where forming `1 − k` from `k` destroys most of the
//! significant digits, so every routine also has an entry point taking the
//! complementary parameter `kc = 1 − k` and an [`Amplitude`] given by its sine
//! and cosine. Callers that know `kc` and `cos u` analytically should use those.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Slack allowed on `u ≤ π/2` so that `π/2` computed in floating point is accepted.
const ANGLE_SLACK: f64 = 1e-12;

/// Relative truncation tolerance for the duplication algorithm.
const CARLSON_TOL: f64 = 1e-16;

/// Carlson's symmetric integral of the first kind,
/// `R_F(x, y, z) = ½ ∫₀^∞ [(t+x)(t+y)(t+z)]^(−1/2) dt`.
///
/// At most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if !(x >= 0.0 && y >= 0.0 && z >= 0.0) {
        return Err(domain(format!("R_F({x}, {y}, {z}) needs non-negative arguments")));
    }
    if (x == 0.0) as u8 + (y == 0.0) as u8 + (z == 0.0) as u8 > 1 {
        return Err(domain("R_F diverges when two arguments vanish"));
    }
    let (x0, y0, z0) = (x, y, z);
    let a0 = (x0 + y0 + z0) / 3.0;
    let q = (3.0 * CARLSON_TOL).powf(-1.0 / 6.0) * (a0 - x0).abs().max((a0 - y0).abs()).max((a0 - z0).abs());
    let (mut x, mut y, mut z, mut a) = (x0, y0, z0, a0);
    let mut scale = 1.0; // 4^(-m)
    while scale * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt())
}

/// Carlson's degenerate symmetric integral of the second kind,
/// `R_D(x, y, z) = (3/2) ∫₀^∞ [(t+x)(t+y)]^(−1/2) (t+z)^(−3/2) dt`.
///
/// Requires `z > 0` and at most one of `x`, `y` zero.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if !(x >= 0.0 && y >= 0.0 && z > 0.0) {
        return Err(domain(format!("R_D({x}, {y}, {z}) needs x, y ≥ 0 and z > 0")));
    }
    if x == 0.0 && y == 0.0 {
        return Err(domain("R_D diverges when x = y = 0"));
    }
    let (x0, y0, z0) = (x, y, z);
    let a0 = (x0 + y0 + 3.0 * z0) / 5.0;
    let q = (0.25 * CARLSON_TOL).powf(-1.0 / 6.0) * (a0 - x0).abs().max((a0 - y0).abs()).max((a0 - z0).abs());
    let (mut x, mut y, mut z, mut a) = (x0, y0, z0, a0);
    let mut scale = 1.0;
    let mut tail = 0.0;
    while scale * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        tail += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -(xx + yy) / 3.0;
    let xy = xx * yy;
    let z2 = zz * zz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(scale * series / (a * a.sqrt()) + 3.0 * tail)
}

/// An amplitude angle in `[0, π/2]` carried by its sine and cosine.
///
/// Near `π/2` the cosine is the informative quantity; geometry code builds
/// amplitudes from analytically known `sin²` and `cos²` instead of the angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    sin: f64,
    cos: f64,
}

impl Amplitude {
    pub fn from_angle(u: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2 + ANGLE_SLACK).contains(&u) {
            return Err(domain(format!("amplitude {u} outside [0, π/2]")));
        }
        if u >= FRAC_PI_2 {
            return Ok(Self::right());
        }
        Ok(Self { sin: u.sin(), cos: u.cos() })
    }

    /// Builds the amplitude from `sin²u` and `cos²u`, which must both lie in
    /// `[0, 1]` and sum to one up to rounding.
    pub fn from_squares(sin2: f64, cos2: f64) -> Result<Self> {
        if !(0.0..=1.0 + 1e-12).contains(&sin2) || !(0.0..=1.0 + 1e-12).contains(&cos2) {
            return Err(domain(format!("sin² = {sin2}, cos² = {cos2} not in [0, 1]")));
        }
        if ((sin2 + cos2) - 1.0).abs() > 1e-12 {
            return Err(domain(format!("sin² + cos² = {} ≠ 1", sin2 + cos2)));
        }
        Ok(Self { sin: sin2.min(1.0).sqrt(), cos: cos2.min(1.0).sqrt() })
    }

    /// The amplitude `π/2`.
    pub const fn right() -> Self {
        Self { sin: 1.0, cos: 0.0 }
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    pub fn angle(&self) -> f64 {
        self.sin.atan2(self.cos)
    }
}

fn check_kc(kc: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&kc) {
        return Err(domain(format!("complementary parameter 1 − k = {kc} outside [0, 1]")));
    }
    Ok(())
}

/// `F(u, k)` with `kc = 1 − k ∈ [0, 1]`.
pub fn incomplete_f(amp: Amplitude, kc: f64) -> Result<f64> {
    check_kc(kc)?;
    f_raw(amp, kc)
}

fn f_raw(amp: Amplitude, kc: f64) -> Result<f64> {
    let (s, c) = (amp.sin, amp.cos);
    if s == 0.0 {
        return Ok(0.0);
    }
    let delta2 = c * c + kc * s * s;
    if !(delta2 > 0.0) {
        return Err(domain("F(u, k) diverges: k sin²u ≥ 1"));
    }
    Ok(s * carlson_rf(c * c, delta2, 1.0)?)
}

/// `E(u, k)` with `kc = 1 − k ∈ [0, 1]`.
pub fn incomplete_e(amp: Amplitude, kc: f64) -> Result<f64> {
    check_kc(kc)?;
    let (s, c) = (amp.sin, amp.cos);
    if s == 0.0 {
        return Ok(0.0);
    }
    if kc == 0.0 {
        return Ok(s);
    }
    let k = 1.0 - kc;
    let delta2 = c * c + kc * s * s;
    let rf = carlson_rf(c * c, delta2, 1.0)?;
    let rd = carlson_rd(c * c, delta2, 1.0)?;
    Ok(s * rf - k / 3.0 * s * s * s * rd)
}

/// `E(u, k) − sin u`, accurate to full relative precision even when
/// `kc = 1 − k` is tiny and `u` is close to `π/2`.
///
/// `E(u, 1) = sin u`, so this is the part of `E` that carries the information
/// about `kc`; it equals
///
/// ```text
/// kc ∫_{π/2−u}^{π/2} cos²ψ / (√(sin²ψ + kc cos²ψ) + sin ψ) dψ
/// ```
///
/// which is evaluated by Gauss–Legendre panels after the substitution
/// `ψ = √kc sinh w` that flattens the peak at `ψ ~ √kc`.
pub fn e_minus_sin(amp: Amplitude, kc: f64) -> Result<f64> {
    check_kc(kc)?;
    if kc == 0.0 || amp.sin == 0.0 {
        return Ok(0.0);
    }
    let root = kc.sqrt();
    let psi0 = amp.cos.atan2(amp.sin);
    let w_lo = (psi0 / root).asinh();
    let w_hi = (FRAC_PI_2 / root).asinh();
    let span = w_hi - w_lo;
    if span <= 0.0 {
        return Ok(0.0);
    }
    let panels = (span / PANEL_WIDTH).ceil().max(1.0) as usize;
    let width = span / panels as f64;
    let (nodes, weights) = gauss_legendre();
    let mut total = 0.0;
    for p in 0..panels {
        let mid = w_lo + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (x, wt) in nodes.iter().zip(weights) {
            let w = mid + half * x;
            let psi = root * w.sinh();
            let (sp, cp) = psi.sin_cos();
            let delta = (sp * sp + kc * cp * cp).sqrt();
            acc += wt * cp * cp / (delta + sp) * w.cosh();
        }
        total += half * acc;
    }
    Ok(kc * root * total)
}

const PANEL_WIDTH: f64 = 2.0;
const GL_ORDER: usize = 20;

fn gauss_legendre() -> (&'static [f64], &'static [f64]) {
    static TABLE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (x, w) = TABLE.get_or_init(|| {
        let n = GL_ORDER;
        let mut xs = Vec::with_capacity(n);
        let mut ws = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-17 {
                    break;
                }
            }
            xs.push(x);
            ws.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        (xs, ws)
    });
    (x, w)
}

/// Complete integral `K = F(π/2, k)` with `kc = 1 − k ∈ (0, 1]`.
pub fn complete_k(kc: f64) -> Result<f64> {
    check_kc(kc)?;
    if kc == 0.0 {
        return Err(domain("K(k) diverges at k = 1"));
    }
    carlson_rf(0.0, kc, 1.0)
}

/// Complete integral `E(π/2, k)` with `kc = 1 − k ∈ [0, 1]`.
pub fn complete_e(kc: f64) -> Result<f64> {
    incomplete_e(Amplitude::right(), kc)
}

fn check_angle(u: f64) -> Result<Amplitude> {
    if u.is_nan() {
        return Err(domain("amplitude is NaN"));
    }
    Amplitude::from_angle(u)
}

/// `F(u, k)` for `0 ≤ u ≤ π/2`, `k ≥ 0` and `k sin²u < 1`.
pub fn ellip_f(u: f64, k: f64) -> Result<f64> {
    let amp = check_angle(u)?;
    if !(k >= 0.0) {
        return Err(domain(format!("parameter k = {k} must be non-negative")));
    }
    f_raw(amp, 1.0 - k)
}

/// `E(u, k)` for `0 ≤ u ≤ π/2` and `0 ≤ k ≤ 1`.
pub fn ellip_e(u: f64, k: f64) -> Result<f64> {
    let amp = check_angle(u)?;
    if !(0.0..=1.0).contains(&k) {
        return Err(domain(format!("parameter k = {k} outside [0, 1]")));
    }
    incomplete_e(amp, 1.0 - k)
}

/// Leading-order asymptotic forms of `F` and `E` as the parameter approaches one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expansion {
    /// `F(π/2, k) ≈ −½ log(1 − k)`
    FComp,
    /// `E(π/2, k) ≈ 1 + (k − 1)/4 · log(1 − k)`
    EComp,
    /// `F(arcsin s, k) ≈ artanh s`, with `s` bounded away from one
    FEx,
    /// `E(arcsin s, k) ≈ s − (k − 1)/2 · artanh s`, with `s` bounded away from one
    EEx,
    /// `F(arcsin s, k) ≈ −½ log(1 − k)`, for `s` close to one
    FHBig,
    /// `E(arcsin s, k) ≈ 1 + (k − 1)/4 · log(1 − k)`, for `s` close to one
    EHBig,
}

/// Evaluates the displayed leading terms of an [`Expansion`] at amplitude
/// angle `u` and parameter `k`. Remainder terms are dropped.
pub fn expansion_value(which: Expansion, u: f64, k: f64) -> Result<f64> {
    let amp = check_angle(u)?;
    if !(0.0..=1.0).contains(&k) {
        return Err(domain(format!("parameter k = {k} outside [0, 1]")));
    }
    let kc = 1.0 - k;
    // (k − 1) log(1 − k) → 0 as k → 1
    let log_term = |kc: f64| if kc == 0.0 { 0.0 } else { -kc * kc.ln() };
    match which {
        Expansion::FComp | Expansion::EComp => {
            if amp.cos > ANGLE_SLACK {
                return Err(domain("complete-integral expansions need u = π/2"));
            }
            if which == Expansion::FComp {
                if kc == 0.0 {
                    return Err(domain("F(π/2, k) diverges at k = 1"));
                }
                Ok(-0.5 * kc.ln())
            } else {
                Ok(1.0 + 0.25 * log_term(kc))
            }
        }
        Expansion::FEx | Expansion::EEx => {
            let s = amp.sin;
            if s >= 1.0 {
                return Err(domain("expansion in artanh(sin u) needs sin u < 1"));
            }
            if which == Expansion::FEx {
                Ok(s.atanh())
            } else {
                Ok(s + 0.5 * kc * s.atanh())
            }
        }
        Expansion::FHBig => {
            if kc == 0.0 {
                return Err(domain("−½ log(1 − k) diverges at k = 1"));
            }
            Ok(-0.5 * kc.ln())
        }
        Expansion::EHBig => Ok(1.0 + 0.25 * log_term(kc)),
    }
}
