//! Closed-form volume constraints and energies of the three case geometries.
//!
//! The total energy of every candidate is `4π` plus something of order `γε³`,
//! and the volume constraint pins `c` to `1 − O(h²/ε)`. Both are therefore
//! evaluated as *excesses*: the unknown is `δ = 1 − c`, the constraint is
//! written as (volume expression − 2) with the constant parts cancelled
//! analytically, and the energy as `(E − 4π)`. The elliptic integrals enter
//! through `E(u, k) − sin u` and `1 − sin u`, which are small and known to full
//! relative precision.

use crate::elliptic::{self, Amplitude};
use crate::error::{domain, Result};
use crate::unduloid::{contact_amplitude, param_c, CaseKind};

/// Everything a case formula needs at one `(h, ε, δ)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Terms {
    pub delta: f64,
    pub c: f64,
    pub a: f64,
    pub h: f64,
    pub eps: f64,
    /// `√(ε² − h²)`
    pub s: f64,
    pub amp: Amplitude,
    /// `F(u₀, k)`
    pub f: f64,
    /// `E(u₀, k) − sin u₀`
    pub g: f64,
    /// `1 − E(u₀, k)`
    pub d: f64,
    /// `K(k)`
    pub k_full: f64,
    /// `E(π/2, k) − 1`
    pub gc: f64,
    /// `2c(a² + c²) + 3ac² − 2`
    pub q_minus_2: f64,
    /// `h √((c² − h²)(h² − a²))`
    pub h_root: f64,
    /// `2ε³ − √(ε² − h²)(2ε² + h²)`
    pub cap_volume: f64,
}

impl Terms {
    pub fn new(h: f64, eps: f64, delta: f64) -> Result<Self> {
        let c = 1.0 - delta;
        if !(h > 0.0 && h <= eps && c > eps) {
            return Err(domain(format!("need 0 < h ≤ ε < c, got h = {h}, ε = {eps}, c = {c}")));
        }
        let denom = c * eps - h * h;
        let a = if h == eps { eps } else { (c - eps) * h * h / denom };
        let kc = param_c(a, c);
        let amp = contact_amplitude(a, c, h)?;
        let (sn, cs) = (amp.sin(), amp.cos());
        let f = elliptic::incomplete_f(amp, kc)?;
        let g = elliptic::e_minus_sin(amp, kc)?;
        let one_minus_sin = cs * cs / (1.0 + sn);
        let k_full = elliptic::complete_k(kc)?;
        let gc = elliptic::e_minus_sin(Amplitude::right(), kc)?;
        // 2c³ − 2 = −2δ(3 − 3δ + δ²)
        let q_minus_2 = -2.0 * delta * (3.0 - 3.0 * delta + delta * delta) + 2.0 * a * a * c + 3.0 * a * c * c;
        let s = ((eps - h) * (eps + h)).sqrt();
        let h_root = h * ((c - h) * (c + h) * (h - a) * (h + a)).max(0.0).sqrt();
        let h2 = h * h;
        let cap_volume = h2 * h2 * (3.0 * eps * eps + h2) / (2.0 * eps * eps * eps + s * (2.0 * eps * eps + h2));
        Ok(Self { delta, c, a, h, eps, s, amp, f, g, d: one_minus_sin - g, k_full, gc, q_minus_2, h_root, cap_volume })
    }

    fn q(&self) -> f64 {
        self.q_minus_2 + 2.0
    }

    /// `c² − 1`
    fn c2_minus_1(&self) -> f64 {
        -self.delta * (2.0 - self.delta)
    }

    /// `ε(ε − √(ε² − h²))`
    fn cap_area(&self) -> f64 {
        self.eps * self.h * self.h / (self.eps + self.s)
    }

    /// `E(u₀, k)`
    fn e(&self) -> f64 {
        self.amp.sin() + self.g
    }

    /// `2E(π/2, k) − E(u₀, k) − 1`
    fn b3(&self) -> f64 {
        self.d + 2.0 * self.gc
    }

    /// Volume constraint residual in the scaled form (volume·3/(2π) − 2).
    pub fn volume_residual(&self, case: CaseKind) -> f64 {
        let (a, c) = (self.a, self.c);
        let eps3 = self.eps * self.eps * self.eps;
        match case {
            CaseKind::Case1 => self.q_minus_2 - self.q() * self.d + self.cap_volume + self.h_root - a * a * c * self.f,
            CaseKind::Case2 => self.q_minus_2 + self.q() * self.gc - a * a * c * self.k_full + 2.0 * eps3,
            CaseKind::Case3 => {
                // 2ε³ + s(2ε² + h²) = 4ε³ − cap_volume
                self.q_minus_2 + self.q() * self.b3() - a * a * c * (2.0 * self.k_full - self.f) - self.h_root
                    + 4.0 * eps3
                    - self.cap_volume
            }
        }
    }

    /// Perimeter excess `P/(4π) − 1`.
    pub fn perimeter_excess(&self, case: CaseKind) -> f64 {
        let (a, c) = (self.a, self.c);
        let base = self.c2_minus_1() + a * c;
        match case {
            CaseKind::Case1 => base - (a + c) * c * self.d + self.cap_area(),
            CaseKind::Case2 => base + (a + c) * c * self.gc + self.eps * self.eps,
            CaseKind::Case3 => base + (a + c) * c * self.b3() + 2.0 * self.eps * self.eps - self.cap_area(),
        }
    }

    /// Distance between the charge centres.
    pub fn separation(&self, case: CaseKind) -> f64 {
        let (a, c) = (self.a, self.c);
        match case {
            CaseKind::Case1 => 2.0 * (a * self.f + c * self.e() - self.s),
            CaseKind::Case2 => 2.0 * (a * self.k_full + c * (1.0 + self.gc)),
            CaseKind::Case3 => {
                2.0 * (self.s + 2.0 * a * self.k_full + 2.0 * c * (1.0 + self.gc) - a * self.f - c * self.e())
            }
        }
    }
}

/// The volume constraint assembled term by term as the closed form reads,
/// `(right-hand side) − 2`, without any cancellation.
pub(crate) fn literal_volume_residual(case: CaseKind, h: f64, eps: f64, c: f64) -> Result<f64> {
    let (a, t0) = crate::unduloid::contact_params(c, h, eps)?;
    let k = (c * c - a * a) / (c * c);
    let u0 = (t0 / 2.0 - std::f64::consts::FRAC_PI_4).clamp(0.0, std::f64::consts::FRAC_PI_2);
    let fu = elliptic::ellip_f(u0, k)?;
    let eu = elliptic::ellip_e(u0, k)?;
    let kk = if a == 0.0 { 0.0 } else { elliptic::complete_k(param_c(a, c))? };
    let ek = elliptic::ellip_e(std::f64::consts::FRAC_PI_2, k)?;
    let q = 2.0 * c * (a * a + c * c) + 3.0 * a * c * c;
    let s = (eps * eps - h * h).sqrt();
    let arg = (2.0 * h * h - c * c - a * a) / (c * c - a * a);
    let root = h * (c * c - a * a) / 2.0 * (1.0 - arg * arg).max(0.0).sqrt();
    let eps3 = eps * eps * eps;
    let rhs = match case {
        CaseKind::Case1 => 2.0 * eps3 - s * (2.0 * eps * eps + h * h) + root - a * a * c * fu + q * eu,
        CaseKind::Case2 => q * ek - a * a * c * kk + 2.0 * eps3,
        CaseKind::Case3 => {
            q * (2.0 * ek - eu) - a * a * c * (2.0 * kk - fu) - root + 2.0 * eps3 + s * (2.0 * eps * eps + h * h)
        }
    };
    Ok(rhs - 2.0)
}
