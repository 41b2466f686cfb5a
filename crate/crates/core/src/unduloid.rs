//! Unduloids: constant-mean-curvature surfaces of revolution.
//!
//! The meridian of an unduloid with neck radius `a` and bulge radius `c` is
//! the elliptic catenary
//!
//! ```text
//! x(t) = a F(u, k) + c E(u, k),   z(t) = √(½(c² − a²) sin t + ½(c² + a²)),
//! u = t/2 − π/4,   k = (c² − a²)/c²,
//! ```
//!
//! with `t ∈ [−π/2, 3π/2]` covering one period, neck to neck. Its mean
//! curvature is `1/(a + c)`. The complementary parameter `1 − k = a²/c²` is
//! formed directly so that thin necks (`a ≪ c`) lose no precision.
//!
//! Arc quantities from the bulge (`u = 0`) to amplitude `u`, with
//! `Δ = √(1 − k sin²u)`:
//!
//! | quantity | value |
//! |---|---|
//! | abscissa | `a F + c E` |
//! | arclength | `(a + c) u` |
//! | lateral area | `2π c (a + c) E` |
//! | volume | `(π/3)[(2c(a² + c²) + 3ac²) E − a²c F + c(c² − a²) sin u cos u Δ]` |

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::elliptic::{self, Amplitude};
use crate::error::{domain, Error, Result};

/// The three admissible two-charge geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseKind {
    /// The section between the charges stays on the bulge side of both necks.
    Case1,
    /// The section spans one full period.
    Case2,
    /// The section passes through a neck on each side.
    Case3,
}

impl CaseKind {
    pub const ALL: [CaseKind; 3] = [CaseKind::Case1, CaseKind::Case2, CaseKind::Case3];
}

/// An unduloid section held between two charge balls of radius `eps`, touching
/// each tangentially at height `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnduloidSection {
    pub a: f64,
    pub c: f64,
    pub h: f64,
    /// Profile parameter of the contact on the descending branch, in `[π/2, 3π/2]`.
    pub t0: f64,
    pub case_kind: CaseKind,
    pub eps: f64,
}

impl UnduloidSection {
    /// Builds the section for bulge radius `c` and contact height `h`.
    pub fn new(case_kind: CaseKind, c: f64, h: f64, eps: f64) -> Result<Self> {
        let (a, t0) = contact_params(c, h, eps)?;
        Ok(Self { a, c, h, t0, case_kind, eps })
    }

    pub fn mean_curvature(&self) -> f64 {
        1.0 / (self.a + self.c)
    }

    /// `1 − k = a²/c²`.
    pub fn kc(&self) -> f64 {
        param_c(self.a, self.c)
    }

    /// Amplitude `u₀ = t₀/2 − π/4` of the contact, built from its exact
    /// `sin²` and `cos²`.
    pub fn contact_amplitude(&self) -> Result<Amplitude> {
        contact_amplitude(self.a, self.c, self.h)
    }
}

/// `1 − k = (a/c)²`.
pub(crate) fn param_c(a: f64, c: f64) -> f64 {
    let r = a / c;
    r * r
}

fn check_radii(a: f64, c: f64) -> Result<()> {
    if !(a >= 0.0) || !(c > 0.0) || !a.is_finite() || !c.is_finite() {
        return Err(domain(format!("radii a = {a}, c = {c} must satisfy 0 ≤ a, 0 < c")));
    }
    if a > c {
        return Err(domain(format!("neck a = {a} exceeds bulge c = {c}")));
    }
    Ok(())
}

/// `(x, z)` on the profile at `u ∈ [−π/2, π/2]`, odd in `u`.
fn point_at_u(a: f64, c: f64, u: f64) -> Result<(f64, f64)> {
    let amp = Amplitude::from_angle(u.abs())?;
    let (s, co) = (amp.sin(), amp.cos());
    // z² = c² − (c² − a²) sin²u, written to stay accurate near the neck
    let z = (a * a + (c - a) * (c + a) * co * co).sqrt();
    let x = if a == 0.0 {
        c * s
    } else {
        let kc = param_c(a, c);
        a * elliptic::incomplete_f(amp, kc)? + c * elliptic::incomplete_e(amp, kc)?
    };
    Ok((x.copysign(u), z))
}

/// Point `(x, z)` of the elliptic catenary with neck `a` and bulge `c` at
/// parameter `t ∈ [−π/2, 3π/2]`. `x = 0` at the bulge `t = π/2`.
///
/// ```
/// use charged_drop::unduloid::profile_point;
/// let (x, z) = profile_point(0.1, 1.0, 0.0).unwrap();
/// assert!((z - 0.505f64.sqrt()).abs() < 1e-15);
/// assert!(x < 0.0);
/// ```
pub fn profile_point(a: f64, c: f64, t: f64) -> Result<(f64, f64)> {
    check_radii(a, c)?;
    if !(-FRAC_PI_2..=3.0 * FRAC_PI_2).contains(&t) {
        return Err(domain(format!("profile parameter t = {t} outside [−π/2, 3π/2]")));
    }
    point_at_u(a, c, (0.5 * t - FRAC_PI_4).clamp(-FRAC_PI_2, FRAC_PI_2))
}

/// Abscissa for arbitrary `u`, continuing periodically through the necks.
/// Needs `a > 0`.
fn abscissa_ext(a: f64, c: f64, u: f64, half_period: f64) -> Result<f64> {
    let n = (u / PI).round();
    let r = u - n * PI;
    let (x, _) = point_at_u(a, c, r.clamp(-FRAC_PI_2, FRAC_PI_2))?;
    Ok(x + 2.0 * n * half_period)
}

/// Neck radius `a` and contact parameter `t₀` for an unduloid of bulge `c`
/// meeting a ball of radius `eps` tangentially at height `h`.
///
/// ```
/// use charged_drop::unduloid::contact_params;
/// let (a, t0) = contact_params(1.0, 0.01, 0.01).unwrap();
/// assert!((a - 0.01).abs() < 1e-15);
/// assert!(t0 >= std::f64::consts::FRAC_PI_2);
/// ```
pub fn contact_params(c: f64, h: f64, eps: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) || !(eps >= h) || !(c > eps) {
        return Err(domain(format!("need 0 < h ≤ ε < c, got h = {h}, ε = {eps}, c = {c}")));
    }
    let denom = c * eps - h * h;
    if !(denom > 0.0) {
        return Err(Error::DegenerateGeometry(format!("c ε = {} ≤ h² = {}", c * eps, h * h)));
    }
    let a = if h == eps { eps } else { (c - eps) * h * h / denom };
    if !(0.0..=h).contains(&a) {
        return Err(Error::DegenerateGeometry(format!("neck a = {a} outside [0, h = {h}]")));
    }
    let amp = contact_amplitude(a, c, h)?;
    // t₀ = 2u₀ + π/2 with u₀ the contact amplitude
    let t0 = 2.0 * amp.angle() + FRAC_PI_2;
    Ok((a, t0))
}

/// Amplitude at which the profile passes height `h`, from
/// `sin²u₀ = (c² − h²)/(c² − a²)` and `cos²u₀ = (h² − a²)/(c² − a²)`.
pub fn contact_amplitude(a: f64, c: f64, h: f64) -> Result<Amplitude> {
    let spread = (c - a) * (c + a);
    if !(spread > 0.0) {
        // cylinder: every height equals c
        return Amplitude::from_angle(0.0);
    }
    let sin2 = ((c - h) * (c + h) / spread).clamp(0.0, 1.0);
    let cos2 = ((h - a) * (h + a) / spread).clamp(0.0, 1.0);
    let norm = sin2 + cos2;
    Amplitude::from_squares(sin2 / norm, cos2 / norm)
}

/// Length along the axis of one full period, `2(aK + cE)`.
pub fn full_period_length(a: f64, c: f64) -> Result<f64> {
    check_radii(a, c)?;
    if a == 0.0 {
        return Ok(2.0 * c);
    }
    let kc = param_c(a, c);
    Ok(2.0 * (a * elliptic::complete_k(kc)? + c * elliptic::complete_e(kc)?))
}

/// Lateral area of one full period, `4π c (a + c) E(π/2, k)`.
///
/// ```
/// use charged_drop::unduloid::full_period_area;
/// use std::f64::consts::PI;
/// assert!((full_period_area(0.0, 1.0).unwrap() - 4.0 * PI).abs() < 1e-15);
/// ```
pub fn full_period_area(a: f64, c: f64) -> Result<f64> {
    check_radii(a, c)?;
    Ok(4.0 * PI * c * (a + c) * elliptic::complete_e(param_c(a, c))?)
}

/// Enclosed volume of one full period,
/// `(2π/3)[(2c(a² + c²) + 3ac²) E(π/2, k) − a²c K]`.
pub fn full_period_volume(a: f64, c: f64) -> Result<f64> {
    check_radii(a, c)?;
    if a == 0.0 {
        return Ok(4.0 / 3.0 * PI * c * c * c);
    }
    let kc = param_c(a, c);
    let q = 2.0 * c * (a * a + c * c) + 3.0 * a * c * c;
    let bracket = q * elliptic::complete_e(kc)? - a * a * c * elliptic::complete_k(kc)?;
    Ok(2.0 * PI / 3.0 * bracket)
}

/// Elliptic building blocks of a profile arc from the bulge to amplitude `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcIntegrals {
    /// `F(u, k)`
    pub f: f64,
    /// `E(u, k)`
    pub e: f64,
    /// Axial extent `a F + c E`.
    pub length: f64,
    /// Lateral area `2π c (a + c) E`.
    pub area: f64,
    /// Enclosed volume.
    pub volume: f64,
}

/// Arc integrals from the bulge to amplitude `amp` (`u ∈ [0, π/2]`).
pub fn arc_integrals(a: f64, c: f64, amp: Amplitude) -> Result<ArcIntegrals> {
    check_radii(a, c)?;
    let kc = param_c(a, c);
    let (s, co) = (amp.sin(), amp.cos());
    let e = elliptic::incomplete_e(amp, kc)?;
    let f = if a == 0.0 {
        // only ever multiplied by a
        if co == 0.0 {
            0.0
        } else {
            elliptic::incomplete_f(amp, kc)?
        }
    } else {
        elliptic::incomplete_f(amp, kc)?
    };
    let delta = (co * co + kc * s * s).sqrt();
    let q = 2.0 * c * (a * a + c * c) + 3.0 * a * c * c;
    let volume = PI / 3.0 * (q * e - a * a * c * f + c * (c - a) * (c + a) * s * co * delta);
    Ok(ArcIntegrals { f, e, length: a * f + c * e, area: 2.0 * PI * c * (a + c) * e, volume })
}

/// Deviation of the finite-difference mean curvature of the profile at `t`
/// from the exact `1/(a + c)`.
///
/// Meridian and parallel curvatures are taken from fourth-order central
/// differences of `(x(t), z(t))`; `H = (κ₁ + κ₂)/2`.
pub fn cmc_residual(a: f64, c: f64, t: f64) -> Result<f64> {
    check_radii(a, c)?;
    if !(-FRAC_PI_2..=3.0 * FRAC_PI_2).contains(&t) {
        return Err(domain(format!("profile parameter t = {t} outside [−π/2, 3π/2]")));
    }
    if a == c {
        // cylinder: κ₁ = 0, κ₂ = 1/c exactly
        return Ok((0.5 / c - 1.0 / (a + c)).abs());
    }
    let u = 0.5 * t - FRAC_PI_4;
    let dist_to_extremum = (u.abs() - FRAC_PI_2).abs().min(u.abs());
    if dist_to_extremum < 1e-9 {
        return Err(domain(format!("t = {t} is a profile extremum")));
    }
    if a == 0.0 && (FRAC_PI_2 - u.abs()) < 1e-2 {
        return Err(domain("sphere profile degenerates at the axis"));
    }
    let half = if a == 0.0 { 0.0 } else { full_period_length(a, c)? / 2.0 };
    let eval = |u: f64| -> Result<(f64, f64)> {
        if a == 0.0 {
            Ok((c * u.sin(), c * u.cos().abs()))
        } else {
            let co = u.cos();
            let z = (a * a + (c - a) * (c + a) * co * co).sqrt();
            Ok((abscissa_ext(a, c, u, half)?, z))
        }
    };
    // derivatives in t, stencil in u with du = dt/2
    let dt = 2e-3;
    let mut pts = [(0.0, 0.0); 5];
    for (i, p) in pts.iter_mut().enumerate() {
        *p = eval(u + 0.5 * dt * (i as f64 - 2.0))?;
    }
    let d1 = |g: &dyn Fn(usize) -> f64| (g(0) - 8.0 * g(1) + 8.0 * g(3) - g(4)) / (12.0 * dt);
    let d2 = |g: &dyn Fn(usize) -> f64| (-g(0) + 16.0 * g(1) - 30.0 * g(2) + 16.0 * g(3) - g(4)) / (12.0 * dt * dt);
    let (x1, z1) = (d1(&|i| pts[i].0), d1(&|i| pts[i].1));
    let (x2, z2) = (d2(&|i| pts[i].0), d2(&|i| pts[i].1));
    let z = pts[2].1;
    let speed = (x1 * x1 + z1 * z1).sqrt();
    let k_meridian = -(z2 * x1 - z1 * x2) / (speed * speed * speed);
    let k_parallel = x1 / (z * speed);
    Ok((0.5 * (k_meridian + k_parallel) - 1.0 / (a + c)).abs())
}

/// One sampled profile point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub t: f64,
    pub x: f64,
    pub z: f64,
}

/// `n_points ≥ 2` equally spaced samples of one full period,
/// `t ∈ [−π/2, 3π/2]`.
pub fn sample_profile(a: f64, c: f64, n_points: usize) -> Result<Vec<ProfileSample>> {
    sample_profile_between(a, c, -FRAC_PI_2, 3.0 * FRAC_PI_2, n_points)
}

/// `n_points ≥ 2` equally spaced samples with `t ∈ [t_lo, t_hi]`.
pub fn sample_profile_between(a: f64, c: f64, t_lo: f64, t_hi: f64, n_points: usize) -> Result<Vec<ProfileSample>> {
    if n_points < 2 {
        return Err(domain("need at least two profile samples"));
    }
    if !(t_lo < t_hi) {
        return Err(domain(format!("empty parameter range [{t_lo}, {t_hi}]")));
    }
    (0..n_points)
        .map(|i| {
            let t = if i + 1 == n_points { t_hi } else { t_lo + (t_hi - t_lo) * i as f64 / (n_points - 1) as f64 };
            let (x, z) = profile_point(a, c, t)?;
            Ok(ProfileSample { t, x, z })
        })
        .collect()
}

/// Writes samples as CSV with header `t,x,z`.
pub fn write_profile_csv<W: Write>(mut w: W, samples: &[ProfileSample]) -> io::Result<()> {
    writeln!(w, "t,x,z")?;
    for s in samples {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", s.t, s.x, s.z)?;
    }
    Ok(())
}
