//! Many charges inside a spherical drop.
//!
//! The drop is fixed to a ball of radius `R`; each charge is a ball of radius
//! `ε` that must lie inside it and must not overlap any other. Energies are
//! written in terms of the Riesz sum `S(X) = Σ_{i<j} 1/|xᵢ − xⱼ|`, the Coulomb
//! energy being `γ ε³ S`.

mod optimize;
mod uniformity;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use optimize::{optimize, optimize_report, OptimizeOptions, OptimizeReport};
pub use uniformity::{cap_set, uniformity_stats, write_uniformity_csv, Cap, UniformityStats};

pub type Point = [f64; 3];

/// Densest sphere packing fraction, `π/√18`.
pub const PACKING_DENSITY: f64 = 0.740_480_489_693_061;

/// The host drop: a ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HostBall {
    pub center: Point,
    pub radius: f64,
}

/// `N` charge centres with radius `eps` in a host ball.
///
/// Serialized as `{"eps": …, "R": …, "centers": [[x, y, z], …]}`; the host is
/// centred at the origin in that form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "ConfigRepr", into = "ConfigRepr")]
pub struct ChargeConfig {
    pub centers: Vec<Point>,
    pub eps: f64,
    pub host: HostBall,
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    eps: f64,
    #[serde(rename = "R")]
    r: f64,
    centers: Vec<Point>,
}

impl From<ConfigRepr> for ChargeConfig {
    fn from(r: ConfigRepr) -> Self {
        ChargeConfig { centers: r.centers, eps: r.eps, host: HostBall { center: [0.0; 3], radius: r.r } }
    }
}

impl From<ChargeConfig> for ConfigRepr {
    fn from(c: ChargeConfig) -> Self {
        let o = c.host.center;
        ConfigRepr {
            eps: c.eps,
            r: c.host.radius,
            centers: c.centers.iter().map(|p| [p[0] - o[0], p[1] - o[1], p[2] - o[2]]).collect(),
        }
    }
}

impl ChargeConfig {
    /// Config in the ball of radius `r` about the origin.
    pub fn new(centers: Vec<Point>, eps: f64, r: f64) -> Self {
        Self { centers, eps, host: HostBall { center: [0.0; 3], radius: r } }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Largest centre-to-centre distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.centers.iter().enumerate() {
            for q in &self.centers[i + 1..] {
                d = d.max(dist(p, q));
            }
        }
        d
    }

    /// Smallest centre-to-centre distance (`∞` for fewer than two charges).
    pub fn min_separation(&self) -> f64 {
        let mut d = f64::INFINITY;
        for (i, p) in self.centers.iter().enumerate() {
            for q in &self.centers[i + 1..] {
                d = d.min(dist(p, q));
            }
        }
        d
    }
}

pub(crate) fn dist(p: &Point, q: &Point) -> f64 {
    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// `Σ_{i<j} 1/|xᵢ − xⱼ|`.
pub fn riesz_sum(centers: &[Point]) -> Result<f64> {
    let mut s = 0.0;
    for (i, p) in centers.iter().enumerate() {
        for (j, q) in centers.iter().enumerate().skip(i + 1) {
            let r = dist(p, q);
            if r == 0.0 {
                return Err(Error::Coincident { i, j });
            }
            s += 1.0 / r;
        }
    }
    Ok(s)
}

/// `γ ε³ Σ_{i<j} 1/|xᵢ − xⱼ|`.
///
/// ```
/// use charged_drop::charges::{coulomb_energy, ChargeConfig};
/// let cfg = ChargeConfig::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], 1.0, 3.0);
/// assert_eq!(coulomb_energy(&cfg, 1.0).unwrap(), 1.0);
/// ```
pub fn coulomb_energy(config: &ChargeConfig, gamma: f64) -> Result<f64> {
    let e3 = config.eps * config.eps * config.eps;
    Ok(gamma * e3 * riesz_sum(&config.centers)?)
}

/// A broken admissibility constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// Charges `i` and `j` are closer than `2ε`; `margin = 2ε − distance`.
    Overlap { i: usize, j: usize, distance: f64, margin: f64 },
    /// Charge `i` pokes out of the host; `margin = |xᵢ − centre| − (R − ε)`.
    Containment { i: usize, radius: f64, margin: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { i, j, distance, margin } => {
                write!(f, "charges {i} and {j} overlap: distance {distance:e}, short by {margin:e}")
            }
            Violation::Containment { i, radius, margin } => {
                write!(f, "charge {i} at radius {radius:e} sticks out by {margin:e}")
            }
        }
    }
}

/// Every violated constraint; empty iff the configuration is admissible.
/// Both constraints are closed: touching is allowed.
pub fn validate(config: &ChargeConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let eps = config.eps;
    let limit = config.host.radius - eps;
    for (i, p) in config.centers.iter().enumerate() {
        let radius = dist(p, &config.host.center);
        if radius > limit {
            out.push(Violation::Containment { i, radius, margin: radius - limit });
        }
    }
    for (i, p) in config.centers.iter().enumerate() {
        for (j, q) in config.centers.iter().enumerate().skip(i + 1) {
            let distance = dist(p, q);
            if distance < 2.0 * eps {
                out.push(Violation::Overlap { i, j, distance, margin: 2.0 * eps - distance });
            }
        }
    }
    out
}

/// Whether `n` balls of radius `eps` can fit in a ball of radius `r` by volume
/// at the densest packing fraction.
pub fn packing_feasible(n: usize, eps: f64, r: f64) -> bool {
    if n == 0 {
        return true;
    }
    if !(eps > 0.0) || !(r >= eps) {
        return false;
    }
    let ratio = eps / r;
    n as f64 * ratio * ratio * ratio <= PACKING_DENSITY
}

/// Energy change from pulling each charge (with its ball) out to infinity:
/// `8πε² − γε³ Σ_{j≠i} 1/|xᵢ − xⱼ|`. Returns the minimum and its index.
///
/// A negative margin means some charge prefers to leave.
pub fn evaporation_margin(config: &ChargeConfig, gamma: f64) -> (f64, usize) {
    let eps = config.eps;
    let base = 8.0 * PI * eps * eps;
    let e3 = eps * eps * eps;
    let mut best = (f64::INFINITY, 0);
    for (i, p) in config.centers.iter().enumerate() {
        let s: f64 = config.centers.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| 1.0 / dist(p, q)).sum();
        let m = base - gamma * e3 * s;
        if m < best.0 {
            best = (m, i);
        }
    }
    best
}

/// `F_N = (2/N²) Σ_{i<j} 1/|xᵢ − xⱼ|`, with lengths in units of the host
/// radius.
pub fn scaled_riesz(config: &ChargeConfig) -> Result<f64> {
    let n = config.len();
    if n < 2 {
        return Err(domain("scaled Riesz energy needs at least two charges"));
    }
    let s = riesz_sum(&config.centers)? * config.host.radius;
    Ok(2.0 / (n * n) as f64 * s)
}

/// One large ball holding the first charge plus `n − 1` bare charge balls
/// far away: `4π(r₁² + ε²(n − 1))`, `r₁ = (1 − (n − 1)ε³)^{1/3}`.
pub fn upper_bound_energy(n: usize, eps: f64) -> f64 {
    let m = n.saturating_sub(1) as f64;
    let eps3 = eps * eps * eps;
    let r1_sq = (2.0 / 3.0 * (-m * eps3).max(-1.0).ln_1p()).exp();
    4.0 * PI * (r1_sq + eps * eps * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let cfg = ChargeConfig::new(vec![[0.5, 0.0, 0.0]], 0.01, 1.0);
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(s, r#"{"eps":0.01,"R":1.0,"centers":[[0.5,0.0,0.0]]}"#);
        let back: ChargeConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn single_charge_has_no_energy() {
        let cfg = ChargeConfig::new(vec![[0.1, 0.2, 0.3]], 0.01, 1.0);
        assert_eq!(coulomb_energy(&cfg, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn coincident_points_error() {
        let cfg = ChargeConfig::new(vec![[0.1; 3], [0.0; 3], [0.1; 3]], 0.01, 1.0);
        assert_eq!(coulomb_energy(&cfg, 1.0), Err(Error::Coincident { i: 0, j: 2 }));
    }

    #[test]
    fn violations() {
        let eps = 0.1;
        let touching = ChargeConfig::new(vec![[0.0; 3], [0.2, 0.0, 0.0]], eps, 1.0);
        assert!(validate(&touching).is_empty());
        let close = ChargeConfig::new(vec![[0.0; 3], [0.19, 0.0, 0.0]], eps, 1.0);
        match validate(&close).as_slice() {
            [Violation::Overlap { i: 0, j: 1, margin, .. }] => assert!((margin - 0.01).abs() < 1e-15),
            v => panic!("{v:?}"),
        }
        let out = ChargeConfig::new(vec![[0.95, 0.0, 0.0]], eps, 1.0);
        assert!(matches!(validate(&out).as_slice(), [Violation::Containment { i: 0, .. }]));
    }

    #[test]
    fn evaporation_example() {
        let cfg = ChargeConfig::new(vec![[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], 0.01, 2.0);
        let (m, _) = evaporation_margin(&cfg, 100.0);
        assert!((m - (8.0 * PI * 1e-4 - 1e-6 * 100.0 / 2.0)).abs() < 1e-16);
    }

    #[test]
    fn upper_bound_examples() {
        assert!((upper_bound_energy(1, 0.3) - 4.0 * PI).abs() < 1e-15);
        let v = upper_bound_energy(100, 0.01);
        let want = 4.0 * PI * ((1.0 - 99e-6f64).powf(2.0 / 3.0) + 1e-4 * 99.0);
        assert!((v - want).abs() < 1e-13);
        assert!(v < 4.0 * PI * (1.0 + 1e-4 * 100.0));
    }

    #[test]
    fn packing() {
        assert!(packing_feasible(100, 0.01, 1.0));
        assert!(!packing_feasible(1000, 0.1, 1.0));
        assert!(packing_feasible(740, 0.1, 1.0));
        assert!(!packing_feasible(741, 0.1, 1.0));
    }
}
