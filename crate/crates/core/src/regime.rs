//! Existence phase diagram in `(ε, γ, N)`.
//!
//! For `N = 1` the ball is always a minimizer. For `N = 2` the exact solver of
//! [`two_charge`](crate::two_charge) decides. For `N ≥ 3` the classifier applies
//! the known windows and says `Unknown` everywhere else:
//!
//! - `Exists` when `γ > γ₀` and `N < C/(εγ)`;
//! - `NotExists` when `C/(εγ) < N < δ₀/ε²`.
//!
//! ```
//! use charged_drop::regime::{classify, ClassifierConstants, Label};
//! let k = ClassifierConstants::default();
//! assert_eq!(classify(1e-4, 1000.0, 100, &k).label, Label::Exists);
//! assert_eq!(classify(1e-4, 1000.0, 10_000, &k).label, Label::NotExists);
//! ```

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use serde::{Serialize, Serializer};

use crate::charges::{packing_feasible, upper_bound_energy};
use crate::error::{domain, Result};
use crate::two_charge::{self, default_gamma_bracket, TwoChargeConfig};

/// Classification of one `(ε, γ, N)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Exists,
    NotExists,
    /// Outside every window where a statement is available.
    Unknown,
    /// `N` balls of radius `ε` do not fit in the unit ball.
    Infeasible,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Exists => "Exists",
            Label::NotExists => "NotExists",
            Label::Unknown => "Unknown",
            Label::Infeasible => "Infeasible",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Thresholds of the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifierConstants {
    /// `C` in `N < C/(εγ)`.
    pub c_threshold: f64,
    /// `γ₀`: existence for `N ≥ 3` is only asserted above it.
    pub gamma0: f64,
    /// `δ₀` in `N < δ₀/ε²`. In principle it depends on `γ`; here it is a
    /// single number.
    pub delta0: f64,
}

impl Default for ClassifierConstants {
    fn default() -> Self {
        Self { c_threshold: 32.0 * PI, gamma0: 64.0 * PI, delta0: 1e-2 }
    }
}

impl ClassifierConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("C", self.c_threshold), ("gamma0", self.gamma0), ("delta0", self.delta0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(format!("classifier constant {name} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

/// Energies of the two competitors at a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    /// One ball holding a single charge plus `N − 1` bare charge balls.
    pub split_energy: f64,
    /// Energy of a classical configuration: the exact minimum for `N ≤ 2`,
    /// `4π + γε³N²/2` (unit ball, charges spread uniformly) otherwise.
    pub classical_estimate: f64,
}

/// One classified point of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeCell {
    pub eps: f64,
    pub gamma: f64,
    pub n: usize,
    pub label: Label,
    pub witness: Option<Witness>,
    /// For `N = 2`: the label predicted by `γε < 8π`.
    pub asymptotic_label: Option<Label>,
}

/// Classifies `(eps, gamma, n)` under `constants`.
pub fn classify(eps: f64, gamma: f64, n: usize, constants: &ClassifierConstants) -> RegimeCell {
    classify_with(eps, gamma, n, constants, &TwoChargeConfig::default())
}

/// [`classify`] with an explicit two-charge solver configuration.
pub fn classify_with(
    eps: f64,
    gamma: f64,
    n: usize,
    constants: &ClassifierConstants,
    two: &TwoChargeConfig,
) -> RegimeCell {
    let mut cell = RegimeCell { eps, gamma, n, label: Label::Unknown, witness: None, asymptotic_label: None };
    if n == 0 || !(eps > 0.0) || !(gamma > 0.0) {
        return cell;
    }
    if !packing_feasible(n, eps, 1.0) {
        cell.label = Label::Infeasible;
        return cell;
    }
    let split_energy = upper_bound_energy(n, eps);
    let eps3 = eps * eps * eps;
    match n {
        1 => {
            cell.label = Label::Exists;
            cell.witness = Some(Witness { split_energy, classical_estimate: 4.0 * PI });
        }
        2 => {
            cell.asymptotic_label = Some(if gamma * eps < 8.0 * PI { Label::Exists } else { Label::NotExists });
            let classical = match two_charge::minimize_with(eps, gamma, two) {
                Ok(sol) => {
                    cell.label = if sol.exists { Label::Exists } else { Label::NotExists };
                    sol.energy.total
                }
                Err(_) => 4.0 * PI + gamma * eps3 * 0.5,
            };
            cell.witness = Some(Witness { split_energy, classical_estimate: classical });
        }
        _ => {
            let nf = n as f64;
            let divide = constants.c_threshold / (eps * gamma);
            cell.label = if gamma > constants.gamma0 && nf < divide {
                Label::Exists
            } else if nf > divide && nf < constants.delta0 / (eps * eps) {
                Label::NotExists
            } else {
                Label::Unknown
            };
            cell.witness = Some(Witness { split_energy, classical_estimate: 4.0 * PI + 0.5 * gamma * eps3 * nf * nf });
        }
    }
    cell
}

/// Axes of a sweep.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepGrid {
    pub eps: Vec<f64>,
    pub gamma: Vec<f64>,
    pub n: Vec<usize>,
}

impl SweepGrid {
    pub fn is_empty(&self) -> bool {
        self.eps.is_empty() || self.gamma.is_empty() || self.n.is_empty()
    }

    /// The grid points in lexicographic `(ε, γ, N)` order.
    pub fn points(&self) -> Vec<(f64, f64, usize)> {
        let mut eps = self.eps.clone();
        let mut gamma = self.gamma.clone();
        let mut n = self.n.clone();
        eps.sort_by(f64::total_cmp);
        eps.dedup();
        gamma.sort_by(f64::total_cmp);
        gamma.dedup();
        n.sort_unstable();
        n.dedup();
        let mut out = Vec::with_capacity(eps.len() * gamma.len() * n.len());
        for &e in &eps {
            for &g in &gamma {
                for &k in &n {
                    out.push((e, g, k));
                }
            }
        }
        out
    }
}

/// Lexicographic order on `(ε, γ, N)`.
pub fn cell_order(a: &RegimeCell, b: &RegimeCell) -> Ordering {
    a.eps.total_cmp(&b.eps).then(a.gamma.total_cmp(&b.gamma)).then(a.n.cmp(&b.n))
}

/// Classifies every point of `grid`, in lexicographic `(ε, γ, N)` order.
pub fn sweep(grid: &SweepGrid, constants: &ClassifierConstants) -> Result<Vec<RegimeCell>> {
    if grid.is_empty() {
        return Err(domain("sweep grid has an empty axis"));
    }
    constants.validate()?;
    Ok(grid.points().into_iter().map(|(e, g, n)| classify(e, g, n, constants)).collect())
}

/// One point of the two-charge existence boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub eps: f64,
    pub gamma_c: f64,
    /// `γ_c · ε`, which tends to `8π`.
    pub gamma_c_eps: f64,
}

/// Existence threshold `γ_c(ε)` for each `ε`, using the default bracket.
pub fn two_charge_boundary_curve(eps_list: &[f64]) -> Result<Vec<BoundaryPoint>> {
    eps_list.iter().map(|&eps| boundary_point(eps, &TwoChargeConfig::default())).collect()
}

/// Threshold at one `ε`.
pub fn boundary_point(eps: f64, config: &TwoChargeConfig) -> Result<BoundaryPoint> {
    let gamma_c = two_charge::existence_boundary_with(eps, default_gamma_bracket(eps), config)?;
    Ok(BoundaryPoint { eps, gamma_c, gamma_c_eps: gamma_c * eps })
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes cells as CSV with header
/// `eps,gamma,n,label,split_energy,classical_estimate`; missing witnesses are
/// empty fields.
pub fn write_cells_csv<W: Write>(mut w: W, cells: &[RegimeCell]) -> io::Result<()> {
    writeln!(w, "eps,gamma,n,label,split_energy,classical_estimate")?;
    for c in cells {
        let (s, e) = match c.witness {
            Some(wit) => (fmt_num(wit.split_energy), fmt_num(wit.classical_estimate)),
            None => (String::new(), String::new()),
        };
        writeln!(w, "{},{},{},{},{s},{e}", fmt_num(c.eps), fmt_num(c.gamma), c.n, c.label)?;
    }
    Ok(())
}

/// Writes boundary points as CSV with header `eps,gamma_c,gamma_c_eps`.
pub fn write_boundary_csv<W: Write>(mut w: W, points: &[BoundaryPoint]) -> io::Result<()> {
    writeln!(w, "eps,gamma_c,gamma_c_eps")?;
    for p in points {
        writeln!(w, "{},{},{}", fmt_num(p.eps), fmt_num(p.gamma_c), fmt_num(p.gamma_c_eps))?;
    }
    Ok(())
}
