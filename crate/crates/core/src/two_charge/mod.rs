//! Exact minimizers for two charges.
//!
//! A two-charge drop is, away from the charges, a piece of an unduloid. Given
//! a case geometry and a contact height `h`, the volume constraint fixes the
//! bulge radius `c` ([`solve_c`]), and the energy follows in closed form
//! ([`energy_of_h`]). [`minimize`] optimizes over `h` in every case and compares
//! the winner with the split configuration of two separate balls
//! ([`generalized_energy`]).
//!
//! ```
//! use charged_drop::two_charge::{minimize, SolutionKind};
//! let sol = minimize(1e-2, 100.0).unwrap();
//! assert!(sol.exists);
//! assert_eq!(sol.kind, SolutionKind::Case1);
//! assert!((sol.h_star / sol.asymptotic.h - 1.0).abs() < 0.05);
//! ```

mod cases;

use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::scalar::{brent_min, brent_root};
use crate::unduloid::{CaseKind, UnduloidSection};

use cases::Terms;

/// Energy of the two-ball split configuration, `4π(ε² + (1 − ε³)^{2/3})`.
pub fn generalized_energy(eps: f64) -> f64 {
    4.0 * PI + generalized_excess(eps)
}

/// `generalized_energy(eps) − 4π`, without cancellation.
pub fn generalized_excess(eps: f64) -> f64 {
    let eps3 = eps * eps * eps;
    4.0 * PI * (eps * eps + (2.0 / 3.0 * (-eps3).ln_1p()).exp_m1())
}

/// Perimeter and Coulomb parts of an energy; `total = perimeter + coulomb`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub perimeter: f64,
    pub coulomb: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn new(perimeter: f64, coulomb: f64) -> Self {
        Self { perimeter, coulomb, total: perimeter + coulomb }
    }
}

/// Tunables of the two-charge solver.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoChargeConfig {
    /// Largest `ε` accepted by [`minimize_with`].
    pub eps_max: f64,
    /// The search in `h` starts at `h_min_ratio · ε`.
    pub h_min_ratio: f64,
    /// Number of log-spaced scan points in `h`.
    pub scan_points: usize,
    /// Search interval for the bulge radius `c`.
    pub c_bracket: (f64, f64),
    /// Relative margin by which a classical energy must beat the split one.
    pub existence_margin: f64,
    /// Lower end of the asymptotic window, `γ > c₁ / log(1/ε)`.
    pub window_c1: f64,
    /// Upper end of the asymptotic window, `γ < 8π/ε − c`.
    pub window_c: f64,
    /// Cases to consider.
    pub cases: Vec<CaseKind>,
}

impl Default for TwoChargeConfig {
    fn default() -> Self {
        Self {
            eps_max: 0.05,
            h_min_ratio: 1e-4,
            scan_points: 200,
            c_bracket: (0.5, 1.05),
            existence_margin: 1e-12,
            window_c1: 1.0,
            window_c: 16.0 * PI,
            cases: CaseKind::ALL.to_vec(),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(domain(format!("charge radius ε = {eps} must lie in (0, 0.5)")));
    }
    Ok(())
}

fn solve_delta(case: CaseKind, h: f64, eps: f64, bracket: (f64, f64)) -> Result<f64> {
    check_eps(eps)?;
    if !(h > 0.0 && h <= eps) {
        return Err(domain(format!("contact height h = {h} outside (0, ε = {eps}]")));
    }
    let (c_lo, c_hi) = bracket;
    let residual = |delta: f64| Terms::new(h, eps, delta).map(|t| t.volume_residual(case));
    let (d_lo, d_hi) = (1.0 - c_hi, 1.0 - c_lo);
    let (r_lo, r_hi) = (residual(d_lo)?, residual(d_hi)?);
    if r_lo.signum() == r_hi.signum() {
        return Err(Error::NoRoot { case, h, c_lo, c_hi });
    }
    brent_root(residual, d_lo, d_hi, 1e-300, 400)
}

/// Bulge radius `c` satisfying the volume constraint of `case` at contact
/// height `h`, searched in `[0.5, 1.05]`.
///
/// ```
/// use charged_drop::two_charge::solve_c;
/// use charged_drop::unduloid::CaseKind;
/// let c = solve_c(CaseKind::Case1, 0.002, 0.01).unwrap();
/// assert!(c < 1.0 && c > 0.999);
/// ```
pub fn solve_c(case: CaseKind, h: f64, eps: f64) -> Result<f64> {
    solve_c_in(case, h, eps, TwoChargeConfig::default().c_bracket)
}

/// [`solve_c`] on an explicit bracket `(c_lo, c_hi)`.
pub fn solve_c_in(case: CaseKind, h: f64, eps: f64, bracket: (f64, f64)) -> Result<f64> {
    Ok(1.0 - solve_delta(case, h, eps, bracket)?)
}

/// The volume constraint of `case`, written as (closed-form right-hand side
/// − 2) and evaluated literally at `(h, ε, c)`.
pub fn volume_residual(case: CaseKind, h: f64, eps: f64, c: f64) -> Result<f64> {
    cases::literal_volume_residual(case, h, eps, c)
}

/// A case evaluated at one contact height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseEvaluation {
    pub energy: EnergyBreakdown,
    /// `energy.total − 4π`, computed without cancellation.
    pub excess: f64,
    pub section: UnduloidSection,
    /// Distance between the charge centres.
    pub separation: f64,
}

/// Evaluates `case` at contact height `h`.
pub fn evaluate(case: CaseKind, h: f64, eps: f64, gamma: f64) -> Result<CaseEvaluation> {
    evaluate_in(case, h, eps, gamma, TwoChargeConfig::default().c_bracket)
}

fn evaluate_in(case: CaseKind, h: f64, eps: f64, gamma: f64, bracket: (f64, f64)) -> Result<CaseEvaluation> {
    if !(gamma >= 0.0) {
        return Err(domain(format!("coupling γ = {gamma} must be non-negative")));
    }
    let delta = solve_delta(case, h, eps, bracket)?;
    let terms = Terms::new(h, eps, delta)?;
    let pex = terms.perimeter_excess(case);
    let separation = terms.separation(case);
    if !(separation > 0.0) {
        return Err(Error::DegenerateGeometry(format!("charge separation {separation} ≤ 0")));
    }
    let coulomb = gamma * eps * eps * eps / separation;
    let section = UnduloidSection::new(case, terms.c, h, eps)?;
    Ok(CaseEvaluation {
        energy: EnergyBreakdown::new(4.0 * PI * (1.0 + pex), coulomb),
        excess: 4.0 * PI * pex + coulomb,
        section,
        separation,
    })
}

/// Energy of the `case` configuration with contact height `h`, together with
/// its unduloid section.
pub fn energy_of_h(case: CaseKind, h: f64, eps: f64, gamma: f64) -> Result<(EnergyBreakdown, UnduloidSection)> {
    let ev = evaluate(case, h, eps, gamma)?;
    Ok((ev.energy, ev.section))
}

/// Leading-order asymptotics of the two-charge minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticSolution {
    pub h: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "E")]
    pub e: f64,
    /// Whether `γ` lies in the window where the expansions are asserted.
    pub in_window: bool,
}

/// `h ≈ √(γε⁴/8π)`, `L ≈ 2 − 2ε − (γε³/8π) log(γε⁴)` and
/// `E ≈ 4π + (γε³/2)(1 + ε + ε²) + (γ²ε⁶/64π) log(γε⁴)`.
pub fn asymptotic_solution(eps: f64, gamma: f64) -> AsymptoticSolution {
    asymptotic_solution_with(eps, gamma, &TwoChargeConfig::default())
}

pub fn asymptotic_solution_with(eps: f64, gamma: f64, config: &TwoChargeConfig) -> AsymptoticSolution {
    let eps2 = eps * eps;
    let eps3 = eps2 * eps;
    let g4 = gamma * eps2 * eps2;
    let (h, l, e) = if gamma == 0.0 {
        (0.0, 2.0 - 2.0 * eps, 4.0 * PI)
    } else {
        let log = g4.ln();
        (
            (g4 / (8.0 * PI)).sqrt(),
            2.0 - 2.0 * eps - gamma * eps3 / (8.0 * PI) * log,
            4.0 * PI + 0.5 * gamma * eps3 * (1.0 + eps + eps2) + gamma * gamma * eps3 * eps3 / (64.0 * PI) * log,
        )
    };
    let lower = config.window_c1 / (1.0 / eps).ln();
    let upper = 8.0 * PI / eps - config.window_c;
    AsymptoticSolution { h, l, e, in_window: gamma > lower && gamma < upper }
}

/// Which configuration a solution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionKind {
    Case1,
    Case2,
    Case3,
    /// No classical minimizer: the two separate balls have lower energy.
    Split,
}

impl SolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionKind::Case1 => "Case1",
            SolutionKind::Case2 => "Case2",
            SolutionKind::Case3 => "Case3",
            SolutionKind::Split => "Split",
        }
    }
}

impl From<CaseKind> for SolutionKind {
    fn from(c: CaseKind) -> Self {
        match c {
            CaseKind::Case1 => SolutionKind::Case1,
            CaseKind::Case2 => SolutionKind::Case2,
            CaseKind::Case3 => SolutionKind::Case3,
        }
    }
}

impl Serialize for SolutionKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Best configuration found for one case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseMinimum {
    pub case: CaseKind,
    pub h: f64,
    pub eval: CaseEvaluation,
}

/// Result of [`minimize`].
///
/// When no classical minimizer exists (`kind == Split`), the geometric fields
/// describe the best classical candidate, whose energy is not below the split
/// energy.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoChargeSolution {
    pub eps: f64,
    pub gamma: f64,
    pub exists: bool,
    pub kind: SolutionKind,
    /// Case of the best classical candidate.
    pub best_case: CaseKind,
    pub h_star: f64,
    pub c_star: f64,
    pub l_star: f64,
    pub energy: EnergyBreakdown,
    /// `energy.total − 4π` without cancellation.
    pub excess: f64,
    pub generalized_energy: f64,
    pub section: UnduloidSection,
    pub asymptotic: AsymptoticSolution,
    /// Second difference of the energy at `h*` (step `0.05 h*`) is positive.
    /// `None` when no classical minimizer exists.
    pub locally_convex: Option<bool>,
    /// Per-case minima, in case order; infeasible cases are absent.
    pub per_case: Vec<CaseMinimum>,
}

impl Serialize for TwoChargeSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TwoChargeSolution", 13)?;
        st.serialize_field("eps", &self.eps)?;
        st.serialize_field("gamma", &self.gamma)?;
        st.serialize_field("exists", &self.exists)?;
        st.serialize_field("case", &self.kind)?;
        st.serialize_field("h_star", &self.h_star)?;
        st.serialize_field("c_star", &self.c_star)?;
        st.serialize_field("L_star", &self.l_star)?;
        st.serialize_field("E_perimeter", &self.energy.perimeter)?;
        st.serialize_field("E_coulomb", &self.energy.coulomb)?;
        st.serialize_field("E_total", &self.energy.total)?;
        st.serialize_field("h_asym", &self.asymptotic.h)?;
        st.serialize_field("L_asym", &self.asymptotic.l)?;
        st.serialize_field("E_asym", &self.asymptotic.e)?;
        st.end()
    }
}

/// Minimizes over `h` for every case with the default configuration.
pub fn minimize(eps: f64, gamma: f64) -> Result<TwoChargeSolution> {
    minimize_with(eps, gamma, &TwoChargeConfig::default())
}

/// Minimizes one case over `h ∈ [h_min, ε]`: a log-spaced scan (plus the
/// asymptotic guess) locates the basin, then Brent's method refines in `log h`.
pub fn minimize_case(case: CaseKind, eps: f64, gamma: f64, config: &TwoChargeConfig) -> Result<Option<CaseMinimum>> {
    let h_min = eps * config.h_min_ratio;
    let n = config.scan_points.max(3);
    let (log_lo, log_hi) = (h_min.ln(), eps.ln());
    let excess_at = |log_h: f64| -> Option<f64> {
        let h = if log_h >= log_hi { eps } else { log_h.exp() };
        evaluate_in(case, h, eps, gamma, config.c_bracket).ok().map(|e| e.excess)
    };

    let mut grid: Vec<f64> = (0..n).map(|i| log_lo + (log_hi - log_lo) * i as f64 / (n - 1) as f64).collect();
    let guess = asymptotic_solution_with(eps, gamma, config).h;
    if guess > h_min && guess < eps {
        let g = guess.ln();
        let pos = grid.partition_point(|&x| x < g);
        grid.insert(pos, g);
    }
    let values: Vec<Option<f64>> = grid.iter().map(|&x| excess_at(x)).collect();
    let Some(best) = (0..grid.len())
        .filter(|&i| values[i].is_some())
        .min_by(|&i, &j| values[i].unwrap().total_cmp(&values[j].unwrap()))
    else {
        return Ok(None);
    };

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let log_h = if lo < hi {
        let m = brent_min(
            |x| excess_at(x).ok_or_else(|| domain("case infeasible inside the refinement bracket")),
            lo,
            hi,
            grid[best],
            0.0,
            1e-11,
            200,
        );
        match m {
            Ok(m) if m.fx <= values[best].unwrap() => m.x,
            _ => grid[best],
        }
    } else {
        grid[best]
    };
    let h = if log_h >= log_hi { eps } else { log_h.exp() };
    let eval = evaluate_in(case, h, eps, gamma, config.c_bracket)?;
    Ok(Some(CaseMinimum { case, h, eval }))
}

/// Minimizes over `h` for every configured case and decides existence.
pub fn minimize_with(eps: f64, gamma: f64, config: &TwoChargeConfig) -> Result<TwoChargeSolution> {
    check_eps(eps)?;
    if eps > config.eps_max {
        return Err(domain(format!("ε = {eps} exceeds the configured maximum {}", config.eps_max)));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(domain(format!("coupling γ = {gamma} must be positive")));
    }
    let mut per_case = Vec::new();
    for &case in &config.cases {
        if let Some(m) = minimize_case(case, eps, gamma, config)? {
            per_case.push(m);
        }
    }
    let best = per_case
        .iter()
        .min_by(|x, y| x.eval.excess.total_cmp(&y.eval.excess))
        .copied()
        .ok_or_else(|| domain(format!("no feasible two-charge geometry for ε = {eps}")))?;

    let gen_excess = generalized_excess(eps);
    let gen = generalized_energy(eps);
    let exists = best.eval.excess < gen_excess - config.existence_margin * gen.abs();
    let locally_convex = if exists {
        let step = 0.05 * best.h;
        let at = |h: f64| evaluate_in(best.case, h, eps, gamma, config.c_bracket).map(|e| e.excess);
        match (at(best.h - step), at((best.h + step).min(eps))) {
            (Ok(lo), Ok(hi)) if best.h + step <= eps => Some(lo + hi - 2.0 * best.eval.excess > 0.0),
            _ => Some(false),
        }
    } else {
        None
    };
    Ok(TwoChargeSolution {
        eps,
        gamma,
        exists,
        kind: if exists { best.case.into() } else { SolutionKind::Split },
        best_case: best.case,
        h_star: best.h,
        c_star: best.eval.section.c,
        l_star: best.eval.separation,
        energy: best.eval.energy,
        excess: best.eval.excess,
        generalized_energy: gen,
        section: best.eval.section,
        asymptotic: asymptotic_solution_with(eps, gamma, config),
        locally_convex,
        per_case,
    })
}

/// Coupling `γ_c(ε)` at which the classical minimizer stops existing, by
/// bisection on `gamma_bracket` to relative width `1e−6`.
pub fn existence_boundary(eps: f64, gamma_bracket: (f64, f64)) -> Result<f64> {
    existence_boundary_with(eps, gamma_bracket, &TwoChargeConfig::default())
}

pub fn existence_boundary_with(eps: f64, gamma_bracket: (f64, f64), config: &TwoChargeConfig) -> Result<f64> {
    let (mut lo, mut hi) = gamma_bracket;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::BadBracket { lo, hi, reason: "need 0 < lo < hi".into() });
    }
    if !minimize_with(eps, lo, config)?.exists {
        return Err(Error::BadBracket { lo, hi, reason: format!("no minimizer at the lower end γ = {lo}") });
    }
    if minimize_with(eps, hi, config)?.exists {
        return Err(Error::BadBracket { lo, hi, reason: format!("a minimizer exists at the upper end γ = {hi}") });
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if minimize_with(eps, mid, config)?.exists {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The bracket `(½ · 8π/ε, 2 · 8π/ε)` used by default for [`existence_boundary`].
pub fn default_gamma_bracket(eps: f64) -> (f64, f64) {
    (0.5 * 8.0 * PI / eps, 2.0 * 8.0 * PI / eps)
}
