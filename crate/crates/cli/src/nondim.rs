//! Physical lengths to dimensionless parameters.

use serde::Serialize;

use crate::CliError;

/// Lengths in any common unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Solvation radius.
    pub r0: f64,
    /// Capillary length `√(k_B T/σ)`.
    pub r_sigma: f64,
    /// Bjerrum length.
    pub r_b: f64,
}

/// `ρ = r₀/r_σ`, `λ = r_B/r_σ` and the coupling `γ = λ/ρ³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nondimensional {
    pub rho: f64,
    pub lambda: f64,
    pub gamma: f64,
}

/// ```
/// use charged_drop_cli::{nondimensionalize, PhysicalParams};
/// let p = PhysicalParams { r0: 2.0, r_sigma: 1.0, r_b: 16.0 };
/// assert_eq!(nondimensionalize(p).unwrap().gamma, 2.0);
/// ```
pub fn nondimensionalize(p: PhysicalParams) -> Result<Nondimensional, CliError> {
    for (name, v) in [("r0", p.r0), ("rsigma", p.r_sigma), ("rb", p.r_b)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let rho = p.r0 / p.r_sigma;
    let lambda = p.r_b / p.r_sigma;
    Ok(Nondimensional { rho, lambda, gamma: lambda / (rho * rho * rho) })
}
