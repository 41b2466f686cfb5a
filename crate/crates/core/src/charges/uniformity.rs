//! How close a configuration is to the uniform measure on the sphere.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::io::{self, Write};

use serde::Serialize;

use super::{dist, scaled_riesz, ChargeConfig};
use crate::error::Result;

/// Number of caps in [`cap_set`].
pub const CAP_COUNT: usize = 64;

/// A spherical cap: unit axis and angular radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl Cap {
    /// Fraction of the sphere's area inside the cap.
    pub fn area_fraction(&self) -> f64 {
        0.5 * (1.0 - self.angle.cos())
    }
}

/// The fixed test caps: axes on a 64-point Fibonacci lattice, angular radii
/// cycling through π/6, π/4, π/3, π/2.
pub fn cap_set() -> Vec<Cap> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let angles = [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2];
    (0..CAP_COUNT)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / CAP_COUNT as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Cap { axis: [rho * phi.cos(), rho * phi.sin(), z], angle: angles[i % angles.len()] }
        })
        .collect()
}

/// Uniformity diagnostics of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformityStats {
    /// Fraction of charges within `shell_delta` of the outermost admissible radius.
    pub shell_fraction: f64,
    /// `|F_N − 1|`.
    pub riesz_gap: f64,
    /// Largest deviation between the empirical and the area fraction of a cap.
    pub cap_discrepancy: f64,
}

/// Shell fraction, Riesz gap and cap discrepancy of `config`. Needs `N ≥ 2`.
pub fn uniformity_stats(config: &ChargeConfig, shell_delta: f64) -> Result<UniformityStats> {
    let riesz_gap = (scaled_riesz(config)? - 1.0).abs();
    let n = config.len() as f64;
    let o = config.host.center;
    let threshold = config.host.radius - config.eps - shell_delta;
    let on_shell = config.centers.iter().filter(|p| dist(p, &o) >= threshold).count();

    let dirs: Vec<Option<[f64; 3]>> = config
        .centers
        .iter()
        .map(|p| {
            let v = [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            (r > 0.0).then(|| [v[0] / r, v[1] / r, v[2] / r])
        })
        .collect();
    let mut cap_discrepancy: f64 = 0.0;
    for cap in cap_set() {
        let cos_angle = cap.angle.cos();
        let inside = dirs
            .iter()
            .flatten()
            .filter(|d| d[0] * cap.axis[0] + d[1] * cap.axis[1] + d[2] * cap.axis[2] >= cos_angle)
            .count();
        cap_discrepancy = cap_discrepancy.max((inside as f64 / n - cap.area_fraction()).abs());
    }
    Ok(UniformityStats { shell_fraction: on_shell as f64 / n, riesz_gap, cap_discrepancy })
}

/// Writes `(n, stats)` rows as CSV with header
/// `n,shell_fraction,riesz_gap,cap_discrepancy`.
pub fn write_uniformity_csv<W: Write>(mut w: W, rows: &[(usize, UniformityStats)]) -> io::Result<()> {
    writeln!(w, "n,shell_fraction,riesz_gap,cap_discrepancy")?;
    for (n, s) in rows {
        writeln!(w, "{n},{:.16e},{:.16e},{:.16e}", s.shell_fraction, s.riesz_gap, s.cap_discrepancy)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_are_unit_and_cover_both_hemispheres() {
        let caps = cap_set();
        assert_eq!(caps.len(), CAP_COUNT);
        for c in &caps {
            let n: f64 = c.axis.iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
        assert!(caps.iter().any(|c| c.axis[2] > 0.9) && caps.iter().any(|c| c.axis[2] < -0.9));
    }

    #[test]
    fn antipodal_pair() {
        let cfg = ChargeConfig::new(vec![[0.0, 0.0, 0.99], [0.0, 0.0, -0.99]], 0.01, 1.0);
        let s = uniformity_stats(&cfg, 1e-9).unwrap();
        assert_eq!(s.shell_fraction, 1.0);
        assert!((s.riesz_gap - (1.0 - 0.25 / 0.99)).abs() < 1e-15);
    }
}
