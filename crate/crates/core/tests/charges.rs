use std::f64::consts::PI;

use charged_drop::charges::{
    coulomb_energy, evaporation_margin, optimize, optimize_report, riesz_sum, scaled_riesz, uniformity_stats,
    upper_bound_energy, validate, ChargeConfig, OptimizeOptions, Point, Violation,
};
use charged_drop::Error;
use charged_drop_oracle as oracle;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dist(p: &Point, q: &Point) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

fn pair_distances(cfg: &ChargeConfig) -> Vec<f64> {
    let c = &cfg.centers;
    let mut d = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            d.push(dist(&c[i], &c[j]));
        }
    }
    d
}

fn tetrahedron(r: f64) -> Vec<Point> {
    let s = r / 3f64.sqrt();
    vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

/// Rotation about `axis` (not necessarily unit) by `angle`.
fn rotate(p: Point, axis: Point, angle: f64) -> Point {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let k = [axis[0] / n, axis[1] / n, axis[2] / n];
    let (s, c) = angle.sin_cos();
    let kxp = [k[1] * p[2] - k[2] * p[1], k[2] * p[0] - k[0] * p[2], k[0] * p[1] - k[1] * p[0]];
    let kdp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    std::array::from_fn(|i| p[i] * c + kxp[i] * s + k[i] * kdp * (1.0 - c))
}

#[test]
fn coulomb_examples() {
    let pair = ChargeConfig::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], 1.0, 3.0);
    assert_eq!(coulomb_energy(&pair, 1.0).unwrap(), 1.0);
    let d = 0.4 * (8.0f64 / 3.0).sqrt();
    let tet = ChargeConfig::new(tetrahedron(0.4), 0.01, 1.0);
    let want = 100.0 * 1e-6 * 6.0 / d;
    assert!((coulomb_energy(&tet, 100.0).unwrap() - want).abs() < 1e-15);
    assert!((oracle::riesz(&tet.centers) - 6.0 / d).abs() < 1e-13);
}

#[test]
fn validation_examples() {
    let eps = 0.05;
    let touching = ChargeConfig::new(vec![[0.0; 3], [2.0 * eps, 0.0, 0.0]], eps, 1.0);
    assert!(validate(&touching).is_empty());
    let close = ChargeConfig::new(vec![[0.0; 3], [1.9 * eps, 0.0, 0.0]], eps, 1.0);
    match validate(&close).as_slice() {
        [Violation::Overlap { margin, .. }] => assert!((margin - 0.1 * eps).abs() < 1e-15),
        v => panic!("{v:?}"),
    }
    let out = ChargeConfig::new(vec![[0.0, 1.0 - eps / 2.0, 0.0]], eps, 1.0);
    assert!(matches!(validate(&out).as_slice(), [Violation::Containment { i: 0, .. }]));
}

#[test]
fn optimized_small_configurations() {
    let opts = OptimizeOptions::default();
    let eps = 0.01;
    let cfg = optimize(2, eps, 1.0, 3, &opts).unwrap();
    assert!((dist(&cfg.centers[0], &cfg.centers[1]) - 2.0 * (1.0 - eps)).abs() < 1e-9);

    let eps = 1e-3;
    let cfg = optimize(3, eps, 1.0, 3, &opts).unwrap();
    for d in pair_distances(&cfg) {
        assert!((d - (1.0 - eps) * 3f64.sqrt()).abs() < 1e-6);
    }
    let cfg = optimize(4, eps, 1.0, 3, &opts).unwrap();
    for d in pair_distances(&cfg) {
        assert!((d - (1.0 - eps) * (8.0f64 / 3.0).sqrt()).abs() < 1e-6);
    }
}

#[test]
fn optimizer_matches_brute_force() {
    let (eps, r) = (1e-3, 1.0);
    for n in [2, 3, 4, 6] {
        let ours = optimize_report(n, eps, r, 11, &OptimizeOptions::default()).unwrap().riesz_sum;
        let brute = oracle::multistart_riesz_min(n, r - eps, 500, 3000, 5);
        assert!((ours - brute).abs() <= 1e-6 * brute, "n = {n}: {ours} vs {brute}");
    }
}

#[test]
fn optimizer_output_is_admissible_and_stationary() {
    for (n, eps, seed) in [(1, 0.1, 0), (5, 0.05, 1), (20, 0.01, 2), (40, 1e-3, 3)] {
        let rep = optimize_report(n, eps, 1.0, seed, &OptimizeOptions::default()).unwrap();
        assert!(validate(&rep.config).is_empty(), "n = {n}");
        assert!(rep.projected_gradient <= 1e-9, "n = {n}: {:e}", rep.projected_gradient);
        assert_eq!(rep.riesz_sum, riesz_sum(&rep.config.centers).unwrap());
        let best = rep.start_energies.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(rep.riesz_sum, best);
    }
}

#[test]
fn coupling_does_not_move_the_minimizer() {
    // the optimizer sees only the geometry; γ rescales the energy
    let opts = OptimizeOptions { restarts: 3, ..Default::default() };
    let cfg = optimize(10, 0.01, 1.0, 9, &opts).unwrap();
    let unit = coulomb_energy(&cfg, 1.0).unwrap();
    for gamma in [1.0, 10.0, 100.0] {
        assert_eq!(optimize(10, 0.01, 1.0, 9, &opts).unwrap(), cfg);
        assert!((coulomb_energy(&cfg, gamma).unwrap() - gamma * unit).abs() <= 1e-15 * gamma * unit);
    }
}

#[test]
fn infeasible_and_bad_inputs() {
    let opts = OptimizeOptions::default();
    assert!(matches!(optimize(1000, 0.1, 1.0, 0, &opts), Err(Error::Infeasible(_))));
    assert!(matches!(optimize(0, 0.1, 1.0, 0, &opts), Err(Error::Domain(_))));
    assert!(matches!(optimize(3, 1.0, 1.0, 0, &opts), Err(Error::Domain(_))));
}

#[test]
fn evaporation_examples() {
    let (eps, gamma) = (0.01, 100.0);
    let pair = ChargeConfig::new(vec![[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], eps, 1.5);
    let (m, _) = evaporation_margin(&pair, gamma);
    assert!((m - 2.4633e-3).abs() < 1e-7);
    let l = 0.9 * gamma * eps / (8.0 * PI);
    let near = ChargeConfig::new(vec![[0.0; 3], [l, 0.0, 0.0]], eps, 1.0);
    assert!(evaporation_margin(&near, gamma).0 < 0.0);
}

#[test]
fn scaled_riesz_examples() {
    let pair = ChargeConfig::new(vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], 0.01, 1.0);
    assert!((scaled_riesz(&pair).unwrap() - 0.25).abs() < 1e-15);
    let tet = ChargeConfig::new(tetrahedron(1.0), 0.01, 1.0);
    assert!((scaled_riesz(&tet).unwrap() - 0.459_279_326_771_846).abs() < 1e-12);
    assert!(matches!(scaled_riesz(&ChargeConfig::new(vec![[0.0; 3]], 0.01, 1.0)), Err(Error::Domain(_))));

    // random points on the sphere approach the uniform-measure value 1
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<Point> = (0..4000).map(|_| oracle::on_sphere(&mut rng)).collect();
    let f = scaled_riesz(&ChargeConfig::new(pts, 1e-6, 1.0)).unwrap();
    assert!((f - 1.0).abs() < 0.02, "{f}");
    assert!((oracle::monte_carlo_f_inf(200_000, 9) - 1.0).abs() < 0.02);
}

#[test]
fn optimized_charges_sit_on_the_boundary() {
    let cfg = optimize(100, 1e-3, 1.0, 5, &OptimizeOptions::default()).unwrap();
    let s = uniformity_stats(&cfg, 1e-9).unwrap();
    assert_eq!(s.shell_fraction, 1.0);
    let two = optimize(2, 1e-3, 1.0, 5, &OptimizeOptions::default()).unwrap();
    assert_eq!(uniformity_stats(&two, 1e-9).unwrap().shell_fraction, 1.0);
}

#[test]
fn separation_scales_with_coupling() {
    // inside the existence window γεn ≈ 8π the nearest neighbours stay a
    // bounded multiple of γε apart
    let eps = 1e-3;
    let mut prev = 0.0;
    for n in [8, 16, 32, 64] {
        let gamma = 8.0 * PI / (eps * n as f64);
        let cfg = optimize(n, eps, 1.0, 1, &OptimizeOptions { restarts: 2, ..Default::default() }).unwrap();
        let ratio = cfg.min_separation() / (gamma * eps);
        assert!(ratio > 0.3 && ratio >= prev, "n = {n}: {ratio}");
        prev = ratio;
    }
}

#[test]
fn upper_bound_examples() {
    assert!((upper_bound_energy(1, 0.2) - 4.0 * PI).abs() < 1e-15);
    let v = upper_bound_energy(100, 0.01);
    assert!((v / (4.0 * PI) - 1.009_834).abs() < 1e-6);
}

fn config_strategy() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 2..8)
}

proptest! {
    #[test]
    fn energy_is_rigid_motion_invariant(
        pts in config_strategy(),
        shift in prop::array::uniform3(-5.0..5.0f64),
        axis in prop::array::uniform3(0.1..1.0f64),
        angle in 0.0..std::f64::consts::TAU,
        scale in 0.1..10.0f64,
    ) {
        let base = ChargeConfig::new(pts.clone(), 1e-3, 2.0);
        let e = coulomb_energy(&base, 3.0).unwrap();
        let moved: Vec<Point> = pts.iter().map(|&p| {
            let q = rotate(p, axis, angle);
            [q[0] + shift[0], q[1] + shift[1], q[2] + shift[2]]
        }).collect();
        let e2 = coulomb_energy(&ChargeConfig::new(moved, 1e-3, 2.0), 3.0).unwrap();
        prop_assert!((e2 - e).abs() <= 1e-10 * e);
        let scaled: Vec<Point> = pts.iter().map(|p| [scale * p[0], scale * p[1], scale * p[2]]).collect();
        let e3 = coulomb_energy(&ChargeConfig::new(scaled, 1e-3, 2.0), 3.0).unwrap();
        prop_assert!((e3 - e / scale).abs() <= 1e-12 * e / scale);
    }

    #[test]
    fn stable_configurations_are_wide(pts in config_strategy(), gamma in 1.0..1e4f64, eps in 1e-4..1e-2f64) {
        let cfg = ChargeConfig::new(pts, eps, 2.0);
        let n = cfg.len() as f64;
        if evaporation_margin(&cfg, gamma).0 >= 0.0 {
            prop_assert!(cfg.diameter() >= gamma * eps * (n - 1.0) / (8.0 * PI) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn split_bound_is_below_free_charges(n in 1usize..500, eps in 1e-4..0.1f64) {
        prop_assume!((n as f64 - 1.0) * eps.powi(3) < 1.0);
        prop_assert!(upper_bound_energy(n, eps) < 4.0 * PI * (1.0 + eps * eps * n as f64));
    }

    #[test]
    fn seeded_optimization_is_reproducible(n in 2usize..8, seed in 0u64..1000) {
        let o = OptimizeOptions { restarts: 2, ..Default::default() };
        prop_assert_eq!(optimize(n, 0.01, 1.0, seed, &o).unwrap(), optimize(n, 0.01, 1.0, seed, &o).unwrap());
    }
}
