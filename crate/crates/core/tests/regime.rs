use std::f64::consts::PI;

use charged_drop::regime::{
    cell_order, classify, sweep, two_charge_boundary_curve, write_boundary_csv, ClassifierConstants, Label, SweepGrid,
};
use proptest::prelude::*;

fn defaults() -> ClassifierConstants {
    ClassifierConstants::default()
}

#[test]
fn default_constants() {
    let c = defaults();
    assert_eq!(c.c_threshold, 32.0 * PI);
    assert_eq!(c.gamma0, 64.0 * PI);
    assert_eq!(c.delta0, 1e-2);
    assert!(c.validate().is_ok());
    assert!(ClassifierConstants { delta0: 0.0, ..c }.validate().is_err());
}

#[test]
fn classifier_examples() {
    assert_eq!(classify(0.01, 50.0, 1, &defaults()).label, Label::Exists);
    assert_eq!(classify(1e-4, 1000.0, 100, &defaults()).label, Label::Exists);
    assert_eq!(classify(1e-4, 1000.0, 10_000, &defaults()).label, Label::NotExists);
}

#[test]
fn classify_is_pure() {
    for (eps, gamma, n) in [(1e-3, 1e3, 2), (1e-4, 1000.0, 100), (0.01, 300.0, 7)] {
        assert_eq!(classify(eps, gamma, n, &defaults()), classify(eps, gamma, n, &defaults()));
    }
}

#[test]
fn two_charges_flip_across_the_threshold() {
    let eps = 1e-3;
    let below = classify(eps, 0.8 * 8.0 * PI / eps, 2, &defaults());
    let above = classify(eps, 1.2 * 8.0 * PI / eps, 2, &defaults());
    assert_eq!(below.label, Label::Exists);
    assert_eq!(above.label, Label::NotExists);
    assert_eq!(below.asymptotic_label, Some(Label::Exists));
    assert_eq!(above.asymptotic_label, Some(Label::NotExists));
}

#[test]
fn two_charge_labels_agree_away_from_threshold() {
    for eps in [1e-2, 5e-3, 2e-3, 1e-3] {
        for offset in [-10.0, -3.0, -1.0, -0.51, 0.51, 1.0, 3.0, 10.0] {
            let gamma = (8.0 * PI + offset) / eps;
            let cell = classify(eps, gamma, 2, &defaults());
            assert_eq!(Some(cell.label), cell.asymptotic_label, "ε = {eps}, γε − 8π = {offset}");
        }
    }
}

#[test]
fn single_point_sweep_equals_classify() {
    let grid = SweepGrid { eps: vec![1e-3], gamma: vec![500.0], n: vec![5] };
    let cells = sweep(&grid, &defaults()).unwrap();
    assert_eq!(cells, vec![classify(1e-3, 500.0, 5, &defaults())]);
}

#[test]
fn sweep_rows_are_ordered() {
    let grid = SweepGrid { eps: vec![1e-2, 1e-4, 1e-3], gamma: vec![1e3, 300.0], n: vec![50, 1, 3, 3] };
    let cells = sweep(&grid, &defaults()).unwrap();
    assert_eq!(cells.len(), 3 * 2 * 3);
    assert!(cells.windows(2).all(|w| cell_order(&w[0], &w[1]).is_lt()));
}

#[test]
fn witnesses_for_classified_cells() {
    let c = classify(1e-4, 1000.0, 100, &defaults());
    let w = c.witness.unwrap();
    assert!(w.classical_estimate > 4.0 * PI && w.split_energy > 4.0 * PI);
    let two = classify(1e-2, 100.0, 2, &defaults()).witness.unwrap();
    assert!(two.classical_estimate < two.split_energy);
}

#[test]
fn boundary_curve_single_row() {
    let pts = two_charge_boundary_curve(&[1e-2]).unwrap();
    assert_eq!(pts.len(), 1);
    assert!((pts[0].gamma_c_eps - pts[0].gamma_c * 1e-2).abs() < 1e-12);
    assert!((pts[0].gamma_c_eps / (8.0 * PI) - 1.0).abs() < 0.05);
    let mut buf = Vec::new();
    write_boundary_csv(&mut buf, &pts).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("eps,gamma_c,gamma_c_eps\n1.0000000000000000e-2,"));
    assert_eq!(text.lines().count(), 2);
}

proptest! {
    #[test]
    fn windows_never_overlap(eps in 1e-5..1e-2f64, gamma in 1.0..1e5f64, n in 3usize..100_000) {
        let c = defaults();
        let label = classify(eps, gamma, n, &c).label;
        let nf = n as f64;
        let divide = c.c_threshold / (eps * gamma);
        match label {
            Label::Exists => prop_assert!(nf < divide && gamma > c.gamma0),
            Label::NotExists => prop_assert!(nf > divide && nf < c.delta0 / (eps * eps)),
            _ => {}
        }
    }

    #[test]
    fn existence_is_lost_at_most_once(eps in 1e-5..1e-2f64, gamma in 1.0..1e5f64) {
        let mut seen_non = false;
        let mut prev_exists = false;
        let mut flips = 0;
        for k in 0..60 {
            let n = 3 + (1.25f64.powi(k) as usize);
            let label = classify(eps, gamma, n, &defaults()).label;
            if label == Label::NotExists {
                seen_non = true;
            }
            if label == Label::Exists {
                prop_assert!(!seen_non, "exists again at n = {n}");
            }
            if prev_exists && label != Label::Exists {
                flips += 1;
            }
            prev_exists = label == Label::Exists;
        }
        prop_assert!(flips <= 1);
    }
}
