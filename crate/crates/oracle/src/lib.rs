//! Independent reference computations for the test suites.
//!
//! Nothing here shares code with `charged-drop`: integrals are done by brute
//! adaptive quadrature, optimizations by plain gradient descent from many
//! random starts. The functions are slow and only meant to check the fast
//! closed forms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// 15-point Kronrod nodes/weights and the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// Globally adaptive: the panel with the largest error estimate is bisected
/// until the summed estimate drops below `tol` (or below rounding level), or
/// 5000 panels are in use.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = kronrod(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= tol.max(50.0 * f64::EPSILON * total.abs()) || panels.len() >= 5000 {
            return total;
        }
        let worst = (0..panels.len()).max_by(|&i, &j| panels[i].3.total_cmp(&panels[j].3)).unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

/// `∫₀ᵘ (1 − k sin²θ)^{−1/2} dθ` by quadrature.
pub fn ellip_f(u: f64, k: f64) -> f64 {
    integrate(|t| 1.0 / (1.0 - k * t.sin().powi(2)).sqrt(), 0.0, u, 1e-14)
}

/// `∫₀ᵘ (1 − k sin²θ)^{1/2} dθ` by quadrature.
pub fn ellip_e(u: f64, k: f64) -> f64 {
    integrate(|t| (1.0 - k * t.sin().powi(2)).sqrt(), 0.0, u, 1e-14)
}

/// Central finite difference `(f(x + h) − f(x − h)) / 2h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Axial extent, lateral area and volume of a piece of a profile curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revolution {
    pub dx: f64,
    pub area: f64,
    pub volume: f64,
}

/// Integrates one monotone arc of the constant-mean-curvature profile with
/// neck `a` and bulge `c` between heights `z_lo` and `z_hi` (`a ≤ z_lo ≤ z_hi ≤ c`).
///
/// The arc obeys `dx/dz = (z² + ac)/√((c² − z²)(z² − a²))`. With
/// `z = (a + c)/2 + (c − a)/2 · sin φ` the endpoint singularities cancel and
/// the integrands become smooth in `φ`.
pub fn cmc_arc(a: f64, c: f64, z_lo: f64, z_hi: f64) -> Revolution {
    let (m, w) = (0.5 * (a + c), 0.5 * (c - a));
    if w == 0.0 {
        return Revolution { dx: 0.0, area: 0.0, volume: 0.0 };
    }
    // atan2 keeps the endpoints exact where asin of a rounded ±1 would not
    let phi = |z: f64| (2.0 * z - a - c).atan2(2.0 * ((c - z).max(0.0) * (z - a).max(0.0)).sqrt());
    let (p0, p1) = (phi(z_lo), phi(z_hi));
    // dz/dφ = w cos φ and √((c − z)(z − a)) = w cos φ
    let dxdphi = |p: f64| {
        let z = m + w * p.sin();
        (z * z + a * c) / ((c + z) * (z + a)).sqrt()
    };
    let dsdphi = |p: f64| {
        let z = m + w * p.sin();
        (a + c) * z / ((c + z) * (z + a)).sqrt()
    };
    let dx = integrate(dxdphi, p0, p1, 1e-15);
    let area = integrate(|p| 2.0 * PI * (m + w * p.sin()) * dsdphi(p), p0, p1, 1e-14);
    let volume = integrate(|p| PI * (m + w * p.sin()).powi(2) * dxdphi(p), p0, p1, 1e-14);
    Revolution { dx, area, volume }
}

/// One full period of the profile: two arcs neck → bulge.
pub fn cmc_period(a: f64, c: f64) -> Revolution {
    let r = cmc_arc(a, c, a, c);
    Revolution { dx: 2.0 * r.dx, area: 2.0 * r.area, volume: 2.0 * r.volume }
}

/// `|dz/dx|` of the profile at height `z`.
pub fn cmc_slope(a: f64, c: f64, z: f64) -> f64 {
    ((c * c - z * z) * (z * z - a * a)).sqrt() / (z * z + a * c)
}

/// Neck radius for which the profile with bulge `c` meets a ball of radius
/// `eps` at height `h` with matching slope, found by bisection.
pub fn tangent_neck(c: f64, h: f64, eps: f64) -> f64 {
    // profile slope² (a + c)²h²/(h² + ac)² − 1 equals the ball's (ε² − h²)/h²
    // iff (a + c)h²/(h² + ac) = ε
    bisect(|a| (a + c) * h * h / (h * h + a * c) - eps, 0.0, h)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The case-1 two-charge body assembled from quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoChargeBody {
    pub a: f64,
    pub c: f64,
    pub volume: f64,
    pub perimeter: f64,
    pub separation: f64,
    pub energy: f64,
}

/// Case-1 body with bulge `c`: the profile from one contact through the bulge
/// to the other, plus the two caps of the charge balls beyond the contact
/// planes.
pub fn case1_body(c: f64, h: f64, eps: f64, gamma: f64) -> TwoChargeBody {
    let a = tangent_neck(c, h, eps);
    let arc = cmc_arc(a, c, h, c);
    let s = (eps * eps - h * h).sqrt();
    let cap_height = eps - s;
    let cap_volume = PI * cap_height * cap_height * (3.0 * eps - cap_height) / 3.0;
    let cap_area = 2.0 * PI * eps * cap_height;
    let volume = 2.0 * arc.volume + 2.0 * cap_volume;
    let perimeter = 2.0 * arc.area + 2.0 * cap_area;
    let separation = 2.0 * (arc.dx - s);
    TwoChargeBody { a, c, volume, perimeter, separation, energy: perimeter + gamma * eps.powi(3) / separation }
}

/// Case-1 body of volume `4π/3`, with `c` found by bisection on the
/// quadrature volume.
pub fn case1_unit_volume(h: f64, eps: f64, gamma: f64) -> TwoChargeBody {
    let target = 4.0 * PI / 3.0;
    let c = bisect(|c| case1_body(c, h, eps, gamma).volume - target, 0.9, 1.0 + eps);
    case1_body(c, h, eps, gamma)
}

/// Uniform point in the ball of radius `r`.
fn in_ball(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    loop {
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0f64)];
        if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return [p[0] * r, p[1] * r, p[2] * r];
        }
    }
}

/// Uniform point on the unit sphere.
pub fn on_sphere(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let rho = (1.0 - z * z).sqrt();
    [rho * phi.cos(), rho * phi.sin(), z]
}

/// `Σ_{i<j} 1/|xᵢ − xⱼ|`.
pub fn riesz(points: &[[f64; 3]]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d: f64 = (0..3).map(|k| (points[i][k] - points[j][k]).powi(2)).sum();
            s += 1.0 / d.sqrt();
        }
    }
    s
}

/// Smallest Riesz sum found by plain fixed-step projected gradient descent
/// from `starts` random starts in the ball of radius `r`.
pub fn multistart_riesz_min(n: usize, r: f64, starts: usize, iters: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    // the Coulomb force on a point is O(n/r²); keep moves a small fraction of r
    let step = 0.02 * r * r * r / n as f64;
    let mut grad = vec![[0.0; 3]; n];
    for _ in 0..starts {
        let mut x: Vec<[f64; 3]> = (0..n).map(|_| in_ball(&mut rng, r)).collect();
        for _ in 0..iters {
            grad.iter_mut().for_each(|g| *g = [0.0; 3]);
            for i in 0..n {
                for j in i + 1..n {
                    let d = [x[i][0] - x[j][0], x[i][1] - x[j][1], x[i][2] - x[j][2]];
                    let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                    let w = 1.0 / (r2 * r2.sqrt());
                    for k in 0..3 {
                        grad[i][k] -= d[k] * w;
                        grad[j][k] += d[k] * w;
                    }
                }
            }
            for (p, g) in x.iter_mut().zip(&grad) {
                for k in 0..3 {
                    p[k] -= step * g[k];
                }
                let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if norm > r {
                    p.iter_mut().for_each(|v| *v *= r / norm);
                }
            }
        }
        best = best.min(riesz(&x));
    }
    best
}

/// Monte Carlo estimate of `∫∫ 1/|x − y| dσ(x) dσ(y)` for the normalized
/// surface measure on the unit sphere (exact value 1).
pub fn monte_carlo_f_inf(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let (p, q) = (on_sphere(&mut rng), on_sphere(&mut rng));
        let d: f64 = (0..3).map(|k| (p[k] - q[k]).powi(2)).sum();
        acc += 1.0 / d.sqrt();
    }
    acc / samples as f64
}
