//! Projected gradient descent for the Riesz sum inside a ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dist, packing_feasible, riesz_sum, validate, ChargeConfig, Point};
use crate::error::{domain, Error, Result};

/// Options for [`optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    /// Independent random starts; the best local minimum is kept.
    pub restarts: usize,
    /// Stop once the projected gradient `‖x − P(x − ∇S)‖` is below this.
    pub tol: f64,
    /// Iteration cap per start.
    pub max_iter: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { restarts: 8, tol: 1e-9, max_iter: 50_000 }
    }
}

/// Outcome of [`optimize_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub config: ChargeConfig,
    /// Riesz sum `S` of the returned configuration.
    pub riesz_sum: f64,
    /// Projected gradient norm at the returned configuration.
    pub projected_gradient: f64,
    /// Iterations used by the winning start.
    pub iterations: usize,
    /// Index of the winning start.
    pub best_start: usize,
    /// Riesz sum reached by every start.
    pub start_energies: Vec<f64>,
}

/// Locally minimizes the Coulomb energy of `n` charges of radius `eps` held in
/// the ball of radius `r` about the origin.
///
/// The result does not depend on `γ`, which only scales the energy. Starts are
/// drawn from a ChaCha8 stream keyed by `seed`, so results are reproducible
/// across platforms.
///
/// ```
/// use charged_drop::charges::{optimize, OptimizeOptions};
/// let cfg = optimize(2, 0.01, 1.0, 7, &OptimizeOptions::default()).unwrap();
/// let [p, q] = [cfg.centers[0], cfg.centers[1]];
/// let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
/// assert!((d - 1.98).abs() < 1e-9);
/// ```
pub fn optimize(n: usize, eps: f64, r: f64, seed: u64, opts: &OptimizeOptions) -> Result<ChargeConfig> {
    Ok(optimize_report(n, eps, r, seed, opts)?.config)
}

/// [`optimize`] with diagnostics.
pub fn optimize_report(n: usize, eps: f64, r: f64, seed: u64, opts: &OptimizeOptions) -> Result<OptimizeReport> {
    if n == 0 {
        return Err(domain("need at least one charge"));
    }
    if !(eps > 0.0) || !(r > eps) || !r.is_finite() {
        return Err(domain(format!("need 0 < ε < R, got ε = {eps}, R = {r}")));
    }
    if !packing_feasible(n, eps, r) {
        return Err(Error::Infeasible(format!("{n} balls of radius {eps} cannot fit in a ball of radius {r}")));
    }
    if opts.restarts == 0 {
        return Err(domain("need at least one start"));
    }
    let shell = r - eps;
    let mut best: Option<(Vec<f64>, Descent, usize)> = None;
    let mut start_energies = Vec::with_capacity(opts.restarts);
    for start in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(start as u64);
        let x0 = sample_start(&mut rng, n, eps, shell)?;
        let (x, d) = descend(x0, shell, opts);
        start_energies.push(d.energy);
        if best.as_ref().is_none_or(|(_, b, _)| d.energy < b.energy) {
            best = Some((x, d, start));
        }
    }
    let (x, d, best_start) = best.expect("at least one start");
    let config = ChargeConfig::new(to_points(&x), eps, r);
    for v in validate(&config) {
        if matches!(v, super::Violation::Containment { .. }) {
            return Err(domain(format!("optimizer left the host: {v}")));
        }
    }
    Ok(OptimizeReport {
        riesz_sum: riesz_sum(&config.centers)?,
        config,
        projected_gradient: d.pg_norm,
        iterations: d.iterations,
        best_start,
        start_energies,
    })
}

fn sample_start(rng: &mut ChaCha8Rng, n: usize, eps: f64, shell: f64) -> Result<Vec<f64>> {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while pts.len() < n {
        attempts += 1;
        if attempts > 1000 * n + 10_000 {
            return Err(Error::Infeasible(format!("could not place {n} disjoint charges after {attempts} draws")));
        }
        let p: Point = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > 1.0 {
            continue;
        }
        let p = [p[0] * shell, p[1] * shell, p[2] * shell];
        if pts.iter().all(|q| dist(&p, q) >= 2.0 * eps) {
            pts.push(p);
        }
    }
    Ok(pts.iter().flatten().copied().collect())
}

fn to_points(x: &[f64]) -> Vec<Point> {
    x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

/// Gradient of the Riesz sum over flat coordinates.
fn gradient(x: &[f64], grad: &mut [f64]) {
    grad.iter_mut().for_each(|g| *g = 0.0);
    let n = x.len() / 3;
    for i in 0..n {
        let (xi, yi, zi) = (x[3 * i], x[3 * i + 1], x[3 * i + 2]);
        for j in i + 1..n {
            let (dx, dy, dz) = (xi - x[3 * j], yi - x[3 * j + 1], zi - x[3 * j + 2]);
            let r2 = dx * dx + dy * dy + dz * dz;
            let inv = 1.0 / r2.sqrt();
            let w = inv * inv * inv;
            grad[3 * i] -= dx * w;
            grad[3 * i + 1] -= dy * w;
            grad[3 * i + 2] -= dz * w;
            grad[3 * j] += dx * w;
            grad[3 * j + 1] += dy * w;
            grad[3 * j + 2] += dz * w;
        }
    }
}

/// `S(y) − S(x)`, accurate relative to the change itself: each pair uses
/// `1/r' − 1/r = (r² − r'²)/((r + r') r r')` with `r² − r'²` formed from the
/// displacements.
fn energy_change(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() / 3;
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let (mut r2, mut q2, mut diff) = (0.0, 0.0, 0.0);
            for k in 0..3 {
                let d = x[3 * i + k] - x[3 * j + k];
                let e = y[3 * i + k] - y[3 * j + k];
                let moved = (x[3 * i + k] - y[3 * i + k]) - (x[3 * j + k] - y[3 * j + k]);
                r2 += d * d;
                q2 += e * e;
                diff += moved * (d + e);
            }
            let (r, q) = (r2.sqrt(), q2.sqrt());
            total += diff / ((r + q) * r * q);
        }
    }
    total
}

/// Projects every point onto the ball of radius `shell`.
fn project(x: &mut [f64], shell: f64) {
    for p in x.chunks_exact_mut(3) {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r > shell {
            let mut f = shell / r;
            // rounding may leave the point an ulp outside
            while dist(&[f * p[0], f * p[1], f * p[2]], &[0.0; 3]) > shell {
                f *= 1.0 - f64::EPSILON;
            }
            p.iter_mut().for_each(|v| *v *= f);
        }
    }
}

fn step_to(x: &[f64], grad: &[f64], alpha: f64, shell: f64, out: &mut [f64]) {
    for ((o, xi), g) in out.iter_mut().zip(x).zip(grad) {
        *o = xi - alpha * g;
    }
    project(out, shell);
}

fn projected_gradient_norm(x: &[f64], grad: &[f64], shell: f64, buf: &mut [f64]) -> f64 {
    step_to(x, grad, 1.0, shell, buf);
    x.iter().zip(buf.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy)]
struct Descent {
    energy: f64,
    pg_norm: f64,
    iterations: usize,
}

/// Drops the outward-normal part of the gradient for charges pressed against
/// the shell, leaving the component that moves them along it.
fn tangential(x: &[f64], grad: &[f64], shell: f64, out: &mut [f64]) {
    for ((p, g), o) in x.chunks_exact(3).zip(grad.chunks_exact(3)).zip(out.chunks_exact_mut(3)) {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let radial = (g[0] * p[0] + g[1] * p[1] + g[2] * p[2]) / r;
        if r >= shell * (1.0 - 1e-12) && radial < 0.0 {
            for k in 0..3 {
                o[k] = g[k] - radial * p[k] / r;
            }
        } else {
            o.copy_from_slice(g);
        }
    }
}

/// Barzilai–Borwein steps along the active-set gradient, safeguarded by
/// Armijo backtracking on the projection arc.
///
/// Charges on the shell feel an O(N) outward force, so rounding the radius
/// in the projection perturbs the energy by about `N²` ulps. Once the
/// measured change sinks below that floor, sufficient decrease is judged from
/// the trapezoid estimate `½(d(x) + d(y))·(y − x)` of the tangential
/// gradient `d`, which the radial rounding does not touch.
fn descend(mut x: Vec<f64>, shell: f64, opts: &OptimizeOptions) -> (Vec<f64>, Descent) {
    const ARMIJO: f64 = 1e-4;
    let m = x.len();
    let mut grad = vec![0.0; m];
    let mut dir = vec![0.0; m];
    let mut trial = vec![0.0; m];
    let mut trial_grad = vec![0.0; m];
    let mut trial_dir = vec![0.0; m];
    let mut buf = vec![0.0; m];
    project(&mut x, shell);
    gradient(&x, &mut grad);
    tangential(&x, &grad, shell, &mut dir);
    let noise = 64.0 * f64::EPSILON * riesz_sum(&to_points(&x)).unwrap_or(0.0);
    let mut pg = projected_gradient_norm(&x, &grad, shell, &mut buf);
    let dnorm = dir.iter().map(|g| g * g).sum::<f64>().sqrt();
    let mut alpha = if dnorm > 0.0 { 0.1 * shell / dnorm } else { 1.0 };
    let mut it = 0;
    while it < opts.max_iter && pg > opts.tol {
        it += 1;
        let mut accepted = false;
        let mut a = alpha;
        for _ in 0..60 {
            step_to(&x, &dir, a, shell, &mut trial);
            let decrease: f64 = x.iter().zip(&trial).zip(&dir).map(|((xi, ti), d)| d * (xi - ti)).sum();
            if decrease > 0.0 {
                let change = energy_change(&x, &trial);
                gradient(&trial, &mut trial_grad);
                tangential(&trial, &trial_grad, shell, &mut trial_dir);
                let sufficient = if change.abs() > noise {
                    change <= -ARMIJO * decrease
                } else {
                    let est: f64 = (0..m).map(|k| 0.5 * (dir[k] + trial_dir[k]) * (trial[k] - x[k])).sum();
                    est <= -ARMIJO * decrease
                };
                if sufficient {
                    accepted = true;
                    break;
                }
            }
            a *= 0.5;
        }
        if !accepted {
            break;
        }
        let (mut ss, mut sy) = (0.0, 0.0);
        for k in 0..m {
            let s = trial[k] - x[k];
            let y = trial_dir[k] - dir[k];
            ss += s * s;
            sy += s * y;
        }
        alpha = if sy > 0.0 { (ss / sy).clamp(1e-14, 1e6) } else { (2.0 * a).min(1e6) };
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut grad, &mut trial_grad);
        std::mem::swap(&mut dir, &mut trial_dir);
        pg = projected_gradient_norm(&x, &grad, shell, &mut buf);
    }
    let energy = riesz_sum(&to_points(&x)).unwrap_or(f64::INFINITY);
    (x, Descent { energy, pg_norm: pg, iterations: it })
}
