//! Bracketed one-dimensional root finding and minimization (Brent's methods).

use crate::error::{Error, Result};

/// Brent root finder on `[a, b]`.
///
/// `f(a)` and `f(b)` must have opposite signs (or one of them be zero). The
/// iteration stops when the bracket is narrower than
/// `2·f64::EPSILON·|x| + xtol/2`, so `xtol = 0.0` asks for full precision.
pub fn brent_root<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BadBracket { lo: a, hi: b, reason: format!("no sign change (f = {fa:e}, {fb:e})") });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Result of [`brent_min`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

/// Brent minimizer: golden-section search accelerated by parabolic steps.
///
/// Searches `[lo, hi]` for a local minimum of `f`, starting from the interior
/// guess `x0`. Converges when the bracket half-width falls below
/// `rtol·|x| + atol`.
pub fn brent_min<F>(mut f: F, lo: f64, hi: f64, x0: f64, rtol: f64, atol: f64, max_iter: usize) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    const GOLD: f64 = 0.381_966_011_250_105_1;
    if !(lo < hi) || !(lo..=hi).contains(&x0) {
        return Err(Error::BadBracket { lo, hi, reason: format!("start {x0} not inside an ordered interval") });
    }
    let (mut a, mut b) = (lo, hi);
    let mut x = x0;
    let mut fx = f(x)?;
    let mut evaluations = 1;
    let (mut w, mut v) = (x, x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = rtol * x.abs() + atol;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        evaluations += 1;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(Minimum { x, fx, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_cubic() {
        let r = brent_root(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 0.0, 200).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 4e-16);
    }

    #[test]
    fn root_resolves_tiny_offsets() {
        let target = 1.234_567e-9;
        let r = brent_root(|x| Ok(x - target), -0.05, 0.5, 0.0, 300).unwrap();
        assert!((r / target - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bad_bracket_is_reported() {
        assert!(matches!(brent_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 0.0, 50), Err(Error::BadBracket { .. })));
    }

    #[test]
    fn minimum_of_quartic() {
        let m = brent_min(|x| Ok((x - 0.3).powi(4) + (x - 0.3).powi(2)), -1.0, 2.0, 0.5, 1e-12, 1e-14, 200).unwrap();
        assert!((m.x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn minimum_of_cosine() {
        let m = brent_min(|x| Ok(x.cos()), 2.0, 4.0, 2.5, 1e-10, 0.0, 200).unwrap();
        assert!((m.x - std::f64::consts::PI).abs() < 1e-7);
    }
}
