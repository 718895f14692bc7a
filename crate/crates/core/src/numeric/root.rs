//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Brent's method (bisection / secant / inverse quadratic interpolation).
///
/// `f(a)` and `f(b)` must have opposite signs (or one of them be zero).
/// Iterates until the bracket is narrower than `rel_tol * |x| + 4 eps |x|`.
pub fn brent<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}] (f = {fa}, {fb})"
        )));
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

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs().max(f64::MIN_POSITIVE);
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
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Bracket(format!("function is NaN at {b}")));
        }
    }
    Err(Error::Bracket(format!(
        "no convergence after {max_iter} iterations"
    )))
}

/// Widens `[lo, hi]` geometrically (factor `growth` on both ends, `lo > 0`)
/// until `f` changes sign, for functions monotone in their argument.
pub fn expand_bracket<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    growth: f64,
    max_steps: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..=max_steps {
        let (flo, fhi) = (f(lo), f(hi));
        if flo.is_nan() || fhi.is_nan() {
            break;
        }
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            return Ok((lo, hi));
        }
        lo /= growth;
        hi *= growth;
    }
    Err(Error::Bracket(format!(
        "no sign change found after expanding to [{lo:e}, {hi:e}]"
    )))
}
