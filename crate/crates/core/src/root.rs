//! Bracketing and Brent refinement for monotone residuals.

use crate::error::{Error, Result};

const MAX_EXPANSIONS: usize = 200;
const MAX_BRENT_ITER: usize = 300;
/// Residuals this small are accepted as roots.
const F_TOLERANCE: f64 = 1e-12;

/// Grow `[lo, hi]` until `f` changes sign across it. `increasing` states the
/// direction of monotonicity of `f`. `floor`, when set, is a hard lower limit
/// of the domain.
pub(crate) fn expand_bracket<F>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
    floor: Option<f64>,
) -> Result<(f64, f64, f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if let Some(fl) = floor {
        lo = lo.max(fl);
        hi = hi.max(lo);
    }
    // Orient so that g = ±f is increasing.
    let g = |x: f64| f(x).map(|v| if increasing { v } else { -v });
    let mut glo = g(lo)?;
    let mut width = (hi - lo).max(1.0);
    let mut n = 0;
    while glo > 0.0 {
        n += 1;
        if n > MAX_EXPANSIONS {
            return Err(Error::SearchFailed("lower bracket expansion".into()));
        }
        hi = lo;
        lo -= width;
        width *= 2.0;
        if let Some(fl) = floor {
            if lo <= fl {
                lo = fl;
                glo = g(lo)?;
                if glo > 0.0 {
                    return Err(Error::SearchFailed("root below the domain floor".into()));
                }
                break;
            }
        }
        glo = g(lo)?;
    }
    let mut ghi = g(hi)?;
    width = (hi - lo).max(1.0);
    n = 0;
    while ghi < 0.0 {
        n += 1;
        if n > MAX_EXPANSIONS {
            return Err(Error::SearchFailed("upper bracket expansion".into()));
        }
        lo = hi;
        glo = ghi;
        hi += width;
        width *= 2.0;
        ghi = g(hi)?;
    }
    let sign = if increasing { 1.0 } else { -1.0 };
    Ok((lo, hi, sign * glo, sign * ghi))
}

/// Brent's method on a bracket with `f(lo)` and `f(hi)` of opposite sign.
pub(crate) fn brent<F>(f: &F, lo: f64, hi: f64, flo: f64, fhi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, flo, fhi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::SearchFailed(
            "bracket does not straddle the root".into(),
        ));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_BRENT_ITER {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if fb.abs() <= F_TOLERANCE || m.abs() <= tol {
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
        fb = f(b)?;
    }
    Err(Error::SearchFailed(
        "Brent iteration budget exhausted".into(),
    ))
}
