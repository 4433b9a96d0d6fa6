//! Scalar root bracketing and refinement (Brent) plus a golden-section
//! minimiser used for tangential-root candidates.

use crate::error::{Result, SlError};

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// `f` may fail (integration blow-up at some lambda); failures propagate.
pub fn brent<F>(mut a: f64, mut b: f64, rel_tol: f64, max_iter: usize, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(SlError::SingularSystem(format!(
            "brent: no sign change on [{a}, {b}]"
        )));
    }
    let mut c = a;
    let mut fc = fa;
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b)?;
    }
    Ok(b)
}

/// Plain bisection; kept separate so test oracles can stay independent of
/// the Brent path.
pub fn bisect<F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SlError::SingularSystem("bisect: no sign change".into()));
    }
    while (hi - lo).abs() > tol * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimiser of `f` on `[a, b]`; returns `(x_min, f_min)`.
pub fn golden_min<F>(mut a: f64, mut b: f64, tol: f64, mut f: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > tol * (a.abs() + b.abs()).max(1.0) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    if f1 < f2 {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_pi() {
        let root = brent(3.0, 3.3, 1e-14, 100, |x| Ok(x.sin())).unwrap();
        assert!((root - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_bad_bracket() {
        assert!(brent(0.1, 0.2, 1e-12, 100, |x| Ok(x * x + 1.0)).is_err());
    }

    #[test]
    fn golden_min_parabola() {
        let (x, fx) = golden_min(-1.0, 4.0, 1e-12, |x| Ok((x - 1.5) * (x - 1.5))).unwrap();
        assert!((x - 1.5).abs() < 1e-6);
        assert!(fx < 1e-10);
    }
}
