//! Bracketed scalar root finding.

/// Brent's method on [a, b]; requires f(a) and f(b) of opposite sign.
///
/// Converges to |x - x*| <= xtol + rtol * |x|.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64, rtol: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * (xtol + rtol * b.abs());
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() < tol || fa.abs() <= fb.abs() {
            d = m;
            e = m;
        } else {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant
                (2.0 * m * s, 1.0 - s)
            } else {
                // inverse quadratic
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
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
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
    }
    Some(b)
}

/// Expands a bracket for a monotone increasing function g around `x0` until
/// g crosses zero, marching geometrically in the offset from `lo_limit`.
///
/// Returns (a, b) with g(a) <= 0 <= g(b). `lo_limit` may be -inf.
pub fn bracket_monotone<F: Fn(f64) -> f64>(
    g: F,
    x0: f64,
    lo_limit: f64,
    hi_limit: f64,
) -> Option<(f64, f64)> {
    let v0 = g(x0);
    if v0 == 0.0 {
        return Some((x0, x0));
    }
    let mut step = 1.0f64.min(if hi_limit.is_finite() { (hi_limit - x0).abs() / 4.0 } else { 1.0 })
        .max(1e-8);
    if v0 < 0.0 {
        // march up
        let mut a = x0;
        for _ in 0..400 {
            let b = if hi_limit.is_finite() {
                (a + step).min(a + 0.5 * (hi_limit - a))
            } else {
                a + step
            };
            if b <= a {
                return None;
            }
            if g(b) >= 0.0 {
                return Some((a, b));
            }
            a = b;
            step *= 2.0;
        }
        None
    } else {
        // march down toward lo_limit
        let mut b = x0;
        for _ in 0..400 {
            let a = if lo_limit.is_finite() {
                let gap = b - lo_limit;
                b - (step.min(0.5 * gap))
            } else {
                b - step
            };
            if a >= b {
                return None;
            }
            if g(a) <= 0.0 {
                return Some((a, b));
            }
            b = a;
            step *= 2.0;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((r - 2.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn bracket_then_solve() {
        let g = |x: f64| x.atan() - 0.3;
        let (a, b) = bracket_monotone(g, -5.0, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        let r = brent(g, a, b, 1e-14, 1e-14).unwrap();
        assert!((r - 0.3f64.tan()).abs() < 1e-12);
    }
}
