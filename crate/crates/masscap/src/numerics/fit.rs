//! Small dense least-squares fits used by expansion and rate diagnostics.

/// Weighted least squares for y = sum_j c_j * phi_j(x) with a small basis.
///
/// Returns (coefficients, weighted residual norm). Normal equations solved by
/// Gaussian elimination with partial pivoting; the bases here are size <= 4.
pub fn weighted_lsq(
    xs: &[f64],
    ys: &[f64],
    weights: &[f64],
    basis: &[&dyn Fn(f64) -> f64],
) -> (Vec<f64>, f64) {
    let m = basis.len();
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for ((&x, &y), &w) in xs.iter().zip(ys).zip(weights) {
        let row: Vec<f64> = basis.iter().map(|p| p(x)).collect();
        for i in 0..m {
            for j in 0..m {
                ata[i][j] += w * row[i] * row[j];
            }
            atb[i] += w * row[i] * y;
        }
    }
    let coeff = solve_dense(&mut ata, &mut atb);
    let mut resid = 0.0;
    for ((&x, &y), &w) in xs.iter().zip(ys).zip(weights) {
        let pred: f64 = basis.iter().zip(&coeff).map(|(p, c)| c * p(x)).sum();
        resid += w * (y - pred) * (y - pred);
    }
    (coeff, resid.sqrt())
}

fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col];
        if p.abs() < 1e-300 {
            continue;
        }
        for row in col + 1..n {
            let f = a[row][col] / p;
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = if a[row][row].abs() < 1e-300 { 0.0 } else { s / a[row][row] };
    }
    x
}

/// Slope of ln(y) against ln(x) by unweighted least squares.
///
/// Points with non-positive x or y are skipped; returns None if fewer than two
/// usable points remain.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_even_polynomial() {
        let xs: Vec<f64> = (1..=30).map(|i| 0.01 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&r| 3.0 - 2.0 * r * r + 0.7 * r.powi(4)).collect();
        let ws: Vec<f64> = xs.iter().map(|&r| r.powi(-4)).collect();
        let one = |_: f64| 1.0;
        let sq = |r: f64| r * r;
        let quart = |r: f64| r.powi(4);
        let basis: Vec<&dyn Fn(f64) -> f64> = vec![&one, &sq, &quart];
        let (c, resid) = weighted_lsq(&xs, &ys, &ws, &basis);
        assert!((c[0] - 3.0).abs() < 1e-10);
        assert!((c[1] + 2.0).abs() < 1e-8);
        assert!((c[2] - 0.7).abs() < 1e-6);
        assert!(resid < 1e-9);
    }

    #[test]
    fn log_slope_of_power_law() {
        let xs: Vec<f64> = (1..=10).map(|i| 2.0f64.powi(-i)).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 5.0 * x.powf(0.4)).collect();
        let s = log_log_slope(&xs, &ys).unwrap();
        assert!((s - 0.4).abs() < 1e-12);
    }
}
