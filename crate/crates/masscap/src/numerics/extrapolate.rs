//! Sequence-limit extraction for asymptotic quantities.

/// Limit estimate for a sequence sampled on a geometric grid.
#[derive(Debug, Clone, Copy)]
pub struct LimitEstimate {
    pub value: f64,
    /// Spread of the final accelerated entries; a convergence indicator.
    pub err: f64,
    pub converged: bool,
}

/// Iterated Aitken delta-squared acceleration.
///
/// Handles sequences s_k = L + c q^k with unknown ratio q (|q| < 1), the form
/// taken by tail quantities sampled on geometric coordinate grids.
pub fn aitken_limit(seq: &[f64], rel_tol: f64) -> LimitEstimate {
    if seq.is_empty() {
        return LimitEstimate { value: f64::NAN, err: f64::INFINITY, converged: false };
    }
    let mut cur = seq.to_vec();
    let mut best = *cur.last().unwrap();
    let mut best_err = seq_spread(&cur);
    for _ in 0..8 {
        if cur.len() < 3 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 2);
        for w in cur.windows(3) {
            let (s0, s1, s2) = (w[0], w[1], w[2]);
            let denom = s2 - 2.0 * s1 + s0;
            if denom.abs() < 1e-300 {
                next.push(s2);
            } else {
                let d = s2 - s1;
                next.push(s2 - d * d / denom);
            }
        }
        let spread = seq_spread(&next);
        if spread.is_finite() && spread <= best_err {
            best = *next.last().unwrap();
            best_err = spread;
        }
        cur = next;
    }
    let scale = best.abs().max(1.0);
    LimitEstimate { value: best, err: best_err, converged: best_err <= rel_tol * scale }
}

fn seq_spread(s: &[f64]) -> f64 {
    if s.len() < 2 {
        return f64::INFINITY;
    }
    let tail = &s[s.len().saturating_sub(3)..];
    let mx = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mn = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    mx - mn
}

/// True when the tail of `seq` grows without sign of settling: used to flag
/// divergent limits (the sequence must be positive).
pub fn looks_divergent(seq: &[f64]) -> bool {
    if seq.len() < 4 {
        return false;
    }
    let n = seq.len();
    let growth = seq[n - 1] / seq[n - 2].max(1e-300);
    let growth_prev = seq[n - 2] / seq[n - 3].max(1e-300);
    growth > 1.05 && growth_prev > 1.05 && seq[n - 1] > 4.0 * seq[0].abs().max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_geometric_tail() {
        // s_k = 1 + 0.5^k converges slowly; Aitken nails the limit.
        let seq: Vec<f64> = (0..12).map(|k| 1.0 + 0.5f64.powi(k)).collect();
        let l = aitken_limit(&seq, 1e-10);
        assert!(l.converged);
        assert!((l.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn accelerates_power_tail() {
        // m(r) = 1 - 1/r sampled at r = 2^k: s_k = 1 - 2^-k
        let seq: Vec<f64> = (0..20).map(|k| 1.0 - 2.0f64.powi(-k)).collect();
        let l = aitken_limit(&seq, 1e-9);
        assert!(l.converged && (l.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn flags_divergence() {
        let seq: Vec<f64> = (0..10).map(|k| 2.0f64.powi(k)).collect();
        assert!(looks_divergent(&seq));
        let seq: Vec<f64> = (0..10).map(|k| 1.0 + 0.3f64.powi(k)).collect();
        assert!(!looks_divergent(&seq));
    }
}
