/// Result of [`least_squares`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    /// Minimiser of `‖Xw − y‖²`; coordinates of dropped columns are zero.
    pub w: Vec<f64>,
    /// Indices of the linearly independent columns that were kept, ascending.
    pub retained: Vec<usize>,
}

impl LeastSquares {
    pub fn rank(&self) -> usize {
        self.retained.len()
    }
}

/// Relative threshold below which a remaining column is treated as dependent.
const RANK_TOL: f64 = 1e-10;

/// Linear least squares `argmin ‖Xw − y‖²` for a row-major `X` (no intercept).
///
/// Uses Householder QR with column pivoting. Once the remaining columns have
/// (numerically) zero norm the selected columns form a maximal independent
/// subset; the problem is solved on that subset and the other weights are 0.
/// On full column rank this is `(XᵀX)⁻¹Xᵀy`.
pub fn least_squares(x: &[Vec<f64>], y: &[f64]) -> LeastSquares {
    let n = x.len();
    let d = x.first().map_or(0, Vec::len);
    assert_eq!(y.len(), n, "one target per row");
    assert!(x.iter().all(|r| r.len() == d), "rows of equal length");

    let mut cols: Vec<Vec<f64>> = (0..d).map(|j| x.iter().map(|r| r[j]).collect()).collect();
    let mut rhs = y.to_vec();
    let mut perm: Vec<usize> = (0..d).collect();

    let norm = |c: &[f64]| c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let max_norm = cols.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let tol = RANK_TOL * max_norm.max(f64::MIN_POSITIVE);

    let mut rank = 0;
    for k in 0..n.min(d) {
        // Largest remaining norm; near-ties go to the lowest original column.
        let norms: Vec<f64> = cols.iter().map(|c| norm(&c[k..])).collect();
        let top = norms[k..].iter().copied().fold(0.0, f64::max);
        let best = (k..d)
            .filter(|&j| norms[j] >= top * (1.0 - 1e-12))
            .min_by_key(|&j| perm[j])
            .expect("k < d");
        let best_norm = norms[best];
        if best_norm <= tol {
            break;
        }
        cols.swap(k, best);
        perm.swap(k, best);

        let head = cols[k][k];
        let alpha = if head >= 0.0 { -best_norm } else { best_norm };
        let mut v: Vec<f64> = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        if vv > 0.0 {
            let reflect = |c: &mut [f64]| {
                let f = 2.0 * v.iter().zip(c.iter()).map(|(a, b)| a * b).sum::<f64>() / vv;
                for (ci, vi) in c.iter_mut().zip(&v) {
                    *ci -= f * vi;
                }
            };
            for c in cols.iter_mut().skip(k + 1) {
                reflect(&mut c[k..]);
            }
            reflect(&mut rhs[k..]);
        }
        cols[k][k] = alpha;
        for t in cols[k][k + 1..].iter_mut() {
            *t = 0.0;
        }
        rank += 1;
    }

    // Back substitution on the leading rank×rank upper-triangular block.
    let mut z = vec![0.0; rank];
    for i in (0..rank).rev() {
        let mut acc = rhs[i];
        for j in i + 1..rank {
            acc -= cols[j][i] * z[j];
        }
        z[i] = acc / cols[i][i];
    }
    let mut w = vec![0.0; d];
    for (i, zi) in z.into_iter().enumerate() {
        w[perm[i]] = zi;
    }
    let mut retained = perm[..rank].to_vec();
    retained.sort_unstable();
    LeastSquares { w, retained }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column() {
        let r = least_squares(&[vec![1.0], vec![2.0]], &[1.0, -1.0]);
        assert!((r.w[0] + 0.2).abs() < 1e-15);
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn identity_interpolates() {
        let x = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let y = [1.0, -1.0, 1.0];
        let r = least_squares(&x, &y);
        for (a, b) in r.w.iter().zip(y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn duplicated_column_gets_zero_weight() {
        let x = vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 1.0], vec![3.0, 3.0, 5.0]];
        let y = [1.0, -1.0, 1.0];
        let r = least_squares(&x, &y);
        assert_eq!(r.rank(), 2);
        assert_eq!(r.w[1], 0.0);
        assert_eq!(r.retained, vec![0, 2]);
    }

    #[test]
    fn zero_matrix() {
        let r = least_squares(&[vec![0.0, 0.0]], &[1.0]);
        assert_eq!(r.w, vec![0.0, 0.0]);
        assert_eq!(r.rank(), 0);
    }
}
