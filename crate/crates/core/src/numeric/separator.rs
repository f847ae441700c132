//! Linear separability as LP feasibility.
//!
//! A dataset is separable iff the system
//!
//! ```text
//! w·x − b ≥  1   for x ∈ Good
//! w·x − b ≤ −1   for x ∈ Bad
//! ```
//!
//! is feasible (scale any strict separator of a finite set to margin one).
//! Feasibility is decided with the auxiliary-variable phase-1 simplex: every
//! row is written as `−aᵢ·z − t + sᵢ = −1` with `aᵢ = ±(x, −1)`, one pivot
//! on `t` makes the dictionary feasible, and the system is feasible iff the
//! minimum of `t` is zero.

use super::LinearClassifier;
use crate::dataset::Dataset;

const EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f != 0.0 {
                for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = c;
    }

    fn value(&self, col: usize) -> f64 {
        self.basis.iter().position(|&b| b == col).map_or(0.0, |r| self.rhs[r])
    }
}

/// A classifier separating `data`, or `None` when none exists.
///
/// Any candidate found by the LP is re-checked with
/// [`LinearClassifier::separates`]; a candidate failing the check is
/// reported as `None`.
pub fn find_separator(data: &Dataset) -> Option<LinearClassifier> {
    let d = data.arity();
    if data.n_bad() == 0 {
        return LinearClassifier::new(vec![0.0; d], 0.0).ok();
    }
    if data.n_good() == 0 {
        return LinearClassifier::new(vec![0.0; d], 1.0).ok();
    }

    let q = d + 1;
    let n = data.len();
    let t_col = 2 * q;
    let width = 2 * q + 1 + n;
    let mut tab = Tableau {
        rows: Vec::with_capacity(n),
        rhs: vec![-1.0; n],
        cost: vec![0.0; width],
        basis: (0..n).map(|i| t_col + 1 + i).collect(),
    };
    for (i, (x, good)) in data.iter().enumerate() {
        let sign = if good { 1.0 } else { -1.0 };
        let mut row = vec![0.0; width];
        for j in 0..q {
            let a = sign * if j < d { x[j] as f64 } else { -1.0 };
            row[j] = -a;
            row[q + j] = a;
        }
        row[t_col] = -1.0;
        row[t_col + 1 + i] = 1.0;
        tab.rows.push(row);
    }
    tab.cost[t_col] = 1.0;
    tab.pivot(0, t_col);

    for _ in 0..MAX_PIVOTS {
        if tab.value(t_col) <= EPS {
            break;
        }
        // Bland's rule: lowest-index improving column, lowest-index leaving basis.
        let Some(enter) = (0..width).find(|&j| tab.cost[j] < -EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..n {
            let a = tab.rows[i][enter];
            if a > EPS {
                let ratio = tab.rhs[i] / a;
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < best - EPS || (ratio <= best + EPS && tab.basis[i] < tab.basis[r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The objective is bounded below by zero, so a leaving row exists.
        let (r, _) = leave?;
        tab.pivot(r, enter);
    }
    if tab.value(t_col) > EPS {
        return None;
    }

    let z: Vec<f64> = (0..q).map(|j| tab.value(j) - tab.value(q + j)).collect();
    let c = LinearClassifier::new(z[..d].to_vec(), z[d]).ok()?;
    c.separates(data).then_some(c)
}
