//! Candidate predicates and the two split procedures.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numeric::{least_squares, WeightVector};
use crate::predicate::{Op, Predicate};
use crate::roc::auc;

/// Below this, the best information gain counts as "no gain".
pub const GAIN_EPS: f64 = 1e-12;

/// Per-occurrence factor applied to AUC scores of predicates on variables
/// already tested on the current path (only with `penalize_repeats`).
pub const REPEAT_PENALTY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitProcedure {
    InfoGain,
    Auc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitConfig {
    pub procedure: SplitProcedure,
    pub penalize_repeats: bool,
}

impl SplitConfig {
    pub fn info_gain() -> Self {
        SplitConfig { procedure: SplitProcedure::InfoGain, penalize_repeats: false }
    }

    pub fn auc() -> Self {
        SplitConfig { procedure: SplitProcedure::Auc, penalize_repeats: false }
    }

    pub fn with_penalty(mut self, on: bool) -> Self {
        self.penalize_repeats = on;
        self
    }

    /// Picks a predicate for `data`; `path` holds the predicates of the
    /// ancestors of the node being split.
    pub fn select(&self, data: &Dataset, path: &[Predicate]) -> Result<Predicate> {
        match self.procedure {
            SplitProcedure::InfoGain => split_ig(data),
            SplitProcedure::Auc => split_auc(data, self, path),
        }
    }
}

/// All `x = c` and `x ≥ c` tests with `c` taken from the data that leave both
/// sides nonempty, ordered by variable, then `=` before `≥`, then constant.
pub fn predicate_universe(data: &Dataset) -> Vec<Predicate> {
    let mut out = Vec::new();
    for var in 0..data.arity() {
        let values = data.column_values(var);
        if values.len() < 2 {
            continue;
        }
        out.extend(values.iter().map(|&c| Predicate::new(var, Op::Eq, c)));
        out.extend(values[1..].iter().map(|&c| Predicate::new(var, Op::Ge, c)));
    }
    out
}

fn binary_entropy(good: usize, total: usize) -> f64 {
    if total == 0 || good == 0 || good == total {
        return 0.0;
    }
    let p = good as f64 / total as f64;
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Shannon entropy (bits) of the Good/Bad label distribution.
pub fn entropy(data: &Dataset) -> f64 {
    binary_entropy(data.n_good(), data.len())
}

/// Good/total counts on the two sides of `p`, without materialising them.
fn side_counts(data: &Dataset, p: &Predicate) -> [(usize, usize); 2] {
    let mut c = [(0, 0); 2];
    for (x, g) in data.iter() {
        let side = &mut c[usize::from(!p.holds(x))];
        side.0 += usize::from(g);
        side.1 += 1;
    }
    c
}

fn gain_from_counts(data: &Dataset, [(gs, ns), (gu, nu)]: [(usize, usize); 2]) -> f64 {
    let n = data.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    entropy(data) - (ns as f64 / n) * binary_entropy(gs, ns) - (nu as f64 / n) * binary_entropy(gu, nu)
}

pub fn info_gain(data: &Dataset, p: &Predicate) -> f64 {
    gain_from_counts(data, side_counts(data, p))
}

fn fallback_from_counts([(gs, ns), (gu, nu)]: [(usize, usize); 2]) -> f64 {
    assert!(ns > 0 && nu > 0, "fallback score needs two nonempty sides");
    let (ns, nu) = (ns as f64, nu as f64);
    let (gs, gu) = (gs as f64, gu as f64);
    let (bs, bu) = (ns - gs, nu - gu);
    f64::max(bu / nu + gs / ns, gu / nu + bs / ns)
}

/// Score used when no predicate has positive information gain: the better of
/// the two ways of reading the split as "one side Good, the other Bad".
///
/// # Panics
///
/// If either side of the split is empty.
pub fn fallback_score(data: &Dataset, p: &Predicate) -> f64 {
    fallback_from_counts(side_counts(data, p))
}

/// First maximiser in iteration order.
fn argmax(scores: impl Iterator<Item = (Predicate, f64)>) -> Option<(Predicate, f64)> {
    let mut best: Option<(Predicate, f64)> = None;
    for (p, s) in scores {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((p, s));
        }
    }
    best
}

/// Information-gain split with the ratio-sum fallback.
pub fn split_ig(data: &Dataset) -> Result<Predicate> {
    let universe = predicate_universe(data);
    let counts: Vec<_> = universe.iter().map(|p| side_counts(data, p)).collect();
    let (best, gain) = argmax(universe.iter().zip(&counts).map(|(p, c)| (*p, gain_from_counts(data, *c))))
        .ok_or(Error::EmptyUniverse)?;
    if gain > GAIN_EPS {
        return Ok(best);
    }
    let (best, _) = argmax(universe.iter().zip(&counts).map(|(p, c)| (*p, fallback_from_counts(*c))))
        .expect("universe is nonempty");
    Ok(best)
}

/// `auc(w_sat, D[p]) + auc(w_unsat, D[¬p])` with least-squares weights fitted
/// to ±1 targets on each side.
pub fn auc_score(data: &Dataset, p: &Predicate) -> f64 {
    let (sat, unsat) = data.partition(p);
    side_auc(&sat) + side_auc(&unsat)
}

fn side_auc(side: &Dataset) -> f64 {
    if side.is_pure() {
        return 1.0;
    }
    let (x, y) = side.to_design();
    let w = WeightVector(least_squares(&x, &y).w);
    auc(&w, side)
}

/// AUC split. With `penalize_repeats`, a predicate's score is multiplied by
/// [`REPEAT_PENALTY`] once for every ancestor testing the same variable.
pub fn split_auc(data: &Dataset, config: &SplitConfig, path: &[Predicate]) -> Result<Predicate> {
    let universe = predicate_universe(data);
    let scored = universe.iter().map(|p| {
        let mut s = auc_score(data, p);
        if config.penalize_repeats {
            let uses = path.iter().filter(|q| q.var == p.var).count();
            s *= REPEAT_PENALTY.powi(uses as i32);
        }
        (*p, s)
    });
    argmax(scored).map(|(p, _)| p).ok_or(Error::EmptyUniverse)
}
