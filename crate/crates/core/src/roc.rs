//! ROC curves and AUC of a weight vector over a dataset.
//!
//! Every distinct score `w·x` is a candidate bias; the classifier `w·x ≥ b`
//! is evaluated at each of them, plus one bias above all scores that rejects
//! everything. Samples with equal scores always switch together, so a tie
//! between a Good and a Bad sample produces a diagonal segment and half
//! credit in the area.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numeric::WeightVector;

/// Offset of the reject-all bias above the largest score.
pub const REJECT_ALL_MARGIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Accepted Bad samples.
    pub fp: usize,
    /// Accepted Good samples.
    pub tp: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// From the reject-all classifier to the loosest threshold.
    pub points: Vec<RocPoint>,
    pub n_good: usize,
    pub n_bad: usize,
}

/// Scores grouped by distinct value, descending, as `(score, good, bad)`.
fn score_groups(w: &WeightVector, data: &Dataset) -> Vec<(f64, usize, usize)> {
    let mut scored: Vec<(f64, bool)> = data.iter().map(|(x, g)| (w.score(x), g)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    for (s, g) in scored {
        match groups.last_mut() {
            Some(last) if last.0 == s => {
                if g {
                    last.1 += 1;
                } else {
                    last.2 += 1;
                }
            }
            _ => groups.push((s, usize::from(g), usize::from(!g))),
        }
    }
    groups
}

/// Candidate biases in descending order, the reject-all bias first.
pub fn boundaries(w: &WeightVector, data: &Dataset) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let groups = score_groups(w, data);
    let mut out = Vec::with_capacity(groups.len() + 1);
    out.push(groups[0].0 + REJECT_ALL_MARGIN);
    out.extend(groups.iter().map(|g| g.0));
    Ok(out)
}

/// One point per bias of [`boundaries`], in the same order.
pub fn roc_points(w: &WeightVector, data: &Dataset) -> Result<RocCurve> {
    if data.n_good() == 0 {
        return Err(Error::DegenerateCurve("no Good samples"));
    }
    if data.n_bad() == 0 {
        return Err(Error::DegenerateCurve("no Bad samples"));
    }
    let (ng, nb) = (data.n_good(), data.n_bad());
    let point = |tp: usize, fp: usize| RocPoint {
        fpr: fp as f64 / nb as f64,
        tpr: tp as f64 / ng as f64,
        fp,
        tp,
    };
    let mut points = vec![point(0, 0)];
    let (mut tp, mut fp) = (0, 0);
    for (_, g, b) in score_groups(w, data) {
        tp += g;
        fp += b;
        points.push(point(tp, fp));
    }
    Ok(RocCurve { points, n_good: ng, n_bad: nb })
}

impl RocCurve {
    /// Trapezoidal area, computed from integer counts before a single division.
    pub fn area(&self) -> f64 {
        // Twice the area scaled by |Good|·|Bad|.
        let mut twice: u128 = 0;
        for pair in self.points.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            twice += ((b.fp - a.fp) as u128) * ((a.tp + b.tp) as u128);
        }
        twice as f64 / (2.0 * self.n_good as f64 * self.n_bad as f64)
    }
}

/// Area under the ROC curve; one-class data scores 1.
pub fn auc(w: &WeightVector, data: &Dataset) -> f64 {
    if data.n_good() == 0 || data.n_bad() == 0 {
        return 1.0;
    }
    roc_points(w, data).expect("both classes present").area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::VariableSchema;

    fn fig7() -> Dataset {
        Dataset::new(
            VariableSchema::anonymous(2),
            [vec![5, 2], vec![3, 4], vec![2, 1]],
            [vec![4, 3], vec![1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn fig7_boundaries_and_points() {
        let w = WeightVector(vec![1.0, 0.0]);
        assert_eq!(boundaries(&w, &fig7()).unwrap(), vec![6.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
        let curve = roc_points(&w, &fig7()).unwrap();
        let counts: Vec<(usize, usize)> = curve.points.iter().map(|p| (p.fp, p.tp)).collect();
        assert_eq!(counts, vec![(0, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)]);
        assert!((auc(&w, &fig7()) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_weights() {
        let w = WeightVector(vec![0.0, 0.0]);
        assert_eq!(boundaries(&w, &fig7()).unwrap(), vec![1.0, 0.0]);
        let curve = roc_points(&w, &fig7()).unwrap();
        assert_eq!(curve.points.len(), 2);
        assert_eq!((curve.points[1].fpr, curve.points[1].tpr), (1.0, 1.0));
        assert_eq!(auc(&w, &fig7()), 0.5);
    }

    #[test]
    fn identical_samples_single_boundary() {
        let d = Dataset::new(VariableSchema::anonymous(1), [vec![3]], []).unwrap();
        assert_eq!(boundaries(&WeightVector(vec![2.0]), &d).unwrap(), vec![7.0, 6.0]);
    }

    #[test]
    fn degenerate_and_empty() {
        let d = Dataset::new(VariableSchema::anonymous(1), [vec![3]], []).unwrap();
        assert!(matches!(roc_points(&WeightVector(vec![1.0]), &d), Err(Error::DegenerateCurve(_))));
        assert_eq!(auc(&WeightVector(vec![1.0]), &d), 1.0);
        let empty = Dataset::empty(VariableSchema::anonymous(1));
        assert!(matches!(boundaries(&WeightVector(vec![1.0]), &empty), Err(Error::EmptyDataset)));
    }

    #[test]
    fn ordered_scores_reach_top_left() {
        let d = Dataset::new(VariableSchema::anonymous(1), [vec![5], vec![4]], [vec![1], vec![0]]).unwrap();
        let w = WeightVector(vec![1.0]);
        let curve = roc_points(&w, &d).unwrap();
        assert!(curve.points.iter().any(|p| p.fpr == 0.0 && p.tpr == 1.0));
        assert_eq!(auc(&w, &d), 1.0);
        assert_eq!(auc(&WeightVector(vec![2.0]), &d), 1.0);
    }
}
