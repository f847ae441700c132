use serde::{Deserialize, Serialize};

use super::score;
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};

/// `c_{w,b}(x) = yes` iff `w·x ≥ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearClassifier {
    pub w: Vec<f64>,
    pub b: f64,
}

impl LinearClassifier {
    pub fn new(w: Vec<f64>, b: f64) -> Result<Self> {
        if w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
            return Err(Error::Schema("classifier coefficients must be finite".into()));
        }
        Ok(LinearClassifier { w, b })
    }

    pub fn arity(&self) -> usize {
        self.w.len()
    }

    pub fn classify(&self, x: &[u64]) -> Result<Label> {
        if x.len() != self.w.len() {
            return Err(Error::Arity { expected: self.w.len(), found: x.len() });
        }
        Ok(Label::from_bool(score(&self.w, x) >= self.b))
    }

    /// Accepts exactly the Good samples of `data`.
    pub fn separates(&self, data: &Dataset) -> bool {
        data.arity() == self.w.len()
            && data.iter().all(|(x, good)| (score(&self.w, x) >= self.b) == good)
    }
}

/// Bias-free weights used to rank samples.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn score(&self, x: &[u64]) -> f64 {
        score(&self.0, x)
    }
}

impl From<Vec<f64>> for WeightVector {
    fn from(w: Vec<f64>) -> Self {
        WeightVector(w)
    }
}
