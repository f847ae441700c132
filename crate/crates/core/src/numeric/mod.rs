//! Dot products, least squares, linear classifiers and the separability oracle.

mod classifier;
mod lstsq;
mod separator;

use crate::error::{Error, Result};

pub use self::classifier::{LinearClassifier, WeightVector};
pub use self::lstsq::{least_squares, LeastSquares};
pub use self::separator::find_separator;

/// `Σ aᵢ bᵢ`.
pub fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Arity { expected: a.len(), found: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// Dot product of real weights with a natural-number sample.
pub(crate) fn score(w: &[f64], x: &[u64]) -> f64 {
    w.iter().zip(x).map(|(wi, &xi)| wi * xi as f64).sum()
}
