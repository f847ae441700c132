//! Exact decision-tree representations of memoryless game strategies.
//!
//! The pipeline: build or load a [`game::Game`], solve it for a memoryless
//! strategy, encode the strategy as a labelled [`dataset::Dataset`], and learn
//! a [`tree::DecisionTree`] that classifies every sample correctly. Trees may
//! use linear classifiers at their leaves, which usually makes them smaller.

#![forbid(unsafe_code)]

pub mod dataset;
pub mod error;
pub mod game;
pub mod numeric;
pub mod predicate;
pub mod roc;
pub mod split;
pub mod tree;

pub use dataset::{Dataset, Label, VariableSchema};
pub use error::{Error, Result};
pub use game::{Game, MemorylessStrategy, Objective, Player};
pub use numeric::LinearClassifier;
pub use predicate::{Op, Predicate};
pub use tree::{Algorithm, DecisionTree, LearnReport, Node};
