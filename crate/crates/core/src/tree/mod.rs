//! Binary decision trees over natural-number vectors.
//!
//! Inner nodes test a [`Predicate`]; the first (`sat`) child is taken when it
//! holds. Leaves either carry a fixed answer or a [`LinearClassifier`] that
//! decides for the samples reaching it.

mod export;
mod learn;

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::numeric::LinearClassifier;
use crate::predicate::Predicate;

pub use self::learn::{learn, learn_basic, learn_lc, Algorithm, AlgorithmTag, LearnReport};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Inner {
        predicate: Predicate,
        sat: Box<Node>,
        unsat: Box<Node>,
    },
    Leaf(Label),
    Classifier(LinearClassifier),
}

impl Node {
    pub fn inner(predicate: Predicate, sat: Node, unsat: Node) -> Node {
        Node::Inner { predicate, sat: Box::new(sat), unsat: Box::new(unsat) }
    }

    pub fn yes() -> Node {
        Node::Leaf(Label::Yes)
    }

    pub fn no() -> Node {
        Node::Leaf(Label::No)
    }

    fn nonpure(&self) -> usize {
        match self {
            Node::Inner { sat, unsat, .. } => 1 + sat.nonpure() + unsat.nonpure(),
            Node::Leaf(_) => 0,
            Node::Classifier(_) => 1,
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Inner { sat, unsat, .. } => 1 + sat.depth().max(unsat.depth()),
            _ => 0,
        }
    }

    fn count(&self, inner: &mut usize, leaves: &mut usize, classifiers: &mut usize) {
        match self {
            Node::Inner { sat, unsat, .. } => {
                *inner += 1;
                sat.count(inner, leaves, classifiers);
                unsat.count(inner, leaves, classifiers);
            }
            Node::Leaf(_) => *leaves += 1,
            Node::Classifier(_) => *classifiers += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    vars: Vec<String>,
    root: Node,
}

/// Node counts by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeCounts {
    pub inner: usize,
    pub pure_leaves: usize,
    pub classifier_leaves: usize,
}

impl DecisionTree {
    /// Checks that predicates and classifiers fit `vars.len()`.
    pub fn new(vars: Vec<String>, root: Node) -> Result<Self> {
        fn check(n: &Node, d: usize) -> Result<()> {
            match n {
                Node::Inner { predicate, sat, unsat } => {
                    if predicate.var >= d {
                        return Err(Error::Arity { expected: d, found: predicate.var + 1 });
                    }
                    check(sat, d)?;
                    check(unsat, d)
                }
                Node::Leaf(_) => Ok(()),
                Node::Classifier(c) if c.arity() != d => {
                    Err(Error::Arity { expected: d, found: c.arity() })
                }
                Node::Classifier(_) => Ok(()),
            }
        }
        check(&root, vars.len())?;
        Ok(DecisionTree { vars, root })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn evaluate(&self, x: &[u64]) -> Result<Label> {
        if x.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), found: x.len() });
        }
        let mut n = &self.root;
        loop {
            match n {
                Node::Inner { predicate, sat, unsat } => {
                    n = if predicate.holds(x) { sat } else { unsat };
                }
                Node::Leaf(l) => return Ok(*l),
                Node::Classifier(c) => return c.classify(x),
            }
        }
    }

    /// The first sample (in dataset order) the tree gets wrong, with its
    /// true label. Every sample is wrong when the arities differ.
    pub fn first_counterexample(&self, data: &Dataset) -> Option<(Vec<u64>, bool)> {
        data.iter()
            .find(|(x, good)| self.evaluate(x).map_or(true, |l| l.is_yes() != *good))
            .map(|(x, good)| (x.to_vec(), good))
    }

    /// `L(T) ∩ Train = Good`.
    pub fn verify_exact(&self, data: &Dataset) -> bool {
        data.arity() == self.arity() && self.first_counterexample(data).is_none()
    }

    /// Inner nodes plus classifier leaves.
    pub fn size_nonpure(&self) -> usize {
        self.root.nonpure()
    }

    /// Edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn counts(&self) -> NodeCounts {
        let mut c = NodeCounts::default();
        self.root.count(&mut c.inner, &mut c.pure_leaves, &mut c.classifier_leaves);
        c
    }

    /// Checks the learner's structural guarantees: no predicate repeats on a
    /// root-to-leaf path and no path has more than `max_path` inner nodes.
    pub fn check_structure(&self, max_path: usize) -> std::result::Result<(), String> {
        fn walk(n: &Node, path: &mut Vec<Predicate>, max: usize) -> std::result::Result<(), String> {
            let Node::Inner { predicate, sat, unsat } = n else {
                return Ok(());
            };
            if path.contains(predicate) {
                return Err(format!("predicate {predicate} repeats on a path"));
            }
            path.push(*predicate);
            if path.len() > max {
                return Err(format!("path of length {} exceeds bound {max}", path.len()));
            }
            walk(sat, path, max)?;
            walk(unsat, path, max)?;
            path.pop();
            Ok(())
        }
        walk(&self.root, &mut Vec::new(), max_path)
    }

    /// True iff `self` arises from `other` by replacing some subtrees of
    /// `other` with single classifier leaves.
    pub fn is_contraction_of(&self, other: &DecisionTree) -> bool {
        fn rel(a: &Node, b: &Node) -> bool {
            match (a, b) {
                (Node::Classifier(_), _) => true,
                (Node::Leaf(x), Node::Leaf(y)) => x == y,
                (
                    Node::Inner { predicate: p, sat: s1, unsat: u1 },
                    Node::Inner { predicate: q, sat: s2, unsat: u2 },
                ) => p == q && rel(s1, s2) && rel(u1, u2),
                _ => false,
            }
        }
        self.vars == other.vars && rel(&self.root, &other.root)
    }
}

/// The bound `2·|Var|·|X|` on root-to-leaf path lengths for trees learned
/// from `data`.
pub fn path_bound(data: &Dataset) -> usize {
    2 * data.arity() * data.domain_size()
}
