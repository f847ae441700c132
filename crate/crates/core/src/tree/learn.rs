use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use super::{DecisionTree, Node};
use crate::dataset::{Dataset, Label};
use crate::error::Result;
use crate::numeric::{find_separator, LinearClassifier};
use crate::predicate::Predicate;
use crate::split::{SplitConfig, SplitProcedure};

/// The three learner/split combinations compared in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Basic learner with information gain.
    Basic,
    /// Classifier leaves with information gain.
    LcEntropy,
    /// Classifier leaves with the AUC split.
    LcAuc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Basic, Algorithm::LcEntropy, Algorithm::LcAuc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::LcEntropy => "lc-entropy",
            Algorithm::LcAuc => "lc-auc",
        }
    }

    pub fn tag(self) -> AlgorithmTag {
        match self {
            Algorithm::Basic => AlgorithmTag::Star,
            Algorithm::LcEntropy => AlgorithmTag::Dagger,
            Algorithm::LcAuc => AlgorithmTag::DoubleDagger,
        }
    }

    pub fn split_procedure(self) -> SplitProcedure {
        match self {
            Algorithm::Basic | Algorithm::LcEntropy => SplitProcedure::InfoGain,
            Algorithm::LcAuc => SplitProcedure::Auc,
        }
    }

    pub fn uses_classifiers(self) -> bool {
        self != Algorithm::Basic
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected basic, lc-entropy or lc-auc)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmTag {
    Star,
    Dagger,
    DoubleDagger,
}

impl AlgorithmTag {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmTag::Star => "star",
            AlgorithmTag::Dagger => "dagger",
            AlgorithmTag::DoubleDagger => "ddagger",
        }
    }

    fn of(classifiers: bool, split: SplitProcedure) -> Option<AlgorithmTag> {
        match (classifiers, split) {
            (false, SplitProcedure::InfoGain) => Some(AlgorithmTag::Star),
            (true, SplitProcedure::InfoGain) => Some(AlgorithmTag::Dagger),
            (true, SplitProcedure::Auc) => Some(AlgorithmTag::DoubleDagger),
            (false, SplitProcedure::Auc) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub nonpure_nodes: usize,
    pub depth: usize,
    /// `None` for the basic learner with the AUC split, which has no tag.
    pub tag: Option<AlgorithmTag>,
    pub elapsed: Duration,
}

/// Learns with one of the three named combinations.
pub fn learn(data: &Dataset, algorithm: Algorithm, penalize_repeats: bool) -> Result<(DecisionTree, LearnReport)> {
    let split = SplitConfig { procedure: algorithm.split_procedure(), penalize_repeats };
    if algorithm.uses_classifiers() {
        learn_lc(data, &split)
    } else {
        learn_basic(data, &split)
    }
}

/// Basic learner: split until every node is pure.
pub fn learn_basic(data: &Dataset, split: &SplitConfig) -> Result<(DecisionTree, LearnReport)> {
    run(data, split, false)
}

/// Learner with classifier leaves: mixed nodes that are linearly separable
/// become classifier leaves instead of being split further.
pub fn learn_lc(data: &Dataset, split: &SplitConfig) -> Result<(DecisionTree, LearnReport)> {
    run(data, split, true)
}

enum Slot {
    Pending,
    Inner(Predicate, usize, usize),
    Leaf(Label),
    Classifier(LinearClassifier),
}

fn run(data: &Dataset, split: &SplitConfig, classifiers: bool) -> Result<(DecisionTree, LearnReport)> {
    let start = Instant::now();
    let mut arena = vec![Slot::Pending];
    let mut queue: VecDeque<(usize, Dataset, Vec<Predicate>)> = VecDeque::new();
    queue.push_back((0, data.clone(), Vec::new()));

    while let Some((id, d, path)) = queue.pop_front() {
        if d.is_pure() {
            arena[id] = Slot::Leaf(d.maxc());
            continue;
        }
        if classifiers {
            if let Some(c) = find_separator(&d) {
                assert!(c.separates(&d), "classifier leaf must separate its data");
                arena[id] = Slot::Classifier(c);
                continue;
            }
        }
        let p = split.select(&d, &path)?;
        let (sat, unsat) = d.partition(&p);
        debug_assert!(!sat.is_empty() && !unsat.is_empty());
        let (s, u) = (arena.len(), arena.len() + 1);
        arena.push(Slot::Pending);
        arena.push(Slot::Pending);
        arena[id] = Slot::Inner(p, s, u);
        let mut child_path = path;
        child_path.push(p);
        queue.push_back((s, sat, child_path.clone()));
        queue.push_back((u, unsat, child_path));
    }

    let root = assemble(&mut arena, 0);
    let tree = DecisionTree { vars: data.schema().names(), root };
    let report = LearnReport {
        nonpure_nodes: tree.size_nonpure(),
        depth: tree.depth(),
        tag: AlgorithmTag::of(classifiers, split.procedure),
        elapsed: start.elapsed(),
    };
    Ok((tree, report))
}

fn assemble(arena: &mut [Slot], id: usize) -> Node {
    match std::mem::replace(&mut arena[id], Slot::Pending) {
        Slot::Inner(p, s, u) => Node::inner(p, assemble(arena, s), assemble(arena, u)),
        Slot::Leaf(l) => Node::Leaf(l),
        Slot::Classifier(c) => Node::Classifier(c),
        Slot::Pending => unreachable!("every queued node is resolved"),
    }
}
