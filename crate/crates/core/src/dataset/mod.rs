//! Labelled integer datasets.
//!
//! A [`Dataset`] is a finite set of natural-number vectors, each carrying
//! exactly one of two labels: `Good` (the state-action pairs a strategy plays)
//! or `Bad` (all other available pairs). The vectors are kept in a sorted map,
//! so iteration order, CSV export and everything derived from them is
//! deterministic.

mod csv;
mod encode;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::predicate::Predicate;

pub use self::encode::from_strategy;

/// Leaf answer of a decision tree, and the output of a classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Yes,
    No,
}

impl Label {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Label::Yes
        } else {
            Label::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Label::Yes
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Yes => "yes",
            Label::No => "no",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    State,
    Action,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::State => "state",
            Role::Action => "action",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub role: Role,
}

/// Ordered variable list of a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSchema {
    vars: Vec<Variable>,
}

impl VariableSchema {
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if v.name.is_empty() {
                return Err(Error::Schema("empty variable name".into()));
            }
            if v.name.contains([',', ':', '\n', '#']) || v.name == "label" {
                return Err(Error::Schema(format!("invalid variable name {:?}", v.name)));
            }
            if !seen.insert(v.name.as_str()) {
                return Err(Error::Schema(format!("duplicate variable {:?}", v.name)));
            }
        }
        Ok(VariableSchema { vars })
    }

    /// Schema with the given state variables followed by the action variables.
    pub fn from_names<S: AsRef<str>>(state: &[S], action: &[S]) -> Result<Self> {
        let vars = state
            .iter()
            .map(|n| Variable { name: n.as_ref().to_string(), role: Role::State })
            .chain(
                action
                    .iter()
                    .map(|n| Variable { name: n.as_ref().to_string(), role: Role::Action }),
            )
            .collect();
        Self::new(vars)
    }

    /// `x1..xd`, all state variables.
    pub fn anonymous(arity: usize) -> Self {
        let vars = (1..=arity)
            .map(|i| Variable { name: format!("x{i}"), role: Role::State })
            .collect();
        VariableSchema { vars }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }
}

/// Numeric encoding of one symbolic action variable: `labels[i]` is encoded as `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMap {
    pub var: String,
    pub labels: Vec<String>,
}

impl ActionMap {
    pub fn code(&self, label: &str) -> Option<u64> {
        self.labels.iter().position(|l| l == label).map(|i| i as u64)
    }
}

/// `Train = Good ⊎ Bad` over a fixed schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: VariableSchema,
    samples: BTreeMap<Vec<u64>, bool>,
    n_good: usize,
    action_maps: Vec<ActionMap>,
}

impl Dataset {
    pub fn empty(schema: VariableSchema) -> Self {
        Dataset { schema, samples: BTreeMap::new(), n_good: 0, action_maps: Vec::new() }
    }

    pub fn new(
        schema: VariableSchema,
        good: impl IntoIterator<Item = Vec<u64>>,
        bad: impl IntoIterator<Item = Vec<u64>>,
    ) -> Result<Self> {
        let rows = good
            .into_iter()
            .map(|x| (x, true))
            .chain(bad.into_iter().map(|x| (x, false)));
        Self::from_rows(schema, rows)
    }

    /// Builds a dataset from `(vector, is_good)` rows. Identical rows collapse;
    /// a vector seen with both labels is an error.
    pub fn from_rows(
        schema: VariableSchema,
        rows: impl IntoIterator<Item = (Vec<u64>, bool)>,
    ) -> Result<Self> {
        let mut d = Self::empty(schema);
        for (x, good) in rows {
            d.insert(x, good)?;
        }
        Ok(d)
    }

    pub(crate) fn insert(&mut self, x: Vec<u64>, good: bool) -> Result<()> {
        if x.len() != self.schema.arity() {
            return Err(Error::Arity { expected: self.schema.arity(), found: x.len() });
        }
        match self.samples.get(&x) {
            Some(&prev) if prev == good => Ok(()),
            Some(_) => Err(Error::ConflictingLabel(x)),
            None => {
                self.n_good += usize::from(good);
                self.samples.insert(x, good);
                Ok(())
            }
        }
    }

    pub fn schema(&self) -> &VariableSchema {
        &self.schema
    }

    pub fn arity(&self) -> usize {
        self.schema.arity()
    }

    pub fn action_maps(&self) -> &[ActionMap] {
        &self.action_maps
    }

    pub fn with_action_maps(mut self, maps: Vec<ActionMap>) -> Self {
        self.action_maps = maps;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n_good(&self) -> usize {
        self.n_good
    }

    pub fn n_bad(&self) -> usize {
        self.samples.len() - self.n_good
    }

    /// `Train ⊆ Good` or `Train ⊆ Bad` (the empty set counts as pure).
    pub fn is_pure(&self) -> bool {
        self.n_good == 0 || self.n_good == self.samples.len()
    }

    /// All samples in lexicographic vector order with their Good flag.
    pub fn iter(&self) -> impl Iterator<Item = (&[u64], bool)> + '_ {
        self.samples.iter().map(|(x, &g)| (x.as_slice(), g))
    }

    pub fn good(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.iter().filter(|(_, g)| *g).map(|(x, _)| x)
    }

    pub fn bad(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.iter().filter(|(_, g)| !*g).map(|(x, _)| x)
    }

    /// `Some(true)` for Good, `Some(false)` for Bad, `None` when absent.
    pub fn label_of(&self, x: &[u64]) -> Option<bool> {
        self.samples.get(x).copied()
    }

    /// Samples satisfying `p`, then the rest. Labels are preserved.
    pub fn partition(&self, p: &Predicate) -> (Dataset, Dataset) {
        let mut sat = Self::empty(self.schema.clone());
        let mut unsat = Self::empty(self.schema.clone());
        for (x, &g) in &self.samples {
            let side = if p.holds(x) { &mut sat } else { &mut unsat };
            side.n_good += usize::from(g);
            side.samples.insert(x.clone(), g);
        }
        (sat, unsat)
    }

    /// `yes` iff `|D ∩ Good| ≥ |D ∩ Bad|`.
    pub fn maxc(&self) -> Label {
        Label::from_bool(self.n_good() >= self.n_bad())
    }

    /// Sorted distinct values of column `var`.
    pub fn column_values(&self, var: usize) -> Vec<u64> {
        let set: BTreeSet<u64> = self.samples.keys().map(|x| x[var]).collect();
        set.into_iter().collect()
    }

    /// Size of the value domain `X`: distinct values over all columns.
    pub fn domain_size(&self) -> usize {
        let set: BTreeSet<u64> = self.samples.keys().flat_map(|x| x.iter().copied()).collect();
        set.len()
    }

    /// Row-major copy of the samples as floats together with ±1 targets.
    pub fn to_design(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        self.iter()
            .map(|(x, g)| {
                (x.iter().map(|&v| v as f64).collect(), if g { 1.0 } else { -1.0 })
            })
            .unzip()
    }

    /// Reproducible random dataset with values drawn from `0..=max_value`.
    ///
    /// Labels are drawn per distinct vector, so no conflicts can occur; at least
    /// one row is always produced.
    pub fn random(
        schema: VariableSchema,
        n: usize,
        max_value: u64,
        good_prob: f64,
        seed: u64,
    ) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arity = schema.arity();
        let mut d = Self::empty(schema);
        for _ in 0..n.max(1) {
            let x: Vec<u64> = (0..arity).map(|_| rng.gen_range(0..=max_value)).collect();
            let good = rng.gen_bool(good_prob.clamp(0.0, 1.0));
            if d.samples.contains_key(&x) {
                continue;
            }
            d.insert(x, good).expect("fresh vector cannot conflict");
        }
        d
    }
}
