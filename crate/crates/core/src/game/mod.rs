//! Explicit stochastic graph games over integer variables.
//!
//! Graph games (every move has a single successor) and MDPs (no player-2
//! states) are the two special cases the solvers accept.

mod file;
mod solve;
mod two_channel;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub use self::solve::{
    solve, solve_mdp_almost_sure, solve_reachability_game, solve_safety_game, verify_strategy,
    verify_strategy_from, Solution,
};
pub use self::two_channel::two_channel_game;

pub type Probability = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: String,
    pub player: Player,
    pub valuation: Vec<u64>,
}

/// Value of an action variable. Symbolic values are given numeric codes when
/// the strategy is turned into a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionValue {
    Nat(u64),
    Symbol(String),
}

impl fmt::Display for ActionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionValue::Nat(n) => write!(f, "{n}"),
            ActionValue::Symbol(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub id: String,
    pub valuation: Vec<ActionValue>,
}

/// An available action at a state and the distribution it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub action: usize,
    pub successors: Vec<(usize, Probability)>,
}

impl Move {
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.successors.iter().map(|(s, _)| *s)
    }

    pub fn is_dirac(&self) -> bool {
        self.successors.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    state_vars: Vec<String>,
    action_vars: Vec<String>,
    states: Vec<State>,
    actions: Vec<Action>,
    /// Per state, sorted by action index.
    moves: Vec<Vec<Move>>,
    initial: Option<usize>,
}

impl Game {
    pub fn builder<S: AsRef<str>>(state_vars: &[S], action_vars: &[S]) -> GameBuilder {
        GameBuilder {
            state_vars: state_vars.iter().map(|s| s.as_ref().to_string()).collect(),
            action_vars: action_vars.iter().map(|s| s.as_ref().to_string()).collect(),
            states: Vec::new(),
            actions: Vec::new(),
            moves: Vec::new(),
            initial: None,
        }
    }

    pub fn state_vars(&self) -> &[String] {
        &self.state_vars
    }

    pub fn action_vars(&self) -> &[String] {
        &self.action_vars
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn moves(&self, state: usize) -> &[Move] {
        &self.moves[state]
    }

    pub fn find_move(&self, state: usize, action: usize) -> Option<&Move> {
        self.moves[state].iter().find(|m| m.action == action)
    }

    pub fn owner(&self, state: usize) -> Player {
        self.states[state].player
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    pub fn action_index(&self, id: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.id == id)
    }

    pub fn states_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(move |&s| self.states[s].player == player)
    }

    /// Every move has a single successor with probability one.
    pub fn is_graph_game(&self) -> bool {
        self.moves.iter().flatten().all(Move::is_dirac)
    }

    pub fn is_mdp(&self) -> bool {
        self.states.iter().all(|s| s.player == Player::One)
    }

    /// Copy with the same supports and different positive probabilities.
    /// `reweight(state, action, successor)` returns a positive weight; each
    /// distribution is renormalised to sum to one.
    pub fn with_weights(&self, mut reweight: impl FnMut(usize, usize, usize) -> u64) -> Result<Game> {
        let mut g = self.clone();
        for (s, moves) in g.moves.iter_mut().enumerate() {
            for m in moves.iter_mut() {
                let weights: Vec<u64> =
                    m.successors.iter().map(|(t, _)| reweight(s, m.action, *t)).collect();
                if weights.contains(&0) {
                    return Err(Error::Game("weights must be positive".into()));
                }
                let total: u64 = weights.iter().sum();
                for ((_, p), w) in m.successors.iter_mut().zip(weights) {
                    *p = Ratio::new(w, total);
                }
            }
        }
        Ok(g)
    }
}

pub struct GameBuilder {
    state_vars: Vec<String>,
    action_vars: Vec<String>,
    states: Vec<State>,
    actions: Vec<Action>,
    moves: Vec<Vec<Move>>,
    initial: Option<usize>,
}

impl GameBuilder {
    pub fn state(&mut self, id: impl Into<String>, player: Player, valuation: Vec<u64>) -> usize {
        self.states.push(State { id: id.into(), player, valuation });
        self.moves.push(Vec::new());
        self.states.len() - 1
    }

    pub fn action(&mut self, id: impl Into<String>, valuation: Vec<ActionValue>) -> usize {
        self.actions.push(Action { id: id.into(), valuation });
        self.actions.len() - 1
    }

    /// Adds a move with weights given as `(successor, numerator, denominator)`.
    pub fn transition(&mut self, state: usize, action: usize, successors: &[(usize, u64, u64)]) -> &mut Self {
        let successors = successors
            .iter()
            .map(|&(t, n, d)| (t, if d == 0 { Ratio::new_raw(n, d) } else { Ratio::new(n, d) }))
            .collect();
        self.moves[state].push(Move { action, successors });
        self
    }

    pub fn dirac(&mut self, state: usize, action: usize, successor: usize) -> &mut Self {
        self.transition(state, action, &[(successor, 1, 1)])
    }

    pub fn initial(&mut self, state: usize) -> &mut Self {
        self.initial = Some(state);
        self
    }

    pub fn build(self) -> Result<Game> {
        let GameBuilder { state_vars, action_vars, states, actions, mut moves, initial } = self;
        let err = |m: String| Err(Error::Game(m));

        let mut names = HashSet::new();
        for v in state_vars.iter().chain(&action_vars) {
            if v.is_empty() || !names.insert(v.as_str()) {
                return err(format!("variable names must be unique and nonempty: {v:?}"));
            }
        }
        let mut ids = HashSet::new();
        for s in &states {
            if !ids.insert(s.id.as_str()) {
                return err(format!("duplicate state id {:?}", s.id));
            }
            if s.valuation.len() != state_vars.len() {
                return err(format!("state {:?} has {} values, expected {}", s.id, s.valuation.len(), state_vars.len()));
            }
        }
        let mut ids = HashSet::new();
        for a in &actions {
            if !ids.insert(a.id.as_str()) {
                return err(format!("duplicate action id {:?}", a.id));
            }
            if a.valuation.len() != action_vars.len() {
                return err(format!("action {:?} has {} values, expected {}", a.id, a.valuation.len(), action_vars.len()));
            }
        }
        for (j, var) in action_vars.iter().enumerate() {
            let symbolic = actions.iter().filter(|a| matches!(a.valuation[j], ActionValue::Symbol(_))).count();
            if symbolic != 0 && symbolic != actions.len() {
                return err(format!("action variable {var:?} mixes numeric and symbolic values"));
            }
        }
        if let Some(i) = initial {
            if i >= states.len() {
                return err("initial state out of range".into());
            }
        }

        let mut action_owner: HashMap<usize, Player> = HashMap::new();
        for (s, state_moves) in moves.iter_mut().enumerate() {
            let sid = &states[s].id;
            if state_moves.is_empty() {
                return err(format!("state {sid:?} has no available action"));
            }
            state_moves.sort_by_key(|m| m.action);
            for pair in state_moves.windows(2) {
                if pair[0].action == pair[1].action {
                    return err(format!("state {sid:?} lists action {:?} twice", actions[pair[0].action].id));
                }
            }
            for m in state_moves.iter_mut() {
                let Some(action) = actions.get(m.action) else {
                    return err(format!("state {sid:?}: unknown action index {}", m.action));
                };
                match action_owner.insert(m.action, states[s].player) {
                    Some(p) if p != states[s].player => {
                        return err(format!("action {:?} is used by both players", action.id));
                    }
                    _ => {}
                }
                if m.successors.is_empty() {
                    return err(format!("state {sid:?}, action {:?}: empty distribution", action.id));
                }
                let mut merged: BTreeMap<usize, Probability> = BTreeMap::new();
                for &(t, p) in &m.successors {
                    if t >= states.len() {
                        return err(format!("state {sid:?}: successor index {t} out of range"));
                    }
                    if *p.denom() == 0 || *p.numer() == 0 {
                        return err(format!(
                            "state {sid:?}, action {:?}: probabilities must be positive fractions",
                            action.id
                        ));
                    }
                    *merged.entry(t).or_insert_with(|| Ratio::from_integer(0)) += p;
                }
                let total: Probability = merged.values().copied().sum();
                if total != Ratio::from_integer(1) {
                    return err(format!(
                        "state {sid:?}, action {:?}: probabilities sum to {total}",
                        action.id
                    ));
                }
                m.successors = merged.into_iter().collect();
            }
        }

        // Datasets are built per player, so valuations only need to identify
        // states (and actions) among those of the same player.
        for player in [Player::One, Player::Two] {
            let mut seen = HashMap::new();
            for s in states.iter().filter(|s| s.player == player) {
                if let Some(prev) = seen.insert(&s.valuation, &s.id) {
                    return err(format!("states {prev:?} and {:?} share a valuation", s.id));
                }
            }
            let mut seen = HashMap::new();
            for (a, p) in &action_owner {
                if *p != player {
                    continue;
                }
                if let Some(prev) = seen.insert(&actions[*a].valuation, &actions[*a].id) {
                    return err(format!("actions {prev:?} and {:?} share a valuation", actions[*a].id));
                }
            }
        }

        Ok(Game { state_vars, action_vars, states, actions, moves, initial })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// Stay inside the target set forever.
    Safety,
    /// Eventually visit the target set.
    Reachability,
}

impl ObjectiveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::Safety => "safety",
            ObjectiveKind::Reachability => "reachability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub target: BTreeSet<usize>,
}

impl Objective {
    pub fn safety(safe: impl IntoIterator<Item = usize>) -> Self {
        Objective { kind: ObjectiveKind::Safety, target: safe.into_iter().collect() }
    }

    pub fn reachability(target: impl IntoIterator<Item = usize>) -> Self {
        Objective { kind: ObjectiveKind::Reachability, target: target.into_iter().collect() }
    }
}

/// A partial map from one player's states to actions (both as indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemorylessStrategy {
    pub player: Player,
    pub choices: BTreeMap<usize, usize>,
}

impl MemorylessStrategy {
    pub fn new(player: Player) -> Self {
        MemorylessStrategy { player, choices: BTreeMap::new() }
    }

    pub fn choose(&mut self, state: usize, action: usize) {
        self.choices.insert(state, action);
    }

    pub fn get(&self, state: usize) -> Option<usize> {
        self.choices.get(&state).copied()
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// Extends the strategy to every state of its player; states without a
    /// choice get their lowest-index action.
    pub fn completed(&self, game: &Game) -> MemorylessStrategy {
        let mut out = self.clone();
        for s in game.states_of(self.player) {
            out.choices.entry(s).or_insert_with(|| game.moves(s)[0].action);
        }
        out
    }

    pub fn is_total(&self, game: &Game) -> bool {
        game.states_of(self.player).all(|s| self.choices.contains_key(&s))
    }

    /// Checks that every choice belongs to a state of `self.player` and is available there.
    pub fn validate(&self, game: &Game) -> Result<()> {
        for (&s, &a) in &self.choices {
            let Some(state) = game.states.get(s) else {
                return Err(Error::Domain(format!("state index {s} out of range")));
            };
            if state.player != self.player {
                return Err(Error::Domain(format!("state {:?} is not owned by {}", state.id, self.player)));
            }
            if game.find_move(s, a).is_none() {
                let name = game.actions.get(a).map_or("?", |x| x.id.as_str());
                return Err(Error::Domain(format!("action {name:?} is not available at {:?}", state.id)));
            }
        }
        Ok(())
    }
}
