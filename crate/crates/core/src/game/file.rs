//! JSON game files.
//!
//! ```json
//! {
//!   "variables": {"state": ["pendingA", "pendingB"], "action": ["act"]},
//!   "states": [{"id": "c_0_0", "player": 1, "valuation": {"pendingA": 0, "pendingB": 0}}],
//!   "actions": [{"id": "w", "valuation": {"act": "w"}}],
//!   "transitions": [{"state": "c_0_0", "action": "w", "successors": [["e_0_0", 1, 1]]}],
//!   "initial": "c_0_0",
//!   "objective": {"kind": "safety", "target": ["c_0_0"]}
//! }
//! ```
//!
//! `variables` may be omitted, in which case the keys of the first state and
//! action valuations are used in sorted order.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ActionValue, Game, Objective, ObjectiveKind, Player};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variables: Option<VarsFile>,
    states: Vec<StateFile>,
    actions: Vec<ActionFile>,
    transitions: Vec<TransitionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective: Option<ObjectiveFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarsFile {
    state: Vec<String>,
    action: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    id: String,
    player: u8,
    valuation: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    id: String,
    valuation: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    state: String,
    action: String,
    successors: Vec<(String, u64, u64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveFile {
    kind: String,
    target: Vec<String>,
}

impl Game {
    pub fn to_json(&self, objective: Option<&Objective>) -> String {
        let states = self
            .states
            .iter()
            .map(|s| StateFile {
                id: s.id.clone(),
                player: s.player.number(),
                valuation: self.state_vars.iter().cloned().zip(s.valuation.iter().copied()).collect(),
            })
            .collect();
        let actions = self
            .actions
            .iter()
            .map(|a| ActionFile {
                id: a.id.clone(),
                valuation: self
                    .action_vars
                    .iter()
                    .cloned()
                    .zip(a.valuation.iter().map(|v| match v {
                        ActionValue::Nat(n) => Value::from(*n),
                        ActionValue::Symbol(s) => Value::from(s.clone()),
                    }))
                    .collect(),
            })
            .collect();
        let mut transitions = Vec::new();
        for (s, moves) in self.moves.iter().enumerate() {
            for m in moves {
                transitions.push(TransitionFile {
                    state: self.states[s].id.clone(),
                    action: self.actions[m.action].id.clone(),
                    successors: m
                        .successors
                        .iter()
                        .map(|(t, p)| (self.states[*t].id.clone(), *p.numer(), *p.denom()))
                        .collect(),
                });
            }
        }
        let file = GameFile {
            variables: Some(VarsFile { state: self.state_vars.clone(), action: self.action_vars.clone() }),
            states,
            actions,
            transitions,
            initial: self.initial.map(|i| self.states[i].id.clone()),
            objective: objective.map(|o| ObjectiveFile {
                kind: o.kind.as_str().to_string(),
                target: o.target.iter().map(|&t| self.states[t].id.clone()).collect(),
            }),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("game file serializes");
        text.push('\n');
        text
    }

    /// Parses a game file; the objective is `None` when the file has none.
    pub fn from_json(text: &str) -> Result<(Game, Option<Objective>)> {
        let file: GameFile = serde_json::from_str(text)?;
        let err = |m: String| Error::Game(m);

        let (state_vars, action_vars) = match file.variables {
            Some(v) => (v.state, v.action),
            None => (
                file.states.first().map(|s| s.valuation.keys().cloned().collect()).unwrap_or_default(),
                file.actions.first().map(|a| a.valuation.keys().cloned().collect()).unwrap_or_default(),
            ),
        };
        let mut b = Game::builder(&state_vars, &action_vars);
        let mut state_ids = BTreeMap::new();
        for s in &file.states {
            let player = Player::from_number(s.player)
                .ok_or_else(|| err(format!("state {:?}: player must be 1 or 2", s.id)))?;
            if s.valuation.len() != state_vars.len() {
                return Err(err(format!("state {:?}: valuation does not match the state variables", s.id)));
            }
            let valuation = state_vars
                .iter()
                .map(|v| {
                    s.valuation
                        .get(v)
                        .copied()
                        .ok_or_else(|| err(format!("state {:?}: missing value for {v:?}", s.id)))
                })
                .collect::<Result<Vec<_>>>()?;
            state_ids.insert(s.id.clone(), b.state(s.id.clone(), player, valuation));
        }
        let mut action_ids = BTreeMap::new();
        for a in &file.actions {
            if a.valuation.len() != action_vars.len() {
                return Err(err(format!("action {:?}: valuation does not match the action variables", a.id)));
            }
            let valuation = action_vars
                .iter()
                .map(|v| match a.valuation.get(v) {
                    Some(Value::String(s)) => Ok(ActionValue::Symbol(s.clone())),
                    Some(Value::Number(n)) => n
                        .as_u64()
                        .map(ActionValue::Nat)
                        .ok_or_else(|| err(format!("action {:?}: {v:?} must be a natural number", a.id))),
                    Some(_) => Err(err(format!("action {:?}: {v:?} must be a number or a string", a.id))),
                    None => Err(err(format!("action {:?}: missing value for {v:?}", a.id))),
                })
                .collect::<Result<Vec<_>>>()?;
            action_ids.insert(a.id.clone(), b.action(a.id.clone(), valuation));
        }
        let state = |id: &str| {
            state_ids.get(id).copied().ok_or_else(|| err(format!("unknown state {id:?}")))
        };
        for t in &file.transitions {
            let s = state(&t.state)?;
            let a = *action_ids
                .get(&t.action)
                .ok_or_else(|| err(format!("unknown action {:?}", t.action)))?;
            let succ = t
                .successors
                .iter()
                .map(|(id, n, d)| Ok((state(id)?, *n, *d)))
                .collect::<Result<Vec<_>>>()?;
            b.transition(s, a, &succ);
        }
        if let Some(init) = &file.initial {
            b.initial(state(init)?);
        }
        let objective = match &file.objective {
            None => None,
            Some(o) => {
                let kind = match o.kind.as_str() {
                    "safety" => ObjectiveKind::Safety,
                    "reachability" => ObjectiveKind::Reachability,
                    other => return Err(err(format!("unknown objective kind {other:?}"))),
                };
                let target = o.target.iter().map(|id| state(id)).collect::<Result<_>>()?;
                Some(Objective { kind, target })
            }
        };
        Ok((b.build()?, objective))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Game, Option<Objective>)> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, objective: Option<&Objective>, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json(objective))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::two_channel_game;

    #[test]
    fn round_trip() {
        let (g, obj) = two_channel_game(2, 3).unwrap();
        let text = g.to_json(Some(&obj));
        let (h, obj2) = Game::from_json(&text).unwrap();
        assert_eq!(g, h);
        assert_eq!(Some(obj), obj2);
        assert_eq!(h.to_json(obj2.as_ref()), text);
    }

    #[test]
    fn variables_can_be_inferred() {
        let text = r#"{
            "states": [{"id": "s", "player": 1, "valuation": {"x": 0}},
                       {"id": "t", "player": 1, "valuation": {"x": 1}}],
            "actions": [{"id": "a", "valuation": {"act": 0}}],
            "transitions": [{"state": "s", "action": "a", "successors": [["s", 1, 2], ["t", 1, 2]]},
                            {"state": "t", "action": "a", "successors": [["t", 1, 1]]}],
            "objective": {"kind": "reachability", "target": ["t"]}
        }"#;
        let (g, obj) = Game::from_json(text).unwrap();
        assert_eq!(g.state_vars(), ["x"]);
        assert!(g.is_mdp());
        assert_eq!(obj.unwrap().kind, ObjectiveKind::Reachability);
    }

    #[test]
    fn bad_files() {
        let bad_prob = r#"{"states": [{"id": "s", "player": 1, "valuation": {}}],
            "actions": [{"id": "a", "valuation": {}}],
            "transitions": [{"state": "s", "action": "a", "successors": [["s", 1, 3]]}]}"#;
        assert!(matches!(Game::from_json(bad_prob), Err(Error::Game(_))));
        let unknown = r#"{"states": [], "actions": [], "transitions": [{"state": "q", "action": "a", "successors": []}]}"#;
        assert!(Game::from_json(unknown).is_err());
        assert!(matches!(Game::from_json("{"), Err(Error::Json(_))));
    }
}
