use std::collections::BTreeMap;

use super::{ActionMap, Dataset, VariableSchema};
use crate::error::{Error, Result};
use crate::game::{ActionValue, Game, MemorylessStrategy, Player};

/// Encodes a strategy as `Good`/`Bad` state-action vectors.
///
/// For every state in the strategy's domain and every action available there,
/// the vector `val_s ++ val_a` is Good if the strategy plays the action and
/// Bad otherwise. Symbolic action values are numbered in the order they first
/// appear among `player`'s actions; the numbering is kept as action maps on
/// the dataset.
pub fn from_strategy(game: &Game, strategy: &MemorylessStrategy, player: Player) -> Result<Dataset> {
    if strategy.player != player {
        return Err(Error::Domain(format!("strategy is for {}, not {player}", strategy.player)));
    }
    strategy.validate(game)?;

    let schema = VariableSchema::from_names(game.state_vars(), game.action_vars())?;

    let mut player_actions: Vec<usize> = game
        .states_of(player)
        .flat_map(|s| game.moves(s).iter().map(|m| m.action))
        .collect();
    player_actions.sort_unstable();
    player_actions.dedup();

    let mut maps: Vec<Option<ActionMap>> = vec![None; game.action_vars().len()];
    for (j, var) in game.action_vars().iter().enumerate() {
        for &a in &player_actions {
            if let ActionValue::Symbol(sym) = &game.actions()[a].valuation[j] {
                let map = maps[j].get_or_insert_with(|| ActionMap { var: var.clone(), labels: Vec::new() });
                if !map.labels.contains(sym) {
                    map.labels.push(sym.clone());
                }
            }
        }
    }
    let mut encoded: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for &a in &player_actions {
        let vals = game.actions()[a]
            .valuation
            .iter()
            .enumerate()
            .map(|(j, v)| match v {
                ActionValue::Nat(n) => *n,
                ActionValue::Symbol(sym) => maps[j].as_ref().and_then(|m| m.code(sym)).expect("mapped above"),
            })
            .collect();
        encoded.insert(a, vals);
    }

    let mut d = Dataset::empty(schema);
    for (&s, &chosen) in &strategy.choices {
        for m in game.moves(s) {
            let mut x = game.states()[s].valuation.clone();
            x.extend_from_slice(&encoded[&m.action]);
            d.insert(x, m.action == chosen)?;
        }
    }
    Ok(d.with_action_maps(maps.into_iter().flatten().collect()))
}
