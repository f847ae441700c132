//! Fixpoint solvers for safety and reachability, and strategy checking.
//!
//! Whenever several actions are winning, the one with the lowest action index
//! is chosen, so solver output is a function of the game alone.

use std::collections::{BTreeSet, VecDeque};

use super::{Game, MemorylessStrategy, Move, Objective, ObjectiveKind, Player};
use crate::error::{Error, Result};

/// Winning region together with a strategy defined exactly on the
/// solving player's states inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winning: BTreeSet<usize>,
    pub strategy: MemorylessStrategy,
}

fn support_within(m: &Move, set: &[bool]) -> bool {
    m.support().all(|t| set[t])
}

fn require_graph_game(game: &Game) -> Result<()> {
    if game.is_graph_game() {
        Ok(())
    } else {
        Err(Error::ModelKind("expected a graph game (every move must have a single successor)".into()))
    }
}

fn mask(game: &Game, set: &BTreeSet<usize>) -> Result<Vec<bool>> {
    let mut m = vec![false; game.n_states()];
    for &s in set {
        *m.get_mut(s).ok_or_else(|| Error::Game(format!("target state index {s} out of range")))? = true;
    }
    Ok(m)
}

/// Greatest set inside `safe` that `player` can keep the play in, where
/// "keep" means every successor of the chosen move stays in the set.
fn safety_fixpoint(game: &Game, safe: &[bool], player: Player) -> Solution {
    let mut win = safe.to_vec();
    loop {
        let mut changed = false;
        for s in 0..game.n_states() {
            if !win[s] {
                continue;
            }
            let moves = game.moves(s);
            let ok = if game.owner(s) == player {
                moves.iter().any(|m| support_within(m, &win))
            } else {
                moves.iter().all(|m| support_within(m, &win))
            };
            if !ok {
                win[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut strategy = MemorylessStrategy::new(player);
    for s in game.states_of(player).filter(|&s| win[s]) {
        let m = game.moves(s).iter().find(|m| support_within(m, &win)).expect("winning state keeps a move");
        strategy.choose(s, m.action);
    }
    let winning = (0..game.n_states()).filter(|&s| win[s]).collect();
    Solution { winning, strategy }
}

/// Sure safety for `player` in a graph game.
pub fn solve_safety_game(game: &Game, safe: &BTreeSet<usize>, player: Player) -> Result<Solution> {
    require_graph_game(game)?;
    Ok(safety_fixpoint(game, &mask(game, safe)?, player))
}

/// Sure reachability for `player` in a graph game (attractor).
pub fn solve_reachability_game(game: &Game, target: &BTreeSet<usize>, player: Player) -> Result<Solution> {
    require_graph_game(game)?;
    let mut win = mask(game, target)?;
    let mut strategy = MemorylessStrategy::new(player);
    for s in game.states_of(player).filter(|&s| win[s]) {
        strategy.choose(s, game.moves(s)[0].action);
    }
    loop {
        let snapshot = win.clone();
        let mut added = false;
        for s in 0..game.n_states() {
            if snapshot[s] {
                continue;
            }
            let moves = game.moves(s);
            if game.owner(s) == player {
                if let Some(m) = moves.iter().find(|m| support_within(m, &snapshot)) {
                    strategy.choose(s, m.action);
                    win[s] = true;
                    added = true;
                }
            } else if moves.iter().all(|m| support_within(m, &snapshot)) {
                win[s] = true;
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    let winning = (0..game.n_states()).filter(|&s| win[s]).collect();
    Ok(Solution { winning, strategy })
}

/// Almost-sure safety or reachability in an MDP. Only the supports of the
/// distributions matter.
pub fn solve_mdp_almost_sure(game: &Game, objective: &Objective) -> Result<Solution> {
    if !game.is_mdp() {
        return Err(Error::ModelKind("expected an MDP (no player-2 states)".into()));
    }
    let target = mask(game, &objective.target)?;
    match objective.kind {
        ObjectiveKind::Safety => Ok(safety_fixpoint(game, &target, Player::One)),
        ObjectiveKind::Reachability => Ok(almost_sure_reach(game, &target)),
    }
}

fn almost_sure_reach(game: &Game, target: &[bool]) -> Solution {
    let n = game.n_states();
    let mut alive = vec![true; n];
    // Repeatedly keep only the states that can reach the target using moves
    // that cannot leave the surviving set.
    let (reach, layer) = loop {
        let mut reach: Vec<bool> = (0..n).map(|s| alive[s] && target[s]).collect();
        let mut layer = vec![usize::MAX; n];
        for s in 0..n {
            if reach[s] {
                layer[s] = 0;
            }
        }
        let mut depth = 0;
        loop {
            depth += 1;
            let snapshot = reach.clone();
            let mut added = false;
            for s in (0..n).filter(|&s| alive[s] && !snapshot[s]) {
                let progress = game
                    .moves(s)
                    .iter()
                    .any(|m| support_within(m, &alive) && m.support().any(|t| snapshot[t]));
                if progress {
                    reach[s] = true;
                    layer[s] = depth;
                    added = true;
                }
            }
            if !added {
                break;
            }
        }
        if reach == alive {
            break (reach, layer);
        }
        alive = reach;
    };

    let mut strategy = MemorylessStrategy::new(Player::One);
    for s in (0..n).filter(|&s| reach[s]) {
        let moves = game.moves(s);
        let chosen = if target[s] {
            &moves[0]
        } else {
            moves
                .iter()
                .find(|m| support_within(m, &reach) && m.support().any(|t| layer[t] < layer[s]))
                .expect("layered state has a progress move")
        };
        strategy.choose(s, chosen.action);
    }
    Solution { winning: (0..n).filter(|&s| reach[s]).collect(), strategy }
}

/// Dispatches on the model kind: MDPs get almost-sure solving (for player 1),
/// graph games get sure solving for `player`.
pub fn solve(game: &Game, objective: &Objective, player: Player) -> Result<Solution> {
    if game.is_mdp() && player == Player::One {
        return solve_mdp_almost_sure(game, objective);
    }
    match objective.kind {
        ObjectiveKind::Safety => solve_safety_game(game, &objective.target, player),
        ObjectiveKind::Reachability => solve_reachability_game(game, &objective.target, player),
    }
}

/// Checks `strategy` from the game's initial state, or from every state of
/// its domain when the game declares no initial state.
pub fn verify_strategy(game: &Game, objective: &Objective, strategy: &MemorylessStrategy) -> bool {
    let starts: Vec<usize> = match game.initial() {
        Some(i) => vec![i],
        None => strategy.choices.keys().copied().collect(),
    };
    verify_strategy_from(game, objective, strategy, &starts)
}

/// True iff, with `strategy` fixed, the objective holds surely (graph games)
/// or with probability one (MDPs, stochastic games) from every start state
/// against every behaviour of the other player.
///
/// Reaching a state of the strategy's player where the strategy is undefined
/// counts as a failure.
pub fn verify_strategy_from(
    game: &Game,
    objective: &Objective,
    strategy: &MemorylessStrategy,
    starts: &[usize],
) -> bool {
    if strategy.validate(game).is_err() {
        return false;
    }
    let n = game.n_states();
    let Ok(target) = mask(game, &objective.target) else {
        return false;
    };
    if starts.iter().any(|&s| s >= n) {
        return false;
    }

    // Successors in the arena where the strategy's player is fixed.
    let induced = |s: usize| -> Option<Vec<usize>> {
        if game.owner(s) == strategy.player {
            let a = strategy.get(s)?;
            Some(game.find_move(s, a)?.support().collect())
        } else {
            Some(game.moves(s).iter().flat_map(Move::support).collect())
        }
    };

    let stop_at_target = objective.kind == ObjectiveKind::Reachability;
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    let mut visited = Vec::new();
    while let Some(s) = queue.pop_front() {
        if stop_at_target && target[s] {
            continue;
        }
        if !stop_at_target && !target[s] {
            return false;
        }
        visited.push(s);
        let Some(next) = induced(s) else {
            return false;
        };
        for t in next {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    if !stop_at_target {
        return true;
    }

    // Reachability fails iff the opponent (or chance) can trap the play in
    // non-target states forever with positive probability: some nonempty set
    // of visited states is closed under the fixed moves and, for opponent
    // states, under at least one move.
    let mut trap = vec![false; n];
    for &s in &visited {
        trap[s] = true;
    }
    loop {
        let mut changed = false;
        for &s in &visited {
            if !trap[s] {
                continue;
            }
            let stays = if game.owner(s) == strategy.player {
                let a = strategy.get(s).expect("checked during search");
                support_within(game.find_move(s, a).expect("validated"), &trap)
            } else {
                game.moves(s).iter().any(|m| support_within(m, &trap))
            };
            if !stays {
                trap[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    !visited.iter().any(|&s| trap[s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::ActionValue;

    fn nat(v: u64) -> Vec<ActionValue> {
        vec![ActionValue::Nat(v)]
    }

    /// s0 -a-> s1 -a-> T (self loop); s0 -b-> sink.
    fn chain() -> Game {
        let mut b = Game::builder(&["s"], &["a"]);
        let s0 = b.state("s0", Player::One, vec![0]);
        let s1 = b.state("s1", Player::One, vec![1]);
        let t = b.state("t", Player::One, vec![2]);
        let sink = b.state("sink", Player::One, vec![3]);
        let a = b.action("a", nat(0));
        let bb = b.action("b", nat(1));
        b.dirac(s0, a, s1).dirac(s0, bb, sink).dirac(s1, a, t).dirac(t, a, t).dirac(sink, a, sink);
        b.initial(s0);
        b.build().unwrap()
    }

    #[test]
    fn chain_reachability() {
        let g = chain();
        let sol = solve_reachability_game(&g, &BTreeSet::from([2]), Player::One).unwrap();
        assert_eq!(sol.winning, BTreeSet::from([0, 1, 2]));
        assert_eq!(sol.strategy.get(0), Some(0));
        let obj = Objective::reachability([2]);
        assert!(verify_strategy_from(&g, &obj, &sol.strategy, &[0, 1, 2]));

        let mdp = solve_mdp_almost_sure(&g, &obj).unwrap();
        assert_eq!(mdp.winning, sol.winning);
    }

    #[test]
    fn target_containing_initial_is_winning() {
        let g = chain();
        let sol = solve_reachability_game(&g, &BTreeSet::from([0]), Player::One).unwrap();
        assert!(sol.winning.contains(&0));
    }

    #[test]
    fn self_loop_is_not_almost_sure() {
        let mut b = Game::builder(&["s"], &["a"]);
        let s0 = b.state("s0", Player::One, vec![0]);
        let t = b.state("t", Player::One, vec![1]);
        let a = b.action("a", nat(0));
        b.dirac(s0, a, s0).dirac(t, a, t);
        let g = b.build().unwrap();
        let sol = solve_mdp_almost_sure(&g, &Objective::reachability([t])).unwrap();
        assert_eq!(sol.winning, BTreeSet::from([t]));
    }

    #[test]
    fn coin_flip_is_almost_sure() {
        // s0: a -> {1/2 s0, 1/2 T}, b -> sink
        let mut b = Game::builder(&["s"], &["a"]);
        let s0 = b.state("s0", Player::One, vec![0]);
        let t = b.state("t", Player::One, vec![1]);
        let sink = b.state("sink", Player::One, vec![2]);
        let a = b.action("a", nat(0));
        let bb = b.action("b", nat(1));
        b.transition(s0, a, &[(s0, 1, 2), (t, 1, 2)]).dirac(s0, bb, sink);
        b.dirac(t, a, t).dirac(sink, a, sink);
        let g = b.build().unwrap();
        let obj = Objective::reachability([t]);
        let sol = solve_mdp_almost_sure(&g, &obj).unwrap();
        assert_eq!(sol.winning, BTreeSet::from([s0, t]));
        assert_eq!(sol.strategy.get(s0), Some(a));
        assert!(verify_strategy_from(&g, &obj, &sol.strategy, &[s0]));

        let mut bad = sol.strategy.clone();
        bad.choose(s0, bb);
        assert!(!verify_strategy_from(&g, &obj, &bad, &[s0]));

        // Value iteration: probability of reaching t under `a` from s0.
        let mut p = 0.0f64;
        for _ in 0..200 {
            p = 0.5 * p + 0.5;
        }
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solvers_reject_wrong_model_kind() {
        let mut b = Game::builder(&["s"], &["a"]);
        let s0 = b.state("s0", Player::One, vec![0]);
        let s1 = b.state("s1", Player::Two, vec![1]);
        let a = b.action("a", nat(0));
        let e = b.action("e", nat(1));
        b.transition(s0, a, &[(s0, 1, 2), (s1, 1, 2)]).dirac(s1, e, s0);
        let g = b.build().unwrap();
        let all = BTreeSet::from([0, 1]);
        assert!(matches!(solve_safety_game(&g, &all, Player::One), Err(Error::ModelKind(_))));
        assert!(matches!(solve_mdp_almost_sure(&g, &Objective::safety(all)), Err(Error::ModelKind(_))));
    }

    #[test]
    fn opponent_cycle_defeats_reachability() {
        // Player 2 at e can loop forever or go to t.
        let mut b = Game::builder(&["s"], &["a"]);
        let c = b.state("c", Player::One, vec![0]);
        let e = b.state("e", Player::Two, vec![0]);
        let t = b.state("t", Player::One, vec![1]);
        let go = b.action("go", nat(0));
        let stay = b.action("stay", nat(1));
        let fin = b.action("fin", nat(2));
        b.dirac(c, go, e).dirac(e, stay, c).dirac(e, fin, t).dirac(t, go, t);
        let g = b.build().unwrap();
        let sol = solve_reachability_game(&g, &BTreeSet::from([t]), Player::One).unwrap();
        assert_eq!(sol.winning, BTreeSet::from([t]));
        let mut s = MemorylessStrategy::new(Player::One);
        s.choose(c, go);
        assert!(!verify_strategy_from(&g, &Objective::reachability([t]), &s, &[c]));
    }
}
