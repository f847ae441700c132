use super::{ActionValue, Game, Objective, Player};
use crate::error::{Error, Result};

/// Controller actions in encoding order.
pub const CONTROLLER_ACTIONS: [&str; 3] = ["w", "rA", "rB"];
const ENV_ACTIONS: [&str; 4] = ["none", "reqA", "reqB", "stay"];
const ERRORS: [&str; 4] = ["err_overflow_A", "err_overflow_B", "err_empty_A", "err_empty_B"];

fn symbol(s: &str) -> Vec<ActionValue> {
    vec![ActionValue::Symbol(s.to_string())]
}

/// Reactive system with two request channels of capacities `cap_a` and `cap_b`.
///
/// Controller states `c_a_b` hold the pending counts `(a, b)` and choose to
/// wait (`w`) or answer one channel (`rA`, `rB`). The environment states
/// `e_a_b` then add at most one request. Answering an empty channel and
/// exceeding a capacity lead to absorbing error states, which are the only
/// unsafe states of the returned safety objective. The environment's states
/// and actions are valued on the same variables (errors use `pendingA =
/// cap_a + 1`), since valuations are only compared within one player.
pub fn two_channel_game(cap_a: u64, cap_b: u64) -> Result<(Game, Objective)> {
    if cap_a == 0 || cap_b == 0 {
        return Err(Error::Game("channel capacities must be at least 1".into()));
    }
    let mut b = Game::builder(&["pendingA", "pendingB"], &["act"]);
    let width = (cap_b + 1) as usize;
    let idx = |a: u64, bb: u64| (a as usize) * width + bb as usize;

    let mut ctrl = Vec::new();
    for a in 0..=cap_a {
        for bb in 0..=cap_b {
            ctrl.push(b.state(format!("c_{a}_{bb}"), Player::One, vec![a, bb]));
        }
    }
    let mut env = Vec::new();
    for a in 0..=cap_a {
        for bb in 0..=cap_b {
            env.push(b.state(format!("e_{a}_{bb}"), Player::Two, vec![a, bb]));
        }
    }
    let errors: Vec<usize> = ERRORS
        .iter()
        .enumerate()
        .map(|(k, id)| b.state(*id, Player::Two, vec![cap_a + 1, k as u64]))
        .collect();
    let [overflow_a, overflow_b, empty_a, empty_b] = [errors[0], errors[1], errors[2], errors[3]];

    let [w, ra, rb] = CONTROLLER_ACTIONS.map(|id| b.action(id, symbol(id)));
    let [none, req_a, req_b, stay] = ENV_ACTIONS.map(|id| b.action(id, symbol(id)));

    for a in 0..=cap_a {
        for bb in 0..=cap_b {
            let c = ctrl[idx(a, bb)];
            b.dirac(c, w, env[idx(a, bb)]);
            b.dirac(c, ra, if a > 0 { env[idx(a - 1, bb)] } else { empty_a });
            b.dirac(c, rb, if bb > 0 { env[idx(a, bb - 1)] } else { empty_b });

            let e = env[idx(a, bb)];
            b.dirac(e, none, c);
            b.dirac(e, req_a, if a < cap_a { ctrl[idx(a + 1, bb)] } else { overflow_a });
            b.dirac(e, req_b, if bb < cap_b { ctrl[idx(a, bb + 1)] } else { overflow_b });
        }
    }
    for &e in &errors {
        b.dirac(e, stay, e);
    }
    b.initial(ctrl[0]);
    let game = b.build()?;
    let safe = ctrl.iter().chain(&env).copied();
    Ok((game, Objective::safety(safe)))
}
