//! Outcome equivalence of movement tokens in the grid games.

use vsarena_core::games::grid::Move5;
use vsarena_core::{AgentId, Environment, JointAction, StateView};

/// Tokens whose outcome equals the ground truth's. In the grid games a move's
/// effect is fully determined by the cell it resolves to, so two tokens are
/// equivalent exactly when they land on the same cell; elsewhere the set is
/// the ground truth alone.
pub fn equivalence_set(env: &dyn Environment, agent: usize, ground_truth: &str) -> Vec<String> {
    let (StateView::Grid(s), Some(gt)) = (env.view(), Move5::parse(ground_truth)) else {
        return vec![ground_truth.to_string()];
    };
    let from = s.players[agent];
    let landing = s.resolve(from, gt);
    Move5::ALL
        .into_iter()
        .filter(|m| s.resolve(from, *m) == landing)
        .map(|m| m.token().to_string())
        .collect()
}

/// Reference implementation: steps a copy of `env` with every legal token for
/// `agent` (the other agents' actions fixed as in `joint`) and keeps the tokens
/// whose next state, rewards and events match the ground truth's.
pub fn brute_force_equivalence(env: &dyn Environment, joint: &JointAction, agent: usize) -> Vec<String> {
    let outcome = |token: &str| {
        let mut e = env.box_clone();
        let mut j = joint.clone();
        j.0[agent] = token.to_string();
        let r = e.step(&j).ok()?;
        Some((e.state_json(), r.rewards, r.events))
    };
    let truth = outcome(&joint.0[agent]);
    env.legal_actions(AgentId(agent))
        .into_iter()
        .filter(|t| outcome(t) == truth)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsarena_core::games::grid::{DilemmaKind, GridConfig, GridEntities, GridEnv, Pos};

    fn coin_env(players: [Pos; 2]) -> GridEnv {
        let mut env = GridEnv::new(GridConfig::standard(DilemmaKind::Coin), 1).unwrap();
        let mut s = env.state().clone();
        s.players = players;
        s.entities = GridEntities::Coin { red: Pos::new(2, 2), blue: Pos::new(3, 3) };
        env.set_state(s);
        env
    }

    fn sorted(mut v: Vec<String>) -> Vec<String> {
        v.sort();
        v
    }

    #[test]
    fn corner_stay_matches_up_and_left() {
        let env = coin_env([Pos::new(0, 0), Pos::new(4, 4)]);
        let set = sorted(equivalence_set(&env, 0, "<STAY>"));
        assert_eq!(set, ["<LEFT>", "<STAY>", "<UP>"]);
    }

    #[test]
    fn interior_move_is_alone() {
        let env = coin_env([Pos::new(1, 1), Pos::new(4, 4)]);
        assert_eq!(equivalence_set(&env, 0, "<UP>"), ["<UP>"]);
    }

    #[test]
    fn non_grid_games_use_the_singleton() {
        let env = vsarena_core::make_env("breakthrough", 0).unwrap();
        assert_eq!(equivalence_set(env.as_ref(), 0, "<a2a3>"), ["<a2a3>"]);
    }

    #[test]
    fn brute_force_agrees_in_the_corner() {
        let env = coin_env([Pos::new(0, 0), Pos::new(4, 4)]);
        let joint = JointAction::new(["<STAY>", "<UP>"]);
        assert_eq!(sorted(brute_force_equivalence(&env, &joint, 0)), ["<LEFT>", "<STAY>", "<UP>"]);
    }
}
