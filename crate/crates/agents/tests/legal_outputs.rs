//! Every policy returns a token from the legal set on states reached by
//! random play.

use rand::Rng;
use vsarena_agents::{AgentSpec, ObsMode};
use vsarena_core::structure::{probe_rng, random_joint};
use vsarena_core::{make_env, DecisionContext, Policy, ENV_NAMES};

/// Agents worth fuzzing per environment (search agents are kept shallow).
fn roster(env: &str) -> Vec<&'static str> {
    let mut r = vec!["random"];
    match env {
        "breakthrough" => r.extend(["minimax:depth=2", "mcts:c=2,sims=20,rollouts=1"]),
        "tictactoe" => r.extend(["minimax:depth=9", "mcts"]),
        "kuhn" => r.extend(["ne:alpha=0", "ne:alpha=1/6", "ne:alpha=1/3"]),
        "coin" => r.extend(["scripted:own-color-coin", "scripted:closest-coin"]),
        "hunt" => r.extend([
            "scripted:toward-monster",
            "scripted:camp-center",
            "scripted:camp-corner",
            "scripted:closest-apple",
        ]),
        "battle" => r.extend([
            "scripted:closest-common-block",
            "scripted:own-color-block",
            "scripted:biased-red",
            "scripted:biased-blue",
        ]),
        "overcooked" => r.push("oracle"),
        "pong" => r.extend(["pong-bot"]),
        "hanabi" | "tiny-hanabi" => r.push("heuristic"),
        _ => {}
    }
    r
}

fn states_per_env(env: &str) -> usize {
    match env {
        // search is slow; these still cover thousands of decisions overall
        "breakthrough" => 300,
        _ => 10_000,
    }
}

#[test]
fn every_policy_output_is_legal() {
    for env_name in ENV_NAMES {
        let specs: Vec<AgentSpec> = roster(env_name).iter().map(|s| s.parse().unwrap()).collect();
        let mut policies: Vec<Box<dyn Policy>> =
            specs.iter().map(|s| s.build(env_name, ObsMode::TextOnly).unwrap()).collect();
        let mut rng = probe_rng(17);
        let mut env = make_env(env_name, 0).unwrap();
        let mut checked = 0;
        let mut episode = 0u64;
        while checked < states_per_env(env_name) {
            if env.is_terminal() {
                episode += 1;
                env.reset(episode);
                for p in policies.iter_mut() {
                    p.reset(episode);
                }
            }
            for agent in env.movers() {
                let legal = env.legal_actions(agent);
                let ctx = DecisionContext { agent, step: env.step_index(), legal: &legal, env: env.as_ref() };
                let p = &mut policies[rng.gen_range(0..specs.len())];
                let token = p.act(&ctx, &mut rng).unwrap_or_else(|e| panic!("{env_name} {}: {e}", p.name()));
                assert!(legal.contains(&token), "{env_name} {}: {token} not in {legal:?}", p.name());
                checked += 1;
            }
            let joint = random_joint(env.as_ref(), &mut rng);
            env.step(&joint).unwrap();
        }
    }
}
