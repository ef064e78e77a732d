use proptest::prelude::*;
use vsarena_core::trajectory::UniformPolicy;
use vsarena_core::{make_env, replay, run_episode, AgentId, ENV_NAMES};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn episodes_replay_from_seed_and_actions(env_idx in 0..ENV_NAMES.len(), seed in any::<u64>()) {
        let name = ENV_NAMES[env_idx];
        let mut env = make_env(name, 0).unwrap();
        let (mut a, mut b) = (UniformPolicy, UniformPolicy);
        let t = run_episode(env.as_mut(), seed, &mut [&mut a, &mut b]).unwrap();
        let r = replay(env.as_mut(), seed, &t.joint_actions(), t.participants.clone()).unwrap();
        prop_assert_eq!(t.canonical_bytes(), r.canonical_bytes());
        prop_assert_eq!(t.steps.len(), t.len());
        if t.terminal {
            prop_assert!(env.legal_actions(AgentId(0)).is_empty());
        }
    }

    #[test]
    fn observations_are_pure_functions_of_state(env_idx in 0..ENV_NAMES.len(), seed in any::<u64>()) {
        let env = make_env(ENV_NAMES[env_idx], seed).unwrap();
        let copy = env.box_clone();
        for agent in 0..env.num_agents() {
            let (x, y) = (env.observe(AgentId(agent)), copy.observe(AgentId(agent)));
            prop_assert_eq!(&x.text, &y.text);
            prop_assert_eq!(x.frames_png(), y.frames_png());
        }
    }
}

#[test]
fn registry_rejects_unknown_names_with_the_list() {
    let err = make_env("go", 0).err().unwrap().to_string();
    for name in ENV_NAMES {
        assert!(err.contains(name), "{err}");
    }
}
