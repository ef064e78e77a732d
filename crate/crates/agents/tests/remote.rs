//! Remote agent client against an in-process HTTP endpoint.

use rand::SeedableRng;
use std::sync::mpsc;
use std::thread;
use vsarena_agents::remote::{Endpoint, ObsMode, RemoteConfig, RemotePolicy, RemoteRequest, RequestKind};
use vsarena_core::{make_env, AgentId, DecisionContext, GameRng, Policy};

/// Serves one reply per entry of `replies` and forwards each request body.
fn serve(replies: Vec<String>) -> (String, mpsc::Receiver<RemoteRequest>) {
    let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
    let url = format!("http://{}/act", server.server_addr().to_ip().unwrap());
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for reply in replies {
            let mut req = server.recv().unwrap();
            let mut body = String::new();
            req.as_reader().read_to_string(&mut body).unwrap();
            tx.send(serde_json::from_str(&body).unwrap()).unwrap();
            req.respond(tiny_http::Response::from_string(reply)).unwrap();
        }
    });
    (url, rx)
}

fn policy(url: &str, mode: ObsMode) -> RemotePolicy {
    let mut cfg = RemoteConfig::new(Endpoint::Http(url.to_string()));
    cfg.mode = mode;
    cfg.retries = 0;
    RemotePolicy::new(cfg)
}

#[test]
fn text_only_requests_carry_no_frames() {
    let (url, rx) = serve(vec![r#"{"token": "<BET>"}"#.into()]);
    let env = make_env("kuhn", 3).unwrap();
    let legal = env.legal_actions(AgentId(0));
    let ctx = DecisionContext { agent: AgentId(0), step: 0, legal: &legal, env: env.as_ref() };
    let mut p = policy(&url, ObsMode::TextOnly);
    let token = p.act(&ctx, &mut GameRng::seed_from_u64(0)).unwrap();
    assert_eq!(token, "<BET>");
    let req = rx.recv().unwrap();
    assert!(req.frames.is_empty());
    assert_eq!(req.mode, ObsMode::TextOnly);
    assert_eq!(req.kind, RequestKind::Act);
    assert_eq!(req.legal, legal);
    assert_eq!(req.text, env.observe_text(AgentId(0)));
}

#[test]
fn multimodal_requests_carry_png_frames() {
    let (url, rx) = serve(vec![r#"{"token": "<UP>"}"#.into()]);
    let env = make_env("pong", 3).unwrap();
    let legal = env.legal_actions(AgentId(1));
    let ctx = DecisionContext { agent: AgentId(1), step: 0, legal: &legal, env: env.as_ref() };
    let mut p = policy(&url, ObsMode::Multimodal);
    p.act(&ctx, &mut GameRng::seed_from_u64(0)).unwrap();
    let req = rx.recv().unwrap();
    assert_eq!(req.frames.len(), 4);
    use base64::Engine as _;
    let png = base64::engine::general_purpose::STANDARD.decode(&req.frames[0]).unwrap();
    assert_eq!(&png[1..4], b"PNG");
}

#[test]
fn illegal_and_garbled_replies_fall_back_to_a_legal_token() {
    let (url, _rx) = serve(vec![r#"{"token": "<FOLD>"}"#.into(), "not json".into()]);
    let env = make_env("kuhn", 3).unwrap();
    let legal = env.legal_actions(AgentId(0));
    let ctx = DecisionContext { agent: AgentId(0), step: 0, legal: &legal, env: env.as_ref() };
    let mut p = policy(&url, ObsMode::TextOnly);
    let mut rng = GameRng::seed_from_u64(0);
    for _ in 0..2 {
        let token = p.act(&ctx, &mut rng).unwrap();
        assert!(legal.contains(&token));
    }
    assert_eq!(p.fallbacks, 2);
}

#[test]
fn prediction_requests_use_the_target_vocabulary() {
    let (url, rx) = serve(vec![r#"{"token": "<LEFT>"}"#.into()]);
    let env = make_env("coin", 3).unwrap();
    let mut p = policy(&url, ObsMode::TextOnly);
    let token = p.predict(env.as_ref(), AgentId(0), AgentId(1), &mut GameRng::seed_from_u64(0)).unwrap();
    assert_eq!(token, "<LEFT>");
    let req = rx.recv().unwrap();
    assert_eq!(req.kind, RequestKind::Predict);
    assert_eq!(req.legal, env.spec().action_vocabulary[1]);
}

#[test]
fn unreachable_endpoint_is_a_policy_error() {
    let env = make_env("kuhn", 3).unwrap();
    let legal = env.legal_actions(AgentId(0));
    let ctx = DecisionContext { agent: AgentId(0), step: 0, legal: &legal, env: env.as_ref() };
    let mut p = policy("http://127.0.0.1:9/act", ObsMode::TextOnly);
    assert!(p.act(&ctx, &mut GameRng::seed_from_u64(0)).is_err());
}

#[test]
fn stdio_agent_round_trip() {
    let mut cfg = RemoteConfig::new(Endpoint::Stdio(r#"while read line; do echo '{"token": "<PASS>"}'; done"#.into()));
    cfg.mode = ObsMode::TextOnly;
    let mut p = RemotePolicy::new(cfg);
    let env = make_env("kuhn", 3).unwrap();
    let legal = env.legal_actions(AgentId(0));
    let ctx = DecisionContext { agent: AgentId(0), step: 0, legal: &legal, env: env.as_ref() };
    let mut rng = GameRng::seed_from_u64(0);
    for _ in 0..3 {
        assert_eq!(p.act(&ctx, &mut rng).unwrap(), "<PASS>");
    }
    assert_eq!(p.fallbacks, 0);
}
