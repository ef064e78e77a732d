use crate::config::{pick, require, DatasetSection, EvalSection, FileConfig, PlaySection, RenderSection, VerifySection};
use crate::{Cli, CliError, EvalArgs, PlayArgs, RenderArgs, VerifyArgs};
use serde_json::json;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use vsarena_agents::{split_specs, AgentSpec, ObsMode, RemoteConfig, RemotePolicy};
use vsarena_core::registry::SUITE;
use vsarena_core::trajectory::run_episode_observed;
use vsarena_core::{make_env, mix_seed, policy_rng, AgentId, Environment, Policy, ENV_NAMES};
use vsarena_harness::dataset::io::{read_predictions, read_samples, write_dataset};
use vsarena_harness::dataset::random_predictor_accuracy;
use vsarena_harness::protocol::ProtocolError;
use vsarena_harness::verify::{run_verify, VerifyConfig};
use vsarena_harness::{generate_dataset, run_protocol, score_predictions, DatasetRecipe, EvalProtocol, Opponent, SuiteReport};

/// Settings shared by every command.
pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub workers: Option<usize>,
    pub mode: ObsMode,
}

impl Context {
    pub fn new(cli: &Cli, file: &FileConfig) -> Result<Self, CliError> {
        let mode = match cli.mode.clone().or(file.mode.clone()) {
            Some(m) => m.parse().map_err(|e| CliError::Config(format!("mode: {e}")))?,
            None => ObsMode::default(),
        };
        let workers = cli.workers.or(file.workers);
        if workers == Some(0) {
            return Err(CliError::Config("workers: must be at least 1".into()));
        }
        Ok(Self {
            out: pick(cli.out.clone(), file.out.clone(), PathBuf::from("vsarena-out")),
            seed: pick(cli.seed, file.seed, 0),
            workers,
            mode,
        })
    }

    fn dir(&self, parts: &[&str]) -> Result<PathBuf, CliError> {
        let mut p = self.out.clone();
        for part in parts {
            p.push(part);
        }
        fs::create_dir_all(&p)?;
        Ok(p)
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn check_env(name: &str, key: &str) -> Result<Box<dyn Environment>, CliError> {
    make_env(name, 0).map_err(|e| CliError::Config(format!("{key}: {e}")))
}

/// Parses and builds one policy per seat.
fn seat_policies(env: &dyn Environment, specs: &[String], key: &str, mode: ObsMode) -> Result<Vec<Box<dyn Policy>>, CliError> {
    let n = env.num_agents();
    if specs.len() != n {
        return Err(CliError::Config(format!("{key}: {} has {n} seats, got {} agent specs", env.spec().name, specs.len())));
    }
    specs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let spec: AgentSpec = s.parse().map_err(|e| CliError::Config(format!("{key}[{i}]: {e}")))?;
            spec.build(&env.spec().name, mode).map_err(|e| CliError::Config(format!("{key}[{i}]: {e}")))
        })
        .collect()
}

fn seat_label(env: &str, seat: usize) -> String {
    match env {
        "breakthrough" => ["Black", "White"][seat].to_string(),
        _ => format!("seat {seat}"),
    }
}

fn frame_name(step: usize) -> String {
    format!("{step:04}.png")
}

/// Writes the viewer's newest frame and text observation for the current step.
fn dump_step(env: &dyn Environment, viewer: usize, dir: &Path) -> std::io::Result<()> {
    let step = env.step_index();
    let obs = env.observe(AgentId(viewer));
    if let Some(png) = obs.frames_png().pop() {
        fs::write(dir.join(frame_name(step)), png)?;
    }
    fs::write(dir.join(format!("{step:04}.txt")), obs.text)
}

pub fn play(ctx: &Context, args: &PlayArgs, file: &PlaySection) -> Result<(), CliError> {
    let env_name = require(args.env.clone(), file.env.clone(), "play.env")?;
    let mut env = check_env(&env_name, "play.env")?;
    let specs = require(args.agents.as_deref().map(split_specs), file.agents.clone(), "play.agents")?;
    let mut policies = seat_policies(env.as_ref(), &specs, "play.agents", ctx.mode)?;
    let games = pick(args.games, file.games, 1);
    let frames = args.frames || file.frames.unwrap_or(false);
    let dir = ctx.dir(&["play", &env_name])?;
    let n = env.num_agents();
    let mut totals = vec![0.0; n];
    let mut results = Vec::new();
    for g in 0..games {
        let seed = mix_seed(ctx.seed, g as u64);
        let mut refs: Vec<&mut dyn Policy> = policies.iter_mut().map(|p| p.as_mut() as &mut dyn Policy).collect();
        let frame_dir = if frames { Some(ctx.dir(&["play", &env_name, &format!("game_{g:04}")])?) } else { None };
        let mut io_err = None;
        let t = run_episode_observed(env.as_mut(), seed, &mut refs, |e, _| {
            if let (Some(d), None) = (&frame_dir, &io_err) {
                io_err = dump_step(e, 0, d).err();
            }
        })
        .map_err(|e| CliError::Runtime(format!("game {g} (seed {seed}): {e}")))?;
        if let Some(d) = &frame_dir {
            dump_step(env.as_ref(), 0, d)?;
        }
        if let Some(e) = io_err {
            return Err(e.into());
        }
        let f = fs::File::create(dir.join(format!("game_{g:04}.jsonl")))?;
        t.write_jsonl(BufWriter::new(f))?;
        for (a, r) in totals.iter_mut().zip(&t.returns) {
            *a += r;
        }
        let line = if n == 2 && t.returns[0] != t.returns[1] && t.returns.iter().sum::<f64>() == 0.0 {
            let w = usize::from(t.returns[1] > t.returns[0]);
            format!("{} ({}) wins, returns {:?}, {} steps", seat_label(&env_name, w), specs[w], t.returns, t.len())
        } else {
            format!("returns {:?}, {} steps", t.returns, t.len())
        };
        println!("game {g} (seed {seed}): {line}");
        results.push(json!({ "game": g, "seed": seed, "returns": t.returns, "steps": t.len(), "terminal": t.terminal }));
    }
    let means: Vec<f64> = totals.iter().map(|t| t / games.max(1) as f64).collect();
    for (i, m) in means.iter().enumerate() {
        println!("mean return {} ({}): {m:.4}", seat_label(&env_name, i), specs[i]);
    }
    write_json(
        &dir.join("summary.json"),
        &json!({ "env": env_name, "seed": ctx.seed, "agents": specs, "games": games, "mean_returns": means, "results": results }),
    )
}

fn protocol_error(e: ProtocolError) -> CliError {
    match e {
        ProtocolError::UnknownEnv(_) | ProtocolError::Spec(_) => CliError::Config(format!("eval: {e}")),
        other => CliError::Runtime(other.to_string()),
    }
}

fn suite_or_one(name: &str) -> Vec<String> {
    if name == "all" {
        SUITE.iter().map(|s| s.to_string()).collect()
    } else {
        vec![name.to_string()]
    }
}

pub fn eval(ctx: &Context, args: &EvalArgs, file: &EvalSection) -> Result<(), CliError> {
    let env_name = require(args.env.clone(), file.env.clone(), "eval.env")?;
    let agent_s = require(args.agent.clone(), file.agent.clone(), "eval.agent")?;
    let agent: AgentSpec = agent_s.parse().map_err(|e| CliError::Config(format!("eval.agent: {e}")))?;
    let opponent = match args.opponent.clone().or(file.opponent.clone()) {
        None => None,
        Some(s) if s == "self" => Some(Opponent::SelfPlay),
        Some(s) => Some(Opponent::Fixed(s.parse().map_err(|e| CliError::Config(format!("eval.opponent: {e}")))?)),
    };
    let dir = ctx.dir(&["eval"])?;
    let mut reports = Vec::new();
    for env in suite_or_one(&env_name) {
        let mut p = EvalProtocol::standard(&env).map_err(protocol_error)?;
        p.seed = ctx.seed;
        p.mode = ctx.mode;
        if let Some(w) = ctx.workers {
            p.workers = w;
        }
        if let Some(r) = args.runs.or(file.runs) {
            p.runs = r;
        }
        if let Some(e) = args.episodes.or(file.episodes) {
            p.episodes_per_run = e;
        }
        if let Some(r) = args.reference_episodes.or(file.reference_episodes) {
            p.reference_episodes = r;
        }
        if let Some(o) = &opponent {
            p.opponent = o.clone();
        }
        if p.runs == 0 || p.episodes_per_run == 0 {
            return Err(CliError::Config("eval.runs and eval.episodes must be at least 1".into()));
        }
        let report = run_protocol(&p, &agent).map_err(protocol_error)?;
        print!("{}", report.table());
        write_json(&dir.join(format!("{env}.json")), &report)?;
        reports.push(report);
    }
    if reports.len() > 1 {
        let suite = SuiteReport::new(reports);
        print!("{}", suite.table());
        write_json(&dir.join("suite.json"), &suite)?;
    }
    Ok(())
}

pub fn dataset_gen(ctx: &Context, env: Option<String>, predictor: Option<String>, file: &DatasetSection) -> Result<(), CliError> {
    let env_name = require(env, file.env.clone(), "dataset.env")?;
    let predictor = match predictor.or(file.predictor.clone()) {
        None => None,
        Some(s) => match s.parse::<AgentSpec>() {
            Ok(AgentSpec::Remote(ep)) => {
                let mut cfg = RemoteConfig::from_env(&ep).map_err(|e| CliError::Config(format!("dataset.predictor: {e}")))?;
                cfg.mode = ctx.mode;
                Some(cfg)
            }
            Ok(other) => return Err(CliError::Config(format!("dataset.predictor: `{other}` is not a remote agent"))),
            Err(e) => return Err(CliError::Config(format!("dataset.predictor: {e}"))),
        },
    };
    let root = ctx.dir(&["datasets"])?;
    for env in suite_or_one(&env_name) {
        let recipe = DatasetRecipe::standard(&env)
            .ok_or_else(|| CliError::Config(format!("dataset.env: no dataset recipe for `{env}`")))?;
        let mut ds = generate_dataset(&recipe, ctx.seed).map_err(|e| CliError::Runtime(e.to_string()))?;
        let dir = write_dataset(&mut ds, &root).map_err(|e| CliError::Runtime(e.to_string()))?;
        println!("{env}: {} samples in {}", ds.samples.len(), dir.display());
        for (pair, n) in &ds.manifest.composition {
            println!("  {n:>4}  {pair}");
        }
        for d in &ds.manifest.deviations {
            println!("  note: {d}");
        }
        println!("  random-predictor accuracy: {:.1}%", random_predictor_accuracy(&ds.samples, 20, ctx.seed));
        if let Some(cfg) = &predictor {
            let mut remote = RemotePolicy::new(cfg.clone());
            let mut lines = String::new();
            let mut preds = Vec::with_capacity(ds.samples.len());
            for (i, s) in ds.samples.iter().enumerate() {
                let mut rng = policy_rng(mix_seed(ctx.seed, i as u64), s.predicting_agent);
                let p = remote
                    .predict(ds.contexts[i].as_ref(), AgentId(s.predicting_agent), AgentId(s.target_agent), &mut rng)
                    .map_err(|e| CliError::Runtime(format!("sample {}: {e}", s.id)))?;
                lines.push_str(&json!({ "id": s.id, "prediction": p }).to_string());
                lines.push('\n');
                preds.push(Some(p));
            }
            fs::write(dir.join("predictions.jsonl"), lines)?;
            let acc = score_predictions(&ds.samples, &preds);
            println!("  predictor accuracy: {acc:.1}%");
            write_json(&dir.join("score.json"), &json!({ "env": env, "accuracy": acc, "samples": ds.samples.len() }))?;
        }
    }
    Ok(())
}

pub fn dataset_score(
    ctx: &Context,
    env: Option<String>,
    pred: &Path,
    dir: Option<PathBuf>,
    file: &DatasetSection,
) -> Result<(), CliError> {
    let env_name = require(env, file.env.clone(), "dataset.env")?;
    let dir = dir.unwrap_or_else(|| ctx.out.join("datasets").join(&env_name));
    if !dir.join("samples.jsonl").exists() {
        return Err(CliError::Config(format!("--dir {}: no samples.jsonl (run `dataset gen` first)", dir.display())));
    }
    if !pred.exists() {
        return Err(CliError::Config(format!("--pred {}: no such file", pred.display())));
    }
    let samples = read_samples(&dir).map_err(|e| CliError::Runtime(e.to_string()))?;
    if let Some(s) = samples.iter().find(|s| s.env != env_name) {
        return Err(CliError::Config(format!("dataset.env: `{env_name}` does not match the dataset's `{}`", s.env)));
    }
    let preds = read_predictions(pred, samples.len()).map_err(|e| CliError::Runtime(e.to_string()))?;
    let acc = score_predictions(&samples, &preds);
    println!("{env_name}: accuracy {acc:.1}% over {} samples", samples.len());
    let out = ctx.dir(&["scores"])?;
    write_json(
        &out.join(format!("{env_name}.json")),
        &json!({ "env": env_name, "accuracy": acc, "samples": samples.len(), "predictions": pred.display().to_string() }),
    )
}

pub fn render(ctx: &Context, args: &RenderArgs, file: &RenderSection) -> Result<(), CliError> {
    let env_name = require(args.env.clone(), file.env.clone(), "render.env")?;
    let mut env = check_env(&env_name, "render.env")?;
    let n = env.num_agents();
    let specs = args.agents.as_deref().map(split_specs).or(file.agents.clone()).unwrap_or_else(|| vec!["random".into(); n]);
    let mut policies = seat_policies(env.as_ref(), &specs, "render.agents", ctx.mode)?;
    let viewer = pick(args.viewer, file.viewer, 0);
    if viewer >= n {
        return Err(CliError::Config(format!("render.viewer: {env_name} has seats 0..{n}, got {viewer}")));
    }
    let dir = ctx.dir(&["render", &env_name, &format!("seed_{}", ctx.seed)])?;
    let mut refs: Vec<&mut dyn Policy> = policies.iter_mut().map(|p| p.as_mut() as &mut dyn Policy).collect();
    let mut io_err = None;
    let t = run_episode_observed(env.as_mut(), ctx.seed, &mut refs, |e, _| {
        if io_err.is_none() {
            io_err = dump_step(e, viewer, &dir).err();
        }
    })
    .map_err(|e| CliError::Runtime(e.to_string()))?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    dump_step(env.as_ref(), viewer, &dir)?;
    println!("{} frames in {}", t.len() + 1, dir.display());
    Ok(())
}

pub fn verify(ctx: &Context, args: &VerifyArgs, file: &VerifySection) -> Result<(), CliError> {
    let base = if args.quick { VerifyConfig::quick() } else { VerifyConfig::default() };
    let cfg = VerifyConfig {
        seed: ctx.seed,
        probes: pick(args.probes, file.probes, base.probes),
        hanabi_episodes: pick(args.hanabi_episodes, file.hanabi_episodes, base.hanabi_episodes),
        equivalence_states: pick(args.equivalence_states, file.equivalence_states, base.equivalence_states),
        ..base
    };
    if cfg.probes == 0 {
        return Err(CliError::Config("verify.probes: must be at least 1".into()));
    }
    let report = run_verify(&cfg);
    print!("{}", report.table());
    let dir = ctx.dir(&[])?;
    write_json(&dir.join("verify.json"), &report)?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} / {}: {}", c.module, c.invariant, c.detail))
            .collect();
        Err(CliError::Verify(failed.join("\n")))
    }
}

pub fn envs() -> Result<(), CliError> {
    for name in ENV_NAMES {
        let env = make_env(name, 0).map_err(|e| CliError::Runtime(e.to_string()))?;
        let s = env.spec();
        let cap = s.max_steps.map_or("-".to_string(), |m| m.to_string());
        println!("{:<14} {:<12}  agents {}  max steps {cap}  frames {}", name, format!("{:?}", s.interaction_class), s.num_agents, s.history_depth);
    }
    Ok(())
}
