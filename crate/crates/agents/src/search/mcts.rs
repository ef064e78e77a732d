//! UCT Monte Carlo tree search with random-rollout leaf evaluation.

use super::{Board, TurnGame};
use rand::seq::SliceRandom;
use rand::Rng;
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MctsConfig {
    pub c: f64,
    pub simulations: u32,
    pub rollouts: u32,
}

impl Default for MctsConfig {
    fn default() -> Self {
        Self { c: 2.0, simulations: 100, rollouts: 10 }
    }
}

struct Node<M> {
    mv: Option<M>,
    parent: Option<usize>,
    children: Vec<usize>,
    expanded: bool,
    visits: u32,
    /// Sum of outcomes in [-1, 1] for the player who made `mv`.
    total: f64,
    mover: usize,
}

fn outcome_for(o: Option<usize>, player: usize) -> f64 {
    match o {
        None => 0.0,
        Some(w) if w == player => 1.0,
        Some(_) => -1.0,
    }
}

fn rollout<G: TurnGame>(g: &G, player: usize, rng: &mut impl Rng) -> f64 {
    let mut s = g.clone();
    loop {
        if let Some(o) = s.outcome() {
            return outcome_for(o, player);
        }
        let moves = s.moves();
        let m = *moves.choose(rng).expect("non-terminal positions have moves");
        s.play(m);
    }
}

/// Runs the search and returns the root move with the most visits; ties go to
/// the higher mean value, then to the earlier move in canonical order.
pub fn search<G: TurnGame>(root: &G, cfg: MctsConfig, rng: &mut impl Rng) -> Option<G::Move> {
    if root.outcome().is_some() {
        return None;
    }
    let root_moves = root.moves();
    if root_moves.len() == 1 {
        return Some(root_moves[0]);
    }
    let mut nodes: Vec<Node<G::Move>> = vec![Node {
        mv: None,
        parent: None,
        children: Vec::new(),
        expanded: false,
        visits: 0,
        total: 0.0,
        mover: 1 - root.to_move(),
    }];
    let mut canonical: Vec<G::Move> = Vec::new();
    for _ in 0..cfg.simulations.max(1) {
        let mut state = root.clone();
        let mut idx = 0;
        // selection
        while nodes[idx].expanded && !nodes[idx].children.is_empty() {
            let parent_visits = nodes[idx].visits.max(1) as f64;
            let mut best = None;
            let mut best_ucb = f64::NEG_INFINITY;
            for &c in &nodes[idx].children {
                let n = &nodes[c];
                let ucb = if n.visits == 0 {
                    f64::INFINITY
                } else {
                    n.total / n.visits as f64 + cfg.c * (parent_visits.ln() / n.visits as f64).sqrt()
                };
                if ucb > best_ucb {
                    best_ucb = ucb;
                    best = Some(c);
                }
            }
            idx = best.expect("expanded node has children");
            state.play(nodes[idx].mv.expect("child nodes carry a move"));
            if nodes[idx].visits == 0 {
                break;
            }
        }
        // expansion
        if !nodes[idx].expanded && state.outcome().is_none() {
            let mut moves = state.moves();
            if idx == 0 {
                canonical = moves.clone();
            }
            moves.shuffle(rng);
            let mover = state.to_move();
            for m in moves {
                nodes.push(Node {
                    mv: Some(m),
                    parent: Some(idx),
                    children: Vec::new(),
                    expanded: false,
                    visits: 0,
                    total: 0.0,
                    mover,
                });
                let id = nodes.len() - 1;
                nodes[idx].children.push(id);
            }
            nodes[idx].expanded = true;
            if idx == 0 {
                // the root itself is never scored; descend into a fresh child
                let c = nodes[0].children[0];
                state.play(nodes[c].mv.unwrap());
                idx = c;
            }
        }
        // evaluation, from the perspective of player 0
        let value0 = match state.outcome() {
            Some(o) => outcome_for(o, 0),
            None => {
                let n = cfg.rollouts.max(1);
                (0..n).map(|_| rollout(&state, 0, rng)).sum::<f64>() / n as f64
            }
        };
        // backpropagation
        let mut cur = Some(idx);
        while let Some(i) = cur {
            let node = &mut nodes[i];
            node.visits += 1;
            node.total += if node.mover == 0 { value0 } else { -value0 };
            cur = node.parent;
        }
    }
    let order = |m: &G::Move| canonical.iter().position(|x| x == m).unwrap_or(usize::MAX);
    nodes[0]
        .children
        .iter()
        .map(|&c| &nodes[c])
        .max_by(|a, b| {
            let mean = |n: &Node<G::Move>| if n.visits == 0 { f64::NEG_INFINITY } else { n.total / n.visits as f64 };
            a.visits
                .cmp(&b.visits)
                .then(mean(a).total_cmp(&mean(b)))
                .then(order(&b.mv.unwrap()).cmp(&order(&a.mv.unwrap())))
        })
        .and_then(|n| n.mv)
}

#[derive(Clone, Debug)]
pub struct MctsPolicy {
    pub config: MctsConfig,
}

impl MctsPolicy {
    pub fn new(config: MctsConfig) -> Self {
        Self { config }
    }
}

impl Policy for MctsPolicy {
    fn name(&self) -> String {
        let c = &self.config;
        format!("mcts:c={},sims={},rollouts={}", c.c, c.simulations, c.rollouts)
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        let token = match Board::from_view(ctx.env.view()) {
            Some(Board::Breakthrough(s)) => search(&s, self.config, rng).map(|m| m.to_string()),
            Some(Board::TicTacToe(s)) => search(&s, self.config, rng).map(|m| m.to_string()),
            None => return Err(PolicyError::Unsupported(ctx.env.spec().name.clone())),
        };
        token.ok_or(PolicyError::EmptyLegalSet)
    }
}
