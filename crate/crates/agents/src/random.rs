use rand::seq::SliceRandom;
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError};

/// Uniform over the legal set.
#[derive(Clone, Debug, Default)]
pub struct RandomPolicy;

impl Policy for RandomPolicy {
    fn name(&self) -> String {
        "random".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        ctx.legal.choose(rng).cloned().ok_or(PolicyError::EmptyLegalSet)
    }
}
