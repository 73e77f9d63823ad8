use crate::common::{Action, Percept, RngStream};
use crate::models::Model;
use crate::error::ModelError;
use serde::{Deserialize, Serialize};

/// Upper bound on the Shannon utility; an impossible percept scores this.
pub const SHANNON_CAP: f64 = 1000.0;

/// What an agent maximizes, evaluated once per simulated percept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Utility {
    /// The percept's reward.
    Reward,
    /// Negative predictive probability of the percept.
    Square,
    /// Surprisal of the percept in bits, capped.
    Shannon,
    /// Entropy reduction of the beliefs caused by the percept.
    KullbackLeibler,
}

impl Utility {
    /// Declared (min, max) utility used to normalize search values.
    pub fn range<M: Model>(self, model: &M) -> (f64, f64) {
        match self {
            Utility::Reward => model.reward_range(),
            Utility::Square => (-1.0, 0.0),
            Utility::Shannon => (0.0, SHANNON_CAP),
            Utility::KullbackLeibler => (0.0, model.max_entropy()),
        }
    }

    /// Performs `action` on `model`, samples a percept from it, conditions
    /// the model on that percept and scores it.
    pub fn step<M: Model>(
        self,
        model: &mut M,
        action: Action,
        rng: &mut RngStream,
    ) -> Result<(Percept, f64), ModelError> {
        model.perform(action)?;
        let percept = model.generate_percept(rng);
        let u = match self {
            Utility::Reward => {
                model.update(&percept)?;
                utility_rl(&percept)
            }
            Utility::Square => {
                let p = model.conditional_probability(&percept);
                model.update(&percept)?;
                utility_square(p)
            }
            Utility::Shannon => {
                let p = model.conditional_probability(&percept);
                model.update(&percept)?;
                utility_shannon(p)
            }
            Utility::KullbackLeibler => {
                let before = model.entropy();
                model.update(&percept)?;
                before - model.entropy()
            }
        };
        Ok((percept, u))
    }
}

pub fn utility_rl(percept: &Percept) -> f64 {
    percept.reward
}

/// `-p` for predictive probability `p`.
pub fn utility_square(p: f64) -> f64 {
    -p
}

/// `-log2 p`, capped at [`SHANNON_CAP`].
pub fn utility_shannon(p: f64) -> f64 {
    if p > 0.0 {
        (-p.log2()).min(SHANNON_CAP)
    } else {
        SHANNON_CAP
    }
}

/// Negative belief entropy. Summing its per-step differences gives the
/// information gain the KL agent plans with.
pub fn utility_kl_surrogate<M: Model>(model: &M) -> f64 {
    -model.entropy()
}
