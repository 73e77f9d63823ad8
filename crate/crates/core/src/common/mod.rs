//! Shared vocabulary: actions, percepts, histories, finite distributions,
//! discounting and the seeded random streams every stochastic component
//! draws from.

mod discount;
mod distribution;
mod rng;

pub use discount::{effective_horizon, geometric_discount, DiscountFunction};
pub use distribution::{entropy_bits, sample_categorical, FiniteDistribution};
pub use rng::RngStream;

use std::fmt;
use std::hash::{Hash, Hasher};

/// Index into an environment's action space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(pub usize);

impl Action {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One environment output: an observation bit string and a reward.
///
/// Equality and hashing use the exact bit pattern of the reward, so percepts
/// can key the chance-node children of a search tree.
#[derive(Clone, Copy, Debug)]
pub struct Percept {
    pub observation: u32,
    pub reward: f64,
}

impl Percept {
    pub fn new(observation: u32, reward: f64) -> Self {
        Self { observation, reward }
    }
}

impl PartialEq for Percept {
    fn eq(&self, other: &Self) -> bool {
        self.observation == other.observation && self.reward.to_bits() == other.reward.to_bits()
    }
}

impl Eq for Percept {}

impl Hash for Percept {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.observation.hash(state);
        self.reward.to_bits().hash(state);
    }
}

/// Append-only interaction record.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct History {
    steps: Vec<(Action, Percept)>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, action: Action, percept: Percept) {
        self.steps.push((action, percept));
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Action, Percept)> {
        self.steps.iter()
    }

    pub fn last(&self) -> Option<&(Action, Percept)> {
        self.steps.last()
    }
}
