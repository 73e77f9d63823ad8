//! True environments and the contract every environment (and every
//! agent-side model) implements.

mod chain;
mod grid_spec;
mod gridworld;

pub use chain::{ChainEnv, ChainSnapshot, ChainSpec, CHAIN_JUMP, CHAIN_RESET};
pub use grid_spec::{
    build_random_grid, GridSpec, Pos, Rewards, TileKind, TileProbabilities, DEFAULT_NOISE_ALPHABET,
};
pub use gridworld::{GridSnapshot, GridState, Gridworld, GRID_ACTIONS, NOOP, R_MAX};

use crate::common::{Action, Percept, RngStream};
use crate::error::EnvError;
use std::sync::atomic::{AtomicU64, Ordering};

/// A percept-generating process: the hidden-state machine the agent
/// interacts with, or any model of one.
pub trait Environment {
    type Snapshot: Clone + PartialEq + std::fmt::Debug + Send;

    fn num_actions(&self) -> usize;

    /// Smallest and largest reward any percept can carry.
    fn reward_range(&self) -> (f64, f64);

    fn perform(&mut self, action: Action) -> Result<(), EnvError>;

    /// Samples the percept produced by the current hidden state.
    fn generate_percept(&mut self, rng: &mut RngStream) -> Percept;

    /// Probability of `percept` given the current hidden state.
    fn conditional_probability(&self, percept: &Percept) -> f64;

    fn snapshot(&self) -> Self::Snapshot;

    fn restore(&mut self, snapshot: &Self::Snapshot) -> Result<(), EnvError>;
}

static NEXT_INSTANCE: AtomicU64 = AtomicU64::new(1);

/// Fresh id used to tie snapshots to the instance that produced them.
pub(crate) fn next_instance_id() -> u64 {
    NEXT_INSTANCE.fetch_add(1, Ordering::Relaxed)
}

pub(crate) fn check_action(action: Action, num_actions: usize) -> Result<(), EnvError> {
    if action.0 >= num_actions {
        return Err(EnvError::InvalidAction { action: action.0, num_actions });
    }
    Ok(())
}
