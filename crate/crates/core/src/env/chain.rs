use super::{check_action, next_instance_id, Environment};
use crate::common::{Action, Percept, RngStream};
use crate::error::{ConfigError, EnvError};
use serde::{Deserialize, Serialize};

/// Returns to state 0 and pays `r_i`.
pub const CHAIN_RESET: Action = Action(0);
/// Advances one state; from the last state wraps to state 1.
pub const CHAIN_JUMP: Action = Action(1);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub r0: f64,
    pub ri: f64,
    pub rb: f64,
}

impl Default for ChainSpec {
    fn default() -> Self {
        Self { n: 6, r0: 0.0, ri: 1.0, rb: 1000.0 }
    }
}

impl ChainSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::Invalid("chain needs N >= 1".into()));
        }
        Ok(())
    }

    /// Deterministic transition: next state and reward.
    pub fn step(&self, state: usize, action: Action) -> (usize, f64) {
        if action == CHAIN_RESET {
            return (0, self.ri);
        }
        let next = if state < self.n { state + 1 } else { 1 };
        let reward = if next == self.n { self.rb } else { self.r0 };
        (next, reward)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainSnapshot {
    owner: u64,
    state: usize,
    reward: f64,
}

/// Deterministic chain with states 0..=N. The observation is the state
/// index and the reward is the one paid by the last transition.
#[derive(Debug)]
pub struct ChainEnv {
    id: u64,
    spec: ChainSpec,
    state: usize,
    reward: f64,
}

impl Clone for ChainEnv {
    fn clone(&self) -> Self {
        Self { id: next_instance_id(), spec: self.spec, state: self.state, reward: self.reward }
    }
}

impl ChainEnv {
    pub fn new(spec: ChainSpec) -> Result<Self, ConfigError> {
        spec.validate()?;
        Ok(Self { id: next_instance_id(), spec, state: 0, reward: spec.r0 })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn state(&self) -> usize {
        self.state
    }
}

impl Environment for ChainEnv {
    type Snapshot = ChainSnapshot;

    fn num_actions(&self) -> usize {
        2
    }

    fn reward_range(&self) -> (f64, f64) {
        let s = &self.spec;
        (s.r0.min(s.ri).min(s.rb), s.r0.max(s.ri).max(s.rb))
    }

    fn perform(&mut self, action: Action) -> Result<(), EnvError> {
        check_action(action, 2)?;
        let (next, reward) = self.spec.step(self.state, action);
        self.state = next;
        self.reward = reward;
        Ok(())
    }

    fn generate_percept(&mut self, _rng: &mut RngStream) -> Percept {
        Percept { observation: self.state as u32, reward: self.reward }
    }

    fn conditional_probability(&self, percept: &Percept) -> f64 {
        let same = percept.observation as usize == self.state && percept.reward == self.reward;
        if same {
            1.0
        } else {
            0.0
        }
    }

    fn snapshot(&self) -> ChainSnapshot {
        ChainSnapshot { owner: self.id, state: self.state, reward: self.reward }
    }

    fn restore(&mut self, snapshot: &ChainSnapshot) -> Result<(), EnvError> {
        if snapshot.owner != self.id {
            return Err(EnvError::SnapshotMismatch { snapshot: snapshot.owner, target: self.id });
        }
        self.state = snapshot.state;
        self.reward = snapshot.reward;
        Ok(())
    }
}
