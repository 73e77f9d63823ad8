use super::Agent;
use crate::common::{Action, Percept, RngStream};
use crate::error::{ConfigError, ModelError};
use std::collections::HashMap;

/// Action values keyed by the raw percept. Missing entries read as `init`.
#[derive(Clone, Debug)]
pub struct QTable {
    values: HashMap<Percept, Vec<f64>>,
    num_actions: usize,
    init: f64,
}

impl QTable {
    pub fn new(num_actions: usize, init: f64) -> Self {
        Self { values: HashMap::new(), num_actions, init }
    }

    pub fn get(&self, state: &Percept, action: Action) -> f64 {
        self.values.get(state).map_or(self.init, |q| q[action.0])
    }

    pub fn max(&self, state: &Percept) -> f64 {
        self.values
            .get(state)
            .map_or(self.init, |q| q.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    fn row_mut(&mut self, state: Percept) -> &mut Vec<f64> {
        let (n, init) = (self.num_actions, self.init);
        self.values.entry(state).or_insert_with(|| vec![init; n])
    }

    /// One-step Q-learning backup.
    pub fn backup(&mut self, s: Percept, a: Action, r: f64, next: &Percept, alpha: f64, gamma: f64) {
        let target = r + gamma * self.max(next);
        let q = &mut self.row_mut(s)[a.0];
        *q += alpha * (target - *q);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Tabular ε-greedy Q-learning on percepts as states.
#[derive(Clone, Debug)]
pub struct QLearning {
    table: QTable,
    alpha: f64,
    epsilon: f64,
    gamma: f64,
    state: Option<Percept>,
}

impl QLearning {
    pub fn new(num_actions: usize, alpha: f64, epsilon: f64, gamma: f64, init: f64) -> Result<Self, ConfigError> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&epsilon) || !(0.0..=1.0).contains(&gamma) {
            return Err(ConfigError::Invalid("q-learning alpha, epsilon and gamma must lie in [0, 1]".into()));
        }
        Ok(Self { table: QTable::new(num_actions, init), alpha, epsilon, gamma, state: None })
    }

    pub fn table(&self) -> &QTable {
        &self.table
    }
}

impl Agent for QLearning {
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError> {
        if let (Some(a), Some(s)) = (action, self.state) {
            self.table.backup(s, a, percept.reward, percept, self.alpha, self.gamma);
        }
        self.state = Some(*percept);
        Ok(())
    }

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError> {
        let n = self.table.num_actions;
        if rng.bernoulli(self.epsilon) {
            return Ok(Action(rng.below(n)));
        }
        let s = self.state.unwrap_or(Percept { observation: 0, reward: 0.0 });
        let values: Vec<f64> = (0..n).map(|a| self.table.get(&s, Action(a))).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ties: Vec<usize> = (0..n).filter(|&a| values[a] == best).collect();
        Ok(Action(ties[rng.below(ties.len())]))
    }
}
