use crate::common::Action;
use crate::env::{ChainSpec, CHAIN_JUMP, CHAIN_RESET};
use crate::error::ConfigError;

/// Finite MDP with transition tensor `p[s][a][s']` and rewards `r[s][a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMdp {
    p: Vec<Vec<Vec<f64>>>,
    r: Vec<Vec<f64>>,
}

impl FiniteMdp {
    pub fn new(p: Vec<Vec<Vec<f64>>>, r: Vec<Vec<f64>>) -> Result<Self, ConfigError> {
        let n = p.len();
        if n == 0 || r.len() != n {
            return Err(ConfigError::Invalid("MDP needs matching, non-empty P and R".into()));
        }
        let actions = p[0].len();
        for (s, rows) in p.iter().enumerate() {
            if rows.len() != actions || r[s].len() != actions || actions == 0 {
                return Err(ConfigError::Invalid(format!("state {s} has a ragged action set")));
            }
            for (a, row) in rows.iter().enumerate() {
                let total: f64 = row.iter().sum();
                if row.len() != n || row.iter().any(|x| !(*x >= 0.0)) || (total - 1.0).abs() > 1e-9 {
                    return Err(ConfigError::Invalid(format!("P[{s}][{a}] is not a probability vector")));
                }
            }
        }
        Ok(Self { p, r })
    }

    pub fn num_states(&self) -> usize {
        self.p.len()
    }

    pub fn num_actions(&self) -> usize {
        self.p[0].len()
    }

    pub fn transition(&self, s: usize, a: usize) -> &[f64] {
        &self.p[s][a]
    }

    pub fn reward(&self, s: usize, a: usize) -> f64 {
        self.r[s][a]
    }

    fn q_value(&self, v: &[f64], s: usize, a: usize, gamma: f64) -> f64 {
        let next: f64 = self.p[s][a].iter().zip(v).map(|(p, v)| p * v).sum();
        self.r[s][a] + gamma * next
    }

    /// The deterministic chain as an (N+1)-state MDP.
    pub fn chain(spec: &ChainSpec) -> Result<Self, ConfigError> {
        spec.validate()?;
        let n = spec.n + 1;
        let mut p = vec![vec![vec![0.0; n]; 2]; n];
        let mut r = vec![vec![0.0; 2]; n];
        for s in 0..n {
            for a in [CHAIN_RESET, CHAIN_JUMP] {
                let (next, reward) = spec.step(s, a);
                p[s][a.0][next] = 1.0;
                r[s][a.0] = reward;
            }
        }
        Self::new(p, r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    pub policy: Vec<Action>,
    pub iterations: usize,
}

/// Iterates the Bellman optimality backup until the max-norm change drops
/// below `tol`, then reads off the greedy policy (lowest action on ties).
pub fn value_iteration(mdp: &FiniteMdp, gamma: f64, tol: f64) -> Result<Solution, ConfigError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(ConfigError::Invalid(format!("value iteration needs 0 <= gamma < 1, got {gamma}")));
    }
    if !(tol > 0.0) {
        return Err(ConfigError::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let n = mdp.num_states();
    let mut v = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut delta: f64 = 0.0;
        for s in 0..n {
            next[s] = (0..mdp.num_actions())
                .map(|a| mdp.q_value(&v, s, a, gamma))
                .fold(f64::NEG_INFINITY, f64::max);
            delta = delta.max((next[s] - v[s]).abs());
        }
        std::mem::swap(&mut v, &mut next);
        if delta < tol {
            break;
        }
    }
    let policy = (0..n)
        .map(|s| {
            let mut best = 0;
            let mut best_q = mdp.q_value(&v, s, 0, gamma);
            for a in 1..mdp.num_actions() {
                let q = mdp.q_value(&v, s, a, gamma);
                if q > best_q {
                    best = a;
                    best_q = q;
                }
            }
            Action(best)
        })
        .collect();
    Ok(Solution { values: v, policy, iterations })
}
