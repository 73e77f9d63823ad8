use super::Model;
use crate::common::{entropy_bits, sample_categorical, Action, Percept, RngStream};
use crate::env::{next_instance_id, Environment};
use crate::error::{ConfigError, EnvError, ModelError};

/// Posterior weights below this are set to exactly zero.
pub const UNDERFLOW_CLAMP: f64 = 1e-300;

/// Bayes mixture over a finite, ordered hypothesis list.
#[derive(Debug)]
pub struct MixtureModel<E: Environment> {
    id: u64,
    hypotheses: Vec<E>,
    weights: Vec<f64>,
    prior_entropy: f64,
    clamp: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixtureSnapshot<S> {
    owner: u64,
    weights: Vec<f64>,
    states: Vec<S>,
}

impl<E: Environment + Clone> Clone for MixtureModel<E> {
    fn clone(&self) -> Self {
        Self {
            id: next_instance_id(),
            hypotheses: self.hypotheses.clone(),
            weights: self.weights.clone(),
            prior_entropy: self.prior_entropy,
            clamp: self.clamp,
        }
    }
}

impl<E: Environment> MixtureModel<E> {
    /// Mixture with prior `weights` (normalized here).
    pub fn new(hypotheses: Vec<E>, weights: Vec<f64>) -> Result<Self, ConfigError> {
        if hypotheses.len() < 2 {
            return Err(ConfigError::Invalid("a mixture needs at least two hypotheses".into()));
        }
        if hypotheses.len() != weights.len() {
            return Err(ConfigError::Invalid(format!(
                "{} hypotheses but {} prior weights",
                hypotheses.len(),
                weights.len()
            )));
        }
        let actions = hypotheses[0].num_actions();
        if hypotheses.iter().any(|h| h.num_actions() != actions) {
            return Err(ConfigError::Invalid("hypotheses disagree on the action space".into()));
        }
        let weights = crate::common::FiniteDistribution::new(weights)?.weights().to_vec();
        let prior_entropy = entropy_bits(&weights);
        Ok(Self { id: next_instance_id(), hypotheses, weights, prior_entropy, clamp: UNDERFLOW_CLAMP })
    }

    pub fn uniform(hypotheses: Vec<E>) -> Result<Self, ConfigError> {
        let n = hypotheses.len();
        Self::new(hypotheses, vec![1.0; n.max(1)])
    }

    /// Overrides the underflow clamp threshold.
    pub fn with_clamp(mut self, clamp: f64) -> Self {
        self.clamp = clamp;
        self
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn hypotheses(&self) -> &[E] {
        &self.hypotheses
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// Samples a hypothesis index from the posterior. A point-mass
    /// posterior consumes no randomness.
    pub fn sample_index(&self, rng: &mut RngStream) -> usize {
        match self.sole_support() {
            Some(i) => i,
            None => sample_categorical(&self.weights, rng).expect("posterior keeps positive mass"),
        }
    }

    /// The only hypothesis with positive weight, if there is exactly one.
    pub fn sole_support(&self) -> Option<usize> {
        let mut found = None;
        for (i, w) in self.weights.iter().enumerate() {
            if *w > 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Lowest-index hypothesis with positive weight.
    pub fn first_unfalsified(&self) -> Option<usize> {
        self.weights.iter().position(|w| *w > 0.0)
    }
}

impl<E: Environment + Clone> MixtureModel<E> {
    pub fn hypothesis(&self, index: usize) -> E {
        self.hypotheses[index].clone()
    }
}

impl<E: Environment> Environment for MixtureModel<E> {
    type Snapshot = MixtureSnapshot<E::Snapshot>;

    fn num_actions(&self) -> usize {
        self.hypotheses[0].num_actions()
    }

    fn reward_range(&self) -> (f64, f64) {
        self.hypotheses
            .iter()
            .map(|h| h.reward_range())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)))
    }

    // Falsified hypotheses can never regain weight, so their states are
    // left to go stale.
    fn perform(&mut self, action: Action) -> Result<(), EnvError> {
        for (h, w) in self.hypotheses.iter_mut().zip(&self.weights) {
            if *w > 0.0 {
                h.perform(action)?;
            }
        }
        Ok(())
    }

    fn generate_percept(&mut self, rng: &mut RngStream) -> Percept {
        let i = self.sample_index(rng);
        self.hypotheses[i].generate_percept(rng)
    }

    fn conditional_probability(&self, percept: &Percept) -> f64 {
        self.hypotheses
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(h, w)| w * h.conditional_probability(percept))
            .sum()
    }

    fn snapshot(&self) -> Self::Snapshot {
        MixtureSnapshot {
            owner: self.id,
            weights: self.weights.clone(),
            states: self.hypotheses.iter().map(|h| h.snapshot()).collect(),
        }
    }

    fn restore(&mut self, snapshot: &Self::Snapshot) -> Result<(), EnvError> {
        if snapshot.owner != self.id {
            return Err(EnvError::SnapshotMismatch { snapshot: snapshot.owner, target: self.id });
        }
        self.weights.copy_from_slice(&snapshot.weights);
        for (h, s) in self.hypotheses.iter_mut().zip(&snapshot.states) {
            h.restore(s)?;
        }
        Ok(())
    }
}

impl<E: Environment> Model for MixtureModel<E> {
    fn update(&mut self, percept: &Percept) -> Result<(), ModelError> {
        // Work on a copy so a failed update leaves the posterior untouched.
        let mut next = self.weights.clone();
        let mut total = 0.0;
        for (h, w) in self.hypotheses.iter().zip(next.iter_mut()) {
            if *w > 0.0 {
                *w *= h.conditional_probability(percept);
                total += *w;
            }
        }
        if !(total > 0.0) {
            return Err(ModelError::Inconsistent);
        }
        let mut kept = 0.0;
        for w in &mut next {
            *w /= total;
            if *w < self.clamp {
                *w = 0.0;
            }
            kept += *w;
        }
        if !(kept > 0.0) {
            return Err(ModelError::Exhausted);
        }
        if kept != 1.0 {
            for w in &mut next {
                *w /= kept;
            }
        }
        self.weights = next;
        Ok(())
    }

    fn entropy(&self) -> f64 {
        entropy_bits(&self.weights)
    }

    fn max_entropy(&self) -> f64 {
        self.prior_entropy
    }
}

/// Entropy reduction from `before` to `after`, in bits. Negative when the
/// posterior spreads out.
pub fn info_gain(before: &[f64], after: &[f64]) -> f64 {
    entropy_bits(before) - entropy_bits(after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{GridSpec, Gridworld};
    use std::sync::Arc;

    fn worlds(theta: f64) -> Vec<Gridworld> {
        // Dispenser at (0,1) and at (1,0).
        ["N=2 theta=T rewards=-1,-5,100\n.D\n..\n", "N=2 theta=T rewards=-1,-5,100\n..\nD.\n"]
            .iter()
            .map(|t| {
                let text = t.replace('T', &theta.to_string());
                Gridworld::new(Arc::new(GridSpec::parse(&text).unwrap()))
            })
            .collect()
    }

    #[test]
    fn falsification_and_fixed_point() {
        let mut m = MixtureModel::uniform(worlds(1.0)).unwrap();
        m.perform(Action(1)).unwrap();
        let cake = Percept { observation: 0b0110, reward: 100.0 };
        assert_eq!(m.conditional_probability(&cake), 0.5);
        m.update(&cake).unwrap();
        assert_eq!(m.weights(), &[1.0, 0.0]);
        m.perform(Action(4)).unwrap();
        m.update(&cake).unwrap();
        assert_eq!(m.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn soft_update_arithmetic() {
        let mut m = MixtureModel::uniform(worlds(0.75)).unwrap();
        m.perform(Action(1)).unwrap();
        // Hypothesis 0 pays cake w.p. 0.75 here; hypothesis 1 never does.
        m.update(&Percept { observation: 0b0110, reward: -1.0 }).unwrap();
        assert!((m.weights()[0] - 0.2).abs() < 1e-12);
        assert!((m.weights()[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn impossible_percept_is_an_error() {
        let mut m = MixtureModel::uniform(worlds(1.0)).unwrap();
        let bogus = Percept { observation: 0b1111, reward: -1.0 };
        assert_eq!(m.update(&bogus), Err(ModelError::Inconsistent));
    }

    #[test]
    fn info_gain_examples() {
        assert_eq!(info_gain(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert_eq!(info_gain(&[0.5, 0.5], &[1.0, 0.0]), 1.0);
        assert!((info_gain(&[0.5, 0.5], &[0.75, 0.25]) - 0.188_721_875_540_867).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_construction() {
        let mut w = worlds(1.0);
        w.truncate(1);
        assert!(MixtureModel::uniform(w).is_err());
        assert!(MixtureModel::new(worlds(1.0), vec![1.0]).is_err());
    }
}
