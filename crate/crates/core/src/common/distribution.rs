use super::RngStream;
use crate::error::ConfigError;

/// Normalized weights over a finite set.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution {
    weights: Vec<f64>,
}

impl FiniteDistribution {
    /// Normalizes `weights`. Rejects negatives, NaNs and all-zero vectors.
    pub fn new(weights: Vec<f64>) -> Result<Self, ConfigError> {
        let mut dist = Self { weights };
        dist.normalize()?;
        Ok(dist)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution over an empty set");
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[at] = 1.0;
        Self { weights }
    }

    pub fn normalize(&mut self) -> Result<(), ConfigError> {
        if self.weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(ConfigError::Invalid("distribution has a negative or non-finite weight".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if total <= 0.0 {
            return Err(ConfigError::Invalid("distribution has no mass".into()));
        }
        for w in &mut self.weights {
            *w /= total;
        }
        Ok(())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(&self.weights)
    }

    pub fn sample(&self, rng: &mut RngStream) -> usize {
        sample_categorical(&self.weights, rng).expect("normalized distribution has mass")
    }
}

/// Shannon entropy in bits; zero-mass entries are skipped.
pub fn entropy_bits(weights: &[f64]) -> f64 {
    let h: f64 = weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 and rounding dust below zero both read as "no uncertainty".
    h.max(0.0)
}

/// Draws index `i` with probability proportional to `weights[i]`.
pub fn sample_categorical(weights: &[f64], rng: &mut RngStream) -> Result<usize, ConfigError> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(ConfigError::Invalid("cannot sample from an all-zero distribution".into()));
    }
    let target = rng.uniform() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return Ok(i);
            }
        }
    }
    Ok(last_positive)
}
