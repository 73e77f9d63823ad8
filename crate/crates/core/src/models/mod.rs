//! Agent-side environment models: the Bayes mixture over a finite class,
//! the dispenser-location class builder and the factorized Dirichlet
//! gridworld model.

mod dirichlet;
mod dispenser;
mod mixture;

pub use dirichlet::{DirichletGridModel, DirichletSnapshot, TileClass};
pub use dispenser::{build_dispenser_class, build_dogmatic_prior, trap_hypotheses, DispenserClass};
pub use mixture::{info_gain, MixtureModel, MixtureSnapshot, UNDERFLOW_CLAMP};

use crate::common::Percept;
use crate::env::{ChainEnv, Environment, Gridworld};
use crate::error::ModelError;

/// An environment the agent can also learn with: conditioning on a percept
/// updates its beliefs, and its belief entropy drives knowledge-seeking.
pub trait Model: Environment {
    /// Conditions beliefs on `percept`, which the current state produced.
    fn update(&mut self, percept: &Percept) -> Result<(), ModelError>;

    /// Entropy of the current beliefs in bits.
    fn entropy(&self) -> f64;

    /// Entropy of the initial beliefs; the upper end of the KL utility range.
    fn max_entropy(&self) -> f64;
}

// A known environment is a model with nothing left to learn.
impl Model for Gridworld {
    fn update(&mut self, _percept: &Percept) -> Result<(), ModelError> {
        Ok(())
    }

    fn entropy(&self) -> f64 {
        0.0
    }

    fn max_entropy(&self) -> f64 {
        0.0
    }
}

impl Model for ChainEnv {
    fn update(&mut self, _percept: &Percept) -> Result<(), ModelError> {
        Ok(())
    }

    fn entropy(&self) -> f64 {
        0.0
    }

    fn max_entropy(&self) -> f64 {
        0.0
    }
}
