//! The agent zoo. Every agent consumes percepts through [`Agent::update`]
//! and emits actions through [`Agent::select_action`].

mod bayes;
mod build;
mod mdl;
mod qlearn;
mod scripted;
mod thompson;
mod utility;

pub use bayes::{BayesAgent, BayesExpAgent};
pub use build::{build_agent, AgentConfig, AgentKind, ModelKind, PriorKind, TrueEnv};
pub use mdl::MdlAgent;
pub use qlearn::{QLearning, QTable};
pub use scripted::ScriptedAgent;
pub use thompson::ThompsonAgent;
pub use utility::{utility_kl_surrogate, utility_rl, utility_shannon, utility_square, Utility, SHANNON_CAP};

use crate::common::{Action, Percept, RngStream};
use crate::error::ModelError;

pub trait Agent: Send {
    /// Conditions the agent on `percept`, produced after `action`. `None`
    /// marks the first cycle, before any action has been taken.
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError>;

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError>;

    /// Information gain of the most recent update, in bits.
    fn last_info_gain(&self) -> f64 {
        0.0
    }
}

impl<A: Agent + ?Sized> Agent for Box<A> {
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError> {
        (**self).update(action, percept)
    }

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError> {
        (**self).select_action(rng)
    }

    fn last_info_gain(&self) -> f64 {
        (**self).last_info_gain()
    }
}
