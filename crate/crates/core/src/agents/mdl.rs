use super::bayes::observe;
use super::{Agent, Utility};
use crate::common::{Action, Percept, RngStream};
use crate::env::Environment;
use crate::error::{ConfigError, ModelError};
use crate::models::{MixtureModel, Model};
use crate::planners::{Mcts, PlannerConfig};

/// Follows the optimal policy of the lowest-index hypothesis not yet
/// falsified; index order stands in for description length.
#[derive(Debug)]
pub struct MdlAgent<E: Environment> {
    mixture: MixtureModel<E>,
    planner: Mcts,
    current: Option<usize>,
    info_gain: f64,
    plan_log: Vec<usize>,
}

impl<E: Environment + Model + Clone> MdlAgent<E> {
    pub fn new(mixture: MixtureModel<E>, cfg: PlannerConfig) -> Result<Self, ConfigError> {
        Ok(Self { mixture, planner: Mcts::new(cfg)?, current: None, info_gain: 0.0, plan_log: Vec::new() })
    }

    /// Index of the hypothesis each emitted action was planned on.
    pub fn plan_log(&self) -> &[usize] {
        &self.plan_log
    }

    pub fn mixture(&self) -> &MixtureModel<E> {
        &self.mixture
    }
}

impl<E: Environment + Model + Clone + Send> Agent for MdlAgent<E> {
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError> {
        self.info_gain = observe(&mut self.mixture, action, percept)?;
        match action {
            Some(a) => self.planner.advance(a, percept, 0.0),
            None => self.planner.reset(),
        }
        Ok(())
    }

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError> {
        let index = self.mixture.first_unfalsified().ok_or(ModelError::Exhausted)?;
        if self.current != Some(index) {
            self.planner.reset();
            self.current = Some(index);
        }
        let mut rho = self.mixture.hypothesis(index);
        self.plan_log.push(index);
        self.planner.plan(&mut rho, Utility::Reward, rng)
    }

    fn last_info_gain(&self) -> f64 {
        self.info_gain
    }
}
