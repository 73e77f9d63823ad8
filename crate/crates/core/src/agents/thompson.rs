use super::bayes::observe;
use super::{Agent, Utility};
use crate::common::{Action, Percept, RngStream};
use crate::env::Environment;
use crate::error::{ConfigError, ModelError};
use crate::models::{MixtureModel, Model};
use crate::planners::{Mcts, PlannerConfig};

/// Thompson sampling: draws one hypothesis from the posterior and follows
/// its optimal policy for `m` actions before drawing again.
#[derive(Debug)]
pub struct ThompsonAgent<E: Environment> {
    mixture: MixtureModel<E>,
    planner: Mcts,
    current: Option<usize>,
    remaining: u32,
    info_gain: f64,
    plan_log: Vec<usize>,
}

impl<E: Environment + Model + Clone> ThompsonAgent<E> {
    pub fn new(mixture: MixtureModel<E>, cfg: PlannerConfig) -> Result<Self, ConfigError> {
        Ok(Self { mixture, planner: Mcts::new(cfg)?, current: None, remaining: 0, info_gain: 0.0, plan_log: Vec::new() })
    }

    /// Index of the hypothesis each emitted action was planned on.
    pub fn plan_log(&self) -> &[usize] {
        &self.plan_log
    }

    pub fn mixture(&self) -> &MixtureModel<E> {
        &self.mixture
    }
}

impl<E: Environment + Model + Clone + Send> Agent for ThompsonAgent<E> {
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError> {
        self.info_gain = observe(&mut self.mixture, action, percept)?;
        match action {
            // The plan is on a fixed hypothesis whose beliefs never change.
            Some(a) => self.planner.advance(a, percept, 0.0),
            None => self.planner.reset(),
        }
        Ok(())
    }

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError> {
        // A falsified sample is dropped early: the mixture stops tracking it.
        let falsified = self.current.map_or(true, |i| self.mixture.weights()[i] == 0.0);
        if self.remaining == 0 || falsified {
            let drawn = self.mixture.sample_index(rng);
            if self.current != Some(drawn) {
                self.planner.reset();
            }
            self.current = Some(drawn);
            self.remaining = self.planner.config().horizon;
        }
        self.remaining -= 1;
        let index = self.current.expect("hypothesis drawn above");
        let mut rho = self.mixture.hypothesis(index);
        self.plan_log.push(index);
        self.planner.plan(&mut rho, Utility::Reward, rng)
    }

    fn last_info_gain(&self) -> f64 {
        self.info_gain
    }
}
