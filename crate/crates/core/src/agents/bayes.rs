use super::{Agent, Utility};
use crate::common::{Action, Percept, RngStream};
use crate::error::{ConfigError, ModelError};
use crate::models::Model;
use crate::planners::{Mcts, PlannerConfig};

/// Conditions `model` on one real (action, percept) step and returns the
/// information gain.
pub(crate) fn observe<M: Model>(model: &mut M, action: Option<Action>, percept: &Percept) -> Result<f64, ModelError> {
    if let Some(a) = action {
        model.perform(a)?;
    }
    let before = model.entropy();
    model.update(percept)?;
    Ok(before - model.entropy())
}

/// Plans with ρUCT on its model under a fixed utility. With the reward
/// utility this is AIμ (model = truth) or AIξ (model = mixture); with the
/// knowledge-seeking utilities it is a KSA.
#[derive(Debug)]
pub struct BayesAgent<M> {
    model: M,
    planner: Mcts,
    utility: Utility,
    info_gain: f64,
}

impl<M: Model> BayesAgent<M> {
    pub fn new(model: M, utility: Utility, cfg: PlannerConfig) -> Result<Self, ConfigError> {
        Ok(Self { model, planner: Mcts::new(cfg)?, utility, info_gain: 0.0 })
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn planner(&self) -> &Mcts {
        &self.planner
    }
}

impl<M: Model + Send> Agent for BayesAgent<M> {
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError> {
        self.info_gain = observe(&mut self.model, action, percept)?;
        match action {
            Some(a) => self.planner.advance(a, percept, self.info_gain),
            None => self.planner.reset(),
        }
        Ok(())
    }

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError> {
        self.planner.plan(&mut self.model, self.utility, rng)
    }

    fn last_info_gain(&self) -> f64 {
        self.info_gain
    }
}

/// Bayes-optimal agent that switches to information-gain planning for `m`
/// steps whenever the attainable information gain exceeds `ε_t = ε₀/√t`.
#[derive(Debug)]
pub struct BayesExpAgent<M> {
    model: M,
    exploit: Mcts,
    explore: Mcts,
    epsilon0: f64,
    t: u64,
    explore_left: u32,
    info_gain: f64,
    exploring: Vec<bool>,
}

impl<M: Model> BayesExpAgent<M> {
    /// `epsilon0` defaults to 5% of the prior entropy.
    pub fn new(model: M, cfg: PlannerConfig, epsilon0: Option<f64>) -> Result<Self, ConfigError> {
        let epsilon0 = epsilon0.unwrap_or(0.05 * model.max_entropy());
        if !(epsilon0 >= 0.0) {
            return Err(ConfigError::Invalid(format!("epsilon0 must be non-negative, got {epsilon0}")));
        }
        Ok(Self {
            model,
            exploit: Mcts::new(cfg)?,
            explore: Mcts::new(cfg)?,
            epsilon0,
            t: 0,
            explore_left: 0,
            info_gain: 0.0,
            exploring: Vec::new(),
        })
    }

    pub fn epsilon(&self, t: u64) -> f64 {
        self.epsilon0 / (t.max(1) as f64).sqrt()
    }

    /// Per emitted action, whether it came from the exploration policy.
    pub fn exploration_log(&self) -> &[bool] {
        &self.exploring
    }

    pub fn model(&self) -> &M {
        &self.model
    }
}

impl<M: Model + Send> Agent for BayesExpAgent<M> {
    fn update(&mut self, action: Option<Action>, percept: &Percept) -> Result<(), ModelError> {
        self.info_gain = observe(&mut self.model, action, percept)?;
        match action {
            Some(a) => {
                self.exploit.advance(a, percept, self.info_gain);
                self.explore.advance(a, percept, self.info_gain);
            }
            None => {
                self.exploit.reset();
                self.explore.reset();
            }
        }
        Ok(())
    }

    fn select_action(&mut self, rng: &mut RngStream) -> Result<Action, ModelError> {
        self.t += 1;
        let horizon = self.exploit.config().horizon;
        let explore = if self.explore_left > 0 {
            self.explore_left -= 1;
            self.explore.search(&mut self.model, Utility::KullbackLeibler, rng)?;
            true
        } else {
            let eps = self.epsilon(self.t);
            // The discounted information gain over any horizon is bounded by
            // the current entropy, so no search can beat the threshold then.
            if self.model.entropy() <= eps {
                false
            } else {
                self.explore.search(&mut self.model, Utility::KullbackLeibler, rng)?;
                if self.explore.root_value() > eps {
                    self.explore_left = horizon - 1;
                    true
                } else {
                    false
                }
            }
        };
        self.exploring.push(explore);
        if explore {
            Ok(self.explore.best_action(rng))
        } else {
            self.exploit.plan(&mut self.model, Utility::Reward, rng)
        }
    }

    fn last_info_gain(&self) -> f64 {
        self.info_gain
    }
}
