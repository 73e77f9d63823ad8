use crate::agents::Utility;
use crate::common::{Action, Percept, RngStream};
use crate::error::{ConfigError, ModelError};
use crate::models::Model;
use std::collections::HashMap;

/// Information gain below this magnitude keeps the search tree across cycles.
pub const REUSE_THRESHOLD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerConfig {
    /// Planning horizon m.
    pub horizon: u32,
    /// Samples per decision, κ.
    pub samples: u32,
    /// Exploration constant C.
    pub ucb: f64,
    /// Geometric discount applied per simulated step.
    pub gamma: f64,
    /// Sum utilities without discounting inside the tree.
    pub undiscounted: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { horizon: 6, samples: 600, ucb: 1.0, gamma: 0.99, undiscounted: false }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.horizon == 0 || self.samples == 0 {
            return Err(ConfigError::Invalid("horizon and samples must be at least 1".into()));
        }
        if !(self.ucb > 0.0) {
            return Err(ConfigError::Invalid(format!("ucb constant must be positive, got {}", self.ucb)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(ConfigError::Invalid(format!("gamma {} outside [0, 1]", self.gamma)));
        }
        Ok(())
    }

    fn step_discount(&self) -> f64 {
        if self.undiscounted {
            1.0
        } else {
            self.gamma
        }
    }
}

#[derive(Clone, Debug, Default)]
struct DecisionNode {
    visits: u32,
    value: f64,
    children: Vec<Option<ChanceNode>>,
}

#[derive(Clone, Debug, Default)]
struct ChanceNode {
    visits: u32,
    value: f64,
    children: HashMap<Percept, DecisionNode>,
}

/// Statistics of one root action, as dumped for introspection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootChild {
    pub action: Action,
    pub visits: u32,
    pub value: f64,
    pub ucb: f64,
}

/// UCT score of a visited child.
pub fn uct_score(value: f64, visits: u32, parent_visits: u32, horizon: u32, width: f64, c: f64) -> f64 {
    value / (f64::from(horizon) * width) + c * (f64::from(parent_visits).ln() / f64::from(visits)).sqrt()
}

/// Picks among `children` given as (value, visits): an unvisited child
/// uniformly at random if any, else the highest UCT score with random
/// tie-breaking.
pub fn uct_select(
    children: &[(f64, u32)],
    parent_visits: u32,
    horizon: u32,
    width: f64,
    c: f64,
    rng: &mut RngStream,
) -> usize {
    let unvisited: Vec<usize> = (0..children.len()).filter(|&i| children[i].1 == 0).collect();
    if !unvisited.is_empty() {
        return unvisited[rng.below(unvisited.len())];
    }
    let scores: Vec<f64> = children
        .iter()
        .map(|&(v, t)| uct_score(v, t, parent_visits, horizon, width, c))
        .collect();
    argmax_random(&scores, rng)
}

fn argmax_random(values: &[f64], rng: &mut RngStream) -> usize {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..values.len()).filter(|&i| values[i] == best).collect();
    ties[rng.below(ties.len())]
}

/// ρUCT: Monte-Carlo tree search over histories of a black-box model that
/// is restored to its pre-search state after every sample.
#[derive(Clone, Debug)]
pub struct Mcts {
    cfg: PlannerConfig,
    root: DecisionNode,
}

impl Mcts {
    pub fn new(cfg: PlannerConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        Ok(Self { cfg, root: DecisionNode::default() })
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.cfg
    }

    pub fn root_visits(&self) -> u32 {
        self.root.visits
    }

    /// Runs κ samples from the root and returns the action with the highest
    /// value estimate, ties broken uniformly.
    pub fn plan<M: Model>(
        &mut self,
        model: &mut M,
        utility: Utility,
        rng: &mut RngStream,
    ) -> Result<Action, ModelError> {
        self.search(model, utility, rng)?;
        if log::log_enabled!(log::Level::Trace) {
            log::trace!("root {:?}", self.root_children(model, utility));
        }
        Ok(self.best_action(rng))
    }

    /// Visited root action with the highest value estimate, ties broken
    /// uniformly. Call after [`Mcts::search`].
    pub fn best_action(&self, rng: &mut RngStream) -> Action {
        let visited: Vec<(usize, f64)> = self
            .root
            .children
            .iter()
            .enumerate()
            .filter_map(|(a, c)| c.as_ref().filter(|c| c.visits > 0).map(|c| (a, c.value)))
            .collect();
        assert!(!visited.is_empty(), "best_action called before search");
        let values: Vec<f64> = visited.iter().map(|v| v.1).collect();
        Action(visited[argmax_random(&values, rng)].0)
    }

    /// Runs κ samples without choosing an action.
    pub fn search<M: Model>(
        &mut self,
        model: &mut M,
        utility: Utility,
        rng: &mut RngStream,
    ) -> Result<(), ModelError> {
        let (lo, hi) = utility.range(model);
        let width = if hi > lo { hi - lo } else { 1.0 };
        let ctx = Context { cfg: self.cfg, utility, width, actions: model.num_actions() };
        let saved = model.snapshot();
        for _ in 0..self.cfg.samples {
            let result = ctx.sample_decision(&mut self.root, model, 0, rng, true);
            model.restore(&saved)?;
            result?;
        }
        Ok(())
    }

    /// Largest value estimate among visited root actions (0 if none).
    pub fn root_value(&self) -> f64 {
        self.root
            .children
            .iter()
            .flatten()
            .filter(|c| c.visits > 0)
            .map(|c| c.value)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
            .unwrap_or(0.0)
    }

    /// Per-action root statistics with their current UCT scores.
    pub fn root_children<M: Model>(&self, model: &M, utility: Utility) -> Vec<RootChild> {
        let (lo, hi) = utility.range(model);
        let width = if hi > lo { hi - lo } else { 1.0 };
        (0..model.num_actions())
            .map(|a| {
                let (visits, value) = self
                    .root
                    .children
                    .get(a)
                    .and_then(|c| c.as_ref())
                    .map_or((0, 0.0), |c| (c.visits, c.value));
                let ucb = if visits == 0 {
                    f64::INFINITY
                } else {
                    uct_score(value, visits, self.root.visits, self.cfg.horizon, width, self.cfg.ucb)
                };
                RootChild { action: Action(a), visits, value, ucb }
            })
            .collect()
    }

    /// Moves the root along the realized (action, percept) edge, or starts
    /// over when beliefs changed.
    pub fn advance(&mut self, action: Action, percept: &Percept, info_gain: f64) {
        let old = std::mem::take(&mut self.root);
        if info_gain.abs() > REUSE_THRESHOLD {
            return;
        }
        if let Some(Some(mut chance)) = old.children.into_iter().nth(action.0) {
            if let Some(child) = chance.children.remove(percept) {
                self.root = child;
            }
        }
    }

    pub fn reset(&mut self) {
        self.root = DecisionNode::default();
    }
}

struct Context {
    cfg: PlannerConfig,
    utility: Utility,
    width: f64,
    actions: usize,
}

impl Context {
    fn sample_decision<M: Model>(
        &self,
        node: &mut DecisionNode,
        model: &mut M,
        depth: u32,
        rng: &mut RngStream,
        is_root: bool,
    ) -> Result<f64, ModelError> {
        if depth == self.cfg.horizon {
            return Ok(0.0);
        }
        let ret = if node.visits == 0 && !is_root {
            self.rollout(model, self.cfg.horizon - depth, rng)?
        } else {
            if node.children.is_empty() {
                node.children = vec![None; self.actions];
            }
            let stats: Vec<(f64, u32)> = node
                .children
                .iter()
                .map(|c| c.as_ref().map_or((0.0, 0), |c| (c.value, c.visits)))
                .collect();
            let a = uct_select(&stats, node.visits, self.cfg.horizon, self.width, self.cfg.ucb, rng);
            let chance = node.children[a].get_or_insert_with(ChanceNode::default);
            self.sample_chance(chance, Action(a), model, depth, rng)?
        };
        node.value += (ret - node.value) / f64::from(node.visits + 1);
        node.visits += 1;
        Ok(ret)
    }

    fn sample_chance<M: Model>(
        &self,
        node: &mut ChanceNode,
        action: Action,
        model: &mut M,
        depth: u32,
        rng: &mut RngStream,
    ) -> Result<f64, ModelError> {
        let (percept, u) = self.utility.step(model, action, rng)?;
        let child = node.children.entry(percept).or_default();
        let future = self.sample_decision(child, model, depth + 1, rng, false)?;
        let ret = u + self.cfg.step_discount() * future;
        node.value += (ret - node.value) / f64::from(node.visits + 1);
        node.visits += 1;
        Ok(ret)
    }

    // Folded from the last step backwards so a rollout return has the same
    // rounding as the equivalent path through the tree.
    fn rollout<M: Model>(&self, model: &mut M, steps: u32, rng: &mut RngStream) -> Result<f64, ModelError> {
        let mut utilities = Vec::with_capacity(steps as usize);
        for _ in 0..steps {
            let a = Action(rng.below(self.actions));
            utilities.push(self.utility.step(model, a, rng)?.1);
        }
        let gamma = self.cfg.step_discount();
        Ok(utilities.iter().rev().fold(0.0, |acc, u| u + gamma * acc))
    }
}
