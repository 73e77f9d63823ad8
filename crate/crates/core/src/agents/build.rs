use super::{Agent, BayesAgent, BayesExpAgent, MdlAgent, QLearning, ThompsonAgent, Utility};
use crate::env::{ChainEnv, Environment, Gridworld};
use crate::error::ConfigError;
use crate::models::{build_dispenser_class, build_dogmatic_prior, trap_hypotheses, DirichletGridModel, DispenserClass};
use crate::planners::PlannerConfig;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Aimu,
    Aixi,
    Square,
    Shannon,
    Kl,
    Bayesexp,
    Thompson,
    Mdl,
    Qlearn,
}

impl AgentKind {
    pub const ALL: [AgentKind; 9] = [
        AgentKind::Aimu,
        AgentKind::Aixi,
        AgentKind::Square,
        AgentKind::Shannon,
        AgentKind::Kl,
        AgentKind::Bayesexp,
        AgentKind::Thompson,
        AgentKind::Mdl,
        AgentKind::Qlearn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Aimu => "aimu",
            AgentKind::Aixi => "aixi",
            AgentKind::Square => "square",
            AgentKind::Shannon => "shannon",
            AgentKind::Kl => "kl",
            AgentKind::Bayesexp => "bayesexp",
            AgentKind::Thompson => "thompson",
            AgentKind::Mdl => "mdl",
            AgentKind::Qlearn => "qlearn",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AgentKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        AgentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown agent kind `{s}`")))
    }
}

/// Which environment model a learning agent plans with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Mixture over dispenser locations.
    Loc,
    /// Per-tile Dirichlet model.
    Dirichlet,
    /// The true environment.
    Truth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    Uniform,
    /// Most prior mass on worlds where the start's neighbors are traps.
    Dogmatic,
}

fn default_horizon() -> u32 {
    6
}
fn default_samples() -> u32 {
    600
}
fn default_ucb() -> f64 {
    1.0
}
fn default_gamma() -> f64 {
    0.99
}
fn default_prior() -> PriorKind {
    PriorKind::Uniform
}
fn default_dogmatic_mass() -> f64 {
    0.999
}
fn default_q_alpha() -> f64 {
    0.9
}
fn default_q_epsilon() -> f64 {
    0.05
}
fn default_q_init() -> f64 {
    100.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AgentConfig {
    pub kind: AgentKind,
    #[serde(default = "default_horizon")]
    pub horizon: u32,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default = "default_ucb")]
    pub ucb: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Defaults to the truth for AIμ and to the dispenser class otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    #[serde(default = "default_prior")]
    pub prior: PriorKind,
    #[serde(default = "default_dogmatic_mass")]
    pub dogmatic_mass: f64,
    /// BayesExp threshold scale; defaults to 5% of the prior entropy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon0: Option<f64>,
    #[serde(default)]
    pub undiscounted: bool,
    #[serde(default = "default_q_alpha")]
    pub q_alpha: f64,
    #[serde(default = "default_q_epsilon")]
    pub q_epsilon: f64,
    #[serde(default = "default_q_init")]
    pub q_init: f64,
}

impl AgentConfig {
    pub fn new(kind: AgentKind) -> Self {
        Self {
            kind,
            horizon: default_horizon(),
            samples: default_samples(),
            ucb: default_ucb(),
            gamma: default_gamma(),
            model: None,
            prior: default_prior(),
            dogmatic_mass: default_dogmatic_mass(),
            epsilon0: None,
            undiscounted: false,
            q_alpha: default_q_alpha(),
            q_epsilon: default_q_epsilon(),
            q_init: default_q_init(),
        }
    }

    pub fn planner(&self) -> PlannerConfig {
        PlannerConfig {
            horizon: self.horizon,
            samples: self.samples,
            ucb: self.ucb,
            gamma: self.gamma,
            undiscounted: self.undiscounted,
        }
    }

    pub fn model_kind(&self) -> ModelKind {
        self.model.unwrap_or(match self.kind {
            AgentKind::Aimu => ModelKind::Truth,
            _ => ModelKind::Loc,
        })
    }
}

/// The true environment an agent is built against.
#[derive(Clone, Copy, Debug)]
pub enum TrueEnv<'a> {
    Grid(&'a Gridworld),
    Chain(&'a ChainEnv),
}

fn dispenser_class(cfg: &AgentConfig, grid: &Gridworld) -> Result<DispenserClass, ConfigError> {
    let spec = grid.spec();
    let theta = spec.best_dispenser().map_or(1.0, |(_, t)| t);
    let class = build_dispenser_class(spec, theta)?;
    match cfg.prior {
        PriorKind::Uniform => Ok(class),
        PriorKind::Dogmatic => build_dogmatic_prior(&class, trap_hypotheses(spec), cfg.dogmatic_mass),
    }
}

/// Builds the agent described by `cfg` for `env`.
pub fn build_agent(cfg: &AgentConfig, env: TrueEnv<'_>) -> Result<Box<dyn Agent>, ConfigError> {
    let planner = cfg.planner();
    planner.validate()?;
    let model = cfg.model_kind();
    let kind = cfg.kind;
    let unsupported =
        || ConfigError::Invalid(format!("agent `{kind}` does not support model {model:?} on this environment"));

    if kind == AgentKind::Qlearn {
        let actions = match env {
            TrueEnv::Grid(g) => g.num_actions(),
            TrueEnv::Chain(c) => c.num_actions(),
        };
        return Ok(Box::new(QLearning::new(actions, cfg.q_alpha, cfg.q_epsilon, cfg.gamma, cfg.q_init)?));
    }
    let utility = match kind {
        AgentKind::Square => Utility::Square,
        AgentKind::Shannon => Utility::Shannon,
        AgentKind::Kl => Utility::KullbackLeibler,
        _ => Utility::Reward,
    };

    match (env, model) {
        (TrueEnv::Chain(chain), ModelKind::Truth) => match kind {
            AgentKind::Aimu | AgentKind::Aixi => Ok(Box::new(BayesAgent::new(chain.clone(), utility, planner)?)),
            _ => Err(unsupported()),
        },
        (TrueEnv::Chain(_), _) => Err(unsupported()),
        (TrueEnv::Grid(grid), ModelKind::Truth) => match kind {
            AgentKind::Aimu | AgentKind::Aixi => Ok(Box::new(BayesAgent::new(grid.clone(), utility, planner)?)),
            _ => Err(unsupported()),
        },
        (TrueEnv::Grid(grid), ModelKind::Loc) => {
            let class = dispenser_class(cfg, grid)?;
            Ok(match kind {
                AgentKind::Aimu => return Err(unsupported()),
                AgentKind::Bayesexp => Box::new(BayesExpAgent::new(class, planner, cfg.epsilon0)?),
                AgentKind::Thompson => Box::new(ThompsonAgent::new(class, planner)?),
                AgentKind::Mdl => Box::new(MdlAgent::new(class, planner)?),
                _ => Box::new(BayesAgent::new(class, utility, planner)?),
            })
        }
        (TrueEnv::Grid(grid), ModelKind::Dirichlet) => {
            let dirichlet = DirichletGridModel::for_grid(grid.spec());
            Ok(match kind {
                AgentKind::Aixi | AgentKind::Square | AgentKind::Shannon | AgentKind::Kl => {
                    Box::new(BayesAgent::new(dirichlet, utility, planner)?)
                }
                AgentKind::Bayesexp => Box::new(BayesExpAgent::new(dirichlet, planner, cfg.epsilon0)?),
                _ => return Err(unsupported()),
            })
        }
    }
}
