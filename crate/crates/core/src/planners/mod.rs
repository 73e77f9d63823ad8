//! Action selection: exact value iteration for known finite MDPs and ρUCT
//! tree search over black-box models.

mod mcts;
mod value_iteration;

pub use mcts::{uct_score, uct_select, Mcts, PlannerConfig, RootChild, REUSE_THRESHOLD};
pub use value_iteration::{value_iteration, FiniteMdp, Solution};
