//! General reinforcement learning agents (AIXI approximations) and the
//! gridworld and chain environments they are evaluated on.

pub mod agents;
pub mod common;
pub mod env;
pub mod error;
pub mod harness;
pub mod models;
pub mod planners;

pub use error::{Error, Result};
