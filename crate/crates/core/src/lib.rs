pub mod agentsim;
pub mod equilibrium;
pub mod error;
pub mod fixedpoint;
pub mod hjb;
pub mod model;
pub mod output;
pub mod sampling;
pub mod validation;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use model::{ControlVector, ModelParams, StateDist, StrategyCase};
