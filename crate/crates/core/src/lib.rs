pub mod classical;
pub mod cli;
pub mod error;
pub mod hierarchy;
pub mod honesty;
pub mod pauli;
pub mod protocols;
pub mod security;
pub mod simulator;

pub use error::{Error, Result};
