//! Two-party engine: a restricted Alice, a pluggable Bob, and the secure
//! assisted gate protocols built from them.

mod alice;
mod assisted;
mod bob;
mod check;
mod circuit;
mod compile;
pub mod fixtures;
pub(crate) mod runner;
mod transcript;

use thiserror::Error;

pub use alice::{op_log_is_permitted, AliceMachine, AliceOp, Coin, KeyBit, KeyPlan, Primitive};
pub use assisted::{
    assisted_cnot, assisted_hadamard, assisted_measure, assisted_t, AssistedCnot, AssistedHadamard,
    AssistedT,
};
pub use bob::{Bob, BobReply, BobStrategy, Dropped, QubitLease};
pub use check::{composite_unitary, key_bit_count, max_key_deviation, run_protocol, ProtocolRun};
pub use circuit::{Circuit, CircuitGate, GateKind};
pub use compile::{compile_one_round, compile_two_round, OneRoundProtocol, TwoRoundProtocol};
pub use runner::{
    plan_blind_slots, run_circuit, run_circuit_on, Mode, RunFailure, RunOptions, RunOutcome, Slot,
    SlotKind,
};
pub use transcript::{Direction, GateRequest, Message, ProtocolTranscript, RequestKind, RoundView};

use crate::error::Error;
use crate::hierarchy::GateSpec;
use crate::simulator::UnitaryMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("Bob did not return the qubits in round {round}")]
    Aborted { round: usize },
    #[error("operation outside Alice's resource model: {0}")]
    Forbidden(String),
    #[error("needs {needed} dummy qubits, {available} available")]
    DummyBudget { needed: usize, available: usize },
    #[error("stopped after sending round {round}")]
    Halted { round: usize },
}

/// A secure assisted implementation of one gate.
pub trait GateProtocol {
    fn name(&self) -> &str;

    fn arity(&self) -> usize;

    /// The gate the protocol implements on Alice's wires.
    fn ideal(&self) -> &UnitaryMatrix;

    /// Dummy qubits the protocol borrows while it runs.
    fn dummies_needed(&self) -> usize {
        0
    }

    fn execute(
        &self,
        alice: &mut AliceMachine,
        wires: &[usize],
        bob: &mut Bob,
    ) -> Result<(), ProtocolError>;
}

/// Picks the dedicated protocol for H, CNOT and T and compiles anything else.
pub fn protocol_for(spec: &GateSpec) -> Result<Box<dyn GateProtocol>, ProtocolError> {
    Ok(match spec.name.as_str() {
        "H" => Box::new(AssistedHadamard::new()),
        "CNOT" => Box::new(AssistedCnot::new()),
        "T" => Box::new(AssistedT::new()),
        _ => match compile_one_round(spec) {
            Ok(p) => Box::new(p),
            Err(_) => Box::new(compile_two_round(spec)?),
        },
    })
}

fn check_wires(wires: &[usize], arity: usize) -> Result<(), ProtocolError> {
    if wires.len() != arity {
        return Err(Error::DimensionMismatch {
            expected: arity,
            found: wires.len(),
        }
        .into());
    }
    for (i, w) in wires.iter().enumerate() {
        if wires[..i].contains(w) {
            return Err(Error::DuplicateTarget(*w).into());
        }
    }
    Ok(())
}
