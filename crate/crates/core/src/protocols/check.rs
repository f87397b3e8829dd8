use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::protocols::{
    AliceMachine, Bob, BobStrategy, GateProtocol, KeyPlan, ProtocolError, ProtocolTranscript,
};
use crate::simulator::{StateVector, UnitaryMatrix};

/// Result of running a protocol on one input under one key assignment.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub output: StateVector,
    pub transcript: ProtocolTranscript,
    pub alice: AliceMachine,
}

/// Runs `protocol` on `input` (its wires are `0..arity`) with a fresh honest
/// Bob, forcing the first key bits to `forced` and drawing the rest from `seed`.
pub fn run_protocol(
    protocol: &dyn GateProtocol,
    input: &StateVector,
    forced: &[bool],
    seed: u64,
    strategy: BobStrategy,
) -> Result<ProtocolRun, ProtocolError> {
    let overrides: HashMap<usize, bool> = forced.iter().copied().enumerate().collect();
    let mut alice = AliceMachine::new(
        input,
        protocol.dummies_needed(),
        KeyPlan::with_overrides(seed, overrides),
    )?;
    let mut bob = Bob::new(strategy, seed ^ 0x5eed);
    let wires: Vec<usize> = (0..protocol.arity()).collect();
    alice.begin_session();
    protocol.execute(&mut alice, &wires, &mut bob)?;
    Ok(ProtocolRun {
        output: alice.data_state()?,
        transcript: alice.transcript().clone(),
        alice,
    })
}

/// Number of coin flips the protocol consumes.
pub fn key_bit_count(protocol: &dyn GateProtocol) -> Result<usize, ProtocolError> {
    let input = StateVector::prepare_zero(protocol.arity())?;
    let run = run_protocol(protocol, &input, &[], 0, BobStrategy::Honest)?;
    Ok(run.alice.key_store().len())
}

/// The map the protocol applies to Alice's wires under a fixed key
/// assignment, assembled column by column from basis-state runs.
pub fn composite_unitary(
    protocol: &dyn GateProtocol,
    forced: &[bool],
    seed: u64,
    strategy: BobStrategy,
) -> Result<UnitaryMatrix, ProtocolError> {
    let n = protocol.arity();
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let input = StateVector::basis(n, col)?;
        let run = run_protocol(protocol, &input, forced, seed, strategy.clone())?;
        for (row, a) in run.output.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(UnitaryMatrix::from_matrix(m, 1e-9)?)
}

/// Worst deviation from the ideal gate (after removing global phase) over
/// every assignment of the first `enumerated` key bits.
pub fn max_key_deviation(
    protocol: &dyn GateProtocol,
    enumerated: usize,
    seed: u64,
) -> Result<f64, ProtocolError> {
    let ideal = protocol.ideal();
    let mut worst: f64 = 0.0;
    for assignment in 0..1usize << enumerated {
        let forced: Vec<bool> = (0..enumerated)
            .map(|i| (assignment >> i) & 1 == 1)
            .collect();
        let u = composite_unitary(protocol, &forced, seed, BobStrategy::Honest)?;
        let dev = match u.global_phase_relative_to(ideal, 1e-6) {
            Some(c) => u.max_abs_diff(&ideal.scale(c)),
            None => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    Ok(worst)
}
