use std::fmt;

use crate::error::Error;
use crate::pauli::MAX_DENSE_QUBITS;
use crate::protocols::{
    assisted_cnot, assisted_hadamard, assisted_measure, assisted_t, AliceMachine, AliceOp, Bob,
    BobStrategy, Circuit, CircuitGate, GateKind, KeyPlan, ProtocolError, ProtocolTranscript,
};
use crate::simulator::{derive_seed, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Each gate runs its own protocol, in circuit order.
    Plain,
    /// Requests follow a fixed H, CNOT, T cycle regardless of the circuit.
    Blind,
}

pub type SlotKind = GateKind;

/// One requested gate; `gate` is the circuit position it serves, or `None`
/// when it runs on junk qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub kind: SlotKind,
    pub gate: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Blind mode: total number of request cycles to pad to.
    pub cycles: Option<usize>,
    /// Also compute the exact distribution of the measurement record by
    /// enumerating Bob's raw outcomes.
    pub exact: bool,
}

impl RunOptions {
    pub fn plain(seed: u64) -> Self {
        Self {
            mode: Mode::Plain,
            seed,
            cycles: None,
            exact: false,
        }
    }

    pub fn blind(seed: u64) -> Self {
        Self {
            mode: Mode::Blind,
            ..Self::plain(seed)
        }
    }

    pub fn with_cycles(mut self, cycles: usize) -> Self {
        self.cycles = Some(cycles);
        self
    }

    pub fn exact(mut self, on: bool) -> Self {
        self.exact = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Alice's data qubits at the end of the run.
    pub final_state: StateVector,
    /// Alice's measurement results, in circuit order.
    pub measurements: Vec<bool>,
    /// Exact distribution of `measurements` (bit `i` = `i`-th measurement), when requested.
    pub exact_distribution: Option<Vec<f64>>,
    pub transcript: ProtocolTranscript,
    pub slots: Vec<Slot>,
    pub op_log: Vec<AliceOp>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub error: ProtocolError,
    /// Everything exchanged before the failure.
    pub transcript: ProtocolTranscript,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (after {} rounds)",
            self.error,
            self.transcript.round_count()
        )
    }
}

impl std::error::Error for RunFailure {}

impl From<ProtocolError> for RunFailure {
    fn from(error: ProtocolError) -> Self {
        Self {
            error,
            transcript: ProtocolTranscript::default(),
        }
    }
}

/// `[H, CNOT, T]`, plus a measurement slot when the circuit measures at
/// all. Whether a circuit measures is therefore visible to Bob.
fn blind_cycle(circuit: &Circuit) -> Vec<SlotKind> {
    let mut cycle = vec![GateKind::H, GateKind::Cnot, GateKind::T];
    if circuit.measurement_count() > 0 {
        cycle.push(GateKind::Measure);
    }
    cycle
}

/// Fills the repeating request cycle greedily with the circuit's gates.
///
/// Every cycle consumes at least one pending gate, so the slot count is at
/// most the cycle length times the gate count, before padding.
pub fn plan_blind_slots(circuit: &Circuit, cycles: Option<usize>) -> Result<Vec<Slot>, Error> {
    let cycle = blind_cycle(circuit);
    let gates = circuit.gates();
    let mut slots = Vec::new();
    let mut next = 0;
    let mut used = 0;
    while next < gates.len() {
        for &kind in &cycle {
            if next < gates.len() && gates[next].kind() == kind {
                slots.push(Slot {
                    kind,
                    gate: Some(next),
                });
                next += 1;
            } else {
                slots.push(Slot { kind, gate: None });
            }
        }
        used += 1;
    }
    if let Some(target) = cycles {
        if target < used {
            return Err(Error::Precondition(format!(
                "circuit needs {used} request cycles, more than the {target} requested"
            )));
        }
        for _ in used..target {
            slots.extend(cycle.iter().map(|&kind| Slot { kind, gate: None }));
        }
    }
    Ok(slots)
}

pub(crate) fn plan(circuit: &Circuit, options: &RunOptions) -> Result<Vec<Slot>, Error> {
    match options.mode {
        Mode::Plain => Ok(circuit
            .gates()
            .iter()
            .enumerate()
            .map(|(i, g)| Slot {
                kind: g.kind(),
                gate: Some(i),
            })
            .collect()),
        Mode::Blind => plan_blind_slots(circuit, options.cycles),
    }
}

pub(crate) fn dummies_for(circuit: &Circuit, mode: Mode) -> usize {
    match mode {
        Mode::Plain => usize::from(circuit.gates().iter().any(|g| g.kind() == GateKind::T)),
        Mode::Blind => 2,
    }
}

pub(crate) fn execute_slots(
    alice: &mut AliceMachine,
    bob: &mut Bob,
    circuit: &Circuit,
    slots: &[Slot],
) -> Result<Vec<bool>, ProtocolError> {
    let mut record = Vec::new();
    for slot in slots {
        alice.begin_session();
        match slot.gate.map(|i| circuit.gates()[i]) {
            Some(CircuitGate::H(q)) => assisted_hadamard(alice, q, bob)?,
            Some(CircuitGate::T(q)) => assisted_t(alice, q, bob)?,
            Some(CircuitGate::Cnot { control, target }) => {
                assisted_cnot(alice, control, target, bob)?
            }
            Some(CircuitGate::Measure(q)) => record.push(assisted_measure(alice, q, bob)?),
            None => {
                let width = if slot.kind == GateKind::Cnot { 2 } else { 1 };
                let junk = alice.acquire_dummies(width)?;
                match slot.kind {
                    GateKind::H => assisted_hadamard(alice, junk[0], bob)?,
                    GateKind::T => assisted_t(alice, junk[0], bob)?,
                    GateKind::Cnot => assisted_cnot(alice, junk[0], junk[1], bob)?,
                    GateKind::Measure => {
                        assisted_measure(alice, junk[0], bob)?;
                    }
                }
                alice.release_dummies(&junk)?;
            }
        }
    }
    Ok(record)
}

/// Runs `circuit` on `|0…0⟩` with Bob's help.
pub fn run_circuit(
    circuit: &Circuit,
    strategy: BobStrategy,
    options: &RunOptions,
) -> Result<RunOutcome, RunFailure> {
    let input =
        StateVector::prepare_zero(circuit.num_qubits().max(1)).map_err(ProtocolError::from)?;
    let circuit = if circuit.num_qubits() == 0 {
        Circuit::new(1)
    } else {
        circuit.clone()
    };
    run_circuit_on(&circuit, &input, strategy, options)
}

/// Runs `circuit` on Alice's `input` with Bob's help.
pub fn run_circuit_on(
    circuit: &Circuit,
    input: &StateVector,
    strategy: BobStrategy,
    options: &RunOptions,
) -> Result<RunOutcome, RunFailure> {
    if input.num_qubits() != circuit.num_qubits() {
        return Err(ProtocolError::from(Error::DimensionMismatch {
            expected: circuit.num_qubits(),
            found: input.num_qubits(),
        })
        .into());
    }
    let slots = plan(circuit, options).map_err(ProtocolError::from)?;
    let dummies = dummies_for(circuit, options.mode);
    let key_seed = derive_seed(options.seed, 0);
    let mut alice = AliceMachine::new(input, dummies, KeyPlan::seeded(key_seed))?;
    let mut bob = Bob::new(strategy.clone(), derive_seed(options.seed, 1));
    let measurements = match execute_slots(&mut alice, &mut bob, circuit, &slots) {
        Ok(m) => m,
        Err(error) => {
            return Err(RunFailure {
                error,
                transcript: alice.into_transcript(),
            })
        }
    };
    let final_state = alice.data_state()?;
    let exact_distribution = if options.exact {
        // Junk measurement slots consume Bob outcomes too.
        let count = slots.iter().filter(|s| s.kind == GateKind::Measure).count();
        if count > MAX_DENSE_QUBITS {
            return Err(ProtocolError::from(Error::Capacity {
                requested: count,
                max: MAX_DENSE_QUBITS,
            })
            .into());
        }
        let mut dist = vec![0.0; 1 << circuit.measurement_count()];
        for pattern in 0..1usize << count {
            let forced: Vec<bool> = (0..count).map(|i| (pattern >> i) & 1 == 1).collect();
            let mut branch = AliceMachine::new(input, dummies, KeyPlan::seeded(key_seed))?;
            let mut forced_bob = Bob::with_forced_outcomes(strategy.clone(), forced);
            match execute_slots(&mut branch, &mut forced_bob, circuit, &slots) {
                Ok(record) => {
                    let idx = record
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
                    dist[idx] += forced_bob.weight();
                }
                Err(ProtocolError::Aborted { .. }) if forced_bob.weight() == 0.0 => {}
                Err(error) => {
                    return Err(RunFailure {
                        error,
                        transcript: branch.into_transcript(),
                    })
                }
            }
        }
        Some(dist)
    } else {
        None
    };
    Ok(RunOutcome {
        final_state,
        measurements,
        exact_distribution,
        op_log: alice.op_log().to_vec(),
        transcript: alice.into_transcript(),
        slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(text: &str) -> Circuit {
        Circuit::parse(text).unwrap()
    }

    #[test]
    fn plan_fills_cycle_greedily() {
        let c = circuit("T 0\nH 0\nCNOT 0 1\n");
        let slots = plan_blind_slots(&c, None).unwrap();
        let real: Vec<Option<usize>> = slots.iter().map(|s| s.gate).collect();
        assert_eq!(real, vec![None, None, Some(0), Some(1), Some(2), None]);
        assert!(slots.len() <= 3 * c.len() + 2);
    }

    #[test]
    fn padding_rejects_too_few_cycles() {
        let c = circuit("T 0\nH 0\n");
        assert!(plan_blind_slots(&c, Some(1)).is_err());
        assert_eq!(plan_blind_slots(&c, Some(3)).unwrap().len(), 9);
    }

    #[test]
    fn empty_circuit_has_no_requests() {
        let out =
            run_circuit(&Circuit::new(0), BobStrategy::Honest, &RunOptions::plain(1)).unwrap();
        assert_eq!(out.transcript.round_count(), 0);
        let out =
            run_circuit(&Circuit::new(2), BobStrategy::Honest, &RunOptions::blind(1)).unwrap();
        assert_eq!(out.transcript.round_count(), 0);
    }

    #[test]
    fn drop_returns_partial_transcript() {
        let c = circuit("H 0\nCNOT 0 1\n");
        let err = run_circuit(&c, BobStrategy::Drop, &RunOptions::plain(3)).unwrap_err();
        assert_eq!(err.error, ProtocolError::Aborted { round: 0 });
        assert_eq!(err.transcript.messages.len(), 1);
    }
}
