//! Checks that Bob's view of a protocol carries no information about Alice's
//! data: his payload is maximally mixed at every round and the classical
//! message structure depends only on the padded circuit length.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::error::Error;
use crate::protocols::runner::{dummies_for, execute_slots, plan};
use crate::protocols::{
    assisted_measure, AliceMachine, Bob, BobStrategy, Circuit, Direction, GateProtocol, KeyPlan,
    ProtocolError, ProtocolTranscript, RunOptions,
};
use crate::simulator::{distance_trace, DensityMatrix, SeededRng, StateVector};

/// Rounds whose whole key history fits in this many bits are enumerated in full.
pub const FULL_ENUMERATION_BITS: usize = 12;
/// Largest number of key bits ever enumerated for one round.
pub const MAX_ENUMERATION_BITS: usize = 16;
/// Trace distance below which two views count as equal.
pub const SECURITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SecurityError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("round {round} does not exist; the protocol has {rounds} rounds")]
    NoSuchRound { round: usize, rounds: usize },
    #[error("round {round} carries no qubits")]
    NoPayload { round: usize },
    #[error("round {round} needs {bits} key bits enumerated, more than {MAX_ENUMERATION_BITS}")]
    TooManyKeyBits { round: usize, bits: usize },
    #[error("message structure differs between {0}")]
    StructureMismatch(String),
}

impl From<Error> for SecurityError {
    fn from(e: Error) -> Self {
        SecurityError::Protocol(e.into())
    }
}

/// Something Alice runs with Bob's help, starting from her data qubits and
/// a pool of fresh dummies.
pub trait Scenario {
    fn data_qubits(&self) -> usize;

    fn dummy_qubits(&self) -> usize;

    fn run(&self, alice: &mut AliceMachine, bob: &mut Bob) -> Result<(), ProtocolError>;
}

/// A single gate protocol on wires `0..arity`.
pub struct GateScenario<'a>(pub &'a dyn GateProtocol);

impl Scenario for GateScenario<'_> {
    fn data_qubits(&self) -> usize {
        self.0.arity()
    }

    fn dummy_qubits(&self) -> usize {
        self.0.dummies_needed()
    }

    fn run(&self, alice: &mut AliceMachine, bob: &mut Bob) -> Result<(), ProtocolError> {
        let wires: Vec<usize> = (0..self.0.arity()).collect();
        alice.begin_session();
        self.0.execute(alice, &wires, bob)
    }
}

/// The assisted measurement of a single qubit.
pub struct MeasureScenario;

impl Scenario for MeasureScenario {
    fn data_qubits(&self) -> usize {
        1
    }

    fn dummy_qubits(&self) -> usize {
        0
    }

    fn run(&self, alice: &mut AliceMachine, bob: &mut Bob) -> Result<(), ProtocolError> {
        alice.begin_session();
        assisted_measure(alice, 0, bob).map(|_| ())
    }
}

/// A whole circuit, compiled as [`crate::protocols::run_circuit`] would.
pub struct CircuitScenario<'a> {
    pub circuit: &'a Circuit,
    pub options: RunOptions,
}

impl Scenario for CircuitScenario<'_> {
    fn data_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    fn dummy_qubits(&self) -> usize {
        dummies_for(self.circuit, self.options.mode)
    }

    fn run(&self, alice: &mut AliceMachine, bob: &mut Bob) -> Result<(), ProtocolError> {
        let slots = plan(self.circuit, &self.options)?;
        execute_slots(alice, bob, self.circuit, &slots).map(|_| ())
    }
}

/// How the rounds before the analysed one are played.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewOptions {
    /// Seed for key bits that are not enumerated and for Bob's randomness.
    pub seed: u64,
    /// Bob's behaviour in earlier rounds. The view itself is captured before
    /// Bob touches the round's qubits.
    pub bob: BobStrategy,
}

impl Default for ViewOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            bob: BobStrategy::Honest,
        }
    }
}

struct Probe {
    transcript: ProtocolTranscript,
    alice: AliceMachine,
}

fn probe(
    scenario: &dyn Scenario,
    input: &StateVector,
    options: &ViewOptions,
) -> Result<Probe, SecurityError> {
    let mut alice = AliceMachine::new(
        input,
        scenario.dummy_qubits(),
        KeyPlan::seeded(options.seed),
    )?;
    let mut bob = Bob::new(options.bob.clone(), options.seed);
    match scenario.run(&mut alice, &mut bob) {
        Ok(()) | Err(ProtocolError::Aborted { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(Probe {
        transcript: alice.transcript().clone(),
        alice,
    })
}

/// Key bits whose values are averaged over for the view at `round`.
///
/// When the whole history is small it is enumerated. Otherwise the earlier
/// sessions are held at their seeded values and only the bits of the
/// round's own session that are still in play are enumerated; the view must
/// then be maximally mixed for every value of the held bits.
fn enumerated_bits(alice: &AliceMachine, round: usize) -> Result<Vec<usize>, SecurityError> {
    let history: Vec<_> = alice
        .key_store()
        .iter()
        .filter(|b| b.group <= round)
        .collect();
    let bits: Vec<usize> = if history.len() <= FULL_ENUMERATION_BITS {
        history.iter().map(|b| b.index).collect()
    } else {
        let session = alice.round_sessions()[round];
        history
            .iter()
            .filter(|b| b.session == session && (b.group == round || b.retained))
            .map(|b| b.index)
            .collect()
    };
    if bits.len() > MAX_ENUMERATION_BITS {
        return Err(SecurityError::TooManyKeyBits {
            round,
            bits: bits.len(),
        });
    }
    Ok(bits)
}

fn prefix_structure(
    t: &ProtocolTranscript,
    round: usize,
) -> Vec<(usize, Direction, String, usize)> {
    t.structure()
        .into_iter()
        .filter(|(r, d, _, _)| *r < round || (*r == round && *d == Direction::AliceToBob))
        .collect()
}

/// Bob's payload at `round`, averaged over Alice's key bits.
pub fn bob_view_density(
    scenario: &dyn Scenario,
    input: &StateVector,
    round: usize,
) -> Result<DensityMatrix, SecurityError> {
    bob_view_density_with(scenario, input, round, &ViewOptions::default())
}

pub fn bob_view_density_with(
    scenario: &dyn Scenario,
    input: &StateVector,
    round: usize,
    options: &ViewOptions,
) -> Result<DensityMatrix, SecurityError> {
    let probe = probe(scenario, input, options)?;
    view_from_probe(scenario, input, round, options, &probe)
}

fn view_from_probe(
    scenario: &dyn Scenario,
    input: &StateVector,
    round: usize,
    options: &ViewOptions,
    probe: &Probe,
) -> Result<DensityMatrix, SecurityError> {
    let rounds = probe.alice.round_sessions().len();
    if round >= rounds {
        return Err(SecurityError::NoSuchRound { round, rounds });
    }
    let expected = prefix_structure(&probe.transcript, round);
    if expected.last().map_or(0, |m| m.3) == 0 {
        return Err(SecurityError::NoPayload { round });
    }
    let bits = enumerated_bits(&probe.alice, round)?;
    let mut views = Vec::with_capacity(1 << bits.len());
    for assignment in 0..1usize << bits.len() {
        let overrides: HashMap<usize, bool> = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, (assignment >> i) & 1 == 1))
            .collect();
        let mut alice = AliceMachine::new(
            input,
            scenario.dummy_qubits(),
            KeyPlan::with_overrides(options.seed, overrides),
        )?
        .record_views(true)
        .halt_after(round);
        let mut bob = Bob::new(options.bob.clone(), options.seed);
        match scenario.run(&mut alice, &mut bob) {
            Err(ProtocolError::Halted { round: r }) if r == round => {}
            Err(e) => return Err(e.into()),
            Ok(()) => {
                return Err(SecurityError::StructureMismatch(format!(
                    "key branches: one finished before round {round}"
                )))
            }
        }
        if prefix_structure(alice.transcript(), round) != expected {
            return Err(SecurityError::StructureMismatch(format!(
                "key branches up to round {round}"
            )));
        }
        let view = alice
            .transcript()
            .bob_view_states
            .last()
            .expect("view recorded for the halted round");
        views.push(view.density.clone());
    }
    Ok(DensityMatrix::average(&views)?)
}

/// Trace distance of Bob's view to the maximally mixed state, per round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundCheck {
    pub round: usize,
    pub label: String,
    pub qubits: usize,
    pub distance: f64,
}

/// Every round's view distance from `I/2^m` for one input.
pub fn view_profile(
    scenario: &dyn Scenario,
    input: &StateVector,
    options: &ViewOptions,
) -> Result<Vec<RoundCheck>, SecurityError> {
    let probe = probe(scenario, input, options)?;
    let requests: Vec<_> = probe
        .transcript
        .messages
        .iter()
        .filter(|m| m.direction == Direction::AliceToBob)
        .cloned()
        .collect();
    requests
        .iter()
        .map(|m| {
            let view = view_from_probe(scenario, input, m.round, options, &probe)?;
            let mixed = DensityMatrix::maximally_mixed(view.num_qubits());
            Ok(RoundCheck {
                round: m.round,
                label: m.label.clone(),
                qubits: m.qubits,
                distance: distance_trace(&view, &mixed)?,
            })
        })
        .collect()
}

/// Largest trace distance between Bob's views for two inputs, over all rounds.
pub fn view_independence(
    scenario: &dyn Scenario,
    state_a: &StateVector,
    state_b: &StateVector,
) -> Result<f64, SecurityError> {
    view_independence_with(scenario, state_a, state_b, &ViewOptions::default())
}

pub fn view_independence_with(
    scenario: &dyn Scenario,
    state_a: &StateVector,
    state_b: &StateVector,
    options: &ViewOptions,
) -> Result<f64, SecurityError> {
    let pa = probe(scenario, state_a, options)?;
    let pb = probe(scenario, state_b, options)?;
    if pa.transcript.structure() != pb.transcript.structure() {
        return Err(SecurityError::StructureMismatch("the two inputs".into()));
    }
    let mut worst: f64 = 0.0;
    for round in 0..pa.alice.round_sessions().len() {
        let va = view_from_probe(scenario, state_a, round, options, &pa)?;
        let vb = view_from_probe(scenario, state_b, round, options, &pb)?;
        worst = worst.max(distance_trace(&va, &vb)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlindnessReport {
    pub labels_a: Vec<String>,
    pub labels_b: Vec<String>,
    /// Worst view distance from maximally mixed over both circuits and all rounds.
    pub max_distance: f64,
}

impl BlindnessReport {
    pub fn labels_match(&self) -> bool {
        self.labels_a == self.labels_b
    }

    pub fn is_blind(&self) -> bool {
        self.labels_match() && self.max_distance <= SECURITY_TOL
    }
}

/// Blind-compiles both circuits to `cycles` request cycles and compares
/// what Bob sees. Inputs are `|0…0⟩`.
pub fn transcript_blindness(
    circuit_a: &Circuit,
    circuit_b: &Circuit,
    cycles: usize,
) -> Result<BlindnessReport, SecurityError> {
    let options = RunOptions::blind(0).with_cycles(cycles);
    let slots_a = plan(circuit_a, &options)?;
    let slots_b = plan(circuit_b, &options)?;
    if slots_a.len() != slots_b.len() {
        return Err(Error::Precondition(format!(
            "padded lengths differ: {} vs {} requests",
            slots_a.len(),
            slots_b.len()
        ))
        .into());
    }
    let mut labels = Vec::new();
    let mut max_distance: f64 = 0.0;
    for circuit in [circuit_a, circuit_b] {
        let circuit = if circuit.num_qubits() == 0 {
            Circuit::new(1)
        } else {
            circuit.clone()
        };
        let scenario = CircuitScenario {
            circuit: &circuit,
            options: options.clone(),
        };
        let input = StateVector::prepare_zero(circuit.num_qubits())?;
        let profile = view_profile(&scenario, &input, &ViewOptions::default())?;
        labels.push(profile.iter().map(|r| r.label.clone()).collect::<Vec<_>>());
        for r in &profile {
            max_distance = max_distance.max(r.distance);
        }
    }
    let labels_b = labels.pop().unwrap_or_default();
    let labels_a = labels.pop().unwrap_or_default();
    Ok(BlindnessReport {
        labels_a,
        labels_b,
        max_distance,
    })
}

/// Per-round worst case over a set of inputs, plus pairwise independence.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityReport {
    pub name: String,
    pub inputs: usize,
    pub rounds: Vec<RoundCheck>,
    pub max_independence: f64,
}

impl SecurityReport {
    pub fn passes(&self) -> bool {
        self.rounds.iter().all(|r| r.distance <= SECURITY_TOL)
            && self.max_independence <= SECURITY_TOL
    }

    /// One line per round: `round=<i> request=<label> qubits=<m> distance=<d>`.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(&format!(
                "round={} request={} qubits={} distance={:.3e}\n",
                r.round, r.label, r.qubits, r.distance
            ));
        }
        out.push_str(&format!(
            "independence={:.3e} result={}\n",
            self.max_independence,
            if self.passes() { "pass" } else { "fail" }
        ));
        out
    }
}

impl fmt::Display for SecurityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "security check: {} over {} inputs",
            self.name, self.inputs
        )?;
        for r in &self.rounds {
            writeln!(
                f,
                "  round {:>2}  {:<8} {} qubit(s)  distance to maximally mixed {:.3e}",
                r.round, r.label, r.qubits, r.distance
            )?;
        }
        writeln!(
            f,
            "  worst view distance between inputs {:.3e}",
            self.max_independence
        )?;
        write!(f, "  {}", if self.passes() { "PASS" } else { "FAIL" })
    }
}

/// Pseudorandom pure states on `n` qubits, starting with the basis states
/// `|0…0⟩` and `|1…1⟩`.
pub fn test_inputs(n: usize, count: usize, seed: u64) -> Result<Vec<StateVector>, Error> {
    let mut rng = SeededRng::new(seed);
    let mut out = vec![
        StateVector::prepare_zero(n)?,
        StateVector::basis(n, (1 << n) - 1)?,
    ];
    while out.len() < count {
        out.push(StateVector::random(n, &mut rng)?);
    }
    out.truncate(count);
    Ok(out)
}

/// Runs the view checks for every input and the independence check over all pairs.
pub fn security_report(
    name: &str,
    scenario: &dyn Scenario,
    inputs: &[StateVector],
) -> Result<SecurityReport, SecurityError> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument("no inputs".into()).into());
    }
    let mut rounds: Vec<RoundCheck> = Vec::new();
    let mut views: Vec<Vec<DensityMatrix>> = Vec::new();
    for input in inputs {
        let probe = probe(scenario, input, &ViewOptions::default())?;
        let requests: Vec<_> = probe
            .transcript
            .messages
            .iter()
            .filter(|m| m.direction == Direction::AliceToBob)
            .cloned()
            .collect();
        let mut these = Vec::new();
        for m in &requests {
            let view = view_from_probe(scenario, input, m.round, &ViewOptions::default(), &probe)?;
            let distance =
                distance_trace(&view, &DensityMatrix::maximally_mixed(view.num_qubits()))?;
            match rounds.iter_mut().find(|r| r.round == m.round) {
                Some(r) => r.distance = r.distance.max(distance),
                None => rounds.push(RoundCheck {
                    round: m.round,
                    label: m.label.clone(),
                    qubits: m.qubits,
                    distance,
                }),
            }
            these.push(view);
        }
        if views.first().is_some_and(|prev| prev.len() != these.len()) {
            return Err(SecurityError::StructureMismatch("inputs".into()));
        }
        views.push(these);
    }
    let mut max_independence: f64 = 0.0;
    for (i, a) in views.iter().enumerate() {
        for b in &views[i + 1..] {
            for (va, vb) in a.iter().zip(b) {
                max_independence = max_independence.max(distance_trace(va, vb)?);
            }
        }
    }
    Ok(SecurityReport {
        name: name.to_string(),
        inputs: inputs.len(),
        rounds,
        max_independence,
    })
}
