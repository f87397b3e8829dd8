use std::fmt;

use crate::hierarchy::GateSpec;
use crate::simulator::DensityMatrix;

/// What Alice asks Bob to do with the qubits she sends.
#[derive(Debug, Clone, PartialEq)]
pub enum RequestKind {
    H,
    Cnot,
    T,
    S,
    Measure,
    /// Any other gate, described classically to Bob.
    Gate(GateSpec),
}

impl RequestKind {
    pub fn label(&self) -> &str {
        match self {
            RequestKind::H => "H",
            RequestKind::Cnot => "CNOT",
            RequestKind::T => "T",
            RequestKind::S => "S",
            RequestKind::Measure => "MEASURE",
            RequestKind::Gate(spec) => &spec.name,
        }
    }

    /// Maps the built-in names onto their dedicated request kinds.
    pub fn for_gate(spec: &GateSpec) -> Self {
        match spec.name.as_str() {
            "H" => RequestKind::H,
            "CNOT" => RequestKind::Cnot,
            "T" => RequestKind::T,
            "S" => RequestKind::S,
            _ => RequestKind::Gate(spec.clone()),
        }
    }
}

/// A request as Bob sees it. Qubit ids are `0..k` within each round and say
/// nothing about which of Alice's wires were sent.
#[derive(Debug, Clone, PartialEq)]
pub struct GateRequest {
    pub kind: RequestKind,
    pub qubit_ids: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::AliceToBob => write!(f, "A->B"),
            Direction::BobToAlice => write!(f, "B->A"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    /// Zero-based index of the request/reply exchange this message belongs to.
    pub round: usize,
    pub direction: Direction,
    pub label: String,
    pub qubits: usize,
    pub classical_bits: Vec<bool>,
}

/// Bob's payload at one round under one key assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundView {
    pub round: usize,
    pub density: DensityMatrix,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProtocolTranscript {
    pub messages: Vec<Message>,
    pub bob_view_states: Vec<RoundView>,
}

impl ProtocolTranscript {
    pub fn round_count(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| m.direction == Direction::AliceToBob)
            .count()
    }

    /// Request labels in order, one per round.
    pub fn request_labels(&self) -> Vec<String> {
        self.messages
            .iter()
            .filter(|m| m.direction == Direction::AliceToBob)
            .map(|m| m.label.clone())
            .collect()
    }

    /// Labels, sizes and directions of every message; never key or data values.
    pub fn structure(&self) -> Vec<(usize, Direction, String, usize)> {
        self.messages
            .iter()
            .map(|m| (m.round, m.direction, m.label.clone(), m.qubits))
            .collect()
    }

    /// Line-oriented export, `round <i> request=<label> qubits=<count> dir=<A->B|B->A>`.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            out.push_str(&format!(
                "round {} request={} qubits={} dir={}\n",
                m.round, m.label, m.qubits, m.direction
            ));
        }
        out
    }
}
