use std::collections::HashMap;

use crate::error::Error;
use crate::pauli::{PauliKind, PauliOperator};
use crate::protocols::bob::{Bob, QubitLease};
use crate::protocols::transcript::{
    Direction, GateRequest, Message, ProtocolTranscript, RequestKind, RoundView,
};
use crate::protocols::ProtocolError;
use crate::simulator::{SeededRng, StateVector, UnitaryMatrix};

/// Tolerance used when releasing dummy qubits back to `|0⟩`.
const RELEASE_TOL: f64 = 1e-8;

/// Everything Alice is able to do. There is deliberately no measurement
/// and no non-Pauli gate here.
#[derive(Debug, Clone, PartialEq)]
pub enum AliceOp {
    PrepareZero {
        qubit: usize,
    },
    Pauli {
        qubit: usize,
        kind: PauliKind,
    },
    ControlledPauli {
        qubit: usize,
        kind: PauliKind,
        applied: bool,
    },
    Swap {
        a: usize,
        b: usize,
    },
    ControlledSwap {
        a: usize,
        b: usize,
        applied: bool,
    },
    CoinFlip {
        index: usize,
    },
    Send {
        qubits: Vec<usize>,
        label: String,
    },
    Receive {
        qubits: Vec<usize>,
        bits: Vec<bool>,
    },
    Classical {
        note: String,
    },
}

/// An operation someone asks Alice to perform directly.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    PrepareZero(usize),
    Pauli(usize, PauliKind),
    Swap(usize, usize),
    Measure(usize),
    Unitary { name: String, qubits: Vec<usize> },
}

/// One consumed random bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyBit {
    pub index: usize,
    pub value: bool,
    /// The round this bit was drawn for (number of exchanges completed before it).
    pub group: usize,
    pub session: usize,
    /// Still used after its own round ends.
    pub retained: bool,
}

/// Where Alice's coin flips come from: a seeded stream, with optional
/// overrides by global flip index for exhaustive key enumeration.
#[derive(Debug, Clone)]
pub struct KeyPlan {
    rng: SeededRng,
    overrides: HashMap<usize, bool>,
}

impl KeyPlan {
    pub fn seeded(seed: u64) -> Self {
        Self {
            rng: SeededRng::new(seed),
            overrides: HashMap::new(),
        }
    }

    pub fn with_overrides(seed: u64, overrides: HashMap<usize, bool>) -> Self {
        Self {
            rng: SeededRng::new(seed),
            overrides,
        }
    }

    /// Forces the first `bits.len()` flips.
    pub fn scripted(bits: &[bool]) -> Self {
        Self::with_overrides(0, bits.iter().copied().enumerate().collect())
    }

    fn next(&mut self, index: usize) -> bool {
        // Always draw so overrides never shift the stream for later flips.
        let drawn = self.rng.coin();
        self.overrides.get(&index).copied().unwrap_or(drawn)
    }
}

/// Handle to a coin Alice has flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coin {
    pub index: usize,
    pub value: bool,
}

/// Alice under the restricted resource model: her register holds data
/// wires `0..data_qubits` followed by a pool of dummy wires.
#[derive(Debug, Clone)]
pub struct AliceMachine {
    register: StateVector,
    data_qubits: usize,
    free_dummies: Vec<usize>,
    keys: KeyPlan,
    key_store: Vec<KeyBit>,
    op_log: Vec<AliceOp>,
    transcript: ProtocolTranscript,
    record_views: bool,
    halt_after: Option<usize>,
    session: usize,
    round_sessions: Vec<usize>,
}

impl AliceMachine {
    /// Alice holding `input` on her data wires plus `dummies` fresh `|0⟩` qubits.
    pub fn new(input: &StateVector, dummies: usize, keys: KeyPlan) -> Result<Self, ProtocolError> {
        let data_qubits = input.num_qubits();
        let register = if dummies == 0 {
            input.clone()
        } else {
            input.tensor(&StateVector::prepare_zero(dummies)?)?
        };
        let free_dummies: Vec<usize> = (data_qubits..data_qubits + dummies).rev().collect();
        let op_log = (data_qubits..data_qubits + dummies)
            .map(|qubit| AliceOp::PrepareZero { qubit })
            .collect();
        Ok(Self {
            register,
            data_qubits,
            free_dummies,
            keys,
            key_store: Vec::new(),
            op_log,
            transcript: ProtocolTranscript::default(),
            record_views: false,
            halt_after: None,
            session: 0,
            round_sessions: Vec::new(),
        })
    }

    /// `|0…0⟩` on `data_qubits` wires.
    pub fn fresh(data_qubits: usize, dummies: usize, keys: KeyPlan) -> Result<Self, ProtocolError> {
        Self::new(&StateVector::prepare_zero(data_qubits)?, dummies, keys)
    }

    /// Capture Bob's reduced payload state at every round.
    pub fn record_views(mut self, on: bool) -> Self {
        self.record_views = on;
        self
    }

    /// Stop with [`ProtocolError::Halted`] right after sending round `round`.
    pub fn halt_after(mut self, round: usize) -> Self {
        self.halt_after = Some(round);
        self
    }

    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    pub fn register(&self) -> &StateVector {
        &self.register
    }

    pub fn key_store(&self) -> &[KeyBit] {
        &self.key_store
    }

    pub fn op_log(&self) -> &[AliceOp] {
        &self.op_log
    }

    pub fn transcript(&self) -> &ProtocolTranscript {
        &self.transcript
    }

    pub fn into_transcript(self) -> ProtocolTranscript {
        self.transcript
    }

    pub fn session(&self) -> usize {
        self.session
    }

    /// Session of every round sent so far.
    pub fn round_sessions(&self) -> &[usize] {
        &self.round_sessions
    }

    /// Marks the start of a new top-level gate or measurement invocation.
    pub fn begin_session(&mut self) {
        self.session += 1;
    }

    /// Data wires as a state, after checking the dummies are unentangled.
    pub fn data_state(&self) -> Result<StateVector, ProtocolError> {
        let dummies: Vec<usize> = (self.data_qubits..self.register.num_qubits()).collect();
        if dummies.is_empty() {
            return Ok(self.register.clone());
        }
        let (_, data) = self.register.split_product(&dummies, RELEASE_TOL)?;
        Ok(data)
    }

    fn check_wire(&self, qubit: usize) -> Result<(), ProtocolError> {
        let n = self.register.num_qubits();
        if qubit >= n {
            return Err(Error::QubitOutOfRange { qubit, n }.into());
        }
        Ok(())
    }

    pub fn flip(&mut self) -> Coin {
        let index = self.key_store.len();
        let value = self.keys.next(index);
        self.key_store.push(KeyBit {
            index,
            value,
            group: self.transcript.round_count(),
            session: self.session,
            retained: false,
        });
        self.op_log.push(AliceOp::CoinFlip { index });
        Coin { index, value }
    }

    pub fn flips(&mut self, count: usize) -> Vec<Coin> {
        (0..count).map(|_| self.flip()).collect()
    }

    /// Declares that `coins` keep steering the protocol after their round.
    pub fn retain(&mut self, coins: &[Coin]) {
        for c in coins {
            self.key_store[c.index].retained = true;
        }
    }

    fn pauli_matrix(kind: PauliKind) -> Option<UnitaryMatrix> {
        match kind {
            PauliKind::I => None,
            PauliKind::X => Some(UnitaryMatrix::pauli_x()),
            PauliKind::Z => Some(UnitaryMatrix::pauli_z()),
            PauliKind::XZ => UnitaryMatrix::pauli_x().mul(&UnitaryMatrix::pauli_z()).ok(),
        }
    }

    pub fn pauli(&mut self, qubit: usize, kind: PauliKind) -> Result<(), ProtocolError> {
        self.check_wire(qubit)?;
        if let Some(m) = Self::pauli_matrix(kind) {
            self.register.apply(&m, &[qubit])?;
        }
        self.op_log.push(AliceOp::Pauli { qubit, kind });
        Ok(())
    }

    /// Pauli gate conditioned on a classical bit Alice holds.
    pub fn controlled_pauli(
        &mut self,
        qubit: usize,
        kind: PauliKind,
        condition: bool,
    ) -> Result<(), ProtocolError> {
        self.check_wire(qubit)?;
        if condition {
            if let Some(m) = Self::pauli_matrix(kind) {
                self.register.apply(&m, &[qubit])?;
            }
        }
        self.op_log.push(AliceOp::ControlledPauli {
            qubit,
            kind,
            applied: condition,
        });
        Ok(())
    }

    /// Applies `p` (local qubit `q` on `wires[q]`), one Pauli factor per wire.
    pub fn apply_pauli_on(
        &mut self,
        wires: &[usize],
        p: &PauliOperator,
    ) -> Result<(), ProtocolError> {
        if p.num_qubits() != wires.len() {
            return Err(Error::DimensionMismatch {
                expected: wires.len(),
                found: p.num_qubits(),
            }
            .into());
        }
        for (q, &w) in wires.iter().enumerate() {
            let kind = p.kind_at(q);
            if kind != PauliKind::I {
                self.pauli(w, kind)?;
            }
        }
        Ok(())
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<(), ProtocolError> {
        self.check_wire(a)?;
        self.check_wire(b)?;
        self.register.swap_qubits(a, b)?;
        self.op_log.push(AliceOp::Swap { a, b });
        Ok(())
    }

    pub fn controlled_swap(
        &mut self,
        a: usize,
        b: usize,
        condition: bool,
    ) -> Result<(), ProtocolError> {
        self.check_wire(a)?;
        self.check_wire(b)?;
        if condition {
            self.register.swap_qubits(a, b)?;
        }
        self.op_log.push(AliceOp::ControlledSwap {
            a,
            b,
            applied: condition,
        });
        Ok(())
    }

    pub fn classical(&mut self, note: impl Into<String>) {
        self.op_log.push(AliceOp::Classical { note: note.into() });
    }

    /// Direct requests; only the permitted primitives succeed.
    pub fn perform(&mut self, primitive: Primitive) -> Result<(), ProtocolError> {
        match primitive {
            Primitive::Pauli(q, kind) => self.pauli(q, kind),
            Primitive::Swap(a, b) => self.swap(a, b),
            Primitive::PrepareZero(q) => {
                if !self.free_dummies.contains(&q) {
                    return Err(ProtocolError::Forbidden(format!(
                        "prepare-zero on wire {q}, which is not a free dummy"
                    )));
                }
                self.register.reset_block(&[q], RELEASE_TOL)?;
                self.op_log.push(AliceOp::PrepareZero { qubit: q });
                Ok(())
            }
            Primitive::Measure(q) => {
                Err(ProtocolError::Forbidden(format!("measurement of wire {q}")))
            }
            Primitive::Unitary { name, .. } => {
                Err(ProtocolError::Forbidden(format!("non-Pauli gate {name}")))
            }
        }
    }

    pub fn acquire_dummies(&mut self, count: usize) -> Result<Vec<usize>, ProtocolError> {
        if self.free_dummies.len() < count {
            return Err(ProtocolError::DummyBudget {
                needed: count,
                available: self.free_dummies.len(),
            });
        }
        let at = self.free_dummies.len() - count;
        Ok(self.free_dummies.split_off(at).into_iter().rev().collect())
    }

    /// Discards the dummies and prepares them afresh in `|0⟩`.
    pub fn release_dummies(&mut self, wires: &[usize]) -> Result<(), ProtocolError> {
        self.register.reset_block(wires, RELEASE_TOL)?;
        for &q in wires.iter().rev() {
            self.op_log.push(AliceOp::PrepareZero { qubit: q });
            self.free_dummies.push(q);
        }
        Ok(())
    }

    /// Sends `wires` to Bob with a request and takes them back with his reply.
    pub fn exchange(
        &mut self,
        bob: &mut Bob,
        kind: RequestKind,
        wires: &[usize],
    ) -> Result<Vec<bool>, ProtocolError> {
        for &w in wires {
            self.check_wire(w)?;
        }
        let round = self.transcript.round_count();
        self.round_sessions.push(self.session);
        let label = kind.label().to_string();
        self.op_log.push(AliceOp::Send {
            qubits: wires.to_vec(),
            label: label.clone(),
        });
        self.transcript.messages.push(Message {
            round,
            direction: Direction::AliceToBob,
            label: label.clone(),
            qubits: wires.len(),
            classical_bits: Vec::new(),
        });
        if self.record_views {
            let density = self.register.reduced_density(wires)?;
            self.transcript
                .bob_view_states
                .push(RoundView { round, density });
        }
        if self.halt_after == Some(round) {
            return Err(ProtocolError::Halted { round });
        }
        let request = GateRequest {
            kind,
            qubit_ids: (0..wires.len()).collect(),
        };
        let mut lease = QubitLease::new(&mut self.register, wires);
        let reply = match bob.serve(&request, &mut lease)? {
            Ok(reply) => reply,
            Err(_) => return Err(ProtocolError::Aborted { round }),
        };
        self.transcript.messages.push(Message {
            round,
            direction: Direction::BobToAlice,
            label,
            qubits: wires.len(),
            classical_bits: reply.bits.clone(),
        });
        self.op_log.push(AliceOp::Receive {
            qubits: wires.to_vec(),
            bits: reply.bits.clone(),
        });
        Ok(reply.bits)
    }
}

/// True iff every logged operation is one Alice is permitted to perform.
pub fn op_log_is_permitted(log: &[AliceOp]) -> bool {
    log.iter().all(|op| match op {
        AliceOp::PrepareZero { .. }
        | AliceOp::Pauli { .. }
        | AliceOp::ControlledPauli { .. }
        | AliceOp::Swap { .. }
        | AliceOp::ControlledSwap { .. }
        | AliceOp::CoinFlip { .. }
        | AliceOp::Send { .. }
        | AliceOp::Receive { .. }
        | AliceOp::Classical { .. } => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forbidden_primitives_are_rejected() {
        let mut alice = AliceMachine::fresh(1, 1, KeyPlan::seeded(0)).unwrap();
        assert!(matches!(
            alice.perform(Primitive::Measure(0)),
            Err(ProtocolError::Forbidden(_))
        ));
        assert!(matches!(
            alice.perform(Primitive::Unitary {
                name: "H".into(),
                qubits: vec![0]
            }),
            Err(ProtocolError::Forbidden(_))
        ));
        assert!(matches!(
            alice.perform(Primitive::PrepareZero(0)),
            Err(ProtocolError::Forbidden(_))
        ));
        alice.perform(Primitive::Pauli(0, PauliKind::X)).unwrap();
        alice.perform(Primitive::Swap(0, 1)).unwrap();
        alice.perform(Primitive::PrepareZero(0)).unwrap_err();
        assert!(op_log_is_permitted(alice.op_log()));
    }

    #[test]
    fn scripted_keys_override_stream() {
        let mut alice = AliceMachine::fresh(1, 0, KeyPlan::scripted(&[true, false, true])).unwrap();
        let coins: Vec<bool> = alice.flips(3).iter().map(|c| c.value).collect();
        assert_eq!(coins, vec![true, false, true]);
    }

    #[test]
    fn dummy_budget_enforced() {
        let mut alice = AliceMachine::fresh(1, 1, KeyPlan::seeded(0)).unwrap();
        let d = alice.acquire_dummies(1).unwrap();
        assert_eq!(d, vec![1]);
        assert!(matches!(
            alice.acquire_dummies(1),
            Err(ProtocolError::DummyBudget {
                needed: 1,
                available: 0
            })
        ));
        alice.release_dummies(&d).unwrap();
        assert_eq!(alice.acquire_dummies(1).unwrap(), vec![1]);
    }

    #[test]
    fn dummies_are_handed_out_in_ascending_order() {
        let mut alice = AliceMachine::fresh(1, 3, KeyPlan::seeded(0)).unwrap();
        assert_eq!(alice.acquire_dummies(2).unwrap(), vec![1, 2]);
        assert_eq!(alice.acquire_dummies(1).unwrap(), vec![3]);
    }
}
