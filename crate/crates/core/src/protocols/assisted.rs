use crate::pauli::PauliKind;
use crate::protocols::{check_wires, AliceMachine, Bob, GateProtocol, ProtocolError, RequestKind};
use crate::simulator::UnitaryMatrix;

/// One-time pads `wire` as `Z^k X^j` with two fresh coins and returns them.
pub(crate) fn encode(alice: &mut AliceMachine, wire: usize) -> Result<(bool, bool), ProtocolError> {
    let j = alice.flip().value;
    let k = alice.flip().value;
    alice.controlled_pauli(wire, PauliKind::X, j)?;
    alice.controlled_pauli(wire, PauliKind::Z, k)?;
    Ok((j, k))
}

/// Computational-basis measurement with Bob measuring a padded qubit.
///
/// The wire is left holding `|b⟩` for the returned bit `b`.
pub fn assisted_measure(
    alice: &mut AliceMachine,
    wire: usize,
    bob: &mut Bob,
) -> Result<bool, ProtocolError> {
    let (j, _) = encode(alice, wire)?;
    let bits = alice.exchange(bob, RequestKind::Measure, &[wire])?;
    let m = bits.first().copied().unwrap_or(false);
    let b = m ^ j;
    alice.classical(format!("flip reported bit when j=1 -> {}", u8::from(b)));
    // The wire collapsed to |m⟩ under Z^k X^j, i.e. to |m ⊕ j⟩ after undoing X^j.
    alice.controlled_pauli(wire, PauliKind::X, j)?;
    Ok(b)
}

pub fn assisted_hadamard(
    alice: &mut AliceMachine,
    wire: usize,
    bob: &mut Bob,
) -> Result<(), ProtocolError> {
    let (j, k) = encode(alice, wire)?;
    alice.exchange(bob, RequestKind::H, &[wire])?;
    // H Z^k X^j = Z^j X^k H
    alice.controlled_pauli(wire, PauliKind::X, k)?;
    alice.controlled_pauli(wire, PauliKind::Z, j)?;
    Ok(())
}

/// CNOT with `control` and `target` padded independently.
pub fn assisted_cnot(
    alice: &mut AliceMachine,
    control: usize,
    target: usize,
    bob: &mut Bob,
) -> Result<(), ProtocolError> {
    cnot_with_corrections(alice, control, target, bob, true)
}

pub(crate) fn cnot_with_corrections(
    alice: &mut AliceMachine,
    control: usize,
    target: usize,
    bob: &mut Bob,
    fix_control_phase: bool,
) -> Result<(), ProtocolError> {
    check_wires(&[control, target], 2)?;
    let (j, k) = encode(alice, control)?;
    let (l, m) = encode(alice, target)?;
    alice.exchange(bob, RequestKind::Cnot, &[control, target])?;
    // X on the control spreads to the target, Z on the target spreads to the control.
    alice.controlled_pauli(target, PauliKind::X, j)?;
    alice.controlled_pauli(target, PauliKind::Z, m)?;
    alice.controlled_pauli(target, PauliKind::X, l)?;
    alice.controlled_pauli(control, PauliKind::Z, k)?;
    alice.controlled_pauli(control, PauliKind::X, j)?;
    if fix_control_phase {
        alice.controlled_pauli(control, PauliKind::Z, m)?;
    }
    Ok(())
}

/// π/8 gate in two rounds: Bob applies T, and then S to either the real
/// qubit (when the first X-key was set) or a dummy.
pub fn assisted_t(
    alice: &mut AliceMachine,
    wire: usize,
    bob: &mut Bob,
) -> Result<(), ProtocolError> {
    t_with_round_two_keys(alice, wire, bob, false)
}

pub(crate) fn t_with_round_two_keys(
    alice: &mut AliceMachine,
    wire: usize,
    bob: &mut Bob,
    reuse_round_one_keys: bool,
) -> Result<(), ProtocolError> {
    let j_coin = alice.flip();
    let k_coin = alice.flip();
    let (j, k) = (j_coin.value, k_coin.value);
    alice.controlled_pauli(wire, PauliKind::X, j)?;
    alice.controlled_pauli(wire, PauliKind::Z, k)?;
    alice.exchange(bob, RequestKind::T, &[wire])?;
    alice.retain(&[j_coin, k_coin]);
    // T Z^k X^j = Z^k X^j T^(±1); what remains on the wire is T (j=0) or T† (j=1).
    alice.controlled_pauli(wire, PauliKind::Z, k)?;
    alice.controlled_pauli(wire, PauliKind::X, j)?;

    let dummy = alice.acquire_dummies(1)?[0];
    alice.controlled_swap(wire, dummy, j)?;
    let (l, m) = if reuse_round_one_keys {
        alice.controlled_pauli(dummy, PauliKind::X, j)?;
        alice.controlled_pauli(dummy, PauliKind::Z, k)?;
        (j, k)
    } else {
        encode(alice, dummy)?
    };
    alice.exchange(bob, RequestKind::S, &[dummy])?;
    // S Z^m X^l = Z^m X^l Z^l S up to phase
    alice.controlled_pauli(dummy, PauliKind::X, l)?;
    alice.controlled_pauli(dummy, PauliKind::Z, l ^ m)?;
    alice.controlled_swap(wire, dummy, j)?;
    alice.release_dummies(&[dummy])?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct AssistedHadamard {
    ideal: UnitaryMatrix,
}

impl AssistedHadamard {
    pub fn new() -> Self {
        Self {
            ideal: UnitaryMatrix::hadamard(),
        }
    }
}

impl Default for AssistedHadamard {
    fn default() -> Self {
        Self::new()
    }
}

impl GateProtocol for AssistedHadamard {
    fn name(&self) -> &str {
        "H"
    }

    fn arity(&self) -> usize {
        1
    }

    fn ideal(&self) -> &UnitaryMatrix {
        &self.ideal
    }

    fn execute(
        &self,
        alice: &mut AliceMachine,
        wires: &[usize],
        bob: &mut Bob,
    ) -> Result<(), ProtocolError> {
        check_wires(wires, 1)?;
        assisted_hadamard(alice, wires[0], bob)
    }
}

#[derive(Debug, Clone)]
pub struct AssistedCnot {
    ideal: UnitaryMatrix,
}

impl AssistedCnot {
    pub fn new() -> Self {
        Self {
            ideal: UnitaryMatrix::cnot(),
        }
    }
}

impl Default for AssistedCnot {
    fn default() -> Self {
        Self::new()
    }
}

impl GateProtocol for AssistedCnot {
    fn name(&self) -> &str {
        "CNOT"
    }

    fn arity(&self) -> usize {
        2
    }

    fn ideal(&self) -> &UnitaryMatrix {
        &self.ideal
    }

    fn execute(
        &self,
        alice: &mut AliceMachine,
        wires: &[usize],
        bob: &mut Bob,
    ) -> Result<(), ProtocolError> {
        check_wires(wires, 2)?;
        assisted_cnot(alice, wires[0], wires[1], bob)
    }
}

#[derive(Debug, Clone)]
pub struct AssistedT {
    ideal: UnitaryMatrix,
}

impl AssistedT {
    pub fn new() -> Self {
        Self {
            ideal: UnitaryMatrix::t(),
        }
    }
}

impl Default for AssistedT {
    fn default() -> Self {
        Self::new()
    }
}

impl GateProtocol for AssistedT {
    fn name(&self) -> &str {
        "T"
    }

    fn arity(&self) -> usize {
        1
    }

    fn ideal(&self) -> &UnitaryMatrix {
        &self.ideal
    }

    fn dummies_needed(&self) -> usize {
        1
    }

    fn execute(
        &self,
        alice: &mut AliceMachine,
        wires: &[usize],
        bob: &mut Bob,
    ) -> Result<(), ProtocolError> {
        check_wires(wires, 1)?;
        assisted_t(alice, wires[0], bob)
    }
}
