//! Deliberately broken protocols. They exist so the correctness and security
//! checks have something that must fail.

use crate::protocols::assisted::{cnot_with_corrections, t_with_round_two_keys};
use crate::protocols::{check_wires, AliceMachine, Bob, GateProtocol, ProtocolError};
use crate::simulator::UnitaryMatrix;

/// The two-round T protocol with the round-1 keys reused to pad round 2.
/// Still computes T, but Bob's round-2 view depends on the input.
#[derive(Debug, Clone)]
pub struct KeyReuseT {
    ideal: UnitaryMatrix,
}

impl KeyReuseT {
    pub fn new() -> Self {
        Self {
            ideal: UnitaryMatrix::t(),
        }
    }
}

impl Default for KeyReuseT {
    fn default() -> Self {
        Self::new()
    }
}

impl GateProtocol for KeyReuseT {
    fn name(&self) -> &str {
        "T (reused keys)"
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
        t_with_round_two_keys(alice, wires[0], bob, true)
    }
}

/// The CNOT protocol without the `Z^m` correction on the control, leaving a
/// controlled-(−1) residue whenever `m = 1`.
#[derive(Debug, Clone)]
pub struct CnotWithoutControlFix {
    ideal: UnitaryMatrix,
}

impl CnotWithoutControlFix {
    pub fn new() -> Self {
        Self {
            ideal: UnitaryMatrix::cnot(),
        }
    }
}

impl Default for CnotWithoutControlFix {
    fn default() -> Self {
        Self::new()
    }
}

impl GateProtocol for CnotWithoutControlFix {
    fn name(&self) -> &str {
        "CNOT (missing control fix)"
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
        cnot_with_corrections(alice, wires[0], wires[1], bob, false)
    }
}
