use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::protocols::transcript::{GateRequest, RequestKind};
use crate::simulator::{SeededRng, StateVector, UnitaryMatrix};

/// How Bob treats the requests he receives.
#[derive(Debug, Clone, PartialEq)]
pub enum BobStrategy {
    Honest,
    /// Applies the substitute to every gate request of matching size.
    WrongGate(UnitaryMatrix),
    /// Applies a fresh Haar-random unitary each round instead of the gate.
    Scramble,
    /// Honest on gates, flips every reported measurement outcome.
    LieOnMeasurement,
    /// Never returns Alice's qubits.
    Drop,
}

impl BobStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            BobStrategy::Honest => "honest",
            BobStrategy::WrongGate(_) => "wrong-gate",
            BobStrategy::Scramble => "scramble",
            BobStrategy::LieOnMeasurement => "lie",
            BobStrategy::Drop => "drop",
        }
    }
}

/// Bob's access to the qubits Alice sent this round, and nothing else.
pub struct QubitLease<'a> {
    state: &'a mut StateVector,
    wires: &'a [usize],
}

impl<'a> QubitLease<'a> {
    pub(crate) fn new(state: &'a mut StateVector, wires: &'a [usize]) -> Self {
        Self { state, wires }
    }

    pub fn len(&self) -> usize {
        self.wires.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wires.is_empty()
    }

    /// Applies `gate` to the leased qubits `local` (indices into this lease).
    pub fn apply(&mut self, gate: &UnitaryMatrix, local: &[usize]) -> Result<()> {
        let targets: Vec<usize> = local.iter().map(|&i| self.wires[i]).collect();
        self.state.apply(gate, &targets)
    }

    pub fn apply_all(&mut self, gate: &UnitaryMatrix) -> Result<()> {
        self.state.apply(gate, self.wires)
    }

    pub fn measure(&mut self, local: usize, rng: &mut SeededRng) -> Result<bool> {
        self.state.measure(self.wires[local], rng)
    }

    fn probability_one(&self, local: usize) -> Result<f64> {
        self.state.probability_one(self.wires[local])
    }

    fn collapse(&mut self, local: usize, outcome: bool) -> Result<()> {
        self.state.collapse(self.wires[local], outcome)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BobReply {
    pub bits: Vec<bool>,
}

/// Outcome of a request Bob declines to complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dropped;

/// Outcomes below this probability end a forced-outcome branch.
const NEGLIGIBLE: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct Bob {
    strategy: BobStrategy,
    rng: SeededRng,
    forced: Option<VecDeque<bool>>,
    weight: f64,
}

impl Bob {
    pub fn new(strategy: BobStrategy, seed: u64) -> Self {
        Self {
            strategy,
            rng: SeededRng::new(seed),
            forced: None,
            weight: 1.0,
        }
    }

    /// A Bob whose raw measurement results are taken from `outcomes` in order
    /// instead of being sampled. [`Bob::weight`] accumulates the Born
    /// probability of the scripted branch; a branch of probability zero is
    /// reported as a drop.
    pub fn with_forced_outcomes(strategy: BobStrategy, outcomes: Vec<bool>) -> Self {
        Self {
            forced: Some(outcomes.into()),
            ..Self::new(strategy, 0)
        }
    }

    /// Probability of the forced outcomes consumed so far (1 when sampling).
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn honest(seed: u64) -> Self {
        Self::new(BobStrategy::Honest, seed)
    }

    pub fn strategy(&self) -> &BobStrategy {
        &self.strategy
    }

    fn honest_gate(kind: &RequestKind) -> Option<UnitaryMatrix> {
        match kind {
            RequestKind::H => Some(UnitaryMatrix::hadamard()),
            RequestKind::Cnot => Some(UnitaryMatrix::cnot()),
            RequestKind::T => Some(UnitaryMatrix::t()),
            RequestKind::S => Some(UnitaryMatrix::s()),
            RequestKind::Gate(spec) => Some(spec.unitary.clone()),
            RequestKind::Measure => None,
        }
    }

    fn measure_all(&mut self, lease: &mut QubitLease<'_>) -> Result<Option<Vec<bool>>> {
        let mut bits = Vec::with_capacity(lease.len());
        for i in 0..lease.len() {
            let bit = match self.forced.as_mut() {
                None => lease.measure(i, &mut self.rng)?,
                Some(queue) => {
                    let bit = queue.pop_front().ok_or_else(|| {
                        Error::Precondition("forced outcome script exhausted".into())
                    })?;
                    let p1 = lease.probability_one(i)?;
                    let p = if bit { p1 } else { 1.0 - p1 };
                    if p < NEGLIGIBLE {
                        self.weight = 0.0;
                        return Ok(None);
                    }
                    self.weight *= p;
                    lease.collapse(i, bit)?;
                    bit
                }
            };
            bits.push(bit);
        }
        Ok(Some(bits))
    }

    pub fn serve(
        &mut self,
        request: &GateRequest,
        lease: &mut QubitLease<'_>,
    ) -> Result<std::result::Result<BobReply, Dropped>> {
        let dim = 1usize << lease.len();
        let honest = Self::honest_gate(&request.kind);
        let bits = match (&self.strategy, honest) {
            (BobStrategy::Drop, _) => return Ok(Err(Dropped)),
            (BobStrategy::Scramble, gate) => {
                let u = UnitaryMatrix::haar_random(dim, &mut self.rng);
                lease.apply_all(&u)?;
                if gate.is_none() {
                    match self.measure_all(lease)? {
                        Some(bits) => bits,
                        None => return Ok(Err(Dropped)),
                    }
                } else {
                    Vec::new()
                }
            }
            (BobStrategy::WrongGate(v), Some(_)) if v.dim() == dim => {
                lease.apply_all(v)?;
                Vec::new()
            }
            (BobStrategy::LieOnMeasurement, None) => match self.measure_all(lease)? {
                Some(bits) => bits.into_iter().map(|b| !b).collect(),
                None => return Ok(Err(Dropped)),
            },
            (_, Some(gate)) => {
                lease.apply_all(&gate)?;
                Vec::new()
            }
            (_, None) => match self.measure_all(lease)? {
                Some(bits) => bits,
                None => return Ok(Err(Dropped)),
            },
        };
        Ok(Ok(BobReply { bits }))
    }
}
