use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::MAX_DENSE_QUBITS;
use crate::simulator::{StateVector, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    Cnot,
    T,
    Measure,
}

impl GateKind {
    pub fn label(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::T => "T",
            GateKind::Measure => "M",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitGate {
    H(usize),
    T(usize),
    Cnot { control: usize, target: usize },
    Measure(usize),
}

impl CircuitGate {
    pub fn kind(&self) -> GateKind {
        match self {
            CircuitGate::H(_) => GateKind::H,
            CircuitGate::T(_) => GateKind::T,
            CircuitGate::Cnot { .. } => GateKind::Cnot,
            CircuitGate::Measure(_) => GateKind::Measure,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CircuitGate::H(q) | CircuitGate::T(q) | CircuitGate::Measure(q) => vec![q],
            CircuitGate::Cnot { control, target } => vec![control, target],
        }
    }
}

impl fmt::Display for CircuitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CircuitGate::H(q) => write!(f, "H {q}"),
            CircuitGate::T(q) => write!(f, "T {q}"),
            CircuitGate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            CircuitGate::Measure(q) => write!(f, "M {q}"),
        }
    }
}

/// A gate list over qubits `0..num_qubits`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<CircuitGate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    /// Widens the register as needed to hold the gate's qubits.
    pub fn push(&mut self, gate: CircuitGate) -> Result<()> {
        let qubits = gate.qubits();
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::DuplicateTarget(qubits[0]));
        }
        let width = qubits.iter().max().map_or(0, |q| q + 1);
        if width > MAX_DENSE_QUBITS {
            return Err(Error::Capacity {
                requested: width,
                max: MAX_DENSE_QUBITS,
            });
        }
        self.num_qubits = self.num_qubits.max(width);
        self.gates.push(gate);
        Ok(())
    }

    pub fn from_gates(
        num_qubits: usize,
        gates: impl IntoIterator<Item = CircuitGate>,
    ) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn measurement_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.kind() == GateKind::Measure)
            .count()
    }

    /// Parses one gate per line: `H q`, `T q`, `CNOT c t`, `M q`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit = Self::new(0);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let op = parts.next().unwrap_or_default().to_ascii_uppercase();
            let args: Vec<&str> = parts.collect();
            let qubit = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{s}` is not a qubit index"),
                })
            };
            let expect = |count: usize| {
                if args.len() == count {
                    Ok(())
                } else {
                    Err(Error::Parse {
                        line,
                        message: format!("{op} takes {count} qubit(s), got {}", args.len()),
                    })
                }
            };
            let gate = match op.as_str() {
                "H" => {
                    expect(1)?;
                    CircuitGate::H(qubit(args[0])?)
                }
                "T" => {
                    expect(1)?;
                    CircuitGate::T(qubit(args[0])?)
                }
                "M" => {
                    expect(1)?;
                    CircuitGate::Measure(qubit(args[0])?)
                }
                "CNOT" => {
                    expect(2)?;
                    CircuitGate::Cnot {
                        control: qubit(args[0])?,
                        target: qubit(args[1])?,
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown gate `{other}`"),
                    })
                }
            };
            circuit.push(gate).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(circuit)
    }

    fn apply_unitary(state: &mut StateVector, gate: &CircuitGate) -> Result<()> {
        match *gate {
            CircuitGate::H(q) => state.apply(&UnitaryMatrix::hadamard(), &[q]),
            CircuitGate::T(q) => state.apply(&UnitaryMatrix::t(), &[q]),
            CircuitGate::Cnot { control, target } => {
                state.apply(&UnitaryMatrix::cnot(), &[control, target])
            }
            CircuitGate::Measure(_) => Ok(()),
        }
    }

    fn check_input(&self, input: &StateVector) -> Result<()> {
        if input.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                found: input.num_qubits(),
            });
        }
        Ok(())
    }

    /// Direct simulation with measurements collapsed onto `outcomes`
    /// (consumed in circuit order). Returns the final state and the Born
    /// probability of the outcome sequence; `None` if it has probability zero.
    pub fn simulate_with_outcomes(
        &self,
        input: &StateVector,
        outcomes: &[bool],
    ) -> Result<Option<(StateVector, f64)>> {
        self.check_input(input)?;
        if outcomes.len() != self.measurement_count() {
            return Err(Error::DimensionMismatch {
                expected: self.measurement_count(),
                found: outcomes.len(),
            });
        }
        let mut state = input.clone();
        let mut weight = 1.0;
        let mut next = outcomes.iter();
        for g in &self.gates {
            if let CircuitGate::Measure(q) = *g {
                let bit = *next.next().expect("length checked");
                let p1 = state.probability_one(q)?;
                let p = if bit { p1 } else { 1.0 - p1 };
                if p < 1e-15 {
                    return Ok(None);
                }
                weight *= p;
                state.collapse(q, bit)?;
            } else {
                Self::apply_unitary(&mut state, g)?;
            }
        }
        Ok(Some((state, weight)))
    }

    /// Final state of a measurement-free circuit.
    pub fn simulate(&self, input: &StateVector) -> Result<StateVector> {
        if self.measurement_count() > 0 {
            return Err(Error::Precondition(
                "circuit contains measurements; use simulate_with_outcomes".into(),
            ));
        }
        Ok(self
            .simulate_with_outcomes(input, &[])?
            .expect("no measurements")
            .0)
    }

    /// Exact distribution of the measurement record; bit `i` of the index is
    /// the `i`-th measurement in circuit order.
    pub fn measurement_distribution(&self, input: &StateVector) -> Result<Vec<f64>> {
        let count = self.measurement_count();
        if count > MAX_DENSE_QUBITS {
            return Err(Error::Capacity {
                requested: count,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut dist = vec![0.0; 1 << count];
        for (idx, slot) in dist.iter_mut().enumerate() {
            let outcomes: Vec<bool> = (0..count).map(|i| (idx >> i) & 1 == 1).collect();
            if let Some((_, w)) = self.simulate_with_outcomes(input, &outcomes)? {
                *slot = w;
            }
        }
        Ok(dist)
    }

    /// Circuit text in the format accepted by [`Circuit::parse`].
    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gates_and_comments() {
        let c = Circuit::parse("# bell\nH 0\ncnot 0 1  # entangle\n\nM 1\n").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(
            c.gates(),
            &[
                CircuitGate::H(0),
                CircuitGate::Cnot {
                    control: 0,
                    target: 1
                },
                CircuitGate::Measure(1)
            ]
        );
        assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Circuit::parse("H 0\nRZ 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                message: "unknown gate `RZ`".into()
            }
        );
        assert!(matches!(
            Circuit::parse("H\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Circuit::parse("\nCNOT 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Circuit::parse("T -1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn bell_distribution() {
        let c = Circuit::parse("H 0\nCNOT 0 1\nM 0\nM 1\n").unwrap();
        let dist = c
            .measurement_distribution(&StateVector::prepare_zero(2).unwrap())
            .unwrap();
        let expected = [0.5, 0.0, 0.0, 0.5];
        for (a, b) in dist.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
