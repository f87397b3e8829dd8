//! Classical reversible counterpart: the hierarchy over bit permutations,
//! the evidence that Pauli-only (XOR-only) assistance cannot reach
//! universality, and blinding of SAT instances by literal flips.

mod cnf;
mod reversible;

use std::fmt;

pub use cnf::{
    assignment_from_bits, blind_sat, blind_with_mask, brute_force_solve, unblind_assignment,
    CnfFormula, MAX_BRUTE_FORCE_VARS,
};
pub use reversible::{tilde_level, ReversibleGate, TildeClassifier, MAX_BITS};

use crate::error::Result;
use crate::simulator::SeededRng;

/// Level of a gate, or `None` beyond the searched range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelFact {
    pub gate: String,
    pub level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSample {
    pub bits: usize,
    pub generators: usize,
    pub compositions: usize,
    /// Compositions that left level 2.
    pub escapes: usize,
}

/// The checkable facts behind the classical no-go argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoGoReport {
    /// Every controlled-(XOR constant) gate on up to three bits.
    pub controlled: Vec<LevelFact>,
    pub universal: Vec<LevelFact>,
    pub closure: ClosureSample,
}

impl NoGoReport {
    pub fn holds(&self) -> bool {
        self.controlled
            .iter()
            .all(|f| matches!(f.level, Some(k) if k <= 2))
            && self
                .universal
                .iter()
                .all(|f| matches!(f.level, Some(k) if k > 2))
            && self.closure.escapes == 0
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for f in self.controlled.iter().chain(&self.universal) {
            out.push_str(&format!("gate={} level={}\n", f.gate, level_text(f.level)));
        }
        out.push_str(&format!(
            "closure bits={} sample={} compositions={} escapes={}\n",
            self.closure.bits,
            self.closure.generators,
            self.closure.compositions,
            self.closure.escapes
        ));
        out
    }
}

fn level_text(level: Option<usize>) -> String {
    level.map_or_else(|| "beyond".to_string(), |k| k.to_string())
}

impl fmt::Display for NoGoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "controlled XOR-constant gates ({}):",
            self.controlled.len()
        )?;
        let worst = self
            .controlled
            .iter()
            .filter_map(|g| g.level)
            .max()
            .unwrap_or(0);
        writeln!(f, "  highest level reached: {worst}")?;
        writeln!(f, "universal gates:")?;
        for g in &self.universal {
            writeln!(f, "  {:<8} level {}", g.gate, level_text(g.level))?;
        }
        writeln!(
            f,
            "closure: {} compositions of {} level-2 gates on {} bits, {} left level 2",
            self.closure.compositions,
            self.closure.generators,
            self.closure.bits,
            self.closure.escapes
        )?;
        write!(
            f,
            "{}",
            if self.holds() {
                "no-go evidence holds"
            } else {
                "no-go evidence FAILS"
            }
        )
    }
}

fn controlled_xor_gates() -> Result<Vec<(String, ReversibleGate)>> {
    let mut out = Vec::new();
    for inner_bits in 1..=2usize {
        for mask in 1..1usize << inner_bits {
            let inner = ReversibleGate::xor_const(inner_bits, mask)?;
            for control in 0..=inner_bits {
                out.push((
                    format!("C{control}-XOR{mask:0w$b}", w = inner_bits),
                    ReversibleGate::controlled(&inner, control)?,
                ));
            }
        }
    }
    Ok(out)
}

/// Gathers the evidence: controlled XOR gates stay at level 2, Toffoli and
/// Fredkin do not, and products of sampled level-2 gates never leave level 2.
pub fn demonstrate_no_go(compositions: usize, seed: u64) -> Result<NoGoReport> {
    let mut cls = TildeClassifier::new();
    let mut controlled = Vec::new();
    for (name, g) in controlled_xor_gates()? {
        controlled.push(LevelFact {
            gate: name,
            level: cls.level(&g, 4)?,
        });
    }
    let mut universal = Vec::new();
    for name in ["TOFFOLI", "FREDKIN"] {
        let g = ReversibleGate::named(name).expect("built-in gate");
        universal.push(LevelFact {
            gate: name.to_string(),
            level: cls.level(&g, 4)?,
        });
    }

    const BITS: usize = 3;
    let mut rng = SeededRng::new(seed);
    let mut sample = Vec::new();
    while sample.len() < 64 {
        let len = 1 + rng.below(8);
        let g = ReversibleGate::random_affine_word(BITS, len, &mut rng)?;
        if cls.is_in_level(&g, 2)? {
            sample.push(g);
        }
    }
    let mut escapes = 0;
    for _ in 0..compositions {
        let a = &sample[rng.below(sample.len())];
        let b = &sample[rng.below(sample.len())];
        if !cls.is_in_level(&a.compose(b)?, 2)? {
            escapes += 1;
        }
    }
    Ok(NoGoReport {
        controlled,
        universal,
        closure: ClosureSample {
            bits: BITS,
            generators: sample.len(),
            compositions,
            escapes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_go_evidence_holds() {
        let report = demonstrate_no_go(500, 1).unwrap();
        assert!(report.holds(), "{report}");
        assert!(report
            .controlled
            .iter()
            .any(|f| f.gate == "C0-XOR1" && f.level == Some(2)));
    }
}
