use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::simulator::SeededRng;

/// Largest variable count the brute-force solver accepts.
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

/// A CNF formula; literal `v` is variable `v` (1-based), `-v` its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for clause in &clauses {
            for &lit in clause {
                let v = lit.unsigned_abs() as usize;
                if lit == 0 || v > num_vars {
                    return Err(Error::InvalidArgument(format!(
                        "literal {lit} out of range for {num_vars} variables"
                    )));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool> {
        if assignment.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: assignment.len(),
            });
        }
        Ok(self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        }))
    }

    /// Parses DIMACS: `c` comment lines, a `p cnf <vars> <clauses>` header,
    /// then signed literals with each clause terminated by `0`.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('c') || content.starts_with('%') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line, message };
            if content.starts_with('p') {
                let parts: Vec<&str> = content.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(parse_err("expected `p cnf <vars> <clauses>`".into()));
                }
                let vars = parts[2]
                    .parse()
                    .map_err(|_| parse_err(format!("bad variable count `{}`", parts[2])))?;
                let count = parts[3]
                    .parse()
                    .map_err(|_| parse_err(format!("bad clause count `{}`", parts[3])))?;
                header = Some((vars, count));
                continue;
            }
            let (vars, _) =
                header.ok_or_else(|| parse_err("clause before `p cnf` header".into()))?;
            for tok in content.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| parse_err(format!("`{tok}` is not a literal")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(parse_err(format!("literal {lit} exceeds {vars} variables")));
                } else {
                    current.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `p cnf` header".into(),
        })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: format!("header declares {count} clauses, found {}", clauses.len()),
            });
        }
        Self::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }

    /// Random 3-CNF with `clauses` clauses, each satisfied by `planted`.
    pub fn random_planted_3cnf(
        num_vars: usize,
        clauses: usize,
        rng: &mut SeededRng,
    ) -> Result<(Self, Vec<bool>)> {
        if num_vars < 3 {
            return Err(Error::InvalidArgument(
                "3-CNF needs at least 3 variables".into(),
            ));
        }
        let planted: Vec<bool> = (0..num_vars).map(|_| rng.coin()).collect();
        let mut out = Vec::with_capacity(clauses);
        while out.len() < clauses {
            let mut vars: Vec<usize> = Vec::with_capacity(3);
            while vars.len() < 3 {
                let v = rng.below(num_vars);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            let clause: Vec<i32> = vars
                .iter()
                .map(|&v| {
                    let lit = v as i32 + 1;
                    if rng.coin() {
                        lit
                    } else {
                        -lit
                    }
                })
                .collect();
            let satisfied = clause.iter().any(|&lit| {
                let value = planted[lit.unsigned_abs() as usize - 1];
                (lit > 0) == value
            });
            if satisfied {
                out.push(clause);
            }
        }
        Ok((Self::new(num_vars, out)?, planted))
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|&l| {
                        if l > 0 {
                            format!("x{l}")
                        } else {
                            format!("¬x{}", -l)
                        }
                    })
                    .collect();
                format!("({})", lits.join(" ∨ "))
            })
            .collect();
        write!(f, "{}", clauses.join(" ∧ "))
    }
}

impl FromStr for CnfFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_dimacs(s)
    }
}

/// Flips the sign of every literal of variable `i + 1` where `mask[i]` is set.
pub fn blind_with_mask(formula: &CnfFormula, mask: &[bool]) -> Result<CnfFormula> {
    if mask.len() != formula.num_vars {
        return Err(Error::DimensionMismatch {
            expected: formula.num_vars,
            found: mask.len(),
        });
    }
    let clauses = formula
        .clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|&lit| {
                    if mask[lit.unsigned_abs() as usize - 1] {
                        -lit
                    } else {
                        lit
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(formula.num_vars, clauses)
}

/// Blinds `formula` with a uniformly random mask and returns both.
pub fn blind_sat(formula: &CnfFormula, rng: &mut SeededRng) -> (CnfFormula, Vec<bool>) {
    let mask: Vec<bool> = (0..formula.num_vars).map(|_| rng.coin()).collect();
    let blinded = blind_with_mask(formula, &mask).expect("mask has one bit per variable");
    (blinded, mask)
}

/// `assignment ⊕ mask`.
pub fn unblind_assignment(assignment: &[bool], mask: &[bool]) -> Result<Vec<bool>> {
    if assignment.len() != mask.len() {
        return Err(Error::DimensionMismatch {
            expected: mask.len(),
            found: assignment.len(),
        });
    }
    Ok(assignment.iter().zip(mask).map(|(a, m)| a ^ m).collect())
}

/// Assignment for index `bits`: variable `i + 1` takes bit `i`.
pub fn assignment_from_bits(num_vars: usize, bits: u64) -> Vec<bool> {
    (0..num_vars).map(|i| (bits >> i) & 1 == 1).collect()
}

/// First satisfying assignment in counting order, by exhaustive search.
pub fn brute_force_solve(formula: &CnfFormula) -> Result<Option<Vec<bool>>> {
    let n = formula.num_vars;
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_BRUTE_FORCE_VARS,
        });
    }
    for bits in 0..1u64 << n {
        let a = assignment_from_bits(n, bits);
        if formula.evaluate(&a)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n";
        let f = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(f.clauses(), &[vec![1, -2], vec![2, 3, -1]]);
        assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn dimacs_errors() {
        assert!(matches!(
            CnfFormula::parse_dimacs("1 2 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            CnfFormula::parse_dimacs("p cnf 2 1\n1 3 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(CnfFormula::parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("c nothing\n").is_err());
    }

    #[test]
    fn mask_flips_literals() {
        let f = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        assert_eq!(blind_with_mask(&f, &[false, false]).unwrap(), f);
        assert_eq!(
            blind_with_mask(&f, &[true, false]).unwrap().clauses(),
            &[vec![-1, -2]]
        );
    }

    #[test]
    fn unblind_examples() {
        let a = vec![true, false, true];
        assert_eq!(unblind_assignment(&a, &[false; 3]).unwrap(), a);
        assert_eq!(unblind_assignment(&a, &a).unwrap(), vec![false; 3]);
        assert!(unblind_assignment(&a, &[true]).is_err());
    }

    #[test]
    fn planted_assignment_satisfies() {
        let mut rng = SeededRng::new(3);
        let (f, planted) = CnfFormula::random_planted_3cnf(8, 30, &mut rng).unwrap();
        assert!(f.evaluate(&planted).unwrap());
        assert!(brute_force_solve(&f).unwrap().is_some());
    }
}
