use crate::error::Error;
use crate::hierarchy::{decode_for, is_in_level, recognize_pauli, GateSpec, HIERARCHY_TOL};
use crate::pauli::PauliOperator;
use crate::protocols::{
    check_wires, AliceMachine, Bob, Coin, GateProtocol, ProtocolError, RequestKind,
};
use crate::simulator::UnitaryMatrix;

/// Longest generator word tried when naming a correction.
const NAME_SEARCH_DEPTH: usize = 3;

/// Pads `wires` with a fresh uniformly random Pauli (`x` bits then `z` bits).
fn pad_with_random_pauli(
    alice: &mut AliceMachine,
    wires: &[usize],
) -> Result<(PauliOperator, Vec<Coin>), ProtocolError> {
    let n = wires.len();
    let coins = alice.flips(2 * n);
    let mut x = 0u64;
    let mut z = 0u64;
    for q in 0..n {
        x |= u64::from(coins[q].value) << q;
        z |= u64::from(coins[n + q].value) << q;
    }
    let key = PauliOperator::new(n, x, z, 0)?;
    alice.apply_pauli_on(wires, &key)?;
    Ok((key, coins))
}

fn level_of(u: &UnitaryMatrix, up_to: usize) -> Option<usize> {
    (1..=up_to).find(|&k| is_in_level(u, k, HIERARCHY_TOL).unwrap_or(false))
}

/// Encode with a key Pauli, ask Bob for the gate, decode with the Pauli
/// `u · key† · u†`.
#[derive(Debug, Clone)]
pub struct OneRoundProtocol {
    spec: GateSpec,
    /// Decoding Pauli for each key, indexed by the key's Pauli index.
    decodes: Vec<PauliOperator>,
}

impl OneRoundProtocol {
    pub fn spec(&self) -> &GateSpec {
        &self.spec
    }

    pub fn decode(&self, key: &PauliOperator) -> &PauliOperator {
        &self.decodes[key.to_index().0 as usize]
    }
}

pub fn compile_one_round(spec: &GateSpec) -> Result<OneRoundProtocol, ProtocolError> {
    let u = &spec.unitary;
    let n = spec.arity;
    if !is_in_level(u, 2, HIERARCHY_TOL)? {
        return Err(Error::NotRealizable {
            gate: spec.name.clone(),
            level: level_of(u, 3),
            rounds: 1,
        }
        .into());
    }
    let mut decodes = vec![PauliOperator::identity(n); 1 << (2 * n)];
    for key in PauliOperator::enumerate(n) {
        let d = decode_for(u, &key)?;
        let p = recognize_pauli(&d, HIERARCHY_TOL)?
            .ok_or_else(|| Error::Precondition(format!("decoding for key {key} is not a Pauli")))?;
        decodes[key.to_index().0 as usize] = p;
    }
    Ok(OneRoundProtocol {
        spec: spec.clone(),
        decodes,
    })
}

impl GateProtocol for OneRoundProtocol {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn arity(&self) -> usize {
        self.spec.arity
    }

    fn ideal(&self) -> &UnitaryMatrix {
        &self.spec.unitary
    }

    fn execute(
        &self,
        alice: &mut AliceMachine,
        wires: &[usize],
        bob: &mut Bob,
    ) -> Result<(), ProtocolError> {
        check_wires(wires, self.spec.arity)?;
        let (key, _) = pad_with_random_pauli(alice, wires)?;
        alice.exchange(bob, RequestKind::for_gate(&self.spec), wires)?;
        let decode = self.decode(&key).clone();
        alice.apply_pauli_on(wires, &decode)?;
        Ok(())
    }
}

/// Round 1 asks for the gate itself; the Clifford correction it leaves is
/// split as `K · P` with `P` a Pauli Alice applies herself. Every possible
/// `K` (up to right Pauli factors) then gets its own one-round slot, always
/// requested; Alice swaps her qubits into the one slot she needs and feeds
/// dummies to the rest.
#[derive(Debug, Clone)]
pub struct TwoRoundProtocol {
    spec: GateSpec,
    schedule: Vec<OneRoundProtocol>,
    /// For each key (by Pauli index): the slot holding its correction, if
    /// any, and the Pauli part applied right after round 1.
    table: Vec<(Option<usize>, PauliOperator)>,
}

impl TwoRoundProtocol {
    pub fn spec(&self) -> &GateSpec {
        &self.spec
    }

    /// Names of the round-2 requests, in order.
    pub fn schedule(&self) -> Vec<&str> {
        self.schedule.iter().map(|p| p.spec.name.as_str()).collect()
    }

    pub fn rounds(&self) -> usize {
        1 + self.schedule.len()
    }
}

struct Generator {
    name: String,
    unitary: UnitaryMatrix,
}

fn correction_generators(n: usize) -> Result<Vec<Generator>, Error> {
    let suffix = |qs: &[usize]| {
        if n == 1 {
            String::new()
        } else {
            let list: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
            format!("[{}]", list.join(","))
        }
    };
    let mut gens = Vec::new();
    for (name, g) in [("S", UnitaryMatrix::s()), ("H", UnitaryMatrix::hadamard())] {
        for q in 0..n {
            gens.push(Generator {
                name: format!("{name}{}", suffix(&[q])),
                unitary: g.embed(n, &[q])?,
            });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            gens.push(Generator {
                name: format!("CZ{}", suffix(&[a, b])),
                unitary: UnitaryMatrix::cz().embed(n, &[a, b])?,
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                gens.push(Generator {
                    name: format!("CNOT{}", suffix(&[a, b])),
                    unitary: UnitaryMatrix::cnot().embed(n, &[a, b])?,
                });
            }
        }
    }
    Ok(gens)
}

/// A short product of standard Cliffords that agrees with `c` up to a right
/// Pauli factor, as `(name, unitary)`.
fn name_correction(
    c: &UnitaryMatrix,
    gens: &[Generator],
) -> Result<Option<(String, UnitaryMatrix)>, Error> {
    let mut frontier: Vec<(Vec<usize>, UnitaryMatrix)> =
        vec![(Vec::new(), UnitaryMatrix::identity(c.dim()))];
    for _ in 0..NAME_SEARCH_DEPTH {
        let mut next = Vec::new();
        for (word, w) in &frontier {
            for (i, g) in gens.iter().enumerate() {
                let candidate = w.mul(&g.unitary)?;
                if recognize_pauli(&candidate.adjoint().mul(c)?, HIERARCHY_TOL)?.is_some() {
                    let names: Vec<&str> = word
                        .iter()
                        .chain(std::iter::once(&i))
                        .map(|&k| gens[k].name.as_str())
                        .collect();
                    return Ok(Some((names.join("*"), candidate)));
                }
                let mut longer = word.clone();
                longer.push(i);
                next.push((longer, candidate));
            }
        }
        frontier = next;
    }
    Ok(None)
}

pub fn compile_two_round(spec: &GateSpec) -> Result<TwoRoundProtocol, ProtocolError> {
    let u = &spec.unitary;
    let n = spec.arity;
    if !is_in_level(u, 3, HIERARCHY_TOL)? {
        return Err(Error::NotRealizable {
            gate: spec.name.clone(),
            level: level_of(u, 4),
            rounds: 2,
        }
        .into());
    }
    let gens = correction_generators(n)?;
    let mut reps: Vec<GateSpec> = Vec::new();
    let mut table = vec![(None, PauliOperator::identity(n)); 1 << (2 * n)];
    for key in PauliOperator::enumerate(n) {
        let c = decode_for(u, &key)?;
        let entry = if let Some(p) = recognize_pauli(&c, HIERARCHY_TOL)? {
            (None, p)
        } else {
            let mut found = None;
            for (i, rep) in reps.iter().enumerate() {
                if let Some(p) = recognize_pauli(&rep.unitary.adjoint().mul(&c)?, HIERARCHY_TOL)? {
                    found = Some((Some(i), p));
                    break;
                }
            }
            match found {
                Some(e) => e,
                None => {
                    let (name, k) = match name_correction(&c, &gens)? {
                        Some(named) => named,
                        None => (format!("CLIFFORD_{}", reps.len()), c.clone()),
                    };
                    let p = recognize_pauli(&k.adjoint().mul(&c)?, HIERARCHY_TOL)?
                        .ok_or_else(|| Error::Precondition("correction split failed".into()))?;
                    reps.push(GateSpec::new(name, k)?);
                    (Some(reps.len() - 1), p)
                }
            }
        };
        table[key.to_index().0 as usize] = entry;
    }
    let schedule = reps
        .iter()
        .map(compile_one_round)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TwoRoundProtocol {
        spec: spec.clone(),
        schedule,
        table,
    })
}

impl GateProtocol for TwoRoundProtocol {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn arity(&self) -> usize {
        self.spec.arity
    }

    fn ideal(&self) -> &UnitaryMatrix {
        &self.spec.unitary
    }

    fn dummies_needed(&self) -> usize {
        if self.schedule.is_empty() {
            0
        } else {
            self.spec.arity
        }
    }

    fn execute(
        &self,
        alice: &mut AliceMachine,
        wires: &[usize],
        bob: &mut Bob,
    ) -> Result<(), ProtocolError> {
        check_wires(wires, self.spec.arity)?;
        let (key, coins) = pad_with_random_pauli(alice, wires)?;
        alice.exchange(bob, RequestKind::for_gate(&self.spec), wires)?;
        alice.retain(&coins);
        let (slot, pauli) = self.table[key.to_index().0 as usize].clone();
        alice.apply_pauli_on(wires, &pauli)?;
        for (s, sub) in self.schedule.iter().enumerate() {
            let dummies = alice.acquire_dummies(wires.len())?;
            let here = slot == Some(s);
            for (w, d) in wires.iter().zip(&dummies) {
                alice.controlled_swap(*w, *d, here)?;
            }
            sub.execute(alice, &dummies, bob)?;
            for (w, d) in wires.iter().zip(&dummies) {
                alice.controlled_swap(*w, *d, here)?;
            }
            alice.release_dummies(&dummies)?;
        }
        Ok(())
    }
}
