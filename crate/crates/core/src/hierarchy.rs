//! Gottesman-Chuang hierarchy membership and decoding operators.
//!
//! `C_1` is the Pauli group, and `C_k = {U : U C_1 U† ⊆ C_{k-1}}`. A gate in
//! `C_{k+1}` admits a `k`-round assisted protocol.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliOperator, MAX_DENSE_QUBITS};
use crate::simulator::UnitaryMatrix;

/// Residual tolerance for recognizing a matrix as a Pauli.
pub const HIERARCHY_TOL: f64 = 1e-8;

/// Highest level `classify` will test.
pub const MAX_LEVEL: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: String,
    pub arity: usize,
    pub unitary: UnitaryMatrix,
}

impl GateSpec {
    pub fn new(name: impl Into<String>, unitary: UnitaryMatrix) -> Result<Self> {
        let arity = unitary.num_qubits()?;
        Ok(Self {
            name: name.into(),
            arity,
            unitary,
        })
    }

    /// Built-in gate table; names are case-insensitive.
    pub fn named(name: &str) -> Option<Self> {
        let u = match name.to_ascii_uppercase().as_str() {
            "I" | "ID" => UnitaryMatrix::identity(2),
            "X" => UnitaryMatrix::pauli_x(),
            "Z" => UnitaryMatrix::pauli_z(),
            "XZ" => UnitaryMatrix::pauli_x()
                .mul(&UnitaryMatrix::pauli_z())
                .ok()?,
            "Y" => UnitaryMatrix::pauli_x()
                .mul(&UnitaryMatrix::pauli_z())
                .ok()?
                .scale(Complex64::new(0.0, 1.0)),
            "H" => UnitaryMatrix::hadamard(),
            "S" => UnitaryMatrix::s(),
            "SDG" => UnitaryMatrix::s().adjoint(),
            "T" => UnitaryMatrix::t(),
            "TDG" => UnitaryMatrix::t().adjoint(),
            "CNOT" | "CX" => UnitaryMatrix::cnot(),
            "CZ" => UnitaryMatrix::cz(),
            "SWAP" => UnitaryMatrix::swap(),
            "TOFFOLI" | "CCX" => UnitaryMatrix::toffoli(),
            "FREDKIN" | "CSWAP" => UnitaryMatrix::fredkin(),
            _ => return None,
        };
        Self::new(name.to_ascii_uppercase(), u).ok()
    }

    pub const NAMES: [&'static str; 15] = [
        "I", "X", "Z", "XZ", "Y", "H", "S", "SDG", "T", "TDG", "CNOT", "CZ", "SWAP", "TOFFOLI",
        "FREDKIN",
    ];
}

fn num_qubits_capped(u: &UnitaryMatrix) -> Result<usize> {
    let n = u.num_qubits()?;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(n)
}

/// The phaseless Pauli `p` with `u ≈ c·p` together with that phase `c`.
///
/// A Pauli has exactly one nonzero per column, so the candidate is read off
/// column 0 (for the X part) and the basis columns `|e_q⟩` (for the Z part),
/// then confirmed against the full matrix.
pub fn recognize_pauli_with_phase(
    u: &UnitaryMatrix,
    tol: f64,
) -> Result<Option<(PauliOperator, Complex64)>> {
    let n = num_qubits_capped(u)?;
    let dim = u.dim();
    let x = (0..dim)
        .max_by(|&a, &b| u.entry(a, 0).norm().total_cmp(&u.entry(b, 0).norm()))
        .unwrap_or(0);
    let anchor = u.entry(x, 0);
    if anchor.norm() < 0.5 {
        return Ok(None);
    }
    let mut z = 0u64;
    for q in 0..n {
        let col = 1usize << q;
        let ratio = u.entry(col ^ x, col) / anchor;
        if ratio.re < 0.0 {
            z |= 1 << q;
        }
    }
    let candidate = PauliOperator::new(n, x as u64, z, 0)?;
    let m = candidate.to_matrix()?;
    Ok(u.global_phase_relative_to(&m, tol).map(|c| (candidate, c)))
}

/// The unique phaseless Pauli equal to `u` up to global phase, if any.
pub fn recognize_pauli(u: &UnitaryMatrix, tol: f64) -> Result<Option<PauliOperator>> {
    Ok(recognize_pauli_with_phase(u, tol)?.map(|(p, _)| p))
}

fn phase_to_i_power(c: Complex64, tol: f64) -> Option<u8> {
    (0u8..4).find(|&k| (crate::pauli::i_pow(k) - c).norm() < tol)
}

fn conjugate(u: &UnitaryMatrix, p: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    UnitaryMatrix::product([u, p, &u.adjoint()])
}

/// Pauli generators `X_0, Z_0, X_1, Z_1, …`.
pub fn pauli_generators(n: usize) -> Vec<PauliOperator> {
    (0..n)
        .flat_map(|q| {
            [
                PauliOperator::x(n, q).expect("qubit in range"),
                PauliOperator::z(n, q).expect("qubit in range"),
            ]
        })
        .collect()
}

/// One row of a conjugation table: `u · generator · u†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationImage {
    pub generator: PauliOperator,
    pub image: UnitaryMatrix,
    /// The image as a Pauli, with its sign when it is a power of `i`.
    pub pauli: Option<PauliOperator>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordCheck {
    pub is_clifford: bool,
    pub table: Vec<ConjugationImage>,
}

pub fn conjugation_table(u: &UnitaryMatrix, tol: f64) -> Result<Vec<ConjugationImage>> {
    let n = num_qubits_capped(u)?;
    pauli_generators(n)
        .into_iter()
        .map(|generator| {
            let image = conjugate(u, &generator.to_matrix()?)?;
            let pauli =
                recognize_pauli_with_phase(&image, tol)?.map(|(p, c)| {
                    match phase_to_i_power(c, tol) {
                        Some(k) => p.with_phase(k),
                        None => p,
                    }
                });
            Ok(ConjugationImage {
                generator,
                image,
                pauli,
            })
        })
        .collect()
}

/// Clifford test on the generators `X_q, Z_q`; products follow because `C_1` is a group.
pub fn is_clifford(u: &UnitaryMatrix, tol: f64) -> Result<CliffordCheck> {
    let table = conjugation_table(u, tol)?;
    let is_clifford = table.iter().all(|row| row.pauli.is_some());
    Ok(CliffordCheck { is_clifford, table })
}

fn is_clifford_fast(u: &UnitaryMatrix, tol: f64) -> Result<bool> {
    let n = num_qubits_capped(u)?;
    for g in pauli_generators(n) {
        let image = conjugate(u, &g.to_matrix()?)?;
        if recognize_pauli(&image, tol)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `C_k`.
///
/// Level 3 checks only the generators (their images must lie in the group
/// `C_2`); level 4 and above enumerate all `4^n` Paulis because those levels
/// are not closed under products.
pub fn is_in_level(u: &UnitaryMatrix, k: usize, tol: f64) -> Result<bool> {
    match k {
        0 => Err(Error::InvalidArgument("hierarchy levels start at 1".into())),
        1 => Ok(recognize_pauli(u, tol)?.is_some()),
        2 => is_clifford_fast(u, tol),
        3 => {
            let n = num_qubits_capped(u)?;
            for g in pauli_generators(n) {
                let image = conjugate(u, &g.to_matrix()?)?;
                if !is_clifford_fast(&image, tol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => is_in_level_full(u, k, tol),
    }
}

/// Membership in `C_k` by conjugating every phaseless Pauli, at every level.
pub fn is_in_level_full(u: &UnitaryMatrix, k: usize, tol: f64) -> Result<bool> {
    match k {
        0 => Err(Error::InvalidArgument("hierarchy levels start at 1".into())),
        1 => Ok(recognize_pauli(u, tol)?.is_some()),
        _ => {
            let n = num_qubits_capped(u)?;
            for p in PauliOperator::enumerate(n) {
                let image = conjugate(u, &p.to_matrix()?)?;
                let inner = if k == 2 {
                    recognize_pauli(&image, tol)?.is_some()
                } else {
                    is_in_level(&image, k - 1, tol)?
                };
                if !inner {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub generator: PauliOperator,
    pub image: UnitaryMatrix,
    pub image_pauli: Option<PauliOperator>,
    /// Smallest level of the image, tested up to `max_k - 1`.
    pub image_level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyVerdict {
    /// Smallest `k ≤ max_k` with membership, `None` if beyond `max_k`.
    pub level: Option<usize>,
    pub max_k: usize,
    pub witnesses: Vec<Witness>,
}

impl fmt::Display for HierarchyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Some(k) => writeln!(f, "level: C_{k}")?,
            None => writeln!(f, "level: beyond C_{}", self.max_k)?,
        }
        for w in &self.witnesses {
            let image = match &w.image_pauli {
                Some(p) => p.to_string(),
                None => "non-Pauli".to_string(),
            };
            let level = match w.image_level {
                Some(k) => format!("C_{k}"),
                None => "unclassified".to_string(),
            };
            writeln!(f, "  U ({}) U† = {image}  [{level}]", w.generator)?;
        }
        Ok(())
    }
}

fn smallest_level(u: &UnitaryMatrix, max_k: usize, tol: f64) -> Result<Option<usize>> {
    for k in 1..=max_k {
        if is_in_level(u, k, tol)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn classify(u: &UnitaryMatrix, max_k: usize) -> Result<HierarchyVerdict> {
    classify_with_tol(u, max_k, HIERARCHY_TOL)
}

pub fn classify_with_tol(u: &UnitaryMatrix, max_k: usize, tol: f64) -> Result<HierarchyVerdict> {
    if max_k == 0 || max_k > MAX_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "max_k must be in 1..={MAX_LEVEL}, got {max_k}"
        )));
    }
    let level = smallest_level(u, max_k, tol)?;
    let witnesses = conjugation_table(u, tol)?
        .into_iter()
        .map(|row| {
            let image_level = if row.pauli.is_some() {
                Some(1)
            } else if max_k > 1 {
                smallest_level(&row.image, max_k - 1, tol)?
            } else {
                None
            };
            Ok(Witness {
                generator: row.generator,
                image: row.image,
                image_pauli: row.pauli,
                image_level,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HierarchyVerdict {
        level,
        max_k,
        witnesses,
    })
}

/// `u · e† · u†`, the decoding that undoes a Pauli encoding `e` through `u`.
pub fn decode_for(u: &UnitaryMatrix, e: &PauliOperator) -> Result<UnitaryMatrix> {
    let em = e.to_matrix()?;
    if em.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: em.dim(),
        });
    }
    UnitaryMatrix::product([u, &em.adjoint(), &u.adjoint()])
}

/// A keyed protocol `D_j · V · E_j = U` over uniformly chosen keys `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyedProtocol {
    pub bob_gate: UnitaryMatrix,
    pub target: UnitaryMatrix,
    pub encodings: Vec<UnitaryMatrix>,
    pub decodings: Vec<UnitaryMatrix>,
}

impl KeyedProtocol {
    /// Largest entrywise deviation of `D_j V E_j` from `U` (phase removed), over all keys.
    pub fn max_deviation(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (e, d) in self.encodings.iter().zip(&self.decodings) {
            let composite = UnitaryMatrix::product([d, &self.bob_gate, e])?;
            let dev = match composite.global_phase_relative_to(&self.target, 1e-6) {
                Some(c) => composite.max_abs_diff(&self.target.scale(c)),
                None => f64::INFINITY,
            };
            worst = worst.max(dev);
        }
        Ok(worst)
    }

    pub fn is_valid(&self, tol: f64) -> Result<bool> {
        Ok(self.max_deviation()? <= tol)
    }
}

/// Pauli-keyed protocol for target `u` with Bob performing `v`:
/// `E_j = e0 · P_j` over all Paulis `P_j` (so `E_0 = e0`), `D_j = u E_j† v†`.
pub fn pauli_keyed_protocol(
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
    e0: &PauliOperator,
) -> Result<KeyedProtocol> {
    let n = u.num_qubits()?;
    if v.dim() != u.dim() || e0.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let v_adj = v.adjoint();
    let mut encodings = Vec::new();
    let mut decodings = Vec::new();
    for p in PauliOperator::enumerate(n) {
        let e = e0.multiply(&p)?.to_matrix()?;
        let d = UnitaryMatrix::product([u, &e.adjoint(), &v_adj])?;
        encodings.push(e);
        decodings.push(d);
    }
    Ok(KeyedProtocol {
        bob_gate: v.clone(),
        target: u.clone(),
        encodings,
        decodings,
    })
}

/// Rewrites a `V`-based protocol into a `U`-based one with
/// `E_j' = E_0† E_j` and `D_j' = D_j D_0†`.
pub fn normalize_keyed(protocol: &KeyedProtocol) -> Result<KeyedProtocol> {
    let e0 = protocol
        .encodings
        .first()
        .ok_or_else(|| Error::InvalidArgument("protocol has no keys".into()))?;
    let d0 = &protocol.decodings[0];
    let e0_adj = e0.adjoint();
    let d0_adj = d0.adjoint();
    let encodings = protocol
        .encodings
        .iter()
        .map(|e| e0_adj.mul(e))
        .collect::<Result<Vec<_>>>()?;
    let decodings = protocol
        .decodings
        .iter()
        .map(|d| d.mul(&d0_adj))
        .collect::<Result<Vec<_>>>()?;
    Ok(KeyedProtocol {
        bob_gate: protocol.target.clone(),
        target: protocol.target.clone(),
        encodings,
        decodings,
    })
}

/// Reduction of a protocol where Bob performs `v ≠ u` to one where he performs `u`.
///
/// Requires `d0 · v · e0 = u` up to phase. The returned protocol carries the
/// modified key maps and has been checked for every key.
pub fn normalize_bob_gate(
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
    e0: &PauliOperator,
    d0: &PauliOperator,
) -> Result<KeyedProtocol> {
    let composite = UnitaryMatrix::product([&d0.to_matrix()?, v, &e0.to_matrix()?])?;
    if !composite.equal_up_to_global_phase(u, HIERARCHY_TOL) {
        return Err(Error::Precondition("d0 · v · e0 does not equal u".into()));
    }
    let v_protocol = pauli_keyed_protocol(u, v, e0)?;
    let normalized = normalize_keyed(&v_protocol)?;
    if !normalized.is_valid(HIERARCHY_TOL)? {
        return Err(Error::Precondition(
            "normalized protocol fails D_j' u E_j' = u".into(),
        ));
    }
    Ok(normalized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliKind;

    const TOL: f64 = HIERARCHY_TOL;

    fn gate(name: &str) -> UnitaryMatrix {
        GateSpec::named(name).unwrap().unitary
    }

    /// Oracle: try every one of the 4^n candidates.
    fn recognize_exhaustive(u: &UnitaryMatrix) -> Option<PauliOperator> {
        let n = u.num_qubits().unwrap();
        PauliOperator::enumerate(n)
            .find(|p| u.equal_up_to_global_phase(&p.to_matrix().unwrap(), TOL))
    }

    #[test]
    fn recognize_examples() {
        let x = recognize_pauli(&gate("X"), TOL).unwrap().unwrap();
        assert_eq!(x.kind_at(0), PauliKind::X);
        let phased = gate("Z").scale(Complex64::from_polar(1.0, std::f64::consts::PI / 7.0));
        let z = recognize_pauli(&phased, TOL).unwrap().unwrap();
        assert_eq!(z.kind_at(0), PauliKind::Z);
        assert!(recognize_pauli(&gate("H"), TOL).unwrap().is_none());
        assert!(recognize_exhaustive(&gate("H")).is_none());
    }

    #[test]
    fn fast_recognition_agrees_with_exhaustive_search() {
        let mut rng = crate::simulator::SeededRng::new(4);
        for n in 1..=3 {
            for p in PauliOperator::enumerate(n) {
                let m = p.with_phase(3).to_matrix().unwrap();
                assert_eq!(recognize_pauli(&m, TOL).unwrap(), recognize_exhaustive(&m));
            }
            for _ in 0..10 {
                let u = UnitaryMatrix::haar_random(1 << n, &mut rng);
                assert_eq!(recognize_pauli(&u, TOL).unwrap(), recognize_exhaustive(&u));
            }
        }
    }

    #[test]
    fn hadamard_conjugation_table() {
        let check = is_clifford(&gate("H"), TOL).unwrap();
        assert!(check.is_clifford);
        assert_eq!(
            check.table[0].pauli.as_ref().unwrap().to_string(),
            "i^0 · Z0"
        );
        assert_eq!(
            check.table[1].pauli.as_ref().unwrap().to_string(),
            "i^0 · X0"
        );
        assert!(is_clifford(&gate("CNOT"), TOL).unwrap().is_clifford);
        assert!(!is_clifford(&gate("T"), TOL).unwrap().is_clifford);
    }

    #[test]
    fn level_examples() {
        assert!(is_in_level(&gate("T"), 3, TOL).unwrap());
        assert!(is_in_level(&gate("TOFFOLI"), 3, TOL).unwrap());
        assert!(!is_in_level(&gate("TOFFOLI"), 2, TOL).unwrap());
        assert!(is_in_level(&UnitaryMatrix::identity(2), 1, TOL).unwrap());
        assert!(is_in_level(&gate("I"), 1, TOL).unwrap());
        assert!(is_in_level(&gate("X"), 1, TOL).unwrap());
        assert!(is_in_level(&gate("X"), 2, TOL).unwrap());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&gate("Z"), 4).unwrap().level, Some(1));
        assert_eq!(classify(&gate("H"), 4).unwrap().level, Some(2));
        assert_eq!(classify(&gate("FREDKIN"), 4).unwrap().level, Some(3));
        assert!(classify(&gate("H"), 0).is_err());
        let v = classify(&gate("T"), 3).unwrap();
        assert_eq!(v.level, Some(3));
        // T X T† is Clifford but not Pauli
        assert_eq!(v.witnesses[0].image_level, Some(2));
        assert_eq!(v.witnesses[1].image_level, Some(1));
    }

    #[test]
    fn sqrt_t_is_beyond_level_three() {
        let sqrt_t = UnitaryMatrix::diagonal(&[
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, std::f64::consts::PI / 8.0),
        ]);
        let v = classify(&sqrt_t, 3).unwrap();
        assert_eq!(v.level, None);
        assert_eq!(classify(&sqrt_t, 4).unwrap().level, Some(4));
    }

    #[test]
    fn s_facts() {
        let t = gate("T");
        let s = t.mul(&t).unwrap();
        assert_eq!(classify(&s, 3).unwrap().level, Some(2));
        assert!(s
            .mul(&s)
            .unwrap()
            .equal_up_to_global_phase(&gate("Z"), 1e-10));
        assert_eq!(classify(&gate("S"), 3).unwrap().level, Some(2));
    }

    #[test]
    fn decode_examples() {
        let h = gate("H");
        let x = PauliOperator::x(1, 0).unwrap();
        let d = decode_for(&h, &x).unwrap();
        assert!(d.equal_up_to_global_phase(&gate("Z"), 1e-10));

        let cnot = gate("CNOT");
        // X on the control (local qubit 0) spreads to the target
        let xc = PauliOperator::x(2, 0).unwrap();
        let d = decode_for(&cnot, &xc).unwrap();
        let xx = PauliOperator::from_kinds(&[PauliKind::X, PauliKind::X]).unwrap();
        assert!(d.equal_up_to_global_phase(&xx.to_matrix().unwrap(), 1e-10));

        let id = decode_for(&cnot, &PauliOperator::identity(2)).unwrap();
        assert!(id.equal_up_to_global_phase(&UnitaryMatrix::identity(4), 1e-10));

        assert!(decode_for(&h, &PauliOperator::identity(2)).is_err());
    }

    #[test]
    fn one_round_condition_for_cliffords() {
        for name in ["H", "S", "CNOT", "CZ", "SWAP"] {
            let u = gate(name);
            let n = u.num_qubits().unwrap();
            for e in PauliOperator::enumerate(n) {
                let d = decode_for(&u, &e).unwrap();
                assert!(recognize_pauli(&d, TOL).unwrap().is_some(), "{name}");
                let comp = UnitaryMatrix::product([&d, &u, &e.to_matrix().unwrap()]).unwrap();
                assert!(comp.equal_up_to_global_phase(&u, 1e-10));
            }
        }
    }

    #[test]
    fn level_three_decodes_are_clifford() {
        for name in ["T", "TOFFOLI", "FREDKIN"] {
            let u = gate(name);
            let n = u.num_qubits().unwrap();
            for e in PauliOperator::enumerate(n) {
                let d = decode_for(&u, &e).unwrap();
                assert!(is_clifford(&d, TOL).unwrap().is_clifford, "{name}");
            }
        }
    }

    #[test]
    fn normalize_identity_case() {
        let h = gate("H");
        let id = PauliOperator::identity(1);
        let p = normalize_bob_gate(&h, &h, &id, &id).unwrap();
        let reference = pauli_keyed_protocol(&h, &h, &id).unwrap();
        assert_eq!(p.encodings, reference.encodings);
        for (a, b) in p.decodings.iter().zip(&reference.decodings) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
    }

    #[test]
    fn normalize_zh_to_h() {
        let h = gate("H");
        let zh = gate("Z").mul(&h).unwrap();
        let z = PauliOperator::z(1, 0).unwrap();
        let id = PauliOperator::identity(1);
        let p = normalize_bob_gate(&h, &zh, &id, &z).unwrap();
        // brute-force over the four keys
        for (e, d) in p.encodings.iter().zip(&p.decodings) {
            let comp = UnitaryMatrix::product([d, &h, e]).unwrap();
            assert!(comp.equal_up_to_global_phase(&h, 1e-10));
        }
    }

    #[test]
    fn normalize_xt_to_t() {
        let t = gate("T");
        let xt = gate("X").mul(&t).unwrap();
        let x = PauliOperator::x(1, 0).unwrap();
        let id = PauliOperator::identity(1);
        let p = normalize_bob_gate(&t, &xt, &id, &x).unwrap();
        assert!(p.is_valid(1e-10).unwrap());
    }

    #[test]
    fn normalize_rejects_bad_precondition() {
        let h = gate("H");
        let id = PauliOperator::identity(1);
        let z = PauliOperator::z(1, 0).unwrap();
        assert!(matches!(
            normalize_bob_gate(&h, &h, &id, &z),
            Err(Error::Precondition(_))
        ));
    }
}
