//! Phase-tracked Pauli operators in symplectic bitmask form.
//!
//! An operator is stored as `i^phase_exp · ⊗_q X^{x_q} Z^{z_q}`, where on each
//! qubit the `X` factor is written to the left of the `Z` factor (so the
//! single-qubit element `XZ` is the matrix product `X·Z`). Qubit 0 is the
//! least-significant bit of both masks and of basis-state indices.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::simulator::UnitaryMatrix;

/// Largest register width accepted by the bitmask representation.
pub const MAX_MASK_QUBITS: usize = 32;

/// Largest register width for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Single-qubit Pauli factor, in the fixed enumeration order `I, X, Z, XZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliKind {
    I,
    X,
    Z,
    XZ,
}

impl PauliKind {
    pub const ALL: [PauliKind; 4] = [PauliKind::I, PauliKind::X, PauliKind::Z, PauliKind::XZ];

    fn code(self) -> u64 {
        match self {
            PauliKind::I => 0,
            PauliKind::X => 1,
            PauliKind::Z => 2,
            PauliKind::XZ => 3,
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (false, true) => PauliKind::Z,
            (true, true) => PauliKind::XZ,
        }
    }
}

/// Index of a phaseless Pauli in `[0, 4^n)`.
///
/// Two bits per qubit, qubit 0 lowest: the pair for qubit `q` is
/// `x_q | (z_q << 1)`, so a single qubit enumerates as `I, X, Z, XZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliIndex(pub u64);

impl PauliIndex {
    /// Number of phaseless Paulis on `n` qubits.
    pub fn count(n: usize) -> u64 {
        1u64 << (2 * n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

fn width_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOperator {
    pub fn new(n: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Result<Self> {
        if n > MAX_MASK_QUBITS {
            return Err(Error::Capacity {
                requested: n,
                max: MAX_MASK_QUBITS,
            });
        }
        let valid = width_mask(n);
        if x_mask & !valid != 0 || z_mask & !valid != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask does not fit in {n} qubits"
            )));
        }
        Ok(Self {
            n,
            x_mask,
            z_mask,
            phase_exp: phase_exp % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0, 0, 0).expect("identity of supported width")
    }

    /// A single-qubit factor `kind` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Result<Self> {
        if qubit >= n {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        let bit = 1u64 << qubit;
        let (x, z) = match kind {
            PauliKind::I => (0, 0),
            PauliKind::X => (bit, 0),
            PauliKind::Z => (0, bit),
            PauliKind::XZ => (bit, bit),
        };
        Self::new(n, x, z, 0)
    }

    pub fn x(n: usize, qubit: usize) -> Result<Self> {
        Self::single(n, qubit, PauliKind::X)
    }

    pub fn z(n: usize, qubit: usize) -> Result<Self> {
        Self::single(n, qubit, PauliKind::Z)
    }

    /// Builds a phase-0 operator from per-qubit factors, qubit 0 first.
    pub fn from_kinds(kinds: &[PauliKind]) -> Result<Self> {
        let mut x = 0;
        let mut z = 0;
        for (q, kind) in kinds.iter().enumerate() {
            let code = kind.code();
            x |= (code & 1) << q;
            z |= ((code >> 1) & 1) << q;
        }
        Self::new(kinds.len(), x, z, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn kind_at(&self, qubit: usize) -> PauliKind {
        PauliKind::from_bits(
            (self.x_mask >> qubit) & 1 == 1,
            (self.z_mask >> qubit) & 1 == 1,
        )
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0 && self.phase_exp == 0
    }

    /// Same operator with the phase dropped.
    pub fn phaseless(&self) -> Self {
        Self {
            phase_exp: 0,
            ..self.clone()
        }
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        Self {
            phase_exp: phase_exp % 4,
            ..self.clone()
        }
    }

    /// Equality ignoring the tracked global phase.
    pub fn eq_up_to_phase(&self, other: &Self) -> bool {
        self.n == other.n && self.x_mask == other.x_mask && self.z_mask == other.z_mask
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        // Moving Z^{z_a} to the right of X^{x_b} picks up (-1) per shared qubit.
        let swaps = (self.z_mask & other.x_mask).count_ones() as u8;
        let phase = (self.phase_exp + other.phase_exp + 2 * (swaps % 2)) % 4;
        Ok(Self {
            n: self.n,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase_exp: phase,
        })
    }

    /// Adjoint, which is also the group inverse.
    pub fn adjoint(&self) -> Self {
        // (X^x Z^z)† = Z^z X^x = (-1)^{|x∧z|} X^x Z^z
        let overlap = ((self.x_mask & self.z_mask).count_ones() % 2) as u8;
        let phase = (4 - self.phase_exp + 2 * overlap) % 4;
        Self {
            phase_exp: phase,
            ..self.clone()
        }
    }

    /// Symplectic test: parity of `⟨x_a, z_b⟩ + ⟨z_a, x_b⟩`.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_width(other)?;
        let parity =
            (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        Ok(parity.is_multiple_of(2))
    }

    pub fn to_index(&self) -> PauliIndex {
        let mut value = 0u64;
        for q in 0..self.n {
            let pair = ((self.x_mask >> q) & 1) | (((self.z_mask >> q) & 1) << 1);
            value |= pair << (2 * q);
        }
        PauliIndex(value)
    }

    pub fn from_index(index: PauliIndex, n: usize) -> Result<Self> {
        if n > MAX_MASK_QUBITS {
            return Err(Error::Capacity {
                requested: n,
                max: MAX_MASK_QUBITS,
            });
        }
        if index.0 >= PauliIndex::count(n) {
            return Err(Error::InvalidArgument(format!(
                "Pauli index {} out of range for {n} qubits",
                index.0
            )));
        }
        let mut x = 0;
        let mut z = 0;
        for q in 0..n {
            let pair = (index.0 >> (2 * q)) & 3;
            x |= (pair & 1) << q;
            z |= (pair >> 1) << q;
        }
        Self::new(n, x, z, 0)
    }

    /// Every phase-0 Pauli on `n` qubits, in index order.
    pub fn enumerate(n: usize) -> impl Iterator<Item = PauliOperator> {
        (0..PauliIndex::count(n))
            .map(move |i| Self::from_index(PauliIndex(i), n).expect("index in range"))
    }

    /// Restriction to a subset of qubits, relabelled `0..qubits.len()`.
    pub fn restrict(&self, qubits: &[usize]) -> Result<Self> {
        let mut kinds = Vec::with_capacity(qubits.len());
        for &q in qubits {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
            kinds.push(self.kind_at(q));
        }
        Self::from_kinds(&kinds)
    }

    /// Dense matrix `i^phase · ⊗ X^{x_q} Z^{z_q}` in the qubit-0-lowest basis.
    pub fn to_matrix(&self) -> Result<UnitaryMatrix> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::Capacity {
                requested: self.n,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n;
        let global = i_pow(self.phase_exp);
        let x = self.x_mask as usize;
        let z = self.z_mask as usize;
        // Column b maps to row b ^ x, with sign (-1)^{popcount(b & z)} from Z acting first.
        let mut m = nalgebra::DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for col in 0..dim {
            let sign = if (col & z).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            m[(col ^ x, col)] = global * sign;
        }
        Ok(UnitaryMatrix::from_matrix_unchecked(m))
    }

    /// Parses the rendered form into an operator of the given width.
    pub fn parse_with_width(s: &str, n: usize) -> Result<Self> {
        let parsed = parse_pauli(s)?;
        let needed = parsed.min_width();
        if needed > n {
            return Err(Error::Parse {
                line: 1,
                message: format!("operator touches qubit {} but width is {n}", needed - 1),
            });
        }
        parsed.build(n)
    }
}

/// `i^k` as a complex number.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Renders as `i^k · X0 Z0 X1`; the identity prints as `i^k · I`.
impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{} ·", self.phase_exp)?;
        if self.x_mask == 0 && self.z_mask == 0 {
            return write!(f, " I");
        }
        for q in 0..self.n {
            if (self.x_mask >> q) & 1 == 1 {
                write!(f, " X{q}")?;
            }
            if (self.z_mask >> q) & 1 == 1 {
                write!(f, " Z{q}")?;
            }
        }
        Ok(())
    }
}

struct ParsedPauli {
    phase: u8,
    factors: Vec<(char, usize)>,
}

impl ParsedPauli {
    fn min_width(&self) -> usize {
        self.factors.iter().map(|&(_, q)| q + 1).max().unwrap_or(0)
    }

    fn build(&self, n: usize) -> Result<PauliOperator> {
        let mut acc = PauliOperator::identity(n).with_phase(self.phase);
        for &(letter, q) in &self.factors {
            let factor = match letter {
                'X' => PauliOperator::x(n, q)?,
                _ => PauliOperator::z(n, q)?,
            };
            acc = acc.multiply(&factor)?;
        }
        Ok(acc)
    }
}

fn parse_pauli(s: &str) -> Result<ParsedPauli> {
    let err = |message: String| Error::Parse { line: 1, message };
    let s = s.trim();
    let (phase, body) = match s.split_once('·') {
        Some((prefix, rest)) => {
            let exp = prefix
                .trim()
                .strip_prefix("i^")
                .ok_or_else(|| err(format!("bad phase prefix `{}`", prefix.trim())))?;
            let k: u8 = exp
                .parse()
                .map_err(|_| err(format!("bad phase exponent `{exp}`")))?;
            (k % 4, rest)
        }
        None => (0, s),
    };
    let mut factors = Vec::new();
    for token in body.split_whitespace() {
        if token == "I" {
            continue;
        }
        let mut chars = token.chars();
        let letter = chars.next().unwrap_or(' ');
        if letter != 'X' && letter != 'Z' {
            return Err(err(format!("unknown Pauli factor `{token}`")));
        }
        let q: usize = chars
            .as_str()
            .parse()
            .map_err(|_| err(format!("bad qubit index in `{token}`")))?;
        if q >= MAX_MASK_QUBITS {
            return Err(err(format!("qubit index {q} too large")));
        }
        factors.push((letter, q));
    }
    Ok(ParsedPauli { phase, factors })
}

/// Parses with the width inferred from the highest qubit mentioned.
impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = parse_pauli(s)?;
        parsed.build(parsed.min_width().max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x1() -> PauliOperator {
        PauliOperator::x(1, 0).unwrap()
    }

    fn z1() -> PauliOperator {
        PauliOperator::z(1, 0).unwrap()
    }

    fn matrices_equal(a: &UnitaryMatrix, b: &UnitaryMatrix) -> bool {
        (a.as_matrix() - b.as_matrix())
            .iter()
            .all(|e| e.norm() < 1e-12)
    }

    #[test]
    fn x_times_x_is_identity() {
        let p = x1().multiply(&x1()).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn xz_and_zx_differ_by_sign() {
        let xz = x1().multiply(&z1()).unwrap();
        let zx = z1().multiply(&x1()).unwrap();
        assert!(xz.eq_up_to_phase(&zx));
        assert_eq!((xz.phase_exp() + 4 - zx.phase_exp()) % 4, 2);
    }

    #[test]
    fn disjoint_supports_commute_without_phase() {
        let a = PauliOperator::x(2, 0).unwrap();
        let b = PauliOperator::z(2, 1).unwrap();
        let p = a.multiply(&b).unwrap();
        assert_eq!(p.kind_at(0), PauliKind::X);
        assert_eq!(p.kind_at(1), PauliKind::Z);
        assert_eq!(p.phase_exp(), 0);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = PauliOperator::x(1, 0).unwrap();
        let b = PauliOperator::x(2, 0).unwrap();
        assert!(matches!(
            a.multiply(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(a.commutes(&b).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!x1().commutes(&z1()).unwrap());
        assert!(z1().commutes(&z1()).unwrap());
        let xz = PauliOperator::from_kinds(&[PauliKind::X, PauliKind::Z]).unwrap();
        let zx = PauliOperator::from_kinds(&[PauliKind::Z, PauliKind::X]).unwrap();
        assert!(xz.commutes(&zx).unwrap());
        // brute-force commutator on the 4x4 matrices
        let a = xz.to_matrix().unwrap();
        let b = zx.to_matrix().unwrap();
        assert!(matrices_equal(&a.mul(&b).unwrap(), &b.mul(&a).unwrap()));
    }

    #[test]
    fn matrix_examples() {
        let id = PauliOperator::identity(2).to_matrix().unwrap();
        assert!(matrices_equal(&id, &UnitaryMatrix::identity(4)));
        let x = x1().to_matrix().unwrap();
        let m = x.as_matrix();
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(0, 0)], Complex64::new(0.0, 0.0));
        let minus_z = z1().with_phase(2).to_matrix().unwrap();
        assert_eq!(minus_z.as_matrix()[(0, 0)], Complex64::new(-1.0, 0.0));
        assert_eq!(minus_z.as_matrix()[(1, 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn capacity_error_above_dense_cap() {
        let p = PauliOperator::identity(13);
        assert!(matches!(p.to_matrix(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn single_qubit_enumeration_order() {
        let kinds: Vec<_> = PauliOperator::enumerate(1).map(|p| p.kind_at(0)).collect();
        assert_eq!(kinds, PauliKind::ALL.to_vec());
    }

    #[test]
    fn index_round_trip_two_qubits() {
        for k in 0..16 {
            let p = PauliOperator::from_index(PauliIndex(k), 2).unwrap();
            assert_eq!(p.to_index(), PauliIndex(k));
        }
        assert!(PauliOperator::from_index(PauliIndex(16), 2).is_err());
    }

    #[test]
    fn enumeration_hits_each_pauli_once() {
        let all: Vec<_> = PauliOperator::enumerate(2).collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert!(!a.eq_up_to_phase(b));
            }
        }
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn distinct_paulis_are_not_proportional() {
        let all: Vec<_> = PauliOperator::enumerate(2)
            .map(|p| p.to_matrix().unwrap())
            .collect();
        for i in 0..all.len() {
            for j in 0..all.len() {
                if i != j {
                    assert!(!all[i].equal_up_to_global_phase(&all[j], 1e-9));
                }
            }
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = PauliOperator::from_kinds(&[PauliKind::XZ, PauliKind::X])
            .unwrap()
            .with_phase(2);
        let s = p.to_string();
        assert_eq!(s, "i^2 · X0 Z0 X1");
        assert_eq!(PauliOperator::parse_with_width(&s, 2).unwrap(), p);
        assert_eq!(s.parse::<PauliOperator>().unwrap(), p);
        let id = PauliOperator::identity(3).with_phase(1);
        assert_eq!(id.to_string(), "i^1 · I");
        assert_eq!(
            PauliOperator::parse_with_width(&id.to_string(), 3).unwrap(),
            id
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("i^2 · Y0".parse::<PauliOperator>().is_err());
        assert!("j^2 · X0".parse::<PauliOperator>().is_err());
        assert!(PauliOperator::parse_with_width("X3", 2).is_err());
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        let max = 1u64 << n;
        (0..max, 0..max, 0u8..4).prop_map(move |(x, z, p)| PauliOperator::new(n, x, z, p).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (PauliOperator, PauliOperator, PauliOperator)> {
        (1usize..=4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
    }

    proptest! {
        #[test]
        fn group_axioms_hold((a, b, c) in arb_triple()) {
            let n = a.num_qubits();
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(&ab_c, &a_bc);
            let id = PauliOperator::identity(n);
            prop_assert_eq!(&a.multiply(&id).unwrap(), &a);
            prop_assert_eq!(&id.multiply(&a).unwrap(), &a);
            prop_assert!(a.multiply(&a.adjoint()).unwrap().is_identity());
            prop_assert!(a.adjoint().multiply(&a).unwrap().is_identity());
        }

        #[test]
        fn product_matches_matrices((a, b, _c) in arb_triple()) {
            let prod = a.multiply(&b).unwrap().to_matrix().unwrap();
            let mats = a.to_matrix().unwrap().mul(&b.to_matrix().unwrap()).unwrap();
            prop_assert!(matrices_equal(&prod, &mats));
            let adj = a.adjoint().to_matrix().unwrap();
            prop_assert!(matrices_equal(&adj, &a.to_matrix().unwrap().adjoint()));
        }

        #[test]
        fn reordering_phase_tracks_commutation((a, b, _c) in arb_triple()) {
            let a = a.phaseless();
            let b = b.phaseless();
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            prop_assert!(ab.eq_up_to_phase(&ba));
            let diff = (ab.phase_exp() + 4 - ba.phase_exp()) % 4;
            let expected = if a.commutes(&b).unwrap() { 0 } else { 2 };
            prop_assert_eq!(diff, expected);
        }

        #[test]
        fn phase_zero_paulis_square_to_identity((a, _b, _c) in arb_triple()) {
            let m = a.phaseless().to_matrix().unwrap();
            // X^x Z^z squares to (-1)^{|x∧z|}, so only the XZ-free ones are involutions.
            let sq = m.mul(&m).unwrap();
            let sign = if (a.x_mask() & a.z_mask()).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let expected = UnitaryMatrix::identity(1 << a.num_qubits()).scale(Complex64::new(sign, 0.0));
            prop_assert!(matrices_equal(&sq, &expected));
        }

        #[test]
        fn display_round_trips((a, _b, _c) in arb_triple()) {
            let parsed = PauliOperator::parse_with_width(&a.to_string(), a.num_qubits()).unwrap();
            prop_assert_eq!(parsed, a);
        }
    }
}
