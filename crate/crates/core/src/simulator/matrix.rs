use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::simulator::SeededRng;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense unitary. Multi-qubit gates use the register convention: local qubit
/// `j` of the gate is bit `j` of the local basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: CMatrix,
}

impl UnitaryMatrix {
    /// Wraps `m` after checking `m·m† = I` within `tol`.
    pub fn from_matrix(m: CMatrix, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let u = Self { m };
        let dev = u.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn from_rows(rows: &[Vec<Complex64>], tol: f64) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_matrix(CMatrix::from_fn(dim, dim, |r, c| rows[r][c]), tol)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// `log2(dim)`, or an error when the dimension is not a power of two.
    pub fn num_qubits(&self) -> Result<usize> {
        let d = self.dim();
        if d == 0 || !d.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "dimension {d} is not a power of two"
            )));
        }
        Ok(d.trailing_zeros() as usize)
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            m: &self.m * &other.m,
        })
    }

    /// Product of a sequence, leftmost factor first.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a UnitaryMatrix>) -> Result<Self> {
        let mut iter = factors.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
        iter.try_fold(first.clone(), |acc, f| acc.mul(f))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { m: &self.m * c }
    }

    /// Gate acting as `self` on the low qubits and `high` on the qubits above.
    pub fn tensor(&self, high: &Self) -> Self {
        Self {
            m: high.m.kronecker(&self.m),
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let prod = &self.m * self.m.adjoint();
        let id = CMatrix::identity(d, d);
        (prod - id).iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.m - &other.m)
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// True iff `self = c·other` for some unit-modulus `c`, entrywise within `tol`.
    ///
    /// The phase is read off the largest-magnitude entry of `other`.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: f64) -> bool {
        self.global_phase_relative_to(other, tol).is_some()
    }

    /// The `c` with `self ≈ c·other`, if one exists.
    pub fn global_phase_relative_to(&self, other: &Self, tol: f64) -> Option<Complex64> {
        if self.dim() != other.dim() {
            return None;
        }
        let (idx, anchor) = other
            .m
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if anchor.norm() < tol {
            return None;
        }
        let c = self.m.as_slice()[idx] / anchor;
        if (c.norm() - 1.0).abs() > tol {
            return None;
        }
        let c = c / c.norm();
        let ok = self
            .m
            .iter()
            .zip(other.m.iter())
            .all(|(a, b)| (a - c * b).norm() <= tol);
        ok.then_some(c)
    }

    /// Full `2^n`-dimensional matrix of this gate acting on `targets`.
    pub fn embed(&self, n: usize, targets: &[usize]) -> Result<Self> {
        let k = self.num_qubits()?;
        check_targets(n, targets, k)?;
        let dim = 1usize << n;
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let local_in = gather_bits(col, targets);
            for local_out in 0..(1usize << k) {
                let amp = self.m[(local_out, local_in)];
                if amp != ZERO {
                    m[(scatter_bits(col, targets, local_out), col)] += amp;
                }
            }
        }
        Ok(Self { m })
    }

    /// Permutation gate `|b⟩ ↦ |perm[b]⟩`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        let mut m = CMatrix::zeros(dim, dim);
        for (col, &row) in perm.iter().enumerate() {
            if row >= dim || seen[row] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[row] = true;
            m[(row, col)] = ONE;
        }
        Ok(Self { m })
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let dim = entries.len();
        Self {
            m: CMatrix::from_fn(dim, dim, |r, c| if r == c { entries[r] } else { ZERO }),
        }
    }

    pub fn pauli_x() -> Self {
        Self::permutation(&[1, 0]).expect("valid permutation")
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[ONE, -ONE])
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            m: CMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
        }
    }

    /// `diag(1, √i)`.
    pub fn t() -> Self {
        Self::diagonal(&[ONE, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])
    }

    /// `diag(1, i)`, equal to `T²`.
    pub fn s() -> Self {
        Self::diagonal(&[ONE, Complex64::new(0.0, 1.0)])
    }

    /// Controlled-NOT with local qubit 0 as control and local qubit 1 as target.
    pub fn cnot() -> Self {
        Self::controlled_not(2, 0, 1).expect("valid qubits")
    }

    pub fn controlled_not(n: usize, control: usize, target: usize) -> Result<Self> {
        check_targets(n, &[control, target], 2)?;
        let perm: Vec<usize> = (0..1usize << n)
            .map(|b| {
                if (b >> control) & 1 == 1 {
                    b ^ (1 << target)
                } else {
                    b
                }
            })
            .collect();
        Self::permutation(&perm)
    }

    pub fn cz() -> Self {
        Self::diagonal(&[ONE, ONE, ONE, -ONE])
    }

    pub fn swap() -> Self {
        Self::permutation(&[0, 2, 1, 3]).expect("valid permutation")
    }

    /// Controls on local qubits 0 and 1, target on local qubit 2.
    pub fn toffoli() -> Self {
        let perm: Vec<usize> = (0..8)
            .map(|b| if b & 0b011 == 0b011 { b ^ 0b100 } else { b })
            .collect();
        Self::permutation(&perm).expect("valid permutation")
    }

    /// Control on local qubit 0, swapping local qubits 1 and 2.
    pub fn fredkin() -> Self {
        let perm: Vec<usize> = (0..8usize)
            .map(|b| {
                if b & 1 == 1 {
                    let q1 = (b >> 1) & 1;
                    let q2 = (b >> 2) & 1;
                    1 | (q2 << 1) | (q1 << 2)
                } else {
                    b
                }
            })
            .collect();
        Self::permutation(&perm).expect("valid permutation")
    }

    /// Haar-random unitary via QR of a complex Ginibre matrix with the phase fix.
    pub fn haar_random(dim: usize, rng: &mut SeededRng) -> Self {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im) * FRAC_1_SQRT_2
        });
        let qr = g.qr();
        let q = qr.q();
        let r = qr.r();
        let mut m = q;
        for c in 0..dim {
            let d = r[(c, c)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
            for row in 0..dim {
                m[(row, c)] *= phase;
            }
        }
        Self { m }
    }
}

pub(crate) fn check_targets(n: usize, targets: &[usize], arity: usize) -> Result<()> {
    if targets.len() != arity {
        return Err(Error::DimensionMismatch {
            expected: arity,
            found: targets.len(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::QubitOutOfRange { qubit: t, n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Collects bits `qubits[j]` of `index` into bit `j` of the result.
pub(crate) fn gather_bits(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((index >> q) & 1) << j))
}

/// Overwrites bits `qubits[j]` of `index` with bit `j` of `local`.
pub(crate) fn scatter_bits(index: usize, qubits: &[usize], local: usize) -> usize {
    qubits.iter().enumerate().fold(index, |acc, (j, &q)| {
        (acc & !(1 << q)) | (((local >> j) & 1) << q)
    })
}
