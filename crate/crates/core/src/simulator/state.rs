use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::pauli::{i_pow, PauliOperator, MAX_DENSE_QUBITS};
use crate::simulator::matrix::{check_targets, gather_bits, scatter_bits, CMatrix};
use crate::simulator::{DensityMatrix, SeededRng, UnitaryMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on the squared norm of a state.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn prepare_zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_width(n)?;
        if index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Accepts amplitudes whose squared norm is within tolerance of 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_width(n)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm² is {norm}, expected 1"
            )));
        }
        Ok(Self { n, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    /// Haar-random pure state.
    pub fn random(n: usize, rng: &mut SeededRng) -> Result<Self> {
        check_width(n)?;
        let amps = (0..1usize << n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        Self::normalized(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `gate` to `targets`; local qubit `j` of the gate is `targets[j]`.
    pub fn apply(&mut self, gate: &UnitaryMatrix, targets: &[usize]) -> Result<()> {
        let k = gate.num_qubits()?;
        check_targets(self.n, targets, k)?;
        let local_dim = 1usize << k;
        let m = gate.as_matrix();
        let mut scratch = vec![ZERO; local_dim];
        let target_mask: usize = targets.iter().map(|&t| 1 << t).sum();
        for base in 0..self.amps.len() {
            if base & target_mask != 0 {
                continue;
            }
            for (local, slot) in scratch.iter_mut().enumerate() {
                *slot = self.amps[scatter_bits(base, targets, local)];
            }
            for row in 0..local_dim {
                let mut acc = ZERO;
                for (col, amp) in scratch.iter().enumerate() {
                    acc += m[(row, col)] * amp;
                }
                self.amps[scatter_bits(base, targets, row)] = acc;
            }
        }
        Ok(())
    }

    /// Applies an `n`-qubit Pauli (including its tracked phase).
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        let global = i_pow(p.phase_exp());
        let mut out = vec![ZERO; self.amps.len()];
        for (b, amp) in self.amps.iter().enumerate() {
            let sign = if (b & z).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ x] = amp * global * sign;
        }
        self.amps = out;
        Ok(())
    }

    pub fn swap_qubits(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Ok(());
        }
        self.apply(&UnitaryMatrix::swap(), &[a, b])
    }

    /// Probability that `qubit` reads 1.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(b, _)| (b >> qubit) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Born-rule measurement of `qubit` in the computational basis; collapses the state.
    pub fn measure(&mut self, qubit: usize, rng: &mut SeededRng) -> Result<bool> {
        let p1 = self.probability_one(qubit)?;
        let outcome = rng.uniform() < p1;
        self.collapse(qubit, outcome)?;
        Ok(outcome)
    }

    /// Projects `qubit` onto `outcome` and renormalizes.
    pub fn collapse(&mut self, qubit: usize, outcome: bool) -> Result<()> {
        self.check_qubit(qubit)?;
        let want = usize::from(outcome);
        let mut norm = 0.0;
        for (b, a) in self.amps.iter_mut().enumerate() {
            if (b >> qubit) & 1 != want {
                *a = ZERO;
            } else {
                norm += a.norm_sqr();
            }
        }
        if norm <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "outcome {want} on qubit {qubit} has probability zero"
            )));
        }
        let scale = norm.sqrt();
        for a in &mut self.amps {
            *a /= scale;
        }
        Ok(())
    }

    /// `|amps[k]|²` for every basis index `k`.
    pub fn exact_distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal over `qubits`; outcome bit `j` is `qubits[j]`.
    pub fn marginal_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut out = vec![0.0; 1 << qubits.len()];
        for (b, a) in self.amps.iter().enumerate() {
            out[gather_bits(b, qubits)] += a.norm_sqr();
        }
        Ok(out)
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Reduced density matrix of `qubits` (local qubit `j` is `qubits[j]`).
    pub fn reduced_density(&self, qubits: &[usize]) -> Result<DensityMatrix> {
        check_targets(self.n, qubits, qubits.len())?;
        let rest: Vec<usize> = (0..self.n).filter(|q| !qubits.contains(q)).collect();
        let block = self.as_block_matrix(qubits, &rest);
        let rho = &block * block.adjoint();
        DensityMatrix::from_matrix(rho)
    }

    /// Rows indexed by the block bits, columns by the remaining bits.
    fn as_block_matrix(&self, block: &[usize], rest: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(1 << block.len(), 1 << rest.len());
        for (b, a) in self.amps.iter().enumerate() {
            m[(gather_bits(b, block), gather_bits(b, rest))] = *a;
        }
        m
    }

    /// Factors the state as `block ⊗ rest`, failing if they are entangled.
    ///
    /// The returned block state has its largest amplitude real and positive;
    /// the rest keeps its qubits in ascending order and carries the global phase.
    pub fn split_product(&self, block: &[usize], tol: f64) -> Result<(StateVector, StateVector)> {
        check_targets(self.n, block, block.len())?;
        let rest: Vec<usize> = (0..self.n).filter(|q| !block.contains(q)).collect();
        let m = self.as_block_matrix(block, &rest);
        let (mut best, mut best_norm) = ((0, 0), -1.0);
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m[(r, c)].norm();
                if v > best_norm {
                    best = (r, c);
                    best_norm = v;
                }
            }
        }
        let (r0, c0) = best;
        let col = m.column(c0);
        let col_norm = col.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let phase = col[r0] / col[r0].norm();
        let block_amps: Vec<Complex64> = col.iter().map(|a| a / (col_norm * phase)).collect();
        // rest[c] = ⟨block|column c⟩
        let rest_amps: Vec<Complex64> = (0..m.ncols())
            .map(|c| {
                block_amps
                    .iter()
                    .zip(m.column(c).iter())
                    .map(|(b, a)| b.conj() * a)
                    .sum()
            })
            .collect();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if (m[(r, c)] - block_amps[r] * rest_amps[c]).norm() > tol {
                    return Err(Error::Precondition(format!(
                        "qubits {block:?} are entangled with the rest of the register"
                    )));
                }
            }
        }
        let block_state = Self {
            n: block.len(),
            amps: block_amps,
        };
        let rest_state = if rest.is_empty() {
            Self {
                n: 0,
                amps: vec![rest_amps[0] / rest_amps[0].norm()],
            }
        } else {
            Self::normalized(rest_amps)?
        };
        Ok((block_state, rest_state))
    }

    /// Discards `block` (which must be in a product state with the rest) and
    /// replaces it with fresh `|0⟩` qubits.
    pub fn reset_block(&mut self, block: &[usize], tol: f64) -> Result<()> {
        let (_, rest) = self.split_product(block, tol)?;
        let rest_qubits: Vec<usize> = (0..self.n).filter(|q| !block.contains(q)).collect();
        let mut amps = vec![ZERO; self.amps.len()];
        for (r, a) in rest.amps.iter().enumerate() {
            amps[scatter_bits(0, &rest_qubits, r)] = *a;
        }
        self.amps = amps;
        Ok(())
    }

    /// `self ⊗ high`, with `self` on the low qubits.
    pub fn tensor(&self, high: &Self) -> Result<Self> {
        check_width(self.n + high.n)?;
        let mut amps = Vec::with_capacity(self.amps.len() * high.amps.len());
        for h in &high.amps {
            for l in &self.amps {
                amps.push(l * h);
            }
        }
        Ok(Self {
            n: self.n + high.n,
            amps,
        })
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        Ok(())
    }
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn prepare_zero_examples() {
        assert_eq!(
            StateVector::prepare_zero(1).unwrap().amplitudes(),
            &[c(1.0), c(0.0)]
        );
        assert_eq!(
            StateVector::prepare_zero(2).unwrap().amplitudes(),
            &[c(1.0), c(0.0), c(0.0), c(0.0)]
        );
        assert!((StateVector::prepare_zero(3).unwrap().norm_sqr() - 1.0).abs() < 1e-15);
        assert!(matches!(
            StateVector::prepare_zero(13),
            Err(Error::Capacity { .. })
        ));
        assert!(StateVector::prepare_zero(0).is_err());
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::prepare_zero(1).unwrap();
        s.apply(&UnitaryMatrix::hadamard(), &[0]).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        }
        assert_eq!(s.exact_distribution().len(), 2);
        for p in s.exact_distribution() {
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn x_twice_restores() {
        let mut rng = SeededRng::new(3);
        let orig = StateVector::random(2, &mut rng).unwrap();
        let mut s = orig.clone();
        s.apply(&UnitaryMatrix::pauli_x(), &[1]).unwrap();
        s.apply(&UnitaryMatrix::pauli_x(), &[1]).unwrap();
        assert!((s.fidelity(&orig).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cnot_on_control_set() {
        // control = qubit 0 set, target = qubit 1 clear → both set
        let mut s = StateVector::basis(2, 0b01).unwrap();
        s.apply(&UnitaryMatrix::cnot(), &[0, 1]).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b11).unwrap());
        let dist = s.exact_distribution();
        assert_eq!(dist, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let mut s = StateVector::prepare_zero(2).unwrap();
        assert!(matches!(
            s.apply(&UnitaryMatrix::cnot(), &[0, 0]),
            Err(Error::DuplicateTarget(0))
        ));
        assert!(matches!(
            s.apply(&UnitaryMatrix::cnot(), &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn deterministic_measurements() {
        let mut rng = SeededRng::new(0);
        let mut zero = StateVector::prepare_zero(1).unwrap();
        assert!(!zero.measure(0, &mut rng).unwrap());
        let mut one = StateVector::basis(1, 1).unwrap();
        assert!(one.measure(0, &mut rng).unwrap());
    }

    #[test]
    fn hadamard_measurement_frequency() {
        let mut rng = SeededRng::new(11);
        let mut plus = StateVector::prepare_zero(1).unwrap();
        plus.apply(&UnitaryMatrix::hadamard(), &[0]).unwrap();
        let shots = 10_000;
        let ones = (0..shots)
            .filter(|_| plus.clone().measure(0, &mut rng).unwrap())
            .count();
        let freq = ones as f64 / shots as f64;
        assert!((0.48..=0.52).contains(&freq), "frequency {freq}");
    }

    #[test]
    fn split_and_reset_product_block() {
        let mut rng = SeededRng::new(8);
        let data = StateVector::random(2, &mut rng).unwrap();
        let junk = StateVector::random(1, &mut rng).unwrap();
        let mut joint = data.tensor(&junk).unwrap();
        let (block, rest) = joint.split_product(&[2], 1e-10).unwrap();
        assert!((block.fidelity(&junk).unwrap() - 1.0).abs() < 1e-10);
        assert!((rest.fidelity(&data).unwrap() - 1.0).abs() < 1e-10);
        joint.reset_block(&[2], 1e-10).unwrap();
        let expected = data.tensor(&StateVector::prepare_zero(1).unwrap()).unwrap();
        assert!((joint.fidelity(&expected).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn split_rejects_entangled_block() {
        let mut bell = StateVector::prepare_zero(2).unwrap();
        bell.apply(&UnitaryMatrix::hadamard(), &[0]).unwrap();
        bell.apply(&UnitaryMatrix::cnot(), &[0, 1]).unwrap();
        assert!(bell.split_product(&[1], 1e-10).is_err());
    }

    #[test]
    fn pauli_fast_path_matches_matrix() {
        let mut rng = SeededRng::new(21);
        let psi = StateVector::random(3, &mut rng).unwrap();
        for p in PauliOperator::enumerate(3) {
            let p = p.with_phase(1);
            let mut fast = psi.clone();
            fast.apply_pauli(&p).unwrap();
            let mut slow = psi.clone();
            slow.apply(&p.to_matrix().unwrap(), &[0, 1, 2]).unwrap();
            let diff: f64 = fast
                .amplitudes()
                .iter()
                .zip(slow.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn norm_preserved_under_random_unitaries() {
        let mut rng = SeededRng::new(99);
        let mut s = StateVector::random(4, &mut rng).unwrap();
        for step in 0..40 {
            let u = UnitaryMatrix::haar_random(4, &mut rng);
            let a = step % 4;
            let b = (step + 1 + step / 4) % 4;
            let b = if a == b { (b + 1) % 4 } else { b };
            s.apply(&u, &[a, b]).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}
