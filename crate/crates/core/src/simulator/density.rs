use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::simulator::matrix::CMatrix;
use crate::simulator::StateVector;

/// Tolerance for the Hermitian and unit-trace checks.
pub const DENSITY_TOL: f64 = 1e-10;
/// Smallest eigenvalue tolerated before a matrix is called non-positive.
pub const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: CMatrix,
}

impl DensityMatrix {
    /// Wraps a square matrix of power-of-two dimension; validity is checked separately.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.ncols(),
            });
        }
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        Ok(Self {
            n: dim.trailing_zeros() as usize,
            m,
        })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let m = &v * v.adjoint();
        Self {
            n: state.num_qubits(),
            m,
        }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        Self {
            n,
            m: CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Uniform average of equally sized density matrices.
    pub fn average(members: &[DensityMatrix]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty average".into()))?;
        let mut acc = CMatrix::zeros(first.m.nrows(), first.m.ncols());
        for d in members {
            if d.n != first.n {
                return Err(Error::DimensionMismatch {
                    expected: first.n,
                    found: d.n,
                });
            }
            acc += &d.m;
        }
        Ok(Self {
            n: first.n,
            m: acc / Complex64::new(members.len() as f64, 0.0),
        })
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = (&self.m - self.m.adjoint())
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("trace is {tr}, expected 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}

fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut vals: Vec<f64> = SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `Σ p_i |ψ_i⟩⟨ψ_i|`.
pub fn density_from_ensemble(members: &[(f64, StateVector)]) -> Result<DensityMatrix> {
    let first = members
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
    let n = first.1.num_qubits();
    let mut total = 0.0;
    let dim = 1usize << n;
    let mut acc = CMatrix::zeros(dim, dim);
    for (p, psi) in members {
        if *p < 0.0 {
            return Err(Error::InvalidArgument(format!("negative probability {p}")));
        }
        if psi.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: psi.num_qubits(),
            });
        }
        total += p;
        acc += DensityMatrix::from_pure(psi).m * Complex64::new(*p, 0.0);
    }
    if (total - 1.0).abs() > DENSITY_TOL {
        return Err(Error::ProbabilitySum(total));
    }
    Ok(DensityMatrix { n, m: acc })
}

/// Trace distance `½ Σ |λ_i(a − b)|`.
pub fn distance_trace(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    let diff = &a.m - &b.m;
    Ok(0.5
        * hermitian_eigenvalues(&diff)
            .iter()
            .map(|l| l.abs())
            .sum::<f64>())
}
