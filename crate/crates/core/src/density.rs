//! Qubit density matrices and the entanglement and fidelity measures on them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity and unit trace.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Density operator on `qubits` polarization qubits.
///
/// Basis index bit `k` (most significant first) is the polarization of party `k`,
/// H = 0 and V = 1, so for two qubits the order is HH, HV, VH, VV.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity and trace.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || matrix.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::Shape(format!(
                "density matrix must be square with power-of-two side, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm > DENSITY_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "density matrix is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace is {tr}"
            )));
        }
        Ok(DensityMatrix {
            qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    /// `|psi><psi|` for a normalized `psi`.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint())
    }

    /// `I / 2^n`
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1 << qubits;
        DensityMatrix {
            qubits,
            matrix: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    /// `p |psi><psi| + (1 - p) I / 2^n`
    pub fn werner(psi: &[Complex64], p: f64) -> Result<Self> {
        let pure = Self::from_pure(psi)?;
        let mixed = Self::maximally_mixed(pure.qubits);
        Self::new(
            pure.matrix * Complex64::new(p, 0.0) + mixed.matrix * Complex64::new(1.0 - p, 0.0),
        )
    }

    /// Unit-trace Hermitian part of a non-negative operator, e.g. an unnormalized projection.
    pub(crate) fn from_unnormalized(matrix: DMatrix<Complex64>) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5 / tr, 0.0);
        Self::new(herm)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.eigenvalues().first().is_none_or(|&e| e >= -tol)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `<target| rho |target>` for a normalized pure target.
    pub fn fidelity(&self, target: &[Complex64]) -> f64 {
        let v = DVector::from_column_slice(target);
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    /// Wootters concurrence of a two-qubit state.
    ///
    /// With `W` the eigenvectors of ρ scaled by the square roots of their eigenvalues,
    /// the λ's are the singular values of `Wᵀ (σ_y⊗σ_y) W`. Eigenvalues below
    /// `1e-12` are treated as zero so rank-deficient states stay exact.
    pub fn concurrence(&self) -> Result<f64> {
        if self.qubits != 2 {
            return Err(Error::InvalidParameter(format!(
                "concurrence needs two qubits, got {}",
                self.qubits
            )));
        }
        let eig = SymmetricEigen::new(self.matrix.clone());
        let scale = DMatrix::from_diagonal(&DVector::from_iterator(
            4,
            eig.eigenvalues.iter().map(|&p| {
                let p = if p < 1e-12 { 0.0 } else { p };
                Complex64::new(p.sqrt(), 0.0)
            }),
        ));
        let w = &eig.eigenvectors * scale;
        let tau = w.transpose() * spin_flip() * &w;
        let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
        lambdas.sort_by(|a, b| b.total_cmp(a));
        Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
    }

    /// `½ Σ |eig(ρ - σ)|`
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        0.5 * hermitian_eigenvalues(&diff)
            .iter()
            .map(|e| e.abs())
            .sum::<f64>()
    }

    /// Nearest physical state by eigenvalue clipping: negative eigenvalues are set to zero
    /// and the trace is renormalized.
    pub fn project_physical(matrix: &DMatrix<Complex64>) -> Result<Self> {
        let herm = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&e| e.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            clipped.len(),
            clipped.iter().map(|&e| Complex64::new(e / total, 0.0)),
        ));
        let v = &eig.eigenvectors;
        let rho = v * d * v.adjoint();
        let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        Self::new(rho)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `σ_y ⊗ σ_y`
fn spin_flip() -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(4, 4, ZERO);
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// Free-function form of [`DensityMatrix::fidelity`].
pub fn fidelity(rho: &DensityMatrix, target: &[Complex64]) -> f64 {
    rho.fidelity(target)
}

/// Free-function form of [`DensityMatrix::concurrence`].
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    rho.concurrence()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inputs::BellState;

    #[test]
    fn bell_state_fidelity_and_concurrence() {
        for b in BellState::ALL {
            let rho = DensityMatrix::from_pure(&b.qubit_vector()).unwrap();
            assert!((rho.fidelity(&b.qubit_vector()) - 1.0).abs() < 1e-12);
            assert!((rho.concurrence().unwrap() - 1.0).abs() < 1e-12, "{b}");
        }
    }

    #[test]
    fn maximally_mixed_has_quarter_fidelity_and_no_entanglement() {
        let rho = DensityMatrix::maximally_mixed(2);
        for b in BellState::ALL {
            assert!((rho.fidelity(&b.qubit_vector()) - 0.25).abs() < 1e-15);
        }
        assert!(rho.concurrence().unwrap().abs() < 1e-12);
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_and_bad_trace() {
        let mut m = DMatrix::identity(4, 4) * Complex64::new(0.25, 0.0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::new(DMatrix::identity(4, 4)).is_err());
        assert!(DensityMatrix::new(DMatrix::identity(3, 3) / Complex64::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn clipping_projects_to_nearest_physical_state() {
        let mut m = DMatrix::from_element(4, 4, ZERO);
        m[(0, 0)] = Complex64::new(0.7, 0.0);
        m[(3, 3)] = Complex64::new(0.4, 0.0);
        m[(1, 1)] = Complex64::new(-0.1, 0.0);
        let rho = DensityMatrix::project_physical(&m).unwrap();
        assert!(rho.is_positive_semidefinite(1e-12));
        assert!((rho.get(0, 0).re - 0.7 / 1.1).abs() < 1e-12);
        assert!(rho.get(1, 1).re.abs() < 1e-12);
    }

    #[test]
    fn trace_distance_between_orthogonal_states_is_one() {
        let a = DensityMatrix::from_pure(&BellState::PhiPlus.qubit_vector()).unwrap();
        let b = DensityMatrix::from_pure(&BellState::PsiMinus.qubit_vector()).unwrap();
        assert!((a.trace_distance(&b) - 1.0).abs() < 1e-12);
        assert!(a.trace_distance(&a) < 1e-12);
    }

    #[test]
    fn concurrence_requires_two_qubits() {
        assert!(DensityMatrix::maximally_mixed(3).concurrence().is_err());
    }
}
