use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::StateVector;
use crate::linalg::{vector, ComplexMatrix};
use crate::tolerance;

/// Square matrix equal to its own adjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Accepts `matrix` if it is Hermitian to 1e-12 (relative to its largest
    /// entry when that exceeds 1) and stores the exactly symmetrized copy.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let defect = matrix.hermitian_defect();
        if defect > tolerance::CONSTRUCTION * matrix.max_abs().max(1.0) {
            return Err(Error::NotHermitian { max_asymmetry: defect });
        }
        let symmetric = (&matrix + &matrix.adjoint()).scale(Complex64::new(0.5, 0.0));
        Ok(Self { matrix: symmetric })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::from_real_diagonal(values),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.max_abs() == 0.0
    }

    /// Entrywise complex conjugate (the time-reversed Hamiltonian).
    pub fn conj(&self) -> Self {
        Self {
            matrix: self.matrix.conj(),
        }
    }
}

impl TryFrom<ComplexMatrix> for HermitianOperator {
    type Error = Error;

    fn try_from(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix)
    }
}

impl From<HermitianOperator> for ComplexMatrix {
    fn from(op: HermitianOperator) -> Self {
        op.matrix
    }
}

/// Square matrix with U·U† = 1 to 1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap {
    matrix: ComplexMatrix,
}

impl UnitaryMap {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let deviation = unitarity_defect(&matrix);
        if deviation > tolerance::ALGEBRAIC {
            return Err(Error::NotUnitary { max_deviation: deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self` after `first`: the map `self · first`.
    pub fn after(&self, first: &UnitaryMap) -> Self {
        Self {
            matrix: &self.matrix * &first.matrix,
        }
    }

    pub fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        self.matrix.apply(amplitudes)
    }
}

/// Max-entry deviation of U·U† from the identity.
pub fn unitarity_defect(matrix: &ComplexMatrix) -> f64 {
    (matrix * &matrix.adjoint()).max_abs_diff(&ComplexMatrix::identity(matrix.rows()))
}

/// Orthogonal projector: Hermitian and idempotent to 1e-10.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Projector {
    matrix: ComplexMatrix,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let asymmetry = matrix.hermitian_defect();
        if asymmetry > tolerance::ALGEBRAIC {
            return Err(Error::NotHermitian { max_asymmetry: asymmetry });
        }
        let defect = (&matrix * &matrix).max_abs_diff(&matrix);
        if defect > tolerance::ALGEBRAIC {
            return Err(Error::NotProjector { defect });
        }
        Ok(Self { matrix })
    }

    /// Rank-one projector |v⟩⟨v| onto a unit vector.
    pub fn onto(state: &StateVector) -> Self {
        Self {
            matrix: ComplexMatrix::outer(state.amplitudes(), state.amplitudes()),
        }
    }

    /// Projector onto the span of an orthonormal family.
    pub fn onto_span(family: &[Vec<Complex64>], dim: usize) -> Result<Self> {
        if vector::orthonormality_defect(family) > tolerance::ALGEBRAIC {
            return Err(Error::InvalidBasis("family is not orthonormal".into()));
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for v in family {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            m = &m + &ComplexMatrix::outer(v, v);
        }
        Ok(Self { matrix: m })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// 1 − P.
    pub fn complement(&self) -> Self {
        Self {
            matrix: &ComplexMatrix::identity(self.dim()) - &self.matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    /// P|v⟩ on raw amplitudes.
    pub fn project(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        self.matrix.apply(amplitudes)
    }

    /// ⟨v|P|v⟩ on raw amplitudes.
    pub fn expectation(&self, amplitudes: &[Complex64]) -> f64 {
        vector::norm_sqr(&self.project(amplitudes))
    }

    /// Heisenberg-picture conjugation U† P U.
    pub fn heisenberg(&self, evolution: &UnitaryMap) -> Self {
        let u = evolution.matrix();
        Self {
            matrix: &(&u.adjoint() * &self.matrix) * u,
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            matrix: self.matrix.conj(),
        }
    }
}

impl TryFrom<ComplexMatrix> for Projector {
    type Error = Error;

    fn try_from(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix)
    }
}

impl From<Projector> for ComplexMatrix {
    fn from(p: Projector) -> Self {
        p.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_rejection_reports_asymmetry() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.0)]]).unwrap();
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { max_asymmetry }) => assert!((max_asymmetry - 0.5).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn projector_rejects_non_idempotent() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        assert!(matches!(Projector::new(m), Err(Error::NotProjector { .. })));
    }

    #[test]
    fn projector_rank_and_complement() {
        let p = Projector::new(ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.complement().rank(), 1);
    }

    #[test]
    fn unitary_rejects_scaled_identity() {
        let m = ComplexMatrix::identity(2).scale(c(1.1, 0.0));
        assert!(matches!(UnitaryMap::new(m), Err(Error::NotUnitary { .. })));
    }
}
