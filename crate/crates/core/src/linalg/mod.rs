//! Dense complex linear algebra for small Hilbert spaces.

mod eigen;
mod matrix;
mod operator;
mod schmidt;
pub mod vector;

pub use eigen::{degeneracy_tolerance, hermitian_eigensystem, unitary_exponential, Eigensystem};
pub use matrix::ComplexMatrix;
pub use operator::{unitarity_defect, HermitianOperator, Projector, UnitaryMap};
pub use schmidt::{decompose_amplitudes, SchmidtDecomposition, NEGLIGIBLE_COEFFICIENT};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::StateVector;
use crate::pointer::JointState;
use crate::tolerance;

/// u ⊗ v, with amplitude (j, k) stored at index j·dim(v) + k.
pub fn tensor_product(u: &StateVector, v: &StateVector) -> StateVector {
    let amplitudes: Vec<Complex64> = u
        .amplitudes()
        .iter()
        .flat_map(|&a| v.amplitudes().iter().map(move |&b| a * b))
        .collect();
    StateVector::from_unit_unchecked(amplitudes)
}

/// Validate `matrix` as a projector and apply it: returns (P|s⟩, ⟨s|P|s⟩).
pub fn apply_projector(matrix: &ComplexMatrix, state: &StateVector) -> Result<(Vec<Complex64>, f64)> {
    let projector = Projector::new(matrix.clone())?;
    if projector.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: projector.dim(),
            found: state.dim(),
        });
    }
    let projected = projector.project(state.amplitudes());
    let weight = vector::norm_sqr(&projected);
    if weight > 1.0 + tolerance::CONSTRUCTION {
        return Err(Error::ToleranceBreach(format!("projector weight {weight} exceeds 1")));
    }
    Ok((projected, weight.min(1.0)))
}

/// Schmidt decomposition of a premeasurement joint state.
pub fn schmidt_decompose(joint: &JointState) -> SchmidtDecomposition {
    decompose_amplitudes(&joint.amplitudes())
}
