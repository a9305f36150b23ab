use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::StateVector;
use crate::linalg::{schmidt_decompose, vector, ComplexMatrix, SchmidtDecomposition};
use crate::tolerance;

/// A system ⊗ apparatus pure state expressed in declared orthonormal bases.
///
/// Entry (k, l) of the coefficient matrix is the amplitude on
/// |a_k⟩ ⊗ |α_l⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    system_dim: usize,
    apparatus_dim: usize,
    coefficients: ComplexMatrix,
    system_basis: Vec<StateVector>,
    apparatus_basis: Vec<StateVector>,
}

impl JointState {
    pub fn new(
        coefficients: ComplexMatrix,
        system_basis: Vec<StateVector>,
        apparatus_basis: Vec<StateVector>,
    ) -> Result<Self> {
        let system_dim = common_dim(&system_basis, "system")?;
        let apparatus_dim = common_dim(&apparatus_basis, "apparatus")?;
        if coefficients.rows() != system_basis.len() {
            return Err(Error::DimensionMismatch {
                expected: system_basis.len(),
                found: coefficients.rows(),
            });
        }
        if coefficients.cols() != apparatus_basis.len() {
            return Err(Error::DimensionMismatch {
                expected: apparatus_basis.len(),
                found: coefficients.cols(),
            });
        }
        let norm = coefficients.frobenius_norm();
        if (norm - 1.0).abs() > tolerance::CONSTRUCTION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            system_dim,
            apparatus_dim,
            coefficients,
            system_basis,
            apparatus_basis,
        })
    }

    /// A joint state given directly by its system × apparatus amplitude matrix.
    pub fn from_amplitudes(amplitudes: ComplexMatrix) -> Result<Self> {
        let system = (0..amplitudes.rows()).map(|k| StateVector::basis(amplitudes.rows(), k)).collect();
        let apparatus = (0..amplitudes.cols()).map(|k| StateVector::basis(amplitudes.cols(), k)).collect();
        Self::new(amplitudes, system, apparatus)
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus_dim
    }

    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    pub fn system_basis(&self) -> &[StateVector] {
        &self.system_basis
    }

    pub fn apparatus_basis(&self) -> &[StateVector] {
        &self.apparatus_basis
    }

    /// Amplitudes in the standard product basis, as a system × apparatus matrix.
    pub fn amplitudes(&self) -> ComplexMatrix {
        let mut t = ComplexMatrix::zeros(self.system_dim, self.apparatus_dim);
        for (k, a) in self.system_basis.iter().enumerate() {
            for (l, alpha) in self.apparatus_basis.iter().enumerate() {
                let c = self.coefficients[(k, l)];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (i, ai) in a.amplitudes().iter().enumerate() {
                    for (j, aj) in alpha.amplitudes().iter().enumerate() {
                        t[(i, j)] += c * ai * aj;
                    }
                }
            }
        }
        t
    }

    /// |χ⟩ as a vector of the product space (system index major).
    pub fn to_state_vector(&self) -> StateVector {
        StateVector::from_unit_unchecked(self.amplitudes().as_slice().to_vec())
    }
}

fn common_dim(basis: &[StateVector], which: &str) -> Result<usize> {
    let Some(first) = basis.first() else {
        return Err(Error::InvalidBasis(format!("{which} basis is empty")));
    };
    let dim = first.dim();
    if let Some(bad) = basis.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    if basis.len() > dim {
        return Err(Error::InvalidBasis(format!(
            "{which} basis has {} vectors in dimension {dim}",
            basis.len()
        )));
    }
    check_orthonormal(basis, which)?;
    Ok(dim)
}

fn check_orthonormal(basis: &[StateVector], which: &str) -> Result<()> {
    let family: Vec<Vec<Complex64>> = basis.iter().map(|s| s.amplitudes().to_vec()).collect();
    let defect = vector::orthonormality_defect(&family);
    if defect > tolerance::ALGEBRAIC {
        return Err(Error::InvalidBasis(format!(
            "{which} basis is not orthonormal (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// |χ⟩ = Σ_k c_k |a_k⟩ ⊗ |α_k⟩.
pub fn premeasurement_joint(
    coeffs: &[Complex64],
    system_basis: &[StateVector],
    apparatus_basis: &[StateVector],
) -> Result<JointState> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("no coefficients".into()));
    }
    let norm = vector::norm(coeffs);
    if (norm - 1.0).abs() > tolerance::CONSTRUCTION {
        return Err(Error::NotNormalized { norm });
    }
    for (basis, which) in [(system_basis, "system"), (apparatus_basis, "apparatus")] {
        if basis.len() < coeffs.len() {
            return Err(Error::InvalidBasis(format!(
                "{which} basis has {} vectors for {} coefficients",
                basis.len(),
                coeffs.len()
            )));
        }
    }
    let mut m = ComplexMatrix::zeros(system_basis.len(), apparatus_basis.len());
    for (k, &c) in coeffs.iter().enumerate() {
        m[(k, k)] = c;
    }
    JointState::new(m, system_basis.to_vec(), apparatus_basis.to_vec())
}

/// |χ⟩ re-expanded over a new apparatus basis: Σ_l c′_l |b_l⟩ ⊗ |β_l⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct RebasedDecomposition {
    pub new_apparatus_basis: Vec<StateVector>,
    pub coefficients: Vec<f64>,
    /// `None` where c′_l ≤ 1e-12.
    pub relative_states: Vec<Option<StateVector>>,
    pub orthogonality_score: f64,
}

impl RebasedDecomposition {
    /// Σ_l c′_l b_l ⊗ β_l as a system × apparatus amplitude matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let Some(b0) = self.relative_states.iter().flatten().next() else {
            return ComplexMatrix::zeros(0, 0);
        };
        let mut t = ComplexMatrix::zeros(b0.dim(), self.new_apparatus_basis[0].dim());
        for ((c, b), beta) in self.coefficients.iter().zip(&self.relative_states).zip(&self.new_apparatus_basis) {
            if let Some(b) = b {
                let term = ComplexMatrix::outer(b.amplitudes(), &vector::conj(beta.amplitudes()));
                t = &t + &term.scale(Complex64::new(*c, 0.0));
            }
        }
        t
    }

    /// Largest overlap |⟨b_j|b_l⟩| between distinct relative states with weight.
    pub fn max_overlap(&self) -> f64 {
        let kept: Vec<&StateVector> = self.relative_states.iter().flatten().collect();
        let mut worst = 0.0f64;
        for (j, u) in kept.iter().enumerate() {
            for v in &kept[j + 1..] {
                worst = worst.max(u.inner(v).norm());
            }
        }
        worst
    }
}

/// Contract the apparatus factor of |χ⟩ with each ⟨β_l|.
pub fn rebase_joint(joint: &JointState, new_basis: &[StateVector]) -> Result<RebasedDecomposition> {
    if new_basis.len() != joint.apparatus_dim() {
        return Err(Error::InvalidBasis(format!(
            "new basis has {} vectors, apparatus dimension is {}",
            new_basis.len(),
            joint.apparatus_dim()
        )));
    }
    let dim = common_dim(new_basis, "new apparatus")?;
    if dim != joint.apparatus_dim() {
        return Err(Error::DimensionMismatch {
            expected: joint.apparatus_dim(),
            found: dim,
        });
    }

    let t = joint.amplitudes();
    let mut coefficients = Vec::with_capacity(new_basis.len());
    let mut relative_states = Vec::with_capacity(new_basis.len());
    for beta in new_basis {
        let v = t.apply(&vector::conj(beta.amplitudes()));
        let c = vector::norm(&v);
        coefficients.push(c);
        relative_states.push(
            (c > tolerance::ZERO_PROBABILITY)
                .then(|| StateVector::from_unit_unchecked(vector::scale(&v, Complex64::new(1.0 / c, 0.0)))),
        );
    }
    let total: f64 = coefficients.iter().map(|c| c * c).sum();
    if (total - 1.0).abs() > tolerance::PROBABILITY_SUM {
        return Err(Error::ToleranceBreach(format!("rebased weights sum to {total}")));
    }
    let mut out = RebasedDecomposition {
        new_apparatus_basis: new_basis.to_vec(),
        coefficients,
        relative_states,
        orthogonality_score: 0.0,
    };
    out.orthogonality_score = (1.0 - out.max_overlap()).clamp(0.0, 1.0);
    Ok(out)
}

/// The Schmidt decomposition, checked to have mutually orthogonal relative
/// states in its apparatus basis.
pub fn pointer_basis_select(joint: &JointState) -> Result<SchmidtDecomposition> {
    let schmidt = schmidt_decompose(joint);
    let rebased = rebase_joint(joint, &schmidt.apparatus_basis())?;
    if rebased.orthogonality_score < 1.0 - tolerance::ALGEBRAIC {
        return Err(Error::ToleranceBreach(format!(
            "Schmidt apparatus basis has orthogonality score {}",
            rebased.orthogonality_score
        )));
    }
    Ok(schmidt)
}
