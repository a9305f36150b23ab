//! States, projective observables, Born statistics, Lüders collapse and
//! Hamiltonian evolution.
//!
//! Every state returned from this module carries the canonical global phase
//! (first significant amplitude real-positive).

mod distribution;
mod observable;
mod state;

pub use distribution::{clamp_probability, OutcomeDistribution};
pub use observable::{Outcome, ProjectiveDecomposition};
pub use state::StateVector;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{unitary_exponential, vector, HermitianOperator};
use crate::tolerance;

/// The eigenstate for a rank-one outcome.
pub fn prepare_eigenstate(obs: &ProjectiveDecomposition, label: &str) -> Result<StateVector> {
    let outcome = obs.outcome(label)?;
    let rank = outcome.projector.rank();
    if rank != 1 {
        return Err(Error::AmbiguousPreparation {
            label: label.to_string(),
            rank,
        });
    }
    // For P = |v⟩⟨v| every column is v·conj(v_j); take the heaviest one.
    let m = outcome.projector.matrix();
    let j = (0..obs.dim())
        .max_by(|&a, &b| m[(a, a)].re.total_cmp(&m[(b, b)].re))
        .expect("nonempty");
    Ok(StateVector::normalized(m.column(j))?.canonical())
}

/// P(k) = ⟨s|P_k|s⟩ for every outcome.
pub fn born_distribution(state: &StateVector, obs: &ProjectiveDecomposition) -> Result<OutcomeDistribution> {
    check_dims(obs.dim(), state.dim())?;
    let raw: Vec<f64> = obs
        .outcomes()
        .iter()
        .map(|o| o.projector.expectation(state.amplitudes()))
        .collect();
    OutcomeDistribution::from_raw(&obs.labels(), &raw)
}

/// Post-measurement state P_k|s⟩ / ‖P_k|s⟩‖.
pub fn lueders_collapse(state: &StateVector, obs: &ProjectiveDecomposition, label: &str) -> Result<StateVector> {
    check_dims(obs.dim(), state.dim())?;
    let projected = obs.outcome(label)?.projector.project(state.amplitudes());
    let probability = vector::norm_sqr(&projected);
    if probability <= tolerance::ZERO_PROBABILITY {
        return Err(Error::ZeroProbability {
            label: label.to_string(),
            probability,
        });
    }
    let scaled = vector::scale(&projected, Complex64::new(1.0 / probability.sqrt(), 0.0));
    Ok(StateVector::from_unit_unchecked(scaled).canonical())
}

/// exp(−iH·duration)|s⟩.
pub fn evolve(state: &StateVector, h: &HermitianOperator, duration: f64) -> Result<StateVector> {
    check_dims(h.dim(), state.dim())?;
    let u = unitary_exponential(h, duration)?;
    let evolved = u.apply(state.amplitudes());
    let norm = vector::norm(&evolved);
    if (norm - 1.0).abs() > tolerance::ALGEBRAIC {
        return Err(Error::ToleranceBreach(format!("evolved norm {norm}")));
    }
    Ok(StateVector::from_unit_unchecked(evolved).canonical())
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
