use crate::context::{abl_distribution, Context};
use crate::error::{Error, Result};
use crate::kinematics::{born_distribution, evolve, OutcomeDistribution, ProjectiveDecomposition, StateVector};
use crate::linalg::HermitianOperator;
use crate::tolerance;

/// An outcome predicted with probability one (within 1e-9).
#[derive(Debug, Clone, PartialEq)]
pub struct ElementOfReality {
    pub observable: ProjectiveDecomposition,
    pub label: String,
    pub probability: f64,
    pub certified: bool,
}

impl ElementOfReality {
    fn from_distribution(observable: &ProjectiveDecomposition, dist: &OutcomeDistribution) -> Option<Self> {
        let label = dist.mode();
        let probability = dist.probability(label).ok()?;
        (probability >= 1.0 - tolerance::CERTAINTY).then(|| Self {
            observable: observable.clone(),
            label: label.to_string(),
            probability,
            certified: true,
        })
    }
}

/// Label of the outcome "the system is in |ψ(t)⟩" for the evolved-state projector.
pub const EVOLVED_STATE_LABEL: &str = "1";
pub const EVOLVED_STATE_COMPLEMENT: &str = "0";

/// Predict with certainty at time `t` from a preparation at `prepared_at`.
///
/// Without an observable the projector P_ψ(t) = |ψ(t)⟩⟨ψ(t)| is returned,
/// certain by construction. With one, the outcome whose Born probability
/// at `t` reaches 1 − 1e-9 is returned, or `None`.
pub fn element_of_reality(
    prepared: &StateVector,
    prepared_at: f64,
    hamiltonian: &HermitianOperator,
    t: f64,
    observable: Option<&ProjectiveDecomposition>,
) -> Result<Option<ElementOfReality>> {
    if t.is_nan() || prepared_at.is_nan() || t < prepared_at {
        return Err(Error::InvalidArgument(format!(
            "time {t} precedes the preparation at {prepared_at}"
        )));
    }
    let psi_t = evolve(prepared, hamiltonian, t - prepared_at)?;
    match observable {
        None => {
            let projector =
                ProjectiveDecomposition::split_on_state(&psi_t, EVOLVED_STATE_LABEL, EVOLVED_STATE_COMPLEMENT)?;
            let probability = born_distribution(&psi_t, &projector)?.probability(EVOLVED_STATE_LABEL)?;
            Ok(Some(ElementOfReality {
                observable: projector,
                label: EVOLVED_STATE_LABEL.to_string(),
                probability,
                certified: probability >= 1.0 - tolerance::CERTAINTY,
            }))
        }
        Some(obs) => {
            let dist = born_distribution(&psi_t, obs)?;
            Ok(ElementOfReality::from_distribution(obs, &dist))
        }
    }
}

/// The intermediate outcome that the ABL rule makes certain, if any.
pub fn abl_element_of_reality(ctx: &Context) -> Result<Option<ElementOfReality>> {
    let mid = ctx.require_intermediate()?;
    let dist = abl_distribution(ctx)?;
    Ok(ElementOfReality::from_distribution(&mid.observable, &dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Projector;
    use num_complex::Complex64;

    #[test]
    fn evolved_state_projector_is_certified() {
        let h = HermitianOperator::new(
            crate::linalg::ComplexMatrix::from_rows(&[
                vec![Complex64::new(0.3, 0.0), Complex64::new(0.2, -0.7)],
                vec![Complex64::new(0.2, 0.7), Complex64::new(-1.1, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let e0 = StateVector::basis(2, 0);
        let eor = element_of_reality(&e0, 0.5, &h, 2.0, None).unwrap().unwrap();
        assert!(eor.certified);
        assert!((eor.probability - 1.0).abs() < 1e-12);
        let expected = Projector::onto(&evolve(&e0, &h, 1.5).unwrap());
        let got = &eor.observable.outcome("1").unwrap().projector;
        assert!(got.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    #[test]
    fn x_outcomes_of_e0_are_not_elements() {
        let got = element_of_reality(
            &StateVector::basis(2, 0),
            0.0,
            &HermitianOperator::zero(2),
            1.0,
            Some(&ProjectiveDecomposition::pauli_x()),
        )
        .unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn z_outcome_of_e0_is_element() {
        let got = element_of_reality(
            &StateVector::basis(2, 0),
            0.0,
            &HermitianOperator::zero(2),
            1.0,
            Some(&ProjectiveDecomposition::pauli_z()),
        )
        .unwrap()
        .unwrap();
        assert_eq!(got.label, "+1");
    }

    #[test]
    fn time_before_preparation_rejected() {
        let r = element_of_reality(&StateVector::basis(2, 0), 1.0, &HermitianOperator::zero(2), 0.0, None);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn three_box_box_one_is_abl_certain() {
        let a = StateVector::normalized(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        let b = StateVector::normalized([1.0, 1.0, -1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap();
        let c = ProjectiveDecomposition::split_on_state(&StateVector::basis(3, 0), "box-1", "not-box-1").unwrap();
        let post = ProjectiveDecomposition::split_on_state(&b, "b", "not-b").unwrap();
        let ctx = Context::static_abc(a, c, post, "b").unwrap();
        let eor = abl_element_of_reality(&ctx).unwrap().unwrap();
        assert_eq!(eor.label, "box-1");
        assert!(eor.certified);
    }
}
