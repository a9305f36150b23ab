//! Measurement contexts: preparation at t₁, an optional intermediate
//! observable at t, and a post-selected outcome at t₂, with a constant
//! Hamiltonian acting in between.

mod abl;
mod chain;
mod gap;
mod reality;
mod symmetry;

pub use abl::{abl_distribution, abl_weights, born_context_distribution, picture_consistency_check, AblWeights};
pub use chain::{sample_chain, ChainSampleReport, CHAIN_BLOCK};
pub use gap::{total_probability_gap, ProbabilityGap};
pub use reality::{abl_element_of_reality, element_of_reality, ElementOfReality};
pub use symmetry::{interchange_endpoints, time_reverse_context, ReversedContext};

use crate::error::{Error, Result};
use crate::kinematics::{ProjectiveDecomposition, StateVector};
use crate::linalg::{unitary_exponential, HermitianOperator, UnitaryMap};

#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub state: StateVector,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intermediate {
    pub observable: ProjectiveDecomposition,
    pub time: f64,
    /// False when C is only contemplated (an A→B context read counterfactually).
    pub performed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    pub observable: ProjectiveDecomposition,
    pub label: String,
    pub time: f64,
}

/// How ABL output for a context is to be read. Metadata only: the numbers
/// are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    /// C is actually measured at t (A→C→B).
    Subjective,
    /// C is not measured (A→B); the ABL value is counterfactual.
    Counterfactual,
}

impl Reading {
    pub fn as_str(self) -> &'static str {
        match self {
            Reading::Subjective => "subjective",
            Reading::Counterfactual => "counterfactual/objective",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    preparation: Preparation,
    intermediate: Option<Intermediate>,
    postselection: PostSelection,
    hamiltonian: HermitianOperator,
}

impl Context {
    pub fn new(
        preparation: Preparation,
        intermediate: Option<Intermediate>,
        postselection: PostSelection,
        hamiltonian: HermitianOperator,
    ) -> Result<Self> {
        let dim = preparation.state.dim();
        let mut times = vec![preparation.time];
        if let Some(mid) = &intermediate {
            check_dim(dim, mid.observable.dim())?;
            times.push(mid.time);
        }
        times.push(postselection.time);
        check_dim(dim, postselection.observable.dim())?;
        check_dim(dim, hamiltonian.dim())?;
        postselection.observable.index_of(&postselection.label)?;

        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidContext("non-finite time".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidContext(format!("times must increase strictly, got {times:?}")));
        }
        Ok(Self {
            preparation,
            intermediate,
            postselection,
            hamiltonian,
        })
    }

    /// A→C→B context with H = 0 at times 0, ½, 1.
    pub fn static_abc(
        prepared: StateVector,
        intermediate: ProjectiveDecomposition,
        post_observable: ProjectiveDecomposition,
        post_label: &str,
    ) -> Result<Self> {
        let dim = prepared.dim();
        Self::new(
            Preparation { state: prepared, time: 0.0 },
            Some(Intermediate {
                observable: intermediate,
                time: 0.5,
                performed: true,
            }),
            PostSelection {
                observable: post_observable,
                label: post_label.to_string(),
                time: 1.0,
            },
            HermitianOperator::zero(dim),
        )
    }

    pub fn dim(&self) -> usize {
        self.preparation.state.dim()
    }

    pub fn preparation(&self) -> &Preparation {
        &self.preparation
    }

    pub fn intermediate(&self) -> Option<&Intermediate> {
        self.intermediate.as_ref()
    }

    pub fn postselection(&self) -> &PostSelection {
        &self.postselection
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn reading(&self) -> Reading {
        match &self.intermediate {
            Some(mid) if mid.performed => Reading::Subjective,
            _ => Reading::Counterfactual,
        }
    }

    /// Same context with the post-selected label replaced.
    pub fn with_post_label(&self, label: &str) -> Result<Self> {
        let mut ctx = self.clone();
        ctx.postselection.observable.index_of(label)?;
        ctx.postselection.label = label.to_string();
        Ok(ctx)
    }

    pub(crate) fn require_intermediate(&self) -> Result<&Intermediate> {
        self.intermediate
            .as_ref()
            .ok_or_else(|| Error::InvalidContext("context has no intermediate observable".into()))
    }

    /// Evolution over a time span under the context Hamiltonian.
    pub(crate) fn evolution(&self, duration: f64) -> Result<UnitaryMap> {
        unitary_exponential(&self.hamiltonian, duration)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unordered_times() {
        let z = ProjectiveDecomposition::pauli_z();
        let err = Context::new(
            Preparation { state: StateVector::basis(2, 0), time: 1.0 },
            Some(Intermediate { observable: z.clone(), time: 0.5, performed: true }),
            PostSelection { observable: z, label: "+1".into(), time: 2.0 },
            HermitianOperator::zero(2),
        );
        assert!(matches!(err, Err(Error::InvalidContext(_))));
    }

    #[test]
    fn rejects_unknown_post_label_and_dims() {
        let z = ProjectiveDecomposition::pauli_z();
        assert!(Context::static_abc(StateVector::basis(2, 0), z.clone(), z.clone(), "0").is_err());
        assert!(matches!(
            Context::static_abc(StateVector::basis(3, 0), z.clone(), z, "+1"),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reading_tracks_performed_flag() {
        let z = ProjectiveDecomposition::pauli_z();
        let mut ctx = Context::static_abc(StateVector::basis(2, 0), z.clone(), z, "+1").unwrap();
        assert_eq!(ctx.reading(), Reading::Subjective);
        ctx.intermediate.as_mut().unwrap().performed = false;
        assert_eq!(ctx.reading(), Reading::Counterfactual);
    }
}
