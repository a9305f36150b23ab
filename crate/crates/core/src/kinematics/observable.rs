use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::StateVector;
use crate::linalg::{
    degeneracy_tolerance, hermitian_eigensystem, ComplexMatrix, HermitianOperator, Projector, UnitaryMap,
};
use crate::tolerance;

/// One labelled outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub value: f64,
    pub projector: Projector,
}

/// Labelled, mutually orthogonal projectors resolving the identity.
///
/// Projectors may have any rank ≥ 1, so degenerate observables and
/// "this outcome or anything else" splits are both representable.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveDecomposition {
    dim: usize,
    outcomes: Vec<Outcome>,
}

impl ProjectiveDecomposition {
    pub fn new(outcomes: Vec<Outcome>) -> Result<Self> {
        let first = outcomes
            .first()
            .ok_or_else(|| Error::InvalidDecomposition("no outcomes".into()))?;
        let dim = first.projector.dim();

        let mut seen = HashSet::new();
        for outcome in &outcomes {
            if outcome.label.is_empty() {
                return Err(Error::InvalidDecomposition("empty outcome label".into()));
            }
            if !seen.insert(outcome.label.as_str()) {
                return Err(Error::InvalidDecomposition(format!("duplicate label `{}`", outcome.label)));
            }
            if outcome.projector.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: outcome.projector.dim(),
                });
            }
            if !outcome.value.is_finite() {
                return Err(Error::NonFinite("outcome value"));
            }
            if outcome.projector.matrix().trace().re < 0.5 {
                return Err(Error::InvalidDecomposition(format!("outcome `{}` has a zero projector", outcome.label)));
            }
        }

        for (i, a) in outcomes.iter().enumerate() {
            for b in &outcomes[i + 1..] {
                let overlap = (a.projector.matrix() * b.projector.matrix()).max_abs();
                if overlap > tolerance::ALGEBRAIC {
                    return Err(Error::InvalidDecomposition(format!(
                        "outcomes `{}` and `{}` overlap ({overlap:.3e})",
                        a.label, b.label
                    )));
                }
            }
        }

        let mut sum = ComplexMatrix::zeros(dim, dim);
        for outcome in &outcomes {
            sum = &sum + outcome.projector.matrix();
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > tolerance::ALGEBRAIC {
            return Err(Error::InvalidDecomposition(format!(
                "projectors do not sum to the identity (defect {defect:.3e})"
            )));
        }

        Ok(Self { dim, outcomes })
    }

    /// Rank-one outcomes from an orthonormal basis.
    pub fn from_basis(states: &[StateVector], labels: &[&str], values: &[f64]) -> Result<Self> {
        if states.len() != labels.len() || states.len() != values.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} states, {} labels, {} values",
                states.len(),
                labels.len(),
                values.len()
            )));
        }
        let outcomes = states
            .iter()
            .zip(labels)
            .zip(values)
            .map(|((s, &label), &value)| Outcome {
                label: label.to_string(),
                value,
                projector: Projector::onto(s),
            })
            .collect();
        Self::new(outcomes)
    }

    /// {P, 1 − P} with values 1 and 0.
    pub fn split(projector: Projector, label: &str, complement_label: &str) -> Result<Self> {
        let complement = projector.complement();
        Self::new(vec![
            Outcome {
                label: label.to_string(),
                value: 1.0,
                projector,
            },
            Outcome {
                label: complement_label.to_string(),
                value: 0.0,
                projector: complement,
            },
        ])
    }

    /// {|s⟩⟨s|, 1 − |s⟩⟨s|}.
    pub fn split_on_state(state: &StateVector, label: &str, complement_label: &str) -> Result<Self> {
        Self::split(Projector::onto(state), label, complement_label)
    }

    /// Spectral decomposition of a Hermitian operator; eigenvalues equal to
    /// within the degeneracy tolerance share one projector. Labels are the
    /// eigenvalue indices "0", "1", … in ascending order.
    pub fn from_hermitian(h: &HermitianOperator) -> Result<Self> {
        let eig = hermitian_eigensystem(h);
        let spread = eig.eigenvalues().iter().fold(0.0f64, |m, l| m.max(l.abs())).max(1.0);
        let outcomes = eig
            .clusters(degeneracy_tolerance(spread))
            .into_iter()
            .enumerate()
            .map(|(idx, cluster)| {
                let family: Vec<Vec<Complex64>> = cluster.iter().map(|&k| eig.eigenvector(k)).collect();
                let value = cluster.iter().map(|&k| eig.eigenvalues()[k]).sum::<f64>() / cluster.len() as f64;
                Ok(Outcome {
                    label: idx.to_string(),
                    value,
                    projector: Projector::onto_span(&family, h.dim())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(outcomes)
    }

    pub fn pauli_z() -> Self {
        Self::from_basis(&[StateVector::basis(2, 0), StateVector::basis(2, 1)], &["+1", "-1"], &[1.0, -1.0])
            .expect("Z basis is orthonormal")
    }

    pub fn pauli_x() -> Self {
        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("unit");
        let minus = StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).expect("unit");
        Self::from_basis(&[plus, minus], &["+1", "-1"], &[1.0, -1.0]).expect("X basis is orthonormal")
    }

    pub fn pauli_y() -> Self {
        let s = FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]).expect("unit");
        let minus = StateVector::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, -s)]).expect("unit");
        Self::from_basis(&[plus, minus], &["+1", "-1"], &[1.0, -1.0]).expect("Y basis is orthonormal")
    }

    /// Named qubit observables "X", "Y", "Z".
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "X" | "x" => Some(Self::pauli_x()),
            "Y" | "y" => Some(Self::pauli_y()),
            "Z" | "z" => Some(Self::pauli_z()),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn labels(&self) -> Vec<&str> {
        self.outcomes.iter().map(|o| o.label.as_str()).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn outcome(&self, label: &str) -> Result<&Outcome> {
        Ok(&self.outcomes[self.index_of(label)?])
    }

    /// Σ value · P as a Hermitian operator.
    pub fn operator(&self) -> HermitianOperator {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for o in &self.outcomes {
            m = &m + &o.projector.matrix().scale(Complex64::new(o.value, 0.0));
        }
        HermitianOperator::new(m).expect("real combination of projectors is Hermitian")
    }

    /// Every projector replaced by U† P U.
    pub fn heisenberg(&self, evolution: &UnitaryMap) -> Self {
        self.map_projectors(|p| p.heisenberg(evolution))
    }

    /// Every projector entrywise conjugated.
    pub fn conj(&self) -> Self {
        self.map_projectors(Projector::conj)
    }

    fn map_projectors(&self, f: impl Fn(&Projector) -> Projector) -> Self {
        Self {
            dim: self.dim,
            outcomes: self
                .outcomes
                .iter()
                .map(|o| Outcome {
                    label: o.label.clone(),
                    value: o.value,
                    projector: f(&o.projector),
                })
                .collect(),
        }
    }
}
