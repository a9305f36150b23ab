use num_complex::Complex64;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::kinematics::{born_distribution, prepare_eigenstate, OutcomeDistribution, StateVector};
use crate::linalg::{unitary_exponential, vector, Projector};
use crate::tolerance;

/// Unnormalized ABL weights w_i = ‖P_b U(t₂−t) P_i U(t−t₁) |a⟩‖².
///
/// For a rank-one post-selection projector this is |⟨b|c_i⟩⟨c_i|a⟩|² with
/// the Schrödinger-picture kets; the sum over i is the probability of
/// finding b after C has been measured.
#[derive(Debug, Clone, PartialEq)]
pub struct AblWeights {
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
}

impl AblWeights {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn normalize(&self) -> Result<OutcomeDistribution> {
        let total = self.total();
        if total <= tolerance::ABL_DENOMINATOR {
            return Err(Error::VanishingDenominator { denominator: total });
        }
        let labels: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        let raw: Vec<f64> = self.weights.iter().map(|w| w / total).collect();
        OutcomeDistribution::from_raw(&labels, &raw)
    }
}

pub fn abl_weights(ctx: &Context) -> Result<AblWeights> {
    let mid = ctx.require_intermediate()?;
    let to_mid = ctx.evolution(mid.time - ctx.preparation().time)?;
    let to_post = ctx.evolution(ctx.postselection().time - mid.time)?;
    let post = post_projector(ctx)?;

    let psi = to_mid.apply(ctx.preparation().state.amplitudes());
    let weights = mid
        .observable
        .outcomes()
        .iter()
        .map(|o| {
            let branch = to_post.apply(&o.projector.project(&psi));
            post.expectation(&branch)
        })
        .collect();
    Ok(AblWeights {
        labels: mid.observable.labels().into_iter().map(String::from).collect(),
        weights,
    })
}

/// ABL probabilities of the intermediate outcomes given preparation and
/// post-selection.
pub fn abl_distribution(ctx: &Context) -> Result<OutcomeDistribution> {
    abl_weights(ctx)?.normalize()
}

/// Born probabilities |⟨c_i|a(t)⟩|² at the intermediate time, ignoring the
/// post-selection.
pub fn born_context_distribution(ctx: &Context) -> Result<OutcomeDistribution> {
    let mid = ctx.require_intermediate()?;
    let to_mid = ctx.evolution(mid.time - ctx.preparation().time)?;
    let evolved = StateVector::from_unit_unchecked(to_mid.apply(ctx.preparation().state.amplitudes()));
    born_distribution(&evolved, &mid.observable)
}

/// Evaluate the ABL rule by two further routes and return the largest
/// per-label disagreement among all three.
///
/// The Schrödinger route evolves |a⟩ forward to t and the post-selected
/// ket backward from t₂ to t. The Heisenberg route keeps both kets at the
/// reference time t₁ and moves C's projectors and the post-selection
/// projector instead, each with a single exponential over its own span.
pub fn picture_consistency_check(ctx: &Context) -> Result<f64> {
    let mid = ctx.require_intermediate()?;
    let t1 = ctx.preparation().time;
    let t = mid.time;
    let t2 = ctx.postselection().time;
    let a = ctx.preparation().state.amplitudes();
    let labels: Vec<String> = mid.observable.labels().into_iter().map(String::from).collect();
    let post = post_projector(ctx)?;
    let post_ket = rank_one_ket(ctx)?;

    // Schrödinger: a(t) = U(t−t₁)a, b(t) = U(t₂−t)† b.
    let back = ctx.evolution(t2 - t)?.adjoint();
    let a_t = ctx.evolution(t - t1)?.apply(a);
    let schrodinger: Vec<f64> = match &post_ket {
        Some(b) => {
            let b_t = back.apply(b);
            mid.observable
                .outcomes()
                .iter()
                .map(|o| vector::inner(&b_t, &o.projector.project(&a_t)).norm_sqr())
                .collect()
        }
        None => {
            let post_t = post.heisenberg(&back.adjoint());
            mid.observable
                .outcomes()
                .iter()
                .map(|o| post_t.expectation(&o.projector.project(&a_t)))
                .collect()
        }
    };

    // Heisenberg, reference time t₁: P_i(t) = U(t−t₁)† P_i U(t−t₁),
    // P_b(t₂) = U(t₂−t₁)† P_b U(t₂−t₁).
    let h = ctx.hamiltonian();
    let c_h = mid.observable.heisenberg(&unitary_exponential(h, t - t1)?);
    let total_span = unitary_exponential(h, t2 - t1)?;
    let heisenberg: Vec<f64> = match &post_ket {
        Some(b) => {
            let b_h = total_span.adjoint().apply(b);
            c_h.outcomes()
                .iter()
                .map(|o| vector::inner(&b_h, &o.projector.project(a)).norm_sqr())
                .collect()
        }
        None => {
            let post_h = post.heisenberg(&total_span);
            c_h.outcomes()
                .iter()
                .map(|o| post_h.expectation(&o.projector.project(a)))
                .collect()
        }
    };

    let forward = abl_distribution(ctx)?;
    let schrodinger = AblWeights { labels: labels.clone(), weights: schrodinger }.normalize()?;
    let heisenberg = AblWeights { labels, weights: heisenberg }.normalize()?;
    Ok(forward
        .max_abs_diff(&schrodinger)
        .max(forward.max_abs_diff(&heisenberg))
        .max(schrodinger.max_abs_diff(&heisenberg)))
}

fn post_projector(ctx: &Context) -> Result<Projector> {
    let post = ctx.postselection();
    Ok(post.observable.outcome(&post.label)?.projector.clone())
}

/// The post-selected ket when its projector has rank one.
fn rank_one_ket(ctx: &Context) -> Result<Option<Vec<Complex64>>> {
    let post = ctx.postselection();
    if post.observable.outcome(&post.label)?.projector.rank() != 1 {
        return Ok(None);
    }
    Ok(Some(prepare_eigenstate(&post.observable, &post.label)?.into_amplitudes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{Intermediate, PostSelection, Preparation};
    use crate::kinematics::ProjectiveDecomposition;
    use crate::linalg::HermitianOperator;

    fn three_box() -> Context {
        let a = StateVector::normalized(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        let b = StateVector::normalized(
            [1.0, 1.0, -1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap();
        let c = ProjectiveDecomposition::split_on_state(&StateVector::basis(3, 0), "box-1", "not-box-1").unwrap();
        let post = ProjectiveDecomposition::split_on_state(&b, "b", "not-b").unwrap();
        Context::static_abc(a, c, post, "b").unwrap()
    }

    #[test]
    fn three_box_weights_match_hand_arithmetic() {
        // ⟨b|P₁|a⟩ = (1/√3)(1/√3) = 1/3; ⟨b|(1−P₁)|a⟩ = (1 − 1)/3 = 0.
        let w = abl_weights(&three_box()).unwrap();
        assert!((w.weights[0] - 1.0 / 9.0).abs() < 1e-15);
        assert!(w.weights[1].abs() < 1e-30);
        let d = abl_distribution(&three_box()).unwrap();
        assert!((d.probability("box-1").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_box_born_is_one_third() {
        let d = born_context_distribution(&three_box()).unwrap();
        assert!((d.probability("box-1").unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn c_equals_a_gives_delta() {
        let z = ProjectiveDecomposition::pauli_z();
        let x = ProjectiveDecomposition::pauli_x();
        let ctx = Context::new(
            Preparation { state: StateVector::basis(2, 0), time: 0.0 },
            Some(Intermediate { observable: z, time: 1e-9, performed: true }),
            PostSelection { observable: x, label: "-1".into(), time: 1.0 },
            HermitianOperator::zero(2),
        )
        .unwrap();
        let d = abl_distribution(&ctx).unwrap();
        assert_eq!(d.probability("+1").unwrap(), 1.0);
        assert_eq!(d.probability("-1").unwrap(), 0.0);
    }

    #[test]
    fn z_pre_and_post_with_x_between_is_uniform() {
        // Both kernels |⟨0|±⟩⟨±|0⟩|² = 1/4.
        let z = ProjectiveDecomposition::pauli_z();
        let ctx = Context::static_abc(StateVector::basis(2, 0), ProjectiveDecomposition::pauli_x(), z, "+1").unwrap();
        let w = abl_weights(&ctx).unwrap();
        for wi in &w.weights {
            assert!((wi - 0.25).abs() < 1e-15);
        }
        let d = abl_distribution(&ctx).unwrap();
        assert!((d.probability("+1").unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_context_examples() {
        let e0 = StateVector::basis(2, 0);
        let z = ProjectiveDecomposition::pauli_z();
        let ctx = Context::static_abc(e0.clone(), z.clone(), z.clone(), "+1").unwrap();
        assert_eq!(born_context_distribution(&ctx).unwrap().probabilities(), vec![1.0, 0.0]);
        let ctx = Context::static_abc(e0, ProjectiveDecomposition::pauli_x(), z, "+1").unwrap();
        for p in born_context_distribution(&ctx).unwrap().probabilities() {
            assert!((p - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn impossible_postselection() {
        // Z between e0 and e1: each branch stays in a Z eigenstate, never reaching e1 from e0.
        let z = ProjectiveDecomposition::pauli_z();
        let ctx = Context::static_abc(StateVector::basis(2, 0), z.clone(), z, "-1").unwrap();
        assert!(matches!(abl_distribution(&ctx), Err(Error::VanishingDenominator { .. })));
    }

    #[test]
    fn picture_check_zero_hamiltonian() {
        assert!(picture_consistency_check(&three_box()).unwrap() < 1e-15);
    }

    #[test]
    fn commuting_evolution_keeps_delta_in_both_pictures() {
        let z = ProjectiveDecomposition::pauli_z();
        let ctx = Context::new(
            Preparation { state: StateVector::basis(2, 1), time: 0.0 },
            Some(Intermediate { observable: z.clone(), time: 0.7, performed: true }),
            PostSelection { observable: z, label: "-1".into(), time: 2.3 },
            HermitianOperator::diagonal(&[0.4, -1.3]),
        )
        .unwrap();
        let d = abl_distribution(&ctx).unwrap();
        assert_eq!(d.probabilities(), vec![0.0, 1.0]);
        assert!(picture_consistency_check(&ctx).unwrap() < 1e-14);
    }

    #[test]
    fn missing_intermediate() {
        let z = ProjectiveDecomposition::pauli_z();
        let ctx = Context::new(
            Preparation { state: StateVector::basis(2, 0), time: 0.0 },
            None,
            PostSelection { observable: z, label: "+1".into(), time: 1.0 },
            HermitianOperator::zero(2),
        )
        .unwrap();
        assert!(matches!(abl_distribution(&ctx), Err(Error::InvalidContext(_))));
    }
}
