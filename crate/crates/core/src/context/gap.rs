use crate::error::Result;
use crate::kinematics::{born_distribution, check_dims, lueders_collapse, ProjectiveDecomposition, StateVector};
use crate::tolerance;

/// P(b|a) computed quantum mechanically next to the classical
/// total-probability chain Σ_i P(b|c_i) P(c_i|a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityGap {
    pub quantum: f64,
    pub classical_chain: f64,
    pub gap: f64,
}

/// Equal-time comparison (no Hamiltonian). Every factor is a Born value;
/// P(b|c_i) is taken in the Lüders-collapsed state, which for rank-one
/// outcomes is |⟨b|c_i⟩|².
pub fn total_probability_gap(
    a: &StateVector,
    b_obs: &ProjectiveDecomposition,
    b_label: &str,
    c: &ProjectiveDecomposition,
) -> Result<ProbabilityGap> {
    check_dims(b_obs.dim(), a.dim())?;
    check_dims(c.dim(), a.dim())?;
    let quantum = born_distribution(a, b_obs)?.probability(b_label)?;

    let c_given_a = born_distribution(a, c)?;
    let mut classical_chain = 0.0;
    for (label, p_c) in c_given_a.entries() {
        if *p_c <= tolerance::ZERO_PROBABILITY {
            continue;
        }
        let collapsed = lueders_collapse(a, c, label)?;
        classical_chain += born_distribution(&collapsed, b_obs)?.probability(b_label)? * p_c;
    }
    Ok(ProbabilityGap {
        quantum,
        classical_chain,
        gap: quantum - classical_chain,
    })
}
