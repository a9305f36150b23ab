//! Random states, operators and contexts for tests and benchmarks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::kinematics::{Outcome, ProjectiveDecomposition, StateVector};
use crate::linalg::{vector, ComplexMatrix, HermitianOperator, Projector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

/// Hermitian matrix with independent Gaussian entries scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(scale * rng.sample::<f64, _>(StandardNormal), 0.0);
        for j in i + 1..dim {
            let z = gaussian(rng) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).expect("constructed Hermitian")
}

/// Haar-random orthonormal basis (Gram-Schmidt on Gaussian vectors).
pub fn random_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<StateVector> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        vector::orthogonalize_against(&mut v, &basis);
        let n = vector::norm(&v);
        if n > 1e-6 {
            basis.push(vector::scale(&v, Complex64::new(1.0 / n, 0.0)));
        }
    }
    basis.into_iter().map(StateVector::from_unit_unchecked).collect()
}

/// Random projective decomposition: a random basis grouped into between two
/// and `dim` outcomes labelled "c0", "c1", ...
pub fn random_decomposition<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ProjectiveDecomposition {
    let basis = random_basis(dim, rng);
    let groups = if dim <= 2 { dim } else { rng.random_range(2..=dim) };
    let family: Vec<Vec<Complex64>> = basis.iter().map(|s| s.amplitudes().to_vec()).collect();
    from_spans(&partition(&family, groups), dim)
}

/// Random decomposition one of whose outcomes, labelled "c0", is exactly
/// the ray of `state`.
pub fn decomposition_containing<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> ProjectiveDecomposition {
    let dim = state.dim();
    let mut family = vec![state.amplitudes().to_vec()];
    while family.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        vector::orthogonalize_against(&mut v, &family);
        let n = vector::norm(&v);
        if n > 1e-6 {
            family.push(vector::scale(&v, Complex64::new(1.0 / n, 0.0)));
        }
    }
    let rest = if dim <= 2 { dim - 1 } else { rng.random_range(1..dim) };
    let mut spans = vec![vec![family[0].clone()]];
    spans.extend(partition(&family[1..], rest));
    from_spans(&spans, dim)
}

/// Split `family` into `groups` contiguous non-empty runs.
fn partition(family: &[Vec<Complex64>], groups: usize) -> Vec<Vec<Vec<Complex64>>> {
    let n = family.len();
    (0..groups)
        .map(|g| family[g * n / groups..(g + 1) * n / groups].to_vec())
        .collect()
}

fn from_spans(spans: &[Vec<Vec<Complex64>>], dim: usize) -> ProjectiveDecomposition {
    let outcomes = spans
        .iter()
        .enumerate()
        .map(|(k, span)| Outcome {
            label: format!("c{k}"),
            value: k as f64,
            projector: Projector::onto_span(span, dim).expect("orthonormal span"),
        })
        .collect();
    ProjectiveDecomposition::new(outcomes).expect("complete orthogonal decomposition")
}
