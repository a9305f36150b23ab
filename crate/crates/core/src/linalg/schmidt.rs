//! Biorthogonal (Schmidt) decomposition of bipartite pure states.
//!
//! The amplitude matrix T (system index × apparatus index) is factored by a
//! one-sided Jacobi SVD, T = U Σ W†, giving
//! |χ⟩ = Σ_r σ_r |u_r⟩ ⊗ |conj(w_r)⟩.

use num_complex::Complex64;

use crate::kinematics::StateVector;
use crate::linalg::{vector, ComplexMatrix};
use crate::tolerance;

const MAX_SWEEPS: usize = 64;

/// Coefficients at or below this are dropped from the decomposition.
pub const NEGLIGIBLE_COEFFICIENT: f64 = 1e-12;

/// Descending Schmidt coefficients with paired orthonormal vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    coefficients: Vec<f64>,
    system_vectors: Vec<StateVector>,
    apparatus_vectors: Vec<StateVector>,
    system_dim: usize,
    apparatus_dim: usize,
    non_unique: bool,
}

impl SchmidtDecomposition {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn system_vectors(&self) -> &[StateVector] {
        &self.system_vectors
    }

    pub fn apparatus_vectors(&self) -> &[StateVector] {
        &self.apparatus_vectors
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus_dim
    }

    /// Set when two coefficients coincide within 1e-9, or when the rank is
    /// below min(system, apparatus) so that vanishing terms are free.
    pub fn is_non_unique(&self) -> bool {
        self.non_unique
    }

    /// Σ_r σ_r u_r ⊗ a_r as a system × apparatus amplitude matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut t = ComplexMatrix::zeros(self.system_dim, self.apparatus_dim);
        for ((&sigma, u), a) in self.coefficients.iter().zip(&self.system_vectors).zip(&self.apparatus_vectors) {
            let term = ComplexMatrix::outer(u.amplitudes(), &vector::conj(a.amplitudes()));
            t = &t + &term.scale(Complex64::new(sigma, 0.0));
        }
        t
    }

    /// The apparatus Schmidt vectors extended to a full orthonormal basis.
    pub fn apparatus_basis(&self) -> Vec<StateVector> {
        let family: Vec<Vec<Complex64>> = self.apparatus_vectors.iter().map(|s| s.amplitudes().to_vec()).collect();
        vector::complete_basis(&family, self.apparatus_dim)
            .into_iter()
            .map(StateVector::from_unit_unchecked)
            .collect()
    }
}

/// Schmidt-decompose a system × apparatus amplitude matrix of unit
/// Frobenius norm.
pub fn decompose_amplitudes(amplitudes: &ComplexMatrix) -> SchmidtDecomposition {
    let (m, n) = (amplitudes.rows(), amplitudes.cols());
    // Columns of g are orthogonalized in place; w accumulates the rotations.
    let mut g = amplitudes.clone();
    let mut w = ComplexMatrix::identity(n);
    one_sided_jacobi(&mut g, &mut w);

    let mut triples: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let col = g.column(j);
            (vector::norm(&col), col, w.column(j))
        })
        .filter(|(sigma, _, _)| *sigma > NEGLIGIBLE_COEFFICIENT)
        .collect();
    triples.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut coefficients = Vec::with_capacity(triples.len());
    let mut system_vectors = Vec::with_capacity(triples.len());
    let mut apparatus_vectors = Vec::with_capacity(triples.len());
    for (sigma, col, wcol) in triples {
        let u = vector::scale(&col, Complex64::new(1.0 / sigma, 0.0));
        let a = vector::conj(&wcol);
        // Move the canonical phase from u onto a so that u ⊗ a is unchanged.
        let (u, a) = match vector::phase_pivot(&u) {
            Some(k) => {
                let phase = u[k].conj() / u[k].norm();
                (vector::scale(&u, phase), vector::scale(&a, phase.conj()))
            }
            None => (u, a),
        };
        coefficients.push(sigma);
        system_vectors.push(StateVector::from_unit_unchecked(u));
        apparatus_vectors.push(StateVector::from_unit_unchecked(a));
    }

    let degenerate_pair = coefficients
        .windows(2)
        .any(|pair| pair[0] - pair[1] <= tolerance::SCHMIDT_DEGENERACY);
    let rank_deficient = coefficients.len() < m.min(n);
    SchmidtDecomposition {
        coefficients,
        system_vectors,
        apparatus_vectors,
        system_dim: m,
        apparatus_dim: n,
        non_unique: degenerate_pair || rank_deficient,
    }
}

fn one_sided_jacobi(g: &mut ComplexMatrix, w: &mut ComplexMatrix) {
    let (m, n) = (g.rows(), g.cols());
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    alpha += g[(k, p)].norm_sqr();
                    beta += g[(k, q)].norm_sqr();
                    gamma += g[(k, p)].conj() * g[(k, q)];
                }
                let r = gamma.norm();
                if r == 0.0 || r <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / r;
                let zeta = (beta - alpha) / (2.0 * r);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..m {
                    let (x, y) = (g[(k, p)], g[(k, q)]);
                    g[(k, p)] = x * jpp + y * jqp;
                    g[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (w[(k, p)], w[(k, q)]);
                    w[(k, p)] = x * jpp + y * jqp;
                    w[(k, q)] = x * jpq + y * jqq;
                }
            }
        }
        if !rotated {
            return;
        }
    }
}
