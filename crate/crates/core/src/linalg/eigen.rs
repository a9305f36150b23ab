//! Hermitian eigensystems by cyclic complex Jacobi rotations, and the
//! unitary exponentials built from them.
//!
//! Jacobi is slow asymptotically but accurate to working precision on the
//! small dimensions handled here, and needs nothing beyond dense storage.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{vector, ComplexMatrix, HermitianOperator, UnitaryMap};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues ascending with matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as the columns of a unitary matrix.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V Λ V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.spectral_map(|lambda| Complex64::new(lambda, 0.0))
    }

    /// V f(Λ) V† for a scalar function of the eigenvalues.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }

    /// Groups of eigen-indices whose eigenvalues agree within `tol`.
    pub fn clusters(&self, tol: f64) -> Vec<Vec<usize>> {
        cluster_sorted(&self.eigenvalues, tol)
    }
}

/// Diagonalize a Hermitian operator.
///
/// Eigenvalues come back ascending. Inside a degenerate cluster the
/// eigenvectors are rebuilt by projecting the standard basis vectors, in
/// index order, onto the cluster's eigenspace and orthonormalizing. Every
/// eigenvector then has its first significant amplitude real-positive, so
/// the output is a deterministic function of the input matrix.
pub fn hermitian_eigensystem(h: &HermitianOperator) -> Eigensystem {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        jacobi_sweeps(&mut a, &mut v, scale);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut columns: Vec<Vec<Complex64>> = order.iter().map(|&k| v.column(k)).collect();

    let spread = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(1.0);
    for cluster in cluster_sorted(&eigenvalues, degeneracy_tolerance(spread)) {
        if cluster.len() > 1 {
            let members: Vec<Vec<Complex64>> = cluster.iter().map(|&k| columns[k].clone()).collect();
            for (slot, rebuilt) in cluster.iter().zip(standard_frame(&members, n)) {
                columns[*slot] = rebuilt;
            }
        }
    }
    let columns: Vec<Vec<Complex64>> = columns.iter().map(|c| vector::canonical_phase(c)).collect();

    Eigensystem {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_columns(&columns).expect("columns share dimension"),
    }
}

/// Eigenvalues closer than this (relative to the spectral scale) form one cluster.
pub fn degeneracy_tolerance(spread: f64) -> f64 {
    1e-11 * spread
}

/// exp(−i H Δt) with ħ = 1, via the eigendecomposition of `h`.
pub fn unitary_exponential(h: &HermitianOperator, duration: f64) -> Result<UnitaryMap> {
    if !duration.is_finite() {
        return Err(Error::InvalidArgument(format!("duration {duration} is not finite")));
    }
    if h.is_zero() || duration == 0.0 {
        return Ok(UnitaryMap::identity(h.dim()));
    }
    let eig = hermitian_eigensystem(h);
    UnitaryMap::new(eig.spectral_map(|lambda| Complex64::from_polar(1.0, -lambda * duration)))
}

fn jacobi_sweeps(a: &mut ComplexMatrix, v: &mut ComplexMatrix, scale: f64) {
    let n = a.rows();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-16 * scale {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, v, p, q);
            }
        }
    }
}

/// Zero the (p, q) entry with a unitary J acting on rows/columns p and q.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] restricted to (p, q).
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &value) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if value - values[*last.last().unwrap()] <= tol => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    clusters
}

/// Orthonormal frame for span(`members`) built from projected standard
/// basis vectors in index order.
fn standard_frame(members: &[Vec<Complex64>], dim: usize) -> Vec<Vec<Complex64>> {
    const MIN_RESIDUAL: f64 = 1e-3;
    let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(members.len());
    for j in 0..dim {
        if frame.len() == members.len() {
            break;
        }
        // P e_j = Σ_m v_m conj(v_m[j])
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        for m in members {
            let coeff = m[j].conj();
            for (wi, mi) in w.iter_mut().zip(m) {
                *wi += coeff * mi;
            }
        }
        vector::orthogonalize_against(&mut w, &frame);
        let norm = vector::norm(&w);
        if norm > MIN_RESIDUAL {
            frame.push(vector::scale(&w, Complex64::new(1.0 / norm, 0.0)));
        }
    }
    // Unreachable for an orthonormal cluster; keep the original vectors rather than lose dimensions.
    if frame.len() < members.len() {
        return members.to_vec();
    }
    frame
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_operator_sorts_ascending() {
        let h = HermitianOperator::diagonal(&[1.0, -1.0]);
        let eig = hermitian_eigensystem(&h);
        assert_eq!(eig.eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(eig.eigenvector(0), vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(eig.eigenvector(1), vec![c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let x = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let eig = hermitian_eigensystem(&HermitianOperator::new(x).unwrap());
        assert!((eig.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues()[1] - 1.0).abs() < 1e-14);
        let minus = eig.eigenvector(0);
        let plus = eig.eigenvector(1);
        // phase convention makes the first component positive
        assert!(vector::max_abs_diff(&minus, &[c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]) < 1e-14);
        assert!(vector::max_abs_diff(&plus, &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]) < 1e-14);
    }

    #[test]
    fn degenerate_cluster_uses_standard_frame() {
        // Rotate diag(2, 2, 5) by a unitary; the 2-eigenspace is span{u0, u1}.
        let s = FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_rows(&[
            vec![c(s, 0.0), c(0.0, s), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(s, 0.0), c(0.0, -s), c(0.0, 0.0)],
        ])
        .unwrap();
        let d = ComplexMatrix::from_real_diagonal(&[2.0, 2.0, 5.0]);
        let h = HermitianOperator::new(&(&u * &d) * &u.adjoint()).unwrap();
        let eig = hermitian_eigensystem(&h);
        assert_eq!(eig.clusters(1e-9), vec![vec![0, 1], vec![2]]);
        // Eigenspace is span{e0, e2}; e0 projects to itself, then e2.
        assert!(vector::max_abs_diff(&eig.eigenvector(0), &vector::basis_vector(3, 0)) < 1e-13);
        assert!(vector::max_abs_diff(&eig.eigenvector(1), &vector::basis_vector(3, 2)) < 1e-13);
        assert!(eig.reconstruct().max_abs_diff(h.matrix()) < 1e-13);
    }

    #[test]
    fn zero_hamiltonian_exponential_is_identity() {
        let u = unitary_exponential(&HermitianOperator::zero(3), 4.2).unwrap();
        assert_eq!(u.matrix(), &ComplexMatrix::identity(3));
    }

    #[test]
    fn sigma_z_for_time_pi_is_minus_identity() {
        let u = unitary_exponential(&HermitianOperator::diagonal(&[1.0, -1.0]), PI).unwrap();
        let minus_id = ComplexMatrix::identity(2).scale(c(-1.0, 0.0));
        assert!(u.matrix().max_abs_diff(&minus_id) < 1e-15);
    }

    #[test]
    fn non_finite_duration_rejected() {
        let h = HermitianOperator::diagonal(&[1.0]);
        assert!(unitary_exponential(&h, f64::NAN).is_err());
    }
}
