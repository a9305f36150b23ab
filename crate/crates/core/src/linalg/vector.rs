//! Free functions on raw amplitude slices.

use num_complex::Complex64;

use crate::tolerance;

/// Bilinear product Σ aᵢ bᵢ (no conjugation).
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hermitian inner product ⟨u|v⟩ = Σ conj(uᵢ) vᵢ.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    norm_sqr(v).sqrt()
}

pub fn scale(v: &[Complex64], factor: Complex64) -> Vec<Complex64> {
    v.iter().map(|&z| z * factor).collect()
}

pub fn conj(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|z| z.conj()).collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn basis_vector(dim: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// Index of the first amplitude large enough to anchor a global phase.
pub fn phase_pivot(v: &[Complex64]) -> Option<usize> {
    v.iter().position(|z| z.norm() > tolerance::PHASE_PIVOT)
}

/// Multiply by the global phase that makes the pivot amplitude real-positive.
pub fn canonical_phase(v: &[Complex64]) -> Vec<Complex64> {
    match phase_pivot(v) {
        Some(k) => {
            let z = v[k];
            scale(v, z.conj() / z.norm())
        }
        None => v.to_vec(),
    }
}

/// Subtract the projections of `v` onto each (orthonormal) vector in `basis`.
///
/// Two passes of classical Gram-Schmidt keep the result orthogonal to
/// working precision.
pub fn orthogonalize_against(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let overlap = inner(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= overlap * y;
            }
        }
    }
}

/// Extend an orthonormal family to a full orthonormal basis of `dim`,
/// drawing new directions from the standard basis in index order.
pub fn complete_basis(family: &[Vec<Complex64>], dim: usize) -> Vec<Vec<Complex64>> {
    // Residual norms below this make the new direction too noisy to keep.
    const MIN_RESIDUAL: f64 = 1e-4;
    let mut basis: Vec<Vec<Complex64>> = family.to_vec();
    let mut k = 0;
    while basis.len() < dim && k < dim {
        let mut candidate = basis_vector(dim, k);
        orthogonalize_against(&mut candidate, &basis);
        let n = norm(&candidate);
        if n > MIN_RESIDUAL {
            basis.push(scale(&candidate, Complex64::new(1.0 / n, 0.0)));
        }
        k += 1;
    }
    basis
}

/// Largest deviation of the Gram matrix of `family` from the identity.
pub fn orthonormality_defect(family: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in family.iter().enumerate() {
        for (j, v) in family.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(u, v) - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_conjugates_left() {
        let u = vec![c(0.0, 1.0)];
        let v = vec![c(0.0, 1.0)];
        assert_eq!(inner(&u, &v), c(1.0, 0.0));
        assert_eq!(dot(&u, &v), c(-1.0, 0.0));
    }

    #[test]
    fn canonical_phase_fixes_first_amplitude() {
        let v = vec![c(0.0, 0.0), c(0.0, -0.6), c(0.8, 0.0)];
        let w = canonical_phase(&v);
        assert!((w[1] - c(0.6, 0.0)).norm() < 1e-15);
        assert!((w[2] - c(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn complete_basis_from_single_vector() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let family = vec![vec![c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]];
        let basis = complete_basis(&family, 3);
        assert_eq!(basis.len(), 3);
        assert!(orthonormality_defect(&basis) < 1e-14);
        assert_eq!(basis[0], family[0]);
    }
}
