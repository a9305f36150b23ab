use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::vector;
use crate::tolerance;

/// Unit-norm vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes whose norm is 1 within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        let norm = vector::norm(&amplitudes);
        if (norm - 1.0).abs() > tolerance::CONSTRUCTION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescale nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        let norm = vector::norm(&amplitudes);
        if norm <= tolerance::ZERO_PROBABILITY {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: vector::scale(&amplitudes, Complex64::new(1.0 / norm, 0.0)),
        })
    }

    pub(crate) fn from_unit_unchecked(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!((vector::norm(&amplitudes) - 1.0).abs() < 1e-8);
        Self { amplitudes }
    }

    /// Standard basis vector e_k.
    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            amplitudes: vector::basis_vector(dim, k),
        }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Same ray with the first significant amplitude real-positive.
    pub fn canonical(&self) -> Self {
        Self {
            amplitudes: vector::canonical_phase(&self.amplitudes),
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        vector::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn conj(&self) -> Self {
        Self {
            amplitudes: vector::conj(&self.amplitudes),
        }
    }

    pub fn with_phase(&self, radians: f64) -> Self {
        Self {
            amplitudes: vector::scale(&self.amplitudes, Complex64::from_polar(1.0, radians)),
        }
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        vector::max_abs_diff(&self.amplitudes, &other.amplitudes)
    }

    /// 1 − |⟨self|other⟩|, zero exactly when the rays coincide.
    pub fn ray_distance(&self, other: &StateVector) -> f64 {
        (1.0 - self.inner(other).norm()).max(0.0)
    }
}

fn check_amplitudes(amplitudes: &[Complex64]) -> Result<()> {
    if amplitudes.is_empty() {
        return Err(Error::InvalidArgument("state has no amplitudes".into()));
    }
    if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("state"));
    }
    Ok(())
}
