use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Free Gaussian wave packet with ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadingModel {
    sigma0: f64,
    mass: f64,
}

impl SpreadingModel {
    pub fn new(sigma0: f64, mass: f64) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma0 must be positive, got {sigma0}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { sigma0, mass })
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// σ(t) = σ₀ √(1 + (t / (2 m σ₀²))²).
pub fn spreading_sigma(model: &SpreadingModel, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be non-negative, got {t}")));
    }
    let ratio = t / (2.0 * model.mass * model.sigma0 * model.sigma0);
    Ok(model.sigma0 * ratio.hypot(1.0))
}

/// Whether a detector of the given resolution can see a width `sigma`.
pub fn fuzziness_resolvable(sigma: f64, detector_resolution: f64) -> bool {
    sigma > detector_resolution
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_width() {
        let m = SpreadingModel::new(0.3, 2.0).unwrap();
        assert_eq!(spreading_sigma(&m, 0.0).unwrap(), 0.3);
    }

    #[test]
    fn doubling_mass_halves_asymptotic_width() {
        let (sigma0, m) = (1.0, 1.0);
        let t = 1e6 * m * sigma0 * sigma0;
        let light = spreading_sigma(&SpreadingModel::new(sigma0, m).unwrap(), t).unwrap();
        let heavy = spreading_sigma(&SpreadingModel::new(sigma0, 2.0 * m).unwrap(), t).unwrap();
        assert!((heavy / light - 0.5).abs() < 1e-3);
        assert!((light / (t / (2.0 * m * sigma0)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn heavy_packets_do_not_spread() {
        let m = SpreadingModel::new(1e-3, 1e300).unwrap();
        assert!((spreading_sigma(&m, 1e3).unwrap() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn monotone_in_time_and_mass() {
        let mut last = 0.0;
        for k in 0..50 {
            let s = spreading_sigma(&SpreadingModel::new(0.5, 3.0).unwrap(), k as f64 * 0.7).unwrap();
            assert!(s >= last);
            last = s;
        }
        let mut last = f64::INFINITY;
        for k in 1..50 {
            let s = spreading_sigma(&SpreadingModel::new(0.5, k as f64 * 0.4).unwrap(), 2.0).unwrap();
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = SpreadingModel::new(1.0, 1.0).unwrap();
        assert!(spreading_sigma(&m, -1.0).is_err());
        assert!(SpreadingModel::new(0.0, 1.0).is_err());
        assert!(SpreadingModel::new(1.0, -2.0).is_err());
    }

    #[test]
    fn resolvability() {
        assert!(fuzziness_resolvable(1e-3, 1e-6));
        assert!(!fuzziness_resolvable(1e-9, 1e-6));
        assert!(!fuzziness_resolvable(1e-6, 1e-6));
    }
}
