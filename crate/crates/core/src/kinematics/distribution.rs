use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Labelled probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    entries: Vec<(String, f64)>,
}

impl OutcomeDistribution {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        if let Some((label, p)) = entries.iter().find(|(_, p)| !p.is_finite() || *p < -tolerance::CONSTRUCTION) {
            return Err(Error::ToleranceBreach(format!("probability of `{label}` is {p}")));
        }
        let total: f64 = entries.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > tolerance::PROBABILITY_SUM {
            return Err(Error::ToleranceBreach(format!("probabilities sum to {total}")));
        }
        Ok(Self { entries })
    }

    /// Clamp each raw probability into [0, 1] and validate the sum.
    pub fn from_raw(labels: &[&str], raw: &[f64]) -> Result<Self> {
        let entries = labels
            .iter()
            .zip(raw)
            .map(|(label, &p)| Ok((label.to_string(), clamp_probability(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, p)| *p).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probability(&self, label: &str) -> Result<f64> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Largest per-label difference; infinite if the label sets differ.
    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> f64 {
        if self.labels() != other.labels() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|((_, a), (_, b))| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The label of the most probable outcome (first on ties).
    pub fn mode(&self) -> &str {
        let mut best = &self.entries[0];
        for e in &self.entries[1..] {
            if e.1 > best.1 {
                best = e;
            }
        }
        &best.0
    }
}

/// Clamp a computed probability into [0, 1]; excursions beyond 1e-9 are
/// reported as internal errors rather than silently absorbed.
pub fn clamp_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-tolerance::CLAMP..=1.0 + tolerance::CLAMP).contains(&p) {
        return Err(Error::ToleranceBreach(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamping_rules() {
        assert_eq!(clamp_probability(-1e-12).unwrap(), 0.0);
        assert_eq!(clamp_probability(1.0 + 1e-12).unwrap(), 1.0);
        assert!(clamp_probability(1.0 + 1e-6).is_err());
        assert!(clamp_probability(f64::NAN).is_err());
    }

    #[test]
    fn rejects_bad_sum() {
        assert!(OutcomeDistribution::from_raw(&["a", "b"], &[0.5, 0.4]).is_err());
        let d = OutcomeDistribution::from_raw(&["a", "b"], &[0.25, 0.75]).unwrap();
        assert_eq!(d.probability("b").unwrap(), 0.75);
        assert_eq!(d.mode(), "b");
        assert!(d.probability("c").is_err());
    }
}
