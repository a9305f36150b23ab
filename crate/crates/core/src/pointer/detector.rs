use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fact {
    Nonclick,
    Click,
}

/// Append-only record of detector facts at clock ticks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FactSequence {
    ticks: Vec<(f64, Fact)>,
    click_time: Option<f64>,
}

impl FactSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_nonclick(&mut self, time: f64) -> Result<()> {
        self.push(time, Fact::Nonclick)
    }

    pub fn record_click(&mut self, time: f64) -> Result<()> {
        self.push(time, Fact::Click)?;
        self.click_time = Some(time);
        Ok(())
    }

    fn push(&mut self, time: f64, fact: Fact) -> Result<()> {
        if !time.is_finite() {
            return Err(Error::NonFinite("fact time"));
        }
        if self.click_time.is_some() {
            return Err(Error::InvalidArgument("no fact can follow a click".into()));
        }
        if let Some(&(last, _)) = self.ticks.last() {
            if time <= last {
                return Err(Error::InvalidArgument(format!(
                    "fact at {time} does not follow the fact at {last}"
                )));
            }
        }
        self.ticks.push((time, fact));
        Ok(())
    }

    pub fn facts(&self) -> &[(f64, Fact)] {
        &self.ticks
    }

    pub fn click_time(&self) -> Option<f64> {
        self.click_time
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    /// At most one click, final if present, and strictly increasing times.
    pub fn is_well_formed(&self) -> bool {
        let clicks = self.ticks.iter().filter(|(_, f)| *f == Fact::Click).count();
        let click_ok = match self.click_time {
            None => clicks == 0,
            Some(t) => clicks == 1 && self.ticks.last() == Some(&(t, Fact::Click)),
        };
        click_ok && self.ticks.windows(2).all(|w| w[0].0 < w[1].0)
    }
}

pub(crate) fn check_parameters(rate: f64, tick: f64, horizon: f64) -> Result<u64> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::InvalidArgument(format!("rate must be non-negative, got {rate}")));
    }
    if !(tick > 0.0 && tick.is_finite()) {
        return Err(Error::InvalidArgument(format!("tick must be positive, got {tick}")));
    }
    if !(horizon >= tick && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} is shorter than one tick")));
    }
    // Guard against horizon/tick landing just below an integer.
    Ok((horizon / tick * (1.0 + 1e-12)).floor() as u64)
}

fn simulate(rng: &mut ChaCha8Rng, rate: f64, tick: f64, ticks: u64) -> FactSequence {
    let p_click = -(-rate * tick).exp_m1();
    let mut seq = FactSequence::new();
    for k in 1..=ticks {
        let time = k as f64 * tick;
        let outcome = if rng.random::<f64>() < p_click {
            seq.record_click(time)
        } else {
            seq.record_nonclick(time)
        };
        outcome.expect("tick times increase and nothing follows a click");
        if seq.click_time().is_some() {
            break;
        }
    }
    seq
}

fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// One detector watched from t = 0 until it clicks or the horizon passes.
/// At each tick it clicks with probability 1 − e^(−rate·tick).
pub fn detector_click_simulation(rate: f64, tick: f64, horizon: f64, seed: u64) -> Result<FactSequence> {
    let ticks = check_parameters(rate, tick, horizon)?;
    Ok(simulate(&mut run_rng(seed, 0), rate, tick, ticks))
}

/// Summary of many independent detector runs.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorEnsemble {
    pub runs: u64,
    /// Click time of each run, `None` if it reached the horizon silently.
    pub click_times: Vec<Option<f64>>,
    pub nonclick_facts: u64,
    /// Runs whose fact sequence broke the one-final-click rule.
    pub malformed: u64,
}

impl DetectorEnsemble {
    pub fn clicks(&self) -> u64 {
        self.click_times.iter().flatten().count() as u64
    }

    pub fn mean_click_time(&self) -> Option<f64> {
        let n = self.clicks();
        (n > 0).then(|| self.click_times.iter().flatten().sum::<f64>() / n as f64)
    }

    /// Kolmogorov-Smirnov distance of click times from 1 − e^(−rate·t).
    pub fn ks_against_exponential(&self, rate: f64) -> f64 {
        let mut times: Vec<f64> = self.click_times.iter().flatten().copied().collect();
        ks_statistic(&mut times, self.runs as usize, |t| -(-rate * t).exp_m1())
    }
}

/// Run `runs` detectors; run k draws from stream k of `seed`, so run 0
/// reproduces [`detector_click_simulation`] and results do not depend on
/// the thread count.
pub fn detector_ensemble(rate: f64, tick: f64, horizon: f64, runs: u64, seed: u64) -> Result<DetectorEnsemble> {
    let ticks = check_parameters(rate, tick, horizon)?;
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let per_run: Vec<(Option<f64>, u64, bool)> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let seq = simulate(&mut run_rng(seed, run), rate, tick, ticks);
            let nonclicks = seq.facts().iter().filter(|(_, f)| *f == Fact::Nonclick).count() as u64;
            (seq.click_time(), nonclicks, seq.is_well_formed())
        })
        .collect();
    Ok(DetectorEnsemble {
        runs,
        nonclick_facts: per_run.iter().map(|r| r.1).sum(),
        malformed: per_run.iter().filter(|r| !r.2).count() as u64,
        click_times: per_run.into_iter().map(|r| r.0).collect(),
    })
}

/// sup_t |F_n(t) − F(t)| for `observed` values out of `total` draws; the
/// remaining draws count as lying beyond every observed value.
pub fn ks_statistic(observed: &mut [f64], total: usize, cdf: impl Fn(f64) -> f64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    observed.sort_by(f64::total_cmp);
    let n = total as f64;
    let mut d = 0.0f64;
    for (i, &x) in observed.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    d.max(1.0 - observed.len() as f64 / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_never_clicks() {
        let seq = detector_click_simulation(0.0, 0.1, 5.0, 1).unwrap();
        assert_eq!(seq.len(), 50);
        assert!(seq.click_time().is_none());
        assert!(seq.facts().iter().all(|(_, f)| *f == Fact::Nonclick));
        assert!(seq.is_well_formed());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = detector_click_simulation(2.0, 0.01, 10.0, 7).unwrap();
        assert_eq!(a, detector_click_simulation(2.0, 0.01, 10.0, 7).unwrap());
        let ens = detector_ensemble(2.0, 0.01, 10.0, 3, 7).unwrap();
        assert_eq!(ens.click_times[0], a.click_time());
    }

    #[test]
    fn click_is_final_and_unique() {
        for seed in 0..200 {
            let seq = detector_click_simulation(5.0, 0.01, 2.0, seed).unwrap();
            assert!(seq.is_well_formed());
            if let Some(t) = seq.click_time() {
                assert_eq!(seq.facts().last(), Some(&(t, Fact::Click)));
            }
        }
    }

    #[test]
    fn append_only() {
        let mut seq = FactSequence::new();
        seq.record_nonclick(1.0).unwrap();
        assert!(seq.record_nonclick(1.0).is_err());
        assert!(seq.record_nonclick(0.5).is_err());
        seq.record_click(2.0).unwrap();
        assert!(seq.record_nonclick(3.0).is_err());
        assert!(seq.record_click(3.0).is_err());
        assert_eq!(seq.len(), 2);
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let n = 1000;
        let mut xs: Vec<f64> = (0..n).map(|i| -(1.0 - (i as f64 + 0.5) / n as f64).ln()).collect();
        assert!(ks_statistic(&mut xs, n, |t| 1.0 - (-t).exp()) <= 0.5 / n as f64 + 1e-12);
    }

    #[test]
    fn ensemble_matches_exponential_law() {
        let ens = detector_ensemble(1.0, 1e-3, 20.0, 4000, 42).unwrap();
        assert_eq!(ens.malformed, 0);
        assert!(ens.ks_against_exponential(1.0) < 0.03);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(detector_click_simulation(-1.0, 0.1, 1.0, 0).is_err());
        assert!(detector_click_simulation(1.0, 0.0, 1.0, 0).is_err());
        assert!(detector_click_simulation(1.0, 0.5, 0.1, 0).is_err());
    }
}
