use std::collections::BTreeMap;

use crate::context::{
    abl_distribution, abl_element_of_reality, abl_weights, born_context_distribution, picture_consistency_check,
    sample_chain, total_probability_gap, Context, CHAIN_BLOCK,
};
use crate::error::Result;
use crate::kinematics::OutcomeDistribution;
use crate::pointer::{detector_ensemble, fuzziness_resolvable, pointer_basis_select, rebase_joint, spreading_sigma};
use crate::scenario::report::{format_number, Report, Table, SIGNIFICANT_DIGITS};
use crate::scenario::{Body, Scenario};
use crate::tolerance;

pub fn run_scenario(scenario: &Scenario) -> Result<Report> {
    let mut metadata = base_metadata();
    let tables = match scenario.body() {
        Body::Abl(ctx) => run_abl(ctx, &mut metadata)?,
        Body::Chain { context, samples, seed } => run_chain(context, *samples, *seed, &mut metadata)?,
        Body::Gap {
            prepared,
            post_observable,
            post_label,
            intermediate,
        } => {
            let g = total_probability_gap(prepared, post_observable, post_label, intermediate)?;
            vec![Table::label_value(
                "gap",
                [("quantum", g.quantum), ("classical_chain", g.classical_chain), ("gap", g.gap)],
            )]
        }
        Body::Pointer { joint, rebases } => {
            let schmidt = pointer_basis_select(joint)?;
            let names: Vec<String> = (0..schmidt.rank()).map(|k| format!("sigma_{k}")).collect();
            let mut coefficients = Table::label_value(
                "schmidt",
                names.iter().map(String::as_str).zip(schmidt.coefficients().iter().copied()),
            );
            coefficients.push(vec!["rank".into(), schmidt.rank().to_string()]);
            coefficients.push(vec!["non_unique".into(), schmidt.is_non_unique().to_string()]);

            let mut scores = Table::new("orthogonality", &["label", "value"]);
            let schmidt_rebase = rebase_joint(joint, &schmidt.apparatus_basis())?;
            scores.push(vec!["schmidt".into(), format_number(schmidt_rebase.orthogonality_score)]);
            for (name, basis) in rebases {
                let r = rebase_joint(joint, basis)?;
                scores.push(vec![name.clone(), format_number(r.orthogonality_score)]);
            }
            vec![coefficients, scores]
        }
        Body::Spreading {
            sigma0,
            models,
            times,
            resolution,
        } => {
            metadata.insert("sigma0".into(), format_number(*sigma0));
            let mut widths = Table::new("sigma", &["label", "value"]);
            let mut resolvable = Table::new("resolvable", &["label", "value"]);
            for model in models {
                for &t in times {
                    let label = format!("m={};t={}", format_number(model.mass()), format_number(t));
                    let sigma = spreading_sigma(model, t)?;
                    widths.push(vec![label.clone(), format_number(sigma)]);
                    if let Some(r) = resolution {
                        resolvable.push(vec![label, fuzziness_resolvable(sigma, *r).to_string()]);
                    }
                }
            }
            if let Some(r) = resolution {
                metadata.insert("resolution".into(), format_number(*r));
                vec![widths, resolvable]
            } else {
                vec![widths]
            }
        }
        Body::Detector {
            rate,
            tick,
            horizon,
            runs,
            seed,
        } => {
            let ens = detector_ensemble(*rate, *tick, *horizon, *runs, *seed)?;
            metadata.insert("seed".into(), seed.to_string());
            metadata.insert("samples".into(), runs.to_string());
            metadata.insert("rate".into(), format_number(*rate));
            metadata.insert("tick".into(), format_number(*tick));
            metadata.insert("horizon".into(), format_number(*horizon));
            let mut t = Table::new("detector", &["label", "value"]);
            t.push(vec!["runs".into(), ens.runs.to_string()]);
            t.push(vec!["clicks".into(), ens.clicks().to_string()]);
            t.push(vec!["nonclick_facts".into(), ens.nonclick_facts.to_string()]);
            t.push(vec!["malformed".into(), ens.malformed.to_string()]);
            t.push(vec![
                "click_fraction".into(),
                format_number(ens.clicks() as f64 / ens.runs as f64),
            ]);
            if let Some(mean) = ens.mean_click_time() {
                t.push(vec!["mean_click_time".into(), format_number(mean)]);
            }
            if *rate > 0.0 {
                t.push(vec!["ks_statistic".into(), format_number(ens.ks_against_exponential(*rate))]);
            }
            vec![t]
        }
    };
    Ok(Report {
        scenario: scenario.name().to_string(),
        kind: scenario.kind().as_str().to_string(),
        tables,
        metadata,
    })
}

fn base_metadata() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("tool_version".into(), env!("CARGO_PKG_VERSION").to_string());
    m.insert("significant_digits".into(), SIGNIFICANT_DIGITS.to_string());
    for (name, value) in tolerance::table() {
        m.insert(format!("tolerance.{name}"), format_number(value));
    }
    m
}

fn distribution_table(name: &str, d: &OutcomeDistribution) -> Table {
    Table::label_value(name, d.entries().iter().map(|(l, p)| (l.as_str(), *p)))
}

fn run_abl(ctx: &Context, metadata: &mut BTreeMap<String, String>) -> Result<Vec<Table>> {
    metadata.insert("reading".into(), ctx.reading().as_str().to_string());
    let abl = abl_distribution(ctx)?;
    let born = born_context_distribution(ctx)?;
    let certain = abl_element_of_reality(ctx)?;
    metadata.insert(
        "certain_outcome".into(),
        certain.map_or_else(|| "none".to_string(), |e| e.label),
    );
    let checks = Table::label_value(
        "checks",
        [
            ("postselection_probability", abl_weights(ctx)?.total()),
            ("picture_consistency", picture_consistency_check(ctx)?),
        ],
    );
    Ok(vec![distribution_table("abl", &abl), distribution_table("born", &born), checks])
}

fn run_chain(ctx: &Context, samples: u64, seed: u64, metadata: &mut BTreeMap<String, String>) -> Result<Vec<Table>> {
    let analytic = abl_distribution(ctx)?;
    let report = sample_chain(ctx, samples, seed)?;
    let z = report.z_scores(&analytic)?;
    metadata.insert("reading".into(), ctx.reading().as_str().to_string());
    metadata.insert("seed".into(), seed.to_string());
    metadata.insert("samples".into(), samples.to_string());
    metadata.insert("retained".into(), report.retained.to_string());
    metadata.insert("block_size".into(), CHAIN_BLOCK.to_string());

    let mut t = Table::new("chain", &["label", "value", "analytic", "frequency", "zscore"]);
    for (k, label) in report.labels.iter().enumerate() {
        t.push(vec![
            label.clone(),
            report.counts[k].to_string(),
            format_number(analytic.probability(label)?),
            format_number(report.frequencies.probability(label)?),
            format_number(z[k]),
        ]);
    }
    Ok(vec![t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{emit_report, load_scenario_str, Format};

    fn run_preset(name: &str) -> Report {
        run_scenario(&load_scenario_str(&format!("preset = \"{name}\"")).unwrap()).unwrap()
    }

    #[test]
    fn three_box_report() {
        let r = run_preset("three-box");
        assert_eq!(r.table("abl").unwrap().value("box-1"), Some("1.00000000000"));
        assert_eq!(r.table("born").unwrap().value("box-1"), Some("0.333333333333"));
        assert_eq!(r.metadata["reading"], "counterfactual/objective");
        assert_eq!(r.metadata["certain_outcome"], "box-1");
    }

    #[test]
    fn gap_reports() {
        let r = run_preset("two-slit");
        assert_eq!(r.number("gap", "quantum"), Some(1.0));
        assert_eq!(r.number("gap", "classical_chain"), Some(0.5));
        assert_eq!(r.number("gap", "gap"), Some(0.5));
        assert_eq!(run_preset("commuting-triple").number("gap", "gap"), Some(0.0));
    }

    #[test]
    fn pointer_report() {
        let r = run_preset("premeasurement");
        assert_eq!(r.number("orthogonality", "hadamard"), Some(0.2));
        assert_eq!(r.number("orthogonality", "standard"), Some(1.0));
        assert_eq!(r.table("schmidt").unwrap().value("non_unique"), Some("false"));
    }

    #[test]
    fn spreading_report() {
        let r = run_preset("spreading");
        assert_eq!(r.number("sigma", "m=1.00000000000;t=0"), Some(1.0));
        assert_eq!(r.table("resolvable").unwrap().value("m=1.00000000000;t=0"), Some("false"));
    }

    #[test]
    fn chain_report_is_reproducible() {
        let s = load_scenario_str("preset = \"three-box-chain\"\n[sampling]\nsamples = 20000\n").unwrap();
        let a = emit_report(&run_scenario(&s).unwrap(), Format::Csv);
        assert_eq!(a, emit_report(&run_scenario(&s).unwrap(), Format::Csv));
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("label,value,analytic,frequency,zscore\nbox-1,"));
    }

    #[test]
    fn detector_report() {
        let s = load_scenario_str("preset = \"geiger\"\n[detector]\nruns = 200\n").unwrap();
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.table("detector").unwrap().value("runs"), Some("200"));
        assert_eq!(r.table("detector").unwrap().value("malformed"), Some("0"));
    }
}
