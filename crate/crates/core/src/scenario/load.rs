use std::path::Path;

use num_complex::Complex64;

use crate::context::{Context, Intermediate, PostSelection, Preparation};
use crate::error::{Error, Result};
use crate::kinematics::{Outcome, ProjectiveDecomposition, StateVector};
use crate::linalg::{ComplexMatrix, HermitianOperator, Projector};
use crate::pointer::{JointState, SpreadingModel};
use crate::scenario::presets;
use crate::scenario::schema::*;

/// Samples drawn by a chain scenario without a `[sampling]` entry.
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_PREPARATION_TIME: f64 = 0.0;
pub const DEFAULT_INTERMEDIATE_TIME: f64 = 0.5;
pub const DEFAULT_POSTSELECTION_TIME: f64 = 1.0;

/// A validated scenario ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    file: ScenarioFile,
    body: Body,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Abl(Context),
    Chain {
        context: Context,
        samples: u64,
        seed: u64,
    },
    Gap {
        prepared: StateVector,
        post_observable: ProjectiveDecomposition,
        post_label: String,
        intermediate: ProjectiveDecomposition,
    },
    Pointer {
        joint: JointState,
        rebases: Vec<(String, Vec<StateVector>)>,
    },
    Spreading {
        sigma0: f64,
        models: Vec<SpreadingModel>,
        times: Vec<f64>,
        resolution: Option<f64>,
    },
    Detector {
        rate: f64,
        tick: f64,
        horizon: f64,
        runs: u64,
        seed: u64,
    },
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        let body = build_body(&file)?;
        Ok(Self { file, body })
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn kind(&self) -> Kind {
        self.file.kind
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    /// Replace the seed of a chain or detector scenario. Other kinds ignore it.
    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self.body {
            Body::Chain { seed: s, .. } => {
                *s = seed;
                self.file.sampling.get_or_insert_with(SamplingSpec::default).seed = Some(seed);
            }
            Body::Detector { seed: s, .. } => {
                *s = seed;
                if let Some(d) = &mut self.file.detector {
                    d.seed = Some(seed);
                }
            }
            _ => {}
        }
        self
    }

    /// Replace the chain sample count or the detector run count.
    pub fn with_samples(mut self, samples: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        match &mut self.body {
            Body::Chain { samples: n, .. } => {
                *n = samples;
                self.file.sampling.get_or_insert_with(SamplingSpec::default).samples = Some(samples);
            }
            Body::Detector { runs, .. } => {
                *runs = samples;
                if let Some(d) = &mut self.file.detector {
                    d.runs = Some(samples);
                }
            }
            _ => {}
        }
        Ok(self)
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    load_scenario_str(&text)
}

/// Parse scenario text, expanding a top-level `preset = "<name>"` into the
/// preset's parameters. Keys given next to `preset` override the preset's.
pub fn load_scenario_str(text: &str) -> Result<Scenario> {
    Scenario::from_file(parse_scenario_file(text)?)
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile> {
    let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    if let Some(preset) = table.remove("preset") {
        let name = preset
            .as_str()
            .ok_or_else(|| Error::Parse("`preset` must be a string".into()))?;
        let source = presets::preset(name).ok_or_else(|| Error::Invariant {
            field: "preset".into(),
            message: format!("unknown preset `{name}`"),
        })?;
        let mut base: toml::Table = toml::from_str(source).expect("presets are valid TOML");
        merge(&mut base, table);
        table = base;
    }
    table
        .try_into()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string().trim_end().to_string()))
}

fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

fn require<'a, T>(section: &'a Option<T>, field: &str, kind: Kind) -> Result<&'a T> {
    section.as_ref().ok_or_else(|| Error::MissingField {
        field: field.to_string(),
        context: format!("required for kind {}", kind.as_str()),
    })
}

fn build_body(file: &ScenarioFile) -> Result<Body> {
    let kind = file.kind;
    match kind {
        Kind::Abl => Ok(Body::Abl(build_context(file)?)),
        Kind::Chain => {
            let context = build_context(file)?;
            let sampling = file.sampling.clone().unwrap_or_default();
            let samples = sampling.samples.unwrap_or(DEFAULT_SAMPLES);
            if samples == 0 {
                return Err(Error::InvalidArgument("samples must be at least 1".into()).in_field("sampling.samples"));
            }
            Ok(Body::Chain {
                context,
                samples,
                seed: sampling.seed.unwrap_or(0),
            })
        }
        Kind::Gap => {
            let prep = require(&file.preparation, "preparation", kind)?;
            let mid = require(&file.intermediate, "intermediate", kind)?;
            let post = require(&file.postselection, "postselection", kind)?;
            let prepared = state(&prep.state, "preparation.state")?;
            let intermediate = observable(&mid.observable, "intermediate.observable")?;
            let post_observable = observable(&post.observable, "postselection.observable")?;
            post_observable
                .index_of(&post.label)
                .map_err(|e| e.in_field("postselection.label"))?;
            Ok(Body::Gap {
                prepared,
                post_observable,
                post_label: post.label.clone(),
                intermediate,
            })
        }
        Kind::Pointer => {
            let p = require(&file.pointer, "pointer", kind)?;
            let coeffs: Vec<Complex64> = p.coefficients.iter().map(pair).collect();
            let n = coeffs.len();
            let system = match &p.system_basis {
                Some(b) => states(b, "pointer.system_basis")?,
                None => standard_basis(n),
            };
            let apparatus = match &p.apparatus_basis {
                Some(b) => states(b, "pointer.apparatus_basis")?,
                None => standard_basis(n),
            };
            let joint = crate::pointer::premeasurement_joint(&coeffs, &system, &apparatus)
                .map_err(|e| e.in_field("pointer.coefficients"))?;
            let rebases = p
                .rebase
                .iter()
                .enumerate()
                .map(|(k, r)| Ok((r.name.clone(), states(&r.basis, &format!("pointer.rebase[{k}].basis"))?)))
                .collect::<Result<_>>()?;
            Ok(Body::Pointer { joint, rebases })
        }
        Kind::Spreading => {
            let s = require(&file.spreading, "spreading", kind)?;
            let models = s
                .masses
                .iter()
                .map(|&m| SpreadingModel::new(s.sigma0, m))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.in_field("spreading"))?;
            if models.is_empty() || s.times.is_empty() {
                return Err(Error::InvalidArgument("masses and times must be non-empty".into()).in_field("spreading"));
            }
            if let Some(bad) = s.times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                return Err(Error::InvalidArgument(format!("time {bad} is negative")).in_field("spreading.times"));
            }
            if let Some(r) = s.resolution {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::InvalidArgument(format!("resolution {r} is not positive"))
                        .in_field("spreading.resolution"));
                }
            }
            Ok(Body::Spreading {
                sigma0: s.sigma0,
                models,
                times: s.times.clone(),
                resolution: s.resolution,
            })
        }
        Kind::Detector => {
            let d = require(&file.detector, "detector", kind)?;
            crate::pointer::check_detector_parameters(d.rate, d.tick, d.horizon).map_err(|e| e.in_field("detector"))?;
            let runs = d.runs.unwrap_or(1);
            if runs == 0 {
                return Err(Error::InvalidArgument("runs must be at least 1".into()).in_field("detector.runs"));
            }
            Ok(Body::Detector {
                rate: d.rate,
                tick: d.tick,
                horizon: d.horizon,
                runs,
                seed: d.seed.unwrap_or(0),
            })
        }
    }
}

fn build_context(file: &ScenarioFile) -> Result<Context> {
    let kind = file.kind;
    let prep = require(&file.preparation, "preparation", kind)?;
    let mid = require(&file.intermediate, "intermediate", kind)?;
    let post = require(&file.postselection, "postselection", kind)?;
    let prepared = state(&prep.state, "preparation.state")?;
    let dim = prepared.dim();
    let hamiltonian = match &file.hamiltonian {
        Some(h) => HermitianOperator::new(matrix(&h.matrix, "hamiltonian.matrix")?)
            .map_err(|e| e.in_field("hamiltonian.matrix"))?,
        None => HermitianOperator::zero(dim),
    };
    let post_observable = observable(&post.observable, "postselection.observable")?;
    post_observable
        .index_of(&post.label)
        .map_err(|e| e.in_field("postselection.label"))?;
    Context::new(
        Preparation {
            state: prepared,
            time: prep.time.unwrap_or(DEFAULT_PREPARATION_TIME),
        },
        Some(Intermediate {
            observable: observable(&mid.observable, "intermediate.observable")?,
            time: mid.time.unwrap_or(DEFAULT_INTERMEDIATE_TIME),
            performed: mid.performed.unwrap_or(true),
        }),
        PostSelection {
            observable: post_observable,
            label: post.label.clone(),
            time: post.time.unwrap_or(DEFAULT_POSTSELECTION_TIME),
        },
        hamiltonian,
    )
    .map_err(|e| e.in_field("context"))
}

fn pair(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn standard_basis(dim: usize) -> Vec<StateVector> {
    (0..dim).map(|k| StateVector::basis(dim, k)).collect()
}

fn state(input: &StateSpec, field: &str) -> Result<StateVector> {
    let built = match input {
        StateSpec::Amplitudes(a) => StateVector::new(a.iter().map(pair).collect()),
        StateSpec::Normalize { normalize } => StateVector::normalized(normalize.iter().map(pair).collect()),
        StateSpec::Basis { basis, dim } => {
            if basis >= dim {
                Err(Error::InvalidArgument(format!("basis index {basis} out of range for dimension {dim}")))
            } else {
                Ok(StateVector::basis(*dim, *basis))
            }
        }
    };
    built.map_err(|e| e.in_field(field))
}

fn states(inputs: &[StateSpec], field: &str) -> Result<Vec<StateVector>> {
    inputs
        .iter()
        .enumerate()
        .map(|(k, s)| state(s, &format!("{field}[{k}]")))
        .collect()
}

fn matrix(input: &MatrixSpec, field: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = input.iter().map(|r| r.iter().map(pair).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| e.in_field(field))
}

fn observable(input: &ObservableSpec, field: &str) -> Result<ProjectiveDecomposition> {
    let table = match input {
        ObservableSpec::Named(name) => {
            return ProjectiveDecomposition::preset(name).ok_or_else(|| Error::Invariant {
                field: field.to_string(),
                message: format!("unknown observable `{name}` (expected X, Y or Z)"),
            })
        }
        ObservableSpec::Table(t) => t,
    };
    let given = [table.basis.is_some(), table.projectors.is_some(), table.split.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::Invariant {
            field: field.to_string(),
            message: "give exactly one of `basis`, `projectors` or `split`".into(),
        });
    }

    if let Some(s) = &table.split {
        let target = state(s, &format!("{field}.split"))?;
        let label = table.label.as_deref().ok_or_else(|| Error::MissingField {
            field: format!("{field}.label"),
            context: "required with `split`".into(),
        })?;
        let complement = table.complement.as_deref().ok_or_else(|| Error::MissingField {
            field: format!("{field}.complement"),
            context: "required with `split`".into(),
        })?;
        return ProjectiveDecomposition::split_on_state(&target, label, complement).map_err(|e| e.in_field(field));
    }

    let count = table
        .basis
        .as_ref()
        .map(Vec::len)
        .or(table.projectors.as_ref().map(Vec::len))
        .unwrap_or(0);
    let labels: Vec<String> = table
        .labels
        .clone()
        .unwrap_or_else(|| (0..count).map(|k| k.to_string()).collect());
    let values: Vec<f64> = table
        .values
        .clone()
        .unwrap_or_else(|| (0..count).map(|k| k as f64).collect());
    if labels.len() != count || values.len() != count {
        return Err(Error::Invariant {
            field: field.to_string(),
            message: format!("{count} outcomes, {} labels, {} values", labels.len(), values.len()),
        });
    }

    if let Some(basis) = &table.basis {
        let basis = states(basis, &format!("{field}.basis"))?;
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        return ProjectiveDecomposition::from_basis(&basis, &labels, &values).map_err(|e| e.in_field(field));
    }

    let projectors = table.projectors.as_deref().unwrap_or_default();
    let outcomes = projectors
        .iter()
        .zip(labels)
        .zip(values)
        .enumerate()
        .map(|(k, ((m, label), value))| {
            let sub = format!("{field}.projectors[{k}]");
            let projector = Projector::new(matrix(m, &sub)?).map_err(|e| e.in_field(&sub))?;
            Ok(Outcome { label, value, projector })
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectiveDecomposition::new(outcomes).map_err(|e| e.in_field(field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::abl_distribution;

    const THREE_BOX: &str = r#"
name = "three-box"
kind = "abl"

[preparation]
state = { normalize = [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]] }

[intermediate]
observable = { split = { basis = 0, dim = 3 }, label = "box-1", complement = "not-box-1" }

[postselection]
observable = { split = { normalize = [[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]] }, label = "b", complement = "not-b" }
label = "b"
"#;

    #[test]
    fn loads_inline_three_box() {
        let s = load_scenario_str(THREE_BOX).unwrap();
        let Body::Abl(ctx) = s.body() else { panic!("wrong body") };
        assert!((abl_distribution(ctx).unwrap().probability("box-1").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_postselection_is_field_error() {
        let text = THREE_BOX.split("[postselection]").next().unwrap();
        let err = load_scenario_str(text).unwrap_err();
        assert_eq!(
            err,
            Error::MissingField {
                field: "postselection".into(),
                context: "required for kind abl".into()
            }
        );
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unnormalized_state_names_field() {
        let text = THREE_BOX.replace(
            "state = { normalize = [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]] }",
            "state = [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]",
        );
        match load_scenario_str(&text).unwrap_err() {
            Error::Invariant { field, .. } => assert_eq!(field, "preparation.state"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = load_scenario_str("name = \"x\"\nkind = abl\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_key_is_parse_error() {
        let err = load_scenario_str(&format!("{THREE_BOX}\n[sampling]\nsampels = 3\n")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn bad_label_and_observable() {
        let text = THREE_BOX.replace("label = \"b\"\n", "label = \"c\"\n");
        assert!(matches!(load_scenario_str(&text), Err(Error::Invariant { field, .. }) if field == "postselection.label"));
        let text = THREE_BOX.replace("observable = { split = { basis = 0, dim = 3 }, label = \"box-1\", complement = \"not-box-1\" }", "observable = \"W\"");
        assert!(matches!(load_scenario_str(&text), Err(Error::Invariant { field, .. }) if field == "intermediate.observable"));
    }

    #[test]
    fn preset_with_overrides() {
        let s = load_scenario_str("preset = \"three-box-chain\"\n[sampling]\nseed = 9\n").unwrap();
        match s.body() {
            Body::Chain { seed, samples, .. } => {
                assert_eq!(*seed, 9);
                assert_eq!(*samples, DEFAULT_SAMPLES);
            }
            _ => panic!("wrong body"),
        }
        assert!(matches!(load_scenario_str("preset = \"nope\""), Err(Error::Invariant { .. })));
    }

    #[test]
    fn explicit_projectors_and_hamiltonian() {
        let text = r#"
name = "z-rotation"
kind = "abl"
[preparation]
state = [[1.0, 0.0], [0.0, 0.0]]
[intermediate]
observable = { projectors = [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]], [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]], labels = ["up", "down"] }
time = 0.3
[postselection]
observable = "X"
label = "+1"
time = 0.9
[hamiltonian]
matrix = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
"#;
        let s = load_scenario_str(text).unwrap();
        let Body::Abl(ctx) = s.body() else { panic!() };
        assert_eq!(ctx.intermediate().unwrap().time, 0.3);
        assert!(!ctx.hamiltonian().is_zero());
    }
}
