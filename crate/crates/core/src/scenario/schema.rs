//! Scenario files as written on disk, before validation.

use serde::{Deserialize, Serialize};

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

/// A matrix as rows of `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<Pair>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Abl,
    Gap,
    Chain,
    Pointer,
    Spreading,
    Detector,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Abl => "abl",
            Kind::Gap => "gap",
            Kind::Chain => "chain",
            Kind::Pointer => "pointer",
            Kind::Spreading => "spreading",
            Kind::Detector => "detector",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preparation: Option<PreparationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediate: Option<IntermediateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub postselection: Option<PostSelectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointer: Option<PointerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spreading: Option<SpreadingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorSpec>,
}

/// A pure state: explicit unit-norm amplitudes, amplitudes to be
/// normalized, or a standard basis vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Amplitudes(Vec<Pair>),
    Normalize {
        normalize: Vec<Pair>,
    },
    Basis {
        basis: usize,
        dim: usize,
    },
}

/// A named observable ("X", "Y", "Z") or an explicit decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Named(String),
    Table(ObservableTable),
}

/// Exactly one of `basis`, `projectors` or `split` must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<StateSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreparationSpec {
    pub state: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntermediateSpec {
    pub observable: ObservableSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub performed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostSelectionSpec {
    pub observable: ObservableSpec,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub matrix: MatrixSpec,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointerSpec {
    pub coefficients: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_basis: Option<Vec<StateSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apparatus_basis: Option<Vec<StateSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rebase: Vec<RebaseSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RebaseSpec {
    pub name: String,
    pub basis: Vec<StateSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadingSpec {
    pub sigma0: f64,
    pub masses: Vec<f64>,
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSpec {
    pub rate: f64,
    pub tick: f64,
    pub horizon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}
