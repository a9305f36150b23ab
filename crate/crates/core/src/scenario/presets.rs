//! Scenario presets shipped with the tool.

const PRESETS: &[(&str, &str)] = &[
    ("three-box", include_str!("../../presets/three-box.toml")),
    ("three-box-chain", include_str!("../../presets/three-box-chain.toml")),
    ("two-slit", include_str!("../../presets/two-slit.toml")),
    ("commuting-triple", include_str!("../../presets/commuting-triple.toml")),
    ("premeasurement", include_str!("../../presets/premeasurement.toml")),
    ("spreading", include_str!("../../presets/spreading.toml")),
    ("geiger", include_str!("../../presets/geiger.toml")),
    ("lyman-alpha", include_str!("../../presets/lyman-alpha.toml")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(name, _)| *name).collect()
}

/// TOML source of a preset.
pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
