//! Built-in presets, embedded from the versioned files under `presets/`.

use crate::manifest::RunManifest;
use crate::CliError;

const PRESETS: &[(&str, &str)] = &[
    ("fig1-static", include_str!("../presets/fig1-static.toml")),
    ("triangle-line", include_str!("../presets/triangle-line.toml")),
    (
        "triangle-nested",
        include_str!("../presets/triangle-nested.toml"),
    ),
    (
        "quadratic-perturbed",
        include_str!("../presets/quadratic-perturbed.toml"),
    ),
    ("supersphere", include_str!("../presets/supersphere.toml")),
    (
        "layered-start-box",
        include_str!("../presets/layered-start-box.toml"),
    ),
    (
        "recovery-h4-mag",
        include_str!("../presets/recovery-h4-mag.toml"),
    ),
    (
        "recovery-h4-hv",
        include_str!("../presets/recovery-h4-hv.toml"),
    ),
    (
        "recovery-h5-mag",
        include_str!("../presets/recovery-h5-mag.toml"),
    ),
    (
        "recovery-h5-hv",
        include_str!("../presets/recovery-h5-hv.toml"),
    ),
    (
        "hillclimb-reference",
        include_str!("../presets/hillclimb-reference.toml"),
    ),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(name, _)| *name).collect()
}

pub fn load_preset(name: &str) -> Result<RunManifest, CliError> {
    let wanted = name.to_ascii_lowercase();
    for (key, text) in PRESETS {
        if *key == wanted {
            return RunManifest::from_toml(text);
        }
    }
    Err(CliError::Usage(format!(
        "unknown preset `{name}`; available: {}",
        preset_names().join(", ")
    )))
}
