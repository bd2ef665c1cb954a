//! Global JSON config: one file with sections for every model domain, plus
//! dotted-path overrides from the command line.
//!
//! Every section and field has a default, so an empty config is valid. A
//! config file supplies any subset; `--set section.key=value` overrides
//! individual keys on top of that.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};

use sttdse_core::guardband::VariationProfile;
use sttdse_core::inject::BerProfile;
use sttdse_core::memory::DramConfig;
use sttdse_core::mtj::{CurrentKnobs, MtjTechParams, RetentionTargets};
use sttdse_core::timing::AcceleratorConfig;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "STTDSE_CONFIG";

fn default_schema_version() -> u32 {
    1
}

/// MTJ section: technology parameters plus the solve targets and knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MtjSection {
    pub params: MtjTechParams,
    pub targets: RetentionTargets,
    pub knobs: CurrentKnobs,
    /// Write-driver levels reported by the guardband command.
    pub driver_levels: usize,
}

impl Default for MtjSection {
    fn default() -> Self {
        MtjSection {
            params: MtjTechParams::default(),
            targets: RetentionTargets::default(),
            knobs: CurrentKnobs::default(),
            driver_levels: 4,
        }
    }
}

/// Memory section: technology table sources and buffer geometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemorySection {
    /// SRAM table CSV path; bundled 14 nm table when unset.
    pub sram_table: Option<PathBuf>,
    /// MRAM table CSV paths; bundled 14 nm tables (delta 27.5 / 17.5) when empty.
    pub mram_tables: Vec<PathBuf>,
    /// Global buffer capacity, bytes.
    pub glb_bytes: u64,
    /// Scratchpad capacity, bytes.
    pub scratch_bytes: u64,
    /// Access width all traffic is expressed in, bytes.
    pub access_width_bytes: u64,
    /// delta tag selecting the MRAM table backing the global buffer.
    pub glb_delta: f64,
}

impl Default for MemorySection {
    fn default() -> Self {
        MemorySection {
            sram_table: None,
            mram_tables: Vec::new(),
            glb_bytes: 12 * 1024 * 1024,
            scratch_bytes: 52 * 1024,
            access_width_bytes: 32,
            glb_delta: 27.5,
        }
    }
}

/// Sweep axes. An empty axis means "use the single value from the rest of
/// the config" (or the model's own datatype).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub glb_bytes: Vec<u64>,
    pub batch: Vec<u64>,
    /// MAC grid sizes as "HxW" strings, e.g. "42x42".
    pub mac_array: Vec<String>,
    /// delta tags selecting MRAM tables.
    pub delta: Vec<f64>,
    /// "int8" / "bf16"; empty keeps each model's own datatype.
    pub datatype: Vec<String>,
}

/// Sweep section: axes, model list, and the design-point cap.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub axes: SweepAxes,
    /// Model files or bundled names; used when a command gets no --model.
    pub models: Vec<String>,
    /// Refuse sweeps with more design points than this.
    pub max_points: u64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { axes: SweepAxes::default(), models: Vec::new(), max_points: 4096 }
    }
}

/// The whole config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub mtj: MtjSection,
    pub variation: VariationProfile,
    pub accelerator: AcceleratorConfig,
    pub memory: MemorySection,
    pub dram: DramConfig,
    pub ber: BerProfile,
    pub sweep: SweepSection,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            bail!("unsupported config schema_version {}", self.schema_version);
        }
        if self.memory.glb_bytes == 0
            || self.memory.scratch_bytes == 0
            || self.memory.access_width_bytes == 0
        {
            bail!("memory capacities and access width must be positive");
        }
        if self.sweep.max_points == 0 {
            bail!("sweep.max_points must be positive");
        }
        Ok(())
    }
}

/// Load the config: explicit path, else $STTDSE_CONFIG, else built-in
/// defaults; then apply `--set path.to.key=value` overrides.
pub fn load(path: Option<&Path>, sets: &[String]) -> Result<Config> {
    let resolved: Option<PathBuf> = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV).map(PathBuf::from),
    };
    let mut value = match &resolved {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", p.display()))?
        }
        None => Value::Object(Default::default()),
    };
    for set in sets {
        apply_set(&mut value, set)?;
    }
    let config: Config = serde_path_to_error::deserialize(value)
        .map_err(|e| anyhow!("config key {}: {}", e.path(), e.inner()))?;
    config.validate()?;
    Ok(config)
}

/// Apply one `dotted.path=value` override. The value parses as JSON when
/// possible and falls back to a plain string.
fn apply_set(root: &mut Value, set: &str) -> Result<()> {
    let (path, raw) = set
        .split_once('=')
        .ok_or_else(|| anyhow!("--set expects KEY=VALUE, got {set:?}"))?;
    if path.is_empty() {
        bail!("--set key must not be empty");
    }
    let value: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let map = node
            .as_object_mut()
            .ok_or_else(|| anyhow!("--set {path}: {} is not an object", parts[..i].join(".")))?;
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let config = load(None, &[]).unwrap();
        config.validate().unwrap();
        assert_eq!(config.mtj.params.tau_retention, 1.0);
        assert_eq!(config.mtj.params.tau_write, 1e-9);
        assert_eq!(config.accelerator.w_a, 14);
        assert_eq!(config.memory.glb_bytes, 12 * 1024 * 1024);
        assert!(config.dram.energy_per_byte_pj.is_none());
    }

    #[test]
    fn set_overrides_nested_keys() {
        let sets = vec![
            "mtj.targets.ber_rf=1e-9".to_string(),
            "mtj.targets.t_ret=94672800.0".to_string(),
            "accelerator.h_a=21".to_string(),
            "sweep.axes.datatype=[\"bf16\"]".to_string(),
        ];
        let config = load(None, &sets).unwrap();
        assert_eq!(config.mtj.targets.ber_rf, 1e-9);
        assert_eq!(config.mtj.targets.t_ret, 94_672_800.0);
        assert_eq!(config.accelerator.h_a, 21);
        assert_eq!(config.sweep.axes.datatype, vec!["bf16".to_string()]);
    }

    #[test]
    fn bad_sets_are_rejected() {
        assert!(load(None, &["no_equals_sign".to_string()]).is_err());
        assert!(load(None, &["mtj.params.tau_retention.x=1".to_string()]).is_err());
        // Unknown fields are rejected by the schema.
        assert!(load(None, &["mtj.bogus=1".to_string()]).is_err());
    }
}
