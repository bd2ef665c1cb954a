//! Shared command context: resolved config plus table/model loading.

use anyhow::{anyhow, bail, Context as AnyhowContext, Result};
use std::path::Path;

use crate::config::Config;
use sttdse_core::memory::{bundled_tech, ComponentsFile, MemTechTable, MemTechnology};
use sttdse_core::timing::AcceleratorConfig;
use sttdse_core::workload::{bundled, parse_model, Datatype, ModelSpec};

pub struct Ctx {
    pub config: Config,
    sram: MemTechTable,
    mram: Vec<MemTechTable>,
}

impl Ctx {
    pub fn new(config: Config) -> Result<Self> {
        let sram = match &config.memory.sram_table {
            Some(path) => load_table(path)?,
            None => bundled_tech::sram_14nm(),
        };
        if sram.technology != MemTechnology::Sram {
            bail!("memory.sram_table must be an sram table");
        }
        let mram = if config.memory.mram_tables.is_empty() {
            vec![bundled_tech::mram_d27p5_14nm(), bundled_tech::mram_d17p5_14nm()]
        } else {
            config
                .memory
                .mram_tables
                .iter()
                .map(|p| load_table(p))
                .collect::<Result<Vec<_>>>()?
        };
        for t in &mram {
            if t.technology != MemTechnology::Mram {
                bail!("memory.mram_tables entries must be mram tables");
            }
        }
        Ok(Ctx { config, sram, mram })
    }

    pub fn sram_table(&self) -> &MemTechTable {
        &self.sram
    }

    /// MRAM table whose delta tag matches (within rounding).
    pub fn mram_table(&self, delta: f64) -> Result<&MemTechTable> {
        self.mram
            .iter()
            .find(|t| t.delta_tag.map(|d| (d - delta).abs() < 1e-9).unwrap_or(false))
            .ok_or_else(|| {
                let tags: Vec<String> = self
                    .mram
                    .iter()
                    .map(|t| t.delta_tag.map(|d| d.to_string()).unwrap_or_else(|| "untagged".into()))
                    .collect();
                anyhow!(
                    "no MRAM table tagged delta={delta}; available tags: {}",
                    tags.join(", ")
                )
            })
    }

    /// Resolve a model argument: bundled name or JSON file path. An optional
    /// datatype override replaces the file's datatype.
    pub fn resolve_model(&self, spec: &str, datatype: Option<Datatype>) -> Result<ModelSpec> {
        let model = match bundled::by_name(spec) {
            Some(m) => m,
            None => {
                let text = std::fs::read_to_string(spec)
                    .with_context(|| format!("reading model file {spec}"))?;
                parse_model(&text).with_context(|| format!("parsing model file {spec}"))?
            }
        };
        Ok(match datatype {
            Some(dt) => model.with_datatype(dt),
            None => model,
        })
    }

    /// Models from --model flags, falling back to the config's sweep list.
    pub fn resolve_models(
        &self,
        args: &[String],
        datatype: Option<Datatype>,
    ) -> Result<Vec<ModelSpec>> {
        let specs: Vec<String> = if args.is_empty() {
            self.config.sweep.models.clone()
        } else {
            args.to_vec()
        };
        if specs.is_empty() {
            bail!("no models given: pass --model <name|path> (bundled: {})", bundled::NAMES.join(", "));
        }
        specs.iter().map(|s| self.resolve_model(s, datatype)).collect()
    }

    pub fn accelerator(&self) -> AcceleratorConfig {
        self.config.accelerator
    }

    pub fn components(&self, path: Option<&Path>) -> Result<ComponentsFile> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading components file {}", p.display()))?;
                ComponentsFile::parse_csv(&text)
                    .with_context(|| format!("parsing components file {}", p.display()))
            }
            None => Ok(sttdse_core::memory::bundled_components()),
        }
    }
}

fn load_table(path: &Path) -> Result<MemTechTable> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading technology table {}", path.display()))?;
    MemTechTable::parse_csv(&text)
        .with_context(|| format!("parsing technology table {}", path.display()))
}

/// Parse a "HxW" MAC grid into (h_mac, w_mac).
pub fn parse_mac_array(s: &str) -> Result<(u64, u64)> {
    let (h, w) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("mac_array must look like 42x42, got {s:?}"))?;
    let h: u64 = h.trim().parse().map_err(|_| anyhow!("bad mac_array height in {s:?}"))?;
    let w: u64 = w.trim().parse().map_err(|_| anyhow!("bad mac_array width in {s:?}"))?;
    if h == 0 || w == 0 {
        bail!("mac_array dimensions must be positive, got {s:?}");
    }
    Ok((h, w))
}

/// Accelerator config for a MAC grid: `h` MAC rows and `w` MACs per row,
/// where `w` must divide into `p_s`-MAC blocks.
pub fn accelerator_for_grid(base: &AcceleratorConfig, h: u64, w: u64) -> Result<AcceleratorConfig> {
    if w % base.p_s != 0 {
        bail!("mac grid width {w} is not a multiple of the {}-MAC block size", base.p_s);
    }
    Ok(AcceleratorConfig { h_a: h, w_a: w / base.p_s, ..*base })
}
