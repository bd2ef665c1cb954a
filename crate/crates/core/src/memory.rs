//! Capacity-parameterized SRAM/MRAM technology tables, the DRAM overflow
//! model, and the accelerator area/power roll-up.
//!
//! Technology tables replace a circuit-level memory compiler: users supply
//! `capacity,area,read_e,write_e,leak,width` knots extracted from their own
//! tooling and queries interpolate log-log between them (geometric-mean at
//! the log midpoint, exact at knots, no extrapolation).

use crate::error::{Error, Result};
use crate::workload::{layer_footprint, LayerSpec, ModelSpec};
use serde::{Deserialize, Serialize};

/// Memory technology of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemTechnology {
    Sram,
    Mram,
}

impl MemTechnology {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sram" => Ok(MemTechnology::Sram),
            "mram" => Ok(MemTechnology::Mram),
            other => Err(Error::Parse(format!("unknown memory technology {other:?}"))),
        }
    }
}

/// One capacity point of a technology table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemTechPoint {
    pub capacity_bytes: u64,
    pub area_mm2: f64,
    /// Read energy per access, pJ.
    pub read_energy_pj: f64,
    /// Write energy per access, pJ.
    pub write_energy_pj: f64,
    /// Leakage power, mW.
    pub leakage_mw: f64,
    /// Access width the energies refer to, bytes.
    pub access_width_bytes: u64,
}

/// Capacity-indexed technology table, strictly increasing in capacity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemTechTable {
    pub technology: MemTechnology,
    /// Thermal stability factor the MRAM table was extracted at, if any.
    pub delta_tag: Option<f64>,
    pub points: Vec<MemTechPoint>,
}

impl MemTechTable {
    pub fn validate(&self) -> Result<()> {
        if self.points.len() < 2 {
            return Err(Error::Validation(
                "technology table needs at least 2 points for interpolation".to_string(),
            ));
        }
        let width = self.points[0].access_width_bytes;
        for (i, p) in self.points.iter().enumerate() {
            if p.capacity_bytes == 0
                || !(p.area_mm2 > 0.0)
                || !(p.read_energy_pj > 0.0)
                || !(p.write_energy_pj > 0.0)
                || !(p.leakage_mw > 0.0)
                || p.access_width_bytes == 0
            {
                return Err(Error::Validation(format!(
                    "technology table point {i} has a non-positive field"
                )));
            }
            if p.access_width_bytes != width {
                return Err(Error::Validation(
                    "all points of a table must share one access width".to_string(),
                ));
            }
            if i > 0 && p.capacity_bytes <= self.points[i - 1].capacity_bytes {
                return Err(Error::Validation(
                    "table capacities must be strictly increasing".to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Log-log interpolate every field at the given capacity. Exact at
    /// knots; capacities outside the covered range are an error.
    pub fn interpolate(&self, capacity_bytes: u64) -> Result<MemTechPoint> {
        self.validate()?;
        let first = self.points.first().unwrap();
        let last = self.points.last().unwrap();
        if capacity_bytes < first.capacity_bytes || capacity_bytes > last.capacity_bytes {
            return Err(Error::OutOfRange(format!(
                "capacity {capacity_bytes} B outside table range [{}, {}] B",
                first.capacity_bytes, last.capacity_bytes
            )));
        }
        if let Some(hit) = self.points.iter().find(|p| p.capacity_bytes == capacity_bytes) {
            return Ok(*hit);
        }
        let hi = self
            .points
            .iter()
            .position(|p| p.capacity_bytes > capacity_bytes)
            .unwrap();
        let (lo, hi) = (&self.points[hi - 1], &self.points[hi]);
        let t = ((capacity_bytes as f64).ln() - (lo.capacity_bytes as f64).ln())
            / ((hi.capacity_bytes as f64).ln() - (lo.capacity_bytes as f64).ln());
        let blend = |a: f64, b: f64| (a.ln() * (1.0 - t) + b.ln() * t).exp();
        Ok(MemTechPoint {
            capacity_bytes,
            area_mm2: blend(lo.area_mm2, hi.area_mm2),
            read_energy_pj: blend(lo.read_energy_pj, hi.read_energy_pj),
            write_energy_pj: blend(lo.write_energy_pj, hi.write_energy_pj),
            leakage_mw: blend(lo.leakage_mw, hi.leakage_mw),
            access_width_bytes: lo.access_width_bytes,
        })
    }

    /// Parse a table from CSV text.
    ///
    /// Directive lines (`# key: value`) carry `schema_version` (required, 1),
    /// `technology` (required) and `delta` (optional). Data columns:
    /// `capacity,area,read_e,write_e,leak,width`.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut schema: Option<u32> = None;
        let mut technology: Option<MemTechnology> = None;
        let mut delta_tag: Option<f64> = None;
        let mut points = Vec::new();
        let mut saw_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((key, value)) = rest.split_once(':') {
                    let (key, value) = (key.trim(), value.trim());
                    match key {
                        "schema_version" => {
                            schema = Some(value.parse().map_err(|_| {
                                Error::Parse(format!("line {}: bad schema_version", lineno + 1))
                            })?)
                        }
                        "technology" => technology = Some(MemTechnology::parse(value)?),
                        "delta" => {
                            delta_tag = Some(value.parse().map_err(|_| {
                                Error::Parse(format!("line {}: bad delta tag", lineno + 1))
                            })?)
                        }
                        _ => {
                            return Err(Error::Parse(format!(
                                "line {}: unknown directive {key:?}",
                                lineno + 1
                            )))
                        }
                    }
                }
                continue;
            }
            if !saw_header {
                if line != "capacity,area,read_e,write_e,leak,width" {
                    return Err(Error::Parse(format!(
                        "line {}: expected header capacity,area,read_e,write_e,leak,width",
                        lineno + 1
                    )));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(Error::Parse(format!(
                    "line {}: expected 6 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |i: usize| -> Result<f64> {
                fields[i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {:?}", lineno + 1, fields[i])))
            };
            points.push(MemTechPoint {
                capacity_bytes: num(0)? as u64,
                area_mm2: num(1)?,
                read_energy_pj: num(2)?,
                write_energy_pj: num(3)?,
                leakage_mw: num(4)?,
                access_width_bytes: num(5)? as u64,
            });
        }
        match schema {
            Some(1) => {}
            Some(v) => {
                return Err(Error::Validation(format!("unsupported table schema_version {v}")))
            }
            None => return Err(Error::Parse("missing # schema_version directive".to_string())),
        }
        let technology = technology
            .ok_or_else(|| Error::Parse("missing # technology directive".to_string()))?;
        let table = MemTechTable { technology, delta_tag, points };
        table.validate()?;
        Ok(table)
    }
}

/// Bundled 14 nm technology tables.
pub mod bundled_tech {
    use super::MemTechTable;

    /// SRAM table covering scratchpad to buffer capacities.
    pub fn sram_14nm() -> MemTechTable {
        MemTechTable::parse_csv(include_str!("../data/tech/sram_14nm.csv"))
            .expect("bundled sram table")
    }

    /// MRAM global-buffer table at guard-banded delta 27.5.
    pub fn mram_d27p5_14nm() -> MemTechTable {
        MemTechTable::parse_csv(include_str!("../data/tech/mram_d27p5_14nm.csv"))
            .expect("bundled mram 27.5 table")
    }

    /// Relaxed-BER MRAM table at guard-banded delta 17.5 (LSB bank).
    pub fn mram_d17p5_14nm() -> MemTechTable {
        MemTechTable::parse_csv(include_str!("../data/tech/mram_d17p5_14nm.csv"))
            .expect("bundled mram 17.5 table")
    }
}

// ---------------------------------------------------------------------------
// DRAM model
// ---------------------------------------------------------------------------

/// Off-chip DRAM channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DramConfig {
    pub channels: u64,
    /// Transfer rate, MT/s.
    pub transfer_rate_mts: f64,
    /// Bytes moved per transfer (bus width).
    pub bus_bytes: u64,
    /// Access energy, pJ/B. No default: must be supplied explicitly when
    /// energy figures are requested.
    pub energy_per_byte_pj: Option<f64>,
}

impl Default for DramConfig {
    fn default() -> Self {
        // Dual-channel DDR4-2933 with a 64-bit bus.
        DramConfig {
            channels: 2,
            transfer_rate_mts: 2933.0,
            bus_bytes: 8,
            energy_per_byte_pj: None,
        }
    }
}

/// Peak DRAM bandwidth, bytes/s: `channels * rate * 1e6 * bus_bytes`.
pub fn dram_bandwidth(cfg: &DramConfig) -> Result<f64> {
    if cfg.channels == 0 || cfg.bus_bytes == 0 || !(cfg.transfer_rate_mts > 0.0) {
        return Err(Error::Validation(
            "DRAM channels, bus width and transfer rate must be positive".to_string(),
        ));
    }
    Ok(cfg.channels as f64 * cfg.transfer_rate_mts * 1e6 * cfg.bus_bytes as f64)
}

/// Latency and energy of extra DRAM traffic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtraDramCost {
    pub seconds: f64,
    pub joules: f64,
}

/// Convert overflow traffic to latency (`traffic/bandwidth`) and energy
/// (`traffic * energy_per_byte`). Requires `energy_per_byte_pj` to be set.
pub fn extra_dram_cost(traffic_bytes: u64, cfg: &DramConfig) -> Result<ExtraDramCost> {
    let bandwidth = dram_bandwidth(cfg)?;
    let e_per_byte = cfg.energy_per_byte_pj.ok_or_else(|| {
        Error::Validation(
            "dram.energy_per_byte_pj is required for energy figures; set it in the config"
                .to_string(),
        )
    })?;
    if !(e_per_byte >= 0.0) {
        return Err(Error::Validation("energy_per_byte_pj must be non-negative".to_string()));
    }
    Ok(ExtraDramCost {
        seconds: traffic_bytes as f64 / bandwidth,
        joules: traffic_bytes as f64 * e_per_byte * 1e-12,
    })
}

/// Per-layer overflow beyond the global buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerSpill {
    pub layer: usize,
    pub bytes: u64,
}

/// Overflow traffic summary for a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtraTraffic {
    /// Layers that spill, with the spilled byte count.
    pub per_layer: Vec<LayerSpill>,
    pub total_bytes: u64,
}

/// Extra DRAM traffic when working sets exceed the global buffer: each conv
/// layer spills `max(0, working_set - glb_bytes)` once per execution; FC,
/// pool, and ReLU layers are measured on feature maps only.
pub fn extra_dram_traffic(model: &ModelSpec, batch: u64, glb_bytes: u64) -> Result<ExtraTraffic> {
    let b = model.datatype.bytes();
    let mut per_layer = Vec::new();
    let mut total = 0u64;
    for (idx, layer) in model.layers.iter().enumerate() {
        let f = layer_footprint(layer, batch, b)
            .map_err(|e| Error::Shape(format!("{} layer {idx}: {e}", model.name)))?;
        let need = match layer {
            LayerSpec::Conv { .. } => f.working_set(),
            _ => f.fmap_bytes(),
        };
        let spill = need.saturating_sub(glb_bytes);
        if spill > 0 {
            per_layer.push(LayerSpill { layer: idx, bytes: spill });
            total += spill;
        }
    }
    Ok(ExtraTraffic { per_layer, total_bytes: total })
}

// ---------------------------------------------------------------------------
// Accelerator roll-up
// ---------------------------------------------------------------------------

/// One physical block of an accelerator variant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub name: String,
    pub area_mm2: f64,
    pub dynamic_mw: f64,
    pub leakage_mw: f64,
}

/// A named accelerator variant (a set of components).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variant {
    pub name: String,
    pub components: Vec<Component>,
}

/// Totals for one variant, with savings against the baseline when the
/// variant is not itself the baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub name: String,
    pub area_mm2: f64,
    pub dynamic_mw: f64,
    pub leakage_mw: f64,
    pub total_power_mw: f64,
    pub area_savings_pct: Option<f64>,
    pub power_savings_pct: Option<f64>,
}

/// Sum each variant's components and compute
/// `(baseline - variant)/baseline * 100` for area and total power.
pub fn accelerator_summary(variants: &[Variant], baseline: &str) -> Result<Vec<VariantSummary>> {
    for v in variants {
        if v.components.is_empty() {
            return Err(Error::Validation(format!("variant {} has no components", v.name)));
        }
        for c in &v.components {
            if !(c.area_mm2 > 0.0) || !(c.dynamic_mw >= 0.0) || !(c.leakage_mw >= 0.0) {
                return Err(Error::Validation(format!(
                    "component {} of {} has a negative or zero field",
                    c.name, v.name
                )));
            }
        }
    }
    let totals: Vec<(f64, f64, f64)> = variants
        .iter()
        .map(|v| {
            let area = v.components.iter().map(|c| c.area_mm2).sum();
            let dyn_mw = v.components.iter().map(|c| c.dynamic_mw).sum();
            let leak = v.components.iter().map(|c| c.leakage_mw).sum();
            (area, dyn_mw, leak)
        })
        .collect();
    let base_idx = variants
        .iter()
        .position(|v| v.name == baseline)
        .ok_or_else(|| Error::Validation(format!("baseline variant {baseline:?} not found")))?;
    let (base_area, base_dyn, base_leak) = totals[base_idx];
    let base_power = base_dyn + base_leak;
    Ok(variants
        .iter()
        .zip(totals)
        .map(|(v, (area, dyn_mw, leak))| {
            let power = dyn_mw + leak;
            let (a_pct, p_pct) = if v.name == baseline {
                (None, None)
            } else {
                (
                    Some((base_area - area) / base_area * 100.0),
                    Some((base_power - power) / base_power * 100.0),
                )
            };
            VariantSummary {
                name: v.name.clone(),
                area_mm2: area,
                dynamic_mw: dyn_mw,
                leakage_mw: leak,
                total_power_mw: power,
                area_savings_pct: a_pct,
                power_savings_pct: p_pct,
            }
        })
        .collect())
}

/// Metric an expectation constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpectMetric {
    AreaSavingsPct,
    PowerSavingsPct,
}

/// A declared `value +- tol` expectation on a variant's savings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub variant: String,
    pub metric: ExpectMetric,
    pub value: f64,
    pub tol: f64,
}

/// Parsed components file: variants, baseline name, and expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentsFile {
    pub baseline: String,
    pub variants: Vec<Variant>,
    pub expectations: Vec<Expectation>,
}

impl ComponentsFile {
    /// Parse a components CSV.
    ///
    /// Directives: `# schema_version: 1`, `# baseline: <variant>`, and
    /// `# expect: <variant> <area_savings_pct|power_savings_pct> <value> <tol>`.
    /// Data columns: `variant,component,area_mm2,dynamic_mw,leakage_mw`.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut schema: Option<u32> = None;
        let mut baseline: Option<String> = None;
        let mut expectations = Vec::new();
        let mut variants: Vec<Variant> = Vec::new();
        let mut saw_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((key, value)) = rest.split_once(':') {
                    let (key, value) = (key.trim(), value.trim());
                    match key {
                        "schema_version" => {
                            schema = Some(value.parse().map_err(|_| {
                                Error::Parse(format!("line {}: bad schema_version", lineno + 1))
                            })?)
                        }
                        "baseline" => baseline = Some(value.to_string()),
                        "expect" => {
                            let parts: Vec<&str> = value.split_whitespace().collect();
                            if parts.len() != 4 {
                                return Err(Error::Parse(format!(
                                    "line {}: expect needs <variant> <metric> <value> <tol>",
                                    lineno + 1
                                )));
                            }
                            let metric = match parts[1] {
                                "area_savings_pct" => ExpectMetric::AreaSavingsPct,
                                "power_savings_pct" => ExpectMetric::PowerSavingsPct,
                                other => {
                                    return Err(Error::Parse(format!(
                                        "line {}: unknown metric {other:?}",
                                        lineno + 1
                                    )))
                                }
                            };
                            let parse = |s: &str| -> Result<f64> {
                                s.parse().map_err(|_| {
                                    Error::Parse(format!("line {}: bad number {s:?}", lineno + 1))
                                })
                            };
                            expectations.push(Expectation {
                                variant: parts[0].to_string(),
                                metric,
                                value: parse(parts[2])?,
                                tol: parse(parts[3])?,
                            });
                        }
                        _ => {
                            return Err(Error::Parse(format!(
                                "line {}: unknown directive {key:?}",
                                lineno + 1
                            )))
                        }
                    }
                }
                continue;
            }
            if !saw_header {
                if line != "variant,component,area_mm2,dynamic_mw,leakage_mw" {
                    return Err(Error::Parse(format!(
                        "line {}: expected header variant,component,area_mm2,dynamic_mw,leakage_mw",
                        lineno + 1
                    )));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!(
                    "line {}: expected 5 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |i: usize| -> Result<f64> {
                fields[i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {:?}", lineno + 1, fields[i])))
            };
            let component = Component {
                name: fields[1].to_string(),
                area_mm2: num(2)?,
                dynamic_mw: num(3)?,
                leakage_mw: num(4)?,
            };
            match variants.iter_mut().find(|v| v.name == fields[0]) {
                Some(v) => v.components.push(component),
                None => variants.push(Variant {
                    name: fields[0].to_string(),
                    components: vec![component],
                }),
            }
        }
        match schema {
            Some(1) => {}
            Some(v) => {
                return Err(Error::Validation(format!(
                    "unsupported components schema_version {v}"
                )))
            }
            None => return Err(Error::Parse("missing # schema_version directive".to_string())),
        }
        let baseline = match baseline {
            Some(b) => b,
            None => variants
                .first()
                .map(|v| v.name.clone())
                .ok_or_else(|| Error::Parse("components file has no variants".to_string()))?,
        };
        Ok(ComponentsFile { baseline, variants, expectations })
    }
}

/// Bundled 14 nm post-layout component values.
pub fn bundled_components() -> ComponentsFile {
    ComponentsFile::parse_csv(include_str!("../data/components_14nm.csv"))
        .expect("bundled components file")
}

/// Outcome of checking one expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationCheck {
    pub expectation: Expectation,
    pub actual: f64,
    pub met: bool,
}

/// Evaluate declared expectations against a summary.
pub fn check_expectations(
    summaries: &[VariantSummary],
    expectations: &[Expectation],
) -> Result<Vec<ExpectationCheck>> {
    expectations
        .iter()
        .map(|e| {
            let summary = summaries
                .iter()
                .find(|s| s.name == e.variant)
                .ok_or_else(|| Error::Validation(format!("expectation names unknown variant {}", e.variant)))?;
            let actual = match e.metric {
                ExpectMetric::AreaSavingsPct => summary.area_savings_pct,
                ExpectMetric::PowerSavingsPct => summary.power_savings_pct,
            }
            .ok_or_else(|| {
                Error::Validation(format!(
                    "expectation on baseline variant {} has no savings",
                    e.variant
                ))
            })?;
            Ok(ExpectationCheck {
                expectation: e.clone(),
                actual,
                met: (actual - e.value).abs() <= e.tol,
            })
        })
        .collect()
}
