//! Buffer traffic counting per data class and conversion to energy under the
//! three buffer architectures: SRAM-only, MRAM-only, and MRAM with a small
//! psum scratchpad.
//!
//! Counting rules (all converted to accesses of one configured width):
//! - ifmap: each output channel of a conv layer streams the full layer ifmap
//!   across its array steps, so reads total `out_ch * ifmap_bytes`.
//! - weight: kernel weights stay stationary and load once per conv layer.
//!   FC weights stream from DRAM/weight storage, not the buffer.
//! - psum: between consecutive array steps the partial ofmap plane is written
//!   and read back once, giving `(steps-1)` write+read passes over
//!   `rows * cols * bytes * batch * out_ch`. Single-step layers produce none.
//! - ofmap: the finished ofmap writes once; the next layer's reads are that
//!   layer's ifmap traffic.
//! - FC layers re-stream their input vector once per weight row-tile and
//!   write their output once.

use crate::error::{Error, Result};
use crate::memory::MemTechPoint;
use crate::timing::{conv_steps_per_out_ch, AcceleratorConfig};
use crate::workload::{layer_footprint, max_partial_ofmap, ofmap_dims, LayerSpec, ModelSpec};
use serde::Serialize;

/// Reads/writes of one data class, in accesses of the configured width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClassTraffic {
    pub reads: u64,
    pub writes: u64,
}

/// Buffer traffic of a model run, per data class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrafficCounts {
    pub ifmap: ClassTraffic,
    pub weight: ClassTraffic,
    pub psum: ClassTraffic,
    pub ofmap: ClassTraffic,
    /// Access width the counts are expressed in, bytes.
    pub access_width_bytes: u64,
    /// Largest partial-ofmap working set of the run, bytes. Determines how
    /// much psum traffic a finite scratchpad can absorb.
    pub psum_working_set_bytes: u64,
}

impl TrafficCounts {
    pub fn total_accesses(&self) -> u64 {
        let c = |t: ClassTraffic| t.reads + t.writes;
        c(self.ifmap) + c(self.weight) + c(self.psum) + c(self.ofmap)
    }
}

fn div_ceil(a: u64, b: u64) -> u64 {
    (a + b - 1) / b
}

fn mul(acc: u64, f: u64) -> Result<u64> {
    acc.checked_mul(f)
        .ok_or_else(|| Error::Validation("traffic byte count overflows u64".to_string()))
}

/// Count buffer traffic for a whole model.
pub fn count_traffic(
    model: &ModelSpec,
    cfg: &AcceleratorConfig,
    batch: u64,
    access_width_bytes: u64,
) -> Result<TrafficCounts> {
    model.validate()?;
    cfg.validate()?;
    if access_width_bytes == 0 {
        return Err(Error::Validation("access width must be positive".to_string()));
    }
    let b = model.datatype.bytes();
    let mut ifmap_rd = 0u64;
    let mut weight_rd = 0u64;
    let mut psum_rw = 0u64; // same count for reads and writes
    let mut ofmap_wr = 0u64;
    for (idx, layer) in model.layers.iter().enumerate() {
        let f = layer_footprint(layer, batch, b)
            .map_err(|e| Error::Shape(format!("{} layer {idx}: {e}", model.name)))?;
        match layer {
            LayerSpec::Conv { out_ch, .. } => {
                let steps = conv_steps_per_out_ch(layer, cfg)?;
                let (rows, cols) = ofmap_dims(layer)?;
                ifmap_rd = ifmap_rd
                    .checked_add(mul(f.ifmap_bytes, *out_ch)?)
                    .ok_or_else(|| Error::Validation("ifmap traffic overflow".to_string()))?;
                weight_rd += f.weight_bytes;
                let plane_pass = mul(mul(mul(rows, cols)?, b)?, mul(batch, *out_ch)?)?;
                psum_rw += mul(steps - 1, plane_pass)?;
                ofmap_wr += f.ofmap_bytes;
            }
            LayerSpec::Fc { m_fc, .. } => {
                let row_tiles = div_ceil(*m_fc, cfg.h_a);
                ifmap_rd += mul(f.ifmap_bytes, row_tiles)?;
                ofmap_wr += f.ofmap_bytes;
            }
            // Pool/ReLU run fused in the datapath; no buffer traffic of
            // their own.
            _ => {}
        }
    }
    let width = access_width_bytes;
    Ok(TrafficCounts {
        ifmap: ClassTraffic { reads: div_ceil(ifmap_rd, width), writes: 0 },
        weight: ClassTraffic { reads: div_ceil(weight_rd, width), writes: 0 },
        psum: ClassTraffic {
            reads: div_ceil(psum_rw, width),
            writes: div_ceil(psum_rw, width),
        },
        ofmap: ClassTraffic { reads: 0, writes: div_ceil(ofmap_wr, width) },
        access_width_bytes: width,
        psum_working_set_bytes: max_partial_ofmap(model, batch)?,
    })
}

/// Buffer organization under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BufferArch {
    /// Conventional SRAM global buffer.
    SramOnly,
    /// MRAM global buffer taking all traffic.
    MramOnly,
    /// MRAM global buffer with psum traffic diverted to an SRAM scratchpad.
    MramScratch,
}

impl BufferArch {
    pub const ALL: [BufferArch; 3] =
        [BufferArch::SramOnly, BufferArch::MramOnly, BufferArch::MramScratch];

    pub fn as_str(self) -> &'static str {
        match self {
            BufferArch::SramOnly => "sram_only",
            BufferArch::MramOnly => "mram_only",
            BufferArch::MramScratch => "mram_scratch",
        }
    }
}

/// Energy split of one architecture run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub dynamic_j: f64,
    pub leakage_j: f64,
    pub total_j: f64,
}

fn dynamic_energy(reads: f64, writes: f64, point: &MemTechPoint) -> f64 {
    (reads * point.read_energy_pj + writes * point.write_energy_pj) * 1e-12
}

/// Convert traffic to buffer energy for one architecture.
///
/// Leakage integrates over `exec_time` for every memory present. When the
/// psum working set exceeds the scratchpad capacity, the overflowing
/// fraction of psum traffic stays in the MRAM buffer (proportional split).
pub fn buffer_energy(
    traffic: &TrafficCounts,
    arch: BufferArch,
    glb: &MemTechPoint,
    scratch: &MemTechPoint,
    exec_time: f64,
) -> Result<EnergyBreakdown> {
    if !(exec_time >= 0.0) {
        return Err(Error::Validation("exec_time must be non-negative".to_string()));
    }
    if glb.access_width_bytes != traffic.access_width_bytes {
        return Err(Error::Validation(format!(
            "glb access width {} does not match traffic width {}",
            glb.access_width_bytes, traffic.access_width_bytes
        )));
    }
    let other_reads = (traffic.ifmap.reads + traffic.weight.reads + traffic.ofmap.reads) as f64;
    let other_writes = (traffic.ifmap.writes + traffic.weight.writes + traffic.ofmap.writes) as f64;
    let psum_reads = traffic.psum.reads as f64;
    let psum_writes = traffic.psum.writes as f64;
    let (dynamic_j, leakage_mw) = match arch {
        BufferArch::SramOnly | BufferArch::MramOnly => (
            dynamic_energy(other_reads + psum_reads, other_writes + psum_writes, glb),
            glb.leakage_mw,
        ),
        BufferArch::MramScratch => {
            if scratch.access_width_bytes != traffic.access_width_bytes {
                return Err(Error::Validation(format!(
                    "scratch access width {} does not match traffic width {}",
                    scratch.access_width_bytes, traffic.access_width_bytes
                )));
            }
            let fit = if traffic.psum_working_set_bytes == 0 {
                1.0
            } else {
                (scratch.capacity_bytes as f64 / traffic.psum_working_set_bytes as f64).min(1.0)
            };
            let to_scratch = dynamic_energy(psum_reads * fit, psum_writes * fit, scratch);
            let spillback =
                dynamic_energy(psum_reads * (1.0 - fit), psum_writes * (1.0 - fit), glb);
            (
                dynamic_energy(other_reads, other_writes, glb) + to_scratch + spillback,
                glb.leakage_mw + scratch.leakage_mw,
            )
        }
    };
    let leakage_j = leakage_mw * 1e-3 * exec_time;
    Ok(EnergyBreakdown { dynamic_j, leakage_j, total_j: dynamic_j + leakage_j })
}
