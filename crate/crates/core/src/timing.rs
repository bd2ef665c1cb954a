//! Closed-form execution-time and data-occupancy models for the
//! reconfigurable conv/systolic core, plus a brute-force schedule oracle the
//! closed forms must match cycle for cycle.
//!
//! In convolution mode each PE block chains `p_s` MACs and the array holds
//! `w_a * h_a` blocks; one kernel row occupies `ceil(k_w/p_s)` blocks and is
//! replicated per ofmap row and input channel. Output channels are processed
//! one at a time, so a layer needs `steps` full-array iterations per output
//! channel. In systolic mode the same fabric exposes `h_a x (p_s * w_a)`
//! individual MACs that tile the FC weight matrix.
//!
//! Retention time between two layers is the time to produce the producer's
//! ofmap plus any pool/ReLU overhead plus the time the consumer takes to
//! finish reading it (its own output-generation time). MRAM read/write
//! pulses are orders of magnitude below these figures and are not added.

use crate::error::{Error, Result};
use crate::workload::{ofmap_dims, LayerSpec, ModelSpec};
use serde::{Deserialize, Serialize};

/// Geometry and cycle counts of the reconfigurable core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcceleratorConfig {
    /// PE-block columns in convolution mode.
    pub w_a: u64,
    /// PE-block rows.
    pub h_a: u64,
    /// MACs chained inside one PE block.
    pub p_s: u64,
    /// Clock period, s.
    pub t_clk: f64,
    /// Clock cycles per convolution-mode iteration.
    pub n_cyc_conv: u64,
    /// Clock cycles per systolic-mode iteration.
    pub n_cyc_sys: u64,
    /// Fixed pool + ReLU overhead between layers, s.
    pub t_pool_relu: f64,
}

impl Default for AcceleratorConfig {
    fn default() -> Self {
        // 42x42-MAC grid at 1 GHz: 42 block rows by 14 block columns of
        // 3-MAC blocks; 17 cycles per conv iteration, 11 per systolic.
        AcceleratorConfig {
            w_a: 14,
            h_a: 42,
            p_s: 3,
            t_clk: 1e-9,
            n_cyc_conv: 17,
            n_cyc_sys: 11,
            t_pool_relu: 0.0,
        }
    }
}

impl AcceleratorConfig {
    /// Systolic-array width in MACs: `p_s * w_a`.
    pub fn w_sa(&self) -> u64 {
        self.p_s * self.w_a
    }

    pub fn validate(&self) -> Result<()> {
        if self.w_a == 0 || self.h_a == 0 || self.p_s == 0 {
            return Err(Error::Validation(
                "accelerator geometry must be positive".to_string(),
            ));
        }
        if self.n_cyc_conv == 0 || self.n_cyc_sys == 0 {
            return Err(Error::Validation(
                "per-iteration cycle counts must be positive".to_string(),
            ));
        }
        if !(self.t_clk > 0.0) || !(self.t_pool_relu >= 0.0) {
            return Err(Error::Validation(
                "t_clk must be positive and t_pool_relu non-negative".to_string(),
            ));
        }
        Ok(())
    }
}

fn div_ceil(a: u64, b: u64) -> u64 {
    (a + b - 1) / b
}

fn checked_mul(acc: u64, f: u64) -> Result<u64> {
    acc.checked_mul(f)
        .ok_or_else(|| Error::Validation("cycle count overflows u64".to_string()))
}

fn require_batch(batch: u64) -> Result<()> {
    if batch == 0 {
        return Err(Error::Validation("batch must be positive".to_string()));
    }
    Ok(())
}

/// Full-array iterations needed per output channel of a conv layer:
/// `ceil(in_ch * k_h * rows * ceil(k_w/p_s) / (w_a * h_a))`.
pub fn conv_steps_per_out_ch(layer: &LayerSpec, cfg: &AcceleratorConfig) -> Result<u64> {
    cfg.validate()?;
    match layer {
        LayerSpec::Conv { in_ch, k_h, k_w, .. } => {
            if *in_ch == 0 {
                return Err(Error::Shape("conv layer with zero input channels".to_string()));
            }
            let (rows, _) = ofmap_dims(layer)?;
            let blocks_per_channel =
                checked_mul(checked_mul(*in_ch, *k_h)?, checked_mul(rows, div_ceil(*k_w, cfg.p_s))?)?;
            Ok(div_ceil(blocks_per_channel, cfg.w_a * cfg.h_a))
        }
        other => Err(Error::Shape(format!(
            "conv_steps_per_out_ch expects a conv layer, got {}",
            other.kind()
        ))),
    }
}

/// Total clock cycles to produce a conv layer's complete ofmap:
/// `steps * n_cyc_conv * cols * batch * out_ch`.
pub fn conv_layer_cycles(layer: &LayerSpec, cfg: &AcceleratorConfig, batch: u64) -> Result<u64> {
    require_batch(batch)?;
    match layer {
        LayerSpec::Conv { out_ch, .. } => {
            if *out_ch == 0 {
                return Err(Error::Shape("conv layer with zero output channels".to_string()));
            }
            let steps = conv_steps_per_out_ch(layer, cfg)?;
            let (_, cols) = ofmap_dims(layer)?;
            let mut cycles = checked_mul(steps, cfg.n_cyc_conv)?;
            cycles = checked_mul(cycles, cols)?;
            cycles = checked_mul(cycles, batch)?;
            checked_mul(cycles, *out_ch)
        }
        other => Err(Error::Shape(format!(
            "conv_layer_cycles expects a conv layer, got {}",
            other.kind()
        ))),
    }
}

/// Conv layer execution time, s.
pub fn conv_layer_time(layer: &LayerSpec, cfg: &AcceleratorConfig, batch: u64) -> Result<f64> {
    Ok(conv_layer_cycles(layer, cfg, batch)? as f64 * cfg.t_clk)
}

/// Total clock cycles to produce an FC layer's output:
/// `ceil(m_fc/h_a) * ceil(n_fc/w_sa) * n_cyc_sys * batch`.
pub fn fc_layer_cycles(layer: &LayerSpec, cfg: &AcceleratorConfig, batch: u64) -> Result<u64> {
    cfg.validate()?;
    require_batch(batch)?;
    match layer {
        LayerSpec::Fc { n_fc, m_fc } => {
            if *n_fc == 0 || *m_fc == 0 {
                return Err(Error::Shape("fc layer with zero neurons".to_string()));
            }
            let tiles = checked_mul(div_ceil(*m_fc, cfg.h_a), div_ceil(*n_fc, cfg.w_sa()))?;
            checked_mul(checked_mul(tiles, cfg.n_cyc_sys)?, batch)
        }
        other => Err(Error::Shape(format!(
            "fc_layer_cycles expects an fc layer, got {}",
            other.kind()
        ))),
    }
}

/// FC layer execution time, s.
pub fn fc_layer_time(layer: &LayerSpec, cfg: &AcceleratorConfig, batch: u64) -> Result<f64> {
    Ok(fc_layer_cycles(layer, cfg, batch)? as f64 * cfg.t_clk)
}

/// Execution time of a compute (conv or fc) layer, s.
pub fn compute_layer_time(layer: &LayerSpec, cfg: &AcceleratorConfig, batch: u64) -> Result<f64> {
    match layer {
        LayerSpec::Conv { .. } => conv_layer_time(layer, cfg, batch),
        LayerSpec::Fc { .. } => fc_layer_time(layer, cfg, batch),
        other => Err(Error::Shape(format!(
            "compute_layer_time expects conv or fc, got {}",
            other.kind()
        ))),
    }
}

/// Retention time between two consecutive conv layers:
/// producer time + pool/ReLU overhead + consumer time.
pub fn retention_conv_conv(
    first: &LayerSpec,
    second: &LayerSpec,
    cfg: &AcceleratorConfig,
    batch: u64,
) -> Result<f64> {
    let t1 = conv_layer_time(first, cfg, batch)?;
    let t2 = conv_layer_time(second, cfg, batch)?;
    Ok(t1 + cfg.t_pool_relu + t2)
}

/// Retention time between two consecutive FC layers (no pooling between).
pub fn retention_fc_fc(
    first: &LayerSpec,
    second: &LayerSpec,
    cfg: &AcceleratorConfig,
    batch: u64,
) -> Result<f64> {
    let t1 = fc_layer_time(first, cfg, batch)?;
    let t2 = fc_layer_time(second, cfg, batch)?;
    Ok(t1 + t2)
}

/// Retention time for a conv layer feeding an FC layer.
pub fn retention_conv_fc(
    conv_layer: &LayerSpec,
    fc_layer: &LayerSpec,
    cfg: &AcceleratorConfig,
    batch: u64,
) -> Result<f64> {
    let t1 = conv_layer_time(conv_layer, cfg, batch)?;
    let t2 = fc_layer_time(fc_layer, cfg, batch)?;
    Ok(t1 + cfg.t_pool_relu + t2)
}

/// One consecutive compute-layer pair in a retention profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetentionPair {
    /// Index of the producing layer in the model.
    pub first_layer: usize,
    /// Index of the consuming layer.
    pub second_layer: usize,
    /// Pair taxonomy, e.g. "conv-conv".
    pub kind: String,
    /// Required data retention time, s.
    pub seconds: f64,
}

/// Per-pair retention times for a model, plus the maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetentionProfile {
    pub pairs: Vec<RetentionPair>,
    /// Maximum over `pairs`, 0 when the model has fewer than two compute layers.
    pub max_seconds: f64,
}

/// Retention profile over all consecutive compute-layer pairs. Pool/ReLU
/// layers between a pair each add one `t_pool_relu` to it.
pub fn model_retention_profile(
    model: &ModelSpec,
    cfg: &AcceleratorConfig,
    batch: u64,
) -> Result<RetentionProfile> {
    model.validate()?;
    cfg.validate()?;
    let compute: Vec<usize> = model
        .layers
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_compute())
        .map(|(i, _)| i)
        .collect();
    let mut pairs = Vec::new();
    let mut max_seconds = 0.0f64;
    for pair in compute.windows(2) {
        let (ia, ib) = (pair[0], pair[1]);
        let a = &model.layers[ia];
        let b = &model.layers[ib];
        let overhead = (ia + 1..ib)
            .filter(|&j| !model.layers[j].is_compute())
            .count() as f64
            * cfg.t_pool_relu;
        let seconds =
            compute_layer_time(a, cfg, batch)? + overhead + compute_layer_time(b, cfg, batch)?;
        max_seconds = max_seconds.max(seconds);
        pairs.push(RetentionPair {
            first_layer: ia,
            second_layer: ib,
            kind: format!("{}-{}", a.kind(), b.kind()),
            seconds,
        });
    }
    Ok(RetentionProfile { pairs, max_seconds })
}

/// End-to-end model execution time: all compute layers plus one pool/ReLU
/// overhead per non-compute layer, s.
pub fn model_exec_time(model: &ModelSpec, cfg: &AcceleratorConfig, batch: u64) -> Result<f64> {
    model.validate()?;
    cfg.validate()?;
    let mut total = 0.0;
    for layer in &model.layers {
        total += match layer {
            LayerSpec::Conv { .. } | LayerSpec::Fc { .. } => compute_layer_time(layer, cfg, batch)?,
            _ => cfg.t_pool_relu,
        };
    }
    Ok(total)
}

/// Brute-force schedule oracle: walk every (output channel, array step,
/// batch image, kernel shift) for conv layers, or every (weight tile, batch
/// image) for FC layers, accumulating whole iterations of the per-iteration
/// cycle count. Must equal the closed forms exactly.
pub fn simulate_schedule_oracle(
    layer: &LayerSpec,
    cfg: &AcceleratorConfig,
    batch: u64,
) -> Result<f64> {
    cfg.validate()?;
    require_batch(batch)?;
    let mut cycles: u64 = 0;
    match layer {
        LayerSpec::Conv { out_ch, .. } => {
            if *out_ch == 0 {
                return Err(Error::Shape("conv layer with zero output channels".to_string()));
            }
            let steps = conv_steps_per_out_ch(layer, cfg)?;
            let (_, cols) = ofmap_dims(layer)?;
            for _out in 0..*out_ch {
                for _step in 0..steps {
                    for _img in 0..batch {
                        // The kernel shifts by the stride once per ofmap column.
                        for _shift in 0..cols {
                            cycles += cfg.n_cyc_conv;
                        }
                    }
                }
            }
        }
        LayerSpec::Fc { n_fc, m_fc } => {
            if *n_fc == 0 || *m_fc == 0 {
                return Err(Error::Shape("fc layer with zero neurons".to_string()));
            }
            let row_tiles = div_ceil(*m_fc, cfg.h_a);
            let col_tiles = div_ceil(*n_fc, cfg.w_sa());
            for _tile in 0..row_tiles * col_tiles {
                for _img in 0..batch {
                    cycles += cfg.n_cyc_sys;
                }
            }
        }
        other => {
            return Err(Error::Shape(format!(
                "schedule oracle expects conv or fc, got {}",
                other.kind()
            )))
        }
    }
    Ok(cycles as f64 * cfg.t_clk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::bundled;
    use crate::workload::Datatype;

    fn conv(in_ch: u64, out_ch: u64, k: u64, stride: u64, pad: u64, h: u64, w: u64) -> LayerSpec {
        LayerSpec::Conv { in_ch, out_ch, k_h: k, k_w: k, stride, pad, ifmap_h: h, ifmap_w: w }
    }

    fn fc(n: u64, m: u64) -> LayerSpec {
        LayerSpec::Fc { n_fc: n, m_fc: m }
    }

    #[test]
    fn conv_steps_goldens() {
        let cfg = AcceleratorConfig::default();
        // in 3, k 3x3, 32x32 ofmap: 3*3*32*1 = 288 blocks on a 588-block array.
        let small = conv(3, 8, 3, 1, 1, 32, 32);
        assert_eq!(conv_steps_per_out_ch(&small, &cfg).unwrap(), 1);
        // in 128, k 3x3, 28 rows: ceil(10752/588) = 19.
        let big = conv(128, 128, 3, 1, 1, 28, 28);
        assert_eq!(conv_steps_per_out_ch(&big, &cfg).unwrap(), 19);
        // A huge array saturates at one step.
        let wide = AcceleratorConfig { w_a: 1024, h_a: 1024, ..cfg };
        assert_eq!(conv_steps_per_out_ch(&big, &wide).unwrap(), 1);
    }

    #[test]
    fn conv_layer_time_golden() {
        let cfg = AcceleratorConfig::default();
        let layer = conv(3, 8, 3, 1, 1, 32, 32);
        // 1 step * 17 cycles * 32 cols * 1 image * 8 out_ch at 1 ns.
        let t = conv_layer_time(&layer, &cfg, 1).unwrap();
        assert!((t - 4.352e-6).abs() < 1e-18, "t = {t}");
        // Linear in batch.
        let t2 = conv_layer_time(&layer, &cfg, 2).unwrap();
        assert_eq!(t2, 2.0 * t);
    }

    #[test]
    fn zero_out_ch_rejected() {
        let cfg = AcceleratorConfig::default();
        assert!(conv_layer_cycles(&conv(3, 0, 3, 1, 1, 32, 32), &cfg, 1).is_err());
    }

    #[test]
    fn fc_layer_time_goldens() {
        let cfg = AcceleratorConfig::default();
        assert_eq!(cfg.w_sa(), 42);
        // Single MAC output on the 42x42 grid: one 11-cycle iteration.
        let t = fc_layer_time(&fc(1, 1), &cfg, 1).unwrap();
        assert!((t - 11e-9).abs() < 1e-20, "t = {t}");
        // 100x100 weights: 3x3 tiles, batch 4 -> 396 ns.
        let t = fc_layer_time(&fc(100, 100), &cfg, 4).unwrap();
        assert!((t - 396e-9).abs() < 1e-18, "t = {t}");
        // Array at least as large as the matrix: a single step.
        assert_eq!(fc_layer_cycles(&fc(42, 42), &cfg, 1).unwrap(), 11);
    }

    #[test]
    fn retention_pair_goldens() {
        let cfg = AcceleratorConfig::default();
        let layer = conv(3, 8, 3, 1, 1, 32, 32);
        let t = retention_conv_conv(&layer, &layer, &cfg, 1).unwrap();
        assert!((t - 8.704e-6).abs() < 1e-18, "t = {t}");

        let t = retention_fc_fc(&fc(1, 1), &fc(1, 1), &cfg, 1).unwrap();
        assert!((t - 22e-9).abs() < 1e-20, "t = {t}");

        let t = retention_conv_fc(&layer, &fc(1, 1), &cfg, 1).unwrap();
        assert!((t - 4.363e-6).abs() < 1e-18, "t = {t}");

        // With pool overhead the conv-conv pair grows by exactly that much.
        let with_pool = AcceleratorConfig { t_pool_relu: 1e-6, ..cfg };
        let t = retention_conv_conv(&layer, &layer, &with_pool, 1).unwrap();
        assert!((t - 9.704e-6).abs() < 1e-18, "t = {t}");
    }

    #[test]
    fn profile_on_bundled_models() {
        let cfg = AcceleratorConfig::default();
        let model = bundled::vgg16().with_datatype(Datatype::Bf16);
        let profile = model_retention_profile(&model, &cfg, 16).unwrap();
        assert_eq!(profile.pairs.len(), 15);
        let max = profile.pairs.iter().map(|p| p.seconds).fold(0.0f64, f64::max);
        assert_eq!(profile.max_seconds, max);
        assert!(profile.pairs.iter().all(|p| p.seconds > 0.0));

        // Single-compute-layer model has no pairs.
        let single = ModelSpec {
            name: "single".to_string(),
            datatype: Datatype::Int8,
            layers: vec![conv(1, 1, 1, 1, 0, 1, 1)],
        };
        let profile = model_retention_profile(&single, &cfg, 1).unwrap();
        assert!(profile.pairs.is_empty());
        assert_eq!(profile.max_seconds, 0.0);
    }

    #[test]
    fn oracle_matches_closed_form_on_goldens() {
        let cfg = AcceleratorConfig::default();
        for batch in [1, 3] {
            let layer = conv(3, 8, 3, 1, 1, 32, 32);
            assert_eq!(
                simulate_schedule_oracle(&layer, &cfg, batch).unwrap(),
                conv_layer_time(&layer, &cfg, batch).unwrap()
            );
            let layer = fc(100, 100);
            assert_eq!(
                simulate_schedule_oracle(&layer, &cfg, batch).unwrap(),
                fc_layer_time(&layer, &cfg, batch).unwrap()
            );
        }
        // Degenerate 1x1 conv: exactly one iteration.
        let tiny = conv(1, 1, 1, 1, 0, 1, 1);
        let t = simulate_schedule_oracle(&tiny, &cfg, 1).unwrap();
        assert!((t - cfg.n_cyc_conv as f64 * cfg.t_clk).abs() < 1e-20);
    }

    #[test]
    fn steps_monotone_in_array_and_shape() {
        let cfg = AcceleratorConfig::default();
        let layer = conv(64, 8, 3, 1, 1, 28, 28);
        let s0 = conv_steps_per_out_ch(&layer, &cfg).unwrap();
        let bigger_array = AcceleratorConfig { w_a: 28, ..cfg };
        assert!(conv_steps_per_out_ch(&layer, &bigger_array).unwrap() <= s0);
        let more_ch = conv(128, 8, 3, 1, 1, 28, 28);
        assert!(conv_steps_per_out_ch(&more_ch, &cfg).unwrap() >= s0);
    }
}
