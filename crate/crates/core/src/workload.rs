//! DNN model descriptions and the shape/footprint arithmetic driving buffer
//! sizing: per-layer byte footprints, total model size, the global-buffer
//! capacity needed to hold a layer's working set, and the largest partial
//! ofmap plane a scratchpad has to absorb.
//!
//! Models load from JSON (`{schema_version, name, datatype, layers: [...]}`);
//! unknown fields are rejected so typos fail loudly. Descriptors for
//! AlexNet, VGG16, and ResNet-50 are bundled.

use crate::error::{Error, Result};
use serde::Deserialize;

/// Element datatype of the weights and feature maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Datatype {
    Int8,
    Bf16,
}

impl Datatype {
    pub fn bytes(self) -> u64 {
        match self {
            Datatype::Int8 => 1,
            Datatype::Bf16 => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "int8" => Ok(Datatype::Int8),
            "bf16" => Ok(Datatype::Bf16),
            other => Err(Error::Validation(format!(
                "unknown datatype {other:?}, expected \"int8\" or \"bf16\""
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Datatype::Int8 => "int8",
            Datatype::Bf16 => "bf16",
        }
    }
}

/// One layer of a model.
///
/// Conv and pool layers carry their input geometry explicitly so each layer
/// is self-contained; chaining consistency is verified by
/// [`ModelSpec::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerSpec {
    Conv {
        in_ch: u64,
        out_ch: u64,
        k_h: u64,
        k_w: u64,
        stride: u64,
        pad: u64,
        ifmap_h: u64,
        ifmap_w: u64,
    },
    Fc {
        n_fc: u64,
        m_fc: u64,
    },
    Pool {
        channels: u64,
        k_h: u64,
        k_w: u64,
        stride: u64,
        pad: u64,
        ifmap_h: u64,
        ifmap_w: u64,
    },
    Relu {
        channels: u64,
        ifmap_h: u64,
        ifmap_w: u64,
    },
}

impl LayerSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            LayerSpec::Conv { .. } => "conv",
            LayerSpec::Fc { .. } => "fc",
            LayerSpec::Pool { .. } => "pool",
            LayerSpec::Relu { .. } => "relu",
        }
    }

    pub fn is_compute(&self) -> bool {
        matches!(self, LayerSpec::Conv { .. } | LayerSpec::Fc { .. })
    }
}

/// A whole model: ordered layers plus the element datatype.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: String,
    pub datatype: Datatype,
    pub layers: Vec<LayerSpec>,
}

/// Byte footprint of one layer. `weight_bytes` counts the kernel/matrix
/// elements; the per-output bias vector is reported separately in
/// `bias_bytes` and included in model totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Footprint {
    pub ifmap_bytes: u64,
    pub weight_bytes: u64,
    pub bias_bytes: u64,
    pub ofmap_bytes: u64,
}

impl Footprint {
    /// Everything a layer needs resident at once.
    pub fn working_set(&self) -> u64 {
        self.ifmap_bytes + self.weight_bytes + self.bias_bytes + self.ofmap_bytes
    }

    /// Feature maps only (input plus output).
    pub fn fmap_bytes(&self) -> u64 {
        self.ifmap_bytes + self.ofmap_bytes
    }
}

/// Output rows/cols of a sliding-window layer:
/// `(extent - kernel + 2*pad) / stride + 1` with integer (floor) division.
/// Fails when the kernel does not fit the padded input at all.
fn window_output(extent: u64, kernel: u64, stride: u64, pad: u64, what: &str) -> Result<u64> {
    if extent == 0 || kernel == 0 || stride == 0 {
        return Err(Error::Shape(format!(
            "{what}: extent/kernel/stride must be positive (got {extent}/{kernel}/{stride})"
        )));
    }
    let padded = extent + 2 * pad;
    if kernel > padded {
        return Err(Error::Shape(format!(
            "{what}: kernel {kernel} exceeds padded input {padded}"
        )));
    }
    Ok((padded - kernel) / stride + 1)
}

/// Ofmap (rows, cols) of a conv layer.
pub fn ofmap_dims(layer: &LayerSpec) -> Result<(u64, u64)> {
    match layer {
        LayerSpec::Conv { k_h, k_w, stride, pad, ifmap_h, ifmap_w, .. } => {
            let rows = window_output(*ifmap_h, *k_h, *stride, *pad, "conv rows")?;
            let cols = window_output(*ifmap_w, *k_w, *stride, *pad, "conv cols")?;
            Ok((rows, cols))
        }
        other => Err(Error::Shape(format!(
            "ofmap_dims expects a conv layer, got {}",
            other.kind()
        ))),
    }
}

fn pool_dims(layer: &LayerSpec) -> Result<(u64, u64)> {
    match layer {
        LayerSpec::Pool { k_h, k_w, stride, pad, ifmap_h, ifmap_w, .. } => {
            let rows = window_output(*ifmap_h, *k_h, *stride, *pad, "pool rows")?;
            let cols = window_output(*ifmap_w, *k_w, *stride, *pad, "pool cols")?;
            Ok((rows, cols))
        }
        _ => unreachable!("pool_dims called on non-pool layer"),
    }
}

fn checked_product(factors: &[u64], what: &str) -> Result<u64> {
    factors.iter().try_fold(1u64, |acc, &f| {
        acc.checked_mul(f)
            .ok_or_else(|| Error::Validation(format!("{what}: byte count overflows u64")))
    })
}

/// Byte footprint of a layer at the given batch size and element width.
/// Pool and ReLU layers carry zero weights and pass feature maps through.
pub fn layer_footprint(layer: &LayerSpec, batch: u64, datatype_bytes: u64) -> Result<Footprint> {
    if batch == 0 || datatype_bytes == 0 {
        return Err(Error::Validation(
            "batch and datatype_bytes must be positive".to_string(),
        ));
    }
    let b = datatype_bytes;
    match layer {
        LayerSpec::Conv { in_ch, out_ch, k_h, k_w, ifmap_h, ifmap_w, .. } => {
            validate_conv(layer)?;
            let (rows, cols) = ofmap_dims(layer)?;
            Ok(Footprint {
                ifmap_bytes: checked_product(&[batch, *in_ch, *ifmap_h, *ifmap_w, b], "ifmap")?,
                weight_bytes: checked_product(&[*out_ch, *in_ch, *k_h, *k_w, b], "weights")?,
                bias_bytes: out_ch * b,
                ofmap_bytes: checked_product(&[batch, *out_ch, rows, cols, b], "ofmap")?,
            })
        }
        LayerSpec::Fc { n_fc, m_fc } => {
            if *n_fc == 0 || *m_fc == 0 {
                return Err(Error::Shape("fc layer with zero neurons".to_string()));
            }
            Ok(Footprint {
                ifmap_bytes: checked_product(&[batch, *n_fc, b], "fc ifmap")?,
                weight_bytes: checked_product(&[*n_fc, *m_fc, b], "fc weights")?,
                bias_bytes: m_fc * b,
                ofmap_bytes: checked_product(&[batch, *m_fc, b], "fc ofmap")?,
            })
        }
        LayerSpec::Pool { channels, ifmap_h, ifmap_w, .. } => {
            let (rows, cols) = pool_dims(layer)?;
            Ok(Footprint {
                ifmap_bytes: checked_product(&[batch, *channels, *ifmap_h, *ifmap_w, b], "pool ifmap")?,
                weight_bytes: 0,
                bias_bytes: 0,
                ofmap_bytes: checked_product(&[batch, *channels, rows, cols, b], "pool ofmap")?,
            })
        }
        LayerSpec::Relu { channels, ifmap_h, ifmap_w } => {
            let fmap = checked_product(&[batch, *channels, *ifmap_h, *ifmap_w, b], "relu fmap")?;
            Ok(Footprint { ifmap_bytes: fmap, weight_bytes: 0, bias_bytes: 0, ofmap_bytes: fmap })
        }
    }
}

fn validate_conv(layer: &LayerSpec) -> Result<()> {
    if let LayerSpec::Conv { in_ch, out_ch, .. } = layer {
        if *in_ch == 0 || *out_ch == 0 {
            return Err(Error::Shape(
                "conv layer with zero input or output channels".to_string(),
            ));
        }
    }
    Ok(())
}

/// Total weight storage of the model in bytes (kernel/matrix elements plus
/// bias vectors).
pub fn model_size(model: &ModelSpec) -> Result<u64> {
    let b = model.datatype.bytes();
    let mut total = 0u64;
    for (idx, layer) in model.layers.iter().enumerate() {
        let f = layer_footprint(layer, 1, b)
            .map_err(|e| Error::Shape(format!("{} layer {idx}: {e}", model.name)))?;
        total += f.weight_bytes + f.bias_bytes;
    }
    Ok(total)
}

/// Global-buffer capacity required so no layer spills to DRAM: the maximum
/// over conv layers of the full working set (ifmap + weights + ofmap).
/// FC, pool, and ReLU layers contribute feature maps only, since FC weights
/// stream directly from DRAM or the weight-storage memory.
pub fn required_glb(model: &ModelSpec, batch: u64) -> Result<u64> {
    let b = model.datatype.bytes();
    let mut worst = 0u64;
    for (idx, layer) in model.layers.iter().enumerate() {
        let f = layer_footprint(layer, batch, b)
            .map_err(|e| Error::Shape(format!("{} layer {idx}: {e}", model.name)))?;
        let need = match layer {
            LayerSpec::Conv { .. } => f.working_set(),
            _ => f.fmap_bytes(),
        };
        worst = worst.max(need);
    }
    Ok(worst)
}

/// Largest partial-ofmap working set across the model: one output-channel
/// plane per image of the batch, `batch * rows * cols * bytes`, maximized
/// over conv layers. This is the capacity a psum scratchpad must provide to
/// absorb all intermediate accumulations of a layer in one attempt.
pub fn max_partial_ofmap(model: &ModelSpec, batch: u64) -> Result<u64> {
    let b = model.datatype.bytes();
    let mut worst = 0u64;
    for (idx, layer) in model.layers.iter().enumerate() {
        if let LayerSpec::Conv { .. } = layer {
            let (rows, cols) = ofmap_dims(layer)
                .map_err(|e| Error::Shape(format!("{} layer {idx}: {e}", model.name)))?;
            worst = worst.max(checked_product(&[batch, rows, cols, b], "partial ofmap")?);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Spatial { ch: u64, h: u64, w: u64 },
    Flat { n: u64 },
}

impl ModelSpec {
    /// Structural validation: positive dimensions everywhere and consistent
    /// chaining (each layer's input shape equals the previous layer's output
    /// shape; an FC after spatial layers consumes the flattened fmap).
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::Validation(format!(
                "model {} has no layers",
                self.name
            )));
        }
        let mut current: Option<Shape> = None;
        for (idx, layer) in self.layers.iter().enumerate() {
            let err = |msg: String| Error::Shape(format!("{} layer {idx}: {msg}", self.name));
            match layer {
                LayerSpec::Conv { in_ch, out_ch, ifmap_h, ifmap_w, .. } => {
                    validate_conv(layer).map_err(|e| err(e.to_string()))?;
                    let (rows, cols) = ofmap_dims(layer).map_err(|e| err(e.to_string()))?;
                    if let Some(prev) = current {
                        let expect = Shape::Spatial { ch: *in_ch, h: *ifmap_h, w: *ifmap_w };
                        if prev != expect {
                            return Err(err(format!(
                                "input {expect:?} does not match previous output {prev:?}"
                            )));
                        }
                    }
                    current = Some(Shape::Spatial { ch: *out_ch, h: rows, w: cols });
                }
                LayerSpec::Pool { channels, ifmap_h, ifmap_w, .. } => {
                    let (rows, cols) = pool_dims(layer).map_err(|e| err(e.to_string()))?;
                    if let Some(prev) = current {
                        let expect = Shape::Spatial { ch: *channels, h: *ifmap_h, w: *ifmap_w };
                        if prev != expect {
                            return Err(err(format!(
                                "input {expect:?} does not match previous output {prev:?}"
                            )));
                        }
                    }
                    current = Some(Shape::Spatial { ch: *channels, h: rows, w: cols });
                }
                LayerSpec::Relu { channels, ifmap_h, ifmap_w } => {
                    if let Some(prev) = current {
                        let expect = Shape::Spatial { ch: *channels, h: *ifmap_h, w: *ifmap_w };
                        if prev != expect {
                            return Err(err(format!(
                                "input {expect:?} does not match previous output {prev:?}"
                            )));
                        }
                    }
                    current = Some(Shape::Spatial { ch: *channels, h: *ifmap_h, w: *ifmap_w });
                }
                LayerSpec::Fc { n_fc, m_fc } => {
                    if *n_fc == 0 || *m_fc == 0 {
                        return Err(err("fc layer with zero neurons".to_string()));
                    }
                    if let Some(prev) = current {
                        let flat = match prev {
                            Shape::Spatial { ch, h, w } => ch * h * w,
                            Shape::Flat { n } => n,
                        };
                        if flat != *n_fc {
                            return Err(err(format!(
                                "fc expects {n_fc} inputs but previous layer provides {flat}"
                            )));
                        }
                    }
                    current = Some(Shape::Flat { n: *m_fc });
                }
            }
        }
        Ok(())
    }

    /// Same model with a different element datatype.
    pub fn with_datatype(mut self, datatype: Datatype) -> Self {
        self.datatype = datatype;
        self
    }
}

// ---------------------------------------------------------------------------
// JSON model files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema_version: u32,
    name: String,
    datatype: String,
    layers: Vec<RawLayer>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawLayer {
    kind: String,
    in_ch: Option<u64>,
    out_ch: Option<u64>,
    k_h: Option<u64>,
    k_w: Option<u64>,
    stride: Option<u64>,
    pad: Option<u64>,
    ifmap_h: Option<u64>,
    ifmap_w: Option<u64>,
    n_fc: Option<u64>,
    m_fc: Option<u64>,
    channels: Option<u64>,
}

fn need(field: Option<u64>, name: &str, idx: usize, kind: &str) -> Result<u64> {
    field.ok_or_else(|| {
        Error::Validation(format!("layer {idx} ({kind}): missing field {name:?}"))
    })
}

fn forbid(field: Option<u64>, name: &str, idx: usize, kind: &str) -> Result<()> {
    if field.is_some() {
        return Err(Error::Validation(format!(
            "layer {idx} ({kind}): field {name:?} does not apply"
        )));
    }
    Ok(())
}

impl RawLayer {
    fn into_layer(self, idx: usize) -> Result<LayerSpec> {
        let k = self.kind.as_str();
        match k {
            "conv" => {
                forbid(self.n_fc, "n_fc", idx, k)?;
                forbid(self.m_fc, "m_fc", idx, k)?;
                forbid(self.channels, "channels", idx, k)?;
                Ok(LayerSpec::Conv {
                    in_ch: need(self.in_ch, "in_ch", idx, k)?,
                    out_ch: need(self.out_ch, "out_ch", idx, k)?,
                    k_h: need(self.k_h, "k_h", idx, k)?,
                    k_w: need(self.k_w, "k_w", idx, k)?,
                    stride: need(self.stride, "stride", idx, k)?,
                    pad: self.pad.unwrap_or(0),
                    ifmap_h: need(self.ifmap_h, "ifmap_h", idx, k)?,
                    ifmap_w: need(self.ifmap_w, "ifmap_w", idx, k)?,
                })
            }
            "fc" => {
                forbid(self.in_ch, "in_ch", idx, k)?;
                forbid(self.out_ch, "out_ch", idx, k)?;
                forbid(self.k_h, "k_h", idx, k)?;
                forbid(self.k_w, "k_w", idx, k)?;
                forbid(self.stride, "stride", idx, k)?;
                forbid(self.pad, "pad", idx, k)?;
                forbid(self.ifmap_h, "ifmap_h", idx, k)?;
                forbid(self.ifmap_w, "ifmap_w", idx, k)?;
                forbid(self.channels, "channels", idx, k)?;
                Ok(LayerSpec::Fc {
                    n_fc: need(self.n_fc, "n_fc", idx, k)?,
                    m_fc: need(self.m_fc, "m_fc", idx, k)?,
                })
            }
            "pool" => {
                forbid(self.in_ch, "in_ch", idx, k)?;
                forbid(self.out_ch, "out_ch", idx, k)?;
                forbid(self.n_fc, "n_fc", idx, k)?;
                forbid(self.m_fc, "m_fc", idx, k)?;
                Ok(LayerSpec::Pool {
                    channels: need(self.channels, "channels", idx, k)?,
                    k_h: need(self.k_h, "k_h", idx, k)?,
                    k_w: need(self.k_w, "k_w", idx, k)?,
                    stride: need(self.stride, "stride", idx, k)?,
                    pad: self.pad.unwrap_or(0),
                    ifmap_h: need(self.ifmap_h, "ifmap_h", idx, k)?,
                    ifmap_w: need(self.ifmap_w, "ifmap_w", idx, k)?,
                })
            }
            "relu" => {
                forbid(self.in_ch, "in_ch", idx, k)?;
                forbid(self.out_ch, "out_ch", idx, k)?;
                forbid(self.n_fc, "n_fc", idx, k)?;
                forbid(self.m_fc, "m_fc", idx, k)?;
                forbid(self.k_h, "k_h", idx, k)?;
                forbid(self.k_w, "k_w", idx, k)?;
                forbid(self.stride, "stride", idx, k)?;
                forbid(self.pad, "pad", idx, k)?;
                Ok(LayerSpec::Relu {
                    channels: need(self.channels, "channels", idx, k)?,
                    ifmap_h: need(self.ifmap_h, "ifmap_h", idx, k)?,
                    ifmap_w: need(self.ifmap_w, "ifmap_w", idx, k)?,
                })
            }
            other => Err(Error::Validation(format!(
                "layer {idx}: unknown kind {other:?}"
            ))),
        }
    }
}

/// Parse and validate a model description from JSON text.
pub fn parse_model(json: &str) -> Result<ModelSpec> {
    let file: ModelFile =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("model file: {e}")))?;
    if file.schema_version != 1 {
        return Err(Error::Validation(format!(
            "unsupported model schema_version {}",
            file.schema_version
        )));
    }
    let datatype = Datatype::parse(&file.datatype)?;
    let layers = file
        .layers
        .into_iter()
        .enumerate()
        .map(|(idx, raw)| raw.into_layer(idx))
        .collect::<Result<Vec<_>>>()?;
    let model = ModelSpec { name: file.name, datatype, layers };
    model.validate()?;
    Ok(model)
}

/// Bundled model descriptors.
pub mod bundled {
    use super::{parse_model, ModelSpec};

    const ALEXNET: &str = include_str!("../data/models/alexnet.json");
    const VGG16: &str = include_str!("../data/models/vgg16.json");
    const RESNET50: &str = include_str!("../data/models/resnet50.json");

    pub const NAMES: [&str; 3] = ["alexnet", "vgg16", "resnet50"];

    pub fn alexnet() -> ModelSpec {
        parse_model(ALEXNET).expect("bundled alexnet descriptor")
    }

    pub fn vgg16() -> ModelSpec {
        parse_model(VGG16).expect("bundled vgg16 descriptor")
    }

    pub fn resnet50() -> ModelSpec {
        parse_model(RESNET50).expect("bundled resnet50 descriptor")
    }

    /// Look up a bundled model by name.
    pub fn by_name(name: &str) -> Option<ModelSpec> {
        match name {
            "alexnet" => Some(alexnet()),
            "vgg16" => Some(vgg16()),
            "resnet50" => Some(resnet50()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conv(in_ch: u64, out_ch: u64, k: u64, stride: u64, pad: u64, h: u64, w: u64) -> LayerSpec {
        LayerSpec::Conv { in_ch, out_ch, k_h: k, k_w: k, stride, pad, ifmap_h: h, ifmap_w: w }
    }

    #[test]
    fn ofmap_dims_goldens() {
        assert_eq!(ofmap_dims(&conv(1, 1, 3, 1, 0, 5, 5)).unwrap(), (3, 3));
        assert_eq!(ofmap_dims(&conv(1, 1, 1, 1, 0, 1, 1)).unwrap(), (1, 1));
        // 7x7 stride-2 pad-3 stem on 224x224.
        assert_eq!(ofmap_dims(&conv(3, 64, 7, 2, 3, 224, 224)).unwrap(), (112, 112));
    }

    #[test]
    fn ofmap_dims_rejects_oversized_kernel_and_wrong_kind() {
        assert!(ofmap_dims(&conv(1, 1, 9, 1, 0, 5, 5)).is_err());
        assert!(ofmap_dims(&LayerSpec::Fc { n_fc: 10, m_fc: 10 }).is_err());
    }

    #[test]
    fn conv_footprint_golden() {
        let layer = conv(3, 8, 3, 1, 1, 32, 32);
        let f = layer_footprint(&layer, 1, 1).unwrap();
        assert_eq!(f.ifmap_bytes, 3072);
        assert_eq!(f.weight_bytes, 216);
        assert_eq!(f.bias_bytes, 8);
        assert_eq!(f.ofmap_bytes, 8192);
    }

    #[test]
    fn fc_footprint_golden() {
        let f = layer_footprint(&LayerSpec::Fc { n_fc: 100, m_fc: 10 }, 1, 2).unwrap();
        assert_eq!(f.ifmap_bytes, 200);
        assert_eq!(f.weight_bytes, 2000);
        assert_eq!(f.bias_bytes, 20);
        assert_eq!(f.ofmap_bytes, 20);
    }

    #[test]
    fn batch_scales_fmaps_but_not_weights() {
        let layer = conv(3, 8, 3, 1, 1, 32, 32);
        let f1 = layer_footprint(&layer, 1, 1).unwrap();
        let f2 = layer_footprint(&layer, 2, 1).unwrap();
        assert_eq!(f2.ifmap_bytes, 2 * f1.ifmap_bytes);
        assert_eq!(f2.ofmap_bytes, 2 * f1.ofmap_bytes);
        assert_eq!(f2.weight_bytes, f1.weight_bytes);
    }

    #[test]
    fn zero_out_ch_is_rejected() {
        let layer = conv(3, 0, 3, 1, 1, 32, 32);
        assert!(layer_footprint(&layer, 1, 1).is_err());
        let model = ModelSpec {
            name: "bad".to_string(),
            datatype: Datatype::Int8,
            layers: vec![layer],
        };
        assert!(model_size(&model).is_err());
        assert!(model.validate().is_err());
    }

    #[test]
    fn bundled_models_validate_and_chain() {
        for name in bundled::NAMES {
            let model = bundled::by_name(name).unwrap();
            model.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn bundled_model_sizes() {
        // Parameter counts (weights + biases) at 1 byte/element.
        assert_eq!(model_size(&bundled::alexnet()).unwrap(), 61_100_840);
        assert_eq!(model_size(&bundled::vgg16()).unwrap(), 138_357_544);
        assert_eq!(model_size(&bundled::resnet50()).unwrap(), 22_757_736);
    }

    #[test]
    fn bf16_doubles_every_int8_footprint() {
        let model = bundled::alexnet();
        let wide = model.clone().with_datatype(Datatype::Bf16);
        assert_eq!(model_size(&wide).unwrap(), 2 * model_size(&model).unwrap());
        for batch in [1, 4] {
            assert_eq!(
                required_glb(&wide, batch).unwrap(),
                2 * required_glb(&model, batch).unwrap()
            );
            assert_eq!(
                max_partial_ofmap(&wide, batch).unwrap(),
                2 * max_partial_ofmap(&model, batch).unwrap()
            );
        }
    }

    #[test]
    fn required_glb_values() {
        // AlexNet fits easily in a 12 MB buffer at batch 1 in bf16.
        let alexnet = bundled::alexnet().with_datatype(Datatype::Bf16);
        let need = required_glb(&alexnet, 1).unwrap();
        assert_eq!(need, 1_986_304);
        assert!(need <= 12_000_000);

        // Single-conv model: required capacity is that layer's working set.
        let layer = conv(3, 8, 3, 1, 1, 32, 32);
        let model = ModelSpec {
            name: "single".to_string(),
            datatype: Datatype::Int8,
            layers: vec![layer.clone()],
        };
        let f = layer_footprint(&layer, 1, 1).unwrap();
        assert_eq!(required_glb(&model, 1).unwrap(), f.working_set());
    }

    #[test]
    fn required_glb_monotone_in_batch() {
        let model = bundled::resnet50();
        let mut prev = 0;
        for batch in [1, 2, 4, 8] {
            let need = required_glb(&model, batch).unwrap();
            assert!(need >= prev);
            prev = need;
        }
    }

    #[test]
    fn max_partial_ofmap_values() {
        let layer = conv(1, 4, 3, 1, 0, 5, 5);
        let model = ModelSpec {
            name: "tiny".to_string(),
            datatype: Datatype::Int8,
            layers: vec![layer],
        };
        assert_eq!(max_partial_ofmap(&model, 1).unwrap(), 9);
        assert_eq!(max_partial_ofmap(&model, 3).unwrap(), 27);

        // ResNet-50 at batch 1 in bf16 stays inside a 52 KB scratchpad.
        let resnet = bundled::resnet50().with_datatype(Datatype::Bf16);
        let worst = max_partial_ofmap(&resnet, 1).unwrap();
        assert_eq!(worst, 25_088);
        assert!(worst <= 52 * 1024);
    }

    #[test]
    fn parse_model_rejects_unknown_fields_and_bad_chains() {
        let bad_field = r#"{"schema_version":1,"name":"x","datatype":"int8",
            "layers":[{"kind":"fc","n_fc":4,"m_fc":2,"bogus":1}]}"#;
        assert!(parse_model(bad_field).is_err());

        let bad_kind = r#"{"schema_version":1,"name":"x","datatype":"int8",
            "layers":[{"kind":"softmax"}]}"#;
        assert!(parse_model(bad_kind).is_err());

        let bad_version = r#"{"schema_version":9,"name":"x","datatype":"int8",
            "layers":[{"kind":"fc","n_fc":4,"m_fc":2}]}"#;
        assert!(parse_model(bad_version).is_err());

        let broken_chain = r#"{"schema_version":1,"name":"x","datatype":"int8","layers":[
            {"kind":"conv","in_ch":3,"out_ch":8,"k_h":3,"k_w":3,"stride":1,"pad":1,"ifmap_h":8,"ifmap_w":8},
            {"kind":"conv","in_ch":4,"out_ch":8,"k_h":3,"k_w":3,"stride":1,"pad":1,"ifmap_h":8,"ifmap_w":8}]}"#;
        assert!(parse_model(broken_chain).is_err());
    }

    #[test]
    fn parse_model_round_trips_a_minimal_file() {
        let text = r#"{"schema_version":1,"name":"mini","datatype":"bf16","layers":[
            {"kind":"conv","in_ch":1,"out_ch":2,"k_h":3,"k_w":3,"stride":1,"pad":1,"ifmap_h":4,"ifmap_w":4},
            {"kind":"relu","channels":2,"ifmap_h":4,"ifmap_w":4},
            {"kind":"pool","channels":2,"k_h":2,"k_w":2,"stride":2,"ifmap_h":4,"ifmap_w":4},
            {"kind":"fc","n_fc":8,"m_fc":3}]}"#;
        let model = parse_model(text).unwrap();
        assert_eq!(model.name, "mini");
        assert_eq!(model.datatype, Datatype::Bf16);
        assert_eq!(model.layers.len(), 4);
    }
}
