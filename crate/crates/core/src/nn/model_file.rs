use std::collections::BTreeMap;
use std::path::Path;

use super::network::{AdamState, LayerParams, LayerSpec, Loss, Network, NetworkConfig, OptimizerSpec};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"MINELAB\0";
pub const FORMAT_VERSION: u32 = 1;

/// Free-form `key → value` pairs stored next to the network.
pub type Metadata = BTreeMap<String, String>;

/// Layout:
///
/// ```text
/// magic "MINELAB\0" | u32 version | u32 header length | header text
/// u32 array count | per array: u32 ndim, u32 dims.., f32 data..
/// ```
///
/// All integers and floats are little-endian. The header holds one
/// `key=value` per line. Arrays are the weights and biases of each parameter
/// layer in order, followed by the Adam moments when present.
pub fn model_to_bytes(net: &Network<f32>, meta: &Metadata) -> Vec<u8> {
    let cfg = net.config();
    let mut header = String::new();
    let layers: Vec<String> = cfg.layers.iter().map(ToString::to_string).collect();
    header += &format!("layers={}\n", layers.join(","));
    header += &format!("loss={}\n", match cfg.loss { Loss::Mse => "mse", Loss::Xent => "xent" });
    header += &match cfg.optimizer {
        OptimizerSpec::Sgd { lr } => format!("optimizer=sgd:{lr}\n"),
        OptimizerSpec::Adam { lr, beta1, beta2, eps } => format!("optimizer=adam:{lr}:{beta1}:{beta2}:{eps}\n"),
    };
    header += &format!("seed={}\n", cfg.seed);
    if let Some(adam) = &net.adam {
        header += &format!("adam_step={}\n", adam.step);
    }
    for (k, v) in meta {
        assert!(!k.contains(['=', '\n']) && !v.contains('\n'), "metadata must be single-line key=value");
        header += &format!("meta.{k}={v}\n");
    }

    let mut arrays: Vec<(Vec<usize>, &[f32])> = Vec::new();
    let mut groups = vec![net.params()];
    if let Some(adam) = &net.adam {
        groups.push(&adam.m);
        groups.push(&adam.v);
    }
    for params in groups {
        for (spec, p) in cfg.layers.iter().zip(params).filter_map(|(s, p)| p.as_ref().map(|p| (s, p))) {
            arrays.push((weight_dims(spec), &p.weights));
            arrays.push((vec![p.bias.len()], &p.bias));
        }
    }

    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&(arrays.len() as u32).to_le_bytes());
    for (dims, data) in arrays {
        out.extend_from_slice(&(dims.len() as u32).to_le_bytes());
        for d in dims {
            out.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for x in data {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

fn weight_dims(spec: &LayerSpec) -> Vec<usize> {
    match *spec {
        LayerSpec::Dense { inputs, outputs } => vec![outputs, inputs],
        LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w } => vec![out_channels, in_channels, kernel_h, kernel_w],
        LayerSpec::Activation(_) => vec![],
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| Error::Format("truncated model file".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

pub fn model_from_bytes(bytes: &[u8]) -> Result<(Network<f32>, Metadata)> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(Error::Format("not a model file (bad magic)".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {version} (this build reads version {FORMAT_VERSION})")));
    }
    let header_len = r.u32()? as usize;
    let header = std::str::from_utf8(r.take(header_len)?).map_err(|_| Error::Format("header is not UTF-8".into()))?;

    let mut fields = BTreeMap::new();
    let mut meta = Metadata::new();
    for line in header.lines() {
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Format(format!("bad header line {line:?}")))?;
        match k.strip_prefix("meta.") {
            Some(key) => {
                meta.insert(key.to_string(), v.to_string());
            }
            None => {
                fields.insert(k, v);
            }
        }
    }
    let field = |k: &str| fields.get(k).copied().ok_or_else(|| Error::Format(format!("header lacks {k}")));
    let bad = |k: &str| Error::Format(format!("bad header value for {k}"));

    let layers = field("layers")?.split(',').map(str::parse).collect::<Result<Vec<LayerSpec>>>()?;
    let loss = match field("loss")? {
        "mse" => Loss::Mse,
        "xent" => Loss::Xent,
        _ => return Err(bad("loss")),
    };
    let opt: Vec<&str> = field("optimizer")?.split(':').collect();
    let num = |i: usize| opt.get(i).and_then(|s| s.parse::<f32>().ok()).ok_or_else(|| bad("optimizer"));
    let optimizer = match opt[0] {
        "sgd" if opt.len() == 2 => OptimizerSpec::Sgd { lr: num(1)? },
        "adam" if opt.len() == 5 => OptimizerSpec::Adam { lr: num(1)?, beta1: num(2)?, beta2: num(3)?, eps: num(4)? },
        _ => return Err(bad("optimizer")),
    };
    let seed = field("seed")?.parse().map_err(|_| bad("seed"))?;
    let config = NetworkConfig { layers, loss, optimizer, seed };
    config.validate().map_err(|e| Error::Format(e.to_string()))?;

    let count = r.u32()? as usize;
    let mut arrays = Vec::new();
    for _ in 0..count {
        let ndim = r.u32()? as usize;
        let mut n = 1usize;
        let mut dims = Vec::with_capacity(ndim);
        for _ in 0..ndim {
            let d = r.u32()? as usize;
            n = n.checked_mul(d).ok_or_else(|| Error::Format("array too large".into()))?;
            dims.push(d);
        }
        let raw = r.take(n.checked_mul(4).ok_or_else(|| Error::Format("array too large".into()))?)?;
        let data: Vec<f32> = raw.chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().unwrap())).collect();
        arrays.push((dims, data));
    }
    if r.pos != bytes.len() {
        return Err(Error::Format("trailing bytes after the last array".into()));
    }

    let mut arrays = arrays.into_iter();
    let mut read_params = || -> Result<Vec<Option<LayerParams<f32>>>> {
        let mut params = Vec::new();
        for spec in &config.layers {
            if matches!(spec, LayerSpec::Activation(_)) {
                params.push(None);
                continue;
            }
            let want_w = weight_dims(spec);
            let want_b = vec![want_w[0]];
            let (wd, weights) = arrays.next().ok_or_else(|| Error::Format("missing parameter array".into()))?;
            let (bd, bias) = arrays.next().ok_or_else(|| Error::Format("missing parameter array".into()))?;
            if wd != want_w || bd != want_b {
                return Err(Error::Format(format!("array shapes {wd:?}/{bd:?} do not match layer {spec}")));
            }
            params.push(Some(LayerParams { weights, bias }));
        }
        Ok(params)
    };
    let params = read_params()?;
    let adam = match fields.get("adam_step") {
        Some(step) => {
            let step = step.parse().map_err(|_| bad("adam_step"))?;
            let m = read_params()?;
            let v = read_params()?;
            Some(AdamState { step, m, v })
        }
        None => None,
    };
    if arrays.next().is_some() {
        return Err(Error::Format("unexpected extra arrays".into()));
    }
    Ok((Network::from_parts(config, params, adam), meta))
}

pub fn save_model(net: &Network<f32>, meta: &Metadata, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model_to_bytes(net, meta)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<(Network<f32>, Metadata)> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    model_from_bytes(&bytes)
}
