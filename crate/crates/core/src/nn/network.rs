use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tensor::{col2im, conv_from_cols, gemm, im2col, Scalar, Tensor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Sigmoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerSpec {
    Dense { inputs: usize, outputs: usize },
    /// Stride 1, same padding.
    Conv { in_channels: usize, out_channels: usize, kernel_h: usize, kernel_w: usize },
    Activation(Activation),
}

impl LayerSpec {
    pub fn dense(inputs: usize, outputs: usize) -> Self {
        LayerSpec::Dense { inputs, outputs }
    }

    pub fn conv(in_channels: usize, out_channels: usize, kernel: usize) -> Self {
        LayerSpec::Conv { in_channels, out_channels, kernel_h: kernel, kernel_w: kernel }
    }

    pub fn param_count(&self) -> usize {
        match *self {
            LayerSpec::Dense { inputs, outputs } => inputs * outputs + outputs,
            LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w } => {
                in_channels * out_channels * kernel_h * kernel_w + out_channels
            }
            LayerSpec::Activation(_) => 0,
        }
    }

    fn weight_shape(&self) -> Option<Vec<usize>> {
        match *self {
            LayerSpec::Dense { inputs, outputs } => Some(vec![outputs, inputs]),
            LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w } => {
                Some(vec![out_channels, in_channels, kernel_h, kernel_w])
            }
            LayerSpec::Activation(_) => None,
        }
    }

    fn fans(&self) -> (usize, usize) {
        match *self {
            LayerSpec::Dense { inputs, outputs } => (inputs, outputs),
            LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w } => {
                (in_channels * kernel_h * kernel_w, out_channels * kernel_h * kernel_w)
            }
            LayerSpec::Activation(_) => (0, 0),
        }
    }
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LayerSpec::Dense { inputs, outputs } => write!(f, "dense:{inputs}:{outputs}"),
            LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w } => {
                write!(f, "conv:{in_channels}:{out_channels}:{kernel_h}:{kernel_w}")
            }
            LayerSpec::Activation(Activation::Relu) => f.write_str("relu"),
            LayerSpec::Activation(Activation::Sigmoid) => f.write_str("sigmoid"),
        }
    }
}

impl std::str::FromStr for LayerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts.get(i).and_then(|p| p.parse().ok()).filter(|&n| n > 0).ok_or_else(|| Error::Format(format!("bad layer {s:?}")))
        };
        match parts[0] {
            "relu" if parts.len() == 1 => Ok(LayerSpec::Activation(Activation::Relu)),
            "sigmoid" if parts.len() == 1 => Ok(LayerSpec::Activation(Activation::Sigmoid)),
            "dense" if parts.len() == 3 => Ok(LayerSpec::Dense { inputs: num(1)?, outputs: num(2)? }),
            "conv" if parts.len() == 5 => Ok(LayerSpec::Conv {
                in_channels: num(1)?,
                out_channels: num(2)?,
                kernel_h: num(3)?,
                kernel_w: num(4)?,
            }),
            _ => Err(Error::Format(format!("bad layer {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Mse,
    /// Binary cross-entropy on sigmoid outputs.
    Xent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerSpec {
    Sgd { lr: f32 },
    Adam { lr: f32, beta1: f32, beta2: f32, eps: f32 },
}

impl OptimizerSpec {
    pub fn adam(lr: f32) -> Self {
        OptimizerSpec::Adam { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub layers: Vec<LayerSpec>,
    pub loss: Loss,
    pub optimizer: OptimizerSpec,
    pub seed: u64,
}

impl NetworkConfig {
    /// Checks dimensions and that adjacent layers compose.
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::Shape("network has no layers".into()));
        }
        // Tracks the feature count flowing between layers: Some(n) for a
        // flat vector, Err(c) for a channel stack of unknown spatial size.
        let mut flow: Option<std::result::Result<usize, usize>> = None;
        for (i, layer) in self.layers.iter().enumerate() {
            match *layer {
                LayerSpec::Dense { inputs, outputs } => {
                    if inputs == 0 || outputs == 0 {
                        return Err(Error::Shape(format!("layer {i}: zero-sized dense layer")));
                    }
                    if let Some(Ok(n)) = flow {
                        if n != inputs {
                            return Err(Error::Shape(format!("layer {i}: expects {inputs} inputs, previous layer gives {n}")));
                        }
                    }
                    flow = Some(Ok(outputs));
                }
                LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w } => {
                    if in_channels == 0 || out_channels == 0 || kernel_h == 0 || kernel_w == 0 {
                        return Err(Error::Shape(format!("layer {i}: zero-sized conv layer")));
                    }
                    if kernel_h % 2 == 0 || kernel_w % 2 == 0 {
                        return Err(Error::UnsupportedKernel(kernel_h, kernel_w));
                    }
                    match flow {
                        Some(Ok(_)) => return Err(Error::Shape(format!("layer {i}: conv after a dense layer"))),
                        Some(Err(c)) if c != in_channels => {
                            return Err(Error::Shape(format!("layer {i}: expects {in_channels} channels, previous layer gives {c}")))
                        }
                        _ => {}
                    }
                    flow = Some(Err(out_channels));
                }
                LayerSpec::Activation(_) => {}
            }
        }
        Ok(())
    }

    /// True when outputs are squashed into (0, 1).
    pub fn ends_with_sigmoid(&self) -> bool {
        matches!(self.layers.last(), Some(LayerSpec::Activation(Activation::Sigmoid)))
    }
}

/// Σ Dense(in·out + out) + Σ Conv(in·out·kh·kw + out).
pub fn param_count(config: &NetworkConfig) -> usize {
    config.layers.iter().map(LayerSpec::param_count).sum()
}

/// Trainable parameters of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams<T> {
    pub weights: Vec<T>,
    pub bias: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct AdamState<T> {
    pub(crate) step: u64,
    pub(crate) m: Vec<Option<LayerParams<T>>>,
    pub(crate) v: Vec<Option<LayerParams<T>>>,
}

/// Per-element regression target; masked elements carry no loss.
#[derive(Debug, Clone, PartialEq)]
pub struct Target<T = f32> {
    pub values: Vec<T>,
    pub mask: Option<Vec<bool>>,
}

impl<T: Scalar> Target<T> {
    pub fn dense(values: Vec<T>) -> Self {
        Self { values, mask: None }
    }

    pub fn masked(values: Vec<T>, mask: Vec<bool>) -> Self {
        assert_eq!(values.len(), mask.len());
        Self { values, mask: Some(mask) }
    }

    fn active(&self, i: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[i])
    }

    fn active_count(&self) -> usize {
        self.mask.as_ref().map_or(self.values.len(), |m| m.iter().filter(|&&b| b).count())
    }

    pub fn cast<U: Scalar>(&self) -> Target<U> {
        Target { values: self.values.iter().map(|&x| U::of(x.as_f64())).collect(), mask: self.mask.clone() }
    }
}

/// Activations recorded by [`Network::forward`] for the backward pass.
#[derive(Debug, Clone)]
pub struct Cache<T> {
    generation: u64,
    inputs: Vec<Tensor<T>>,
    // im2col matrices of conv layers
    cols: Vec<Option<Vec<T>>>,
    output: Tensor<T>,
}

impl<T: Scalar> Cache<T> {
    pub fn output(&self) -> &Tensor<T> {
        &self.output
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub layers: Vec<Option<LayerParams<T>>>,
    pub input: Tensor<T>,
}

#[derive(Debug, Clone)]
pub struct Network<T = f32> {
    config: NetworkConfig,
    params: Vec<Option<LayerParams<T>>>,
    pub(crate) adam: Option<AdamState<T>>,
    generation: u64,
}

// Equality ignores the cache generation.
impl<T: PartialEq> PartialEq for Network<T> {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.params == other.params && self.adam == other.adam
    }
}

impl<T: Scalar> Network<T> {
    /// Builds a network with He-uniform weights in front of ReLU layers,
    /// Xavier-uniform elsewhere, and zero biases.
    pub fn new(config: NetworkConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut params = Vec::with_capacity(config.layers.len());
        for (i, layer) in config.layers.iter().enumerate() {
            let Some(shape) = layer.weight_shape() else {
                params.push(None);
                continue;
            };
            let (fan_in, fan_out) = layer.fans();
            let relu_next = matches!(config.layers.get(i + 1), Some(LayerSpec::Activation(Activation::Relu)));
            let limit = if relu_next { (6.0 / fan_in as f64).sqrt() } else { (6.0 / (fan_in + fan_out) as f64).sqrt() };
            let n: usize = shape.iter().product();
            let weights = (0..n).map(|_| T::of(rng.random_range(-limit..limit))).collect();
            params.push(Some(LayerParams { weights, bias: vec![T::zero(); shape[0]] }));
        }
        let adam = match config.optimizer {
            OptimizerSpec::Adam { .. } => Some(AdamState { step: 0, m: zeros_like(&params), v: zeros_like(&params) }),
            OptimizerSpec::Sgd { .. } => None,
        };
        Ok(Self { config, params, adam, generation: 0 })
    }

    pub(crate) fn from_parts(config: NetworkConfig, params: Vec<Option<LayerParams<T>>>, adam: Option<AdamState<T>>) -> Self {
        Self { config, params, adam, generation: 0 }
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn params(&self) -> &[Option<LayerParams<T>>] {
        &self.params
    }

    pub fn param_count(&self) -> usize {
        param_count(&self.config)
    }

    /// Mutable access to the weights; invalidates outstanding caches.
    pub fn params_mut(&mut self) -> &mut [Option<LayerParams<T>>] {
        self.generation += 1;
        &mut self.params
    }

    /// Sets every weight and bias to `value`.
    pub fn fill(&mut self, value: T) {
        for p in self.params_mut().iter_mut().flatten() {
            p.weights.iter_mut().for_each(|w| *w = value);
            p.bias.iter_mut().for_each(|b| *b = value);
        }
    }

    /// Same network with parameters and optimizer state converted to `U`.
    pub fn cast<U: Scalar>(&self) -> Network<U> {
        Network {
            config: self.config.clone(),
            params: cast_params(&self.params),
            adam: self.adam.as_ref().map(|a| AdamState { step: a.step, m: cast_params(&a.m), v: cast_params(&a.v) }),
            generation: 0,
        }
    }

    pub fn forward(&self, input: &Tensor<T>) -> Result<(Tensor<T>, Cache<T>)> {
        let mut x = input.clone();
        let mut inputs = Vec::with_capacity(self.config.layers.len());
        let mut cols = Vec::with_capacity(self.config.layers.len());
        for (layer, params) in self.config.layers.iter().zip(&self.params) {
            let (y, col) = match (*layer, params) {
                (LayerSpec::Dense { inputs: n_in, outputs }, Some(p)) => {
                    if x.len() != n_in {
                        return Err(Error::Shape(format!("dense layer expects {n_in} inputs, got {:?}", x.shape())));
                    }
                    let mut y = p.bias.clone();
                    gemm(outputs, n_in, 1, &p.weights, false, x.data(), false, T::one(), &mut y);
                    (Tensor::from_vec(y), None)
                }
                (LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w }, Some(p)) => {
                    let [c, h, w] = x.shape()[..] else {
                        return Err(Error::Shape(format!("conv layer expects [c,h,w], got {:?}", x.shape())));
                    };
                    if c != in_channels {
                        return Err(Error::Shape(format!("conv layer expects {in_channels} channels, got {c}")));
                    }
                    let col = im2col(x.data(), c, h, w, kernel_h, kernel_w);
                    let y = conv_from_cols(&col, &p.weights, &p.bias, out_channels, c * kernel_h * kernel_w, h * w);
                    (Tensor::new(vec![out_channels, h, w], y)?, Some(col))
                }
                (LayerSpec::Activation(a), _) => {
                    let mut y = x.clone();
                    match a {
                        Activation::Relu => y.data_mut().iter_mut().for_each(|v| *v = v.max(T::zero())),
                        Activation::Sigmoid => y.data_mut().iter_mut().for_each(|v| *v = sigmoid(*v)),
                    }
                    (y, None)
                }
                _ => unreachable!("parameter layout follows the config"),
            };
            inputs.push(std::mem::replace(&mut x, y));
            cols.push(col);
        }
        let cache = Cache { generation: self.generation, inputs, cols, output: x.clone() };
        Ok((x, cache))
    }

    /// Inference only.
    pub fn predict(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        self.forward(input).map(|(y, _)| y)
    }

    /// Mean loss over the unmasked outputs.
    pub fn loss(&self, output: &Tensor<T>, target: &Target<T>) -> Result<f64> {
        check_target(output, target)?;
        let n = target.active_count();
        if n == 0 {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for (i, (&y, &t)) in output.data().iter().zip(&target.values).enumerate() {
            if !target.active(i) {
                continue;
            }
            let (y, t) = (y.as_f64(), t.as_f64());
            total += match self.config.loss {
                Loss::Mse => (y - t) * (y - t),
                Loss::Xent => {
                    let y = y.clamp(1e-7, 1.0 - 1e-7);
                    -(t * y.ln() + (1.0 - t) * (1.0 - y).ln())
                }
            };
        }
        Ok(total / n as f64)
    }

    /// Backpropagates the loss of `target` through the recorded activations.
    pub fn backward(&self, cache: &Cache<T>, target: &Target<T>) -> Result<Gradients<T>> {
        if cache.generation != self.generation || cache.inputs.len() != self.config.layers.len() {
            return Err(Error::Cache);
        }
        check_target(&cache.output, target)?;
        let n = target.active_count();
        let scale = if n == 0 { T::zero() } else { T::one() / T::of(n as f64) };
        let layers = &self.config.layers;
        let fused_xent = self.config.loss == Loss::Xent && self.config.ends_with_sigmoid();

        let mut last = layers.len();
        let out = cache.output.data();
        let mut grad: Vec<T> = out
            .iter()
            .zip(&target.values)
            .enumerate()
            .map(|(i, (&y, &t))| {
                if !target.active(i) {
                    return T::zero();
                }
                match self.config.loss {
                    Loss::Mse => T::of(2.0) * (y - t) * scale,
                    // sigmoid and cross-entropy cancel to (y - t)
                    Loss::Xent if fused_xent => (y - t) * scale,
                    Loss::Xent => {
                        let eps = T::of(1e-7);
                        let yc = y.max(eps).min(T::one() - eps);
                        (yc - t) / (yc * (T::one() - yc)) * scale
                    }
                }
            })
            .collect();
        if fused_xent {
            last -= 1;
        }

        let mut grads: Vec<Option<LayerParams<T>>> = vec![None; layers.len()];
        for i in (0..last).rev() {
            let x = &cache.inputs[i];
            match (layers[i], &self.params[i]) {
                (LayerSpec::Activation(Activation::Relu), _) => {
                    for (g, &xi) in grad.iter_mut().zip(x.data()) {
                        if xi <= T::zero() {
                            *g = T::zero();
                        }
                    }
                }
                (LayerSpec::Activation(Activation::Sigmoid), _) => {
                    for (g, &xi) in grad.iter_mut().zip(x.data()) {
                        let s = sigmoid(xi);
                        *g = *g * s * (T::one() - s);
                    }
                }
                (LayerSpec::Dense { inputs, outputs }, Some(p)) => {
                    let mut dw = vec![T::zero(); outputs * inputs];
                    gemm(outputs, 1, inputs, &grad, false, x.data(), false, T::zero(), &mut dw);
                    let mut dx = vec![T::zero(); inputs];
                    gemm(inputs, outputs, 1, &p.weights, true, &grad, false, T::zero(), &mut dx);
                    grads[i] = Some(LayerParams { weights: dw, bias: grad });
                    grad = dx;
                }
                (LayerSpec::Conv { in_channels, out_channels, kernel_h, kernel_w }, Some(p)) => {
                    let (h, w) = (x.shape()[1], x.shape()[2]);
                    let (hw, ck) = (h * w, in_channels * kernel_h * kernel_w);
                    let cols = cache.cols[i].as_ref().ok_or(Error::Cache)?;
                    let mut dw = vec![T::zero(); out_channels * ck];
                    gemm(out_channels, hw, ck, &grad, false, cols, true, T::zero(), &mut dw);
                    let db: Vec<T> = grad.chunks(hw).map(|row| row.iter().fold(T::zero(), |a, &b| a + b)).collect();
                    let mut dcols = vec![T::zero(); ck * hw];
                    gemm(ck, out_channels, hw, &p.weights, true, &grad, false, T::zero(), &mut dcols);
                    grads[i] = Some(LayerParams { weights: dw, bias: db });
                    grad = col2im(&dcols, in_channels, h, w, kernel_h, kernel_w);
                }
                _ => unreachable!("parameter layout follows the config"),
            }
        }
        let input = Tensor::new(cache.inputs[0].shape().to_vec(), grad)?;
        Ok(Gradients { layers: grads, input })
    }

    /// Applies one optimizer step.
    pub fn update(&mut self, grads: &Gradients<T>) -> Result<()> {
        if grads.layers.len() != self.params.len() {
            return Err(Error::Shape("gradient layer count differs from the network".into()));
        }
        for (g, p) in grads.layers.iter().zip(&self.params) {
            match (g, p) {
                (Some(g), Some(p)) if g.weights.len() == p.weights.len() && g.bias.len() == p.bias.len() => {}
                (None, None) => {}
                _ => return Err(Error::Shape("gradient shapes differ from the parameters".into())),
            }
        }
        self.generation += 1;
        match self.config.optimizer {
            OptimizerSpec::Sgd { lr } => {
                let lr = T::of(lr as f64);
                for (g, p) in grads.layers.iter().zip(self.params.iter_mut()) {
                    if let (Some(g), Some(p)) = (g, p) {
                        for (w, &d) in p.weights.iter_mut().zip(&g.weights).chain(p.bias.iter_mut().zip(&g.bias)) {
                            *w = *w - lr * d;
                        }
                    }
                }
            }
            OptimizerSpec::Adam { lr, beta1, beta2, eps } => {
                let state = self.adam.get_or_insert_with(|| AdamState { step: 0, m: zeros_like(&self.params), v: zeros_like(&self.params) });
                state.step += 1;
                let (b1, b2) = (T::of(beta1 as f64), T::of(beta2 as f64));
                let c1 = T::one() - b1.powi(state.step as i32);
                let c2 = T::one() - b2.powi(state.step as i32);
                let (lr, eps) = (T::of(lr as f64), T::of(eps as f64));
                for (((g, p), m), v) in grads.layers.iter().zip(self.params.iter_mut()).zip(state.m.iter_mut()).zip(state.v.iter_mut()) {
                    let (Some(g), Some(p), Some(m), Some(v)) = (g, p, m, v) else { continue };
                    let pairs = [(&mut p.weights, &g.weights, &mut m.weights, &mut v.weights), (&mut p.bias, &g.bias, &mut m.bias, &mut v.bias)];
                    for (params, grad, ms, vs) in pairs {
                        for i in 0..params.len() {
                            let d = grad[i];
                            ms[i] = b1 * ms[i] + (T::one() - b1) * d;
                            vs[i] = b2 * vs[i] + (T::one() - b2) * d * d;
                            let mhat = ms[i] / c1;
                            let vhat = vs[i] / c2;
                            params[i] = params[i] - lr * mhat / (vhat.sqrt() + eps);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// One forward/backward/update cycle; returns the loss before the update.
    pub fn train_step(&mut self, input: &Tensor<T>, target: &Target<T>) -> Result<f64> {
        let (out, cache) = self.forward(input)?;
        let loss = self.loss(&out, target)?;
        let grads = self.backward(&cache, target)?;
        self.update(&grads)?;
        Ok(loss)
    }

    fn param_mut(&mut self, layer: usize, bias: usize, k: usize) -> &mut T {
        let p = self.params[layer].as_mut().expect("parameter layer");
        if bias == 0 { &mut p.weights[k] } else { &mut p.bias[k] }
    }

    /// Largest relative error between backpropagated gradients and central
    /// differences over every parameter and input element.
    pub fn grad_check(&mut self, input: &Tensor<T>, target: &Target<T>, eps: f64) -> Result<f64> {
        let (_, cache) = self.forward(input)?;
        let analytic = self.backward(&cache, target)?;
        let eps_t = T::of(eps);
        let mut worst = 0.0f64;

        for li in 0..self.params.len() {
            let Some(g) = analytic.layers[li].clone() else { continue };
            for which in 0..2 {
                let len = if which == 0 { g.weights.len() } else { g.bias.len() };
                for k in 0..len {
                    let orig = *self.param_mut(li, which, k);
                    *self.param_mut(li, which, k) = orig + eps_t;
                    let lp = self.loss(&self.predict(input)?, target)?;
                    *self.param_mut(li, which, k) = orig - eps_t;
                    let lm = self.loss(&self.predict(input)?, target)?;
                    *self.param_mut(li, which, k) = orig;
                    let numeric = (lp - lm) / (2.0 * eps);
                    let a = if which == 0 { g.weights[k] } else { g.bias[k] }.as_f64();
                    worst = worst.max(relative_error(a, numeric));
                }
            }
        }
        for k in 0..input.len() {
            let mut x = input.clone();
            x.data_mut()[k] = input.data()[k] + eps_t;
            let lp = self.loss(&self.predict(&x)?, target)?;
            x.data_mut()[k] = input.data()[k] - eps_t;
            let lm = self.loss(&self.predict(&x)?, target)?;
            let numeric = (lp - lm) / (2.0 * eps);
            worst = worst.max(relative_error(analytic.input.data()[k].as_f64(), numeric));
        }
        self.generation += 1;
        Ok(worst)
    }
}

/// Denominator floor for [`relative_error`]; gradients below it are compared
/// on an absolute scale.
pub const GRAD_CHECK_FLOOR: f64 = 1e-6;

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(GRAD_CHECK_FLOOR)
}

/// Builds an `f64` copy of the network described by `config` and checks its
/// gradients against central differences with step `eps`.
pub fn grad_check(config: &NetworkConfig, input: &Tensor<f64>, target: &Target<f64>, eps: f64) -> Result<f64> {
    let mut net = Network::<f64>::new(config.clone())?;
    net.grad_check(input, target, eps)
}

fn sigmoid<T: Scalar>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

fn check_target<T: Scalar>(output: &Tensor<T>, target: &Target<T>) -> Result<()> {
    if output.len() != target.values.len() {
        return Err(Error::Shape(format!("output has {} values, target {}", output.len(), target.values.len())));
    }
    Ok(())
}

fn zeros_like<T: Scalar>(params: &[Option<LayerParams<T>>]) -> Vec<Option<LayerParams<T>>> {
    params
        .iter()
        .map(|p| p.as_ref().map(|p| LayerParams { weights: vec![T::zero(); p.weights.len()], bias: vec![T::zero(); p.bias.len()] }))
        .collect()
}

fn cast_params<T: Scalar, U: Scalar>(params: &[Option<LayerParams<T>>]) -> Vec<Option<LayerParams<U>>> {
    params
        .iter()
        .map(|p| {
            p.as_ref().map(|p| LayerParams {
                weights: p.weights.iter().map(|&x| U::of(x.as_f64())).collect(),
                bias: p.bias.iter().map(|&x| U::of(x.as_f64())).collect(),
            })
        })
        .collect()
}
