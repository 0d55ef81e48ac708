mod common;

use common::{act, naive_conv, random_config, random_input, random_target};
use minelab::nn::{
    conv2d_same, grad_check, model_from_bytes, model_to_bytes, Activation, LayerSpec, Loss, Metadata, Network, NetworkConfig,
    OptimizerSpec, Target, Tensor,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gradient_suite() {
    for (seed, err) in common::gradient_suite(24).into_iter().enumerate() {
        assert!(err <= 1e-4, "config {seed}: {err}");
    }
}

#[test]
fn linear_grad_check_is_exact() {
    let cfg = NetworkConfig { layers: vec![LayerSpec::dense(1, 1)], loss: Loss::Mse, optimizer: OptimizerSpec::Sgd { lr: 0.1 }, seed: 3 };
    let err = grad_check(&cfg, &Tensor::from_vec(vec![0.7]), &Target::dense(vec![0.2]), 1e-5).unwrap();
    assert!(err <= 1e-7, "{err}");
}

#[test]
fn learner_shaped_grad_checks() {
    let mlp = minelab::learner::arch("MLP_learner1").unwrap().network_config(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_input(&mut rng, &[24]);
    assert!(grad_check(&mlp, &x, &Target::dense(vec![1.0]), 1e-5).unwrap() <= 1e-4);

    let cnn = NetworkConfig {
        layers: vec![LayerSpec::conv(10, 2, 3), act(Activation::Relu), LayerSpec::conv(2, 1, 1), act(Activation::Sigmoid)],
        loss: Loss::Mse,
        optimizer: OptimizerSpec::adam(0.001),
        seed: 9,
    };
    let x = random_input(&mut rng, &[10, 4, 4]);
    let t = random_target(&mut rng, 16, true);
    assert!(grad_check(&cnn, &x, &t, 1e-5).unwrap() <= 1e-4);
}

#[test]
fn conv_matches_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (c, h, w, f, k) in [(10, 9, 9, 4, 3), (10, 16, 30, 2, 5), (3, 4, 7, 5, 1), (10, 5, 5, 1, 5), (1, 2, 3, 2, 3)] {
        let x: Vec<f64> = (0..c * h * w).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fl: Vec<f64> = (0..f * c * k * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..f).map(|_| rng.random_range(-1.0..1.0)).collect();
        let want = naive_conv(&x, c, h, w, &fl, f, k, k, &b);
        let got = conv2d_same(&Tensor::new(vec![c, h, w], x).unwrap(), &Tensor::new(vec![f, c, k, k], fl).unwrap(), &b).unwrap();
        let diff = got.data().iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff <= 1e-10, "{diff}");
    }
}

#[test]
fn adam_matches_scalar_reference() {
    // minimise (w·1 + b - 3)^2 with a single dense unit
    let cfg = NetworkConfig { layers: vec![LayerSpec::dense(1, 1)], loss: Loss::Mse, optimizer: OptimizerSpec::adam(0.05), seed: 1 };
    let mut net = Network::<f64>::new(cfg).unwrap();
    let p0 = net.params()[0].clone().unwrap();
    let (mut w, mut b) = (p0.weights[0], p0.bias[0]);
    let (lr, b1, b2, eps) = (0.05f32 as f64, 0.9f32 as f64, 0.999f32 as f64, 1e-8f32 as f64);
    let (mut mw, mut vw, mut mb, mut vb) = (0.0, 0.0, 0.0, 0.0);
    let x = Tensor::from_vec(vec![1.0]);
    let t = Target::dense(vec![3.0]);
    for step in 1..=200 {
        net.train_step(&x, &t).unwrap();
        let g = 2.0 * (w + b - 3.0);
        mw = b1 * mw + (1.0 - b1) * g;
        vw = b2 * vw + (1.0 - b2) * g * g;
        mb = b1 * mb + (1.0 - b1) * g;
        vb = b2 * vb + (1.0 - b2) * g * g;
        let (c1, c2) = (1.0 - b1.powi(step), 1.0 - b2.powi(step));
        w -= lr * (mw / c1) / ((vw / c2).sqrt() + eps);
        b -= lr * (mb / c1) / ((vb / c2).sqrt() + eps);
        let p = net.params()[0].as_ref().unwrap();
        assert!((p.weights[0] - w).abs() <= 1e-6 && (p.bias[0] - b).abs() <= 1e-6, "step {step}");
    }
}

#[test]
fn training_is_deterministic() {
    let run = || {
        let (cfg, shape) = random_config(4);
        let mut net = Network::<f32>::new(NetworkConfig { optimizer: OptimizerSpec::adam(0.01), ..cfg }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let x = random_input(&mut rng, &shape).cast::<f32>();
            let n = net.predict(&x).unwrap().len();
            let t = random_target(&mut rng, n, true).cast::<f32>();
            net.train_step(&x, &t).unwrap();
        }
        net
    };
    assert_eq!(run(), run());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigmoid_outputs_in_open_interval(seed in 0u64..1000, scale in 0.0f32..5.0) {
        let (cfg, shape) = random_config(seed);
        let net = Network::<f32>::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_input(&mut rng, &shape).cast::<f32>();
        let x = Tensor::new(x.shape().to_vec(), x.data().iter().map(|v| v * scale).collect()).unwrap();
        for &y in net.predict(&x).unwrap().data() {
            prop_assert!(y > 0.0 && y < 1.0);
        }
    }

    #[test]
    fn same_padding_keeps_spatial_size(c in 1usize..4, h in 1usize..12, w in 1usize..12, k in 0usize..4, f in 1usize..4) {
        let k = 2 * k + 1;
        let out = conv2d_same(&Tensor::<f32>::zeros(vec![c, h, w]), &Tensor::zeros(vec![f, c, k, k]), &vec![0.0; f]).unwrap();
        prop_assert_eq!(out.shape(), &[f, h, w]);
    }

    #[test]
    fn serialization_round_trip_is_bit_exact(seed in 0u64..500) {
        let (cfg, shape) = random_config(seed);
        let mut net = Network::<f32>::new(NetworkConfig { optimizer: OptimizerSpec::adam(0.003), ..cfg }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_input(&mut rng, &shape).cast::<f32>();
        let n = net.predict(&x).unwrap().len();
        net.train_step(&x, &random_target(&mut rng, n, false).cast()).unwrap();
        let (back, _) = model_from_bytes(&model_to_bytes(&net, &Metadata::new())).unwrap();
        let (a, b) = (net.predict(&x).unwrap(), back.predict(&x).unwrap());
        prop_assert!(a.data().iter().zip(b.data()).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}

#[test]
fn model_files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, _) = random_config(2);
    let net = Network::<f32>::new(cfg).unwrap();
    let path = dir.path().join("m.bin");
    minelab::nn::save_model(&net, &Metadata::new(), &path).unwrap();
    assert_eq!(minelab::nn::load_model(&path).unwrap().0, net);
    assert!(matches!(minelab::nn::load_model(dir.path().join("missing")), Err(minelab::Error::Io { .. })));
}
