//! Named learner architectures and the trained-learner wrapper shared by
//! self-play training, evaluation and the command line.

use std::path::Path;

use rand::Rng;

use crate::board::{Cell, FirstClick, Game, GameResult, GameState, Mode};
use crate::cnn::{self, CHANNELS};
use crate::error::{Error, Result};
use crate::mlp::{self, WINDOW_INPUTS};
use crate::nn::{self, Activation, LayerSpec, Loss, Metadata, Network, NetworkConfig, OptimizerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Mlp,
    Cnn,
}

impl LearnerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Mlp => "mlp",
            LearnerKind::Cnn => "cnn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mlp" => Some(LearnerKind::Mlp),
            "cnn" => Some(LearnerKind::Cnn),
            _ => None,
        }
    }
}

/// A named network layout with its training defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Arch {
    pub label: &'static str,
    pub kind: LearnerKind,
    pub layers: Vec<LayerSpec>,
    pub loss: Loss,
    pub optimizer: OptimizerSpec,
    pub first_click: FirstClick,
    pub mode: Mode,
}

impl Arch {
    pub fn network_config(&self, seed: u64) -> NetworkConfig {
        NetworkConfig { layers: self.layers.clone(), loss: self.loss, optimizer: self.optimizer, seed }
    }
}

pub const MLP_LR: f32 = 0.003;
pub const CNN_LR: f32 = 0.001;

const MLP_SIZES: [(&str, [usize; 4]); 4] = [
    ("MLP_learner1", [40, 30, 20, 10]),
    ("MLP_learner2", [50, 60, 40, 20]),
    ("MLP_learner3", [70, 80, 60, 35]),
    ("MLP_learner4", [70, 100, 90, 45]),
];

/// Label, (filters, kernel) per conv layer, first click, training mode.
type CnnEntry = (&'static str, &'static [(usize, usize)], FirstClick, Mode);

const CNN_TABLE: [CnnEntry; 10] = [
    ("cnnlearner1", &[(25, 5), (25, 5), (64, 5)], FirstClick::ZeroCell, Mode::Beginner),
    ("cnnlearner3", &[(32, 3), (32, 3), (64, 3)], FirstClick::ZeroCell, Mode::Expert),
    ("cnnlearner4", &[(64, 3), (32, 3), (32, 1)], FirstClick::ZeroCell, Mode::Beginner),
    ("cnnlearner8", &[(25, 5), (32, 3), (32, 1)], FirstClick::ZeroCell, Mode::Intermediate),
    ("cnnlearner10", &[(25, 5), (32, 3), (64, 1)], FirstClick::ZeroCell, Mode::Beginner),
    ("cnnlearner11", &[(25, 5), (25, 5), (64, 5)], FirstClick::ZeroCell, Mode::Intermediate),
    ("cnnlearner14", &[(25, 5), (32, 3), (64, 1)], FirstClick::SafeCell, Mode::Beginner),
    ("cnnlearner18", &[(32, 3), (32, 3), (32, 3), (32, 3)], FirstClick::SafeCell, Mode::Beginner),
    ("cnnlearner19", &[(32, 3), (32, 3), (32, 3), (32, 3)], FirstClick::SafeCell, Mode::Intermediate),
    ("cnnlearner20", &[(32, 3), (32, 3), (32, 3), (32, 3)], FirstClick::SafeCell, Mode::Expert),
];

pub fn known_labels() -> Vec<&'static str> {
    CNN_TABLE.iter().map(|e| e.0).chain(MLP_SIZES.iter().map(|e| e.0)).collect()
}

/// 24 → hidden layers → 1, ReLU hidden, sigmoid output.
pub fn mlp_layers(hidden: &[usize]) -> Vec<LayerSpec> {
    let mut layers = Vec::new();
    let mut width = WINDOW_INPUTS;
    for &h in hidden {
        layers.push(LayerSpec::dense(width, h));
        layers.push(LayerSpec::Activation(Activation::Relu));
        width = h;
    }
    layers.push(LayerSpec::dense(width, 1));
    layers.push(LayerSpec::Activation(Activation::Sigmoid));
    layers
}

/// Conv stack with ReLU after each layer, then a 1×1 sigmoid head.
pub fn cnn_layers(filters: &[(usize, usize)]) -> Vec<LayerSpec> {
    let mut layers = Vec::new();
    let mut channels = CHANNELS;
    for &(n, k) in filters {
        layers.push(LayerSpec::conv(channels, n, k));
        layers.push(LayerSpec::Activation(Activation::Relu));
        channels = n;
    }
    layers.push(LayerSpec::conv(channels, 1, 1));
    layers.push(LayerSpec::Activation(Activation::Sigmoid));
    layers
}

pub fn arch(label: &str) -> Option<Arch> {
    if let Some((label, sizes)) = MLP_SIZES.iter().find(|e| e.0 == label) {
        return Some(Arch {
            label,
            kind: LearnerKind::Mlp,
            layers: mlp_layers(sizes),
            loss: Loss::Xent,
            optimizer: OptimizerSpec::Sgd { lr: MLP_LR },
            first_click: FirstClick::ZeroCell,
            mode: Mode::Beginner,
        });
    }
    let (label, filters, first_click, mode) = CNN_TABLE.iter().find(|e| e.0 == label)?;
    Some(Arch {
        label,
        kind: LearnerKind::Cnn,
        layers: cnn_layers(filters),
        loss: Loss::Mse,
        optimizer: OptimizerSpec::adam(CNN_LR),
        first_click: *first_click,
        mode: *mode,
    })
}

/// Looks up `label` or fails with the list of known labels.
pub fn require_arch(label: &str) -> Result<Arch> {
    arch(label).ok_or_else(|| Error::Config(format!("unknown architecture {label:?}; known: {}", known_labels().join(", "))))
}

/// A network together with what it is and how long it has been trained.
#[derive(Debug, Clone, PartialEq)]
pub struct Learner {
    pub label: String,
    pub kind: LearnerKind,
    pub first_click: FirstClick,
    pub net: Network<f32>,
    pub total_games: u64,
}

impl Learner {
    pub fn new(arch: &Arch, seed: u64) -> Result<Self> {
        Self::from_network(arch.label, arch.kind, arch.first_click, Network::new(arch.network_config(seed))?)
    }

    pub fn from_network(label: &str, kind: LearnerKind, first_click: FirstClick, net: Network<f32>) -> Result<Self> {
        if !net.config().ends_with_sigmoid() {
            return Err(Error::Shape("learner networks must end with a sigmoid".into()));
        }
        let first = net.config().layers.first().copied();
        let fits = match (kind, first) {
            (LearnerKind::Mlp, Some(LayerSpec::Dense { inputs, .. })) => inputs == WINDOW_INPUTS,
            (LearnerKind::Cnn, Some(LayerSpec::Conv { in_channels, .. })) => in_channels == CHANNELS,
            _ => false,
        };
        if !fits {
            return Err(Error::Shape(format!("first layer does not fit a {} learner", kind.as_str())));
        }
        Ok(Self { label: label.to_string(), kind, first_click, net, total_games: 0 })
    }

    pub fn choose_move<R: Rng + ?Sized>(&self, state: &GameState, rng: &mut R) -> Result<Cell> {
        match self.kind {
            LearnerKind::Mlp => mlp::mlp_choose_move(&self.net, state, rng),
            LearnerKind::Cnn => cnn::cnn_choose_move(&self.net, state),
        }
    }

    /// Plays `game` to the end. `no_guess` only applies to CNN learners.
    pub fn play_game<R: Rng + ?Sized>(&self, game: &mut Game, rng: &mut R, no_guess: bool) -> Result<GameResult> {
        match self.kind {
            LearnerKind::Mlp => mlp::mlp_play_game(&self.net, game, rng),
            LearnerKind::Cnn => cnn::cnn_play_game(&self.net, game, no_guess),
        }
    }

    pub fn metadata(&self) -> Metadata {
        let mut m = Metadata::new();
        m.insert("label".into(), self.label.clone());
        m.insert("learner".into(), self.kind.as_str().into());
        m.insert("first_click".into(), self.first_click.as_str().into());
        m.insert("total_games".into(), self.total_games.to_string());
        m
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        nn::save_model(&self.net, &self.metadata(), path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (net, meta) = nn::load_model(path)?;
        let get = |k: &str| meta.get(k).ok_or_else(|| Error::Format(format!("model header lacks meta.{k}")));
        let kind = LearnerKind::parse(get("learner")?).ok_or_else(|| Error::Format("unknown learner kind".into()))?;
        let first_click = FirstClick::parse(get("first_click")?).ok_or_else(|| Error::Format("unknown first-click policy".into()))?;
        let total_games = get("total_games")?.parse().map_err(|_| Error::Format("bad total_games".into()))?;
        let mut learner = Self::from_network(get("label")?, kind, first_click, net).map_err(|e| Error::Format(e.to_string()))?;
        learner.total_games = total_games;
        Ok(learner)
    }
}
