//! Minesweeper engine, rule-based solvers and neural learners trained by
//! self-play.

pub mod bench;
pub mod board;
pub mod cnn;
pub mod csp;
pub mod error;
pub mod learner;
pub mod mlp;
pub mod nn;
pub mod selfplay;
pub mod sps;

pub use board::{Cell, FirstClick, Game, GameConfig, GameResult, GameState, GameStatus, Mode};
pub use error::{Error, Result};
pub use learner::{Arch, Learner, LearnerKind};
