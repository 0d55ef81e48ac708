//! Fully convolutional learner: a one-hot board goes in, a per-cell mine
//! risk map comes out.

use crate::board::{Cell, Game, GameConfig, GameResult, GameState, GameStatus, COVERED};
use crate::csp;
use crate::error::{Error, Result};
use crate::nn::{Network, Tensor};

pub const CHANNELS: usize = 10;

/// Channel k marks visible value k (0..=8), channel 9 marks covered cells.
pub fn one_hot(state: &GameState) -> Tensor<f32> {
    let (rows, cols) = (state.rows(), state.cols());
    let hw = rows * cols;
    let mut data = vec![0.0; CHANNELS * hw];
    for (i, &v) in state.visible().iter().enumerate() {
        let ch = if v == COVERED { 9 } else { v as usize };
        data[ch * hw + i] = 1.0;
    }
    Tensor::new(vec![CHANNELS, rows, cols], data).expect("board has cells")
}

/// Risk map with the board's shape.
pub fn cnn_predict(net: &Network<f32>, state: &GameState) -> Result<Tensor<f32>> {
    let out = net.predict(&one_hot(state))?;
    if out.shape() != [1, state.rows(), state.cols()] {
        return Err(Error::Shape(format!("risk map must be [1,{},{}], got {:?}", state.rows(), state.cols(), out.shape())));
    }
    out.reshape(vec![state.rows(), state.cols()])
}

/// Lowest-risk covered cell of `map`, row-major on ties.
pub fn masked_argmin(map: &[f32], state: &GameState) -> Option<Cell> {
    let mut best: Option<(f32, Cell)> = None;
    for c in state.cells().filter(|&c| state.is_covered(c)) {
        let r = map[c.row * state.cols() + c.col];
        if best.is_none_or(|(b, _)| r < b) {
            best = Some((r, c));
        }
    }
    best.map(|(_, c)| c)
}

pub fn cnn_choose_move(net: &Network<f32>, state: &GameState) -> Result<Cell> {
    let map = cnn_predict(net, state)?;
    masked_argmin(map.data(), state).ok_or(Error::GameOver)
}

/// Plays `game` to the end. With `no_guess`, only moves that exact inference
/// proves safe are played: the first unproven choice ends the game as a
/// resignation. The opening click is exempt.
pub fn cnn_play_game(net: &Network<f32>, game: &mut Game, no_guess: bool) -> Result<GameResult> {
    let mut guesses = 0;
    let mut resigned = false;
    while game.status() == GameStatus::Playing {
        let c = cnn_choose_move(net, game.state())?;
        if no_guess && !game.state().all_covered() && !csp::infer(game.state(), game.config().mines)?.safe.contains(&c) {
            guesses += 1;
            resigned = true;
            break;
        }
        game.uncover(c)?;
    }
    Ok(GameResult { guesses, resigned, ..GameResult::from_game(game) })
}

pub fn cnn_play(net: &Network<f32>, config: GameConfig, no_guess: bool) -> Result<GameResult> {
    let mut game = Game::new(config)?;
    cnn_play_game(net, &mut game, no_guess)
}
