//! Sliding-window MLP: the 24 cells around a covered cell predict whether it
//! holds a mine.

use rand::Rng;

use crate::board::{bordering_cells, Cell, Game, GameConfig, GameResult, GameState, GameStatus};
use crate::error::{Error, Result};
use crate::nn::{Network, Tensor};

pub const WINDOW_RADIUS: isize = 2;
pub const WINDOW_INPUTS: usize = 24;
/// Encoding of positions outside the board, before normalisation.
pub const OFF_BOARD: i8 = -3;

/// Maps a visible value to the network input range: covered → 0.0, 8 → 1.0,
/// off-board → -0.1.
pub fn normalise(v: i8) -> f32 {
    (v as f32 + 2.0) / 10.0
}

/// Values of the 5×5 patch around `cell` without its centre, row-major.
pub fn extract_window(state: &GameState, cell: Cell) -> Result<[f32; WINDOW_INPUTS]> {
    if !state.in_bounds(cell.row, cell.col) {
        return Err(Error::InvalidCoordinate { row: cell.row, col: cell.col, rows: state.rows(), cols: state.cols() });
    }
    if !state.is_covered(cell) {
        return Err(Error::NotCovered(cell));
    }
    let mut out = [0.0; WINDOW_INPUTS];
    let mut i = 0;
    for dr in -WINDOW_RADIUS..=WINDOW_RADIUS {
        for dc in -WINDOW_RADIUS..=WINDOW_RADIUS {
            if dr == 0 && dc == 0 {
                continue;
            }
            let (r, c) = (cell.row as isize + dr, cell.col as isize + dc);
            let v = if r >= 0 && c >= 0 && state.in_bounds(r as usize, c as usize) {
                state.get(Cell::new(r as usize, c as usize))
            } else {
                OFF_BOARD
            };
            out[i] = normalise(v);
            i += 1;
        }
    }
    Ok(out)
}

pub fn mlp_predict(net: &Network<f32>, window: &[f32]) -> Result<f32> {
    let out = net.predict(&Tensor::from_vec(window.to_vec()))?;
    if out.len() != 1 {
        return Err(Error::Shape(format!("window network must have one output, has {}", out.len())));
    }
    Ok(out.data()[0])
}

/// Lowest-risk bordering cell (row-major on ties); a random covered cell when
/// nothing borders the uncovered region.
pub fn mlp_choose_move<R: Rng + ?Sized>(net: &Network<f32>, state: &GameState, rng: &mut R) -> Result<Cell> {
    let mut best: Option<(f32, Cell)> = None;
    for c in bordering_cells(state) {
        let risk = mlp_predict(net, &extract_window(state, c)?)?;
        if best.is_none_or(|(b, _)| risk < b) {
            best = Some((risk, c));
        }
    }
    if let Some((_, c)) = best {
        return Ok(c);
    }
    let covered = state.covered_cells();
    if covered.is_empty() {
        return Err(Error::GameOver);
    }
    Ok(covered[rng.random_range(0..covered.len())])
}

/// Plays `game` to the end with the window network.
pub fn mlp_play_game<R: Rng + ?Sized>(net: &Network<f32>, game: &mut Game, rng: &mut R) -> Result<GameResult> {
    while game.status() == GameStatus::Playing {
        let c = mlp_choose_move(net, game.state(), rng)?;
        game.uncover(c)?;
    }
    Ok(GameResult::from_game(game))
}

pub fn mlp_play<R: Rng + ?Sized>(net: &Network<f32>, config: GameConfig, rng: &mut R) -> Result<GameResult> {
    let mut game = Game::new(config)?;
    mlp_play_game(net, &mut game, rng)
}
