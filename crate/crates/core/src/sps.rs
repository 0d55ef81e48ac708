//! Single Point Strategy: deductions that look at one uncovered cell and its
//! immediate neighbours, with a solver-local flag overlay.

use std::collections::VecDeque;

use rand::Rng;

use crate::board::{Cell, Game, GameResult, GameState, GameStatus};
use crate::error::{Error, Result};

/// Solver-local state: flags and the queue of informative uncovered cells.
#[derive(Debug, Clone)]
pub struct SpsState {
    cols: usize,
    flags: Vec<bool>,
    queue: VecDeque<Cell>,
    queued: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Flagged(Vec<Cell>),
    Uncovered(Vec<Cell>),
    RandomPick(Cell),
    NoProgress,
}

impl SpsState {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { cols, flags: vec![false; rows * cols], queue: VecDeque::new(), queued: vec![false; rows * cols] }
    }

    pub fn is_flagged(&self, cell: Cell) -> bool {
        self.flags[cell.row * self.cols + cell.col]
    }

    pub fn flags(&self) -> impl Iterator<Item = Cell> + '_ {
        let cols = self.cols;
        self.flags.iter().enumerate().filter(|(_, &f)| f).map(move |(i, _)| Cell::new(i / cols, i % cols))
    }

    pub fn queue(&self) -> impl Iterator<Item = &Cell> {
        self.queue.iter()
    }

    fn flag(&mut self, cell: Cell) {
        self.flags[cell.row * self.cols + cell.col] = true;
    }

    fn enqueue(&mut self, cell: Cell) {
        let i = cell.row * self.cols + cell.col;
        if !self.queued[i] {
            self.queued[i] = true;
            self.queue.push_back(cell);
        }
    }

    fn pop(&mut self) -> Option<Cell> {
        let c = self.queue.pop_front()?;
        self.queued[c.row * self.cols + c.col] = false;
        Some(c)
    }

    fn covered_unflagged(&self, state: &GameState, cell: Cell) -> Vec<Cell> {
        state.neighbours(cell).filter(|&n| state.is_covered(n) && !self.is_flagged(n)).collect()
    }

    /// Queues `cell` if it is an uncovered number with a covered, unflagged neighbour.
    fn enqueue_if_informative(&mut self, state: &GameState, cell: Cell) {
        if !state.is_covered(cell) && state.neighbours(cell).any(|n| state.is_covered(n) && !self.is_flagged(n)) {
            self.enqueue(cell);
        }
    }
}

/// `value(cell)` minus the number of flagged neighbours.
pub fn mines_left(state: &GameState, sps: &SpsState, cell: Cell) -> Result<i32> {
    if state.is_covered(cell) {
        return Err(Error::NotUncovered(cell));
    }
    let flagged = state.neighbours(cell).filter(|&n| sps.is_flagged(n)).count() as i32;
    Ok(state.get(cell) as i32 - flagged)
}

/// Applies one step of the strategy.
pub fn sps_step<R: Rng + ?Sized>(game: &mut Game, sps: &mut SpsState, rng: &mut R) -> Result<StepOutcome> {
    if game.status() != GameStatus::Playing {
        return Err(Error::GameOver);
    }
    let Some(x) = sps.pop() else {
        let candidates: Vec<Cell> =
            game.state().covered_cells().into_iter().filter(|&c| !sps.is_flagged(c)).collect();
        let pick = candidates[rng.random_range(0..candidates.len())];
        let reveal = game.reveal(pick)?;
        enqueue_around(game.state(), sps, &reveal.revealed);
        return Ok(StepOutcome::RandomPick(pick));
    };

    let state = game.state();
    // Cells leave the queue lazily; a cell may have lost its covered
    // neighbours since it was queued.
    let covered = sps.covered_unflagged(state, x);
    if covered.is_empty() {
        return Ok(StepOutcome::NoProgress);
    }
    let left = mines_left(state, sps, x)?;
    if left == covered.len() as i32 {
        for &c in &covered {
            sps.flag(c);
        }
        for &c in &covered {
            for n in state.neighbours(c) {
                sps.enqueue_if_informative(state, n);
            }
        }
        Ok(StepOutcome::Flagged(covered))
    } else if left == 0 {
        let mut revealed = Vec::new();
        for &c in &covered {
            if game.status() != GameStatus::Playing {
                break;
            }
            if game.state().is_covered(c) {
                revealed.extend(game.reveal(c)?.revealed);
            }
        }
        enqueue_around(game.state(), sps, &revealed);
        Ok(StepOutcome::Uncovered(covered))
    } else {
        Ok(StepOutcome::NoProgress)
    }
}

fn enqueue_around(state: &GameState, sps: &mut SpsState, revealed: &[Cell]) {
    if state.status != GameStatus::Playing {
        return;
    }
    let mut touched: Vec<Cell> = revealed.iter().flat_map(|&c| std::iter::once(c).chain(state.neighbours(c))).collect();
    touched.sort();
    touched.dedup();
    for c in touched {
        sps.enqueue_if_informative(state, c);
    }
}

/// Plays a whole game with the strategy on an existing (unstarted) game.
pub fn sps_play_game<R: Rng + ?Sized>(game: &mut Game, rng: &mut R) -> GameResult {
    let cfg = *game.config();
    let mut sps = SpsState::new(cfg.rows, cfg.cols);
    let mut deduction_losses = 0;
    let mut guesses = 0;
    while game.status() == GameStatus::Playing {
        let outcome = sps_step(game, &mut sps, rng).expect("step on a live game");
        match outcome {
            StepOutcome::RandomPick(_) => {
                // the opening click is engine-protected and not a guess
                if game.state().moves_made > 1 {
                    guesses += 1;
                }
            }
            StepOutcome::Uncovered(_) if game.status() == GameStatus::Lost => deduction_losses += 1,
            _ => {}
        }
    }
    GameResult { deduction_losses, guesses, ..GameResult::from_game(game) }
}

/// Plays one seeded game.
pub fn sps_play(config: crate::board::GameConfig, rng: &mut impl Rng) -> Result<GameResult> {
    let mut game = Game::new(config)?;
    Ok(sps_play_game(&mut game, rng))
}
