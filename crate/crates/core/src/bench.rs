//! Seeded evaluation series and comparison tables.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::{derive_seed, FirstClick, Game, GameConfig, GameResult, GameStatus, Mode};
use crate::csp;
use crate::error::Result;
use crate::learner::Learner;
use crate::sps;

pub const CSV_HEADER: &str = "solver,mode,rows,cols,mines,first_click,games,wins,win_rate,avg_moves,avg_seconds,seed";

const MOVE_STREAM: u64 = 0x6265_6e63;

#[derive(Debug, Clone)]
pub enum Solver {
    /// Uniformly random covered cell every move.
    Random,
    Sps,
    Csp { allow_guess: bool },
    Learner { learner: Box<Learner>, no_guess: bool },
}

impl Solver {
    pub fn label(&self) -> String {
        match self {
            Solver::Random => "random".into(),
            Solver::Sps => "sps".into(),
            Solver::Csp { allow_guess: true } => "csp".into(),
            Solver::Csp { allow_guess: false } => "csp-noguess".into(),
            Solver::Learner { learner, no_guess: false } => learner.label.clone(),
            Solver::Learner { learner, no_guess: true } => format!("{}-noguess", learner.label),
        }
    }

    /// First-click policy the solver was built for; learners carry their own.
    pub fn default_first_click(&self) -> FirstClick {
        match self {
            Solver::Learner { learner, .. } => learner.first_click,
            _ => FirstClick::SafeCell,
        }
    }

    /// Plays one game to the end. `rng` drives any random choices.
    pub fn play_game(&self, game: &mut Game, rng: &mut ChaCha8Rng) -> Result<GameResult> {
        match self {
            Solver::Random => {
                while game.status() == GameStatus::Playing {
                    let covered = game.state().covered_cells();
                    game.uncover(covered[rng.random_range(0..covered.len())])?;
                }
                Ok(GameResult::from_game(game))
            }
            Solver::Sps => Ok(sps::sps_play_game(game, rng)),
            Solver::Csp { allow_guess } => Ok(csp::csp_play_game(game, *allow_guess)),
            Solver::Learner { learner, no_guess } => learner.play_game(game, rng, *no_guess),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub solver: String,
    pub mode: Mode,
    pub first_click: FirstClick,
    pub games: u64,
    pub wins: u64,
    pub total_moves: u64,
    /// Seconds spent playing, excluding set-up and reporting; `None` when
    /// games ran on several threads.
    pub total_seconds: Option<f64>,
    pub seed: u64,
    pub guesses: u64,
    pub resigned: u64,
    pub cells_left_sum: u64,
    pub covered_violations: u64,
}

impl BenchReport {
    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.games as f64
    }

    pub fn avg_moves(&self) -> f64 {
        self.total_moves as f64 / self.games as f64
    }

    pub fn avg_seconds(&self) -> Option<f64> {
        self.total_seconds.map(|s| s / self.games as f64)
    }

    pub fn csv_row(&self) -> String {
        let (rows, cols, mines) = self.mode.dims();
        let secs = self.avg_seconds().map_or(String::new(), |s| format!("{s:.9}"));
        format!(
            "{},{},{rows},{cols},{mines},{},{},{},{:.6},{:.4},{secs},{}",
            self.solver,
            self.mode.name(),
            self.first_click.as_str(),
            self.games,
            self.wins,
            self.win_rate(),
            self.avg_moves(),
            self.seed
        )
    }

    fn absorb(&mut self, r: &GameResult) {
        self.games += 1;
        self.wins += u64::from(r.won);
        self.total_moves += r.moves as u64;
        self.guesses += r.guesses as u64;
        self.resigned += u64::from(r.resigned);
        self.cells_left_sum += r.cells_left as u64;
        self.covered_violations += r.covered_violations as u64;
    }
}

/// Configuration of game `index` in a series seeded with `seed`.
pub fn game_config(mode: Mode, first_click: FirstClick, seed: u64, index: u64) -> GameConfig {
    mode.game_config(first_click, derive_seed(seed, index))
}

fn play_indexed(solver: &Solver, cfg: GameConfig, seed: u64, index: u64) -> Result<(GameResult, f64)> {
    let mut game = Game::new(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed ^ MOVE_STREAM, index));
    let t = Instant::now();
    let r = solver.play_game(&mut game, &mut rng)?;
    Ok((r, t.elapsed().as_secs_f64()))
}

/// Plays `n` seeded games. With `threads > 1` the games are sharded across
/// threads and no timing is reported; the other columns do not change.
pub fn run_series(solver: &Solver, mode: Mode, first_click: FirstClick, n: u64, seed: u64, threads: usize) -> Result<BenchReport> {
    let mut report = BenchReport {
        solver: solver.label(),
        mode,
        first_click,
        games: 0,
        wins: 0,
        total_moves: 0,
        total_seconds: Some(0.0),
        seed,
        guesses: 0,
        resigned: 0,
        cells_left_sum: 0,
        covered_violations: 0,
    };
    mode.game_config(first_click, seed).validate()?;
    if threads <= 1 {
        let mut secs = 0.0;
        for i in 0..n {
            let (r, t) = play_indexed(solver, game_config(mode, first_click, seed, i), seed, i)?;
            secs += t;
            report.absorb(&r);
        }
        report.total_seconds = Some(secs);
        return Ok(report);
    }
    let results: Vec<Result<Vec<GameResult>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|t| {
                s.spawn(move || {
                    (t..n)
                        .step_by(threads)
                        .map(|i| play_indexed(solver, game_config(mode, first_click, seed, i), seed, i).map(|(r, _)| r))
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("evaluation thread panicked")).collect()
    });
    for shard in results {
        for r in shard? {
            report.absorb(&r);
        }
    }
    report.total_seconds = None;
    Ok(report)
}

/// Aligned text table and CSV (with header) of the reports, in input order.
///
/// Text columns: solver, mode, games, win_rate, avg_moves, avg_seconds.
pub fn compare(reports: &[BenchReport]) -> (String, String) {
    let mut text = format!("{:<24} {:<14} {:>8} {:>9} {:>10} {:>12}\n", "solver", "mode", "games", "win_rate", "avg_moves", "avg_seconds");
    let mut csv = format!("{CSV_HEADER}\n");
    for r in reports {
        let secs = r.avg_seconds().map_or("-".to_string(), |s| format!("{s:.3e}"));
        let _ = writeln!(
            text,
            "{:<24} {:<14} {:>8} {:>8.2}% {:>10.2} {:>12}",
            r.solver,
            r.mode.name(),
            r.games,
            100.0 * r.win_rate(),
            r.avg_moves(),
            secs
        );
        csv += &r.csv_row();
        csv.push('\n');
    }
    (text, csv)
}

/// Multiply-accumulate estimate for scoring every cell of a board with a
/// network on every move of a game: params × cells × moves.
pub fn estimate_forward_cost(params: u64, cells: u64, avg_moves: u64) -> u128 {
    params as u128 * cells as u128 * avg_moves as u128
}

#[derive(Debug, Clone, PartialEq)]
pub struct MovesRow {
    pub solver: String,
    pub mode: String,
    pub cells: usize,
    pub avg_moves: f64,
    pub moves_per_cell: f64,
}

/// Average moves per mode and their ratio to the board size.
pub fn moves_report(reports: &[BenchReport]) -> Vec<MovesRow> {
    reports
        .iter()
        .map(|r| {
            let (rows, cols, _) = r.mode.dims();
            MovesRow {
                solver: r.solver.clone(),
                mode: r.mode.name(),
                cells: rows * cols,
                avg_moves: r.avg_moves(),
                moves_per_cell: r.avg_moves() / (rows * cols) as f64,
            }
        })
        .collect()
}
