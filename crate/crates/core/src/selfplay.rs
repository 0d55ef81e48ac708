//! Self-play: the learner plays, positions are labelled from the hidden
//! board once the game is over, and the network trains on them.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::board::{bordering_cells, derive_seed, FirstClick, Game, GameBoard, GameState, GameStatus, Mode};
use crate::cnn::one_hot;
use crate::error::{Error, Result};
use crate::learner::{Learner, LearnerKind};
use crate::mlp::{extract_window, WINDOW_INPUTS};
use crate::nn::{Target, Tensor};

pub const LOG_HEADER: &str = "total_games,wins_in_series,moves_in_series,cells_left_sum,timestamp_ms";

// Keeps the move-choice stream apart from the board stream of the same game.
const MOVE_STREAM: u64 = 0x6d6f_7665;

#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Window { inputs: [f32; WINDOW_INPUTS], target: f32 },
    Board { input: Tensor<f32>, target: Target<f32> },
}

/// Labels every bordering cell of every recorded position from the board.
///
/// Window learners get one sample per bordering cell, board learners one
/// masked target map per position. Positions without bordering cells give
/// nothing.
pub fn harvest_samples(kind: LearnerKind, board: &GameBoard, positions: &[GameState]) -> Vec<Sample> {
    let mut out = Vec::new();
    for pos in positions {
        let border = bordering_cells(pos);
        if border.is_empty() {
            continue;
        }
        let label = |c| if board.is_mine(c) { 1.0 } else { 0.0 };
        match kind {
            LearnerKind::Mlp => {
                for c in border {
                    let inputs = extract_window(pos, c).expect("bordering cells are covered");
                    out.push(Sample::Window { inputs, target: label(c) });
                }
            }
            LearnerKind::Cnn => {
                let n = pos.rows() * pos.cols();
                let mut values = vec![0.0; n];
                let mut mask = vec![false; n];
                for c in border {
                    let i = c.row * pos.cols() + c.col;
                    values[i] = label(c);
                    mask[i] = true;
                }
                out.push(Sample::Board { input: one_hot(pos), target: Target::masked(values, mask) });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesMetrics {
    pub total_games: u64,
    pub wins_in_series: u64,
    pub moves_in_series: u64,
    pub cells_left_sum: u64,
    pub timestamp_ms: u128,
}

impl SeriesMetrics {
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.total_games, self.wins_in_series, self.moves_in_series, self.cells_left_sum, self.timestamp_ms)
    }

    /// The row without its timestamp.
    pub fn key(&self) -> (u64, u64, u64, u64) {
        (self.total_games, self.wins_in_series, self.moves_in_series, self.cells_left_sum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub mode: Mode,
    pub first_click: FirstClick,
    /// Games to play in this run, on top of what the learner has seen.
    pub games: u64,
    pub series_size: u64,
    pub seed: u64,
    pub log_path: PathBuf,
    /// Where `<label>_g<total_games>` checkpoints go; `None` disables them.
    pub checkpoint_dir: Option<PathBuf>,
}

pub fn checkpoint_path(dir: &Path, label: &str, total_games: u64) -> PathBuf {
    dir.join(format!("{label}_g{total_games}"))
}

/// Plays one self-play game and returns it with the positions seen before
/// each move.
pub fn play_recorded(learner: &Learner, mode: Mode, first_click: FirstClick, seed: u64, index: u64) -> Result<(Game, Vec<GameState>)> {
    let mut game = Game::new(mode.game_config(first_click, derive_seed(seed, index)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed ^ MOVE_STREAM, index));
    let mut positions = Vec::new();
    while game.status() == GameStatus::Playing {
        positions.push(game.state().clone());
        let c = learner.choose_move(game.state(), &mut rng)?;
        game.uncover(c)?;
    }
    Ok((game, positions))
}

fn train_on(learner: &mut Learner, samples: &[Sample]) -> Result<()> {
    for s in samples {
        match s {
            Sample::Window { inputs, target } => {
                learner.net.train_step(&Tensor::from_vec(inputs.to_vec()), &Target::dense(vec![*target]))?;
            }
            Sample::Board { input, target } => {
                learner.net.train_step(input, target)?;
            }
        }
    }
    Ok(())
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

fn open_log(path: &Path) -> Result<fs::File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(|e| Error::io(path, e))?;
    let empty = f.metadata().map_err(|e| Error::io(path, e))?.len() == 0;
    if empty {
        writeln!(f, "{LOG_HEADER}").map_err(|e| Error::io(path, e))?;
    }
    Ok(f)
}

fn check_checkpoint_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".minelab-write-test");
    fs::write(&probe, b"").map_err(|e| Error::io(dir, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

/// Self-play training. One log row is appended per finished series (and for
/// a trailing partial series); a checkpoint is written alongside each row.
pub fn train_loop(
    learner: &mut Learner,
    cfg: &TrainConfig,
    mut on_series: impl FnMut(&SeriesMetrics),
) -> Result<Vec<SeriesMetrics>> {
    if cfg.series_size == 0 {
        return Err(Error::Config("series size must be positive".into()));
    }
    cfg.mode.game_config(cfg.first_click, 0).validate()?;
    let mut log = open_log(&cfg.log_path)?;
    if let Some(dir) = &cfg.checkpoint_dir {
        check_checkpoint_dir(dir)?;
    }

    let mut rows = Vec::new();
    let (mut wins, mut moves, mut cells_left, mut in_series) = (0u64, 0u64, 0u64, 0u64);
    for _ in 0..cfg.games {
        let index = learner.total_games;
        let (game, positions) = play_recorded(learner, cfg.mode, cfg.first_click, cfg.seed, index)?;
        let samples = harvest_samples(learner.kind, game.board(), &positions);
        train_on(learner, &samples)?;
        learner.total_games += 1;

        in_series += 1;
        wins += u64::from(game.status() == GameStatus::Won);
        moves += game.state().moves_made as u64;
        cells_left += game.cells_left() as u64;
        let last = rows.len() as u64 * cfg.series_size + in_series == cfg.games;
        if in_series == cfg.series_size || last {
            let row = SeriesMetrics {
                total_games: learner.total_games,
                wins_in_series: wins,
                moves_in_series: moves,
                cells_left_sum: cells_left,
                timestamp_ms: now_ms(),
            };
            writeln!(log, "{}", row.csv_row()).map_err(|e| Error::io(&cfg.log_path, e))?;
            log.flush().map_err(|e| Error::io(&cfg.log_path, e))?;
            if let Some(dir) = &cfg.checkpoint_dir {
                learner.save(checkpoint_path(dir, &learner.label, learner.total_games))?;
            }
            on_series(&row);
            rows.push(row);
            (wins, moves, cells_left, in_series) = (0, 0, 0, 0);
        }
    }
    Ok(rows)
}

/// Reads the non-header rows of a series log.
pub fn read_log(path: &Path) -> Result<Vec<SeriesMetrics>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let v: Vec<&str> = line.split(',').collect();
        let bad = || Error::Parse(format!("bad log row {line:?}"));
        if v.len() != 5 {
            return Err(bad());
        }
        let n = |i: usize| v[i].parse::<u64>().map_err(|_| bad());
        rows.push(SeriesMetrics {
            total_games: n(0)?,
            wins_in_series: n(1)?,
            moves_in_series: n(2)?,
            cells_left_sum: n(3)?,
            timestamp_ms: v[4].parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}

/// Runs independent training jobs on separate threads.
pub fn parallel_train(jobs: Vec<(Learner, TrainConfig)>) -> Result<Vec<(Learner, Vec<SeriesMetrics>)>> {
    let mut seen = std::collections::HashSet::new();
    for (learner, cfg) in &jobs {
        if !seen.insert(cfg.log_path.clone()) {
            return Err(Error::Config(format!("log path {} is used by more than one job", cfg.log_path.display())));
        }
        if let Some(dir) = &cfg.checkpoint_dir {
            if !seen.insert(dir.join(&learner.label)) {
                return Err(Error::Config(format!("checkpoints for {} in {} collide", learner.label, dir.display())));
            }
        }
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(mut learner, cfg)| {
                s.spawn(move || {
                    let rows = train_loop(&mut learner, &cfg, |_| {})?;
                    Ok((learner, rows))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("training thread panicked")).collect()
    })
}
