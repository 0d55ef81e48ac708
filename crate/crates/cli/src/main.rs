//! Command line front end: play, train, eval, compare.

use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minelab::bench::{self, BenchReport, Solver};
use minelab::board::{self, Cell, FirstClick, Game, GameStatus, Mode};
use minelab::learner::{self, Learner, LearnerKind};
use minelab::nn::OptimizerSpec;
use minelab::selfplay::{self, TrainConfig};
use minelab::{csp, Error};

/// Minesweeper engine, solvers and self-play learners.
///
/// Every flag can also be given in a key=value file passed with
/// `--config FILE` (keys are the long flag names without dashes, booleans
/// take true/false). Flags on the command line override the file.
#[derive(Parser, Debug)]
#[command(name = "minelab", version, args_override_self = true)]
struct Cli {
    /// key=value file with default flag values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play in the terminal: enter `row col` to uncover a cell.
    Play(PlayArgs),
    /// Train a learner by self-play.
    Train(TrainArgs),
    /// Evaluate one solver over seeded games.
    Eval(EvalArgs),
    /// Evaluate several solvers and print a comparison table.
    Compare(EvalArgs),
}

#[derive(Args, Debug, Clone)]
struct BoardArgs {
    /// beginner (9x9/10), intermediate (16x16/40), expert (16x30/99) or RxCxM.
    #[arg(long)]
    mode: Option<String>,
    /// Custom board rows (with --cols and --mines instead of --mode).
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    mines: Option<usize>,
    /// safe: the first cell is never a mine; zero: its whole neighbourhood is clear.
    #[arg(long, value_name = "safe|zero")]
    first_click: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[command(flatten)]
    board: BoardArgs,
    /// Print the cells exact inference proves safe before each move.
    #[arg(long)]
    hint: bool,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// mlp or cnn; checked against the architecture when given.
    #[arg(long)]
    learner: Option<String>,
    /// Architecture label such as cnnlearner18 or MLP_learner3.
    #[arg(long)]
    arch: Option<String>,
    #[command(flatten)]
    board: BoardArgs,
    /// Games to play in this run.
    #[arg(long, default_value_t = 1000)]
    games: u64,
    /// Games per log row and checkpoint.
    #[arg(long, default_value_t = 1000)]
    series: u64,
    /// Series log (CSV, appended). Defaults to <label>.csv.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Directory for <label>_g<total_games> checkpoints.
    #[arg(long, default_value = "checkpoints")]
    checkpoint_dir: PathBuf,
    /// Continue from a checkpoint; total_games carries on from it.
    #[arg(long, value_name = "CHECKPOINT")]
    resume: Option<PathBuf>,
    /// Learning rate override.
    #[arg(long)]
    lr: Option<f32>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// random, sps, csp, mlp:MODEL or cnn:MODEL. Repeat for compare.
    #[arg(long, required = true)]
    solver: Vec<String>,
    #[command(flatten)]
    board: BoardArgs,
    #[arg(long, default_value_t = 1000)]
    games: u64,
    /// Give every solver the same game seeds (compare).
    #[arg(long)]
    paired: bool,
    /// Disallow guesses: a game ends as a resignation at the first move exact
    /// inference does not prove safe.
    #[arg(long)]
    no_guess: bool,
    /// Write the report CSV here as well.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shard games over threads; disables timing.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

enum Failure {
    Usage(String),
    Io(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            Error::Config(_) | Error::InvalidConfig(_) | Error::Parse(_) | Error::InvalidCoordinate { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::Format(_) => Failure::Io(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Reads `key=value` lines into `--key value` arguments.
fn config_args(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let mut args = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        match v {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => {
                args.push(format!("--{k}"));
                args.push(v.to_string());
            }
        }
    }
    Ok(args)
}

/// Splices values from `--config FILE` in front of the command line flags so
/// that the latter win.
fn expand_config(argv: Vec<String>) -> CliResult<Vec<String>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| Failure::Usage("--config needs a file".into()))?);
        } else if let Some(v) = a.strip_prefix("--config=") {
            config = Some(v.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let extra = config_args(Path::new(&path))?;
    let at = rest.iter().position(|a| ["play", "train", "eval", "compare"].contains(&a.as_str())).map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, extra);
    Ok(rest)
}

fn resolve_mode(b: &BoardArgs, default: Mode) -> CliResult<Mode> {
    if let (Some(rows), Some(cols), Some(mines)) = (b.rows, b.cols, b.mines) {
        return Ok(Mode::Custom { rows, cols, mines });
    }
    if b.rows.is_some() || b.cols.is_some() || b.mines.is_some() {
        return Err(Failure::Usage("--rows, --cols and --mines go together".into()));
    }
    match &b.mode {
        None => Ok(default),
        Some(m) => Mode::parse(m).ok_or_else(|| Failure::Usage(format!("unknown mode {m:?}"))),
    }
}

fn resolve_first_click(b: &BoardArgs, default: FirstClick) -> CliResult<FirstClick> {
    match &b.first_click {
        None => Ok(default),
        Some(s) => FirstClick::parse(s).ok_or_else(|| Failure::Usage(format!("first click must be safe or zero, got {s:?}"))),
    }
}

fn cmd_play(args: PlayArgs) -> CliResult {
    let mode = resolve_mode(&args.board, Mode::Beginner)?;
    let first_click = resolve_first_click(&args.board, FirstClick::SafeCell)?;
    let cfg = mode.game_config(first_click, args.board.seed);
    let mut game = Game::new(cfg)?;
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut out = io::stdout().lock();
    let w = |e: io::Error| Failure::Io(format!("stdout: {e}"));
    loop {
        writeln!(out, "{}", game.render()).map_err(w)?;
        match game.status() {
            GameStatus::Won => {
                writeln!(out, "Won").map_err(w)?;
                return Ok(());
            }
            GameStatus::Lost => {
                writeln!(out, "Lost").map_err(w)?;
                return Ok(());
            }
            GameStatus::Playing => {}
        }
        if args.hint && !game.state().all_covered() {
            let inferred = csp::infer(game.state(), cfg.mines)?;
            let safe: Vec<String> = inferred.safe.iter().filter(|&&c| game.state().is_covered(c)).map(|c| format!("{} {}", c.row, c.col)).collect();
            writeln!(out, "safe: {}", if safe.is_empty() { "none".into() } else { safe.join(", ") }).map_err(w)?;
        }
        loop {
            write!(out, "> ").map_err(w)?;
            out.flush().map_err(w)?;
            let Some(line) = lines.next() else { return Ok(()) };
            let line = line.map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            let nums: Vec<usize> = line.split_whitespace().map_while(|t| t.parse().ok()).collect();
            let [row, col] = nums[..] else {
                writeln!(out, "enter: row col").map_err(w)?;
                continue;
            };
            if line.split_whitespace().count() != 2 {
                writeln!(out, "enter: row col").map_err(w)?;
                continue;
            }
            match game.uncover(Cell::new(row, col)) {
                Ok(_) => break,
                Err(e @ Error::InvalidCoordinate { .. }) => writeln!(out, "{e}").map_err(w)?,
                Err(e) => return Err(e.into()),
            }
        }
    }
}

fn cmd_train(args: TrainArgs) -> CliResult {
    let mut learner = match &args.resume {
        Some(path) => Learner::load(path)?,
        None => {
            let label = args.arch.as_deref().ok_or_else(|| {
                Failure::Usage(format!("--arch is required; known: {}", learner::known_labels().join(", ")))
            })?;
            let mut arch = learner::require_arch(label)?;
            if let Some(lr) = args.lr {
                arch.optimizer = match arch.optimizer {
                    OptimizerSpec::Sgd { .. } => OptimizerSpec::Sgd { lr },
                    OptimizerSpec::Adam { beta1, beta2, eps, .. } => OptimizerSpec::Adam { lr, beta1, beta2, eps },
                };
            }
            Learner::new(&arch, args.board.seed)?
        }
    };
    if let Some(kind) = &args.learner {
        let kind = LearnerKind::parse(kind).ok_or_else(|| Failure::Usage(format!("learner must be mlp or cnn, got {kind:?}")))?;
        if kind != learner.kind {
            return Err(Failure::Usage(format!("{} is a {} learner", learner.label, learner.kind.as_str())));
        }
    }
    let default_mode = learner::arch(&learner.label).map_or(Mode::Beginner, |a| a.mode);
    let cfg = TrainConfig {
        mode: resolve_mode(&args.board, default_mode)?,
        first_click: resolve_first_click(&args.board, learner.first_click)?,
        games: args.games,
        series_size: args.series,
        seed: args.board.seed,
        log_path: args.log.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", learner.label))),
        checkpoint_dir: Some(args.checkpoint_dir.clone()),
    };
    println!("{}", selfplay::LOG_HEADER);
    selfplay::train_loop(&mut learner, &cfg, |row| println!("{}", row.csv_row()))?;
    Ok(())
}

fn build_solver(spec: &str, no_guess: bool) -> CliResult<Solver> {
    Ok(match spec {
        "random" => Solver::Random,
        "sps" => Solver::Sps,
        "csp" => Solver::Csp { allow_guess: !no_guess },
        _ => {
            let (kind, path) = spec
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("unknown solver {spec:?}; use random, sps, csp, mlp:MODEL or cnn:MODEL")))?;
            let kind = LearnerKind::parse(kind).ok_or_else(|| Failure::Usage(format!("unknown learner kind {kind:?}")))?;
            let learner = Learner::load(path)?;
            if learner.kind != kind {
                return Err(Failure::Usage(format!("{path} holds a {} learner", learner.kind.as_str())));
            }
            Solver::Learner { learner: Box::new(learner), no_guess }
        }
    })
}

fn run_reports(args: &EvalArgs) -> CliResult<Vec<BenchReport>> {
    let mode = resolve_mode(&args.board, Mode::Beginner)?;
    let mut reports = Vec::new();
    for (i, spec) in args.solver.iter().enumerate() {
        let solver = build_solver(spec, args.no_guess)?;
        let first_click = resolve_first_click(&args.board, solver.default_first_click())?;
        let seed = if args.paired || i == 0 { args.board.seed } else { board::derive_seed(args.board.seed, i as u64) };
        let report = bench::run_series(&solver, mode, first_click, args.games, seed, args.threads)?;
        if report.covered_violations > 0 {
            return Err(Failure::Internal(format!("{} selected an uncovered cell {} times", report.solver, report.covered_violations)));
        }
        reports.push(report);
    }
    Ok(reports)
}

fn cmd_eval(args: EvalArgs, compare: bool) -> CliResult {
    if !compare && args.solver.len() != 1 {
        return Err(Failure::Usage("eval takes one --solver; use compare for several".into()));
    }
    let reports = run_reports(&args)?;
    let (text, csv) = bench::compare(&reports);
    print!("{text}");
    println!();
    print!("{csv}");
    if let Some(path) = &args.out {
        std::fs::write(path, &csv).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(f) => return report(f),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Play(a) => cmd_play(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a, false),
        Command::Compare(a) => cmd_eval(a, true),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    let (code, msg) = match f {
        Failure::Usage(m) => (1, m),
        Failure::Io(m) => (2, m),
        Failure::Internal(m) => (3, m),
    };
    eprintln!("error: {msg}");
    ExitCode::from(code)
}
