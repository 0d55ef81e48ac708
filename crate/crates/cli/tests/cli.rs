use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use minelab::{Cell, FirstClick, Game, GameStatus, Mode};

fn minelab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minelab")).args(args).current_dir(dir).output().unwrap()
}

fn play(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_minelab"))
        .arg("play")
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_part(o: &Output) -> String {
    stdout(o).split("\n\n").nth(1).unwrap().to_string()
}

#[test]
fn scripted_game_is_won() {
    // same seed and first click give the same board
    let mut game = Game::new(Mode::Beginner.game_config(FirstClick::SafeCell, 42)).unwrap();
    game.uncover(Cell::new(4, 4)).unwrap();
    let mut script = String::from("4 4\n");
    let board = game.board().clone();
    for c in board.cells().filter(|&c| !board.is_mine(c)) {
        if game.status() == GameStatus::Playing && game.state().is_covered(c) {
            game.uncover(c).unwrap();
            script += &format!("{} {}\n", c.row, c.col);
        }
    }
    let o = play(&["--seed", "42"], &script);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last().unwrap(), "Won");
}

#[test]
fn bad_input_reprompts_and_eof_ends() {
    let o = play(&["--hint"], "hello\n1 2 3\n99 99\n");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("enter: row col").count(), 2);
    assert!(out.contains("out of bounds") || out.contains("99"), "{out}");
}

#[test]
fn hint_lists_safe_cells() {
    let o = play(&["--hint", "--first-click", "zero"], "4 4\n");
    assert!(stdout(&o).contains("safe: "));
}

#[test]
fn eval_prints_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = minelab(&["eval", "--solver", "csp", "--games", "50", "--seed", "3", "--out", "r.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = csv_part(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], minelab::bench::CSV_HEADER);
    assert!(lines[1].starts_with("csp,beginner,9,9,10,safe,50,"));
    assert_eq!(std::fs::read_to_string(dir.path().join("r.csv")).unwrap(), csv);
}

#[test]
fn compare_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compare", "--solver", "random", "--solver", "sps", "--solver", "csp", "--games", "40", "--seed", "8", "--mode", "intermediate"];
    let strip = |o: &Output| csv_part(o).lines().map(|l| { let mut v: Vec<&str> = l.split(',').collect(); v.remove(10); v.join(",") }).collect::<Vec<_>>();
    let a = minelab(&args, dir.path());
    let b = minelab(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a).len(), 4);
}

#[test]
fn unknown_arch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = minelab(&["train", "--arch", "cnnlearner99"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cnnlearner18"));
}

#[test]
fn bad_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(minelab(&["eval", "--solver", "csp", "--bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(minelab(&["eval", "--solver", "nope"], dir.path()).status.code(), Some(1));
}

#[test]
fn missing_model_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = minelab(&["eval", "--solver", "cnn:absent.model"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(dir.path().join("junk"), b"not a model").unwrap();
    assert_eq!(minelab(&["eval", "--solver", "cnn:junk"], dir.path()).status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.conf"), "# eval settings\ngames = 7\nmode = intermediate\nseed = 4\n").unwrap();
    let o = minelab(&["eval", "--config", "run.conf", "--solver", "csp"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(csv_part(&o).lines().nth(1).unwrap().starts_with("csp,intermediate,16,16,40,safe,7,"));
    let o = minelab(&["eval", "--config", "run.conf", "--solver", "csp", "--games", "9"], dir.path());
    assert!(csv_part(&o).lines().nth(1).unwrap().contains(",safe,9,"));
}

#[test]
fn train_resume_and_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let board = ["--rows", "6", "--cols", "6", "--mines", "4", "--seed", "2"];
    let mut args = vec!["train", "--arch", "MLP_learner1", "--games", "20", "--series", "10", "--log", "log.csv", "--checkpoint-dir", "ck"];
    args.extend(board);
    let o = minelab(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);

    let mut args = vec!["train", "--resume", "ck/MLP_learner1_g20", "--games", "10", "--series", "10", "--log", "log.csv", "--checkpoint-dir", "ck"];
    args.extend(board);
    assert_eq!(minelab(&args, dir.path()).status.code(), Some(0));
    let log = std::fs::read_to_string(dir.path().join("log.csv")).unwrap();
    let totals: Vec<&str> = log.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(totals, ["10", "20", "30"]);

    let o = minelab(&["eval", "--solver", "mlp:ck/MLP_learner1_g30", "--games", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(csv_part(&o).lines().nth(1).unwrap().starts_with("MLP_learner1,beginner,9,9,10,zero,20,"));
    // wrong kind for the file
    assert_eq!(minelab(&["eval", "--solver", "cnn:ck/MLP_learner1_g30"], dir.path()).status.code(), Some(1));
}
