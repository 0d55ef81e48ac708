use minelab::bench::{compare, game_config, moves_report, run_series, Solver};
use minelab::{FirstClick, Mode};

#[test]
fn series_are_deterministic() {
    for solver in [Solver::Random, Solver::Sps, Solver::Csp { allow_guess: true }] {
        let a = run_series(&solver, Mode::Intermediate, FirstClick::SafeCell, 50, 12, 1).unwrap();
        let b = run_series(&solver, Mode::Intermediate, FirstClick::SafeCell, 50, 12, 1).unwrap();
        assert_eq!((a.wins, a.total_moves, a.cells_left_sum), (b.wins, b.total_moves, b.cells_left_sum));
    }
    assert_eq!(game_config(Mode::Expert, FirstClick::ZeroCell, 1, 5), game_config(Mode::Expert, FirstClick::ZeroCell, 1, 5));
    assert_ne!(game_config(Mode::Expert, FirstClick::ZeroCell, 1, 5), game_config(Mode::Expert, FirstClick::ZeroCell, 1, 6));
}

#[test]
fn solvers_rank_as_expected() {
    let run = |s: &Solver| run_series(s, Mode::Beginner, FirstClick::SafeCell, 400, 3, 1).unwrap().win_rate();
    let (random, sps, csp) = (run(&Solver::Random), run(&Solver::Sps), run(&Solver::Csp { allow_guess: true }));
    assert!(random < 0.05, "{random}");
    assert!(random < sps && sps < csp, "{random} {sps} {csp}");
    assert!(csp > 0.8, "{csp}");
}

#[test]
fn no_guess_csp_resigns_instead_of_losing() {
    let r = run_series(&Solver::Csp { allow_guess: false }, Mode::Beginner, FirstClick::SafeCell, 300, 4, 1).unwrap();
    assert_eq!(r.guesses, 0);
    assert_eq!(r.wins + r.resigned, r.games);
}

#[test]
fn moves_scale_with_board() {
    let reports: Vec<_> = [Mode::Beginner, Mode::Intermediate, Mode::Expert]
        .into_iter()
        .map(|m| run_series(&Solver::Csp { allow_guess: true }, m, FirstClick::SafeCell, 100, 6, 1).unwrap())
        .collect();
    let rows = moves_report(&reports);
    assert_eq!(rows.iter().map(|r| r.cells).collect::<Vec<_>>(), [81, 256, 480]);
    for (row, r) in rows.iter().zip(&reports) {
        assert!((row.moves_per_cell * row.cells as f64 - r.avg_moves()).abs() < 1e-9);
        assert!(row.moves_per_cell > 0.0 && row.moves_per_cell < 1.0);
    }
    assert!(rows[0].avg_moves < rows[1].avg_moves);
    let (text, csv) = compare(&reports);
    assert!(text.lines().nth(3).unwrap().starts_with("csp"));
    assert_eq!(csv.lines().count(), 4);
}
