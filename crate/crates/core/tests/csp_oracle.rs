mod common;

use common::{placement_oracle, random_state};
use minelab::csp::{self, build_constraints, simplify};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn inference_matches_placement_oracle(rows in 1usize..=5, cols in 1usize..=5, mines in 0usize..=3, p in 0.1f64..0.9, seed: u64) {
        prop_assume!(mines < rows * cols);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (state, _) = random_state(&mut rng, rows, cols, mines, p);
        let oracle = placement_oracle(&state, mines).expect("states come from real boards");
        let got = csp::infer(&state, mines).unwrap();
        for (c, prob) in oracle {
            prop_assert!((got.probability(c) - prob).abs() <= 1e-9, "{c}: {} vs {prob}", got.probability(c));
            prop_assert_eq!(got.safe.contains(&c), prob == 0.0, "safe set at {}", c);
            prop_assert_eq!(got.mines.contains(&c), prob == 1.0, "mine set at {}", c);
        }
    }

    #[test]
    fn simplify_keeps_real_assignment(rows in 2usize..=8, cols in 2usize..=8, p in 0.1f64..0.9, seed: u64) {
        let mines = rows * cols / 5;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (state, board) = random_state(&mut rng, rows, cols, mines, p);
        let (assigned, reduced) = simplify(&build_constraints(&state)).unwrap();
        for (c, x) in assigned {
            prop_assert_eq!(x == 1, board.is_mine(c));
        }
        for k in reduced {
            let real = k.vars.iter().filter(|&&v| board.is_mine(v)).count() as i32;
            prop_assert_eq!(real, k.label);
        }
    }

    #[test]
    fn deductions_are_sound_on_larger_boards(seed: u64, p in 0.2f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (state, board) = random_state(&mut rng, 9, 9, 10, p);
        let got = csp::infer(&state, 10).unwrap();
        prop_assert!(got.safe.iter().all(|&c| !board.is_mine(c)));
        prop_assert!(got.mines.iter().all(|&c| board.is_mine(c)));
        let m = csp::choose_move(&got, &state);
        prop_assert!(state.is_covered(m));
    }
}

#[test]
fn no_guess_games_never_lose_to_deduction() {
    for i in 0..200 {
        let cfg = minelab::Mode::Beginner.game_config(minelab::FirstClick::SafeCell, i);
        let r = csp::csp_play(cfg, false).unwrap();
        assert_eq!(r.deduction_losses, 0);
        assert!(r.won || r.resigned, "game {i}");
        assert_eq!(r.guesses, 0);
    }
}
