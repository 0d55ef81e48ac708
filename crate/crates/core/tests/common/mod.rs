#![allow(dead_code, clippy::too_many_arguments)]

use minelab::board::{neighbours, GameBoard, COVERED, MINE};
use minelab::nn::{Activation, LayerSpec, Loss, Network, NetworkConfig, OptimizerSpec, Target, Tensor};
use minelab::{Cell, GameState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random board with `mines` mines and a random subset of safe cells shown.
pub fn random_state<R: Rng>(rng: &mut R, rows: usize, cols: usize, mines: usize, reveal_p: f64) -> (GameState, GameBoard) {
    let mut cells: Vec<Cell> = (0..rows).flat_map(|r| (0..cols).map(move |c| Cell::new(r, c))).collect();
    cells.shuffle(rng);
    let board = GameBoard::from_mines(rows, cols, &cells[..mines]);
    let visible: Vec<i8> = board
        .values()
        .iter()
        .map(|&v| if v != MINE && rng.random_bool(reveal_p) { v } else { COVERED })
        .collect();
    (GameState::from_visible(rows, cols, visible, mines), board)
}

/// Exact mine probabilities from every placement of `total` mines over the
/// covered cells that agrees with the shown numbers.
pub fn placement_oracle(state: &GameState, total: usize) -> Option<Vec<(Cell, f64)>> {
    let covered = state.covered_cells();
    let n = covered.len();
    let index = |c: Cell| covered.iter().position(|&x| x == c);
    let shown: Vec<(i8, Vec<usize>)> = state
        .cells()
        .filter(|&c| !state.is_covered(c))
        .map(|c| (state.get(c), neighbours(state.rows(), state.cols(), c).filter_map(index).collect()))
        .collect();
    let mut counts = vec![0u64; n];
    let mut models = 0u64;
    let mut chosen = Vec::with_capacity(total);
    subsets(n, total, 0, &mut chosen, &mut |set| {
        if shown.iter().all(|(v, ns)| ns.iter().filter(|i| set.contains(i)).count() as i8 == *v) {
            models += 1;
            for &i in set {
                counts[i] += 1;
            }
        }
    });
    if models == 0 {
        return None;
    }
    Some(covered.into_iter().zip(counts).map(|(c, k)| (c, k as f64 / models as f64)).collect())
}

fn subsets(n: usize, k: usize, from: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for i in from..n {
        chosen.push(i);
        subsets(n, k, i + 1, chosen, visit);
        chosen.pop();
    }
}

/// Every non-mine value equals its recounted mine neighbours.
pub fn adjacency_ok(board: &GameBoard) -> bool {
    board.cells().all(|c| {
        board.is_mine(c) || board.get(c) as usize == neighbours(board.rows(), board.cols(), c).filter(|&n| board.is_mine(n)).count()
    })
}

/// Shown cells match the board, and every shown zero has all neighbours shown.
pub fn flood_closed(state: &GameState, board: &GameBoard) -> bool {
    state.cells().filter(|&c| !state.is_covered(c)).all(|c| {
        state.get(c) == board.get(c) && (state.get(c) != 0 || state.neighbours(c).all(|n| !state.is_covered(n)))
    })
}

/// Direct sliding-window cross-correlation with zero padding, `[c,h,w]` in,
/// `[f,h,w]` out.
pub fn naive_conv(input: &[f64], c: usize, h: usize, w: usize, filters: &[f64], f: usize, kh: usize, kw: usize, bias: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; f * h * w];
    for fi in 0..f {
        for y in 0..h {
            for x in 0..w {
                let mut acc = bias[fi];
                for ci in 0..c {
                    for ky in 0..kh {
                        for kx in 0..kw {
                            let sy = y as isize + ky as isize - (kh / 2) as isize;
                            let sx = x as isize + kx as isize - (kw / 2) as isize;
                            if sy < 0 || sx < 0 || sy >= h as isize || sx >= w as isize {
                                continue;
                            }
                            acc += input[(ci * h + sy as usize) * w + sx as usize] * filters[((fi * c + ci) * kh + ky) * kw + kx];
                        }
                    }
                }
                out[(fi * h + y) * w + x] = acc;
            }
        }
    }
    out
}

pub fn act(a: Activation) -> LayerSpec {
    LayerSpec::Activation(a)
}

/// Random dense, conv or mixed (conv then 1×1 head) network with its input
/// shape. Roughly a third of each.
pub fn random_config(seed: u64) -> (NetworkConfig, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let loss = if rng.random_bool(0.5) { Loss::Mse } else { Loss::Xent };
    let optimizer = OptimizerSpec::Sgd { lr: 0.1 };
    let mut layers = Vec::new();
    let shape = match seed % 3 {
        0 => {
            let mut width = rng.random_range(1..8);
            let input = vec![width];
            for _ in 0..rng.random_range(1..4) {
                let out = rng.random_range(1..7);
                layers.push(LayerSpec::dense(width, out));
                layers.push(act(if rng.random_bool(0.7) { Activation::Relu } else { Activation::Sigmoid }));
                width = out;
            }
            layers.push(LayerSpec::dense(width, rng.random_range(1..3)));
            input
        }
        _ => {
            let mut ch = rng.random_range(1..4);
            let input = vec![ch, rng.random_range(2..6), rng.random_range(2..6)];
            for _ in 0..rng.random_range(1..3) {
                let out = rng.random_range(1..4);
                let k = [1, 3, 5][rng.random_range(0..3)];
                layers.push(LayerSpec::conv(ch, out, k));
                layers.push(act(Activation::Relu));
                ch = out;
            }
            layers.push(LayerSpec::conv(ch, 1, 1));
            input
        }
    };
    layers.push(act(Activation::Sigmoid));
    (NetworkConfig { layers, loss, optimizer, seed }, shape)
}

pub fn random_input(rng: &mut ChaCha8Rng, shape: &[usize]) -> Tensor<f64> {
    let n = shape.iter().product();
    Tensor::new(shape.to_vec(), (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

pub fn random_target(rng: &mut ChaCha8Rng, n: usize, masked: bool) -> Target<f64> {
    let values = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 }).collect();
    if masked {
        Target::masked(values, (0..n).map(|i| i == 0 || rng.random_bool(0.6)).collect())
    } else {
        Target::dense(values)
    }
}

/// Worst finite-difference relative error over `configs` random networks.
pub fn gradient_suite(configs: u64) -> Vec<f64> {
    (0..configs)
        .map(|seed| {
            let (cfg, shape) = random_config(seed);
            let mut net = Network::<f64>::new(cfg).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            // zero biases behind dead ReLUs put pre-activations exactly on the kink
            for p in net.params_mut().iter_mut().flatten() {
                p.bias.iter_mut().for_each(|b| *b = rng.random_range(-0.5..0.5));
            }
            let x = random_input(&mut rng, &shape);
            let n = net.predict(&x).unwrap().len();
            let t = random_target(&mut rng, n, seed % 2 == 1);
            net.grad_check(&x, &t, 1e-5).unwrap()
        })
        .collect()
}
