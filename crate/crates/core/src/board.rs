//! Minesweeper game engine.
//!
//! Cells are integer encoded: the hidden board stores `-1` for a mine and the
//! adjacent-mine count `0..=8` otherwise; the player-visible board stores `-2`
//! for a covered cell and the revealed value otherwise. Mines are placed
//! lazily when the first cell is uncovered so the first move can be
//! protected.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Hidden-board value of a mine.
pub const MINE: i8 = -1;
/// Visible-board value of a covered cell.
pub const COVERED: i8 = -2;

/// A board coordinate. Ordering is row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Iterates the in-bounds 8-neighbours of `(row, col)` in row-major order.
pub fn neighbours(rows: usize, cols: usize, cell: Cell) -> impl Iterator<Item = Cell> {
    let r0 = cell.row.saturating_sub(1);
    let r1 = (cell.row + 1).min(rows - 1);
    let c0 = cell.col.saturating_sub(1);
    let c1 = (cell.col + 1).min(cols - 1);
    (r0..=r1)
        .flat_map(move |r| (c0..=c1).map(move |c| Cell::new(r, c)))
        .filter(move |&n| n != cell)
}

/// How the first uncovered cell is protected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirstClick {
    /// The first cell is never a mine but may show a number.
    SafeCell,
    /// The first cell and its whole neighbourhood are mine free, so it shows 0.
    ZeroCell,
}

impl FirstClick {
    pub fn as_str(self) -> &'static str {
        match self {
            FirstClick::SafeCell => "safe",
            FirstClick::ZeroCell => "zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "safe" | "safecell" => Some(FirstClick::SafeCell),
            "zero" | "zerocell" => Some(FirstClick::ZeroCell),
            _ => None,
        }
    }
}

impl fmt::Display for FirstClick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameConfig {
    pub rows: usize,
    pub cols: usize,
    pub mines: usize,
    pub first_click: FirstClick,
    pub rng_seed: u64,
}

impl GameConfig {
    pub fn new(rows: usize, cols: usize, mines: usize, first_click: FirstClick, rng_seed: u64) -> Self {
        Self { rows, cols, mines, first_click, rng_seed }
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    /// Checks the policy-independent part of the invariants. The exact room
    /// needed for the protected area is only known once the start cell is.
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidConfig(format!("board must be at least 1x1, got {}x{}", self.rows, self.cols)));
        }
        if self.mines >= self.cells() {
            return Err(Error::InvalidConfig(format!(
                "{} mines do not fit on a {}x{} board with a safe first cell",
                self.mines, self.rows, self.cols
            )));
        }
        Ok(())
    }

    fn protected_cells(&self, start: Cell) -> Vec<Cell> {
        match self.first_click {
            FirstClick::SafeCell => vec![start],
            FirstClick::ZeroCell => {
                let mut v: Vec<Cell> = neighbours(self.rows, self.cols, start).collect();
                v.push(start);
                v.sort();
                v
            }
        }
    }
}

/// Board presets plus free-form sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Beginner,
    Intermediate,
    Expert,
    Custom { rows: usize, cols: usize, mines: usize },
}

impl Mode {
    /// `(rows, cols, mines)`.
    pub fn dims(self) -> (usize, usize, usize) {
        match self {
            Mode::Beginner => (9, 9, 10),
            Mode::Intermediate => (16, 16, 40),
            Mode::Expert => (16, 30, 99),
            Mode::Custom { rows, cols, mines } => (rows, cols, mines),
        }
    }

    pub fn name(self) -> String {
        match self {
            Mode::Beginner => "beginner".into(),
            Mode::Intermediate => "intermediate".into(),
            Mode::Expert => "expert".into(),
            Mode::Custom { rows, cols, mines } => format!("{rows}x{cols}x{mines}"),
        }
    }

    /// Accepts a preset name or `RxCxM`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "beginner" => Some(Mode::Beginner),
            "intermediate" => Some(Mode::Intermediate),
            "expert" => Some(Mode::Expert),
            _ => {
                let v: Vec<usize> = s.split('x').map(|p| p.parse().ok()).collect::<Option<_>>()?;
                let [rows, cols, mines] = v[..] else { return None };
                Some(Mode::Custom { rows, cols, mines })
            }
        }
    }

    pub fn game_config(self, first_click: FirstClick, rng_seed: u64) -> GameConfig {
        let (rows, cols, mines) = self.dims();
        GameConfig::new(rows, cols, mines, first_click, rng_seed)
    }
}

/// Ratio of mines to cells.
pub fn mine_density(config: &GameConfig) -> f64 {
    config.mines as f64 / config.cells() as f64
}

/// Mixes a run seed and a game index into an independent per-game seed
/// (SplitMix64 finaliser over both words).
pub fn derive_seed(run_seed: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(run_seed) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// The hidden board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameBoard {
    rows: usize,
    cols: usize,
    values: Vec<i8>,
}

impl GameBoard {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self { rows, cols, values: vec![0; rows * cols] }
    }

    /// Builds a board from mine positions, computing all numbers.
    pub fn from_mines(rows: usize, cols: usize, mines: &[Cell]) -> Self {
        let mut board = Self::empty(rows, cols);
        for &m in mines {
            board.set_mine(m);
        }
        board
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, cell: Cell) -> i8 {
        self.values[cell.row * self.cols + cell.col]
    }

    pub fn is_mine(&self, cell: Cell) -> bool {
        self.get(cell) == MINE
    }

    pub fn mine_count(&self) -> usize {
        self.values.iter().filter(|&&v| v == MINE).count()
    }

    pub fn mines(&self) -> Vec<Cell> {
        self.cells().filter(|&c| self.is_mine(c)).collect()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| Cell::new(r, c)))
    }

    fn set_mine(&mut self, cell: Cell) {
        let idx = cell.row * self.cols + cell.col;
        if self.values[idx] == MINE {
            return;
        }
        self.values[idx] = MINE;
        for n in neighbours(self.rows, self.cols, cell) {
            let v = &mut self.values[n.row * self.cols + n.col];
            if *v != MINE {
                *v += 1;
            }
        }
    }

    /// Places one mine uniformly over the cells that are neither mines nor
    /// in `protected`, then increments the numbers around it.
    pub fn place_single_mine<R: Rng + ?Sized>(&mut self, protected: &[Cell], rng: &mut R) -> Result<Cell> {
        let eligible = |b: &Self, c: Cell| !b.is_mine(c) && !protected.contains(&c);
        // Rejection sampling is uniform over the eligible cells and cheap while
        // the board is sparse; the scan below handles dense boards.
        for _ in 0..64 {
            let c = Cell::new(rng.random_range(0..self.rows), rng.random_range(0..self.cols));
            if eligible(self, c) {
                self.set_mine(c);
                return Ok(c);
            }
        }
        let candidates: Vec<Cell> = self.cells().filter(|&c| eligible(self, c)).collect();
        if candidates.is_empty() {
            return Err(Error::BoardFull);
        }
        let c = candidates[rng.random_range(0..candidates.len())];
        self.set_mine(c);
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameStatus {
    Playing,
    Won,
    Lost,
}

/// The player-visible state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    rows: usize,
    cols: usize,
    visible: Vec<i8>,
    pub status: GameStatus,
    pub cells_to_uncover: usize,
    pub moves_made: usize,
}

impl GameState {
    /// An all-covered state for a board holding `mines` mines.
    pub fn covered(rows: usize, cols: usize, mines: usize) -> Self {
        Self {
            rows,
            cols,
            visible: vec![COVERED; rows * cols],
            status: GameStatus::Playing,
            cells_to_uncover: rows * cols - mines,
            moves_made: 0,
        }
    }

    /// Builds a state from a visible grid. `cells_to_uncover` is derived
    /// from `mines`.
    pub fn from_visible(rows: usize, cols: usize, visible: Vec<i8>, mines: usize) -> Self {
        assert_eq!(visible.len(), rows * cols);
        let covered = visible.iter().filter(|&&v| v == COVERED).count();
        Self {
            rows,
            cols,
            visible,
            status: GameStatus::Playing,
            cells_to_uncover: covered.saturating_sub(mines),
            moves_made: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn visible(&self) -> &[i8] {
        &self.visible
    }

    pub fn get(&self, cell: Cell) -> i8 {
        self.visible[cell.row * self.cols + cell.col]
    }

    pub fn is_covered(&self, cell: Cell) -> bool {
        self.get(cell) == COVERED
    }

    pub fn in_bounds(&self, row: usize, col: usize) -> bool {
        row < self.rows && col < self.cols
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| Cell::new(r, c)))
    }

    pub fn covered_cells(&self) -> Vec<Cell> {
        self.cells().filter(|&c| self.is_covered(c)).collect()
    }

    pub fn neighbours(&self, cell: Cell) -> impl Iterator<Item = Cell> {
        neighbours(self.rows, self.cols, cell)
    }

    pub fn all_covered(&self) -> bool {
        self.visible.iter().all(|&v| v == COVERED)
    }

    fn set(&mut self, cell: Cell, v: i8) {
        self.visible[cell.row * self.cols + cell.col] = v;
    }
}

/// Covered cells with at least one uncovered neighbour, row-major.
pub fn bordering_cells(state: &GameState) -> Vec<Cell> {
    state
        .cells()
        .filter(|&c| state.is_covered(c) && state.neighbours(c).any(|n| !state.is_covered(n)))
        .collect()
}

/// Renders the visible board, one text line per row: `.` covered, digits for
/// revealed numbers.
pub fn render(state: &GameState) -> String {
    render_with_mines(state, None)
}

fn render_with_mines(state: &GameState, board: Option<&GameBoard>) -> String {
    let mut out = String::with_capacity(state.rows * (state.cols + 1));
    for r in 0..state.rows {
        for c in 0..state.cols {
            let cell = Cell::new(r, c);
            let v = state.get(cell);
            let ch = if v == COVERED {
                match board {
                    Some(b) if b.is_mine(cell) => '*',
                    _ => '.',
                }
            } else {
                char::from(b'0' + v as u8)
            };
            out.push(ch);
        }
        if r + 1 < state.rows {
            out.push('\n');
        }
    }
    out
}

/// Parses a text grid in the render format. `*` marks a mine, which is
/// covered in the returned state. Whitespace inside lines is ignored.
pub fn parse_grid(text: &str) -> Result<(GameState, Vec<Cell>)> {
    let lines: Vec<Vec<char>> = text
        .lines()
        .map(|l| l.chars().filter(|c| !c.is_whitespace()).collect::<Vec<_>>())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(Error::Parse("empty grid".into()));
    }
    let cols = lines[0].len();
    if lines.iter().any(|l| l.len() != cols) {
        return Err(Error::Parse("ragged grid".into()));
    }
    let rows = lines.len();
    let mut visible = Vec::with_capacity(rows * cols);
    let mut mines = Vec::new();
    for (r, line) in lines.iter().enumerate() {
        for (c, &ch) in line.iter().enumerate() {
            match ch {
                '.' => visible.push(COVERED),
                '*' => {
                    visible.push(COVERED);
                    mines.push(Cell::new(r, c));
                }
                '0'..='8' => visible.push(ch as i8 - b'0' as i8),
                other => return Err(Error::Parse(format!("unexpected glyph {other:?} at ({r},{c})"))),
            }
        }
    }
    let n = mines.len();
    Ok((GameState::from_visible(rows, cols, visible, n), mines))
}

/// Outcome of one uncover call, listing every cell revealed by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reveal {
    pub status: GameStatus,
    pub revealed: Vec<Cell>,
}

/// A game in progress: hidden board plus visible state.
#[derive(Debug, Clone)]
pub struct Game {
    config: GameConfig,
    board: GameBoard,
    state: GameState,
    mines_placed: bool,
    redundant_uncovers: usize,
    rng: ChaCha8Rng,
}

impl Game {
    /// Creates an all-covered game. Mines are placed on the first uncover.
    pub fn new(config: GameConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            board: GameBoard::empty(config.rows, config.cols),
            state: GameState::covered(config.rows, config.cols, config.mines),
            mines_placed: false,
            redundant_uncovers: 0,
            rng: ChaCha8Rng::seed_from_u64(config.rng_seed),
            config,
        })
    }

    /// Builds a game over a fixed hidden board (test fixtures, replays).
    pub fn from_board(board: GameBoard, first_click: FirstClick) -> Self {
        let mines = board.mine_count();
        let config = GameConfig::new(board.rows, board.cols, mines, first_click, 0);
        Self {
            state: GameState::covered(board.rows, board.cols, mines),
            board,
            mines_placed: true,
            redundant_uncovers: 0,
            rng: ChaCha8Rng::seed_from_u64(0),
            config,
        }
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn status(&self) -> GameStatus {
        self.state.status
    }

    /// The hidden board. Solvers must not read it; the harness and tests do.
    pub fn board(&self) -> &GameBoard {
        &self.board
    }

    pub fn mines_placed(&self) -> bool {
        self.mines_placed
    }

    /// Number of uncover calls that targeted an already revealed cell.
    pub fn redundant_uncovers(&self) -> usize {
        self.redundant_uncovers
    }

    /// Renders the visible board; after a loss the mines are shown as `*`.
    pub fn render(&self) -> String {
        if self.state.status == GameStatus::Lost {
            render_with_mines(&self.state, Some(&self.board))
        } else {
            render(&self.state)
        }
    }

    fn check_bounds(&self, cell: Cell) -> Result<()> {
        if self.state.in_bounds(cell.row, cell.col) {
            Ok(())
        } else {
            Err(Error::InvalidCoordinate { row: cell.row, col: cell.col, rows: self.config.rows, cols: self.config.cols })
        }
    }

    fn place_mines(&mut self, start: Cell) -> Result<()> {
        let protected = self.config.protected_cells(start);
        if self.config.mines + protected.len() > self.config.cells() {
            return Err(Error::InvalidConfig(format!(
                "{} mines leave no room for the {} protected cells around {start} under the {} first-click policy",
                self.config.mines,
                protected.len(),
                self.config.first_click
            )));
        }
        for _ in 0..self.config.mines {
            self.board.place_single_mine(&protected, &mut self.rng)?;
        }
        self.mines_placed = true;
        Ok(())
    }

    pub fn uncover(&mut self, cell: Cell) -> Result<GameStatus> {
        self.reveal(cell).map(|r| r.status)
    }

    /// Uncovers `cell`, flood-filling from zeros with an explicit work queue.
    pub fn reveal(&mut self, cell: Cell) -> Result<Reveal> {
        self.check_bounds(cell)?;
        if self.state.status != GameStatus::Playing {
            return Err(Error::GameOver);
        }
        if !self.mines_placed {
            self.place_mines(cell)?;
        }
        if !self.state.is_covered(cell) {
            self.redundant_uncovers += 1;
            return Ok(Reveal { status: self.state.status, revealed: Vec::new() });
        }
        self.state.moves_made += 1;
        if self.board.is_mine(cell) {
            self.state.status = GameStatus::Lost;
            return Ok(Reveal { status: GameStatus::Lost, revealed: Vec::new() });
        }

        let mut revealed = Vec::new();
        let mut queue = VecDeque::from([cell]);
        let (rows, cols) = (self.config.rows, self.config.cols);
        self.open(cell, &mut revealed);
        while let Some(c) = queue.pop_front() {
            if self.board.get(c) != 0 {
                continue;
            }
            for n in neighbours(rows, cols, c) {
                if self.state.is_covered(n) {
                    self.open(n, &mut revealed);
                    queue.push_back(n);
                }
            }
        }
        if self.state.cells_to_uncover == 0 {
            self.state.status = GameStatus::Won;
        }
        Ok(Reveal { status: self.state.status, revealed })
    }

    fn open(&mut self, cell: Cell, revealed: &mut Vec<Cell>) {
        // Neighbours of a zero are never mines.
        let v = self.board.get(cell);
        debug_assert_ne!(v, MINE);
        self.state.set(cell, v);
        self.state.cells_to_uncover -= 1;
        revealed.push(cell);
    }

    /// Covered non-mine cells left.
    pub fn cells_left(&self) -> usize {
        self.state.cells_to_uncover
    }
}

/// Creates a game and plays the protected first move at `start`.
pub fn new_game(config: GameConfig, start: Cell) -> Result<Game> {
    let mut game = Game::new(config)?;
    game.check_bounds(start)?;
    game.uncover(start)?;
    Ok(game)
}

/// Summary of one finished game.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GameResult {
    pub won: bool,
    pub moves: usize,
    /// Covered non-mine cells remaining when the game ended.
    pub cells_left: usize,
    /// Losses caused by a move the solver had deduced to be safe.
    pub deduction_losses: usize,
    /// Moves onto a cell not proven safe.
    pub guesses: usize,
    /// The solver gave up instead of guessing.
    pub resigned: bool,
    /// Moves that targeted an already uncovered cell.
    pub covered_violations: usize,
}

impl GameResult {
    pub fn from_game(game: &Game) -> Self {
        Self {
            won: game.status() == GameStatus::Won,
            moves: game.state().moves_made,
            cells_left: game.cells_left(),
            covered_violations: game.redundant_uncovers(),
            ..Self::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recount_ok(board: &GameBoard) -> bool {
        board.cells().all(|c| {
            board.is_mine(c) || board.get(c) as usize == neighbours(board.rows, board.cols, c).filter(|&n| board.is_mine(n)).count()
        })
    }

    #[test]
    fn beginner_safe_start_is_not_a_mine() {
        let cfg = GameConfig::new(9, 9, 10, FirstClick::SafeCell, 1);
        let g = new_game(cfg, Cell::new(4, 4)).unwrap();
        assert_eq!(g.board().mine_count(), 10);
        assert!(!g.board().is_mine(Cell::new(4, 4)));
        assert_ne!(g.status(), GameStatus::Lost);
        assert!(recount_ok(g.board()));
    }

    #[test]
    fn safe_start_allows_mines_in_start_row_and_column() {
        // The literal AND-condition would forbid row 4 and column 4 entirely.
        let mut seen = false;
        for seed in 0..200 {
            let cfg = GameConfig::new(9, 9, 10, FirstClick::SafeCell, seed);
            let g = new_game(cfg, Cell::new(4, 4)).unwrap();
            if g.board().mines().iter().any(|m| m.row == 4 || m.col == 4) {
                seen = true;
                break;
            }
        }
        assert!(seen);
    }

    #[test]
    fn zero_mines_wins_immediately() {
        for policy in [FirstClick::SafeCell, FirstClick::ZeroCell] {
            let g = new_game(GameConfig::new(3, 3, 0, policy, 0), Cell::new(0, 0)).unwrap();
            assert_eq!(g.status(), GameStatus::Won);
            assert_eq!(render(g.state()), "000\n000\n000");
        }
    }

    #[test]
    fn zero_cell_corner_start() {
        let cfg = GameConfig::new(9, 9, 10, FirstClick::ZeroCell, 7);
        let g = new_game(cfg, Cell::new(0, 0)).unwrap();
        assert_eq!(g.board().get(Cell::new(0, 0)), 0);
        for n in neighbours(9, 9, Cell::new(0, 0)) {
            assert!(!g.board().is_mine(n));
        }
        assert!(recount_ok(g.board()));
    }

    #[test]
    fn coordinate_and_config_errors() {
        let cfg = GameConfig::new(3, 3, 1, FirstClick::SafeCell, 0);
        assert!(matches!(new_game(cfg, Cell::new(3, 0)), Err(Error::InvalidCoordinate { .. })));
        let cfg = GameConfig::new(3, 3, 9, FirstClick::SafeCell, 0);
        assert!(matches!(new_game(cfg, Cell::new(0, 0)), Err(Error::InvalidConfig(_))));
        // 1 mine fits a corner ZeroCell start on 3x3 (4 protected) but not the centre (9 protected).
        let cfg = GameConfig::new(3, 3, 1, FirstClick::ZeroCell, 0);
        assert!(new_game(cfg, Cell::new(0, 0)).is_ok());
        assert!(matches!(new_game(cfg, Cell::new(1, 1)), Err(Error::InvalidConfig(_))));
        assert!(matches!(GameConfig::new(0, 3, 0, FirstClick::SafeCell, 0).validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn place_single_mine_on_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut b = GameBoard::empty(2, 2);
        let start = Cell::new(0, 0);
        let m = b.place_single_mine(&[start], &mut rng).unwrap();
        assert_ne!(m, start);
        assert_eq!(b.get(start), 1);
        assert_eq!(b.mine_count(), 1);
    }

    #[test]
    fn place_single_mine_avoids_existing_and_reports_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let mut b = GameBoard::from_mines(3, 3, &[Cell::new(1, 1)]);
            let m = b.place_single_mine(&[Cell::new(0, 0)], &mut rng).unwrap();
            assert_ne!(m, Cell::new(1, 1));
            assert_eq!(b.mine_count(), 2);
        }
        let mut b = GameBoard::from_mines(2, 2, &[Cell::new(0, 1), Cell::new(1, 0), Cell::new(1, 1)]);
        assert!(matches!(b.place_single_mine(&[Cell::new(0, 0)], &mut rng), Err(Error::BoardFull)));
    }

    #[test]
    fn sequential_placement_keeps_numbers_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut b = GameBoard::empty(8, 11);
        for k in 1..=40 {
            b.place_single_mine(&[Cell::new(2, 2)], &mut rng).unwrap();
            assert_eq!(b.mine_count(), k);
            assert!(recount_ok(&b));
        }
    }

    #[test]
    fn uncover_branches() {
        // . * .
        // . . .
        let board = GameBoard::from_mines(2, 3, &[Cell::new(0, 1)]);
        let mut g = Game::from_board(board.clone(), FirstClick::SafeCell);
        assert_eq!(g.uncover(Cell::new(0, 0)).unwrap(), GameStatus::Playing);
        let moves = g.state().moves_made;
        assert_eq!(g.uncover(Cell::new(0, 0)).unwrap(), GameStatus::Playing);
        assert_eq!(g.state().moves_made, moves);
        assert_eq!(g.redundant_uncovers(), 1);
        assert_eq!(g.uncover(Cell::new(0, 1)).unwrap(), GameStatus::Lost);
        assert!(matches!(g.uncover(Cell::new(1, 1)), Err(Error::GameOver)));
        assert_eq!(g.render(), "1*.\n...");

        let mut g = Game::from_board(board, FirstClick::SafeCell);
        for c in [Cell::new(0, 0), Cell::new(0, 2), Cell::new(1, 0), Cell::new(1, 1)] {
            assert_eq!(g.uncover(c).unwrap(), GameStatus::Playing);
        }
        assert_eq!(g.uncover(Cell::new(1, 2)).unwrap(), GameStatus::Won);
        assert_eq!(g.cells_left(), 0);
    }

    #[test]
    fn bordering_cells_definition() {
        let s = GameState::covered(5, 5, 0);
        assert!(bordering_cells(&s).is_empty());
        let mut v = vec![COVERED; 25];
        v[2 * 5 + 2] = 3;
        let s = GameState::from_visible(5, 5, v, 3);
        let b = bordering_cells(&s);
        let expected: Vec<Cell> = neighbours(5, 5, Cell::new(2, 2)).collect();
        assert_eq!(b, expected);
    }

    #[test]
    fn density() {
        let d = mine_density(&GameConfig::new(9, 9, 10, FirstClick::SafeCell, 0));
        assert!((d - 10.0 / 81.0).abs() < 1e-15);
        assert!((d - 0.12346).abs() < 1e-5);
        let d = mine_density(&GameConfig::new(16, 30, 99, FirstClick::SafeCell, 0));
        assert_eq!(d, 0.20625);
        assert_eq!(mine_density(&GameConfig::new(4, 7, 0, FirstClick::SafeCell, 0)), 0.0);
    }

    #[test]
    fn render_examples_and_parse() {
        assert_eq!(render(&GameState::covered(1, 3, 0)), "...");
        let g = new_game(GameConfig::new(1, 1, 0, FirstClick::SafeCell, 0), Cell::new(0, 0)).unwrap();
        assert_eq!(render(g.state()), "0");
        let (s, mines) = parse_grid("1*.\n11.").unwrap();
        assert_eq!(mines, vec![Cell::new(0, 1)]);
        assert_eq!(render(&s), "1..\n11.");
        assert_eq!(render(&s), render(&s.clone()));
        assert!(parse_grid("1x").is_err());
        assert!(parse_grid("12\n1").is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(b.len(), 100);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
