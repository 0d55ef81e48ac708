//! Constraint-satisfaction solver.
//!
//! Every uncovered number yields a linear constraint over the binary mine
//! variables of its covered neighbours. Constraints are simplified to a
//! fixpoint, split into coupled components, and each component is counted
//! exactly by backtracking enumeration. Component counts are combined with
//! the unconstrained interior through the global mine total, which gives
//! exact per-cell mine probabilities.

use std::collections::{BTreeMap, BTreeSet};

use crate::board::{Cell, Game, GameResult, GameState, GameStatus, COVERED};
use crate::error::{Error, Result};

/// Components with more variables than this are not enumerated.
pub const ENUMERATION_CAP: usize = 25;

/// `sum(vars) = label` over binary mine variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    /// Sorted, duplicate free.
    pub vars: Vec<Cell>,
    pub label: i32,
}

impl Constraint {
    pub fn new(mut vars: Vec<Cell>, label: i32) -> Self {
        vars.sort();
        vars.dedup();
        Self { vars, label }
    }

    fn check(&self) -> Result<()> {
        if self.label < 0 || self.label as usize > self.vars.len() {
            return Err(Error::InconsistentState(format!(
                "constraint over {} cells cannot hold {} mines",
                self.vars.len(),
                self.label
            )));
        }
        Ok(())
    }

    fn is_strict_subset_of(&self, other: &Constraint) -> bool {
        self.vars.len() < other.vars.len() && is_subset(&self.vars, &other.vars)
    }
}

fn is_subset(small: &[Cell], big: &[Cell]) -> bool {
    let mut j = 0;
    for v in small {
        while j < big.len() && big[j] < *v {
            j += 1;
        }
        if j == big.len() || big[j] != *v {
            return false;
        }
        j += 1;
    }
    true
}

/// One constraint per uncovered number that still has a covered neighbour.
pub fn build_constraints(state: &GameState) -> Vec<Constraint> {
    state
        .cells()
        .filter(|&c| !state.is_covered(c))
        .filter_map(|c| {
            let vars: Vec<Cell> = state.neighbours(c).filter(|&n| state.is_covered(n)).collect();
            (!vars.is_empty()).then(|| Constraint { vars, label: state.get(c) as i32 })
        })
        .collect()
}

/// Propagates trivial constraints and strict-subset subtraction to a fixpoint.
///
/// Returns the variables fixed along the way (0 safe, 1 mine) and the
/// remaining non-trivial constraints, deduplicated and sorted.
pub fn simplify(constraints: &[Constraint]) -> Result<(BTreeMap<Cell, u8>, Vec<Constraint>)> {
    let mut assigned: BTreeMap<Cell, u8> = BTreeMap::new();
    let mut cons: Vec<Constraint> = constraints.iter().map(|c| Constraint::new(c.vars.clone(), c.label)).collect();

    loop {
        // substitute known values
        for c in &mut cons {
            let mut label = c.label;
            c.vars.retain(|v| match assigned.get(v) {
                Some(&x) => {
                    label -= x as i32;
                    false
                }
                None => true,
            });
            c.label = label;
            c.check()?;
        }
        cons.retain(|c| !c.vars.is_empty());

        let mut changed = false;
        for c in &cons {
            let value = if c.label == 0 {
                0
            } else if c.label as usize == c.vars.len() {
                1
            } else {
                continue;
            };
            for &v in &c.vars {
                match assigned.insert(v, value) {
                    Some(prev) if prev != value => {
                        return Err(Error::InconsistentState(format!("{v} forced to be both safe and a mine")));
                    }
                    Some(_) => {}
                    None => changed = true,
                }
            }
        }
        if changed {
            continue;
        }

        cons.sort();
        cons.dedup();
        for w in cons.windows(2) {
            if w[0].vars == w[1].vars {
                return Err(Error::InconsistentState(format!("two labels for the same cells: {} and {}", w[0].label, w[1].label)));
            }
        }

        // strict subset subtraction: A ⊂ B  ⇒  B ← B ∖ A
        for i in 0..cons.len() {
            for j in 0..cons.len() {
                if i != j && cons[i].is_strict_subset_of(&cons[j]) {
                    let (a_vars, a_label) = (cons[i].vars.clone(), cons[i].label);
                    let b = &mut cons[j];
                    b.vars.retain(|v| a_vars.binary_search(v).is_err());
                    b.label -= a_label;
                    b.check()?;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok((assigned, cons));
        }
    }
}

/// Partitions constraints into groups connected through shared variables.
/// Components are ordered by their smallest variable.
pub fn coupled_components(constraints: &[Constraint]) -> Vec<Vec<Constraint>> {
    let n = constraints.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: BTreeMap<Cell, usize> = BTreeMap::new();
    for (i, c) in constraints.iter().enumerate() {
        for &v in &c.vars {
            if let Some(&j) = owner.get(&v) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else {
                owner.insert(v, i);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Constraint>> = BTreeMap::new();
    for (i, c) in constraints.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(c.clone());
    }
    let mut out: Vec<Vec<Constraint>> = groups.into_values().collect();
    out.sort_by_key(|g| g.iter().flat_map(|c| c.vars.first()).min().copied());
    out
}

/// Models of a component that place exactly `mines` mines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MineBucket {
    pub models: u64,
    /// Per variable (same order as [`ComponentModels::vars`]): models with a mine there.
    pub per_var: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentModels {
    pub vars: Vec<Cell>,
    pub model_count: u64,
    pub mine_count_per_var: Vec<u64>,
    /// Keyed by number of mines in the model.
    pub by_mines: BTreeMap<usize, MineBucket>,
}

impl ComponentModels {
    pub fn probability(&self, cell: Cell) -> Option<f64> {
        let i = self.vars.binary_search(&cell).ok()?;
        Some(self.mine_count_per_var[i] as f64 / self.model_count as f64)
    }
}

struct Enumerator {
    n: usize,
    order: Vec<usize>,
    // constraint index lists per variable
    var_cons: Vec<Vec<usize>>,
    labels: Vec<i32>,
    sums: Vec<i32>,
    open: Vec<i32>,
    value: Vec<u8>,
    buckets: BTreeMap<usize, MineBucket>,
}

impl Enumerator {
    fn run(&mut self, depth: usize, mines: usize) {
        if depth == self.n {
            let n = self.n;
            let bucket = self.buckets.entry(mines).or_insert_with(|| MineBucket { models: 0, per_var: vec![0; n] });
            bucket.models += 1;
            for (v, &x) in self.value.iter().enumerate() {
                bucket.per_var[v] += x as u64;
            }
            return;
        }
        let v = self.order[depth];
        for x in [0u8, 1] {
            let mut ok = true;
            for &ci in &self.var_cons[v] {
                self.sums[ci] += x as i32;
                self.open[ci] -= 1;
                let (s, o, l) = (self.sums[ci], self.open[ci], self.labels[ci]);
                if s > l || s + o < l {
                    ok = false;
                }
            }
            if ok {
                self.value[v] = x;
                self.run(depth + 1, mines + x as usize);
                self.value[v] = 0;
            }
            for &ci in &self.var_cons[v] {
                self.sums[ci] -= x as i32;
                self.open[ci] += 1;
            }
        }
    }
}

/// Counts every 0/1 assignment satisfying all constraints of `component`.
pub fn enumerate_models(component: &[Constraint]) -> Result<ComponentModels> {
    let vars: Vec<Cell> = component.iter().flat_map(|c| c.vars.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let n = vars.len();
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge(n));
    }
    let index = |c: &Cell| vars.binary_search(c).expect("variable of this component");
    let mut var_cons = vec![Vec::new(); n];
    for (ci, c) in component.iter().enumerate() {
        for v in &c.vars {
            var_cons[index(v)].push(ci);
        }
    }
    // Visit variables constraint by constraint so constraints close early.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for c in component {
        for v in &c.vars {
            let i = index(v);
            if !seen[i] {
                seen[i] = true;
                order.push(i);
            }
        }
    }
    let mut e = Enumerator {
        n,
        order,
        var_cons,
        labels: component.iter().map(|c| c.label).collect(),
        sums: vec![0; component.len()],
        open: component.iter().map(|c| c.vars.len() as i32).collect(),
        value: vec![0; n],
        buckets: BTreeMap::new(),
    };
    e.run(0, 0);
    let model_count: u64 = e.buckets.values().map(|b| b.models).sum();
    if model_count == 0 {
        return Err(Error::InconsistentState("a constraint component has no satisfying assignment".into()));
    }
    let mut mine_count_per_var = vec![0u64; n];
    for b in e.buckets.values() {
        for (acc, &x) in mine_count_per_var.iter_mut().zip(&b.per_var) {
            *acc += x;
        }
    }
    Ok(ComponentModels { vars, model_count, mine_count_per_var, by_mines: e.buckets })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    /// Covered cells that are mine free in every consistent placement.
    pub safe: BTreeSet<Cell>,
    /// Covered cells that hold a mine in every consistent placement.
    pub mines: BTreeSet<Cell>,
    /// Mine probability of every constrained covered cell.
    pub border_prob: BTreeMap<Cell, f64>,
    /// Mine probability shared by the covered cells no constraint mentions.
    pub interior_prob: f64,
    pub interior_cells: usize,
    pub model_count_by_component: Vec<u64>,
    /// Components that exceeded [`ENUMERATION_CAP`] and used the heuristic.
    pub fallback_components: usize,
    pub max_component_vars: usize,
}

impl InferenceResult {
    pub fn probability(&self, cell: Cell) -> f64 {
        self.border_prob.get(&cell).copied().unwrap_or(self.interior_prob)
    }
}

fn ln_binomial_table(n: usize) -> Vec<f64> {
    let mut ln_fact = vec![0.0f64; n + 1];
    for k in 1..=n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    (0..=n).map(|k| ln_fact[n] - ln_fact[k] - ln_fact[n - k]).collect()
}

/// Convolves two distributions over "mines in the border".
fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn convolve_support(a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] |= x && y;
        }
    }
    out
}

/// Exact inference over the visible state given the total number of mines.
pub fn infer(state: &GameState, total_mines: usize) -> Result<InferenceResult> {
    let constraints = build_constraints(state);
    let (assigned, reduced) = simplify(&constraints)?;
    let components = coupled_components(&reduced);

    let mut border_prob: BTreeMap<Cell, f64> = BTreeMap::new();
    let mut safe = BTreeSet::new();
    let mut mines = BTreeSet::new();
    let mut known_mines = 0usize;
    for (&c, &x) in &assigned {
        border_prob.insert(c, x as f64);
        if x == 1 {
            known_mines += 1;
            mines.insert(c);
        } else {
            safe.insert(c);
        }
    }

    let mut exact: Vec<ComponentModels> = Vec::new();
    let mut fallback_components = 0;
    let mut fallback_expectation = 0.0;
    let mut max_component_vars = 0;
    let mut constrained: BTreeSet<Cell> = assigned.keys().copied().collect();
    for comp in &components {
        let models = match enumerate_models(comp) {
            Ok(m) => m,
            Err(Error::TooLarge(n)) => {
                max_component_vars = max_component_vars.max(n);
                fallback_components += 1;
                let mut acc: BTreeMap<Cell, (f64, usize)> = BTreeMap::new();
                for c in comp {
                    let p = c.label as f64 / c.vars.len() as f64;
                    for &v in &c.vars {
                        let e = acc.entry(v).or_insert((0.0, 0));
                        e.0 += p;
                        e.1 += 1;
                    }
                }
                for (v, (sum, n)) in acc {
                    let p = sum / n as f64;
                    fallback_expectation += p;
                    border_prob.insert(v, p);
                    constrained.insert(v);
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        max_component_vars = max_component_vars.max(models.vars.len());
        constrained.extend(models.vars.iter().copied());
        exact.push(models);
    }

    let interior: Vec<Cell> =
        state.cells().filter(|c| state.get(*c) == COVERED && !constrained.contains(c)).collect();
    let interior_n = interior.len();
    let remaining = total_mines as i64 - known_mines as i64;
    if remaining < 0 {
        return Err(Error::InconsistentState(format!("{known_mines} mines deduced but only {total_mines} on the board")));
    }
    let remaining = remaining as usize;

    // Distributions over the number of mines in each component.
    let dists: Vec<Vec<f64>> = exact
        .iter()
        .map(|m| {
            let top = *m.by_mines.keys().next_back().unwrap_or(&0);
            let mut d = vec![0.0; top + 1];
            for (&k, b) in &m.by_mines {
                d[k] = b.models as f64;
            }
            d
        })
        .collect();
    let supports: Vec<Vec<bool>> = dists.iter().map(|d| d.iter().map(|&x| x > 0.0).collect()).collect();

    // Interior weight for s border mines: C(interior, remaining - s), scaled.
    let ln_binom = ln_binomial_table(interior_n);
    // A heuristic component has no exact mine count, so the total cannot be
    // enforced; the components are then treated as independent.
    let budget = fallback_components == 0;
    let fits = |s: usize| s <= remaining && remaining - s <= interior_n;
    let interior_ok = |s: usize| !budget || fits(s);
    let ln_max = (0..=remaining)
        .filter(|&s| fits(s))
        .map(|s| ln_binom[remaining - s])
        .fold(f64::NEG_INFINITY, f64::max);
    let weight = |s: usize| match (budget, interior_ok(s)) {
        (false, _) => 1.0,
        (true, true) => (ln_binom[remaining - s] - ln_max).exp(),
        (true, false) => 0.0,
    };

    // prefix[i] = convolution of components 0..i, suffix[i] = i..
    let k = exact.len();
    let mut prefix = vec![vec![1.0]];
    let mut prefix_sup = vec![vec![true]];
    for i in 0..k {
        prefix.push(convolve(&prefix[i], &dists[i]));
        prefix_sup.push(convolve_support(&prefix_sup[i], &supports[i]));
    }
    let mut suffix = vec![vec![1.0]; k + 1];
    let mut suffix_sup = vec![vec![true]; k + 1];
    for i in (0..k).rev() {
        suffix[i] = convolve(&dists[i], &suffix[i + 1]);
        suffix_sup[i] = convolve_support(&supports[i], &suffix_sup[i + 1]);
    }

    let total = &prefix[k];
    let total_sup = &prefix_sup[k];
    let z: f64 = total.iter().enumerate().map(|(s, &t)| t * weight(s)).sum();
    let feasible: Vec<usize> = (0..total.len()).filter(|&s| total_sup[s] && interior_ok(s)).collect();
    if feasible.is_empty() || z <= 0.0 {
        return Err(Error::InconsistentState("no mine placement matches the visible numbers and the mine total".into()));
    }

    let mut model_count_by_component = Vec::with_capacity(k);
    let mut border_expectation = 0.0;
    for (i, models) in exact.iter().enumerate() {
        model_count_by_component.push(models.model_count);
        let others = convolve(&prefix[i], &suffix[i + 1]);
        let others_sup = convolve_support(&prefix_sup[i], &suffix_sup[i + 1]);
        let n = models.vars.len();
        let mut numer = vec![0.0; n];
        let mut always_zero = vec![true; n];
        let mut always_one = vec![true; n];
        for (&mk, bucket) in &models.by_mines {
            let w: f64 = others.iter().enumerate().map(|(s, &t)| t * weight(mk + s)).sum();
            let reachable = others_sup.iter().enumerate().any(|(s, &ok)| ok && interior_ok(mk + s));
            for v in 0..n {
                numer[v] += bucket.per_var[v] as f64 * w;
                if reachable {
                    always_zero[v] &= bucket.per_var[v] == 0;
                    always_one[v] &= bucket.per_var[v] == bucket.models;
                }
            }
        }
        for (v, &cell) in models.vars.iter().enumerate() {
            let p = if always_zero[v] {
                safe.insert(cell);
                0.0
            } else if always_one[v] {
                mines.insert(cell);
                1.0
            } else {
                (numer[v] / z).clamp(0.0, 1.0)
            };
            border_expectation += p;
            border_prob.insert(cell, p);
        }
    }

    let interior_prob = if interior_n == 0 {
        0.0
    } else if !budget {
        let expected = total_mines as f64 - known_mines as f64 - border_expectation - fallback_expectation;
        (expected / interior_n as f64).clamp(0.0, 1.0)
    } else if feasible.iter().all(|&s| remaining == s) {
        safe.extend(interior.iter().copied());
        0.0
    } else if feasible.iter().all(|&s| remaining - s == interior_n) {
        mines.extend(interior.iter().copied());
        1.0
    } else {
        let expected = total_mines as f64 - known_mines as f64 - border_expectation - fallback_expectation;
        (expected / interior_n as f64).clamp(0.0, 1.0)
    };

    Ok(InferenceResult {
        safe,
        mines,
        border_prob,
        interior_prob,
        interior_cells: interior_n,
        model_count_by_component,
        fallback_components,
        max_component_vars,
    })
}

/// First safe cell in row-major order, or else the covered cell of lowest
/// mine probability (row-major on ties).
pub fn choose_move(result: &InferenceResult, state: &GameState) -> Cell {
    if let Some(&c) = result.safe.iter().find(|&&c| state.is_covered(c)) {
        return c;
    }
    let mut best: Option<(f64, Cell)> = None;
    for c in state.cells().filter(|&c| state.is_covered(c)) {
        let p = result.probability(c);
        if best.is_none_or(|(bp, _)| p < bp) {
            best = Some((p, c));
        }
    }
    best.expect("at least one covered cell").1
}

/// Plays a game: all proven-safe cells first, otherwise the least likely mine
/// when guessing is allowed, otherwise resign.
pub fn csp_play_game(game: &mut Game, allow_guess: bool) -> GameResult {
    let total = game.config().mines;
    let mut guesses = 0;
    let mut deduction_losses = 0;
    let mut resigned = false;
    while game.status() == GameStatus::Playing {
        let opening = game.state().all_covered();
        let result = infer(game.state(), total).expect("engine states are consistent");
        let safe: Vec<Cell> = result.safe.iter().copied().filter(|&c| game.state().is_covered(c)).collect();
        if !safe.is_empty() {
            for c in safe {
                if game.status() != GameStatus::Playing {
                    break;
                }
                if game.state().is_covered(c) && game.uncover(c).expect("in bounds") == GameStatus::Lost {
                    deduction_losses += 1;
                }
            }
            continue;
        }
        // The opening click is protected by the engine, so it is never a guess.
        if !opening && !allow_guess {
            resigned = true;
            break;
        }
        let c = choose_move(&result, game.state());
        if !opening {
            guesses += 1;
        }
        game.uncover(c).expect("in bounds");
    }
    GameResult { guesses, deduction_losses, resigned, ..GameResult::from_game(game) }
}

/// Plays one seeded game from scratch.
pub fn csp_play(config: crate::board::GameConfig, allow_guess: bool) -> Result<GameResult> {
    let mut game = Game::new(config)?;
    Ok(csp_play_game(&mut game, allow_guess))
}
