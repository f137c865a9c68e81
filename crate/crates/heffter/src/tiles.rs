//! Filling a single nice tile while dodging per-line target sums, and the
//! exact expected-failure bounds that certify the tile families.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arrays::Cell;
use crate::groups::{Elem, FiniteGroup};
use crate::skeletons::Tile;

/// Node budget for the exhaustive stage of [`fill_tile`].
pub const DFS_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TileError {
    #[error("no assignment avoids every target")]
    NotNice,
    #[error("element list has {found} entries, tile has {expected} cells")]
    SizeMismatch { found: usize, expected: usize },
    #[error("element list repeats an element")]
    Repeated,
    #[error("start {start} for {line} does not match the tile interval")]
    BadStart { line: String, start: usize },
}

#[derive(Clone, Debug)]
pub struct FillRequest {
    pub tile: Tile,
    pub s_list: Vec<Elem>,
    /// Row → (target, start column).
    pub forbidden_rows: BTreeMap<usize, (Elem, usize)>,
    /// Column → (target, start row).
    pub forbidden_cols: BTreeMap<usize, (Elem, usize)>,
}

impl FillRequest {
    /// A request with no targets.
    pub fn new(tile: Tile, s_list: Vec<Elem>) -> FillRequest {
        FillRequest { tile, s_list, forbidden_rows: BTreeMap::new(), forbidden_cols: BTreeMap::new() }
    }

    pub fn forbid_row(&mut self, row: usize, target: Elem) {
        let start = self.tile.row_starts[&row];
        self.forbidden_rows.insert(row, (target, start));
    }

    pub fn forbid_col(&mut self, col: usize, target: Elem) {
        let start = self.tile.col_starts[&col];
        self.forbidden_cols.insert(col, (target, start));
    }

    fn check(&self) -> Result<(), TileError> {
        if self.s_list.len() != self.tile.len() {
            return Err(TileError::SizeMismatch { found: self.s_list.len(), expected: self.tile.len() });
        }
        let uniq: HashSet<Elem> = self.s_list.iter().copied().collect();
        if uniq.len() != self.s_list.len() {
            return Err(TileError::Repeated);
        }
        for (&i, &(_, s)) in &self.forbidden_rows {
            if self.tile.row_starts.get(&i) != Some(&s) {
                return Err(TileError::BadStart { line: format!("row {i}"), start: s });
            }
        }
        for (&j, &(_, s)) in &self.forbidden_cols {
            if self.tile.col_starts.get(&j) != Some(&s) {
                return Err(TileError::BadStart { line: format!("column {j}"), start: s });
            }
        }
        Ok(())
    }

    /// Constrained lines as (target, cell indices in summation order).
    fn constraints(&self) -> Vec<(Elem, Vec<usize>)> {
        let index: BTreeMap<Cell, usize> =
            self.tile.cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut out = Vec::new();
        for (&i, &(target, _)) in &self.forbidden_rows {
            out.push((target, self.tile.row_order(i).iter().map(|c| index[c]).collect()));
        }
        for (&j, &(target, _)) in &self.forbidden_cols {
            out.push((target, self.tile.col_order(j).iter().map(|c| index[c]).collect()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileFill {
    pub assignment: BTreeMap<Cell, Elem>,
}

/// True when `fill` is a bijection onto `S` avoiding every target.
pub fn check_fill(g: &FiniteGroup, req: &FillRequest, fill: &TileFill) -> bool {
    if fill.assignment.len() != req.tile.len()
        || req.tile.cells.iter().any(|c| !fill.assignment.contains_key(c))
    {
        return false;
    }
    let mut got: Vec<Elem> = fill.assignment.values().copied().collect();
    let mut want = req.s_list.clone();
    got.sort_unstable();
    want.sort_unstable();
    if got != want {
        return false;
    }
    let rows = req.forbidden_rows.iter().map(|(&i, &(t, _))| (t, req.tile.row_order(i)));
    let cols = req.forbidden_cols.iter().map(|(&j, &(t, _))| (t, req.tile.col_order(j)));
    rows.chain(cols)
        .all(|(target, cells)| g.sum(cells.iter().map(|c| fill.assignment[c])) != target)
}

fn violates(g: &FiniteGroup, cons: &[(Elem, Vec<usize>)], vals: &[Elem]) -> bool {
    cons.iter().any(|(t, idx)| g.sum(idx.iter().map(|&i| vals[i])) == *t)
}

/// Places `S` on the tile so that no constrained line hits its target.
///
/// Random permutations first (64·|S| tries), then a lexicographic search
/// that checks each line as soon as its last cell is placed.
pub fn fill_tile(g: &FiniteGroup, req: &FillRequest, seed: u64) -> Result<TileFill, TileError> {
    req.check()?;
    let cons = req.constraints();
    let size = req.s_list.len();
    let finish = |vals: &[Elem]| TileFill {
        assignment: req.tile.cells.iter().copied().zip(vals.iter().copied()).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = req.s_list.clone();
    for _ in 0..64 * size.max(1) {
        vals.shuffle(&mut rng);
        if !violates(g, &cons, &vals) {
            return Ok(finish(&vals));
        }
    }
    // Lines indexed by the cell that completes them in placement order.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (li, (_, idx)) in cons.iter().enumerate() {
        if let Some(&last) = idx.iter().max() {
            closing[last].push(li);
        }
    }
    let mut sorted = req.s_list.clone();
    sorted.sort_unstable();
    let mut state = Dfs {
        g,
        cons: &cons,
        closing: &closing,
        pool: &sorted,
        used: vec![false; size],
        vals: vec![0; size],
        nodes: 0,
    };
    match state.run(0) {
        Some(true) => Ok(finish(&state.vals)),
        _ => Err(TileError::NotNice),
    }
}

struct Dfs<'a> {
    g: &'a FiniteGroup,
    cons: &'a [(Elem, Vec<usize>)],
    closing: &'a [Vec<usize>],
    pool: &'a [Elem],
    used: Vec<bool>,
    vals: Vec<Elem>,
    nodes: u64,
}

impl Dfs<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn run(&mut self, pos: usize) -> Option<bool> {
        if pos == self.vals.len() {
            return Some(true);
        }
        for i in 0..self.pool.len() {
            if self.used[i] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > DFS_NODE_BUDGET {
                return None;
            }
            self.vals[pos] = self.pool[i];
            let bad = self.closing[pos].iter().any(|&li| {
                let (t, idx) = &self.cons[li];
                self.g.sum(idx.iter().map(|&c| self.vals[c])) == *t
            });
            if bad {
                continue;
            }
            self.used[i] = true;
            let r = self.run(pos + 1);
            self.used[i] = false;
            if r != Some(false) {
                return r;
            }
        }
        Some(false)
    }
}

/// Searches for a target vector on every line of `tile` that no placement
/// of `s` avoids. `None` means the tile is nice for this `S`.
///
/// Exhaustive over `|S|!` placements; intended for small tiles only.
pub fn niceness_counterexample(
    g: &FiniteGroup,
    tile: &Tile,
    s: &[Elem],
) -> Option<Vec<Elem>> {
    assert_eq!(s.len(), tile.len());
    let index: BTreeMap<Cell, usize> = tile.cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let lines: Vec<Vec<usize>> = tile
        .row_starts
        .keys()
        .map(|&i| tile.row_order(i).iter().map(|c| index[c]).collect())
        .chain(tile.col_starts.keys().map(|&j| tile.col_order(j).iter().map(|c| index[c]).collect()))
        .collect();
    let mut vectors: HashSet<Vec<Elem>> = HashSet::new();
    let mut perm = s.to_vec();
    permute(&mut perm, 0, &mut |p| {
        vectors.insert(lines.iter().map(|idx| g.sum(idx.iter().map(|&i| p[i]))).collect());
    });
    let vectors: Vec<Vec<Elem>> = vectors.into_iter().collect();
    let mut targets: Vec<Option<Elem>> = vec![None; lines.len()];
    hitting(&vectors, &mut targets).then(|| targets.iter().map(|t| t.unwrap_or(0)).collect())
}

fn permute(p: &mut [Elem], k: usize, f: &mut impl FnMut(&[Elem])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Chooses line targets so that every sum vector agrees with them somewhere.
fn hitting(vectors: &[Vec<Elem>], targets: &mut [Option<Elem>]) -> bool {
    let missed = vectors
        .iter()
        .find(|v| !v.iter().zip(targets.iter()).any(|(x, t)| *t == Some(*x)));
    let Some(u) = missed else { return true };
    for l in 0..targets.len() {
        if targets[l].is_none() {
            targets[l] = Some(u[l]);
            if hitting(vectors, targets) {
                return true;
            }
            targets[l] = None;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(serialize_with = "ser_ratio")]
    pub ex_rows: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub ex_cols: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub total: BigRational,
    pub feasible: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl BoundReport {
    fn new(ex_rows: BigRational, ex_cols: BigRational) -> BoundReport {
        let total = &ex_rows + &ex_cols;
        let feasible = total < BigRational::one();
        BoundReport { ex_rows, ex_cols, total, feasible }
    }
}

fn ratio(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `λ(m/(mh−h+1) + n/(nk−k+1))` for a uniformly random filling.
pub fn expected_zero_bound(m: usize, n: usize, h: usize, k: usize, lambda: usize) -> BoundReport {
    assert!(m > 0 && n > 0 && h > 0 && k > 0 && lambda > 0);
    let l = ratio(lambda, 1);
    BoundReport::new(&l * ratio(m, m * h - h + 1), &l * ratio(n, n * k - k + 1))
}

/// Each line of the tile with `c` cells contributes `1/(|S|−c+1)`.
pub fn tile_bound(tile: &Tile) -> BoundReport {
    let s = tile.len();
    let mut rows = BigRational::zero();
    for &i in tile.row_starts.keys() {
        rows += ratio(1, s - tile.cells.iter().filter(|c| c.row == i).count() + 1);
    }
    let mut cols = BigRational::zero();
    for &j in tile.col_starts.keys() {
        cols += ratio(1, s - tile.cells.iter().filter(|c| c.col == j).count() + 1);
    }
    BoundReport::new(rows, cols)
}
