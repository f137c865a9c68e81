//! The constructions and the dispatcher that routes a parameter tuple to
//! one of them. Every array leaving [`construct`] has passed
//! [`verify_array`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arrays::{
    line_sum, necessary_conditions, verify_array, Cell, Line, PFArray, Params, VerifyReport,
};
use crate::groups::{find_noncommuting_pair, find_noninvolution, Elem, FiniteGroup, Subgroup};
use crate::orderings::{
    omega, ordered_complement, ordered_complement_with_lead, slice_lists, OrderedComplement,
};
use crate::skeletons::{
    coset_skeleton, plan_tiling, square_diagonal_skeleton, v3_skeleton, CellSet, Tile, TilePlan,
};
use crate::tiles::{fill_tile, FillRequest};

/// Full-array attempts for the randomized fallback.
pub const RANDOM_BUDGET: usize = 10_000;
/// Fresh-seed retries for the tiling assembly.
pub const TILING_RETRIES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Z2AllOnes,
    OneRow,
    V3Direct,
    SquareOddAbelian,
    H1,
    Nk2,
    Tiling,
    RandomGlobal,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Z2AllOnes => "z2_all_ones",
            Construction::OneRow => "one_row",
            Construction::V3Direct => "v3_direct",
            Construction::SquareOddAbelian => "square_odd_abelian",
            Construction::H1 => "h1",
            Construction::Nk2 => "nk2",
            Construction::Tiling => "tiling",
            Construction::RandomGlobal => "random_global",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("open: {0}")]
    Open(String),
    #[error("regime violation: {0}")]
    Regime(String),
    #[error("plan inconsistent: {0}")]
    PlanInconsistent(String),
    #[error("retries exhausted: {0}")]
    RetriesExhausted(String),
}

fn regime(msg: impl Into<String>) -> BuildError {
    BuildError::Regime(msg.into())
}

#[derive(Clone, Debug)]
pub struct BuildRequest {
    pub group: Arc<FiniteGroup>,
    pub j: Subgroup,
    pub params: Params,
    pub seed: u64,
}

impl BuildRequest {
    pub fn new(group: Arc<FiniteGroup>, j: Subgroup, params: Params, seed: u64) -> BuildRequest {
        BuildRequest { group, j, params, seed }
    }

    fn with_params(&self, params: Params) -> BuildRequest {
        BuildRequest { params, ..self.clone() }
    }

    fn g(&self) -> &FiniteGroup {
        &self.group
    }

    fn gap(&self) -> usize {
        self.params.v - self.params.t
    }
}

#[derive(Clone, Debug)]
pub struct BuildResult {
    pub array: PFArray,
    pub construction: Construction,
    pub report: VerifyReport,
    pub seed_used: u64,
    pub plan: Option<TilePlan>,
}

/// SplitMix64 step, used to derive independent sub-seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The construction the dispatcher will use without falling back to
/// random search, or `None`. Assumes the necessary conditions hold.
pub fn route(g: &FiniteGroup, _j: &Subgroup, p: &Params) -> Option<Construction> {
    let gap = p.v - p.t;
    if p.v == 2 {
        return Some(Construction::Z2AllOnes);
    }
    if p.m == 1 || p.n == 1 {
        return Some(Construction::OneRow);
    }
    if p.v == 3 && v3_skeleton(p.m, p.n, p.h, p.k).is_ok() {
        return Some(Construction::V3Direct);
    }
    if g.is_abelian() && p.v % 2 == 1 && p.m == p.n && gap >= 4 {
        return Some(Construction::SquareOddAbelian);
    }
    if (p.h == 1 || p.k == 1) && gap >= 4 {
        return Some(Construction::H1);
    }
    if p.m == p.n && p.h == 2 && p.k == 2 && gap >= 4 {
        return Some(Construction::Nk2);
    }
    match plan_tiling(p.m, p.n, p.h, p.k) {
        Ok(plan) if plan.max_tile() <= gap => Some(Construction::Tiling),
        _ => None,
    }
}

/// One row of the dispatch table, as exported by the `sweep` command.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeRow {
    pub construction: Construction,
    pub applies_when: &'static str,
    pub min_v_minus_t: usize,
}

pub fn regime_table() -> Vec<RegimeRow> {
    use Construction::*;
    let row = |construction, applies_when, min_v_minus_t| RegimeRow { construction, applies_when, min_v_minus_t };
    vec![
        row(Z2AllOnes, "v=2, hk odd", 1),
        row(OneRow, "m=1 or n=1", 1),
        row(V3Direct, "v=3", 2),
        row(SquareOddAbelian, "G abelian, v odd, m=n", 4),
        row(H1, "h=1 or k=1", 4),
        row(Nk2, "m=n, h=k=2", 4),
        row(Tiling, "totally filled (max tile 15)", 15),
        row(Tiling, "r=1 (max tile 18)", 18),
        row(Tiling, "r=2 (max tile 20)", 20),
        row(Tiling, "r>=3 (max tile 21)", 21),
        row(RandomGlobal, "anything else, bounded budget", 1),
    ]
}

/// Runs the dispatcher and re-verifies the result.
pub fn construct(req: &BuildRequest) -> Result<BuildResult, BuildError> {
    let p = req.params;
    necessary_conditions(req.g(), &req.j, &p).map_err(BuildError::Infeasible)?;
    let tag = route(req.g(), &req.j, &p);
    let (array, construction, plan) = match tag {
        Some(Construction::Z2AllOnes) => (construct_z2_all_ones(req)?, Construction::Z2AllOnes, None),
        Some(Construction::OneRow) => (construct_one_row(req)?, Construction::OneRow, None),
        Some(Construction::V3Direct) => (construct_v3(req)?, Construction::V3Direct, None),
        Some(Construction::SquareOddAbelian) => {
            (construct_square_odd_abelian(req)?, Construction::SquareOddAbelian, None)
        }
        Some(Construction::H1) => (construct_h1(req)?, Construction::H1, None),
        Some(Construction::Nk2) => (construct_nk2(req)?, Construction::Nk2, None),
        Some(Construction::Tiling) => {
            let (a, plan) = assemble_by_tiling(req)?;
            (a, Construction::Tiling, Some(plan))
        }
        Some(Construction::RandomGlobal) | None => {
            (construct_random_global(req)?, Construction::RandomGlobal, None)
        }
    };
    let report = verify_array(&array, &req.j, &p);
    if !report.passed() {
        let first = report.failures.first().map(ToString::to_string).unwrap_or_default();
        return Err(BuildError::RetriesExhausted(format!("{construction} produced an invalid array: {first}")));
    }
    Ok(BuildResult { array, construction, report, seed_used: req.seed, plan })
}

fn fill_cells(req: &BuildRequest, skel: &CellSet, mut value: impl FnMut(Cell) -> Elem) -> PFArray {
    let mut a = PFArray::new(req.group.clone(), skel.m, skel.n);
    for &c in &skel.cells {
        a.set(c, value(c));
    }
    a
}

/// Coset skeleton filled with `1`.
pub fn construct_z2_all_ones(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    if p.v != 2 || p.t != 1 || (p.h * p.k).is_multiple_of(2) {
        return Err(regime("all-ones needs v=2, t=1 and hk odd"));
    }
    let skel = coset_skeleton(p.m, p.n, p.h, p.k).map_err(|e| regime(e.to_string()))?;
    Ok(fill_cells(req, &skel, |_| 1))
}

fn ordering_for(req: &BuildRequest, adjacent: bool, lead: &[Elem]) -> Result<OrderedComplement, BuildError> {
    let split = req.params.lambda % 2 == 1;
    ordered_complement_with_lead(req.g(), &req.j, split, adjacent, lead).map_err(|e| regime(e.to_string()))
}

/// A single row (or column, by transposition) read off Ω, then a swap or
/// sign change if its sum vanishes.
pub fn construct_one_row(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    if p.m != 1 {
        if p.n == 1 {
            return Ok(construct_one_row(&req.with_params(p.transposed()))?.transpose());
        }
        return Err(regime("one_row needs m=1 or n=1"));
    }
    let g = req.g();
    let skel = coset_skeleton(1, p.n, p.h, 1).map_err(|e| regime(e.to_string()))?;
    let order: Vec<Elem> = if g.is_elementary_abelian_2() {
        let o = ordered_complement(g, &req.j, false, false).map_err(|e| regime(e.to_string()))?;
        (0..p.n).map(|i| o.sequence[i % o.len()]).collect()
    } else {
        let lead = match find_noncommuting_pair(g, &req.j) {
            Some((x, y)) => vec![x, y],
            None => vec![find_noninvolution(g, &req.j).ok_or_else(|| regime("no non-involution outside J"))?],
        };
        let o = ordering_for(req, false, &lead)?;
        omega(g, &req.j, p.lambda, &o).map_err(|e| regime(e.to_string()))?.order
    };
    let mut a = fill_cells(req, &skel, |c| order[c.col - 1]);
    if line_sum(&a, Line::Row(1)) == 0 && !g.is_elementary_abelian_2() {
        let (c1, c2) = (Cell::new(1, 1), Cell::new(1, 2));
        let x = a.get(c1).unwrap();
        match a.get(c2) {
            Some(y) if !g.is_abelian() => {
                a.set(c1, y);
                a.set(c2, x);
            }
            _ => a.set(c1, g.neg(x)),
        }
    }
    Ok(a)
}

/// Block skeleton over ℤ₃ filled with `1`, with `−1` on `H₁` and the
/// signs on `H₂` toggled.
pub fn construct_v3(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    if p.v != 3 || p.t != 1 {
        return Err(regime("v3 needs G=Z3 and trivial J"));
    }
    let (b, h1, h2) = v3_skeleton(p.m, p.n, p.h, p.k).map_err(|e| regime(e.to_string()))?;
    let mut a = fill_cells(req, &b, |c| if h1.contains(&c) { 2 } else { 1 });
    for &c in &h2.cells {
        let x = a.get(c).unwrap();
        a.set(c, req.g().neg(x));
    }
    Ok(a)
}

/// Cyclically `k`-diagonal square over an abelian group of odd order.
pub fn construct_square_odd_abelian(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    let g = req.g();
    if !g.is_abelian() || p.v.is_multiple_of(2) || p.m != p.n || p.h != p.k {
        return Err(regime("square_odd_abelian needs an abelian group of odd order and m=n"));
    }
    if req.gap() < 4 {
        return construct_v3(req);
    }
    let (n, k) = (p.n, p.k);
    let skel = square_diagonal_skeleton(n, k);
    let o = ordered_complement(g, &req.j, true, false).map_err(|e| regime(e.to_string()))?;
    let half = o.half().to_vec();
    let hl = half.len();
    let mut pool: Vec<Elem> = (0..p.lambda).flat_map(|_| half.iter().copied()).collect();
    if k == 1 {
        return Ok(fill_cells(req, &skel, |c| pool[c.row - 1]));
    }
    let wrap = |i: usize| (i + n - 1) % n + 1;
    let gi = |i: usize| half[(i + hl - 1) % hl];
    let mut fixed: BTreeMap<Cell, Elem> = BTreeMap::new();
    for i in 1..=n {
        fixed.insert(Cell::new(wrap(i + 1), i), gi(2 * i + 1));
        fixed.insert(Cell::new(i, i), gi(2 * i));
    }
    let mut reserved = vec![0usize; g.order()];
    for &x in fixed.values() {
        reserved[x] += 1;
    }
    pool.retain(|&x| {
        if reserved[x] > 0 {
            reserved[x] -= 1;
            false
        } else {
            true
        }
    });
    if reserved.iter().any(|&r| r > 0) {
        return Err(regime("diagonal entries exceed their multiplicity"));
    }
    let mut rest = pool.into_iter();
    let mut a = PFArray::new(req.group.clone(), n, n);
    for &c in &skel.cells {
        let x = match fixed.get(&c) {
            Some(&x) => x,
            None => rest.next().expect("pool sized to the skeleton"),
        };
        a.set(c, x);
    }
    for i in 1..=n {
        let xc = Cell::new(wrap(i + 1), i);
        let yc = Cell::new(i, i);
        let (x, y) = (a.get(xc).unwrap(), a.get(yc).unwrap());
        let others = g.sub(line_sum(&a, Line::Col(i)), g.add(x, y));
        let good = |xs: Elem| {
            g.add(g.add(others, xs), y) != 0 && g.add(g.add(others, xs), g.neg(y)) != 0
        };
        let choice = if good(x) { x } else { g.neg(x) };
        assert!(good(choice), "neither sign of x_{i} keeps column {i} nonzero");
        a.set(xc, choice);
    }
    for i in 1..=n {
        if line_sum(&a, Line::Row(i)) == 0 {
            let yc = Cell::new(i, i);
            let y = a.get(yc).unwrap();
            a.set(yc, g.neg(y));
        }
    }
    Ok(a)
}

/// One cell per row; column `c` takes rows `(c−1)k+1..ck`, filled along an
/// adjacent-nonzero ordering and repaired column by column.
pub fn construct_h1(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    if p.h != 1 {
        if p.k == 1 {
            return Ok(construct_h1(&req.with_params(p.transposed()))?.transpose());
        }
        return Err(regime("h1 needs h=1 or k=1"));
    }
    if req.gap() < 4 {
        return Err(regime("h1 needs v-t >= 4"));
    }
    let g = req.g();
    let o = ordering_for(req, true, &[])?;
    let om = omega(g, &req.j, p.lambda, &o).map_err(|e| regime(e.to_string()))?;
    let k = p.k;
    let mut a = PFArray::new(req.group.clone(), p.m, p.n);
    for i in 1..=p.m {
        a.set(Cell::new(i, (i - 1) / k + 1), om.order[i - 1]);
    }
    let col_cells = |c: usize| -> Vec<Cell> { ((c - 1) * k + 1..=c * k).map(|i| Cell::new(i, c)).collect() };
    let col_zero = |a: &PFArray, c: usize| line_sum(a, Line::Col(c)) == 0;
    let swap = |a: &mut PFArray, x: Cell, y: Cell| {
        let (vx, vy) = (a.get(x).unwrap(), a.get(y).unwrap());
        a.set(x, vy);
        a.set(y, vx);
    };
    for c in 1..=p.n {
        if !col_zero(&a, c) {
            continue;
        }
        if c < p.n {
            let (last, next) = (col_cells(c), col_cells(c + 1));
            let (l, f) = (*last.last().unwrap(), next[0]);
            swap(&mut a, l, f);
            if !col_zero(&a, c) {
                continue;
            }
            swap(&mut a, l, f);
            if k >= 2 {
                let s = next[1];
                let mut repaired = false;
                // Three rotations of (l f s) return to the start.
                for _ in 0..3 {
                    let (vl, vf, vs) = (a.get(l).unwrap(), a.get(f).unwrap(), a.get(s).unwrap());
                    a.set(l, vs);
                    a.set(f, vl);
                    a.set(s, vf);
                    if !col_zero(&a, c) {
                        repaired = true;
                        break;
                    }
                }
                if repaired {
                    continue;
                }
            }
        }
        // Generic repair: swap a cell of column c with one of another column
        // keeping both nonzero.
        let mine = col_cells(c);
        let mut fixed = false;
        'outer: for d in (1..=p.n).filter(|&d| d != c) {
            for &x in &mine {
                for y in col_cells(d) {
                    swap(&mut a, x, y);
                    if !col_zero(&a, c) && (d > c || !col_zero(&a, d)) {
                        fixed = true;
                        break 'outer;
                    }
                    swap(&mut a, x, y);
                }
            }
        }
        if !fixed {
            return Err(regime(format!("column {c} cannot be repaired")));
        }
    }
    Ok(a)
}

/// Two consecutive diagonals; row `i` holds `g_{2i−1}, g_{2i}`.
pub fn construct_nk2(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    if p.m != p.n || p.h != 2 || p.k != 2 {
        return Err(regime("nk2 needs m=n and h=k=2"));
    }
    if req.gap() < 4 {
        return Err(regime("nk2 needs v-t >= 4"));
    }
    let n = p.n;
    let seq: Vec<Elem> = if p.lambda.is_multiple_of(2) {
        ordering_for(req, true, &[])?.sequence
    } else {
        ordering_for(req, false, &[])?.half().to_vec()
    };
    let g_at = |i: usize| seq[(i - 1) % seq.len()];
    let mut a = PFArray::new(req.group.clone(), n, n);
    for i in 1..=n {
        a.set(Cell::new(i, i), g_at(2 * i - 1));
        a.set(Cell::new(i, i % n + 1), g_at(2 * i));
    }
    Ok(a)
}

/// Targets for the lines that `tile` completes, given the cells already
/// placed in `partial`.
pub fn forbidden_targets(
    partial: &PFArray,
    tile: &Tile,
    skeleton: &CellSet,
    s_list: Vec<Elem>,
) -> Result<FillRequest, BuildError> {
    let g = partial.group();
    let (m, n) = (partial.rows(), partial.cols());
    let mut req = FillRequest::new(tile.clone(), s_list);
    for c in &tile.cells {
        if partial.is_filled(*c) || !skeleton.contains(c) {
            return Err(BuildError::PlanInconsistent(format!("cell {c} filled twice or outside the skeleton")));
        }
    }
    for (&i, &beta) in &tile.row_starts {
        let len = tile.cells.iter().filter(|c| c.row == i).count();
        let mut others: Vec<Cell> = skeleton
            .cells
            .iter()
            .copied()
            .filter(|c| c.row == i && !tile.cells.contains(c))
            .collect();
        if others.iter().any(|c| !partial.is_filled(*c)) {
            continue;
        }
        let after = (beta - 1 + len) % n;
        others.sort_by_key(|c| (c.col - 1 + n - after) % n);
        let s = g.sum(others.iter().map(|c| partial.get(*c).unwrap()));
        req.forbid_row(i, g.neg(s));
    }
    for (&j, &gamma) in &tile.col_starts {
        let len = tile.cells.iter().filter(|c| c.col == j).count();
        let mut others: Vec<Cell> = skeleton
            .cells
            .iter()
            .copied()
            .filter(|c| c.col == j && !tile.cells.contains(c))
            .collect();
        if others.iter().any(|c| !partial.is_filled(*c)) {
            continue;
        }
        let after = (gamma - 1 + len) % m;
        others.sort_by_key(|c| (c.row - 1 + m - after) % m);
        let s = g.sum(others.iter().map(|c| partial.get(*c).unwrap()));
        req.forbid_col(j, g.neg(s));
    }
    Ok(req)
}

/// Fills the tiles of a plan one after another, each avoiding the targets
/// left by its predecessors.
pub fn assemble_by_tiling(req: &BuildRequest) -> Result<(PFArray, TilePlan), BuildError> {
    let p = req.params;
    let g = req.g();
    let plan = plan_tiling(p.m, p.n, p.h, p.k).map_err(|e| regime(e.to_string()))?;
    if plan.max_tile() > req.gap() {
        return Err(regime(format!("largest tile {} exceeds v-t={}", plan.max_tile(), req.gap())));
    }
    let o = ordering_for(req, false, &[])?;
    let om = omega(g, &req.j, p.lambda, &o).map_err(|e| regime(e.to_string()))?;
    let lists = slice_lists(&om.order, &plan.sizes()).map_err(|e| regime(e.to_string()))?;
    let mut seed = req.seed;
    for _ in 0..TILING_RETRIES {
        let mut a = PFArray::new(req.group.clone(), p.m, p.n);
        for (idx, (tile, s)) in plan.tiles.iter().zip(&lists).enumerate() {
            let fr = forbidden_targets(&a, tile, &plan.skeleton, s.clone())?;
            let fill = fill_tile(g, &fr, splitmix64(seed ^ idx as u64))
                .map_err(|e| BuildError::PlanInconsistent(format!("tile {idx}: {e}")))?;
            for (c, x) in fill.assignment {
                a.set(c, x);
            }
        }
        if verify_array(&a, &req.j, &p).passed() {
            return Ok((a, plan));
        }
        seed = splitmix64(seed);
    }
    Err(BuildError::RetriesExhausted("tiling assembly never verified".into()))
}

/// Random `(h,k)`-regular skeleton: the coset layout scrambled by switches.
fn random_skeleton(p: &Params, rng: &mut ChaCha8Rng) -> Option<CellSet> {
    let mut s = coset_skeleton(p.m, p.n, p.h, p.k).ok()?;
    let mut cells: Vec<Cell> = s.cells.iter().copied().collect();
    for _ in 0..4 * cells.len() {
        let a = rng.gen_range(0..cells.len());
        let b = rng.gen_range(0..cells.len());
        let (x, y) = (cells[a], cells[b]);
        let (u, w) = (Cell::new(x.row, y.col), Cell::new(y.row, x.col));
        if x.row != y.row && x.col != y.col && !s.contains(&u) && !s.contains(&w) {
            s.cells.remove(&x);
            s.cells.remove(&y);
            s.cells.insert(u);
            s.cells.insert(w);
            cells[a] = u;
            cells[b] = w;
        }
    }
    Some(s)
}

/// Uniform multiset with `occ(x) + occ(−x) = λ`, placed at random on a
/// random skeleton; retried until it verifies.
pub fn construct_random_global(req: &BuildRequest) -> Result<PFArray, BuildError> {
    let p = req.params;
    let g = req.g();
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(req.seed));
    let outside = req.j.complement();
    for _ in 0..RANDOM_BUDGET {
        let Some(skel) = random_skeleton(&p, &mut rng) else {
            return Err(BuildError::Open("no regular skeleton".into()));
        };
        let mut elems = Vec::with_capacity(skel.len());
        for &x in &outside {
            let nx = g.neg(x);
            if nx == x {
                elems.extend(std::iter::repeat_n(x, p.lambda / 2));
            } else if x < nx {
                let a = rng.gen_range(0..=p.lambda);
                elems.extend(std::iter::repeat_n(x, a));
                elems.extend(std::iter::repeat_n(nx, p.lambda - a));
            }
        }
        elems.shuffle(&mut rng);
        let mut it = elems.into_iter();
        let a = fill_cells(req, &skel, |_| it.next().expect("multiset sized to skeleton"));
        if verify_array(&a, &req.j, &p).passed() {
            return Ok(a);
        }
    }
    Err(BuildError::Open(format!("random search found nothing in {RANDOM_BUDGET} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, subgroup_of_order, GroupSpec};

    fn req(spec: GroupSpec, t: usize, m: usize, n: usize, h: usize, k: usize, lambda: usize) -> BuildRequest {
        let g = Arc::new(build_group(&spec).unwrap());
        let j = subgroup_of_order(&g, t).unwrap();
        let v = g.order();
        BuildRequest::new(g, j, Params { m, n, h, k, lambda, t, v }, 1)
    }

    #[test]
    fn z2_square() {
        let r = construct(&req(GroupSpec::Cyclic(2), 1, 3, 3, 3, 3, 18)).unwrap();
        assert_eq!(r.construction, Construction::Z2AllOnes);
        assert!(r.array.entries().all(|(_, x)| x == 1));
        let bad = req(GroupSpec::Cyclic(2), 1, 2, 2, 2, 2, 8);
        assert!(matches!(construct(&bad), Err(BuildError::Infeasible(_))));
    }

    #[test]
    fn one_row_examples() {
        let r = construct(&req(GroupSpec::Cyclic(5), 1, 1, 2, 2, 1, 1)).unwrap();
        assert_eq!(r.construction, Construction::OneRow);
        assert_eq!(r.array.row(1), vec![(1, 1), (2, 2)]);
        let r = construct(&req(GroupSpec::Elementary2(2), 2, 1, 8, 8, 1, 4));
        assert!(matches!(r, Err(BuildError::Infeasible(_))));
    }

    #[test]
    fn h1_and_nk2() {
        let r = construct(&req(GroupSpec::Cyclic(13), 1, 6, 2, 1, 3, 1)).unwrap();
        assert_eq!(r.construction, Construction::H1);
        let r = construct(&req(GroupSpec::Cyclic(25), 1, 6, 6, 2, 2, 1)).unwrap();
        assert_eq!(r.construction, Construction::SquareOddAbelian);
        let r = construct_nk2(&req(GroupSpec::Cyclic(25), 1, 6, 6, 2, 2, 1)).unwrap();
        assert!(verify_array(&r, &Subgroup::trivial(r.group()), &Params { m: 6, n: 6, h: 2, k: 2, lambda: 1, t: 1, v: 25 }).passed());
    }

    #[test]
    fn tiling_3x3() {
        let r = assemble_by_tiling(&req(GroupSpec::Cyclic(19), 1, 3, 3, 3, 3, 1)).unwrap();
        assert_eq!(r.1.tiles.len(), 1);
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(splitmix64(0), splitmix64(1));
    }
}
