//! Cell layouts: coset and block skeletons, the tile families, and the
//! planner that partitions a skeleton into certified tiles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::{gcd, lcm};
use serde::Serialize;
use thiserror::Error;

use crate::arrays::Cell;
use crate::tiles::tile_bound;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{family} with b={b} violates the family bounds in a {m}x{n} array")]
    FamilyBoundViolation { family: Family, b: usize, m: usize, n: usize },
    #[error("no tiling plan for m={m} n={n} h={h} k={k}")]
    NoPlan { m: usize, n: usize, h: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellSet {
    pub m: usize,
    pub n: usize,
    pub cells: BTreeSet<Cell>,
}

impl CellSet {
    pub fn new(m: usize, n: usize) -> CellSet {
        CellSet { m, n, cells: BTreeSet::new() }
    }

    /// Inserts the 0-based position `(r, c)` reduced mod `(m, n)`.
    fn insert0(&mut self, r: usize, c: usize) -> bool {
        self.cells.insert(Cell::new(r % self.m + 1, c % self.n + 1))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.cells.contains(c)
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.cells.iter().filter(|c| c.row == i).count()
    }

    pub fn col_count(&self, j: usize) -> usize {
        self.cells.iter().filter(|c| c.col == j).count()
    }

    /// True when every row has `h` cells and every column `k`.
    pub fn is_regular(&self, h: usize, k: usize) -> bool {
        let mut rows = vec![0; self.m + 1];
        let mut cols = vec![0; self.n + 1];
        for c in &self.cells {
            rows[c.row] += 1;
            cols[c.col] += 1;
        }
        rows[1..].iter().all(|&x| x == h) && cols[1..].iter().all(|&x| x == k)
    }

    pub fn transposed(&self) -> CellSet {
        CellSet {
            m: self.n,
            n: self.m,
            cells: self.cells.iter().map(|c| c.transposed()).collect(),
        }
    }
}

/// `B = ⋃_{i<r} H + (0, i)` with `H = ⟨(1,1)⟩ ≤ ℤ_m × ℤ_n`.
pub fn coset_skeleton(m: usize, n: usize, h: usize, k: usize) -> Result<CellSet, SkeletonError> {
    check_basic(m, n, h, k)?;
    let r = n * k / lcm(m, n);
    let mut b = CellSet::new(m, n);
    for i in 0..r {
        for x in 0..lcm(m, n) {
            if !b.insert0(x, x + i) {
                return Err(SkeletonError::BadParams("cosets overlap".into()));
            }
        }
    }
    if !b.is_regular(h, k) {
        return Err(SkeletonError::BadParams("coset union is not (h,k)-regular".into()));
    }
    Ok(b)
}

fn check_basic(m: usize, n: usize, h: usize, k: usize) -> Result<(), SkeletonError> {
    if m == 0 || n == 0 || h == 0 || k == 0 || h > n || k > m || n * k != m * h {
        return Err(SkeletonError::BadParams(format!("m={m} n={n} h={h} k={k}")));
    }
    Ok(())
}

/// The block skeleton `B`, plus the row set `H₁` (when `3 | k`) and the
/// column set `H₂` (when `3 | h`) used by the ℤ₃ construction.
pub fn v3_skeleton(
    m: usize,
    n: usize,
    h: usize,
    k: usize,
) -> Result<(CellSet, CellSet, CellSet), SkeletonError> {
    let b = block_skeleton(m, n, h, k)?;
    let mut h1 = CellSet::new(m, n);
    let mut h2 = CellSet::new(m, n);
    if k.is_multiple_of(3) {
        let rows: BTreeSet<usize> = (1..=n.div_ceil(h)).map(|i| (i * k - 1) % m + 1).collect();
        h1.cells = b.cells.iter().copied().filter(|c| rows.contains(&c.row)).collect();
        for j in 1..=n {
            let hits = h1.col_count(j);
            if hits != 1 && hits != 2 {
                return Err(SkeletonError::BadParams(format!("column {j} meets H1 in {hits} cells")));
            }
        }
    }
    if h.is_multiple_of(3) {
        let cols: BTreeSet<usize> = (1..=m.div_ceil(k)).map(|j| (j * h - 1) % n + 1).collect();
        h2.cells = b.cells.iter().copied().filter(|c| cols.contains(&c.col)).collect();
        for i in 1..=m {
            let hits = h2.row_count(i);
            if hits != 1 && hits != 2 {
                return Err(SkeletonError::BadParams(format!("row {i} meets H2 in {hits} cells")));
            }
        }
    }
    Ok((b, h1, h2))
}

/// `⋃_{j<r} ⋃_{i<gcd(m,n)} Q + j(0, h/r) + i(k/r, h/r)` with `Q` a
/// `(k/r) × (h/r)` block.
pub fn block_skeleton(m: usize, n: usize, h: usize, k: usize) -> Result<CellSet, SkeletonError> {
    check_basic(m, n, h, k)?;
    let r = n * k / lcm(m, n);
    let (qr, qc) = (k / r, h / r);
    let mut b = CellSet::new(m, n);
    for j in 0..r {
        for i in 0..gcd(m, n) {
            for a in 0..qr {
                for c in 0..qc {
                    if !b.insert0(a + i * qr, c + j * qc + i * qc) {
                        return Err(SkeletonError::BadParams("Q-translates overlap".into()));
                    }
                }
            }
        }
    }
    if !b.is_regular(h, k) {
        return Err(SkeletonError::BadParams("block union is not (h,k)-regular".into()));
    }
    Ok(b)
}

/// Cyclically `k`-diagonal `n × n` skeleton: column `i` holds rows `i..i+k−1`.
pub fn square_diagonal_skeleton(n: usize, k: usize) -> CellSet {
    assert!(n >= k && k >= 1);
    let mut b = CellSet::new(n, n);
    for i in 0..n {
        for d in 0..k {
            b.insert0(i + d, i);
        }
    }
    b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rect3b,
    Rect2b,
    Stair32,
    Dstair21,
    Dstair31,
    Diag3b,
    Diag4b,
    Diag5b,
    FullQ,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Rect3b => "rect3b",
            Family::Rect2b => "rect2b",
            Family::Stair32 => "stair32",
            Family::Dstair21 => "dstair21",
            Family::Dstair31 => "dstair31",
            Family::Diag3b => "diag3b",
            Family::Diag4b => "diag4b",
            Family::Diag5b => "diag5b",
            Family::FullQ => "fullq",
        };
        f.write_str(s)
    }
}

impl Family {
    pub const CERTIFIED: [Family; 8] = [
        Family::Rect3b,
        Family::Rect2b,
        Family::Stair32,
        Family::Dstair21,
        Family::Dstair31,
        Family::Diag3b,
        Family::Diag4b,
        Family::Diag5b,
    ];

    /// Least `b` for which the family is nice.
    pub fn min_b(self) -> usize {
        match self {
            Family::Rect3b => 3,
            Family::Rect2b => 4,
            Family::Stair32 => 2,
            Family::Dstair21 => 3,
            Family::Dstair31 => 2,
            Family::Diag3b => 4,
            Family::Diag4b => 3,
            Family::Diag5b => 2,
            Family::FullQ => 1,
        }
    }

    fn diag_width(self) -> Option<usize> {
        match self {
            Family::Diag3b => Some(3),
            Family::Diag4b => Some(4),
            Family::Diag5b => Some(5),
            _ => None,
        }
    }

    /// Family bounds in an `m × n` array (in the family's own orientation).
    pub fn admits(self, b: usize, m: usize, n: usize) -> bool {
        if b < self.min_b() {
            return false;
        }
        match self {
            Family::Rect3b => m >= 3 && b <= n,
            Family::Rect2b => m >= 2 && b <= n,
            Family::Stair32 => 3 * b <= m && 2 * b <= n,
            Family::Dstair21 => 2 * b <= m && b <= n,
            Family::Dstair31 => 3 * b <= m && b <= n,
            Family::Diag3b | Family::Diag4b | Family::Diag5b => {
                let w = self.diag_width().unwrap();
                w < n && b <= m && (b + w - 1 <= n || b == m)
            }
            Family::FullQ => true,
        }
    }

    /// 0-based offsets of the family's cells relative to its anchor.
    fn offsets(self, b: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self {
            Family::Rect3b | Family::Rect2b => {
                let rows = if self == Family::Rect3b { 3 } else { 2 };
                for r in 0..rows {
                    for c in 0..b {
                        out.push((r, c));
                    }
                }
            }
            Family::Stair32 => {
                for i in 0..b {
                    for r in 0..3 {
                        for c in 0..2 {
                            out.push((3 * i + r, 2 * i + c));
                        }
                    }
                }
            }
            Family::Dstair21 | Family::Dstair31 => {
                let q = if self == Family::Dstair21 { 2 } else { 3 };
                for i in 0..b {
                    for r in 0..q {
                        out.push((q * i + r, i));
                        out.push((q * i + r, i + 1));
                    }
                }
            }
            Family::Diag3b | Family::Diag4b | Family::Diag5b => {
                let w = self.diag_width().unwrap();
                for x in 0..b {
                    for c in 0..w {
                        out.push((x, x + c));
                    }
                }
            }
            Family::FullQ => out.push((0, 0)),
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tile {
    pub family: Family,
    pub b: usize,
    pub anchor: Cell,
    /// The family is laid out with rows and columns exchanged.
    pub transposed: bool,
    pub cells: Vec<Cell>,
    /// Row → first column of its cyclic interval (`β_i`).
    pub row_starts: BTreeMap<usize, usize>,
    /// Column → first row of its cyclic interval (`γ_j`).
    pub col_starts: BTreeMap<usize, usize>,
    pub m: usize,
    pub n: usize,
}

impl Tile {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells of row `i` in cyclic order from `β_i`.
    pub fn row_order(&self, i: usize) -> Vec<Cell> {
        let Some(&beta) = self.row_starts.get(&i) else { return Vec::new() };
        let mut cs: Vec<Cell> = self.cells.iter().copied().filter(|c| c.row == i).collect();
        cs.sort_by_key(|c| (c.col + self.n - beta) % self.n);
        cs
    }

    /// Cells of column `j` in cyclic order from `γ_j`.
    pub fn col_order(&self, j: usize) -> Vec<Cell> {
        let Some(&gamma) = self.col_starts.get(&j) else { return Vec::new() };
        let mut cs: Vec<Cell> = self.cells.iter().copied().filter(|c| c.col == j).collect();
        cs.sort_by_key(|c| (c.row + self.m - gamma) % self.m);
        cs
    }

    /// Builds a tile from explicit cells, computing interval starts. Fails
    /// when some line of the tile is not a cyclic interval.
    pub fn from_cells(
        family: Family,
        b: usize,
        anchor: Cell,
        transposed: bool,
        m: usize,
        n: usize,
        mut cells: Vec<Cell>,
    ) -> Option<Tile> {
        cells.sort();
        let before = cells.len();
        cells.dedup();
        if cells.len() != before {
            return None;
        }
        let mut by_row: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut by_col: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for c in &cells {
            by_row.entry(c.row).or_default().insert(c.col);
            by_col.entry(c.col).or_default().insert(c.row);
        }
        let mut row_starts = BTreeMap::new();
        for (&i, cols) in &by_row {
            row_starts.insert(i, interval_start(cols, n)?);
        }
        let mut col_starts = BTreeMap::new();
        for (&j, rows) in &by_col {
            col_starts.insert(j, interval_start(rows, m)?);
        }
        Some(Tile { family, b, anchor, transposed, cells, row_starts, col_starts, m, n })
    }

    pub fn transposed_tile(&self) -> Tile {
        let cells = self.cells.iter().map(|c| c.transposed()).collect();
        Tile::from_cells(
            self.family,
            self.b,
            self.anchor.transposed(),
            !self.transposed,
            self.n,
            self.m,
            cells,
        )
        .expect("transpose keeps intervals")
    }

    /// Family bounds checked in the family's own orientation.
    pub fn family_ok(&self) -> bool {
        let (m, n) = if self.transposed { (self.n, self.m) } else { (self.m, self.n) };
        self.family.admits(self.b, m, n)
    }
}

/// Start of a cyclic interval in `1..=modulus`, or `None` if `set` is not one.
fn interval_start(set: &BTreeSet<usize>, modulus: usize) -> Option<usize> {
    if set.len() == modulus {
        return Some(1);
    }
    let starts: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&x| !set.contains(&((x + modulus - 2) % modulus + 1)))
        .collect();
    (starts.len() == 1).then(|| starts[0])
}

/// Places a family member at a 1-based anchor with wraparound.
pub fn tile_catalog(
    family: Family,
    b: usize,
    anchor: Cell,
    m: usize,
    n: usize,
) -> Result<Tile, SkeletonError> {
    place(family, b, anchor, false, m, n)
}

fn place(
    family: Family,
    b: usize,
    anchor: Cell,
    transposed: bool,
    m: usize,
    n: usize,
) -> Result<Tile, SkeletonError> {
    let (fm, fn_) = if transposed { (n, m) } else { (m, n) };
    let violation = SkeletonError::FamilyBoundViolation { family, b, m: fm, n: fn_ };
    if !family.admits(b, fm, fn_) {
        return Err(violation);
    }
    let cells = family
        .offsets(b)
        .into_iter()
        .map(|(dr, dc)| {
            let (dr, dc) = if transposed { (dc, dr) } else { (dr, dc) };
            Cell::new((anchor.row - 1 + dr) % m + 1, (anchor.col - 1 + dc) % n + 1)
        })
        .collect();
    Tile::from_cells(family, b, anchor, transposed, m, n, cells).ok_or(violation)
}

/// Splits `total` into parts from `parts`, taking the smallest part whose
/// remainder is still splittable.
pub fn decompose(total: usize, parts: &[usize]) -> Option<Vec<usize>> {
    let mut ok = vec![false; total + 1];
    ok[0] = true;
    for s in 1..=total {
        ok[s] = parts.iter().any(|&p| p <= s && ok[s - p]);
    }
    if !ok[total] {
        return None;
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut rest = total;
    while rest > 0 {
        let p = *sorted.iter().find(|&&p| p <= rest && ok[rest - p]).expect("splittable");
        out.push(p);
        rest -= p;
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    TotallyFilled,
    R1,
    R2,
    R3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilePlan {
    pub m: usize,
    pub n: usize,
    pub regime: Regime,
    pub tiles: Vec<Tile>,
    pub skeleton: CellSet,
}

impl TilePlan {
    pub fn max_tile(&self) -> usize {
        self.tiles.iter().map(Tile::len).max().unwrap_or(0)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.tiles.iter().map(Tile::len).collect()
    }

    /// Disjointness, `(h,k)`-regularity, intervals, family bounds, exact
    /// bound `< 1` per tile, and `max |T| ≤ 21`.
    pub fn verify(&self, h: usize, k: usize) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for (i, t) in self.tiles.iter().enumerate() {
            for c in &t.cells {
                if !seen.insert(*c) {
                    return Err(format!("tile {i} overlaps at {c}"));
                }
            }
            if Tile::from_cells(t.family, t.b, t.anchor, t.transposed, self.m, self.n, t.cells.clone())
                .is_none()
            {
                return Err(format!("tile {i} is not cyclically contiguous"));
            }
            if !t.family_ok() {
                return Err(format!("tile {i} ({} b={}) violates its family bounds", t.family, t.b));
            }
            if !tile_bound(t).feasible {
                return Err(format!("tile {i} has expected-failure bound >= 1"));
            }
        }
        if seen != self.skeleton.cells {
            return Err("tiles do not cover the skeleton exactly".into());
        }
        if !self.skeleton.is_regular(h, k) {
            return Err("skeleton is not (h,k)-regular".into());
        }
        if self.max_tile() > 21 {
            return Err(format!("tile of size {} exceeds 21", self.max_tile()));
        }
        Ok(())
    }

    fn transposed(&self) -> TilePlan {
        let mut tiles: Vec<Tile> = self.tiles.iter().map(Tile::transposed_tile).collect();
        sort_tiles(&mut tiles);
        TilePlan {
            m: self.n,
            n: self.m,
            regime: self.regime,
            tiles,
            skeleton: self.skeleton.transposed(),
        }
    }
}

fn sort_tiles(tiles: &mut [Tile]) {
    tiles.sort_by_key(|t| (t.anchor.row, t.anchor.col));
}

/// One tile of a rectangle plan, in 0-based rectangle coordinates.
struct RectPiece {
    family: Family,
    b: usize,
    row: usize,
    col: usize,
    transposed: bool,
}

/// Tiles an `a × c` rectangle with row bands of weight 2 or 3.
fn rect_plan(a: usize, c: usize) -> Option<Vec<RectPiece>> {
    if a > c {
        let pieces = rect_plan(c, a)?;
        return Some(
            pieces
                .into_iter()
                .map(|p| RectPiece { row: p.col, col: p.row, transposed: !p.transposed, ..p })
                .collect(),
        );
    }
    let bands = if c >= 4 { decompose(a, &[2, 3])? } else { decompose(a, &[3])? };
    let mut out = Vec::new();
    let mut row = 0;
    for w in bands {
        let (family, chunks) = if w == 2 {
            (Family::Rect2b, decompose(c, &[4, 5, 6, 7])?)
        } else {
            (Family::Rect3b, decompose(c, &[3, 4, 5])?)
        };
        let mut col = 0;
        for b in chunks {
            out.push(RectPiece { family, b, row, col, transposed: false });
            col += b;
        }
        row += w;
    }
    Some(out)
}

fn place_rect(
    tiles: &mut Vec<Tile>,
    pieces: &[RectPiece],
    row0: usize,
    col0: usize,
    m: usize,
    n: usize,
) -> Option<()> {
    for p in pieces {
        let anchor = Cell::new((row0 + p.row) % m + 1, (col0 + p.col) % n + 1);
        tiles.push(place(p.family, p.b, anchor, p.transposed, m, n).ok()?);
    }
    Some(())
}

/// Partitions a regular skeleton for `(m, n, h, k)` into certified tiles.
pub fn plan_tiling(m: usize, n: usize, h: usize, k: usize) -> Result<TilePlan, SkeletonError> {
    check_basic(m, n, h, k)?;
    let no_plan = SkeletonError::NoPlan { m, n, h, k };
    let plan = build_plan(m, n, h, k).ok_or(no_plan.clone())?;
    plan.verify(h, k).map_err(|_| no_plan)?;
    Ok(plan)
}

fn finish_plan(m: usize, n: usize, regime: Regime, mut tiles: Vec<Tile>) -> TilePlan {
    sort_tiles(&mut tiles);
    let mut skeleton = CellSet::new(m, n);
    for t in &tiles {
        skeleton.cells.extend(t.cells.iter().copied());
    }
    TilePlan { m, n, regime, tiles, skeleton }
}

fn build_plan(m: usize, n: usize, h: usize, k: usize) -> Option<TilePlan> {
    if h == n && k == m {
        let mut tiles = Vec::new();
        place_rect(&mut tiles, &rect_plan(m, n)?, 0, 0, m, n)?;
        return Some(finish_plan(m, n, Regime::TotallyFilled, tiles));
    }
    let r = n * k / lcm(m, n);
    let g = gcd(m, n);
    match r {
        1 | 2 if h > k => Some(build_plan(n, m, k, h)?.transposed()),
        1 => {
            if h == 1 {
                return None;
            }
            let mut tiles = Vec::new();
            if h == 2 && k == 3 {
                let mut start = 0;
                for b in decompose(g, &[2, 3])? {
                    let anchor = Cell::new(3 * start % m + 1, 2 * start % n + 1);
                    tiles.push(place(Family::Stair32, b, anchor, false, m, n).ok()?);
                    start += b;
                }
            } else {
                let pieces = rect_plan(k, h)?;
                for i in 0..g {
                    place_rect(&mut tiles, &pieces, i * k, i * h, m, n)?;
                }
            }
            Some(finish_plan(m, n, Regime::R1, tiles))
        }
        2 => {
            if h == k {
                return None;
            }
            let (qr, qc) = (k / 2, h / 2);
            let mut tiles = Vec::new();
            if h == 2 && (k == 4 || k == 6) {
                let (family, parts): (Family, &[usize]) = if k == 4 {
                    (Family::Dstair21, &[3, 4, 5])
                } else {
                    (Family::Dstair31, &[2, 3])
                };
                let mut start = 0;
                for b in decompose(g, parts)? {
                    let anchor = Cell::new(qr * start % m + 1, start % n + 1);
                    tiles.push(place(family, b, anchor, false, m, n).ok()?);
                    start += b;
                }
            } else {
                let pieces = rect_plan(qr, h)?;
                for i in 0..g {
                    place_rect(&mut tiles, &pieces, i * qr, i * qc, m, n)?;
                }
            }
            Some(finish_plan(m, n, Regime::R2, tiles))
        }
        _ => {
            if m > n {
                return Some(build_plan(n, m, k, h)?.transposed());
            }
            let l = lcm(m, n);
            let mut tiles = Vec::new();
            let mut offset = 0;
            for w in decompose(r, &[3, 4, 5])? {
                let (family, pieces) = match w {
                    3 if (4..=7).contains(&m) => (Family::Diag3b, vec![m; l / m]),
                    3 => (Family::Diag3b, decompose(l, &range(4, 7.min(m.checked_sub(4)?)))?),
                    4 if m == 5 => (Family::Diag4b, vec![m; l / m]),
                    4 => (Family::Diag4b, decompose(l, &range(3, 5.min(m.checked_sub(3)?)))?),
                    _ => (Family::Diag5b, decompose(l, &range(2, 3.min(m.checked_sub(4)?)))?),
                };
                let mut x0 = 0;
                for b in pieces {
                    let anchor = Cell::new(x0 % m + 1, (offset + x0) % n + 1);
                    tiles.push(place(family, b, anchor, false, m, n).ok()?);
                    x0 += b;
                }
                offset += w;
            }
            Some(finish_plan(m, n, Regime::R3, tiles))
        }
    }
}

fn range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}
