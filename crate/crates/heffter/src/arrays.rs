//! Partially filled arrays, ordered line sums, and the verifier.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructors::{self, Construction};
use crate::groups::{build_group, Elem, FiniteGroup, GroupSpec, Subgroup};

/// 1-based cell position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Cell {
        Cell { row, col }
    }

    pub fn transposed(self) -> Cell {
        Cell { row: self.col, col: self.row }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub n: usize,
    pub h: usize,
    pub k: usize,
    pub lambda: usize,
    pub t: usize,
    pub v: usize,
}

impl Params {
    pub fn transposed(self) -> Params {
        Params { m: self.n, n: self.m, h: self.k, k: self.h, ..self }
    }

    pub fn totally_filled(&self) -> bool {
        self.h == self.n && self.k == self.m
    }

    /// `r = nk / lcm(m, n)`.
    pub fn r(&self) -> usize {
        self.n * self.k / num_integer::lcm(self.m, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Col(usize),
}

#[derive(Clone, Debug)]
pub struct PFArray {
    m: usize,
    n: usize,
    group: Arc<FiniteGroup>,
    grid: Vec<Option<Elem>>,
}

impl PartialEq for PFArray {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n && self.grid == other.grid && self.group == other.group
    }
}

impl PFArray {
    pub fn new(group: Arc<FiniteGroup>, m: usize, n: usize) -> PFArray {
        PFArray { m, n, group, grid: vec![None; m * n] }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn idx(&self, c: Cell) -> usize {
        assert!(
            (1..=self.m).contains(&c.row) && (1..=self.n).contains(&c.col),
            "cell {c} outside {}x{}",
            self.m,
            self.n
        );
        (c.row - 1) * self.n + (c.col - 1)
    }

    pub fn get(&self, c: Cell) -> Option<Elem> {
        self.grid[self.idx(c)]
    }

    pub fn set(&mut self, c: Cell, x: Elem) {
        assert!(x < self.group.order());
        let i = self.idx(c);
        self.grid[i] = Some(x);
    }

    pub fn clear(&mut self, c: Cell) {
        let i = self.idx(c);
        self.grid[i] = None;
    }

    pub fn is_filled(&self, c: Cell) -> bool {
        self.get(c).is_some()
    }

    /// Filled cells in row-major order.
    pub fn skeleton(&self) -> Vec<Cell> {
        self.entries().map(|(c, _)| c).collect()
    }

    /// `(cell, element)` pairs in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, Elem)> + '_ {
        self.grid.iter().enumerate().filter_map(move |(i, e)| {
            e.map(|x| (Cell::new(i / self.n + 1, i % self.n + 1), x))
        })
    }

    pub fn filled_count(&self) -> usize {
        self.grid.iter().filter(|e| e.is_some()).count()
    }

    /// Filled `(col, element)` pairs of row `i`, left to right.
    pub fn row(&self, i: usize) -> Vec<(usize, Elem)> {
        (1..=self.n).filter_map(|j| self.get(Cell::new(i, j)).map(|x| (j, x))).collect()
    }

    /// Filled `(row, element)` pairs of column `j`, top to bottom.
    pub fn col(&self, j: usize) -> Vec<(usize, Elem)> {
        (1..=self.m).filter_map(|i| self.get(Cell::new(i, j)).map(|x| (i, x))).collect()
    }

    pub fn line(&self, line: Line) -> Vec<(usize, Elem)> {
        match line {
            Line::Row(i) => self.row(i),
            Line::Col(j) => self.col(j),
        }
    }

    pub fn transpose(&self) -> PFArray {
        let mut t = PFArray::new(self.group.clone(), self.n, self.m);
        for (c, x) in self.entries() {
            t.set(c.transposed(), x);
        }
        t
    }
}

/// Ordered sum of a line in natural order; an empty line sums to 0.
pub fn line_sum(a: &PFArray, line: Line) -> Elem {
    a.group().sum(a.line(line).into_iter().map(|(_, x)| x))
}

/// For `x ∉ J`: occurrences of `x` plus occurrences of `-x` (an involution
/// counts twice). For `x ∈ J`: raw occurrences.
pub fn coverage_multiset(a: &PFArray, j: &Subgroup) -> Vec<usize> {
    let g = a.group();
    let mut occ = vec![0usize; g.order()];
    for (_, x) in a.entries() {
        occ[x] += 1;
    }
    g.elements()
        .map(|x| if j.contains(x) { occ[x] } else { occ[x] + occ[g.neg(x)] })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    Dimensions { detail: String },
    RowCount { row: usize, found: usize, expected: usize },
    ColCount { col: usize, found: usize, expected: usize },
    Coverage { element: Elem, found: usize, expected: usize },
    ZeroRow { row: usize },
    ZeroCol { col: usize },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Dimensions { detail } => write!(f, "dimensions: {detail}"),
            Failure::RowCount { row, found, expected } => {
                write!(f, "a2: row {row} has {found} filled cells, expected {expected}")
            }
            Failure::ColCount { col, found, expected } => {
                write!(f, "a2: column {col} has {found} filled cells, expected {expected}")
            }
            Failure::Coverage { element, found, expected } => {
                write!(f, "b2: element {element} covered {found} times, expected {expected}")
            }
            Failure::ZeroRow { row } => write!(f, "c2: row {row} sums to 0"),
            Failure::ZeroCol { col } => write!(f, "c2: column {col} sums to 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub row_counts_ok: bool,
    pub col_counts_ok: bool,
    pub coverage_ok: bool,
    pub nonzero_sums_ok: bool,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.row_counts_ok && self.col_counts_ok && self.coverage_ok && self.nonzero_sums_ok
    }
}

/// Checks (a₂), (b₂) and (c₂), collecting every violation.
pub fn verify_array(a: &PFArray, j: &Subgroup, p: &Params) -> VerifyReport {
    let g = a.group();
    let mut failures = Vec::new();
    if a.rows() != p.m || a.cols() != p.n || g.order() != p.v || j.order() != p.t {
        failures.push(Failure::Dimensions {
            detail: format!(
                "array {}x{} over order {} with |J|={}, params m={} n={} v={} t={}",
                a.rows(),
                a.cols(),
                g.order(),
                j.order(),
                p.m,
                p.n,
                p.v,
                p.t
            ),
        });
    }
    let mut row_counts_ok = failures.is_empty();
    let mut col_counts_ok = failures.is_empty();
    let mut nonzero_sums_ok = true;
    for i in 1..=a.rows() {
        let row = a.row(i);
        if row.len() != p.h {
            row_counts_ok = false;
            failures.push(Failure::RowCount { row: i, found: row.len(), expected: p.h });
        }
        if !row.is_empty() && line_sum(a, Line::Row(i)) == 0 {
            nonzero_sums_ok = false;
            failures.push(Failure::ZeroRow { row: i });
        }
    }
    for c in 1..=a.cols() {
        let col = a.col(c);
        if col.len() != p.k {
            col_counts_ok = false;
            failures.push(Failure::ColCount { col: c, found: col.len(), expected: p.k });
        }
        if !col.is_empty() && line_sum(a, Line::Col(c)) == 0 {
            nonzero_sums_ok = false;
            failures.push(Failure::ZeroCol { col: c });
        }
    }
    let mut coverage_ok = true;
    for (x, &found) in coverage_multiset(a, j).iter().enumerate() {
        let expected = if j.contains(x) { 0 } else { p.lambda };
        if found != expected {
            coverage_ok = false;
            failures.push(Failure::Coverage { element: x, found, expected });
        }
    }
    VerifyReport { row_counts_ok, col_counts_ok, coverage_ok, nonzero_sums_ok, failures }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Infeasible(String),
    Open,
    FeasibleBy(Construction),
}

/// Necessary conditions, including the ℤ₂ and ℤ₂ʳ single-line refinements.
pub fn necessary_conditions(g: &FiniteGroup, j: &Subgroup, p: &Params) -> Result<(), String> {
    if [p.m, p.n, p.h, p.k, p.lambda, p.t, p.v].contains(&0) {
        return Err("all parameters must be positive".into());
    }
    if g.order() != p.v || j.order() != p.t {
        return Err(format!("group order {} / subgroup order {} do not match v={} t={}", g.order(), j.order(), p.v, p.t));
    }
    if p.h > p.n || p.k > p.m {
        return Err(format!("h={} > n={} or k={} > m={}", p.h, p.n, p.k, p.m));
    }
    if p.n * p.k != p.m * p.h {
        return Err(format!("nk={} differs from mh={}", p.n * p.k, p.m * p.h));
    }
    if !p.v.is_multiple_of(p.t) {
        return Err(format!("t={} does not divide v={}", p.t, p.v));
    }
    if p.v <= p.t || 2 * p.n * p.k != p.lambda * (p.v - p.t) {
        return Err(format!("v={} differs from 2nk/lambda + t", p.v));
    }
    let involution_outside = g.involutions().iter().any(|&x| !j.contains(x));
    if involution_outside && p.lambda % 2 == 1 {
        return Err("G\\J contains an involution but lambda is odd".into());
    }
    if p.v == 2 && (p.h * p.k).is_multiple_of(2) {
        return Err("over Z2 the product hk must be odd".into());
    }
    if g.is_elementary_abelian_2() && (p.m == 1 || p.n == 1) {
        let len = p.m.max(p.n);
        let d = p.v - p.t;
        let odd_multiple = len.is_multiple_of(d) && (len / d) % 2 == 1;
        let ok = (p.t == 2 && odd_multiple) || (p.v == 2 && len % 2 == 1);
        if !ok {
            return Err("a single line over Z2^r needs t=2 and length an odd multiple of v-t (lambda/2 odd), or v=2 and odd length".to_string());
        }
    }
    Ok(())
}

/// Infeasible when a necessary condition fails, `FeasibleBy` when a
/// deterministic or tiling construction covers the tuple, `Open` otherwise.
pub fn feasibility(g: &FiniteGroup, j: &Subgroup, p: &Params) -> Feasibility {
    if let Err(reason) = necessary_conditions(g, j, p) {
        return Feasibility::Infeasible(reason);
    }
    match constructors::route(g, j, p) {
        Some(tag) => Feasibility::FeasibleBy(tag),
        None => Feasibility::Open,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "profile", content = "k", rename_all = "snake_case")]
pub enum DiagonalProfile {
    KDiagonal(usize),
    CyclicallyKDiagonal(usize),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("array is {0}x{1}, not square")]
pub struct NotSquare(pub usize, pub usize);

/// Which diagonals `D_i = {(i,1),(i+1,2),…}` make up the skeleton.
pub fn diagonal_profile(a: &PFArray) -> Result<DiagonalProfile, NotSquare> {
    let n = a.rows();
    if a.cols() != n {
        return Err(NotSquare(a.rows(), a.cols()));
    }
    let mut used = Vec::new();
    for d in 0..n {
        let cells = (0..n).map(|c| Cell::new((d + c) % n + 1, c + 1));
        let filled = cells.clone().filter(|&c| a.is_filled(c)).count();
        match filled {
            0 => {}
            f if f == n => used.push(d),
            _ => return Ok(DiagonalProfile::Other),
        }
    }
    let k = used.len();
    if k == 0 {
        return Ok(DiagonalProfile::Other);
    }
    let cyclic = k == n || (0..n).any(|s| (0..k).all(|i| used.contains(&((s + i) % n))));
    Ok(if cyclic { DiagonalProfile::CyclicallyKDiagonal(k) } else { DiagonalProfile::KDiagonal(k) })
}

/// One filled cell of an [`ArrayDoc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEntry {
    pub r: usize,
    pub c: usize,
    pub v: Elem,
}

/// On-disk array document; cells are listed row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayDoc {
    pub group: String,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub lambda: usize,
    pub subgroup: Vec<Elem>,
    pub cells: Vec<CellEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocError {
    #[error("bad group: {0}")]
    Group(String),
    #[error("subgroup list is not a subgroup")]
    Subgroup,
    #[error("cell ({0},{1}) out of range or repeated")]
    Cell(usize, usize),
    #[error("element {0} out of range")]
    Element(Elem),
    #[error("json: {0}")]
    Json(String),
}

impl ArrayDoc {
    pub fn from_array(a: &PFArray, j: &Subgroup, p: &Params) -> ArrayDoc {
        ArrayDoc {
            group: a.group().spec().to_string(),
            m: a.rows(),
            n: a.cols(),
            h: Some(p.h),
            k: Some(p.k),
            lambda: p.lambda,
            subgroup: j.elements().to_vec(),
            cells: a.entries().map(|(c, v)| CellEntry { r: c.row, c: c.col, v }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<ArrayDoc, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))
    }

    /// Rebuilds the array; `h` and `k` default to the fill of row 1 and
    /// column 1.
    pub fn load(&self) -> Result<(PFArray, Subgroup, Params), DocError> {
        let spec = GroupSpec::parse(&self.group).map_err(|e| DocError::Group(e.to_string()))?;
        let g = Arc::new(build_group(&spec).map_err(|e| DocError::Group(e.to_string()))?);
        let j = Subgroup::from_elements(&g, &self.subgroup).ok_or(DocError::Subgroup)?;
        let mut a = PFArray::new(g.clone(), self.m, self.n);
        for e in &self.cells {
            if e.r == 0 || e.r > self.m || e.c == 0 || e.c > self.n || a.is_filled(Cell::new(e.r, e.c)) {
                return Err(DocError::Cell(e.r, e.c));
            }
            if e.v >= g.order() {
                return Err(DocError::Element(e.v));
            }
            a.set(Cell::new(e.r, e.c), e.v);
        }
        let h = self.h.unwrap_or_else(|| if self.m > 0 { a.row(1).len() } else { 0 });
        let k = self.k.unwrap_or_else(|| if self.n > 0 { a.col(1).len() } else { 0 });
        let p = Params { m: self.m, n: self.n, h, k, lambda: self.lambda, t: j.order(), v: g.order() };
        Ok((a, j, p))
    }
}

/// The grid as CSV with blank empty cells.
pub fn grid_csv(a: &PFArray) -> String {
    let mut out = String::new();
    for i in 1..=a.rows() {
        let row: Vec<String> = (1..=a.cols())
            .map(|j| a.get(Cell::new(i, j)).map(|x| x.to_string()).unwrap_or_default())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, s3, GroupSpec};

    fn arr(spec: GroupSpec, rows: &[&[i64]]) -> PFArray {
        let g = Arc::new(build_group(&spec).unwrap());
        let v = g.order() as i64;
        let mut a = PFArray::new(g, rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                if x != i64::MIN {
                    a.set(Cell::new(i + 1, j + 1), x.rem_euclid(v) as Elem);
                }
            }
        }
        a
    }

    const E: i64 = i64::MIN;

    #[test]
    fn row_sum_in_z3() {
        let a = arr(GroupSpec::Cyclic(3), &[&[1, -1, -1]]);
        assert_eq!(line_sum(&a, Line::Row(1)), 2);
        let b = arr(GroupSpec::Cyclic(3), &[&[E, E, E]]);
        assert_eq!(line_sum(&b, Line::Row(1)), 0);
    }

    #[test]
    fn row_sum_order_matters_in_s3() {
        let a = arr(s3(), &[&[1, 4]]);
        let b = arr(s3(), &[&[4, 1]]);
        assert_ne!(line_sum(&a, Line::Row(1)), line_sum(&b, Line::Row(1)));
    }

    #[test]
    fn single_cell_coverage() {
        let a = arr(GroupSpec::Cyclic(7), &[&[3]]);
        let g = a.group().clone();
        let cov = coverage_multiset(&a, &Subgroup::trivial(&g));
        assert_eq!(cov, vec![0, 0, 0, 1, 1, 0, 0]);
    }

    #[test]
    fn empty_grid_fails_counts() {
        let a = arr(GroupSpec::Cyclic(19), &[&[E, E, E], &[E, E, E], &[E, E, E]]);
        let g = a.group().clone();
        let p = Params { m: 3, n: 3, h: 3, k: 3, lambda: 1, t: 1, v: 19 };
        let rep = verify_array(&a, &Subgroup::trivial(&g), &p);
        assert!(!rep.row_counts_ok && !rep.col_counts_ok);
        assert!(rep.nonzero_sums_ok);
    }

    #[test]
    fn profiles() {
        let g = Arc::new(build_group(&GroupSpec::Cyclic(31)).unwrap());
        let mut full = PFArray::new(g.clone(), 3, 3);
        for i in 1..=3 {
            for j in 1..=3 {
                full.set(Cell::new(i, j), 1);
            }
        }
        assert_eq!(diagonal_profile(&full), Ok(DiagonalProfile::CyclicallyKDiagonal(3)));
        let mut two = PFArray::new(g.clone(), 5, 5);
        let mut skip = PFArray::new(g.clone(), 5, 5);
        for c in 0..5 {
            two.set(Cell::new(c + 1, c + 1), 1);
            two.set(Cell::new((c + 1) % 5 + 1, c + 1), 1);
            skip.set(Cell::new(c + 1, c + 1), 1);
            skip.set(Cell::new((c + 2) % 5 + 1, c + 1), 1);
        }
        assert_eq!(diagonal_profile(&two), Ok(DiagonalProfile::CyclicallyKDiagonal(2)));
        assert_eq!(diagonal_profile(&skip), Ok(DiagonalProfile::KDiagonal(2)));
        assert!(diagonal_profile(&PFArray::new(g, 2, 3)).is_err());
    }
}
