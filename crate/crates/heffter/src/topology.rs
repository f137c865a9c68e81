//! Crazy Knight's Tour search, compatible orderings, and the face-traced
//! biembedding they induce.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrays::{Cell, PFArray};
use crate::groups::{coset_partition, Subgroup};

/// Default bound on `m + n` for the exhaustive orientation search.
pub const KNIGHT_LIMIT: usize = 30;
/// Random per-line orderings tried when no orientation works.
pub const ORDERING_BUDGET: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("orientation search over m+n={0} lines exceeds the limit {1}")]
    SearchTooLarge(usize, usize),
    #[error("no compatible orderings found")]
    NotFound,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub rows: Vec<i8>,
    pub cols: Vec<i8>,
}

impl Orientation {
    pub fn all_forward(m: usize, n: usize) -> Orientation {
        Orientation { rows: vec![1; m], cols: vec![1; n] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnightSequence {
    /// The cells `(i_ℓ, j_ℓ)` reached after each row-then-column move.
    pub cells: Vec<Cell>,
    /// Every cell touched, including the intermediate `(i_ℓ, j_{ℓ+1})`.
    pub path: Vec<Cell>,
    pub closed: bool,
    pub covers_all: bool,
}

/// Next filled cell of each line in both directions, indexed by cell.
struct Moves {
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    /// `row_next[d][c]`: next in the row, `d = 0` forward, `d = 1` backward.
    row_next: [Vec<usize>; 2],
    col_next: [Vec<usize>; 2],
}

impl Moves {
    fn new(a: &PFArray) -> Moves {
        let cells = a.skeleton();
        let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let len = cells.len();
        let mut row_next = [vec![0; len], vec![0; len]];
        let mut col_next = [vec![0; len], vec![0; len]];
        for i in 1..=a.rows() {
            let line: Vec<usize> = a.row(i).iter().map(|&(j, _)| index[&Cell::new(i, j)]).collect();
            link(&line, &mut row_next);
        }
        for j in 1..=a.cols() {
            let line: Vec<usize> = a.col(j).iter().map(|&(i, _)| index[&Cell::new(i, j)]).collect();
            link(&line, &mut col_next);
        }
        Moves { cells, index, row_next, col_next }
    }

    fn dir(o: i8) -> usize {
        usize::from(o < 0)
    }

    /// Row move then column move; returns (intermediate, landing).
    fn step(&self, o: &Orientation, c: usize) -> (usize, usize) {
        let mid = self.row_next[Moves::dir(o.rows[self.cells[c].row - 1])][c];
        let land = self.col_next[Moves::dir(o.cols[self.cells[mid].col - 1])][mid];
        (mid, land)
    }

    fn orbit_len(&self, o: &Orientation, start: usize) -> usize {
        let mut c = start;
        let mut len = 0;
        loop {
            c = self.step(o, c).1;
            len += 1;
            if c == start || len > self.cells.len() {
                return len;
            }
        }
    }
}

fn link(line: &[usize], next: &mut [Vec<usize>; 2]) {
    let l = line.len();
    for (p, &c) in line.iter().enumerate() {
        next[0][c] = line[(p + 1) % l];
        next[1][c] = line[(p + l - 1) % l];
    }
}

pub fn knight_sequence(a: &PFArray, o: &Orientation, start: Cell) -> KnightSequence {
    assert!(a.is_filled(start), "start cell {start} is empty");
    let mv = Moves::new(a);
    let s = mv.index[&start];
    let mut cells = vec![start];
    let mut path = vec![start];
    let mut c = s;
    loop {
        let (mid, land) = mv.step(o, c);
        if path.last() != Some(&mv.cells[mid]) && mid != s {
            path.push(mv.cells[mid]);
        }
        if land == s {
            break;
        }
        if path.last() != Some(&mv.cells[land]) {
            path.push(mv.cells[land]);
        }
        cells.push(mv.cells[land]);
        c = land;
    }
    let covers_all = cells.len() == mv.cells.len();
    KnightSequence { cells, path, closed: true, covers_all }
}

/// First orientation (lexicographic, `+1` before `−1`, `r₁ = +1`) whose
/// knight sequence covers every filled cell.
pub fn solve_knight(a: &PFArray) -> Result<Option<Orientation>, TopologyError> {
    solve_knight_with_limit(a, KNIGHT_LIMIT)
}

pub fn solve_knight_with_limit(a: &PFArray, limit: usize) -> Result<Option<Orientation>, TopologyError> {
    let (m, n) = (a.rows(), a.cols());
    if m + n > limit {
        return Err(TopologyError::SearchTooLarge(m + n, limit));
    }
    let mv = Moves::new(a);
    if mv.cells.is_empty() {
        return Ok(None);
    }
    let free = m + n - 1;
    let decode = |mask: u64| {
        let bit = |p: usize| if mask >> (free - 1 - p) & 1 == 1 { -1 } else { 1 };
        let mut rows = vec![1i8];
        rows.extend((0..m - 1).map(bit));
        let cols = (m - 1..free).map(bit).collect();
        Orientation { rows, cols }
    };
    let total = 1u64 << free;
    let hit = (0..total)
        .into_par_iter()
        .find_first(|&mask| mv.orbit_len(&decode(mask), 0) == mv.cells.len());
    Ok(hit.map(decode))
}

/// Per-line cyclic orderings: `omega_r` sends each cell to the next one in
/// its row, `omega_c` to the next in its column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatiblePair {
    pub omega_r: BTreeMap<Cell, Cell>,
    pub omega_c: BTreeMap<Cell, Cell>,
}

impl CompatiblePair {
    pub fn from_orientation(a: &PFArray, o: &Orientation) -> CompatiblePair {
        let mv = Moves::new(a);
        let mut omega_r = BTreeMap::new();
        let mut omega_c = BTreeMap::new();
        for (i, &c) in mv.cells.iter().enumerate() {
            omega_r.insert(c, mv.cells[mv.row_next[Moves::dir(o.rows[c.row - 1])][i]]);
            omega_c.insert(c, mv.cells[mv.col_next[Moves::dir(o.cols[c.col - 1])][i]]);
        }
        CompatiblePair { omega_r, omega_c }
    }

    /// Length of the cycle of `ω_c ∘ ω_r` through the first cell.
    pub fn composition_cycle(&self) -> usize {
        let Some(&start) = self.omega_r.keys().next() else { return 0 };
        let mut c = start;
        let mut len = 0;
        loop {
            c = self.omega_c[&self.omega_r[&c]];
            len += 1;
            if c == start || len > self.omega_r.len() {
                return len;
            }
        }
    }

    /// Each line a single cycle, and the composition one cycle on all cells.
    pub fn is_compatible(&self, a: &PFArray) -> bool {
        let skel: BTreeSet<Cell> = a.skeleton().into_iter().collect();
        let keys_r: BTreeSet<Cell> = self.omega_r.keys().copied().collect();
        let keys_c: BTreeSet<Cell> = self.omega_c.keys().copied().collect();
        if keys_r != skel || keys_c != skel {
            return false;
        }
        let single_cycle = |map: &BTreeMap<Cell, Cell>, same: &dyn Fn(&Cell, &Cell) -> bool| {
            map.iter().all(|(c, d)| same(c, d))
                && map.keys().all(|&c| {
                    let line = map.keys().filter(|d| same(&c, d)).count();
                    let mut x = c;
                    let mut len = 0;
                    loop {
                        x = map[&x];
                        len += 1;
                        if x == c || len > line {
                            return len == line;
                        }
                    }
                })
        };
        single_cycle(&self.omega_r, &|c, d| c.row == d.row)
            && single_cycle(&self.omega_c, &|c, d| c.col == d.col)
            && self.composition_cycle() == skel.len()
    }
}

/// From a knight solution when one exists within the search limit,
/// otherwise by seeded random per-line cyclic orderings.
pub fn compatible_orderings(a: &PFArray, seed: u64) -> Result<CompatiblePair, TopologyError> {
    if let Ok(Some(o)) = solve_knight(a) {
        let pair = CompatiblePair::from_orientation(a, &o);
        if pair.is_compatible(a) {
            return Ok(pair);
        }
    }
    let mv = Moves::new(a);
    let len = mv.cells.len();
    if len == 0 {
        return Err(TopologyError::NotFound);
    }
    let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in mv.cells.iter().enumerate() {
        rows.entry(c.row).or_default().push(i);
        cols.entry(c.col).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next_r = vec![0; len];
    let mut next_c = vec![0; len];
    let shuffle_lines = |lines: &mut BTreeMap<usize, Vec<usize>>, next: &mut [usize], rng: &mut ChaCha8Rng| {
        for l in lines.values_mut() {
            l.shuffle(rng);
            for p in 0..l.len() {
                next[l[p]] = l[(p + 1) % l.len()];
            }
        }
    };
    for _ in 0..ORDERING_BUDGET {
        shuffle_lines(&mut rows, &mut next_r, &mut rng);
        shuffle_lines(&mut cols, &mut next_c, &mut rng);
        let mut c = 0;
        let mut cycle = 0;
        loop {
            c = next_c[next_r[c]];
            cycle += 1;
            if c == 0 {
                break;
            }
        }
        if cycle == len {
            let to_map = |next: &[usize]| (0..len).map(|i| (mv.cells[i], mv.cells[next[i]])).collect();
            return Ok(CompatiblePair { omega_r: to_map(&next_r), omega_c: to_map(&next_c) });
        }
    }
    Err(TopologyError::NotFound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub vertices: usize,
    /// `(from, to, copy)`; the copy id is the index of the array cell whose
    /// entry labels the edge.
    pub directed_edges: Vec<(usize, usize, usize)>,
    pub row_faces: Vec<Vec<usize>>,
    pub col_faces: Vec<Vec<usize>>,
    pub genus: usize,
    pub parts: usize,
    pub part_size: usize,
}

impl Embedding {
    pub fn edges(&self) -> usize {
        self.directed_edges.len() / 2
    }

    pub fn faces(&self) -> usize {
        self.row_faces.len() + self.col_faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges() as i64 + self.faces() as i64
    }
}

/// A dart is `(cell index, tail)`: the edge `tail → tail + a_cell`.
type Dart = (usize, usize);

/// Traces row faces along `ω_r` and column faces along `ω_c` with edges
/// reversed, then checks every embedding invariant.
pub fn build_biembedding(
    a: &PFArray,
    j: &Subgroup,
    lambda: usize,
    pair: &CompatiblePair,
) -> Result<Embedding, TopologyError> {
    let g = a.group();
    let bad = |s: String| Err(TopologyError::InvariantViolation(s));
    if !g.is_abelian() {
        return bad("face tracing needs an abelian group".into());
    }
    if !pair.is_compatible(a) {
        return bad("orderings are not compatible".into());
    }
    let cells = a.skeleton();
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let val: Vec<usize> = cells.iter().map(|c| a.get(*c).unwrap()).collect();
    let next_r: Vec<usize> = cells.iter().map(|c| index[&pair.omega_r[c]]).collect();
    let next_c: Vec<usize> = cells.iter().map(|c| index[&pair.omega_c[c]]).collect();
    let v = g.order();
    let nd = cells.len() * v;

    // Row walk: dart (c, x) is followed by (ω_r c, x + a_c).
    let row_succ = |(c, x): Dart| (next_r[c], g.add(x, val[c]));
    // Column walk runs x → x − b along the dart (d, x − b); the next dart
    // uses ω_c d from the new vertex.
    let col_succ = |(d, tail): Dart| {
        let e = next_c[d];
        (e, g.sub(tail, val[e]))
    };
    let trace = |succ: &dyn Fn(Dart) -> Dart, reversed: bool| -> Result<Vec<(usize, Vec<usize>)>, String> {
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for c in 0..cells.len() {
            for x in 0..v {
                if seen[c * v + x] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = (c, x);
                loop {
                    if seen[d.0 * v + d.1] {
                        return Err(format!("dart {d:?} lies on two faces"));
                    }
                    seen[d.0 * v + d.1] = true;
                    face.push(if reversed { g.add(d.1, val[d.0]) } else { d.1 });
                    d = succ(d);
                    if d == (c, x) {
                        break;
                    }
                }
                faces.push((c, face));
            }
        }
        Ok(faces)
    };
    let row_traced = trace(&row_succ, false).map_err(TopologyError::InvariantViolation)?;
    // Column faces record head vertices: the walk runs against the darts.
    let col_traced = trace(&col_succ, true).map_err(TopologyError::InvariantViolation)?;
    for (c, f) in &row_traced {
        let h = a.row(cells[*c].row).len();
        if f.len() % h != 0 || f.len() <= h {
            return bad(format!("row {} face of length {} (h={h})", cells[*c].row, f.len()));
        }
    }
    for (c, f) in &col_traced {
        let k = a.col(cells[*c].col).len();
        if f.len() % k != 0 || f.len() <= k {
            return bad(format!("column {} face of length {} (k={k})", cells[*c].col, f.len()));
        }
    }
    let row_faces: Vec<Vec<usize>> = row_traced.into_iter().map(|(_, f)| f).collect();
    let col_faces: Vec<Vec<usize>> = col_traced.into_iter().map(|(_, f)| f).collect();

    let mut directed_edges = Vec::with_capacity(2 * nd);
    for c in 0..cells.len() {
        for x in 0..v {
            directed_edges.push((x, g.add(x, val[c]), c));
        }
    }
    for c in 0..cells.len() {
        for x in 0..v {
            directed_edges.push((g.add(x, val[c]), x, c));
        }
    }

    // λ copies of every cross-coset pair, none inside a coset.
    let parts = coset_partition(g, j);
    let mut part_of = vec![0; v];
    for (p, coset) in parts.iter().enumerate() {
        for &x in coset {
            part_of[x] = p;
        }
    }
    let mut mult: HashMap<(usize, usize), usize> = HashMap::new();
    for c in 0..cells.len() {
        for x in 0..v {
            let y = g.add(x, val[c]);
            *mult.entry((x.min(y), x.max(y))).or_default() += 1;
        }
    }
    for x in 0..v {
        for y in x + 1..v {
            let want = if part_of[x] == part_of[y] { 0 } else { lambda };
            let got = mult.get(&(x, y)).copied().unwrap_or(0);
            if got != want {
                return bad(format!("vertices {x},{y} joined by {got} edges, expected {want}"));
            }
        }
    }
    if mult.keys().any(|&(x, y)| x == y) {
        return bad("loop edge".into());
    }

    // Rotation at every vertex: head-ends of cells cycle under ω_c ∘ ω_r.
    let rot_len = {
        let mut c = 0;
        let mut len = 0;
        loop {
            c = next_c[next_r[c]];
            len += 1;
            if c == 0 {
                break len;
            }
        }
    };
    if rot_len != cells.len() {
        return bad(format!("vertex rotation splits into cycles (first has length {rot_len})"));
    }
    if !connected(v, &directed_edges) {
        return bad("underlying graph is disconnected".into());
    }

    let emb_faces = row_faces.len() + col_faces.len();
    let chi = v as i64 - nd as i64 + emb_faces as i64;
    if chi > 2 || chi % 2 != 0 {
        return bad(format!("Euler characteristic {chi} is not 2-2g"));
    }
    Ok(Embedding {
        vertices: v,
        directed_edges,
        row_faces,
        col_faces,
        genus: ((2 - chi) / 2) as usize,
        parts: parts.len(),
        part_size: j.order(),
    })
}

/// Every face length is a proper multiple of some line size of its colour.
fn check_lengths(a: &PFArray, row_faces: &[Vec<usize>], col_faces: &[Vec<usize>]) -> Result<(), TopologyError> {
    let hs: BTreeSet<usize> = (1..=a.rows()).map(|i| a.row(i).len()).collect();
    let ks: BTreeSet<usize> = (1..=a.cols()).map(|j| a.col(j).len()).collect();
    let ok = |len: usize, sizes: &BTreeSet<usize>| sizes.iter().any(|&s| len.is_multiple_of(s) && len > s);
    if let Some(f) = row_faces.iter().find(|f| !ok(f.len(), &hs)) {
        return Err(TopologyError::InvariantViolation(format!("row face of length {}", f.len())));
    }
    if let Some(f) = col_faces.iter().find(|f| !ok(f.len(), &ks)) {
        return Err(TopologyError::InvariantViolation(format!("column face of length {}", f.len())));
    }
    Ok(())
}

fn connected(v: usize, edges: &[(usize, usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for &(x, y, _) in edges {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        parent[rx] = ry;
    }
    let root = find(&mut parent, 0);
    (0..v).all(|x| find(&mut parent, x) == root)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub parts: usize,
    pub part_size: usize,
    pub row_face_lengths: BTreeMap<usize, usize>,
    pub col_face_lengths: BTreeMap<usize, usize>,
    pub lengths_ok: bool,
}

pub fn embedding_report(a: &PFArray, e: &Embedding) -> EmbeddingReport {
    let hist = |faces: &[Vec<usize>]| {
        let mut h = BTreeMap::new();
        for f in faces {
            *h.entry(f.len()).or_insert(0) += 1;
        }
        h
    };
    EmbeddingReport {
        vertices: e.vertices,
        edges: e.edges(),
        faces: e.faces(),
        genus: e.genus,
        parts: e.parts,
        part_size: e.part_size,
        row_face_lengths: hist(&e.row_faces),
        col_face_lengths: hist(&e.col_faces),
        lengths_ok: check_lengths(a, &e.row_faces, &e.col_faces).is_ok(),
    }
}
