//! Reference arithmetic and brute-force search shared by the integration
//! tests. Nothing here calls the library's group tables or verifier.

#![allow(dead_code)]

use heffter::{Cell, PFArray};

/// Groups rebuilt from their presentations, using the same element indices
/// as the library's encodings.
#[derive(Clone, Debug)]
pub enum RefGroup {
    /// Mixed radix, first factor most significant.
    Moduli(Vec<usize>),
    /// `rⁱ` at `i`, `s rⁱ` at `n + i`.
    Dihedral(usize),
    /// `2u + sign` with units `1, i, j, k`.
    Quaternion,
}

impl RefGroup {
    pub fn order(&self) -> usize {
        match self {
            RefGroup::Moduli(ms) => ms.iter().product(),
            RefGroup::Dihedral(n) => 2 * n,
            RefGroup::Quaternion => 8,
        }
    }

    fn digits(ms: &[usize], mut x: usize) -> Vec<usize> {
        let mut d = vec![0; ms.len()];
        for i in (0..ms.len()).rev() {
            d[i] = x % ms[i];
            x /= ms[i];
        }
        d
    }

    fn undigits(ms: &[usize], d: &[usize]) -> usize {
        ms.iter().zip(d).fold(0, |acc, (&m, &x)| acc * m + x)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        match self {
            RefGroup::Moduli(ms) => {
                let (a, b) = (Self::digits(ms, x), Self::digits(ms, y));
                let s: Vec<usize> = (0..ms.len()).map(|i| (a[i] + b[i]) % ms[i]).collect();
                Self::undigits(ms, &s)
            }
            RefGroup::Dihedral(n) => {
                // r^a r^b = r^(a+b), r^a s r^b = s r^(b-a), s r^a r^b = s r^(a+b), s r^a s r^b = r^(b-a)
                let n = *n;
                let (fx, a) = (x >= n, x % n);
                let (fy, b) = (y >= n, y % n);
                let rot = if fy { (b + n - a) % n } else { (a + b) % n };
                if fx ^ fy {
                    n + rot
                } else {
                    rot
                }
            }
            RefGroup::Quaternion => {
                // ij = k, jk = i, ki = j and the squares are −1.
                let (u, w) = (x / 2, y / 2);
                let (unit, minus) = match (u, w) {
                    (0, w) => (w, false),
                    (u, 0) => (u, false),
                    (u, w) if u == w => (0, true),
                    (u, w) => {
                        let third = 6 - u - w;
                        let cyclic = matches!((u, w), (1, 2) | (2, 3) | (3, 1));
                        (third, !cyclic)
                    }
                };
                2 * unit + usize::from(minus ^ (x % 2 == 1) ^ (y % 2 == 1))
            }
        }
    }

    pub fn neg(&self, x: usize) -> usize {
        (0..self.order()).find(|&y| self.add(x, y) == 0).unwrap()
    }

    pub fn sum(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = vec![0usize];
        let mut frontier = gens.to_vec();
        while let Some(x) = frontier.pop() {
            if set.contains(&x) {
                continue;
            }
            set.push(x);
            for y in set.clone() {
                frontier.push(self.add(x, y));
                frontier.push(self.add(y, x));
            }
        }
        set.sort();
        set
    }

    /// All subgroups of order `t`, grown one generator at a time from the
    /// trivial subgroup until nothing new appears.
    pub fn subgroups_of_order(&self, t: usize) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = vec![vec![0]];
        let mut next = 0;
        while next < all.len() {
            let base = all[next].clone();
            next += 1;
            for x in 0..self.order() {
                if base.contains(&x) {
                    continue;
                }
                let mut gens = base.clone();
                gens.push(x);
                let s = self.closure(&gens);
                if !all.contains(&s) {
                    all.push(s);
                }
            }
        }
        all.into_iter().filter(|s| s.len() == t).collect()
    }
}

/// Checks (a₂), (b₂) and (c₂) on a plain grid.
pub fn ref_check(
    g: &RefGroup,
    j: &[usize],
    grid: &[Vec<Option<usize>>],
    h: usize,
    k: usize,
    lambda: usize,
) -> Result<(), String> {
    let m = grid.len();
    let n = grid.first().map_or(0, Vec::len);
    for (i, row) in grid.iter().enumerate() {
        let filled: Vec<usize> = row.iter().flatten().copied().collect();
        if filled.len() != h {
            return Err(format!("row {i} has {} cells", filled.len()));
        }
        if g.sum(filled) == 0 {
            return Err(format!("row {i} sums to zero"));
        }
    }
    for c in 0..n {
        let filled: Vec<usize> = (0..m).filter_map(|i| grid[i][c]).collect();
        if filled.len() != k {
            return Err(format!("column {c} has {} cells", filled.len()));
        }
        if g.sum(filled) == 0 {
            return Err(format!("column {c} sums to zero"));
        }
    }
    let mut occ = vec![0usize; g.order()];
    for x in grid.iter().flatten().flatten() {
        occ[*x] += 1;
    }
    for x in 0..g.order() {
        let cover = occ[x] + occ[g.neg(x)];
        let want = if j.contains(&x) { 0 } else { lambda };
        if cover != want {
            return Err(format!("element {x} covered {cover} times, want {want}"));
        }
    }
    Ok(())
}

pub fn grid_of(a: &PFArray) -> Vec<Vec<Option<usize>>> {
    (1..=a.rows()).map(|i| (1..=a.cols()).map(|j| a.get(Cell::new(i, j))).collect()).collect()
}

/// Every `m × n` 0/1 pattern with `h` ones per row and `k` per column.
pub fn all_skeletons(m: usize, n: usize, h: usize, k: usize) -> Vec<Vec<Vec<bool>>> {
    fn rec(
        i: usize,
        m: usize,
        n: usize,
        h: usize,
        k: usize,
        cols: &mut Vec<usize>,
        rows: &mut Vec<Vec<bool>>,
        out: &mut Vec<Vec<Vec<bool>>>,
    ) {
        if i == m {
            if cols.iter().all(|&c| c == k) {
                out.push(rows.clone());
            }
            return;
        }
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != h {
                continue;
            }
            let row: Vec<bool> = (0..n).map(|c| mask >> c & 1 == 1).collect();
            if row.iter().enumerate().any(|(c, &b)| b && cols[c] == k) {
                continue;
            }
            for (c, &b) in row.iter().enumerate() {
                cols[c] += b as usize;
            }
            rows.push(row);
            rec(i + 1, m, n, h, k, cols, rows, out);
            let row = rows.pop().unwrap();
            for (c, &b) in row.iter().enumerate() {
                cols[c] -= b as usize;
            }
        }
    }
    let mut out = Vec::new();
    if m * h != n * k {
        return out;
    }
    rec(0, m, n, h, k, &mut vec![0; n], &mut Vec::new(), &mut out);
    out
}

/// Exhaustive search over every skeleton and filling.
pub fn exists_by_enumeration(
    g: &RefGroup,
    j: &[usize],
    m: usize,
    n: usize,
    h: usize,
    k: usize,
    lambda: usize,
) -> bool {
    let v = g.order();
    let pool: Vec<usize> = (0..v).filter(|x| !j.contains(x)).collect();
    if pool.is_empty() || lambda * pool.len() != 2 * n * k {
        return false;
    }
    let neg: Vec<usize> = (0..v).map(|x| g.neg(x)).collect();
    for skel in all_skeletons(m, n, h, k) {
        let cells: Vec<(usize, usize)> =
            (0..m).flat_map(|i| (0..n).map(move |c| (i, c))).filter(|&(i, c)| skel[i][c]).collect();
        let mut grid = vec![vec![None; n]; m];
        let mut cover = vec![0usize; v];
        if fill(g, &pool, &neg, &cells, 0, &mut grid, &mut cover, lambda, h, k) {
            return true;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn fill(
    g: &RefGroup,
    pool: &[usize],
    neg: &[usize],
    cells: &[(usize, usize)],
    idx: usize,
    grid: &mut Vec<Vec<Option<usize>>>,
    cover: &mut Vec<usize>,
    lambda: usize,
    h: usize,
    k: usize,
) -> bool {
    if idx == cells.len() {
        return pool.iter().all(|&x| cover[x] == lambda);
    }
    let (i, c) = cells[idx];
    for &x in pool {
        let bump = if neg[x] == x { 2 } else { 1 };
        if cover[x] + bump > lambda {
            continue;
        }
        grid[i][c] = Some(x);
        cover[x] += bump;
        if neg[x] != x {
            cover[neg[x]] += 1;
        }
        let row: Vec<usize> = grid[i].iter().flatten().copied().collect();
        let col: Vec<usize> = grid.iter().filter_map(|r| r[c]).collect();
        let ok = (row.len() < h || g.sum(row) != 0) && (col.len() < k || g.sum(col) != 0);
        if ok && fill(g, pool, neg, cells, idx + 1, grid, cover, lambda, h, k) {
            return true;
        }
        cover[x] -= bump;
        if neg[x] != x {
            cover[neg[x]] -= 1;
        }
        grid[i][c] = None;
    }
    false
}

/// Groups of order at most 5 with their library specs.
pub fn small_groups() -> Vec<(&'static str, RefGroup)> {
    vec![
        ("z:2", RefGroup::Moduli(vec![2])),
        ("z:3", RefGroup::Moduli(vec![3])),
        ("z:4", RefGroup::Moduli(vec![4])),
        ("e2:2", RefGroup::Moduli(vec![2, 2])),
        ("z:5", RefGroup::Moduli(vec![5])),
    ]
}

/// Rows of `grid`, for comparison against reference grids.
pub fn parse_grid(text: &str) -> Vec<Vec<Option<i64>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(|t| if t == "." { None } else { Some(t.parse().unwrap()) }).collect())
        .collect()
}
