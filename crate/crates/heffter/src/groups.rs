//! Finite groups in additive notation, backed by a full addition table.
//!
//! Every group is stored as a `v × v` table of element indices with the
//! identity at index 0. Non-abelian groups still write their operation as
//! `+`, so `add(x, y)` and `add(y, x)` may differ.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Index of a group element; 0 is the identity.
pub type Elem = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid Cayley table: {0}")]
    CayleyInvalid(String),
    #[error("no subgroup of order {0}")]
    NoSubgroup(usize),
    #[error("cannot parse group spec `{0}`")]
    Parse(String),
    #[error("bad group order: {0}")]
    BadOrder(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Vec<usize>),
    Elementary2(usize),
    Cayley(Vec<Vec<usize>>),
}

impl GroupSpec {
    /// Parses `z:7`, `prod:3x2x2`, `e2:4`, `cayley:<path>` or the inline
    /// form `table:0,1;1,0`.
    pub fn parse(text: &str) -> Result<GroupSpec, GroupError> {
        let bad = || GroupError::Parse(text.to_string());
        let (kind, rest) = text.trim().split_once(':').ok_or_else(bad)?;
        match kind {
            "z" => Ok(GroupSpec::Cyclic(rest.parse().map_err(|_| bad())?)),
            "e2" => Ok(GroupSpec::Elementary2(rest.parse().map_err(|_| bad())?)),
            "prod" => {
                let orders = rest
                    .split('x')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                Ok(GroupSpec::Product(orders))
            }
            "cayley" => {
                let body = std::fs::read_to_string(Path::new(rest)).map_err(|_| bad())?;
                let rows = body
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| l.split_whitespace().map(str::parse).collect())
                    .collect::<Result<Vec<Vec<usize>>, _>>()
                    .map_err(|_| bad())?;
                Ok(GroupSpec::Cayley(rows))
            }
            "table" => {
                let rows = rest
                    .split(';')
                    .map(|r| r.split(',').map(|e| e.trim().parse()).collect())
                    .collect::<Result<Vec<Vec<usize>>, _>>()
                    .map_err(|_| bad())?;
                Ok(GroupSpec::Cayley(rows))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(v) => write!(f, "z:{v}"),
            GroupSpec::Elementary2(r) => write!(f, "e2:{r}"),
            GroupSpec::Product(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "prod:{}", parts.join("x"))
            }
            GroupSpec::Cayley(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "table:{}", rows.join(";"))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    spec: GroupSpec,
    v: usize,
    table: Vec<u32>,
    inv: Vec<Elem>,
    abelian: bool,
    involutions: Vec<Elem>,
    /// Coordinate moduli for cyclic and product groups.
    moduli: Option<Vec<usize>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    match spec {
        GroupSpec::Cyclic(v) => {
            if *v == 0 {
                return Err(GroupError::BadOrder("z:0".into()));
            }
            Ok(from_moduli(spec.clone(), vec![*v]))
        }
        GroupSpec::Product(ns) => {
            if ns.is_empty() || ns.iter().any(|&n| n < 2) {
                return Err(GroupError::BadOrder(format!("{spec}")));
            }
            Ok(from_moduli(spec.clone(), ns.clone()))
        }
        GroupSpec::Elementary2(r) => {
            if *r == 0 {
                return Err(GroupError::BadOrder("e2:0".into()));
            }
            Ok(from_moduli(spec.clone(), vec![2; *r]))
        }
        GroupSpec::Cayley(rows) => from_table(spec.clone(), rows),
    }
}

fn from_moduli(spec: GroupSpec, moduli: Vec<usize>) -> FiniteGroup {
    let v: usize = moduli.iter().product();
    let digits = |mut x: usize| {
        let mut d = vec![0; moduli.len()];
        for (i, &n) in moduli.iter().enumerate().rev() {
            d[i] = x % n;
            x /= n;
        }
        d
    };
    let coords: Vec<Vec<usize>> = (0..v).map(digits).collect();
    let mut table = vec![0u32; v * v];
    for x in 0..v {
        for y in 0..v {
            let mut idx = 0;
            for (i, &n) in moduli.iter().enumerate() {
                idx = idx * n + (coords[x][i] + coords[y][i]) % n;
            }
            table[x * v + y] = idx as u32;
        }
    }
    finish(spec, v, table, Some(moduli))
}

fn from_table(spec: GroupSpec, rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let v = rows.len();
    let invalid = |s: String| Err(GroupError::CayleyInvalid(s));
    if v == 0 {
        return invalid("empty table".into());
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != v {
            return invalid(format!("row {i} has {} entries, expected {v}", r.len()));
        }
        let mut seen = vec![false; v];
        for &e in r {
            if e >= v || seen[e] {
                return invalid(format!("row {i} is not a permutation of 0..{v}"));
            }
            seen[e] = true;
        }
    }
    for c in 0..v {
        let mut seen = vec![false; v];
        for r in rows {
            if seen[r[c]] {
                return invalid(format!("column {c} repeats an element"));
            }
            seen[r[c]] = true;
        }
    }
    for x in 0..v {
        if rows[0][x] != x || rows[x][0] != x {
            return invalid("index 0 is not a two-sided identity".into());
        }
    }
    let at = |x: usize, y: usize| rows[x][y];
    let assoc = |x: usize, y: usize, z: usize| at(at(x, y), z) == at(x, at(y, z));
    if v <= 64 {
        for x in 0..v {
            for y in 0..v {
                for z in 0..v {
                    if !assoc(x, y, z) {
                        return invalid(format!("not associative at ({x},{y},{z})"));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..100_000 {
            let (x, y, z) = (rng.gen_range(0..v), rng.gen_range(0..v), rng.gen_range(0..v));
            if !assoc(x, y, z) {
                return invalid(format!("not associative at ({x},{y},{z})"));
            }
        }
    }
    // Latin rows plus a two-sided identity already force two-sided inverses
    // once associativity holds; check anyway so the error names the culprit.
    for x in 0..v {
        let y = (0..v).find(|&y| at(x, y) == 0).expect("latin row");
        if at(y, x) != 0 {
            return invalid(format!("element {x} has no two-sided inverse"));
        }
    }
    let table = rows.iter().flatten().map(|&e| e as u32).collect();
    Ok(finish(spec, v, table, None))
}

fn finish(spec: GroupSpec, v: usize, table: Vec<u32>, moduli: Option<Vec<usize>>) -> FiniteGroup {
    let inv: Vec<Elem> = (0..v)
        .map(|x| (0..v).find(|&y| table[x * v + y] == 0).expect("inverse"))
        .collect();
    let abelian = (0..v).all(|x| (x..v).all(|y| table[x * v + y] == table[y * v + x]));
    let involutions = (1..v).filter(|&x| inv[x] == x).collect();
    FiniteGroup { spec, v, table, inv, abelian, involutions, moduli }
}

impl FiniteGroup {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Group order `v`.
    pub fn order(&self) -> usize {
        self.v
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn involutions(&self) -> &[Elem] {
        &self.involutions
    }

    pub fn is_involution(&self, x: Elem) -> bool {
        x != 0 && self.inv[x] == x
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.table[x * self.v + y] as Elem
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.inv[x]
    }

    /// `x - y`, i.e. `x + (-y)`.
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.inv[y])
    }

    /// Left-to-right ordered sum.
    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut acc = x;
        let mut d = 1;
        while acc != 0 {
            acc = self.add(acc, x);
            d += 1;
        }
        d
    }

    /// True for ℤ₂ʳ (every non-identity element is an involution).
    pub fn is_elementary_abelian_2(&self) -> bool {
        self.v > 1 && self.involutions.len() == self.v - 1
    }

    pub fn is_cyclic_spec(&self) -> bool {
        matches!(self.spec, GroupSpec::Cyclic(_))
            || matches!(&self.moduli, Some(m) if m.len() == 1)
    }

    /// All element indices in order.
    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.v
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut member = vec![false; self.v];
        member[0] = true;
        let mut elems = vec![0];
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<Elem>,
    member: Vec<bool>,
}

impl Subgroup {
    /// Wraps a sorted element list after checking closure.
    pub fn from_elements(g: &FiniteGroup, elems: &[Elem]) -> Option<Subgroup> {
        let mut member = vec![false; g.order()];
        for &e in elems {
            if e >= g.order() {
                return None;
            }
            member[e] = true;
        }
        if !member[0] {
            return None;
        }
        for &x in elems {
            if !member[g.neg(x)] || elems.iter().any(|&y| !member[g.add(x, y)]) {
                return None;
            }
        }
        let mut elements: Vec<Elem> = elems.to_vec();
        elements.sort_unstable();
        elements.dedup();
        Some(Subgroup { elements, member })
    }

    pub fn trivial(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_elements(g, &[0]).expect("trivial subgroup")
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    /// Order `t`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.member[x]
    }

    /// `G \ J` in index order.
    pub fn complement(&self) -> Vec<Elem> {
        (0..self.member.len()).filter(|&x| !self.member[x]).collect()
    }
}

pub fn subgroup_of_order(g: &FiniteGroup, t: usize) -> Result<Subgroup, GroupError> {
    let v = g.order();
    if t == 0 || !v.is_multiple_of(t) {
        return Err(GroupError::NoSubgroup(t));
    }
    let wrap = |elems: Vec<Elem>| Ok(Subgroup::from_elements(g, &elems).expect("closed"));
    if t == 1 {
        return wrap(vec![0]);
    }
    if t == v {
        return wrap((0..v).collect());
    }
    if g.is_cyclic_spec() {
        return wrap((0..t).map(|i| i * (v / t)).collect());
    }
    let mut best: Option<Vec<Elem>> = None;
    for a in 1..v {
        for b in a..v {
            let s = g.closure(&[a, b]);
            if s.len() == t && best.as_ref().is_none_or(|cur| s < *cur) {
                best = Some(s);
            }
        }
    }
    if let Some(s) = best {
        return wrap(s);
    }
    // Subgroups needing three or more generators: grow chains of subgroups
    // whose orders divide t.
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut stack = vec![vec![0usize]];
    while let Some(s) = stack.pop() {
        if s.len() == t {
            found.insert(s);
            continue;
        }
        for x in 1..v {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = s.clone();
            gens.push(x);
            let next = g.closure(&gens);
            if t.is_multiple_of(next.len()) && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    match found.into_iter().next() {
        Some(s) => wrap(s),
        None => Err(GroupError::NoSubgroup(t)),
    }
}

/// Left cosets `x + J`, ordered by least representative; part 0 is `J`.
pub fn coset_partition(g: &FiniteGroup, j: &Subgroup) -> Vec<Vec<Elem>> {
    let mut part_of = vec![usize::MAX; g.order()];
    let mut parts = Vec::new();
    for x in g.elements() {
        if part_of[x] != usize::MAX {
            continue;
        }
        let mut coset: Vec<Elem> = j.elements().iter().map(|&e| g.add(x, e)).collect();
        coset.sort_unstable();
        for &y in &coset {
            part_of[y] = parts.len();
        }
        parts.push(coset);
    }
    parts
}

pub fn element_order(g: &FiniteGroup, x: Elem) -> usize {
    g.element_order(x)
}

/// First `(x, y)` in index order with `x, y ∉ J`, `y ∉ {x, -x}` and
/// `x + y ≠ y + x`.
pub fn find_noncommuting_pair(g: &FiniteGroup, j: &Subgroup) -> Option<(Elem, Elem)> {
    if g.is_abelian() {
        return None;
    }
    let outside = j.complement();
    for &x in &outside {
        for &y in &outside {
            if y != x && y != g.neg(x) && g.add(x, y) != g.add(y, x) {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn find_noninvolution(g: &FiniteGroup, j: &Subgroup) -> Option<Elem> {
    j.complement().into_iter().find(|&x| g.neg(x) != x)
}

/// S₃ with elements ordered id, (01), (02), (12), (012), (021).
pub fn s3() -> GroupSpec {
    let perms: [[usize; 3]; 6] =
        [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    permutation_table(&perms)
}

fn permutation_table<const N: usize>(perms: &[[usize; N]]) -> GroupSpec {
    let index = |p: [usize; N]| perms.iter().position(|q| *q == p).expect("closed");
    let rows = perms
        .iter()
        .map(|x| {
            perms
                .iter()
                .map(|y| {
                    let mut p = [0; N];
                    for i in 0..N {
                        p[i] = x[y[i]];
                    }
                    index(p)
                })
                .collect()
        })
        .collect();
    GroupSpec::Cayley(rows)
}

/// Dihedral group of order `2n`: `rⁱ` at index `i`, `s rⁱ` at `n + i`.
pub fn dihedral(n: usize) -> GroupSpec {
    let v = 2 * n;
    let rows = (0..v)
        .map(|x| {
            (0..v)
                .map(|y| {
                    let (sx, a) = (x >= n, x % n);
                    let (sy, b) = (y >= n, y % n);
                    match (sx, sy) {
                        (false, false) => (a + b) % n,
                        (false, true) => n + (b + n - a) % n,
                        (true, false) => n + (a + b) % n,
                        (true, true) => (b + n - a) % n,
                    }
                })
                .collect()
        })
        .collect();
    GroupSpec::Cayley(rows)
}

/// Quaternion group ordered 1, −1, i, −i, j, −j, k, −k.
pub fn q8() -> GroupSpec {
    // Unit index 0..4 for 1,i,j,k; sign bit separate.
    const MUL: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let rows = (0..8)
        .map(|x: usize| {
            (0..8)
                .map(|y: usize| {
                    let (u, neg) = MUL[x / 2][y / 2];
                    let neg = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
                    2 * u + neg as usize
                })
                .collect()
        })
        .collect();
    GroupSpec::Cayley(rows)
}
