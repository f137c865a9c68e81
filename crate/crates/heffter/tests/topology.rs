mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use heffter::topology::{
    build_biembedding, compatible_orderings, embedding_report, knight_sequence, solve_knight,
    solve_knight_with_limit, CompatiblePair, Orientation, TopologyError,
};
use heffter::*;
use proptest::prelude::*;

fn skeleton_array(m: usize, n: usize, cells: &[(usize, usize)]) -> PFArray {
    let g = Arc::new(build_group(&GroupSpec::Cyclic(5)).unwrap());
    let mut a = PFArray::new(g, m, n);
    for &(i, j) in cells {
        a.set(Cell::new(i, j), 1);
    }
    a
}

fn diagonal(n: usize, k: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|c| (0..k).map(move |d| ((c - 1 + d) % n + 1, c))).collect()
}

/// Landing cells of the knight walk, stepping one index at a time.
fn walk(cells: &[(usize, usize)], m: usize, n: usize, o: &Orientation, start: (usize, usize)) -> Vec<(usize, usize)> {
    let filled: BTreeSet<(usize, usize)> = cells.iter().copied().collect();
    let step = |x: usize, d: i8, len: usize| (x as i64 - 1 + d as i64).rem_euclid(len as i64) as usize + 1;
    let mut out = vec![start];
    let (mut i, mut j) = start;
    loop {
        loop {
            j = step(j, o.rows[i - 1], n);
            if filled.contains(&(i, j)) {
                break;
            }
        }
        loop {
            i = step(i, o.cols[j - 1], m);
            if filled.contains(&(i, j)) {
                break;
            }
        }
        if (i, j) == start || out.len() > cells.len() {
            return out;
        }
        out.push((i, j));
    }
}

proptest! {
    #[test]
    fn knight_walk_matches_stepwise_oracle(
        m in 1usize..6,
        n in 1usize..6,
        mask in prop::collection::vec(any::<bool>(), 36),
        signs in prop::collection::vec(any::<bool>(), 12),
    ) {
        let cells: Vec<(usize, usize)> =
            (1..=m).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|&(i, j)| mask[(i - 1) * 6 + j - 1]).collect();
        prop_assume!(!cells.is_empty());
        let a = skeleton_array(m, n, &cells);
        let sign = |b: bool| if b { 1 } else { -1 };
        let o = Orientation {
            rows: (0..m).map(|i| sign(signs[i])).collect(),
            cols: (0..n).map(|j| sign(signs[6 + j])).collect(),
        };
        let mut orbits: Vec<BTreeSet<(usize, usize)>> = Vec::new();
        for &start in &cells {
            let seq = knight_sequence(&a, &o, Cell::new(start.0, start.1));
            let got: Vec<(usize, usize)> = seq.cells.iter().map(|c| (c.row, c.col)).collect();
            let want = walk(&cells, m, n, &o, start);
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(seq.covers_all, want.len() == cells.len());
            let orbit: BTreeSet<_> = want.into_iter().collect();
            // The knight map is a permutation, so orbits never partially overlap.
            for other in &orbits {
                prop_assert!(other == &orbit || other.is_disjoint(&orbit));
            }
            orbits.push(orbit);
        }
        let pair = CompatiblePair::from_orientation(&a, &o);
        let first = walk(&cells, m, n, &o, cells[0]).len();
        prop_assert_eq!(pair.composition_cycle(), first);
    }
}

#[test]
fn full_three_by_three_forward_orbit_and_tour() {
    let cells: Vec<(usize, usize)> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
    let a = skeleton_array(3, 3, &cells);
    let seq = knight_sequence(&a, &Orientation::all_forward(3, 3), Cell::new(1, 1));
    assert_eq!(seq.cells, vec![Cell::new(1, 1), Cell::new(2, 2), Cell::new(3, 3)]);
    assert!(!seq.covers_all);
    let o = solve_knight(&a).unwrap().expect("tour");
    assert_eq!(walk(&cells, 3, 3, &o, (1, 1)).len(), 9);
}

#[test]
fn single_row_is_never_covered_past_one_cell() {
    let cells: Vec<(usize, usize)> = (1..=4).map(|j| (1, j)).collect();
    let a = skeleton_array(1, 4, &cells);
    let seq = knight_sequence(&a, &Orientation::all_forward(1, 4), Cell::new(1, 1));
    assert_eq!(seq.cells, vec![Cell::new(1, 1), Cell::new(1, 2), Cell::new(1, 3), Cell::new(1, 4)]);
    assert!(seq.covers_all);
}

#[test]
fn three_diagonal_five_square_has_a_tour() {
    let cells = diagonal(5, 3);
    let a = skeleton_array(5, 5, &cells);
    let o = solve_knight(&a).unwrap().expect("tour");
    assert_eq!(o.rows[0], 1);
    assert_eq!(walk(&cells, 5, 5, &o, cells[0]).len(), 15);
    let pair = CompatiblePair::from_orientation(&a, &o);
    assert_eq!(pair.composition_cycle(), 15);
    assert!(pair.is_compatible(&a));
}

#[test]
fn search_limit_is_enforced() {
    let a = skeleton_array(5, 5, &diagonal(5, 3));
    assert_eq!(solve_knight_with_limit(&a, 9), Err(TopologyError::SearchTooLarge(10, 9)));
}

#[test]
fn biembedding_over_z19() {
    let g = Arc::new(build_group(&GroupSpec::Cyclic(19)).unwrap());
    let j = Subgroup::trivial(&g);
    let p = Params { m: 3, n: 3, h: 3, k: 3, lambda: 1, t: 1, v: 19 };
    let built = construct(&BuildRequest::new(g, j.clone(), p, 5)).unwrap();
    let pair = compatible_orderings(&built.array, 5).unwrap();
    assert!(pair.is_compatible(&built.array));
    let e = build_biembedding(&built.array, &j, 1, &pair).unwrap();
    assert_eq!((e.vertices, e.edges()), (19, 171));
    assert_eq!(e.euler_characteristic(), 2 - 2 * e.genus as i64);
    let report = embedding_report(&built.array, &e);
    assert!(report.lengths_ok);
    assert_eq!(report.faces, e.row_faces.len() + e.col_faces.len());
    // Every directed edge lies on exactly one row face and one column face.
    let darts: usize = e.row_faces.iter().map(Vec::len).sum();
    assert_eq!(darts, e.col_faces.iter().map(Vec::len).sum::<usize>());
    assert_eq!(darts, 171);
}

#[test]
fn nonabelian_groups_are_refused() {
    let g = Arc::new(build_group(&heffter::groups::s3()).unwrap());
    let j = Subgroup::trivial(&g);
    let mut a = PFArray::new(g, 1, 1);
    a.set(Cell::new(1, 1), 1);
    let pair = compatible_orderings(&a, 0).unwrap();
    assert!(matches!(build_biembedding(&a, &j, 1, &pair), Err(TopologyError::InvariantViolation(_))));
}
