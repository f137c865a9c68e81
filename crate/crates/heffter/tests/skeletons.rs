use std::collections::BTreeSet;

use heffter::skeletons::{
    block_skeleton, coset_skeleton, decompose, plan_tiling, square_diagonal_skeleton, v3_skeleton, CellSet, Family,
};
use heffter::Cell;
use proptest::prelude::*;

fn counts(s: &CellSet) -> (Vec<usize>, Vec<usize>) {
    let mut rows = vec![0; s.m];
    let mut cols = vec![0; s.n];
    for c in &s.cells {
        rows[c.row - 1] += 1;
        cols[c.col - 1] += 1;
    }
    (rows, cols)
}

fn regular_shape() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1usize..=24, 1usize..=24, 1usize..=24).prop_filter_map("shape", |(m, n, h)| {
        let k = m * h / n;
        (h <= n && k >= 1 && k <= m && k * n == m * h).then_some((m, n, h, k))
    })
}

proptest! {
    #[test]
    fn coset_and_block_skeletons_are_regular((m, n, h, k) in regular_shape()) {
        for s in [coset_skeleton(m, n, h, k).unwrap(), block_skeleton(m, n, h, k).unwrap()] {
            prop_assert_eq!(s.cells.len(), n * k);
            let (rows, cols) = counts(&s);
            prop_assert!(rows.iter().all(|&x| x == h));
            prop_assert!(cols.iter().all(|&x| x == k));
        }
    }

    #[test]
    fn tiling_plans_partition_a_regular_skeleton((m, n, h, k) in regular_shape()) {
        let Ok(plan) = plan_tiling(m, n, h, k) else { return Ok(()) };
        prop_assert!(plan.verify(h, k).is_ok());
        let mut seen = BTreeSet::new();
        for t in &plan.tiles {
            for c in &t.cells {
                prop_assert!(seen.insert(*c), "{} covered twice", c);
            }
        }
        prop_assert_eq!(&seen, &plan.skeleton.cells);
        let (rows, cols) = counts(&plan.skeleton);
        prop_assert!(rows.iter().all(|&x| x == h));
        prop_assert!(cols.iter().all(|&x| x == k));
        prop_assert!(plan.max_tile() <= 21);
    }

    #[test]
    fn decompose_sums_to_total(total in 0usize..200, parts in prop::collection::btree_set(1usize..25, 1..5)) {
        let parts: Vec<usize> = parts.into_iter().collect();
        let mut reachable = vec![false; total + 1];
        reachable[0] = true;
        for s in 1..=total {
            for &p in &parts {
                if p <= s && reachable[s - p] {
                    reachable[s] = true;
                }
            }
        }
        match decompose(total, &parts) {
            Some(split) => {
                prop_assert_eq!(split.iter().sum::<usize>(), total);
                prop_assert!(split.iter().all(|p| parts.contains(p)));
            }
            None => prop_assert!(!reachable[total]),
        }
    }
}

#[test]
fn coset_skeleton_of_a_rectangle() {
    let s = coset_skeleton(4, 6, 3, 2).unwrap();
    let expected: BTreeSet<Cell> = (0..12).map(|x| Cell::new(x % 4 + 1, x % 6 + 1)).collect();
    assert_eq!(s.cells, expected);
    assert!(coset_skeleton(4, 6, 2, 2).is_err());
}

#[test]
fn v3_row_and_column_sets_meet_every_line() {
    for (m, n, h, k) in [(7, 7, 3, 3), (4, 6, 3, 2), (6, 4, 2, 3), (9, 9, 6, 6), (12, 8, 6, 9)] {
        let (b, h1, h2) = v3_skeleton(m, n, h, k).unwrap();
        assert!(h1.cells.is_subset(&b.cells) && h2.cells.is_subset(&b.cells));
        let (_, h1_cols) = counts(&h1);
        let (h2_rows, _) = counts(&h2);
        if k % 3 == 0 {
            assert!(h1_cols.iter().all(|&x| x == 1 || x == 2), "{m}x{n}");
        }
        if h % 3 == 0 {
            assert!(h2_rows.iter().all(|&x| x == 1 || x == 2), "{m}x{n}");
        }
    }
}

#[test]
fn diagonal_skeleton_columns() {
    let s = square_diagonal_skeleton(5, 3);
    for col in 1..=5 {
        let rows: Vec<usize> = s.cells.iter().filter(|c| c.col == col).map(|c| c.row).collect();
        let mut want: Vec<usize> = (0..3).map(|d| (col - 1 + d) % 5 + 1).collect();
        want.sort();
        assert_eq!(rows, want);
    }
}

#[test]
fn family_thresholds() {
    let mins: Vec<(Family, usize)> = [
        Family::Rect3b,
        Family::Rect2b,
        Family::Stair32,
        Family::Dstair21,
        Family::Dstair31,
        Family::Diag3b,
        Family::Diag4b,
        Family::Diag5b,
        Family::FullQ,
    ]
    .into_iter()
    .map(|f| (f, f.min_b()))
    .collect();
    assert_eq!(mins.iter().map(|p| p.1).collect::<Vec<_>>(), vec![3, 4, 2, 3, 2, 4, 3, 2, 1]);
}

#[test]
fn transposed_skeleton_swaps_counts() {
    let s = block_skeleton(4, 6, 3, 2).unwrap();
    let t = s.transposed();
    assert!(t.is_regular(2, 3));
    assert_eq!(t.transposed(), s);
}
