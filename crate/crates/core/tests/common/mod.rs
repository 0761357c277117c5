//! Independent reference implementations used as test oracles. None of them
//! call into the search or lattice code they check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use polytile::{IntVec, Lattice, Tile};

/// A 2D lattice with rows `(a, c)` and `(0, b)`, reduced by hand.
#[derive(Clone, Copy, Debug)]
pub struct Torus2 {
    pub a: i64,
    pub c: i64,
    pub b: i64,
}

impl Torus2 {
    pub fn reduce(&self, x: i64, y: i64) -> (i64, i64) {
        let i = x.div_euclid(self.a);
        (x - i * self.a, (y - i * self.c).rem_euclid(self.b))
    }

    pub fn cells(&self) -> usize {
        (self.a * self.b) as usize
    }

    pub fn index(&self, x: i64, y: i64) -> usize {
        let (x, y) = self.reduce(x, y);
        (x * self.b + y) as usize
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::from_generators(2, &[IntVec::from([self.a, self.c]), IntVec::from([0, self.b])]).unwrap()
    }
}

/// Counts exact covers of the torus by deciding, for each cell in turn,
/// which tile point sits on it; no column heuristics, no shared code.
pub fn brute_force_covers(points: &[(i64, i64)], t: Torus2) -> u64 {
    fn go(points: &[(i64, i64)], t: Torus2, covered: &mut Vec<bool>, cell: usize) -> u64 {
        let n = covered.len();
        let mut cell = cell;
        while cell < n && covered[cell] {
            cell += 1;
        }
        if cell == n {
            return 1;
        }
        let (x, y) = ((cell as i64) / t.b, (cell as i64) % t.b);
        let mut total = 0;
        for &(vx, vy) in points {
            let (cx, cy) = (x - vx, y - vy);
            let idx: Vec<usize> = points.iter().map(|&(wx, wy)| t.index(cx + wx, cy + wy)).collect();
            let distinct: HashSet<usize> = idx.iter().copied().collect();
            if distinct.len() == idx.len() && idx.iter().all(|&i| !covered[i]) {
                idx.iter().for_each(|&i| covered[i] = true);
                total += go(points, t, covered, cell + 1);
                idx.iter().for_each(|&i| covered[i] = false);
            }
        }
        total
    }
    if !t.cells().is_multiple_of(points.len()) {
        return 0;
    }
    go(points, t, &mut vec![false; t.cells()], 0)
}

/// Whether the box `[-r, r]^2` can be covered exactly once by pairwise
/// disjoint translates, found by include/exclude over all candidate
/// placements.
pub fn brute_force_patch_exists(points: &[(i64, i64)], r: i64) -> bool {
    let ball: BTreeSet<(i64, i64)> = (-r..=r).flat_map(|x| (-r..=r).map(move |y| (x, y))).collect();
    let mut placements: Vec<Vec<(i64, i64)>> = BTreeSet::from_iter(
        ball.iter()
            .flat_map(|&(x, y)| points.iter().map(move |&(vx, vy)| (x - vx, y - vy))),
    )
    .into_iter()
    .map(|(cx, cy)| points.iter().map(|&(vx, vy)| (cx + vx, cy + vy)).collect())
    .collect();
    placements.sort();
    fn go(
        placements: &[Vec<(i64, i64)>],
        ball: &BTreeSet<(i64, i64)>,
        used: &mut HashSet<(i64, i64)>,
        i: usize,
    ) -> bool {
        if ball.iter().all(|p| used.contains(p)) {
            return true;
        }
        if i == placements.len() {
            return false;
        }
        let p = &placements[i];
        if p.iter().all(|c| !used.contains(c)) {
            p.iter().for_each(|&c| {
                used.insert(c);
            });
            if go(placements, ball, used, i + 1) {
                return true;
            }
            p.iter().for_each(|c| {
                used.remove(c);
            });
        }
        go(placements, ball, used, i + 1)
    }
    go(&placements, &ball, &mut HashSet::new(), 0)
}

/// Every signed permutation of the plane, written out by hand.
pub fn plane_isometries() -> Vec<[[i64; 2]; 2]> {
    vec![
        [[1, 0], [0, 1]],
        [[-1, 0], [0, 1]],
        [[1, 0], [0, -1]],
        [[-1, 0], [0, -1]],
        [[0, 1], [1, 0]],
        [[0, -1], [1, 0]],
        [[0, 1], [-1, 0]],
        [[0, -1], [-1, 0]],
    ]
}

/// Number of linear parts `M` (signed permutations) with `M V` a translate of `V`.
pub fn brute_force_symmetry_count(points: &[(i64, i64)]) -> usize {
    let norm = |pts: Vec<(i64, i64)>| -> BTreeSet<(i64, i64)> {
        let min = *pts.iter().min().unwrap();
        pts.iter().map(|&(x, y)| (x - min.0, y - min.1)).collect()
    };
    let base = norm(points.to_vec());
    plane_isometries()
        .iter()
        .filter(|m| {
            let img: Vec<(i64, i64)> = points
                .iter()
                .map(|&(x, y)| (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y))
                .collect();
            norm(img) == base
        })
        .count()
}

pub fn tile2(points: &[(i64, i64)]) -> Tile {
    let pts: Vec<IntVec> = points.iter().map(|&(x, y)| IntVec::from([x, y])).collect();
    Tile::from_points(2, &pts).unwrap().tile
}

pub fn pairs(tile: &Tile) -> Vec<(i64, i64)> {
    tile.points().iter().map(|p| (p[0], p[1])).collect()
}

/// Random planar tiles of 1 to `max` cells inside a small box, normalized.
pub fn small_tile(max: usize) -> impl Strategy<Value = Tile> {
    proptest::collection::btree_set((0i64..3, 0i64..3), 1..=max).prop_map(|s| tile2(&s.into_iter().collect::<Vec<_>>()))
}

/// Random 2D tori `(a, c), (0, b)` with at most `max_cells` cells.
pub fn small_torus(max_cells: i64) -> impl Strategy<Value = Torus2> {
    (1i64..=6, 1i64..=6)
        .prop_filter("too many cells", move |(a, b)| a * b <= max_cells)
        .prop_flat_map(|(a, b)| (Just(a), 0..b, Just(b)))
        .prop_map(|(a, c, b)| Torus2 { a, c, b })
}
