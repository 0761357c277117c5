//! Tiles: finite subsets of Z^n containing the origin.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix};
use crate::vector::IntVec;

/// Default cap on `2^n * n!` signed permutations examined by [`Tile::symmetries`].
pub const DEFAULT_SYMMETRY_BUDGET: u64 = 1 << 22;

/// A finite set of points of Z^n that contains the origin.
///
/// Points are kept sorted lexicographically, so two tiles with the same
/// point set compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tile {
    dim: usize,
    points: Vec<IntVec>,
}

/// A tile together with the translation that was applied to put the origin
/// inside it (zero when the input already contained the origin).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedTile {
    pub tile: Tile,
    pub offset: IntVec,
}

impl Tile {
    /// Validates a point list. If the origin is missing, the tile is translated
    /// so that its lexicographically least point sits at the origin.
    pub fn from_points(dim: usize, points: &[IntVec]) -> Result<NormalizedTile> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if !set.insert(p.clone()) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        let zero = IntVec::zero(dim);
        let offset = if set.contains(&zero) {
            zero
        } else {
            -set.iter().next().expect("nonempty")
        };
        let points = set.iter().map(|p| p + &offset).collect();
        Ok(NormalizedTile {
            tile: Tile { dim, points },
            offset,
        })
    }

    /// Like [`Tile::from_points`] but rejects inputs that need translating.
    pub fn new(dim: usize, points: &[IntVec]) -> Result<Tile> {
        let n = Self::from_points(dim, points)?;
        if !n.offset.is_zero() {
            return Err(Error::WrongTile("tile does not contain the origin".into()));
        }
        Ok(n.tile)
    }

    fn from_sorted_unchecked(dim: usize, points: Vec<IntVec>) -> Tile {
        Tile { dim, points }
    }

    /// `{0, e_1, ..., e_n}` in Z^n.
    pub fn semicross(n: usize) -> Tile {
        assert!(n >= 1, "semicross needs n >= 1");
        let mut pts: Vec<IntVec> = (0..n).map(|i| IntVec::unit(n, i)).collect();
        pts.push(IntVec::zero(n));
        pts.sort();
        Tile::from_sorted_unchecked(n, pts)
    }

    /// `{0, ±e_1, ..., ±e_n}` in Z^n.
    pub fn cross(n: usize) -> Tile {
        assert!(n >= 1, "cross needs n >= 1");
        let mut pts = vec![IntVec::zero(n)];
        for i in 0..n {
            pts.push(IntVec::unit(n, i));
            pts.push(IntVec::unit(n, i).scale(-1));
        }
        pts.sort();
        Tile::from_sorted_unchecked(n, pts)
    }

    /// The Lee sphere: all points with `|x_1| + ... + |x_n| <= r`.
    pub fn lee_sphere(n: usize, r: u32) -> Tile {
        assert!(n >= 1, "Lee sphere needs n >= 1");
        let r = r as i64;
        let mut pts = Vec::new();
        let mut cur = vec![0i64; n];
        fn rec(i: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<IntVec>) {
            if i == cur.len() {
                out.push(IntVec::from(cur.clone()));
                return;
            }
            for c in -budget..=budget {
                cur[i] = c;
                rec(i + 1, budget - c.abs(), cur, out);
            }
            cur[i] = 0;
        }
        rec(0, r, &mut cur, &mut pts);
        pts.sort();
        Tile::from_sorted_unchecked(n, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[IntVec] {
        &self.points
    }

    pub fn nonzero_points(&self) -> impl Iterator<Item = &IntVec> {
        self.points.iter().filter(|p| !p.is_zero())
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Whether the nonzero points generate Z^n as a group.
    pub fn generates_zn(&self) -> bool {
        let rows: Vec<Vec<i64>> = self.nonzero_points().map(|p| p.to_vec()).collect();
        if rows.len() < self.dim {
            return false;
        }
        let Ok(m) = IntMatrix::<i128>::from_i64_rows(self.dim, &rows) else {
            return false;
        };
        match snf(&m) {
            Ok(f) => f.len() == self.dim && f.iter().all(|&d| d == 1),
            Err(_) => false,
        }
    }

    /// `{a v : v in V}`.
    pub fn blow_up(&self, a: i64) -> Result<Tile> {
        if a == 0 {
            return Err(Error::ZeroMultiplier);
        }
        let mut pts: Vec<IntVec> = self.points.iter().map(|p| p.scale(a)).collect();
        pts.sort();
        Ok(Tile::from_sorted_unchecked(self.dim, pts))
    }

    /// `{v - w : v, w in V}`.
    pub fn difference_set(&self) -> BTreeSet<IntVec> {
        let mut out = BTreeSet::new();
        for v in &self.points {
            for w in &self.points {
                out.insert(v - w);
            }
        }
        out
    }

    /// All affine maps `x -> P x + t` with `P` a signed permutation matrix that
    /// carry the tile onto itself. The identity comes first.
    pub fn symmetries(&self, budget: u64) -> Result<Vec<Symmetry>> {
        let n = self.dim;
        let candidates = (1..=n as u64).try_fold(1u64 << n.min(63), |acc, k| acc.checked_mul(k));
        match candidates {
            Some(c) if c <= budget => {}
            _ => {
                return Err(Error::BudgetExceeded {
                    what: "signed permutations",
                    needed: candidates.map_or(u128::MAX, |c| c as u128),
                    limit: budget as u128,
                })
            }
        }
        let base_min = &self.points[0];
        let normalized: Vec<IntVec> = self.points.iter().map(|p| p - base_min).collect();
        let mut out = Vec::new();
        for perm in SignedPerm::all(n) {
            let mut img: Vec<IntVec> = self.points.iter().map(|p| perm.apply(p)).collect();
            img.sort();
            let img_min = img[0].clone();
            let matches = img.iter().zip(&normalized).all(|(a, b)| &(a - &img_min) == b);
            if matches {
                // P V = V + (img_min - base_min), so x -> P x - (img_min - base_min) fixes V
                let shift = base_min - &img_min;
                out.push(Symmetry { perm, shift });
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tile{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A signed permutation of coordinates: `(P x)_i = sign_i * x_{source_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SignedPerm {
    source: Vec<usize>,
    sign: Vec<i64>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            source: (0..n).collect(),
            sign: vec![1; n],
        }
    }

    pub fn new(source: Vec<usize>, sign: Vec<i64>) -> Self {
        debug_assert_eq!(source.len(), sign.len());
        SignedPerm { source, sign }
    }

    pub fn dim(&self) -> usize {
        self.source.len()
    }

    pub fn apply(&self, x: &[i64]) -> IntVec {
        IntVec::from(
            self.source
                .iter()
                .zip(&self.sign)
                .map(|(&s, &g)| g * x[s])
                .collect::<Vec<_>>(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let source = self.source.iter().map(|&s| other.source[s]).collect();
        let sign = self
            .source
            .iter()
            .zip(&self.sign)
            .map(|(&s, &g)| g * other.sign[s])
            .collect();
        SignedPerm { source, sign }
    }

    pub fn is_identity(&self) -> bool {
        self.source.iter().enumerate().all(|(i, &s)| i == s) && self.sign.iter().all(|&g| g == 1)
    }

    /// All `2^n n!` signed permutations; the identity is first.
    pub fn all(n: usize) -> Vec<SignedPerm> {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        permutations(&mut cur, 0, &mut perms);
        perms.sort();
        let mut out = Vec::with_capacity(perms.len() << n);
        for p in perms {
            for mask in 0..(1u64 << n) {
                let sign = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(SignedPerm {
                    source: p.clone(),
                    sign,
                });
            }
        }
        out
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// An isometry `x -> P x + shift` of Z^n fixing a tile.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Symmetry {
    pub perm: SignedPerm,
    pub shift: IntVec,
}

impl Symmetry {
    pub fn apply(&self, x: &[i64]) -> IntVec {
        &self.perm.apply(x) + &self.shift
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        Symmetry {
            perm: self.perm.compose(&other.perm),
            shift: &self.perm.apply(&other.shift) + &self.shift,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<IntVec> {
        v.iter().map(|p| IntVec::from(*p)).collect()
    }

    #[test]
    fn from_points_examples() {
        let n = Tile::from_points(2, &pts(&[&[0, 0], &[1, 0], &[0, 1], &[2, 1]])).unwrap();
        assert!(n.offset.is_zero());
        assert_eq!(n.tile.len(), 4);
        let single = Tile::from_points(1, &pts(&[&[0]])).unwrap();
        assert_eq!(single.tile.len(), 1);
        let moved = Tile::from_points(2, &pts(&[&[1, 1], &[2, 1]])).unwrap();
        assert_eq!(moved.offset, IntVec::from([-1, -1]));
        assert_eq!(moved.tile.points(), &pts(&[&[0, 0], &[1, 0]])[..]);
    }

    #[test]
    fn from_points_errors() {
        assert_eq!(Tile::from_points(2, &[]).unwrap_err(), Error::EmptyInput);
        assert!(matches!(
            Tile::from_points(2, &pts(&[&[0, 0], &[0, 0]])),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(
            Tile::from_points(2, &pts(&[&[0, 0], &[1]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn named_families() {
        assert_eq!(Tile::semicross(1).points(), &pts(&[&[0], &[1]])[..]);
        assert_eq!(Tile::semicross(2).points(), &pts(&[&[0, 0], &[0, 1], &[1, 0]])[..]);
        assert_eq!(Tile::semicross(4).len(), 5);
        assert_eq!(Tile::cross(1).points(), &pts(&[&[-1], &[0], &[1]])[..]);
        assert_eq!(Tile::cross(2).len(), 5);
        assert_eq!(Tile::cross(3).len(), 7);
        assert_eq!(Tile::lee_sphere(2, 1), Tile::cross(2));
        assert_eq!(Tile::lee_sphere(1, 2).len(), 5);
        assert_eq!(Tile::lee_sphere(2, 2).len(), 13);
    }

    #[test]
    fn generation() {
        assert!(Tile::semicross(3).generates_zn());
        assert!(!Tile::new(1, &pts(&[&[0], &[2]])).unwrap().generates_zn());
        let example = Tile::new(3, &pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])).unwrap();
        assert!(!example.generates_zn());
        assert!(!Tile::new(2, &pts(&[&[0, 0]])).unwrap().generates_zn());
    }

    #[test]
    fn blow_up_examples() {
        assert_eq!(Tile::cross(2).blow_up(-1).unwrap(), Tile::cross(2));
        assert_eq!(Tile::semicross(1).blow_up(2).unwrap().points(), &pts(&[&[0], &[2]])[..]);
        assert_eq!(
            Tile::semicross(2).blow_up(3).unwrap().points(),
            &pts(&[&[0, 0], &[0, 3], &[3, 0]])[..]
        );
        assert_eq!(Tile::cross(2).blow_up(0).unwrap_err(), Error::ZeroMultiplier);
    }

    #[test]
    fn difference_set_examples() {
        let d: Vec<_> = Tile::semicross(1).difference_set().into_iter().collect();
        assert_eq!(d, pts(&[&[-1], &[0], &[1]]));
        let d: Vec<_> = Tile::cross(1).difference_set().into_iter().collect();
        assert_eq!(d, pts(&[&[-2], &[-1], &[0], &[1], &[2]]));
        let single = Tile::new(2, &pts(&[&[0, 0]])).unwrap();
        assert_eq!(single.difference_set().len(), 1);
    }

    #[test]
    fn symmetry_budget() {
        assert!(matches!(
            Tile::semicross(6).symmetries(1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
