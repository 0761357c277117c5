//! Periodic tilings of Z^n by translates of a tile.
//!
//! A tiling is stored as a period lattice Λ together with the canonical
//! residues of its centers modulo Λ. Every check here is an exhaustive sweep
//! over the finite torus Z^n / Λ.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Torus};
use crate::scalar::is_prime;
use crate::tiles::Tile;
use crate::vector::IntVec;

/// Default cap on torus cells swept by verification routines.
pub const DEFAULT_VERIFY_BUDGET: u64 = 1 << 24;

/// A Λ-periodic set of centers `L` such that (ideally) `Z^n = V + L`.
///
/// Centers are kept sorted; duplicates are retained so that a malformed
/// input is reported by [`PeriodicTiling::verify`] rather than silently fixed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicTiling {
    tile: Tile,
    period: Lattice,
    centers: Vec<IntVec>,
}

/// Result of an exact-cover check on the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub valid: bool,
    pub uncovered: Vec<IntVec>,
    pub doubly_covered: Vec<IntVec>,
}

impl PeriodicTiling {
    /// Builds a tiling candidate; centers are reduced to canonical residues.
    /// Fails with `DensityMismatch` unless `|centers| * |tile| = det(period)`.
    pub fn new(tile: Tile, period: Lattice, centers: impl IntoIterator<Item = IntVec>) -> Result<Self> {
        if tile.dim() != period.dim() {
            return Err(Error::DimensionMismatch {
                expected: period.dim(),
                got: tile.dim(),
            });
        }
        let mut reduced = Vec::new();
        for c in centers {
            reduced.push(period.reduce(&c)?);
        }
        reduced.sort();
        let det = period.det();
        if reduced.len() as u128 * tile.len() as u128 != det as u128 {
            return Err(Error::DensityMismatch {
                centers: reduced.len(),
                tile: tile.len(),
                det,
            });
        }
        Ok(PeriodicTiling {
            tile,
            period,
            centers: reduced,
        })
    }

    /// The lattice tiling `V + L`: period `L`, single center at the origin.
    pub fn from_lattice(tile: Tile, lattice: Lattice) -> Result<Self> {
        let zero = IntVec::zero(tile.dim());
        Self::new(tile, lattice, [zero])
    }

    pub fn tile(&self) -> &Tile {
        &self.tile
    }

    pub fn period(&self) -> &Lattice {
        &self.period
    }

    pub fn centers(&self) -> &[IntVec] {
        &self.centers
    }

    pub fn dim(&self) -> usize {
        self.tile.dim()
    }

    /// Whether the point `x` of Z^n is a center.
    pub fn is_center(&self, x: &[i64]) -> bool {
        let mut v = x.to_vec();
        self.period.reduce_in_place(&mut v);
        self.centers.binary_search(&IntVec::from(v)).is_ok()
    }

    /// The linear functional on monomials: 1 iff the exponent is a center.
    pub fn functional_t(&self, exponent: &[i64]) -> u8 {
        u8::from(self.is_center(exponent))
    }

    fn torus(&self, budget: u64) -> Result<Torus> {
        Torus::new(self.period.clone(), budget)
    }

    fn center_mask(&self, torus: &Torus) -> Vec<bool> {
        let mut mask = vec![false; torus.len()];
        for c in &self.centers {
            mask[torus.index(c)] = true;
        }
        mask
    }

    /// Checks that every residue is covered exactly once by `c + v`.
    pub fn verify(&self, budget: u64) -> Result<CoverReport> {
        let torus = self.torus(budget)?;
        let mut hits = vec![0u32; torus.len()];
        for c in &self.centers {
            for v in self.tile.points() {
                hits[torus.index(&(c + v))] += 1;
            }
        }
        let mut report = CoverReport {
            valid: true,
            uncovered: Vec::new(),
            doubly_covered: Vec::new(),
        };
        for (cell, &h) in hits.iter().enumerate() {
            match h {
                1 => {}
                0 => report.uncovered.push(torus.rep(cell)),
                _ => report.doubly_covered.push(torus.rep(cell)),
            }
        }
        report.valid = report.uncovered.is_empty() && report.doubly_covered.is_empty();
        Ok(report)
    }

    pub fn is_valid(&self, budget: u64) -> Result<bool> {
        Ok(self.verify(budget)?.valid)
    }

    fn require_valid(&self, budget: u64) -> Result<()> {
        if self.is_valid(budget)? {
            Ok(())
        } else {
            Err(Error::InvalidTiling)
        }
    }

    /// Whether the full center set, translated to contain the origin, is a
    /// subgroup of Z^n.
    pub fn is_lattice_tiling(&self, budget: u64) -> Result<bool> {
        self.require_valid(budget)?;
        let base = &self.centers[0];
        let shifted: Vec<IntVec> = self.centers.iter().map(|c| c - base).collect();
        for a in &shifted {
            if !self.is_center(&(base - a)) {
                return Ok(false);
            }
            for b in &shifted {
                if !self.is_center(&(&(a + b) + base)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn stabilizes(&self, p: &IntVec) -> bool {
        self.centers.iter().all(|c| self.is_center(&(c + p)))
    }

    /// The lattice of all periods of the center set; always contains Λ.
    pub fn period_lattice(&self, budget: u64) -> Result<Lattice> {
        self.require_valid(budget)?;
        Ok(self.intrinsic_period())
    }

    fn intrinsic_period(&self) -> Lattice {
        let base = &self.centers[0];
        let size = self.tile.len() as u64;
        let mut lat = self.period.clone();
        for c in &self.centers {
            if lat.det() == size {
                break;
            }
            let p = c - base;
            if lat.reduce(&p).expect("dims agree").is_zero() || !self.stabilizes(&p) {
                continue;
            }
            let mut gens = lat.basis().to_vec();
            gens.push(p);
            lat = Lattice::from_generators(self.dim(), &gens).expect("periods contain a full-rank lattice");
        }
        lat
    }

    fn check_multiplier(&self, a: i64) -> Result<()> {
        let size = self.tile.len();
        if a.gcd(&(size as i64)) != 1 {
            return Err(Error::InvalidMultiplier { a, size });
        }
        Ok(())
    }

    /// `T(M * Q_V(x^a)) = 1` for every monomial `M`, i.e. for every residue `m`
    /// exactly one `v` has `m - a v` a center.
    pub fn check_product_identity(&self, a: i64, budget: u64) -> Result<bool> {
        self.check_multiplier(a)?;
        let torus = self.torus(budget)?;
        let mask = self.center_mask(&torus);
        let offsets: Vec<IntVec> = self.tile.points().iter().map(|v| v.scale(-a)).collect();
        let table = torus.translation_table(&offsets);
        Ok((0..torus.len()).all(|m| table.iter().filter(|row| mask[row[m] as usize]).count() == 1))
    }

    /// `l + a(v - w)` is never a center for a center `l` and distinct `v, w`.
    pub fn check_difference_exclusion(&self, a: i64, budget: u64) -> Result<bool> {
        self.check_multiplier(a)?;
        let torus = self.torus(budget)?;
        let mask = self.center_mask(&torus);
        let diffs: Vec<IntVec> = self
            .tile
            .difference_set()
            .into_iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.scale(a))
            .collect();
        let table = torus.translation_table(&diffs);
        Ok(self
            .centers
            .iter()
            .map(|c| torus.index(c))
            .all(|l| table.iter().all(|row| !mask[row[l] as usize])))
    }

    /// The same centers used with the blown-up tile `aV`.
    pub fn blow_up(&self, a: i64) -> Result<PeriodicTiling> {
        Ok(PeriodicTiling {
            tile: self.tile.blow_up(a)?,
            period: self.period.clone(),
            centers: self.centers.clone(),
        })
    }

    /// Whether every center `c` satisfies `c ± d` ∈ centers.
    pub fn is_invariant_under(&self, d: &IntVec) -> bool {
        self.centers
            .iter()
            .all(|c| self.is_center(&(c + d)) && self.is_center(&(c - d)))
    }

    /// Canonical representative of the congruence class: minimal over tile
    /// symmetries and translations. Congruent tilings get equal forms.
    pub fn canonical_form(&self, symmetry_budget: u64, budget: u64) -> Result<PeriodicTiling> {
        self.require_valid(budget)?;
        let syms = self.tile.symmetries(symmetry_budget)?;
        let perms: Vec<_> = syms.into_iter().map(|s| s.perm).collect();
        Ok(self.minimal_image(&perms))
    }

    /// Canonical representative up to translation only.
    pub fn canonical_translation_form(&self, budget: u64) -> Result<PeriodicTiling> {
        self.require_valid(budget)?;
        let id = crate::tiles::SignedPerm::identity(self.dim());
        Ok(self.minimal_image(&[id]))
    }

    fn minimal_image(&self, perms: &[crate::tiles::SignedPerm]) -> PeriodicTiling {
        let intrinsic = self.intrinsic_period();
        let mut reps: Vec<IntVec> = self
            .centers
            .iter()
            .map(|c| intrinsic.reduce(c).expect("dims agree"))
            .collect();
        reps.sort();
        reps.dedup();
        let mut best: Option<(Lattice, Vec<IntVec>)> = None;
        for p in perms {
            let gens: Vec<IntVec> = intrinsic.basis().iter().map(|b| p.apply(b)).collect();
            let lat = Lattice::from_generators(self.dim(), &gens).expect("image of a full-rank lattice");
            if best.as_ref().is_some_and(|(b, _)| &lat > b) {
                continue;
            }
            let imgs: Vec<IntVec> = reps.iter().map(|c| p.apply(c)).collect();
            for base in &imgs {
                let mut set: Vec<IntVec> = imgs
                    .iter()
                    .map(|c| lat.reduce(&(c - base)).expect("dims agree"))
                    .collect();
                set.sort();
                let better = match &best {
                    None => true,
                    Some((bl, bs)) => (&lat, &set) < (bl, bs),
                };
                if better {
                    best = Some((lat.clone(), set));
                }
            }
        }
        let (period, centers) = best.expect("at least the identity");
        PeriodicTiling {
            tile: self.tile.clone(),
            period,
            centers,
        }
    }

    /// Whether the center set is invariant under the cyclic coordinate shift.
    pub fn is_cyclic(&self) -> bool {
        let shift_ok = self.centers.iter().all(|c| self.is_center(&c.shift_left()));
        // π(C) = C also forces π to carry Λ into the periods of C
        shift_ok && self.period.basis().iter().all(|b| self.stabilizes(&b.shift_left()))
    }
}

impl fmt::Debug for PeriodicTiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicTiling")
            .field("tile", &self.tile)
            .field("period", &self.period)
            .field("centers", &self.centers)
            .finish()
    }
}

/// The tile `{0, e_1, ..., e_{q-2}, 2 e_{q-1}}` in Z^{q-1}.
pub fn example_nonlattice_tile(q: i64) -> Result<Tile> {
    if !(is_prime(q) && q > 2) {
        return Err(Error::NotPrime(q));
    }
    let n = (q - 1) as usize;
    let mut pts = vec![IntVec::zero(n)];
    pts.extend((0..n - 1).map(|i| IntVec::unit(n, i)));
    pts.push(IntVec::unit(n, n - 1).scale(2));
    Tile::new(n, &pts)
}

/// The two-layer center set: for even `x_{q-1}` the centers satisfy
/// `q | x·(1, 2, ..., q-1)`, for odd `x_{q-1}` they satisfy
/// `q | x·(q-1, ..., 2, 1)`; the period is `diag(q, ..., q, 2q)`.
///
/// Returned unverified; run [`PeriodicTiling::verify`] on it.
pub fn example_nonlattice_construction(q: i64) -> Result<PeriodicTiling> {
    let tile = example_nonlattice_tile(q)?;
    let n = tile.dim();
    let mut diag = vec![q; n];
    diag[n - 1] = 2 * q;
    let period = Lattice::diagonal(&diag)?;
    let up: Vec<i64> = (1..q).collect();
    let down: Vec<i64> = (1..q).rev().collect();
    let centers: Vec<IntVec> = period
        .coset_reps(DEFAULT_VERIFY_BUDGET)?
        .into_iter()
        .filter(|x| {
            let w = if x[n - 1] % 2 == 0 { &up } else { &down };
            x.dot(w) % q == 0
        })
        .collect();
    PeriodicTiling::new(tile, period, centers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel_mod(q: i64, images: &[i64]) -> Lattice {
        // kernel of x -> sum images_i x_i mod q, via generators q e_i and e_i - c e_0
        let n = images.len();
        let inv = (1..q).find(|k| images[0] * k % q == 1).unwrap();
        let mut gens = vec![IntVec::unit(n, 0).scale(q)];
        for (i, &img) in images.iter().enumerate().skip(1) {
            let mut g = IntVec::unit(n, i).into_inner();
            g[0] = -(img * inv).rem_euclid(q);
            gens.push(IntVec::from(g));
        }
        Lattice::from_generators(n, &gens).unwrap()
    }

    #[test]
    fn from_lattice_examples() {
        let t = PeriodicTiling::from_lattice(Tile::semicross(2), kernel_mod(3, &[1, 2])).unwrap();
        assert_eq!(t.centers().len(), 1);
        assert_eq!(t.period().det(), 3);
        let t = PeriodicTiling::from_lattice(Tile::cross(2), kernel_mod(5, &[1, 2])).unwrap();
        assert_eq!(t.period().det(), 5);
        assert!(matches!(
            PeriodicTiling::from_lattice(Tile::cross(2), Lattice::scaled_identity(2, 3).unwrap()),
            Err(Error::DensityMismatch { .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let t = PeriodicTiling::from_lattice(Tile::semicross(2), kernel_mod(3, &[1, 2])).unwrap();
        assert!(t.verify(100).unwrap().valid);
        let bad = PeriodicTiling::new(
            Tile::semicross(2),
            Lattice::scaled_identity(2, 3).unwrap(),
            [IntVec::zero(2)],
        );
        assert!(matches!(bad, Err(Error::DensityMismatch { .. })));
    }

    #[test]
    fn witnesses_for_broken_cover() {
        let l = Lattice::scaled_identity(2, 3).unwrap();
        let c = [[0, 0], [0, 0], [1, 1]].map(IntVec::from);
        let t = PeriodicTiling::new(Tile::semicross(2), l, c).unwrap();
        let r = t.verify(100).unwrap();
        assert!(!r.valid);
        assert!(r.doubly_covered.contains(&IntVec::from([0, 0])));
        assert_eq!(r.uncovered.len(), 3);
        assert_eq!(t.is_lattice_tiling(100).unwrap_err(), Error::InvalidTiling);
    }

    #[test]
    fn functional_examples() {
        let l = kernel_mod(3, &[1, 2]);
        let t = PeriodicTiling::from_lattice(Tile::semicross(2), l.clone()).unwrap();
        assert_eq!(t.functional_t(&[0, 0]), 1);
        assert_eq!(t.functional_t(&[1, 0]), 0);
        for b in l.basis() {
            assert_eq!(t.functional_t(b), 1);
        }
    }

    #[test]
    fn lattice_and_period() {
        let l = kernel_mod(5, &[1, 2, 4, 3]);
        let t = PeriodicTiling::from_lattice(Tile::semicross(4), l.clone()).unwrap();
        assert!(t.is_lattice_tiling(1000).unwrap());
        assert_eq!(t.period_lattice(1000).unwrap(), l);
        let single = Tile::new(2, &[IntVec::zero(2)]).unwrap();
        let t = PeriodicTiling::from_lattice(single, Lattice::identity(2)).unwrap();
        assert_eq!(t.period_lattice(10).unwrap(), Lattice::identity(2));
    }

    #[test]
    fn union_of_cosets_that_is_a_lattice() {
        // tile {0, e1} in Z^2, centers 2Z x Z seen on the torus 4Z x Z
        let tile = Tile::new(2, &[[0, 0], [1, 0]].map(IntVec::from)).unwrap();
        let period = Lattice::diagonal(&[4, 1]).unwrap();
        let t = PeriodicTiling::new(tile, period, [[0, 0], [2, 0]].map(IntVec::from)).unwrap();
        assert!(t.is_lattice_tiling(100).unwrap());
        assert_eq!(t.period_lattice(100).unwrap(), Lattice::diagonal(&[2, 1]).unwrap());
    }

    #[test]
    fn multiplier_checks() {
        let t = PeriodicTiling::from_lattice(Tile::semicross(4), kernel_mod(5, &[1, 2, 4, 3])).unwrap();
        for a in [1, -1, 2, 3, 4, 6] {
            assert!(t.check_product_identity(a, 1000).unwrap(), "a = {a}");
            assert!(t.check_difference_exclusion(a, 1000).unwrap(), "a = {a}");
        }
        assert!(matches!(
            t.check_product_identity(5, 1000),
            Err(Error::InvalidMultiplier { .. })
        ));
        assert!(matches!(
            t.check_difference_exclusion(10, 1000),
            Err(Error::InvalidMultiplier { .. })
        ));
    }

    #[test]
    fn canonical_form_relabels_scaled_kernels() {
        let a = PeriodicTiling::from_lattice(Tile::semicross(4), kernel_mod(5, &[1, 2, 4, 3])).unwrap();
        let b = PeriodicTiling::from_lattice(Tile::semicross(4), kernel_mod(5, &[2, 4, 3, 1])).unwrap();
        assert_eq!(a, b);
        let c = PeriodicTiling::from_lattice(Tile::semicross(4), kernel_mod(5, &[1, 2, 3, 4])).unwrap();
        assert_ne!(a, c);
        let ca = a.canonical_form(1 << 20, 1000).unwrap();
        assert_eq!(ca, c.canonical_form(1 << 20, 1000).unwrap());
        assert_eq!(ca.canonical_form(1 << 20, 1000).unwrap(), ca);
    }

    #[test]
    fn cyclic_shift_test() {
        let t = PeriodicTiling::from_lattice(Tile::semicross(4), kernel_mod(5, &[1, 2, 4, 3])).unwrap();
        assert!(t.is_cyclic());
        let t = PeriodicTiling::from_lattice(Tile::semicross(4), kernel_mod(5, &[1, 2, 3, 4])).unwrap();
        assert!(!t.is_cyclic());
        let t = PeriodicTiling::from_lattice(Tile::semicross(1), Lattice::diagonal(&[2]).unwrap()).unwrap();
        assert!(t.is_cyclic());
    }

    #[test]
    fn example_construction_shapes() {
        let t = example_nonlattice_construction(3).unwrap();
        assert_eq!(t.period().det(), 18);
        assert_eq!(t.centers().len(), 6);
        let t = example_nonlattice_construction(5).unwrap();
        assert_eq!(t.period().det(), 1250);
        assert_eq!(example_nonlattice_construction(4).unwrap_err(), Error::NotPrime(4));
    }
}
