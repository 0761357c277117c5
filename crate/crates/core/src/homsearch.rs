//! Homomorphisms from Z^n onto finite abelian groups that are bijective on a
//! tile. Such a map exists iff the tile admits a lattice tiling, and its
//! kernel is the lattice of centers.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::scalar::{factorize, is_prime};
use crate::tiles::Tile;
use crate::tiling::PeriodicTiling;
use crate::vector::IntVec;

/// Default cap on search-tree nodes per group in [`find_bijective_hom`].
pub const DEFAULT_HOM_BUDGET: u64 = 1 << 26;

/// `Z_{d_1} x ... x Z_{d_k}` with `d_1 | d_2 | ... | d_k`, all `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    /// Validates an invariant-factor list.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidType(format!(
                "not an invariant-factor chain: {factors:?}"
            )));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            AbelianGroup { factors: vec![] }
        } else {
            AbelianGroup { factors: vec![n] }
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&d, (&x, &y))| (x + y) % d)
            .collect()
    }

    /// `k * g` for an integer `k` of either sign.
    pub fn scale(&self, g: &[u64], k: i64) -> Vec<u64> {
        self.factors
            .iter()
            .zip(g)
            .map(|(&d, &x)| ((x as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    /// Position of an element in the lexicographic enumeration of the group.
    pub fn index_of(&self, g: &[u64]) -> u64 {
        self.factors.iter().zip(g).fold(0, |acc, (&d, &x)| acc * d + x)
    }

    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

fn partitions(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=n.min(max)).rev() {
        cur.push(part);
        partitions(n - part, part, cur, out);
        cur.pop();
    }
}

/// One group per isomorphism class of abelian groups of order `s`, cyclic
/// first, then by number of invariant factors and lexicographically.
pub fn abelian_groups_of_order(s: u64) -> Vec<AbelianGroup> {
    assert!(s >= 1, "group order must be positive");
    let primes = factorize(s);
    let per_prime: Vec<Vec<Vec<u32>>> = primes
        .iter()
        .map(|&(_, e)| {
            let mut out = Vec::new();
            partitions(e, e, &mut Vec::new(), &mut out);
            out
        })
        .collect();
    let mut groups = Vec::new();
    let mut choice = vec![0usize; primes.len()];
    loop {
        let len = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| per_prime[i][c].len())
            .max()
            .unwrap_or(0);
        // the j-th largest invariant factor collects the j-th largest part of every prime
        let mut factors = vec![1u64; len];
        for (i, &c) in choice.iter().enumerate() {
            let (p, _) = primes[i];
            for (j, &part) in per_prime[i][c].iter().enumerate() {
                factors[len - 1 - j] *= p.pow(part);
            }
        }
        groups.push(AbelianGroup { factors });
        let mut i = primes.len();
        loop {
            if i == 0 {
                groups.sort_by(|a, b| (a.factors.len(), &a.factors).cmp(&(b.factors.len(), &b.factors)));
                return groups;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < per_prime[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// A homomorphism `Z^n -> G` given by the images of the standard basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    group: AbelianGroup,
    images: Vec<Vec<u64>>,
}

impl GroupHom {
    pub fn new(group: AbelianGroup, images: Vec<Vec<u64>>) -> Result<Self> {
        let k = group.factors.len();
        let images = images
            .into_iter()
            .map(|g| {
                if g.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        got: g.len(),
                    });
                }
                Ok(g.iter().zip(&group.factors).map(|(&x, &d)| x % d).collect())
            })
            .collect::<Result<_>>()?;
        Ok(GroupHom { group, images })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<u64> {
        x.iter().zip(&self.images).fold(self.group.zero(), |acc, (&k, g)| {
            self.group.add(&acc, &self.group.scale(g, k))
        })
    }

    /// Whether the restriction to the tile is a bijection onto the group.
    pub fn is_bijective_on(&self, tile: &Tile) -> bool {
        if tile.len() as u64 != self.group.order() {
            return false;
        }
        let imgs: BTreeSet<Vec<u64>> = tile.points().iter().map(|v| self.apply(v)).collect();
        imgs.len() == tile.len()
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:", self.group)?;
        for g in &self.images {
            write!(f, " {g:?}")?;
        }
        Ok(())
    }
}

/// `{x : sum x_i φ(e_i) = 0}` in Hermite form. Errors unless φ is onto.
pub fn kernel_lattice(hom: &GroupHom) -> Result<Lattice> {
    let n = hom.dim();
    let factors = hom.group.factors();
    let k = factors.len();
    // rows [φ(e_i) | e_i] and [d_j e_j | 0]; the rows of the Hermite form with
    // zero group part span exactly the kernel
    let mut gens = Vec::with_capacity(n + k);
    for (i, g) in hom.images.iter().enumerate() {
        let mut row: Vec<i64> = g.iter().map(|&x| x as i64).collect();
        row.extend(IntVec::unit(n, i).iter());
        gens.push(IntVec::from(row));
    }
    for (j, &d) in factors.iter().enumerate() {
        let mut row = vec![0i64; n + k];
        row[j] = d as i64;
        gens.push(IntVec::from(row));
    }
    let big = Lattice::from_generators(n + k, &gens)?;
    let kernel_gens: Vec<IntVec> = big.basis()[k..].iter().map(|r| IntVec::from(&r[k..])).collect();
    let kernel = Lattice::from_generators(n, &kernel_gens)?;
    let order = hom.group.order();
    if kernel.det() != order {
        return Err(Error::NotSurjective {
            image: kernel.det(),
            order,
        });
    }
    Ok(kernel)
}

struct HomSearch<'a> {
    group: &'a AbelianGroup,
    elements: Vec<Vec<u64>>,
    // points whose last nonzero coordinate is j become known after choosing image j
    ready: Vec<Vec<&'a IntVec>>,
    images: Vec<Vec<u64>>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    enumerate_all: bool,
    found: Vec<Vec<Vec<u64>>>,
}

impl HomSearch<'_> {
    fn image_of(&self, v: &IntVec) -> Vec<u64> {
        v.iter().zip(&self.images).fold(self.group.zero(), |acc, (&k, g)| {
            self.group.add(&acc, &self.group.scale(g, k))
        })
    }

    /// Returns `Ok(true)` to stop the search.
    fn descend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.ready.len() {
            self.found.push(self.images.clone());
            return Ok(!self.enumerate_all);
        }
        for e in 0..self.elements.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "homomorphism search nodes",
                    needed: self.nodes as u128,
                    limit: self.budget as u128,
                });
            }
            self.images.push(self.elements[e].clone());
            let mut marked = Vec::new();
            let mut ok = true;
            for v in &self.ready[depth] {
                let idx = self.group.index_of(&self.image_of(v)) as usize;
                if self.used[idx] {
                    ok = false;
                    break;
                }
                self.used[idx] = true;
                marked.push(idx);
            }
            let stop = ok && self.descend(depth + 1)?;
            for idx in marked {
                self.used[idx] = false;
            }
            self.images.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn search_group(tile: &Tile, group: &AbelianGroup, budget: u64, enumerate_all: bool) -> Result<Vec<GroupHom>> {
    let n = tile.dim();
    let mut ready: Vec<Vec<&IntVec>> = vec![Vec::new(); n];
    for v in tile.nonzero_points() {
        let last = v.iter().rposition(|&c| c != 0).expect("nonzero point");
        ready[last].push(v);
    }
    let order = group.order();
    let mut used = vec![false; order as usize];
    used[0] = true;
    let mut s = HomSearch {
        group,
        elements: (0..order).map(|i| group.element(i)).collect(),
        ready,
        images: Vec::with_capacity(n),
        used,
        nodes: 0,
        budget,
        enumerate_all,
        found: Vec::new(),
    };
    s.descend(0)?;
    s.found
        .into_iter()
        .map(|images| GroupHom::new(group.clone(), images))
        .collect()
}

/// First homomorphism (groups in canonical order, images lexicographic) that
/// is bijective on the tile, together with its kernel.
pub fn find_bijective_hom(tile: &Tile, budget: u64) -> Result<Option<(GroupHom, Lattice)>> {
    for group in abelian_groups_of_order(tile.len() as u64) {
        if let Some(hom) = search_group(tile, &group, budget, false)?.into_iter().next() {
            let kernel = kernel_lattice(&hom)?;
            return Ok(Some((hom, kernel)));
        }
    }
    Ok(None)
}

/// Every bijective homomorphism, one per distinct kernel lattice.
pub fn find_all_bijective_homs(tile: &Tile, budget: u64) -> Result<Vec<(GroupHom, Lattice)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for group in abelian_groups_of_order(tile.len() as u64) {
        for hom in search_group(tile, &group, budget, true)? {
            let kernel = kernel_lattice(&hom)?;
            if seen.insert(kernel.clone()) {
                out.push((hom, kernel));
            }
        }
    }
    Ok(out)
}

/// Smallest positive primitive root modulo an odd prime.
pub fn primitive_root(q: i64) -> Result<i64> {
    if !(is_prime(q) && q > 2) {
        return Err(Error::NotPrime(q));
    }
    let phi = q - 1;
    let prime_divisors: Vec<i64> = factorize(phi as u64).into_iter().map(|(p, _)| p as i64).collect();
    let pow = |mut b: i64, mut e: i64| {
        let mut acc = 1i64;
        b %= q;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % q;
            }
            b = b * b % q;
            e >>= 1;
        }
        acc
    };
    Ok((2..q)
        .find(|&t| prime_divisors.iter().all(|&p| pow(t, phi / p) != 1))
        .expect("primes have primitive roots"))
}

/// `φ(e_i) = t^{i-1} mod q` for the smallest primitive root `t`.
pub fn cyclic_semicross_hom(q: i64) -> Result<GroupHom> {
    let t = primitive_root(q)?;
    let mut images = Vec::with_capacity(q as usize - 1);
    let mut acc = 1i64;
    for _ in 0..q - 1 {
        images.push(vec![acc as u64]);
        acc = acc * t % q;
    }
    GroupHom::new(AbelianGroup::cyclic(q as u64), images)
}

/// The lattice tiling of Z^{q-1} by semi-crosses whose lattice is the kernel
/// of [`cyclic_semicross_hom`]; it is invariant under the cyclic shift.
pub fn cyclic_semicross_tiling(q: i64) -> Result<PeriodicTiling> {
    let hom = cyclic_semicross_hom(q)?;
    let kernel = kernel_lattice(&hom)?;
    PeriodicTiling::from_lattice(Tile::semicross(q as usize - 1), kernel)
}
