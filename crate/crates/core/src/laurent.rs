//! Sparse Laurent polynomials over the integers and exact evaluation at
//! points whose coordinates are roots of unity.
//!
//! The tile polynomial of `V` is `Q_V = sum over v in V of x^(-v)`. Some
//! texts write it with `+v` exponents instead; the two differ by the power
//! substitution `a = -1`, and since the vanishing condition is checked for
//! every admissible multiplier at once, both conventions have exactly the
//! same common roots on the root-of-unity grid.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};
use crate::scalar::{factorize, is_prime, IntScalar};
use crate::tiles::Tile;
use crate::vector::{advance_odometer, IntVec};

/// Default cap on the number of grid points `m^n` visited per modulus.
pub const DEFAULT_ROOT_BUDGET: u64 = 1 << 22;

/// A Laurent polynomial in `dim` variables with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly<C> {
    dim: usize,
    terms: BTreeMap<IntVec, C>,
}

impl<C: IntScalar> LaurentPoly<C> {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponent: IntVec, coeff: C) -> Self {
        let mut p = Self::zero(exponent.dim());
        p.add_term(exponent, coeff);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (IntVec, C)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.dim(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exponent: IntVec, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&exponent);
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVec, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponent: &IntVec) -> C {
        self.terms.get(exponent).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `P(x_1^a, ..., x_n^a)`.
    pub fn substitute_power(&self, a: i64) -> Result<Self> {
        if a == 0 {
            return Err(Error::ZeroPower);
        }
        Ok(LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.scale(a), c.clone())).collect(),
        })
    }

    /// `P(1, ..., 1)`.
    pub fn eval_ones(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// Exact value at `(ζ_m^{a_1}, ..., ζ_m^{a_n})` as an element of `Z[x]/(x^m - 1)`.
    pub fn eval_at_root(&self, pt: &RootPoint) -> Result<CycloElt<C>> {
        if pt.exponents.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: pt.exponents.dim(),
            });
        }
        let m = pt.modulus;
        let mut coeffs = vec![C::zero(); m as usize];
        for (e, c) in &self.terms {
            let j = e.dot(&pt.exponents).mod_floor(&(m as i64)) as usize;
            coeffs[j] = coeffs[j].add_c(c)?;
        }
        Ok(CycloElt { modulus: m, coeffs })
    }

    /// Floating-point value at an arbitrary point of `(C^*)^n`.
    pub fn eval_complex<F: Float>(&self, point: &[Complex<F>]) -> Complex<F> {
        let mut acc = Complex::new(F::zero(), F::zero());
        for (e, c) in &self.terms {
            let mut term = Complex::new(c.to_f64().and_then(F::from).unwrap_or_else(F::nan), F::zero());
            for (x, &k) in point.iter().zip(e.iter()) {
                term = term * x.powi(k as i32);
            }
            acc = acc + term;
        }
        acc
    }
}

impl<C: IntScalar> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: IntScalar> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: IntScalar> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

/// The tile polynomial `Q_V`: one monomial `x^(-v)` per point `v` of the tile.
pub fn qv_poly<C: IntScalar>(tile: &Tile) -> LaurentPoly<C> {
    LaurentPoly {
        dim: tile.dim(),
        terms: tile.points().iter().map(|v| (-v, C::one())).collect(),
    }
}

/// The point `(ζ_m^{a_1}, ..., ζ_m^{a_n})` with `ζ_m = e^{2πi/m}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootPoint {
    modulus: u64,
    exponents: IntVec,
}

impl RootPoint {
    pub fn new(modulus: u64, exponents: &[i64]) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let m = modulus as i64;
        RootPoint {
            modulus,
            exponents: IntVec::from(exponents.iter().map(|a| a.mod_floor(&m)).collect::<Vec<_>>()),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &IntVec {
        &self.exponents
    }

    /// The point with every exponent multiplied by `b`.
    pub fn power(&self, b: i64) -> RootPoint {
        RootPoint::new(self.modulus, &self.exponents.scale(b))
    }

    pub fn to_complex<F: Float + FloatConst>(&self) -> Vec<Complex<F>> {
        let m = F::from(self.modulus).unwrap();
        self.exponents
            .iter()
            .map(|&a| {
                let theta = F::TAU() * F::from(a).unwrap() / m;
                Complex::new(theta.cos(), theta.sin())
            })
            .collect()
    }
}

/// An element `sum c_j ζ_m^j` of `Z[ζ_m]`, kept unreduced as a vector of
/// `m` coefficients in `Z[x]/(x^m - 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloElt<C> {
    modulus: u64,
    coeffs: Vec<C>,
}

impl<C: IntScalar> CycloElt<C> {
    pub fn new(modulus: u64, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() as u64 != modulus {
            return Err(Error::DimensionMismatch {
                expected: modulus as usize,
                got: coeffs.len(),
            });
        }
        Ok(CycloElt { modulus, coeffs })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Exact zero test in `Z[ζ_m]`.
    pub fn is_zero(&self) -> bool {
        vanishes_in_cyclotomic_ring(self.modulus, &self.coeffs)
    }

    pub fn to_complex<F: Float + FloatConst>(&self) -> Complex<F> {
        let m = F::from(self.modulus).unwrap();
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex::new(F::zero(), F::zero()), |acc, (j, c)| {
                let theta = F::TAU() * F::from(j).unwrap() / m;
                let c = c.to_f64().and_then(F::from).unwrap_or_else(F::nan);
                acc + Complex::new(theta.cos(), theta.sin()) * c
            })
    }
}

fn vanishes_in_cyclotomic_ring<C: IntScalar>(m: u64, coeffs: &[C]) -> bool {
    if is_prime(m as i64) {
        // 1 + ζ + ... + ζ^{m-1} = 0 is the only relation
        return coeffs.windows(2).all(|w| w[0] == w[1]);
    }
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let mut rem = coeffs.to_vec();
    for top in (deg..rem.len()).rev() {
        let lead = rem[top].clone();
        if lead.is_zero() {
            continue;
        }
        for (k, p) in phi.iter().enumerate() {
            let Some(p) = C::from_i64(*p) else { return false };
            let idx = top - deg + k;
            rem[idx] = rem[idx].clone() - lead.clone() * p;
        }
    }
    rem.iter().all(|c| c.is_zero())
}

/// Coefficients (ascending degree) of the `m`-th cyclotomic polynomial,
/// obtained by dividing `x^m - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for top in (dn..num.len()).rev() {
        let c = rem[top];
        quot[top - dn] = c;
        if c != 0 {
            for (k, d) in den.iter().enumerate() {
                rem[top - dn + k] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Residues `a mod m` whose class contains an integer coprime to `s`.
pub fn eligible_multipliers(m: u64, s: u64) -> Vec<u64> {
    let shared: Vec<u64> = factorize(m.gcd(&s)).into_iter().map(|(p, _)| p).collect();
    (0..m).filter(|a| shared.iter().all(|p| a % p != 0)).collect()
}

/// Outcome of [`common_root_search`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RootSearch {
    /// A common root on the grid of `m`-th roots of unity.
    Found(RootPoint),
    /// Nothing on the searched grids; no conclusion about other points.
    NotFoundOnGrid,
    /// Prime-size generating tile and the `q`-grid was exhausted: no common
    /// root exists anywhere in `(C^*)^n`.
    CertifiedAbsent,
}

impl RootSearch {
    pub fn found(&self) -> Option<&RootPoint> {
        match self {
            RootSearch::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// The default grid: `{|V|}` for prime sizes, otherwise every modulus from
/// 2 to `2|V|`.
pub fn default_moduli(tile: &Tile) -> Vec<u64> {
    let s = tile.len() as u64;
    if is_prime(s as i64) {
        vec![s]
    } else {
        (2..=2 * s.max(1)).collect()
    }
}

/// Whether `Q_V(x^b)` vanishes at `pt` for every admissible multiplier `b`.
pub fn is_common_root(tile: &Tile, pt: &RootPoint) -> Result<bool> {
    if pt.exponents().dim() != tile.dim() {
        return Err(Error::DimensionMismatch {
            expected: tile.dim(),
            got: pt.exponents().dim(),
        });
    }
    let m = pt.modulus();
    let residues = point_residues(tile, pt);
    Ok(vanishes_for_all(
        &residues,
        m,
        &eligible_multipliers(m, tile.len() as u64),
    ))
}

fn point_residues(tile: &Tile, pt: &RootPoint) -> Vec<u64> {
    let m = pt.modulus() as i64;
    tile.points()
        .iter()
        .map(|v| (-v.dot(pt.exponents())).mod_floor(&m) as u64)
        .collect()
}

fn vanishes_for_all(residues: &[u64], m: u64, multipliers: &[u64]) -> bool {
    let mut counts = vec![0i64; m as usize];
    multipliers.iter().all(|&b| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &r in residues {
            counts[(r * b % m) as usize] += 1;
        }
        vanishes_in_cyclotomic_ring(m, &counts)
    })
}

/// Searches root-of-unity grids for a point where `Q_V(x^a)` vanishes for
/// every `a` coprime to `|V|`.
///
/// Moduli are tried in the given order and points in lexicographic order of
/// their exponent vectors; the first witness is returned.
pub fn common_root_search(tile: &Tile, moduli: &[u64], budget: u64) -> Result<RootSearch> {
    let n = tile.dim();
    let s = tile.len() as u64;
    for &m in moduli {
        let points = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if points > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "root grid points",
                needed: points,
                limit: budget as u128,
            });
        }
    }
    let certifiable = is_prime(s as i64) && tile.generates_zn() && moduli.contains(&s);
    for &m in moduli {
        if m == 0 {
            continue;
        }
        let multipliers = eligible_multipliers(m, s);
        let mut exps = vec![0i64; n];
        loop {
            let pt = RootPoint {
                modulus: m,
                exponents: IntVec::from(exps.clone()),
            };
            if vanishes_for_all(&point_residues(tile, &pt), m, &multipliers) {
                return Ok(RootSearch::Found(pt));
            }
            if !advance_odometer(&mut exps, m as i64) {
                break;
            }
        }
    }
    Ok(if certifiable {
        RootSearch::CertifiedAbsent
    } else {
        RootSearch::NotFoundOnGrid
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> Tile {
        Tile::new(2, &[[0, 0], [1, 0], [0, 1], [2, 1]].map(IntVec::from)).unwrap()
    }

    fn poly(dim: usize, terms: &[(&[i64], i64)]) -> LaurentPoly<i64> {
        LaurentPoly::from_terms(dim, terms.iter().map(|(e, c)| (IntVec::from(*e), *c))).unwrap()
    }

    #[test]
    fn qv_examples() {
        let q: LaurentPoly<i64> = qv_poly(&Tile::semicross(2));
        assert_eq!(q, poly(2, &[(&[0, 0], 1), (&[-1, 0], 1), (&[0, -1], 1)]));
        let q: LaurentPoly<i64> = qv_poly(&fig2());
        assert_eq!(
            q,
            poly(2, &[(&[0, 0], 1), (&[-1, 0], 1), (&[0, -1], 1), (&[-2, -1], 1)])
        );
        let single = Tile::new(3, &[IntVec::zero(3)]).unwrap();
        assert_eq!(qv_poly::<i64>(&single), poly(3, &[(&[0, 0, 0], 1)]));
    }

    #[test]
    fn substitution_examples() {
        let p = poly(1, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(p.substitute_power(1).unwrap(), p);
        assert_eq!(p.substitute_power(-1).unwrap(), poly(1, &[(&[0], 1), (&[-1], 1)]));
        assert_eq!(
            qv_poly::<i64>(&Tile::semicross(2)).substitute_power(3).unwrap(),
            poly(2, &[(&[0, 0], 1), (&[-3, 0], 1), (&[0, -3], 1)])
        );
        assert_eq!(p.substitute_power(0).unwrap_err(), Error::ZeroPower);
    }

    #[test]
    fn evaluation_examples() {
        let q = qv_poly::<i64>(&fig2());
        let v = q.eval_at_root(&RootPoint::new(2, &[0, 1])).unwrap();
        assert!(v.is_zero());
        // 1 + 1 at ζ^0 and -1 - 1 at ζ^1
        assert_eq!(v.coeffs(), &[2, 2]);
        assert!(v.to_complex::<f64>().norm() < 1e-12);
        let p = poly(2, &[(&[3, -1], 4), (&[0, 0], -1)]);
        let at_one = p.eval_at_root(&RootPoint::new(1, &[0, 0])).unwrap();
        assert_eq!(at_one.coeffs(), &[3]);
        let s = qv_poly::<i64>(&Tile::semicross(2))
            .eval_at_root(&RootPoint::new(3, &[1, 2]))
            .unwrap();
        assert_eq!(s.coeffs(), &[1, 1, 1]);
        assert!(s.is_zero());
        assert!(matches!(
            q.eval_at_root(&RootPoint::new(2, &[0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_test_examples() {
        assert!(CycloElt::new(3, vec![1i64, 1, 1]).unwrap().is_zero());
        assert!(!CycloElt::new(3, vec![1i64, 0, 0]).unwrap().is_zero());
        assert!(CycloElt::new(4, vec![-1i64, 1, -1, 1]).unwrap().is_zero());
        assert!(!CycloElt::new(4, vec![1i64, 0, 1, 1]).unwrap().is_zero());
        assert!(CycloElt::new(1, vec![0i64]).unwrap().is_zero());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(eligible_multipliers(2, 4), vec![1]);
        assert_eq!(eligible_multipliers(5, 5), vec![1, 2, 3, 4]);
        assert_eq!(eligible_multipliers(3, 4), vec![0, 1, 2]);
    }

    #[test]
    fn root_search_examples() {
        let r = common_root_search(&fig2(), &[2], DEFAULT_ROOT_BUDGET).unwrap();
        assert_eq!(r, RootSearch::Found(RootPoint::new(2, &[0, 1])));

        let r = common_root_search(&Tile::semicross(4), &[5], DEFAULT_ROOT_BUDGET).unwrap();
        let pt = r.found().expect("semicross(4) has a root");
        let mut vals: Vec<i64> = Tile::semicross(4)
            .points()
            .iter()
            .map(|v| v.dot(pt.exponents()).rem_euclid(5))
            .collect();
        vals.sort();
        assert_eq!(vals, vec![0, 1, 2, 3, 4]);
        assert!(is_common_root(&Tile::semicross(4), &RootPoint::new(5, &[1, 2, 4, 3])).unwrap());

        let two = Tile::new(1, &[IntVec::from([0]), IntVec::from([2])]).unwrap();
        assert_eq!(common_root_search(&two, &[2], 100).unwrap(), RootSearch::NotFoundOnGrid);
        assert_eq!(
            common_root_search(&two, &[4], 100).unwrap(),
            RootSearch::Found(RootPoint::new(4, &[1]))
        );
    }

    #[test]
    fn certified_absence_for_prime_generating_tiles() {
        // {0, e1, 2e1} has size 3, generates Z, and does not tile
        let t = Tile::new(1, &[[0], [1], [3]].map(IntVec::from)).unwrap();
        assert_eq!(common_root_search(&t, &[3], 100).unwrap(), RootSearch::CertifiedAbsent);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            common_root_search(&Tile::semicross(6), &[7], 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
