//! Codeword-type census for tilings by semi-crosses `{0, e_1, ..., e_{p-1}}`.
//!
//! A word `Z` has type `[m_1^a_1, ..., m_s^a_s]` with respect to `W` when
//! `Z - W` has exactly `a_i` coordinates equal to `m_i` and all other
//! coordinates zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{binomial, is_prime};
use crate::tiles::Tile;
use crate::tiling::PeriodicTiling;
use crate::vector::IntVec;

/// Reference words examined per kind (center / non-center) by the checks.
pub const DEFAULT_SAMPLES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeSpec {
    entries: Vec<(i64, u32)>,
}

impl TypeSpec {
    pub fn new(entries: Vec<(i64, u32)>) -> Result<Self> {
        for (i, &(m, a)) in entries.iter().enumerate() {
            if m == 0 || a == 0 {
                return Err(Error::InvalidType(format!(
                    "entry {m}^{a} needs a nonzero value and multiplicity"
                )));
            }
            if entries[..i].iter().any(|&(v, _)| v == m) {
                return Err(Error::InvalidType(format!("value {m} repeated")));
            }
        }
        Ok(TypeSpec { entries })
    }

    /// `[m^k]`.
    pub fn uniform(m: i64, k: u32) -> Result<Self> {
        TypeSpec::new(vec![(m, k)])
    }

    pub fn entries(&self) -> &[(i64, u32)] {
        &self.entries
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.entries.iter().map(|&(_, a)| a as usize).sum()
    }

    /// Every vector in Z^n of this type, in lexicographic order of the
    /// chosen supports.
    pub fn vectors(&self, n: usize) -> Result<Vec<IntVec>> {
        if self.weight() > n {
            return Err(Error::InvalidType(format!(
                "{self} has weight {} > dimension {n}",
                self.weight()
            )));
        }
        let mut out = Vec::new();
        fill(&self.entries, &mut vec![0; n], 0, 0, &mut out);
        Ok(out)
    }
}

fn fill(entries: &[(i64, u32)], word: &mut Vec<i64>, entry: usize, from: usize, out: &mut Vec<IntVec>) {
    let Some(&(m, a)) = entries.get(entry) else {
        out.push(IntVec::from(word.clone()));
        return;
    };
    // place the remaining copies of m at positions >= from, then the next entry
    if a == 0 {
        return fill(entries, word, entry + 1, 0, out);
    }
    for pos in from..word.len() {
        if word[pos] == 0 {
            word[pos] = m;
            let mut rest = entries.to_vec();
            rest[entry].1 = a - 1;
            fill(&rest, word, entry, pos + 1, out);
            word[pos] = 0;
        }
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(m, a)| format!("{m}^{a}")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Parses `1^2,-1^1`, with optional brackets; a bare value means multiplicity 1.
impl FromStr for TypeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let bad = |part: &str| Error::InvalidType(format!("cannot parse type entry {part:?}"));
        let entries = body
            .split(',')
            .map(|part| {
                let part = part.trim();
                let (m, a) = part.split_once('^').unwrap_or((part, "1"));
                Ok((
                    m.trim().parse().map_err(|_| bad(part))?,
                    a.trim().parse().map_err(|_| bad(part))?,
                ))
            })
            .collect::<Result<_>>()?;
        TypeSpec::new(entries)
    }
}

/// Number of centers `Z` with `Z - W` of the given type; `W` may be any word.
pub fn census_at(t: &PeriodicTiling, w: &IntVec, spec: &TypeSpec) -> Result<u64> {
    if w.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            got: w.dim(),
        });
    }
    Ok(spec.vectors(t.dim())?.iter().filter(|d| t.is_center(&(w + *d))).count() as u64)
}

/// [`census_at`] for a reference word that must be a center.
pub fn census(t: &PeriodicTiling, w: &IntVec, spec: &TypeSpec) -> Result<u64> {
    if w.dim() != t.dim() || !t.is_center(w) {
        return Err(Error::InvalidCenter(w.to_string()));
    }
    census_at(t, w, spec)
}

/// Number of codewords of type `[1^k]` in a semi-cross tiling of Z^{p-1},
/// with respect to a codeword or a non-codeword.
pub fn expected_type1k(p: i64, k: u32, origin_is_codeword: bool) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k as i64 >= p {
        return Err(Error::InvalidType(format!("k = {k} outside 1..{p}")));
    }
    let c = binomial(p as u64 - 1, k as u64) as i128;
    let sign: i128 = if k.is_multiple_of(2) { 1 } else { -1 };
    let num = if origin_is_codeword {
        c + (p as i128 - 1) * sign
    } else {
        c - sign
    };
    if num % p as i128 != 0 {
        return Err(Error::NonIntegral {
            p: p as u64,
            k: k as u64,
        });
    }
    Ok((num / p as i128) as i64)
}

/// The prime `p` with `tile = semicross(p - 1)`.
fn semicross_prime(t: &PeriodicTiling) -> Result<i64> {
    let n = t.dim();
    let p = n as i64 + 1;
    if *t.tile() != Tile::semicross(n) || !is_prime(p) {
        return Err(Error::WrongTile(format!(
            "expected the semi-cross of prime size, got {:?}",
            t.tile()
        )));
    }
    Ok(p)
}

/// Evenly spread centers, and next to each one a non-center word.
pub fn sample_references(t: &PeriodicTiling, samples: usize) -> (Vec<IntVec>, Vec<IntVec>) {
    let cs = t.centers();
    let n = t.dim();
    let count = samples.min(cs.len());
    let centers: Vec<IntVec> = (0..count).map(|i| cs[i * cs.len() / count].clone()).collect();
    let others = centers
        .iter()
        .enumerate()
        .map(|(i, c)| c + &IntVec::unit(n, i % n))
        .filter(|w| !t.is_center(w))
        .collect();
    (centers, others)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub spec: TypeSpec,
    pub reference: IntVec,
    pub reference_is_center: bool,
    pub observed: u64,
    /// None where no closed formula is known.
    pub expected: Option<i64>,
}

impl CensusRow {
    pub fn passed(&self) -> bool {
        self.expected.is_none_or(|e| e == self.observed as i64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CensusRow::passed)
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type\treference\tclass\tobserved\texpected")?;
        for r in &self.rows {
            let class = if r.reference_is_center {
                "codeword"
            } else {
                "non-codeword"
            };
            let expected = r.expected.map_or("-".to_string(), |e| e.to_string());
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{}",
                r.spec, r.reference, class, r.observed, expected
            )?;
        }
        Ok(())
    }
}

/// Rows for `[m^k]` with m ∈ {-1, 1, 2, ..., p-1} against sampled codewords
/// and non-codewords; each must equal the `[1^k]` formula.
pub fn type_census_rows(t: &PeriodicTiling, k: u32, samples: usize) -> Result<Vec<CensusRow>> {
    let p = semicross_prime(t)?;
    let (centers, others) = sample_references(t, samples);
    let mut rows = Vec::new();
    for m in std::iter::once(-1).chain(1..p) {
        let spec = TypeSpec::uniform(m, k)?;
        for (refs, is_center) in [(&centers, true), (&others, false)] {
            for w in refs {
                rows.push(CensusRow {
                    spec: spec.clone(),
                    reference: w.clone(),
                    reference_is_center: is_center,
                    observed: census_at(t, w, &spec)?,
                    expected: Some(expected_type1k(p, k, is_center)?),
                });
            }
        }
    }
    Ok(rows)
}

pub fn check_type_census(t: &PeriodicTiling, k: u32) -> Result<bool> {
    Ok(type_census_rows(t, k, DEFAULT_SAMPLES)?.iter().all(CensusRow::passed))
}

/// The codewords of type `[1^2]` around `W` differ from it by vectors summing
/// to `(1, ..., 1)`, and those of type `[-1^2]` by vectors summing to its
/// negative; each family has `(p-1)/2` members.
pub fn check_pair_sums(t: &PeriodicTiling, w: &IntVec) -> Result<bool> {
    let p = semicross_prime(t)?;
    if !t.is_center(w) {
        return Err(Error::InvalidCenter(w.to_string()));
    }
    let n = t.dim();
    for sign in [1, -1] {
        let found: Vec<IntVec> = TypeSpec::uniform(sign, 2)?
            .vectors(n)?
            .into_iter()
            .filter(|d| t.is_center(&(w + d)))
            .collect();
        let sum = found.iter().fold(IntVec::zero(n), |acc, d| &acc + d);
        if found.len() as i64 != (p - 1) / 2 || sum != IntVec::from(vec![sign; n]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Center set invariant under `±(1, ..., 1)`.
pub fn check_all_ones_shift(t: &PeriodicTiling) -> bool {
    t.is_invariant_under(&IntVec::from(vec![1; t.dim()]))
}

/// No codeword of type `[a^1]` or `[a^1, (-a)^1]` around any center, for
/// `1 <= a <= p - 1`.
pub fn check_no_short_types(t: &PeriodicTiling) -> Result<bool> {
    let p = semicross_prime(t)?;
    let n = t.dim();
    let mut diffs = Vec::new();
    for a in 1..p {
        diffs.extend(TypeSpec::uniform(a, 1)?.vectors(n)?);
        if n >= 2 {
            diffs.extend(TypeSpec::new(vec![(a, 1), (-a, 1)])?.vectors(n)?);
        }
    }
    Ok(t.centers().iter().all(|c| diffs.iter().all(|d| !t.is_center(&(c + d)))))
}

/// Census table over `[m^k]` for every `k` in `1..p`, plus mixed types
/// `[1^k, -1^1]` whose counts have no known formula and are only recorded.
pub fn census_report(t: &PeriodicTiling, samples: usize) -> Result<CensusReport> {
    let p = semicross_prime(t)?;
    let mut rows = Vec::new();
    for k in 1..p as u32 {
        rows.extend(type_census_rows(t, k, samples)?);
    }
    let (centers, others) = sample_references(t, samples);
    for k in 1..(p as u32 - 1) {
        let spec = TypeSpec::new(vec![(1, k), (-1, 1)])?;
        for (refs, is_center) in [(&centers, true), (&others, false)] {
            for w in refs {
                rows.push(CensusRow {
                    spec: spec.clone(),
                    reference: w.clone(),
                    reference_is_center: is_center,
                    observed: census_at(t, w, &spec)?,
                    expected: None,
                });
            }
        }
    }
    Ok(CensusReport { rows })
}
