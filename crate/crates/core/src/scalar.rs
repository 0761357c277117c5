//! Scalar abstractions shared by the exact linear algebra and polynomial code.
//!
//! Integer routines are generic over [`IntScalar`], so the same Hermite/Smith
//! code runs on `i64`, `i128` or arbitrary-precision [`num_bigint::BigInt`].
//! Every operation that can grow an entry goes through the checked helpers
//! below and reports [`Error::Overflow`] instead of wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// An exact signed integer type usable as a matrix or coefficient entry.
pub trait IntScalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn add_c(&self, other: &Self) -> Result<Self> {
        self.checked_add(other).ok_or(Error::Overflow)
    }

    fn sub_c(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other).ok_or(Error::Overflow)
    }

    fn mul_c(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other).ok_or(Error::Overflow)
    }

    fn from_i64_c(v: i64) -> Result<Self> {
        Self::from_i64(v).ok_or(Error::Overflow)
    }

    fn to_i64_c(&self) -> Result<i64> {
        self.to_i64().ok_or(Error::Overflow)
    }
}

impl<T> IntScalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Send
        + Sync
        + 'static
{
}

/// Extended gcd with a nonnegative gcd: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn ext_gcd<S: IntScalar>(a: &S, b: &S) -> Result<(S, S, S)> {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (S::one(), S::zero());
    let (mut old_t, mut t) = (S::zero(), S::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r.sub_c(&q.mul_c(&r)?)?;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = old_s.sub_c(&q.mul_c(&s)?)?;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = old_t.sub_c(&q.mul_c(&t)?)?;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        Ok((-old_r, -old_s, -old_t))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in ascending prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
