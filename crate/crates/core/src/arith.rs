//! Exact rational scalars, interval enclosures of limits, cotransitive
//! comparison and the diagonal pairing bijection used to flatten double series.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    /// `2^-n`.
    pub fn pow2_neg(n: u32) -> Self {
        Scalar(BigRational::new(BigInt::one(), BigInt::one() << n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn min(&self, other: &Scalar) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Scalar) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(&self.0 / &other.0))
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p`, `p/q`, `-p/q`. No decimals.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseScalar(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let valid = |x: &str, signed: bool| {
            let digits = if signed { x.strip_prefix('-').unwrap_or(x) } else { x };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(num, true) || !valid(den, false) {
            return Err(bad());
        }
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(n, d)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// A real known to lie in the closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarInterval {
    lo: Scalar,
    hi: Scalar,
}

impl ScalarInterval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval lower end {lo} exceeds upper end {hi}"
            )));
        }
        Ok(ScalarInterval { lo, hi })
    }

    pub fn point(x: Scalar) -> Self {
        ScalarInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// The exact value when the interval is degenerate.
    pub fn exact(&self) -> Option<&Scalar> {
        (self.lo == self.hi).then_some(&self.lo)
    }
}

impl fmt::Display for ScalarInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Outcome of a cotransitive comparison `a < hi or a > lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// `a < hi`
    BelowHi,
    /// `a > lo`
    AboveLo,
}

/// Decides one true disjunct of `a < hi or a > lo` for `lo < hi`.
///
/// Compares `a` against the midpoint; `a <= (lo + hi) / 2` yields
/// [`Decision::BelowHi`].
pub fn cotransitive_compare(a: &Scalar, lo: &Scalar, hi: &Scalar) -> Result<Decision> {
    if lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "cotransitive comparison needs lo < hi, got lo={lo}, hi={hi}"
        )));
    }
    let mid = Scalar((&lo.0 + &hi.0) / BigInt::from(2));
    Ok(match a.cmp(&mid) {
        Ordering::Less | Ordering::Equal => Decision::BelowHi,
        Ordering::Greater => Decision::AboveLo,
    })
}

fn triangular(d: u128) -> u128 {
    d * (d + 1) / 2
}

/// Diagonal enumeration `N+ -> N+ x N+`: 1 -> (1,1), 2 -> (1,2), 3 -> (2,1),
/// 4 -> (1,3), ...; each antidiagonal `p + q = d + 1` is walked with `p`
/// increasing.
pub fn pair(n: u64) -> Result<(u64, u64)> {
    if n < 1 {
        return Err(Error::InvalidArgument("pair index must be >= 1".into()));
    }
    let n = n as u128;
    // smallest d with T(d) >= n
    let mut d = ((8 * n + 1).sqrt() - 1) / 2;
    while triangular(d) < n {
        d += 1;
    }
    while d > 1 && triangular(d - 1) >= n {
        d -= 1;
    }
    let k = n - triangular(d - 1);
    Ok((k as u64, (d + 1 - k) as u64))
}

/// Inverse of [`pair`].
pub fn unpair(p: u64, q: u64) -> Result<u64> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidArgument("unpair arguments must be >= 1".into()));
    }
    let d = p as u128 + q as u128 - 1;
    let n = triangular(d - 1) + p as u128;
    u64::try_from(n).map_err(|_| Error::InvalidArgument("unpair overflow".into()))
}

/// Encloses an infinite sum from its first `n` terms and a certified bound on
/// the remainder.
pub fn sum_with_tail(partials: &[Scalar], tail_bound: &Scalar, n: usize) -> Result<ScalarInterval> {
    if tail_bound.is_negative() {
        return Err(Error::InvalidArgument(format!("negative tail bound {tail_bound}")));
    }
    if n > partials.len() {
        return Err(Error::InvalidArgument(format!(
            "truncation {n} exceeds the {} supplied terms",
            partials.len()
        )));
    }
    let head: Scalar = partials[..n].iter().sum();
    ScalarInterval::new(&head - tail_bound, &head + tail_bound)
}
