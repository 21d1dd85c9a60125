//! Exact and truncated p-adic scalars.
//!
//! Every scalar is either an exact rational viewed inside `Q_p`, or a
//! truncated expansion `sum d_i p^(v+i) + O(p^N)` with explicit absolute
//! precision `N`. Exact rationals are the default for all geometric
//! predicates; truncated mode only appears as the output of series and
//! Hensel iterations, and in arithmetic mixing the two.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{PadicError, Result};
use crate::prime::Prime;

/// A p-adic valuation: an integer or positive infinity (ord of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(n) => Some(*n),
            Valuation::Infinity => None,
        }
    }

    pub fn at_least(&self, n: i64) -> bool {
        match self {
            Valuation::Finite(v) => *v >= n,
            Valuation::Infinity => true,
        }
    }

    pub fn is_even(&self) -> bool {
        match self {
            Valuation::Finite(v) => v % 2 == 0,
            Valuation::Infinity => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => std::cmp::Ordering::Equal,
            (Valuation::Infinity, _) => std::cmp::Ordering::Greater,
            (_, Valuation::Infinity) => std::cmp::Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(n) => write!(f, "{n}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

/// Number of guaranteed digits requested from a series or Hensel iteration,
/// counted as absolute precision from valuation 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesTruncation {
    target: i64,
}

impl SeriesTruncation {
    pub const DEFAULT_DIGITS: i64 = 32;

    pub fn new(target_absolute_precision: i64) -> Result<Self> {
        if target_absolute_precision < 1 {
            return Err(PadicError::ParseError(
                "target absolute precision must be >= 1".into(),
            ));
        }
        Ok(Self {
            target: target_absolute_precision,
        })
    }

    pub fn default_precision() -> Self {
        Self {
            target: Self::DEFAULT_DIGITS,
        }
    }

    pub fn target(&self) -> i64 {
        self.target
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Truncated {
    /// Position of the first known nonzero digit. Equals `abs_precision`
    /// when `digits` is empty, which encodes `O(p^abs_precision)`.
    pub valuation: i64,
    /// Digits in `[0, p-1]`, leading digit nonzero when non-empty.
    pub digits: Vec<u32>,
    /// The value is known modulo `p^abs_precision`.
    pub abs_precision: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Repr {
    Exact(BigRational),
    Truncated(Truncated),
}

/// A p-adic number: an exact rational in `Q_p`, or a truncated expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicScalar {
    prime: Prime,
    pub(crate) repr: Repr,
}

pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `n` as an exact rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(big(n))
}

/// `n/d` as an exact rational.
pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

/// ord_p of a nonzero `BigInt`.
fn int_ord(p: u64, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return v;
        }
    }
}

/// ord_p of a rational; `Infinity` for zero.
pub(crate) fn rational_ord(p: u64, r: &BigRational) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinity;
    }
    Valuation::Finite(int_ord(p, r.numer()) - int_ord(p, r.denom()))
}

/// Strips all powers of `p`: returns `(ord, unit)` with `unit` a p-adic unit.
pub(crate) fn split_unit(p: u64, r: &BigRational) -> (i64, BigRational) {
    let v = rational_ord(p, r).finite().expect("split_unit of zero");
    let scale = BigRational::from_integer(BigInt::from(p)).pow(v as i32);
    (v, r / scale)
}

/// Canonical residue in `[0, p^k)` of a rational with non-negative ord and
/// denominator coprime to `p`.
pub(crate) fn rational_mod_pk(p: u64, r: &BigRational, k: u32) -> BigInt {
    let modulus = BigInt::from(p).pow(k);
    let a = r.numer().mod_floor(&modulus);
    let b = r.denom().mod_floor(&modulus);
    let b_inv = mod_inverse(&b, &modulus).expect("denominator not coprime to p");
    (a * b_inv).mod_floor(&modulus)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl Truncated {
    fn zero_at(prec: i64) -> Self {
        Self {
            valuation: prec,
            digits: Vec::new(),
            abs_precision: prec,
        }
    }

    /// Reconstructs the known part as an exact rational.
    pub(crate) fn known_value(&self, p: u64) -> BigRational {
        let p_big = BigRational::from_integer(BigInt::from(p));
        let mut acc = BigRational::zero();
        let mut pw = p_big.pow(self.valuation as i32);
        for &d in &self.digits {
            acc += &pw * BigRational::from_integer(BigInt::from(d));
            pw *= &p_big;
        }
        acc
    }
}

/// Canonical digit expansion of `value` up to absolute precision `prec`.
pub(crate) fn truncate_rational(prime: Prime, value: &BigRational, prec: i64) -> Truncated {
    let p = prime.value();
    match rational_ord(p, value) {
        Valuation::Infinity => Truncated::zero_at(prec),
        Valuation::Finite(v) if v >= prec => Truncated::zero_at(prec),
        Valuation::Finite(v) => {
            let (_, unit) = split_unit(p, value);
            let count = (prec - v) as u32;
            let mut residue = rational_mod_pk(p, &unit, count);
            let p_big = BigInt::from(p);
            let mut digits = Vec::with_capacity(count as usize);
            for _ in 0..count {
                let (q, r) = residue.div_rem(&p_big);
                let d: u32 = r.try_into().expect("digit fits u32");
                digits.push(d);
                residue = q;
            }
            debug_assert!(digits[0] != 0);
            Truncated {
                valuation: v,
                digits,
                abs_precision: prec,
            }
        }
    }
}

impl PadicScalar {
    pub fn from_rational(prime: Prime, value: BigRational) -> Self {
        Self {
            prime,
            repr: Repr::Exact(value),
        }
    }

    pub fn from_integer(prime: Prime, n: i64) -> Self {
        Self::from_rational(prime, rat(n))
    }

    pub fn from_fraction(prime: Prime, numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_rational(prime, rat_frac(numer, denom))
    }

    pub fn zero(prime: Prime) -> Self {
        Self::from_rational(prime, BigRational::zero())
    }

    pub fn one(prime: Prime) -> Self {
        Self::from_rational(prime, BigRational::one())
    }

    pub(crate) fn from_truncated(prime: Prime, t: Truncated) -> Self {
        Self {
            prime,
            repr: Repr::Truncated(t),
        }
    }

    /// Builds a truncated scalar from a known rational value and an absolute
    /// precision: the result represents `value + O(p^prec)`.
    pub fn truncation_of(prime: Prime, value: &BigRational, prec: i64) -> Self {
        Self::from_truncated(prime, truncate_rational(prime, value, prec))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// The exact rational value, when this scalar is exact.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Exact(r) => Some(r),
            Repr::Truncated(_) => None,
        }
    }

    /// The known part: the exact value, or the digit sum of a truncation.
    pub fn known_value(&self) -> BigRational {
        match &self.repr {
            Repr::Exact(r) => r.clone(),
            Repr::Truncated(t) => t.known_value(self.prime.value()),
        }
    }

    /// Absolute precision: `None` for exact scalars (infinitely many
    /// guaranteed digits).
    pub fn precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Truncated(t) => Some(t.abs_precision),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact(r) if r.is_zero())
    }

    /// True when the value is indistinguishable from zero at its precision
    /// (exact zero, or a truncation whose known digits are all zero).
    pub fn is_zero_at_precision(&self) -> bool {
        match &self.repr {
            Repr::Exact(r) => r.is_zero(),
            Repr::Truncated(t) => t.digits.is_empty(),
        }
    }

    /// The p-adic valuation. `Infinity` for exact zero;
    /// `InsufficientPrecision` for a truncation that looks like zero.
    pub fn ord(&self) -> Result<Valuation> {
        match &self.repr {
            Repr::Exact(r) => Ok(rational_ord(self.prime.value(), r)),
            Repr::Truncated(t) => {
                if t.digits.is_empty() {
                    Err(PadicError::InsufficientPrecision(format!(
                        "value is O(p^{}) and indistinguishable from zero",
                        t.abs_precision
                    )))
                } else {
                    Ok(Valuation::Finite(t.valuation))
                }
            }
        }
    }

    /// The first `count` digits of the expansion together with the valuation.
    pub fn digits(&self, count: usize) -> Result<(i64, Vec<u32>)> {
        match &self.repr {
            Repr::Exact(r) => {
                if r.is_zero() {
                    return Err(PadicError::InsufficientPrecision(
                        "zero has no leading digit".into(),
                    ));
                }
                let v = rational_ord(self.prime.value(), r).finite().unwrap();
                let t = truncate_rational(self.prime, r, v + count as i64);
                Ok((v, t.digits))
            }
            Repr::Truncated(t) => {
                if t.digits.len() < count {
                    return Err(PadicError::InsufficientPrecision(format!(
                        "{count} digits requested, {} known",
                        t.digits.len()
                    )));
                }
                Ok((t.valuation, t.digits[..count].to_vec()))
            }
        }
    }

    /// True iff the first `pattern.len()` digits (starting at the leading
    /// nonzero position) match `pattern`, given low-to-high. This is the
    /// 2-adic "ends in ..." predicate read in digit order.
    pub fn ends_in(&self, pattern: &[u32]) -> Result<bool> {
        let (_, digits) = self.digits(pattern.len())?;
        Ok(digits == pattern)
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch(
                self.prime.value(),
                other.prime.value(),
            ));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Exact(r) => Self::from_rational(self.prime, -r.clone()),
            Repr::Truncated(t) => Self::truncation_of(
                self.prime,
                &-t.known_value(self.prime.value()),
                t.abs_precision,
            ),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let sum = self.known_value() + other.known_value();
        match (self.precision(), other.precision()) {
            (None, None) => Ok(Self::from_rational(self.prime, sum)),
            (a, b) => {
                let prec = match (a, b) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                };
                Ok(Self::truncation_of(self.prime, &sum, prec))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        // Exact zero annihilates even unknown digits.
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(self.prime));
        }
        let product = self.known_value() * other.known_value();
        match (self.precision(), other.precision()) {
            (None, None) => Ok(Self::from_rational(self.prime, product)),
            _ => {
                let prec = self.product_precision(other)?;
                Ok(Self::truncation_of(self.prime, &product, prec))
            }
        }
    }

    /// min(v_x + prec_y, v_y + prec_x) with exact factors contributing no
    /// error term.
    fn product_precision(&self, other: &Self) -> Result<i64> {
        let vord = |s: &Self| -> Result<i64> {
            match &s.repr {
                Repr::Exact(r) => rational_ord(s.prime.value(), r)
                    .finite()
                    .ok_or(PadicError::DivisionByZero),
                Repr::Truncated(t) => Ok(t.valuation),
            }
        };
        let mut bounds = Vec::new();
        if let Some(py) = other.precision() {
            bounds.push(vord(self)? + py);
        }
        if let Some(px) = self.precision() {
            bounds.push(vord(other)? + px);
        }
        Ok(bounds.into_iter().min().expect("at least one truncated"))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let inv = other.inverse()?;
        self.mul(&inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Exact(r) => {
                if r.is_zero() {
                    return Err(PadicError::DivisionByZero);
                }
                Ok(Self::from_rational(self.prime, r.recip()))
            }
            Repr::Truncated(t) => {
                if t.digits.is_empty() {
                    return Err(PadicError::InsufficientPrecision(
                        "divisor has no determinable valuation".into(),
                    ));
                }
                let v = t.valuation;
                let rel = t.abs_precision - v;
                let value = t.known_value(self.prime.value()).recip();
                Ok(Self::truncation_of(self.prime, &value, -v + rel))
            }
        }
    }

    /// p^n as a scalar of this prime.
    pub fn prime_power(prime: Prime, n: i64) -> Self {
        let p = BigRational::from_integer(BigInt::from(prime.value()));
        Self::from_rational(prime, p.pow(n as i32))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.prime);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// True iff `self` and `other` agree on every jointly guaranteed digit.
    /// For two exact scalars this is exact equality.
    pub fn agrees(&self, other: &Self) -> Result<bool> {
        let diff = self.sub(other)?;
        Ok(diff.is_zero_at_precision())
    }

    /// True iff ord(self) >= n is guaranteed by the known digits.
    pub fn ord_at_least(&self, n: i64) -> bool {
        match &self.repr {
            Repr::Exact(r) => rational_ord(self.prime.value(), r).at_least(n),
            Repr::Truncated(t) => {
                if t.digits.is_empty() {
                    t.abs_precision >= n
                } else {
                    t.valuation >= n
                }
            }
        }
    }

    /// Parses the textual scalar syntax: `a/b` or `a` for exact rationals,
    /// `v:d0,d1,...,dk` for a truncation with valuation `v` and absolute
    /// precision `v+k+1`, and `v:` for `O(p^v)`.
    pub fn parse(prime: Prime, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((v_str, digit_str)) = text.split_once(':') {
            let v: i64 = v_str
                .parse()
                .map_err(|_| PadicError::ParseError(format!("bad valuation in {text:?}")))?;
            if digit_str.is_empty() {
                return Ok(Self::from_truncated(prime, Truncated::zero_at(v)));
            }
            let mut digits = Vec::new();
            for part in digit_str.split(',') {
                let d: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| PadicError::ParseError(format!("bad digit in {text:?}")))?;
                if d as u64 >= prime.value() {
                    return Err(PadicError::ParseError(format!(
                        "digit {d} out of range for p = {}",
                        prime.value()
                    )));
                }
                digits.push(d);
            }
            let prec = v + digits.len() as i64;
            let raw = Truncated {
                valuation: v,
                digits,
                abs_precision: prec,
            };
            // Canonicalize inputs with a leading zero digit.
            let value = raw.known_value(prime.value());
            Ok(Self::truncation_of(prime, &value, prec))
        } else if let Some((n_str, d_str)) = text.split_once('/') {
            let n: BigInt = n_str
                .trim()
                .parse()
                .map_err(|_| PadicError::ParseError(format!("bad numerator in {text:?}")))?;
            let d: BigInt = d_str
                .trim()
                .parse()
                .map_err(|_| PadicError::ParseError(format!("bad denominator in {text:?}")))?;
            if d.is_zero() {
                return Err(PadicError::ParseError("zero denominator".into()));
            }
            Ok(Self::from_rational(prime, BigRational::new(n, d)))
        } else {
            let n: BigInt = text
                .parse()
                .map_err(|_| PadicError::ParseError(format!("bad integer in {text:?}")))?;
            Ok(Self::from_rational(prime, BigRational::from_integer(n)))
        }
    }
}

impl std::fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Repr::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Truncated(t) => {
                if t.digits.is_empty() {
                    write!(f, "{}:", t.abs_precision)
                } else {
                    let digits: Vec<String> =
                        t.digits.iter().map(|d| d.to_string()).collect();
                    write!(f, "{}:{}", t.valuation, digits.join(","))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn s(prime: u64, n: i64, d: i64) -> PadicScalar {
        PadicScalar::from_fraction(p(prime), n, d)
    }

    #[test]
    fn ord_examples() {
        assert_eq!(s(3, 18, 1).ord().unwrap(), Valuation::Finite(2));
        assert_eq!(s(5, 1, 25).ord().unwrap(), Valuation::Finite(-2));
        assert_eq!(s(7, 0, 1).ord().unwrap(), Valuation::Infinity);
    }

    #[test]
    fn digit_examples() {
        let (v, d) = s(2, 17, 1).digits(5).unwrap();
        assert_eq!((v, d), (0, vec![1, 0, 0, 0, 1]));
        let (v, d) = s(3, 1, 2).digits(3).unwrap();
        assert_eq!((v, d), (0, vec![2, 1, 1]));
        let (v, d) = s(5, 5, 1).digits(1).unwrap();
        assert_eq!((v, d), (1, vec![1]));
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = s(5, 2, 3);
        let b = s(5, 1, 3);
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.as_rational().unwrap(), &rat(1));
        // ultrametric cancellation: ord(1 + 2) = 1 > min(0, 0) for p = 3
        let c = s(3, 1, 1).add(&s(3, 2, 1)).unwrap();
        assert_eq!(c.ord().unwrap(), Valuation::Finite(1));
    }

    #[test]
    fn truncated_product_precision() {
        let pr = p(2);
        let x = PadicScalar::truncation_of(pr, &rat(3), 8); // ord 0, 8 digits
        let y = PadicScalar::truncation_of(pr, &rat(5), 12); // ord 0, 12 digits
        let z = x.mul(&y).unwrap();
        // relative precision of the product is 8 digits
        assert_eq!(z.precision(), Some(8));
        assert_eq!(z.ord().unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn truncated_cancellation() {
        let pr = p(5);
        let x = PadicScalar::truncation_of(pr, &rat(7), 6);
        let d = x.sub(&x).unwrap();
        assert!(d.is_zero_at_precision());
        assert!(d.ord().is_err());
    }

    #[test]
    fn division_shifts_precision() {
        let pr = p(5);
        let x = PadicScalar::truncation_of(pr, &rat(25), 8); // v=2, rel prec 6
        let inv = x.inverse().unwrap();
        assert_eq!(inv.ord().unwrap(), Valuation::Finite(-2));
        assert_eq!(inv.precision(), Some(4)); // -2 + 6
        let back = inv.mul(&x).unwrap();
        assert!(back.agrees(&PadicScalar::one(pr)).unwrap());
    }

    #[test]
    fn round_trip_syntax() {
        let pr = p(5);
        for text in ["7", "-3/4", "0", "2:1,0,3", "-1:2,4,4,0,1", "6:"] {
            let v = PadicScalar::parse(pr, text).unwrap();
            let again = PadicScalar::parse(pr, &v.to_string()).unwrap();
            assert_eq!(v, again);
            assert_eq!(v.to_string(), text);
        }
    }

    #[test]
    fn parse_canonicalizes_leading_zero() {
        let pr = p(3);
        let v = PadicScalar::parse(pr, "0:0,2,1").unwrap();
        assert_eq!(v.to_string(), "1:2,1");
        assert_eq!(v.precision(), Some(3));
    }

    #[test]
    fn ends_in_examples() {
        let pr = p(2);
        assert!(PadicScalar::from_integer(pr, 5).ends_in(&[1, 0]).unwrap());
        assert!(PadicScalar::from_integer(pr, 3).ends_in(&[1, 1]).unwrap());
        assert!(PadicScalar::from_integer(pr, 8)
            .ends_in(&[1, 0, 0])
            .unwrap());
    }
}
