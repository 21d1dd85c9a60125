//! Square predicates, canonical square roots, and Hensel lifting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{PadicError, Result};
use crate::poly::RatPoly;
use crate::prime::Prime;
use crate::scalar::{
    rational_mod_pk, rational_ord, split_unit, PadicScalar, SeriesTruncation, Valuation,
};

/// Euler-criterion quadratic-residue test modulo an odd prime.
pub(crate) fn is_qr_mod_p(p: u64, a: u64) -> bool {
    debug_assert!(p % 2 == 1);
    let a = a % p;
    if a == 0 {
        return true;
    }
    pow_mod(a, (p - 1) / 2, p) == 1
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Tonelli-Shanks square root modulo an odd prime; `None` when `a` is a
/// non-residue.
pub(crate) fn sqrt_mod_p(p: u64, a: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if !is_qr_mod_p(p, a) {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // general Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while is_qr_mod_p(p, z) {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

impl PadicScalar {
    /// True iff the value is a square in `Q_p`: zero, or even ord with a
    /// square unit part (quadratic residue leading digit for odd `p`, unit
    /// congruent to 1 mod 8 for `p = 2`).
    pub fn is_square(&self) -> Result<bool> {
        let prime = self.prime();
        let p = prime.value();
        if self.is_exact_zero() {
            return Ok(true);
        }
        let needed = if p == 2 { 3 } else { 1 };
        let (v, digits) = self.digits(needed).map_err(|e| match e {
            PadicError::InsufficientPrecision(_) => PadicError::InsufficientPrecision(format!(
                "square test needs {needed} digits"
            )),
            other => other,
        })?;
        if v % 2 != 0 {
            return Ok(false);
        }
        if p == 2 {
            Ok(digits == [1, 0, 0])
        } else {
            Ok(is_qr_mod_p(p, digits[0] as u64))
        }
    }

    /// Canonical square root: for odd `p` the root whose leading digit lies
    /// in `[1, (p-1)/2]`, for `p = 2` the root whose unit part is 1 mod 4.
    /// Exact rational squares produce exact roots; all other squares are
    /// lifted by Newton iteration to the requested precision.
    pub fn sqrt(&self, trunc: SeriesTruncation) -> Result<PadicScalar> {
        let prime = self.prime();
        let p = prime.value();
        if self.is_zero_at_precision() {
            return Err(PadicError::NotASquare(
                "square root of zero has no canonical leading digit".into(),
            ));
        }
        if !self.is_square()? {
            return Err(PadicError::NotASquare(self.to_string()));
        }
        // Exact perfect rational square: exact root.
        if let Some(r) = self.as_rational() {
            if let Some(root) = rational_sqrt(r) {
                return Ok(canonicalize_root(PadicScalar::from_rational(prime, root)));
            }
        }
        let value = self.known_value();
        let (v, unit) = split_unit(p, &value);
        debug_assert!(v % 2 == 0);
        let input_rel = self.precision().map(|pr| {
            pr - rational_ord(p, &value).finite().expect("nonzero")
        });
        // Unit-part precision target; the root of the unit needs this many
        // digits for the assembled root to reach the absolute target.
        let mut unit_digits = (trunc.target() - v / 2).max(prime.d() as i64 + 2);
        if let Some(rel) = input_rel {
            // Root digits cannot exceed what the input determines: the unit
            // is known mod p^rel, hence its root mod p^(rel - d + 1).
            unit_digits = unit_digits.min(rel - prime.d() as i64 + 1).max(1);
        }
        let root_unit = unit_sqrt_newton(prime, &unit, unit_digits)?;
        let root = root_unit * BigRational::from_integer(BigInt::from(p)).pow((v / 2) as i32);
        let abs_prec = v / 2 + unit_digits;
        Ok(canonicalize_root(PadicScalar::truncation_of(
            prime, &root, abs_prec,
        )))
    }
}

/// Exact square root of a rational, when it is a perfect square.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Applies the canonical-root sign rule.
fn canonicalize_root(root: PadicScalar) -> PadicScalar {
    let prime = root.prime();
    let p = prime.value();
    let Ok((_, digits)) = root.digits(2.min(((p != 2) as usize) + 2)) else {
        return root;
    };
    let canonical = if p == 2 {
        // unit part 1 mod 4: second digit zero
        digits.len() < 2 || digits[1] == 0
    } else {
        (digits[0] as u64) <= (p - 1) / 2
    };
    if canonical {
        root
    } else {
        root.neg()
    }
}

/// Newton iteration for the square root of a p-adic unit given as an exact
/// rational; returns the root to `digits` guaranteed digits.
fn unit_sqrt_newton(prime: Prime, unit: &BigRational, digits: i64) -> Result<BigRational> {
    let p = prime.value();
    let s: i64 = if p == 2 { 1 } else { 0 };
    let seed = if p == 2 {
        BigRational::one()
    } else {
        let a0 = rational_mod_pk(p, unit, 1);
        let r0: u64 = a0.clone().try_into().expect("residue fits u64");
        let r = sqrt_mod_p(p, r0).ok_or_else(|| PadicError::NotASquare(unit.to_string()))?;
        BigRational::from_integer(BigInt::from(r))
    };
    let f = RatPoly::new(vec![-unit.clone(), BigRational::zero(), BigRational::one()]);
    let target = digits + s;
    newton_iterate(prime, &f, seed, target)
}

/// Newton iteration `a <- a - f(a)/f'(a)` over reduced rational residues,
/// run until `ord(f(a)) >= target`.
fn newton_iterate(
    prime: Prime,
    f: &RatPoly,
    seed: BigRational,
    target: i64,
) -> Result<BigRational> {
    let p = prime.value();
    let fp = f.derivative();
    let reduce_mod = (target + 2 * ord_of(p, &fp.eval(&seed)).max(0) + 4) as u32;
    let modulus = BigRational::from_integer(BigInt::from(p).pow(reduce_mod));
    let mut a = seed;
    for _ in 0..(64 + target as usize) {
        let fa = f.eval(&a);
        if rational_ord(p, &fa).at_least(target) {
            return Ok(a);
        }
        let dfa = fp.eval(&a);
        if dfa.is_zero() {
            return Err(PadicError::HenselConditionFailed {
                r: rational_ord(p, &fa).finite().unwrap_or(i64::MAX),
                s: i64::MAX,
            });
        }
        a = &a - fa / dfa;
        // Reduce to keep numerators small; the root is only needed mod p^k.
        a = reduce_rational(p, &a, &modulus);
    }
    Err(PadicError::InsufficientPrecision(
        "Newton iteration failed to converge".into(),
    ))
}

fn ord_of(p: u64, r: &BigRational) -> i64 {
    rational_ord(p, r).finite().unwrap_or(0)
}

/// Replaces a p-integral rational by its canonical residue mod `modulus`
/// (a power of p), preserving the class.
fn reduce_rational(p: u64, a: &BigRational, modulus: &BigRational) -> BigRational {
    if a.is_zero() || !rational_ord(p, a).at_least(0) {
        return a.clone();
    }
    let k = rational_ord(p, modulus).finite().unwrap() as u32;
    BigRational::from_integer(rational_mod_pk(p, a, k))
}

/// Hensel lifting for a polynomial with p-integral rational coefficients:
/// given `alpha1` with `ord(f(alpha1)) = r > 2s = 2 ord(f'(alpha1))`,
/// produces a root approximation `alpha` with `ord(f(alpha))` at least the
/// requested precision and `ord(alpha - alpha1) >= r - s`.
pub fn hensel_lift(
    prime: Prime,
    f: &RatPoly,
    alpha1: &PadicScalar,
    trunc: SeriesTruncation,
) -> Result<PadicScalar> {
    let p = prime.value();
    for c in f.coeffs() {
        if !rational_ord(p, c).at_least(0) {
            return Err(PadicError::ParseError(
                "polynomial coefficients must be p-adic integers".into(),
            ));
        }
    }
    let a1 = alpha1.known_value();
    let fa = f.eval(&a1);
    let dfa = f.derivative().eval(&a1);
    if fa.is_zero() {
        return Ok(alpha1.clone());
    }
    let r = rational_ord(p, &fa).finite().unwrap();
    let s = match rational_ord(p, &dfa) {
        Valuation::Finite(s) => s,
        Valuation::Infinity => {
            return Err(PadicError::HenselConditionFailed { r, s: i64::MAX })
        }
    };
    if r <= 2 * s {
        return Err(PadicError::HenselConditionFailed { r, s });
    }
    let target = trunc.target() + s;
    let root = newton_iterate(prime, f, a1.clone(), target)?;
    // postcondition from the lifting theorem
    let drift = rational_ord(p, &(&root - &a1));
    assert!(
        drift.at_least(r - s),
        "Hensel postcondition violated: ord(alpha - alpha1) = {drift} < {}",
        r - s
    );
    if f.eval(&root).is_zero() {
        return Ok(PadicScalar::from_rational(prime, root));
    }
    Ok(PadicScalar::truncation_of(prime, &root, trunc.target()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn int(prime: u64, n: i64) -> PadicScalar {
        PadicScalar::from_integer(p(prime), n)
    }

    #[test]
    fn square_examples() {
        assert!(int(2, 17).is_square().unwrap());
        assert!(int(5, 6).is_square().unwrap());
        assert!(!int(5, 2).is_square().unwrap());
        assert!(int(7, 0).is_square().unwrap());
        // odd valuation
        assert!(!int(5, 10).is_square().unwrap());
    }

    #[test]
    fn sqrt_exact_and_canonical() {
        let r = int(5, 4).sqrt(SeriesTruncation::default_precision()).unwrap();
        assert_eq!(r.as_rational().unwrap(), &rat(2));
        // -2 has leading digit 3 > 2, so 2 is the canonical root
        let r = int(7, 2).sqrt(SeriesTruncation::new(10).unwrap()).unwrap();
        let (_, d) = r.digits(1).unwrap();
        assert_eq!(d[0], 3);
        let sq = r.mul(&r).unwrap();
        assert!(sq.agrees(&int(7, 2)).unwrap());
    }

    #[test]
    fn sqrt_two_adic() {
        let r = int(2, 17).sqrt(SeriesTruncation::new(20).unwrap()).unwrap();
        let (_, d) = r.digits(2).unwrap();
        assert_eq!(d, vec![1, 0]); // unit 1 mod 4
        assert!(r.mul(&r).unwrap().agrees(&int(2, 17)).unwrap());
    }

    #[test]
    fn hensel_examples() {
        let f = RatPoly::from_i64(&[-2, 0, 1]); // x^2 - 2
        let root = hensel_lift(
            p(7),
            &f,
            &int(7, 3),
            SeriesTruncation::new(32).unwrap(),
        )
        .unwrap();
        let fa = f.eval(&root.known_value());
        assert!(rational_ord(7, &fa).at_least(32));
        let (_, d) = root.digits(1).unwrap();
        assert_eq!(d[0], 3);

        let f17 = RatPoly::from_i64(&[-17, 0, 1]);
        let root = hensel_lift(p(2), &f17, &int(2, 1), SeriesTruncation::new(32).unwrap())
            .unwrap();
        assert!(rational_ord(2, &f17.eval(&root.known_value())).at_least(32));

        let err = hensel_lift(p(5), &f, &int(5, 1), SeriesTruncation::new(8).unwrap());
        assert_eq!(
            err.unwrap_err(),
            PadicError::HenselConditionFailed { r: 0, s: 0 }
        );
    }

    #[test]
    fn tonelli_shanks() {
        for prime in [5u64, 13, 17, 29, 97] {
            for a in 1..prime {
                if is_qr_mod_p(prime, a) {
                    let r = sqrt_mod_p(prime, a).unwrap();
                    assert_eq!((r * r) % prime, a % prime);
                } else {
                    assert!(sqrt_mod_p(prime, a).is_none());
                }
            }
        }
    }
}
