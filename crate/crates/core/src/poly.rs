//! Dense univariate polynomials over the exact rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(degree: usize, c: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff(i) + other.coeff(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff(i) - other.coeff(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![
            BigRational::zero();
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while !rem.is_zero() && rem.degree() >= divisor.degree() {
            let shift = rem.degree() - divisor.degree();
            let factor = rem.leading() / divisor.leading();
            quo[shift] = factor.clone();
            let sub = divisor.mul(&Self::monomial(shift, factor));
            rem = rem.sub(&sub);
            if rem.coeffs.len() == 1 && rem.coeffs[0].is_zero() {
                break;
            }
        }
        (Self::new(quo), rem)
    }

    /// Monic gcd over `Q[x]`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading().clone();
        a.scale(&lead.recip())
    }

    /// All rational roots, found by clearing denominators and enumerating
    /// divisor pairs of the extreme coefficients, with a height bound on
    /// the candidates.
    pub fn rational_roots(&self, height_bound: u64) -> Vec<BigRational> {
        use num_bigint::BigInt;
        if self.is_zero() {
            return Vec::new();
        }
        // Clear denominators to an integer polynomial.
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        // Strip trailing zero coefficients (root at 0).
        let mut roots = Vec::new();
        let mut low = 0usize;
        while low < ints.len() && ints[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.push(BigRational::zero());
        }
        if low >= ints.len() {
            return roots;
        }
        let a0 = &ints[low];
        let an = ints.last().unwrap();
        let bound = BigInt::from(height_bound);
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let n = n.magnitude().clone();
            let mut out = Vec::new();
            let mut d = num_bigint::BigUint::one();
            let cap = n.clone().min(bound.magnitude().clone());
            while &d * &d <= n {
                if (&n % &d).is_zero() {
                    let q = &n / &d;
                    if d <= cap.clone() {
                        out.push(BigInt::from(d.clone()));
                    }
                    if q <= cap.clone() {
                        out.push(BigInt::from(q));
                    }
                }
                d += 1u32;
            }
            out.sort();
            out.dedup();
            out
        };
        for num in divisors(a0) {
            for den in divisors(an) {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(&num * BigInt::from(sign), den.clone());
                    if self.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

impl std::fmt::Display for RatPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_quartics() {
        // (x^2 - 1)(3x^2 + 1) and (x^2 - 1)(x^2 + 1)
        let a = RatPoly::from_i64(&[-1, 0, -2, 0, 3]);
        let b = RatPoly::from_i64(&[-1, 0, 0, 0, 1]);
        let g = a.gcd(&b);
        assert_eq!(g, RatPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn rational_roots_with_denominator() {
        // (2x - 1)(x + 3)
        let f = RatPoly::from_i64(&[-3, 5, 2]);
        let roots = f.rational_roots(1_000_000);
        assert!(roots.contains(&BigRational::new(1.into(), 2.into())));
        assert!(roots.contains(&BigRational::from_integer((-3).into())));
        assert_eq!(roots.len(), 2);
    }
}
