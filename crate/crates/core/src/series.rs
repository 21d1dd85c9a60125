//! The p-adic exponential and trigonometric series on `p^d Z_p`, and
//! convergence-order computation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{PadicError, Result};
use crate::prime::Prime;
use crate::scalar::{rational_ord, PadicScalar, SeriesTruncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Exp,
    Sin,
    Cos,
}

impl PadicScalar {
    /// `exp(x)` for `ord(x) >= d`. The result lies in `1 + p^d Z_p`.
    pub fn exp(&self, trunc: SeriesTruncation) -> Result<PadicScalar> {
        evaluate(self, trunc, Kind::Exp)
    }

    /// `sin(x)` for `ord(x) >= d`. The result lies in `p^d Z_p`.
    pub fn sin(&self, trunc: SeriesTruncation) -> Result<PadicScalar> {
        evaluate(self, trunc, Kind::Sin)
    }

    /// `cos(x)` for `ord(x) >= d`. The result lies in `1 + p^(2d-1) Z_p`.
    pub fn cos(&self, trunc: SeriesTruncation) -> Result<PadicScalar> {
        evaluate(self, trunc, Kind::Cos)
    }
}

fn evaluate(x: &PadicScalar, trunc: SeriesTruncation, kind: Kind) -> Result<PadicScalar> {
    let prime = x.prime();
    let p = prime.value();
    let d = prime.d() as i64;
    if x.is_exact_zero() {
        return Ok(match kind {
            Kind::Exp | Kind::Cos => PadicScalar::one(prime),
            Kind::Sin => PadicScalar::zero(prime),
        });
    }
    let v = match x.ord() {
        Ok(ord) => ord.finite().unwrap_or(i64::MAX),
        Err(_) => {
            // O(p^N) argument with N >= d: value determined only to the
            // input precision.
            let n = x.precision().expect("truncated");
            if n < d {
                return Err(PadicError::OutsideDomain { got: n, need: d });
            }
            n
        }
    };
    if v < d {
        return Err(PadicError::OutsideDomain { got: v, need: d });
    }
    let target = match x.precision() {
        Some(pr) => trunc.target().min(pr),
        None => trunc.target(),
    };
    let value = x.known_value();
    // Tail bound: ord(x^i / i!) >= i*v - (i-1)/(p-1), increasing in i since
    // v >= d > 1/(p-1). Sum all terms below the first index where the bound
    // clears the target.
    let pm1 = (p - 1) as i64;
    let last = {
        // smallest i with i*(v*(p-1) - 1) >= target*(p-1) - 1
        let denom = v * pm1 - 1;
        let numer = target * pm1 - 1;
        ((numer + denom - 1) / denom).max(1)
    };
    let mut sum = BigRational::zero();
    let mut power = BigRational::one(); // value^i
    let mut factorial = BigInt::one();
    for i in 0..=last {
        if i > 0 {
            power *= &value;
            factorial *= BigInt::from(i);
        }
        let include = match kind {
            Kind::Exp => true,
            Kind::Sin => i % 2 == 1,
            Kind::Cos => i % 2 == 0,
        };
        if !include {
            continue;
        }
        let mut term = &power / BigRational::from_integer(factorial.clone());
        if matches!(kind, Kind::Sin | Kind::Cos) && (i / 2) % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    debug_assert!({
        let tail = last * v - (last - 1).div_euclid(pm1);
        tail >= target
    });
    Ok(PadicScalar::truncation_of(prime, &sum, target))
}

/// How the coefficients of a power series are described to
/// [`series_radius`].
#[derive(Debug, Clone)]
pub enum CoefficientModel {
    /// `a_i = 1/i!` (the exponential family); the radius is computed from
    /// the closed form of `ord(i!)`.
    ReciprocalFactorial,
    /// Finitely many explicit coefficients; the resulting descriptor is an
    /// estimate.
    Sampled(Vec<PadicScalar>),
}

/// The convergence order `r = -liminf ord(a_i)/i` and whether the boundary
/// `ord(x) = r` is part of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceDescriptor {
    pub order: BigRational,
    pub boundary_included: bool,
    /// Set when the order was computed from a finite truncation.
    pub estimate: bool,
}

impl ConvergenceDescriptor {
    /// Whether the series converges at arguments of the given ord.
    pub fn converges_at(&self, ord: i64) -> bool {
        let ord = BigRational::from_integer(ord.into());
        ord > self.order || (ord == self.order && self.boundary_included)
    }
}

pub fn series_radius(prime: Prime, model: &CoefficientModel) -> Result<ConvergenceDescriptor> {
    let p = prime.value();
    match model {
        CoefficientModel::ReciprocalFactorial => {
            // r = 1/(p-1); on the boundary ord(a_i) + i r = s_p(i)/(p-1)
            // stays bounded, so the boundary diverges.
            Ok(ConvergenceDescriptor {
                order: BigRational::new(BigInt::one(), BigInt::from(p - 1)),
                boundary_included: false,
                estimate: false,
            })
        }
        CoefficientModel::Sampled(coeffs) => {
            let mut order: Option<BigRational> = None;
            let mut ords = Vec::new();
            for (i, c) in coeffs.iter().enumerate() {
                let o = rational_ord(p, &c.known_value());
                ords.push(o);
                if i == 0 {
                    continue;
                }
                if let Some(fin) = o.finite() {
                    let candidate = BigRational::new(BigInt::from(-fin), BigInt::from(i));
                    if order.as_ref().map(|r| candidate > *r).unwrap_or(true) {
                        order = Some(candidate);
                    }
                }
            }
            let order = order.ok_or_else(|| {
                PadicError::InsufficientPrecision(
                    "need at least one nonzero coefficient of positive index".into(),
                )
            })?;
            // Boundary test on the supplied terms: ord(a_i) + i*r must grow.
            let margins: Vec<BigRational> = ords
                .iter()
                .enumerate()
                .filter_map(|(i, o)| {
                    o.finite().map(|fin| {
                        BigRational::from_integer(fin.into())
                            + &order * BigRational::from_integer(i.into())
                    })
                })
                .collect();
            let boundary_included = if margins.len() < 4 {
                false
            } else {
                let half = margins.len() / 2;
                let min_head = margins[..half].iter().min().cloned().unwrap();
                let min_tail = margins[half..].iter().min().cloned().unwrap();
                min_tail > min_head
            };
            Ok(ConvergenceDescriptor {
                order,
                boundary_included,
                estimate: true,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_frac};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn t() -> SeriesTruncation {
        SeriesTruncation::new(12).unwrap()
    }

    #[test]
    fn values_at_zero() {
        let x = PadicScalar::zero(p(5));
        assert!(x.exp(t()).unwrap().is_exact());
        assert_eq!(x.exp(t()).unwrap().known_value(), rat(1));
        assert_eq!(x.sin(t()).unwrap().known_value(), rat(0));
        assert_eq!(x.cos(t()).unwrap().known_value(), rat(1));
    }

    #[test]
    fn exp_of_five_mod_125() {
        let x = PadicScalar::from_integer(p(5), 5);
        let e = x.exp(SeriesTruncation::new(3).unwrap()).unwrap();
        let (v, digits) = e.digits(3).unwrap();
        // 81 = 1 + 1*5 + 3*25
        assert_eq!(v, 0);
        assert_eq!(digits, vec![1, 1, 3]);
    }

    #[test]
    fn domain_errors() {
        let x = PadicScalar::one(p(3));
        assert_eq!(
            x.exp(t()).unwrap_err(),
            PadicError::OutsideDomain { got: 0, need: 1 }
        );
        let y = PadicScalar::from_integer(p(2), 2);
        assert_eq!(
            y.sin(t()).unwrap_err(),
            PadicError::OutsideDomain { got: 1, need: 2 }
        );
    }

    #[test]
    fn image_containment() {
        for (prime, x0) in [(3u64, 3i64), (5, 10), (2, 12)] {
            let pr = p(prime);
            let d = pr.d() as i64;
            let x = PadicScalar::from_integer(pr, x0);
            let one = PadicScalar::one(pr);
            assert!(x.exp(t()).unwrap().sub(&one).unwrap().ord_at_least(d));
            assert!(x.sin(t()).unwrap().ord_at_least(d));
            assert!(x.cos(t()).unwrap().sub(&one).unwrap().ord_at_least(2 * d - 1));
        }
    }

    #[test]
    fn radius_of_exponential() {
        let desc = series_radius(p(5), &CoefficientModel::ReciprocalFactorial).unwrap();
        assert_eq!(desc.order, rat_frac(1, 4));
        assert!(!desc.boundary_included);
        assert!(!desc.estimate);
        assert!(desc.converges_at(1));
        assert!(!desc.converges_at(0));
    }

    #[test]
    fn radius_of_sampled_series() {
        let pr = p(5);
        // geometric: a_i = 1
        let geo: Vec<_> = (0..12).map(|_| PadicScalar::one(pr)).collect();
        let desc = series_radius(pr, &CoefficientModel::Sampled(geo)).unwrap();
        assert_eq!(desc.order, rat(0));
        assert!(!desc.boundary_included);
        assert!(desc.estimate);
        // a_i = p^(-i)
        let shrink: Vec<_> = (0..12)
            .map(|i| PadicScalar::from_rational(pr, rat_frac(1, 5).pow(i)))
            .collect();
        let desc = series_radius(pr, &CoefficientModel::Sampled(shrink)).unwrap();
        assert_eq!(desc.order, rat(1));
    }
}
