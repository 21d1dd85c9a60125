//! Property tests for the scalar layer: the ultrametric law, ord
//! additivity, square predicates, and textual round-trips.

use num_rational::BigRational;
use proptest::prelude::*;

use padicjc::prime::Prime;
use padicjc::scalar::{PadicScalar, Valuation};

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 13])
}

fn rationals() -> impl Strategy<Value = (i64, i64)> {
    (-100_000i64..=100_000, 1i64..=100_000)
}

fn scalar(p: u64, (n, d): (i64, i64)) -> PadicScalar {
    PadicScalar::from_rational(
        Prime::new(p).unwrap(),
        BigRational::new(n.into(), d.into()),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ultrametric_law(p in primes(), a in rationals(), b in rationals()) {
        let x = scalar(p, a);
        let y = scalar(p, b);
        let sum = x.add(&y).unwrap();
        let ox = x.ord().unwrap();
        let oy = y.ord().unwrap();
        let os = sum.ord().unwrap();
        prop_assert!(os >= ox.min(oy));
        if ox != oy {
            prop_assert_eq!(os, ox.min(oy));
        }
    }

    #[test]
    fn ord_is_additive_on_products(p in primes(), a in rationals(), b in rationals()) {
        prop_assume!(a.0 != 0 && b.0 != 0);
        let x = scalar(p, a);
        let y = scalar(p, b);
        let prod = x.mul(&y).unwrap();
        let (Valuation::Finite(ox), Valuation::Finite(oy), Valuation::Finite(op)) =
            (x.ord().unwrap(), y.ord().unwrap(), prod.ord().unwrap())
        else {
            return Err(TestCaseError::fail("unexpected infinite ord"));
        };
        prop_assert_eq!(op, ox + oy);
    }

    #[test]
    fn squares_of_squares(p in primes(), a in rationals()) {
        prop_assume!(a.0 != 0);
        let x = scalar(p, a);
        let sq = x.mul(&x).unwrap();
        prop_assert!(sq.is_square().unwrap());
        // multiplying by a square does not change squareness
        let y = scalar(p, (7, 3));
        let scaled = sq.mul(&y).unwrap();
        prop_assert_eq!(scaled.is_square().unwrap(), y.is_square().unwrap());
    }

    #[test]
    fn textual_round_trip_exact(p in primes(), a in rationals()) {
        let x = scalar(p, a);
        let text = x.to_string();
        let back = PadicScalar::parse(x.prime(), &text).unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn textual_round_trip_truncated(
        p in primes(),
        a in rationals(),
        prec in 1i64..24,
    ) {
        prop_assume!(a.0 != 0);
        let prime = Prime::new(p).unwrap();
        let value = BigRational::new(a.0.into(), a.1.into());
        let x = PadicScalar::truncation_of(prime, &value, prec);
        let text = x.to_string();
        let back = PadicScalar::parse(prime, &text).unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn digits_reconstruct_value(p in primes(), a in rationals(), count in 1usize..12) {
        prop_assume!(a.0 != 0);
        let x = scalar(p, a);
        let (v, digits) = x.digits(count).unwrap();
        // sum d_i p^(v+i) must agree with x modulo p^(v+count)
        let prime = Prime::new(p).unwrap();
        let mut acc = PadicScalar::zero(prime);
        for (i, &d) in digits.iter().enumerate() {
            let term = PadicScalar::from_integer(prime, d as i64)
                .mul(&PadicScalar::prime_power(prime, v + i as i64))
                .unwrap();
            acc = acc.add(&term).unwrap();
        }
        let diff = x.sub(&acc).unwrap();
        prop_assert!(diff.ord_at_least(v + count as i64));
        prop_assert!(digits[0] != 0);
    }
}
