//! Seeded deterministic samplers for the verification suites. All
//! randomness in the crate flows through [`Sampler`], a ChaCha8 generator
//! seeded from the run configuration, so reported counterexamples are
//! reproducible.

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::jc::{MomentumValue, PhasePoint};
use crate::prime::Prime;
use crate::scalar::{rat, PadicScalar};
use crate::spin::SpherePoint;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn integer(&mut self, low: i64, high: i64) -> i64 {
        self.rng.gen_range(low..=high)
    }

    /// A random rational with numerator in `[-height, height]` and
    /// denominator in `[1, height]`.
    pub fn rational(&mut self, height: i64) -> BigRational {
        let numer = self.integer(-height, height);
        let denom = self.integer(1, height);
        BigRational::new(numer.into(), denom.into())
    }

    pub fn nonzero_rational(&mut self, height: i64) -> BigRational {
        loop {
            let r = self.rational(height);
            if !num_traits::Zero::is_zero(&r) {
                return r;
            }
        }
    }

    pub fn scalar(&mut self, prime: Prime, height: i64) -> PadicScalar {
        PadicScalar::from_rational(prime, self.rational(height))
    }

    pub fn nonzero_scalar(&mut self, prime: Prime, height: i64) -> PadicScalar {
        PadicScalar::from_rational(prime, self.nonzero_rational(height))
    }

    /// A random element of `p^d Z_p`: `p^d a / b` with `b` coprime to `p`.
    pub fn in_pd_zp(&mut self, prime: Prime, height: i64) -> PadicScalar {
        let a = self.integer(-height, height);
        let b = loop {
            let b = self.integer(1, height);
            if b as u64 % prime.value() != 0 {
                break b;
            }
        };
        let base = BigRational::new(a.into(), b.into());
        let scale = rat(prime.value() as i64).pow(prime.d() as i32);
        PadicScalar::from_rational(prime, base * scale)
    }

    /// An exact rational point of the sphere from the stereographic
    /// parametrization `(2s/w, 2t/w, (s^2+t^2-1)/w)`, `w = s^2+t^2+1`.
    pub fn sphere_point(&mut self, prime: Prime, require_z_nonzero: bool) -> SpherePoint {
        loop {
            let s = self.rational(9);
            let t = self.rational(9);
            let one = BigRational::from_integer(1.into());
            let norm = &s * &s + &t * &t;
            let w = &norm + &one;
            let z = (&norm - &one) / &w;
            if require_z_nonzero && num_traits::Zero::is_zero(&z) {
                continue;
            }
            let x = (&s + &s) / &w;
            let y = (&t + &t) / &w;
            return SpherePoint::new(
                PadicScalar::from_rational(prime, x),
                PadicScalar::from_rational(prime, y),
                PadicScalar::from_rational(prime, z),
            )
            .expect("stereographic point is on the sphere");
        }
    }

    /// An exact rational phase point; `require_z_nonzero` keeps it inside
    /// the z-chart.
    pub fn phase_point(&mut self, prime: Prime, require_z_nonzero: bool) -> PhasePoint {
        let s = self.sphere_point(prime, require_z_nonzero);
        PhasePoint::new(
            s.x,
            s.y,
            s.z,
            self.scalar(prime, 9),
            self.scalar(prime, 9),
        )
        .expect("sphere block is exact")
    }

    pub fn momentum(&mut self, prime: Prime, height: i64) -> MomentumValue {
        MomentumValue::new(self.scalar(prime, height), self.scalar(prime, height))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let prime = Prime::new(5).unwrap();
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            assert_eq!(a.rational(50), b.rational(50));
        }
        let qa = a.phase_point(prime, true);
        let qb = b.phase_point(prime, true);
        assert_eq!(qa, qb);
    }

    #[test]
    fn sphere_points_are_exact() {
        let prime = Prime::new(3).unwrap();
        let mut s = Sampler::new(1);
        for _ in 0..50 {
            let q = s.sphere_point(prime, true);
            assert!(q.x.is_exact());
            let lhs = q.norm_square().unwrap();
            assert_eq!(lhs.known_value(), crate::scalar::rat(1));
            assert!(!q.z.is_exact_zero());
        }
    }

    #[test]
    fn pd_zp_elements_are_in_domain() {
        for p in [2u64, 3, 7] {
            let prime = Prime::new(p).unwrap();
            let mut s = Sampler::new(3);
            for _ in 0..100 {
                let x = s.in_pd_zp(prime, 40);
                assert!(x.ord_at_least(prime.d() as i64), "{x}");
            }
        }
    }
}
