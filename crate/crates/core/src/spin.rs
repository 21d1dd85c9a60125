//! The spin system `mu(x, y, z) = z` on the p-adic sphere: fiber
//! classification, image membership, and fiber sampling.

use crate::error::{PadicError, Result};
use crate::quadratic::{
    canonical_sqrt_minus_one, is_sum_of_two_squares, rotation_translates, solve_two_squares,
    PlanePoint,
};
use crate::scalar::{PadicScalar, SeriesTruncation};

/// A point of `S^2_p`: `x^2 + y^2 + z^2 = 1`, exactly in exact mode and to
/// the working precision otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpherePoint {
    pub x: PadicScalar,
    pub y: PadicScalar,
    pub z: PadicScalar,
}

impl SpherePoint {
    pub fn new(x: PadicScalar, y: PadicScalar, z: PadicScalar) -> Result<Self> {
        let point = Self { x, y, z };
        let lhs = point.norm_square()?;
        if !lhs.agrees(&PadicScalar::one(point.x.prime()))? {
            return Err(PadicError::ConstraintViolated(format!(
                "x^2 + y^2 + z^2 = {lhs} differs from 1"
            )));
        }
        Ok(point)
    }

    pub fn prime(&self) -> crate::prime::Prime {
        self.x.prime()
    }

    pub fn norm_square(&self) -> Result<PadicScalar> {
        self.x
            .mul(&self.x)?
            .add(&self.y.mul(&self.y)?)?
            .add(&self.z.mul(&self.z)?)
    }
}

/// Topological type of a spin fiber `mu^-1(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinFiberClass {
    Point,
    Circle,
    TwoLines,
    Empty,
}

impl SpinFiberClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpinFiberClass::Point => "point",
            SpinFiberClass::Circle => "circle",
            SpinFiberClass::TwoLines => "two-lines",
            SpinFiberClass::Empty => "empty",
        }
    }
}

fn is_plus_minus_one(z: &PadicScalar) -> (bool, bool) {
    match z.as_rational() {
        Some(r) => {
            let one = crate::scalar::rat(1);
            (r == &one, r == &-one)
        }
        None => (false, false),
    }
}

/// Classifies the fiber of the spin momentum map over `z`: a point or two
/// lines at the poles (by prime class), otherwise a circle or empty by the
/// sum-of-two-squares status of `1 - z^2`.
pub fn spin_fiber_classify(z: &PadicScalar) -> Result<SpinFiberClass> {
    let prime = z.prime();
    let (plus, minus) = is_plus_minus_one(z);
    if plus || minus {
        return Ok(if prime.residue_class_mod_4() == 1 {
            SpinFiberClass::TwoLines
        } else {
            SpinFiberClass::Point
        });
    }
    let one = PadicScalar::one(prime);
    let t = one.sub(&z.mul(z)?)?;
    if is_sum_of_two_squares(&t)? {
        Ok(SpinFiberClass::Circle)
    } else {
        Ok(SpinFiberClass::Empty)
    }
}

/// Whether `z` is in the image of the spin momentum map.
pub fn spin_image_contains(z: &PadicScalar) -> Result<bool> {
    Ok(spin_fiber_classify(z)? != SpinFiberClass::Empty)
}

/// The image membership computed from the explicit set descriptions:
/// all of `Q_p` for `p = 1 mod 4`; for `p = 3 mod 4` the non-integers,
/// the integers not congruent to +-1 mod p, and `+-1 + p^(2m) u`; for
/// `p = 2` the even integers, `5 + 16 Z_2`, `11 + 16 Z_2`,
/// `1 + 2^m (3 + 4u)` and `-1 + 2^m (1 + 4u)` with `m >= 3`. Used as a
/// cross-check of [`spin_image_contains`].
pub fn spin_image_explicit(z: &PadicScalar) -> Result<bool> {
    let prime = z.prime();
    let p = prime.value();
    let (plus, minus) = is_plus_minus_one(z);
    if plus || minus {
        return Ok(true);
    }
    match prime.residue_class_mod_4() {
        1 => Ok(true),
        3 => {
            if !z.ord()?.at_least(0) {
                return Ok(true);
            }
            let residue = crate::scalar::rational_mod_pk(p, &z.known_value(), 1);
            let r: u64 = residue.try_into().expect("fits");
            if r != 1 && r != p - 1 {
                return Ok(true);
            }
            // z = eps + p^m u: in the image iff m = ord(z - eps) is even
            let eps = if r == 1 { 1 } else { -1 };
            let diff = z.sub(&PadicScalar::from_integer(prime, eps))?;
            Ok(diff.ord()?.is_even())
        }
        _ => {
            let ord = z.ord()?;
            if !ord.at_least(0) {
                return Ok(false);
            }
            if ord.at_least(1) {
                return Ok(true);
            }
            let residue = crate::scalar::rational_mod_pk(p, &z.known_value(), 4);
            let r: u64 = residue.try_into().expect("fits");
            if r == 5 || r == 11 {
                return Ok(true);
            }
            // 1 + 2^m(3 + 4u): ord(z - 1) = m >= 3, unit 3 mod 4
            for (eps, want) in [(1i64, 3u32), (-1, 1)] {
                let diff = z.sub(&PadicScalar::from_integer(prime, eps))?;
                if diff.is_exact_zero() {
                    continue;
                }
                if diff.ord()?.at_least(3) {
                    let (_, digits) = diff.digits(2)?;
                    let unit_mod_4 = digits[0] + 2 * digits[1];
                    if unit_mod_4 == want {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
    }
}

/// `n` distinct points of the fiber `mu^-1(z)`, each exactly on the sphere
/// (to working precision when a coordinate is truncated).
pub fn sample_spin_fiber(
    z: &PadicScalar,
    n: usize,
    trunc: SeriesTruncation,
) -> Result<Vec<SpherePoint>> {
    let prime = z.prime();
    let class = spin_fiber_classify(z)?;
    let points = match class {
        SpinFiberClass::Empty => {
            return Err(PadicError::NoSolution(format!("empty fiber over z = {z}")))
        }
        SpinFiberClass::Point => {
            if n > 1 {
                return Err(PadicError::NoSolution(
                    "the fiber is a single point".into(),
                ));
            }
            let zero = PadicScalar::zero(prime);
            vec![SpherePoint::new(zero.clone(), zero, z.clone())?]
        }
        SpinFiberClass::TwoLines => {
            let i = canonical_sqrt_minus_one(prime, trunc)?;
            let mut out = Vec::with_capacity(n);
            let mut t = 1i64;
            while out.len() < n {
                for sign in [1i64, -1] {
                    if out.len() >= n {
                        break;
                    }
                    let x = PadicScalar::from_integer(prime, t);
                    let y = x.mul(&i)?.mul(&PadicScalar::from_integer(prime, sign))?;
                    out.push(SpherePoint::new(x, y, z.clone())?);
                }
                t += 1;
            }
            out
        }
        SpinFiberClass::Circle => {
            let one = PadicScalar::one(prime);
            let k = one.sub(&z.mul(z)?)?;
            let base = solve_two_squares(&k, trunc)?;
            rotation_translates(&base, n)?
                .into_iter()
                .map(|PlanePoint { x, y }| SpherePoint::new(x, y, z.clone()))
                .collect::<Result<Vec<_>>>()?
        }
    };
    // distinctness certificate by coordinate inequality
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let same = points[i].x.agrees(&points[j].x)?
                && points[i].y.agrees(&points[j].y)?
                && points[i].z.agrees(&points[j].z)?;
            if same {
                return Err(PadicError::NoSolution(
                    "could not certify sample distinctness".into(),
                ));
            }
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::Prime;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn int(prime: u64, n: i64) -> PadicScalar {
        PadicScalar::from_integer(p(prime), n)
    }

    fn tr() -> SeriesTruncation {
        SeriesTruncation::new(24).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(spin_fiber_classify(&int(3, 4)).unwrap(), SpinFiberClass::Empty);
        assert_eq!(spin_fiber_classify(&int(2, 5)).unwrap(), SpinFiberClass::Circle);
        assert_eq!(
            spin_fiber_classify(&int(5, 1)).unwrap(),
            SpinFiberClass::TwoLines
        );
        assert_eq!(spin_fiber_classify(&int(2, 1)).unwrap(), SpinFiberClass::Point);
        assert_eq!(spin_fiber_classify(&int(3, 0)).unwrap(), SpinFiberClass::Circle);
    }

    #[test]
    fn image_examples() {
        assert!(spin_image_contains(&int(5, 37)).unwrap());
        assert!(spin_image_contains(&PadicScalar::from_fraction(p(3), 1, 3)).unwrap());
        assert!(!spin_image_contains(&int(2, 3)).unwrap());
    }

    #[test]
    fn explicit_image_agrees_with_classification() {
        for prime in [2u64, 3, 5, 7, 13] {
            for num in -40..=40 {
                for den in [1i64, 2, 3, 4, 5, 7, 8, 9, 13] {
                    let z = PadicScalar::from_fraction(p(prime), num, den);
                    assert_eq!(
                        spin_image_explicit(&z).unwrap(),
                        spin_image_contains(&z).unwrap(),
                        "p={prime} z={num}/{den}"
                    );
                }
            }
        }
    }

    #[test]
    fn sampling_examples() {
        let pts = sample_spin_fiber(&int(3, 0), 3, tr()).unwrap();
        assert_eq!(pts.len(), 3);
        for q in &pts {
            assert!(q.z.agrees(&int(3, 0)).unwrap());
        }
        let pole = sample_spin_fiber(&int(2, -1), 1, tr()).unwrap();
        assert!(pole[0].x.is_exact_zero() && pole[0].y.is_exact_zero());
        let lines = sample_spin_fiber(&int(5, 1), 2, tr()).unwrap();
        assert_eq!(lines.len(), 2);
        assert!(sample_spin_fiber(&int(3, 4), 1, tr()).is_err());
    }
}
