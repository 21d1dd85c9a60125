//! The oscillator level sets `x^2 + y^2 = k`: sum-of-two-squares tests,
//! explicit solutions, rotation-orbit equivalence and counting, and the
//! circle-group embedding for `p = 1 mod 4`.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{PadicError, Result};
use crate::prime::Prime;
use crate::scalar::{rat, rational_mod_pk, PadicScalar, SeriesTruncation, Valuation};

/// A point of the p-adic plane `(Q_p)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanePoint {
    pub x: PadicScalar,
    pub y: PadicScalar,
}

impl PlanePoint {
    pub fn new(x: PadicScalar, y: PadicScalar) -> Result<Self> {
        if x.prime() != y.prime() {
            return Err(PadicError::PrimeMismatch(
                x.prime().value(),
                y.prime().value(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn from_integers(prime: Prime, x: i64, y: i64) -> Self {
        Self {
            x: PadicScalar::from_integer(prime, x),
            y: PadicScalar::from_integer(prime, y),
        }
    }

    pub fn prime(&self) -> Prime {
        self.x.prime()
    }

    /// The level `k = x^2 + y^2`.
    pub fn level(&self) -> Result<PadicScalar> {
        self.x.mul(&self.x)?.add(&self.y.mul(&self.y)?)
    }

    /// The orbit order `min(ord(x), ord(y))`; requires a nonzero coordinate.
    pub fn order(&self) -> Result<i64> {
        let ox = coordinate_ord(&self.x);
        let oy = coordinate_ord(&self.y);
        match ox.min(oy) {
            Valuation::Finite(r) => Ok(r),
            Valuation::Infinity => Err(PadicError::NoSolution(
                "the origin has no orbit order".into(),
            )),
        }
    }
}

fn coordinate_ord(x: &PadicScalar) -> Valuation {
    // a zero-looking truncation cannot contribute the minimum
    x.ord().unwrap_or(Valuation::Infinity)
}

/// 2x2 matrix of p-adic scalars, used for unitary transporters and the
/// rotation flow.
#[derive(Debug, Clone)]
pub struct Mat2 {
    pub entries: [[PadicScalar; 2]; 2],
}

impl Mat2 {
    pub fn identity(prime: Prime) -> Self {
        Self {
            entries: [
                [PadicScalar::one(prime), PadicScalar::zero(prime)],
                [PadicScalar::zero(prime), PadicScalar::one(prime)],
            ],
        }
    }

    pub fn apply(&self, p: &PlanePoint) -> Result<PlanePoint> {
        let x = self.entries[0][0]
            .mul(&p.x)?
            .add(&self.entries[0][1].mul(&p.y)?)?;
        let y = self.entries[1][0]
            .mul(&p.x)?
            .add(&self.entries[1][1].mul(&p.y)?)?;
        PlanePoint::new(x, y)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut rows = Vec::new();
        for i in 0..2 {
            let mut row = Vec::new();
            for j in 0..2 {
                let v = self.entries[i][0]
                    .mul(&other.entries[0][j])?
                    .add(&self.entries[i][1].mul(&other.entries[1][j])?)?;
                row.push(v);
            }
            rows.push(row);
        }
        Ok(Self {
            entries: [
                [rows[0][0].clone(), rows[0][1].clone()],
                [rows[1][0].clone(), rows[1][1].clone()],
            ],
        })
    }

    pub fn det(&self) -> Result<PadicScalar> {
        self.entries[0][0]
            .mul(&self.entries[1][1])?
            .sub(&self.entries[0][1].mul(&self.entries[1][0])?)
    }
}

/// Whether `k` is a sum of two squares in `Q_p`: always for `p = 1 mod 4`;
/// zero or even ord for `p = 3 mod 4`; zero or unit part 1 mod 4 for
/// `p = 2`.
pub fn is_sum_of_two_squares(k: &PadicScalar) -> Result<bool> {
    let prime = k.prime();
    if k.is_exact_zero() {
        return Ok(true);
    }
    match prime.residue_class_mod_4() {
        1 => Ok(true),
        3 => {
            let v = k.ord()?;
            Ok(v.is_even())
        }
        _ => {
            // p = 2: k = 2^r u with u = 1 mod 4, i.e. ord(k - 2^r) >= r + 2
            let (_, digits) = k.digits(2)?;
            Ok(digits[1] == 0)
        }
    }
}

/// Canonical `i` with `i^2 = -1`, available exactly when `p = 1 mod 4`.
pub fn canonical_sqrt_minus_one(prime: Prime, trunc: SeriesTruncation) -> Result<PadicScalar> {
    if prime.residue_class_mod_4() != 1 {
        return Err(PadicError::WrongPrimeClass(prime.value()));
    }
    PadicScalar::from_integer(prime, -1).sqrt(trunc)
}

/// An explicit solution of `u^2 + v^2 = k`. Exact rational solutions are
/// preferred when a small search finds one; otherwise one coordinate is a
/// Hensel root at the requested precision.
pub fn solve_two_squares(k: &PadicScalar, trunc: SeriesTruncation) -> Result<PlanePoint> {
    let prime = k.prime();
    if k.is_exact_zero() {
        return Err(PadicError::NoSolution("k = 0 is excluded".into()));
    }
    if !is_sum_of_two_squares(k)? {
        return Err(PadicError::NoSolution(format!(
            "{k} is not a sum of two squares in Q_{}",
            prime.value()
        )));
    }
    let k_rat = k.known_value();
    // Small exact search: k - c^2 a perfect rational square.
    for denom in [1i64, 2, 3] {
        for numer in 0..=(12 * denom) {
            for sign in [1i64, -1] {
                let c = BigRational::new((sign * numer).into(), denom.into());
                let rest = &k_rat - &c * &c;
                if let Some(s) = exact_sqrt(&rest) {
                    return PlanePoint::new(
                        PadicScalar::from_rational(prime, c),
                        PadicScalar::from_rational(prime, s),
                    );
                }
            }
        }
    }
    match prime.residue_class_mod_4() {
        1 => {
            // (u, v) = ((k+1)/2, (1-k)/2 * i): the difference-of-squares
            // identity (k+1)^2/4 - (k-1)^2/4 = k.
            let i = canonical_sqrt_minus_one(prime, trunc)?;
            let one = PadicScalar::one(prime);
            let two = PadicScalar::from_integer(prime, 2);
            let u = k.add(&one)?.div(&two)?;
            let v = one.sub(k)?.div(&two)?.mul(&i)?;
            PlanePoint::new(u, v)
        }
        3 => {
            let p = prime.value();
            let v = k.ord()?.finite().expect("nonzero");
            debug_assert!(v % 2 == 0);
            let m = v / 2;
            let scale = PadicScalar::prime_power(prime, m);
            let unit = k.div(&scale.mul(&scale)?)?;
            let w = unit.known_value();
            for b0 in 0..p {
                let rest = &w - rat((b0 * b0) as i64);
                let rest_scalar = PadicScalar::from_rational(prime, rest);
                if rest_scalar.is_exact_zero() {
                    continue;
                }
                let is_unit = matches!(rest_scalar.ord(), Ok(Valuation::Finite(0)));
                if is_unit && rest_scalar.is_square()? {
                    let x = rest_scalar.sqrt(trunc)?;
                    let y = PadicScalar::from_integer(prime, b0 as i64);
                    return PlanePoint::new(x.mul(&scale)?, y.mul(&scale)?);
                }
            }
            Err(PadicError::NoSolution(format!(
                "no liftable residue for {k}"
            )))
        }
        _ => {
            // p = 2
            let v = k.ord()?.finite().expect("nonzero");
            let (m, odd_case) = (v.div_euclid(2), v.rem_euclid(2) == 1);
            let scale = PadicScalar::prime_power(prime, m);
            let unit = k.div(&PadicScalar::prime_power(prime, v))?.known_value();
            let candidates: &[i64] = if odd_case {
                // x, y both odd solving x^2 + y^2 = 2w
                &[1, 3, 5, 7]
            } else {
                // x odd, y even solving x^2 + y^2 = w
                &[0, 2, 4, 6]
            };
            let target = if odd_case { &unit * rat(2) } else { unit.clone() };
            for &b0 in candidates {
                let rest = &target - rat(b0 * b0);
                let rest_scalar = PadicScalar::from_rational(prime, rest);
                if !rest_scalar.is_zero_at_precision() && rest_scalar.is_square()? {
                    let x = rest_scalar.sqrt(trunc)?;
                    let y = PadicScalar::from_integer(prime, b0);
                    return PlanePoint::new(x.mul(&scale)?, y.mul(&scale)?);
                }
            }
            Err(PadicError::NoSolution(format!(
                "no liftable residue mod 16 for {k}"
            )))
        }
    }
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    use num_traits::Signed;
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Whether ord(a - b) >= n is certain; errors when the truncations cannot
/// decide.
pub(crate) fn diff_ord_at_least(a: &PadicScalar, b: &PadicScalar, n: i64) -> Result<bool> {
    let d = a.sub(b)?;
    if d.is_exact_zero() {
        return Ok(true);
    }
    match d.ord() {
        Ok(v) => Ok(v.at_least(n)),
        Err(_) => {
            let prec = d.precision().expect("truncated");
            if prec >= n {
                Ok(true)
            } else {
                Err(PadicError::InsufficientPrecision(format!(
                    "need ord >= {n}, known only O(p^{prec})"
                )))
            }
        }
    }
}

/// Rotation equivalence on a level set: two points of `C_k^*` lie in the
/// same orbit of the rotation group `p^d Z_p` iff their coordinates are
/// congruent mod `p^(r+d)`, `r` the minimum of the four ords. On the
/// degenerate level `k = 0` (p = 1 mod 4) the criterion is the same
/// isotropic line together with `x'/x` in `1 + p Z_p`.
pub fn rotation_equivalent(p: &PlanePoint, q: &PlanePoint) -> Result<bool> {
    let prime = p.prime();
    let kp = p.level()?;
    let kq = q.level()?;
    if !kp.agrees(&kq)? {
        return Err(PadicError::LevelMismatch);
    }
    let degenerate = kp.is_zero_at_precision() && kq.is_zero_at_precision();
    if degenerate {
        // same line: y/x equal; same sector: x'/x = 1 mod p
        let r1 = p.y.div(&p.x)?;
        let r2 = q.y.div(&q.x)?;
        if !r1.agrees(&r2)? {
            return Ok(false);
        }
        let ratio = q.x.div(&p.x)?;
        return diff_ord_at_least(&ratio, &PadicScalar::one(prime), 1);
    }
    let r = p.order()?.min(q.order()?);
    let modulus = r + prime.d() as i64;
    Ok(diff_ord_at_least(&p.x, &q.x, modulus)? && diff_ord_at_least(&p.y, &q.y, modulus)?)
}

/// The unitary matrix `(1/k) [[xx'+yy', x'y-xy'], [xy'-x'y, xx'+yy']]`
/// sending `p` to `q` on the level `C_k`, `k != 0`.
pub fn unitary_transporter(p: &PlanePoint, q: &PlanePoint) -> Result<Mat2> {
    let kp = p.level()?;
    let kq = q.level()?;
    if !kp.agrees(&kq)? {
        return Err(PadicError::LevelMismatch);
    }
    if kp.is_zero_at_precision() {
        return Err(PadicError::DegenerateLevel);
    }
    let a = p.x.mul(&q.x)?.add(&p.y.mul(&q.y)?)?.div(&kp)?;
    let b = q.x.mul(&p.y)?.sub(&p.x.mul(&q.y)?)?.div(&kp)?;
    Ok(Mat2 {
        entries: [[a.clone(), b.clone()], [b.neg(), a]],
    })
}

/// The transporter on the degenerate level `k = 0` (p = 1 mod 4), for two
/// points on the same isotropic line `y = i x`:
/// `(1/(2xx')) [[x^2+x'^2, i(x^2-x'^2)], [i(x'^2-x^2), x^2+x'^2]]`.
pub fn degenerate_transporter(p: &PlanePoint, q: &PlanePoint) -> Result<Mat2> {
    let prime = p.prime();
    if prime.residue_class_mod_4() != 1 {
        return Err(PadicError::WrongPrimeClass(prime.value()));
    }
    let i = p.y.div(&p.x)?;
    if !i.agrees(&q.y.div(&q.x)?)? {
        return Err(PadicError::LevelMismatch);
    }
    let x2 = p.x.mul(&p.x)?;
    let xp2 = q.x.mul(&q.x)?;
    let denom = PadicScalar::from_integer(prime, 2).mul(&p.x)?.mul(&q.x)?;
    let a = x2.add(&xp2)?.div(&denom)?;
    let b = i.mul(&x2.sub(&xp2)?)?.div(&denom)?;
    Ok(Mat2 {
        entries: [[a.clone(), b.clone()], [b.neg(), a]],
    })
}

/// The number of order-`r` rotation orbits on `C_k^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitCountValue {
    Finite(u64),
    /// The degenerate level `k = 0` for `p = 1 mod 4`: two lines carrying
    /// this many orbits at every integer order, plus the origin.
    InfiniteFamily { per_order: u64, includes_origin: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCount {
    pub r: i64,
    pub k: PadicScalar,
    pub count: OrbitCountValue,
}

impl OrbitCount {
    /// The number of order-`r` orbits this value predicts.
    pub fn orbits_at_order(&self) -> u64 {
        match &self.count {
            OrbitCountValue::Finite(n) => *n,
            OrbitCountValue::InfiniteFamily { per_order, .. } => *per_order,
        }
    }
}

/// Closed-form orbit count per the case table for the three prime classes.
pub fn orbit_count(r: i64, k: &PadicScalar) -> Result<OrbitCount> {
    let prime = k.prime();
    let p = prime.value();
    if k.is_exact_zero() {
        let count = if p % 4 == 1 {
            OrbitCountValue::InfiniteFamily {
                per_order: 2 * p - 2,
                includes_origin: true,
            }
        } else {
            OrbitCountValue::Finite(0)
        };
        return Ok(OrbitCount {
            r,
            k: k.clone(),
            count,
        });
    }
    let v = k.ord()?.finite().expect("nonzero");
    let n = match p % 4 {
        1 => {
            if v > 2 * r {
                2 * p - 2
            } else if v == 2 * r {
                p - 1
            } else {
                0
            }
        }
        3 => {
            if v == 2 * r {
                p + 1
            } else {
                0
            }
        }
        _ => {
            // p = 2: nonempty iff the unit part of k is 1 mod 4, in which
            // case there are 4 orbits, all of order floor(ord(k)/2).
            let matches_even = v == 2 * r
                && diff_ord_at_least(k, &PadicScalar::prime_power(prime, 2 * r), 2 * r + 2)?;
            let matches_odd = v == 2 * r + 1
                && diff_ord_at_least(k, &PadicScalar::prime_power(prime, 2 * r + 1), 2 * r + 3)?;
            if matches_even || matches_odd {
                4
            } else {
                0
            }
        }
    };
    Ok(OrbitCount {
        r,
        k: k.clone(),
        count: OrbitCountValue::Finite(n),
    })
}

/// Canonical label of a rotation orbit: the order `r` together with the
/// residues of `x p^-r` and `y p^-r` modulo `p^d`. Two points on the same
/// level get equal labels iff they are rotation equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitLabel {
    pub r: i64,
    pub x_residue: u64,
    pub y_residue: u64,
}

pub fn orbit_label(p: &PlanePoint) -> Result<OrbitLabel> {
    let prime = p.prime();
    let r = p.order()?;
    let scale = PadicScalar::prime_power(prime, -r);
    let sx = p.x.mul(&scale)?.known_value();
    let sy = p.y.mul(&scale)?.known_value();
    let d = prime.d();
    let to_residue = |v: &BigRational| -> u64 {
        if v.is_zero() {
            0
        } else {
            rational_mod_pk(prime.value(), v, d)
                .try_into()
                .expect("small residue")
        }
    };
    Ok(OrbitLabel {
        r,
        x_residue: to_residue(&sx),
        y_residue: to_residue(&sy),
    })
}

/// The embedding `(a, b) -> a + i b` of `S^1_p` into `Q_p^*`
/// (p = 1 mod 4), multiplicative for the unitary-matrix product.
///
/// Through this embedding the sector quotient `S^1_p / p Z_p` is
/// identified with `Q_p^* / (1 + p Z_p)`, i.e. `Z x F_p^*` (order and
/// leading digit); the analogous quotients for the other prime classes
/// (`F_{p^2}^*/F_p^*` and `Z/4Z`) are described by the orbit labels but
/// no canonical group bijection is asserted here. Only the homomorphism
/// identity is mechanized.
pub fn circle_group_embed(p: &PlanePoint, trunc: SeriesTruncation) -> Result<PadicScalar> {
    let prime = p.prime();
    let i = canonical_sqrt_minus_one(prime, trunc)?;
    let level = p.level()?;
    if !level.agrees(&PadicScalar::one(prime))? {
        return Err(PadicError::LevelMismatch);
    }
    p.x.add(&i.mul(&p.y)?)
}

/// An exact rational point of the unit circle from the tangent-half-angle
/// parametrization: `((1-t^2)/(1+t^2), 2t/(1+t^2))`.
pub fn unit_circle_point(prime: Prime, t: &BigRational) -> PlanePoint {
    let one = BigRational::from_integer(1.into());
    let t2 = t * t;
    let denom = &one + &t2;
    let x = (&one - &t2) / &denom;
    let y = (t + t) / &denom;
    PlanePoint {
        x: PadicScalar::from_rational(prime, x),
        y: PadicScalar::from_rational(prime, y),
    }
}

/// `n` distinct points on the level of `base`, obtained by exact unitary
/// rotations of `base`.
pub fn rotation_translates(base: &PlanePoint, n: usize) -> Result<Vec<PlanePoint>> {
    let prime = base.prime();
    let mut out = Vec::with_capacity(n);
    let mut t = 0i64;
    while out.len() < n {
        let rot = unit_circle_point(prime, &rat(t));
        let rotated = PlanePoint::new(
            rot.x.mul(&base.x)?.sub(&rot.y.mul(&base.y)?)?,
            rot.y.mul(&base.x)?.add(&rot.x.mul(&base.y)?)?,
        )?;
        out.push(rotated);
        t += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn two_squares_examples() {
        assert!(!is_sum_of_two_squares(&int(3, -15)).unwrap());
        assert!(is_sum_of_two_squares(&int(2, 5)).unwrap());
        assert!(is_sum_of_two_squares(&int(13, 7)).unwrap());
        assert!(is_sum_of_two_squares(&int(7, 0)).unwrap());
    }

    #[test]
    fn solve_examples() {
        for (prime, k) in [(5u64, 2i64), (3, 4), (2, 5), (13, 7), (3, -8), (2, -7)] {
            let kk = int(prime, k);
            let sol = solve_two_squares(&kk, tr()).unwrap();
            assert!(sol.level().unwrap().agrees(&kk).unwrap(), "p={prime} k={k}");
        }
    }

    #[test]
    fn solve_negative_fraction() {
        // u^2 + v^2 = -15/4 in Q_5 (the rank-1 circle for a = 2)
        let k = PadicScalar::from_fraction(p(5), -15, 4);
        let sol = solve_two_squares(&k, tr()).unwrap();
        assert!(sol.level().unwrap().agrees(&k).unwrap());
    }

    #[test]
    fn rotation_equivalence_examples() {
        let a = PlanePoint::from_integers(p(3), 1, 0);
        let b = PlanePoint::from_integers(p(3), 0, 1);
        assert!(!rotation_equivalent(&a, &b).unwrap());
        assert!(rotation_equivalent(&a, &a).unwrap());
    }

    #[test]
    fn transporter_is_unitary_and_transports() {
        let pr = p(3);
        let a = PlanePoint::from_integers(pr, 2, 0);
        let b = PlanePoint::from_integers(pr, 0, 2);
        let m = unitary_transporter(&a, &b).unwrap();
        // (1/4) [[0, -4], [4, 0]]
        assert_eq!(m.entries[0][1].known_value(), rat(-1));
        assert_eq!(m.entries[0][0].known_value(), rat(0));
        assert!(m.det().unwrap().agrees(&PadicScalar::one(pr)).unwrap());
        let moved = m.apply(&a).unwrap();
        assert!(moved.x.agrees(&b.x).unwrap() && moved.y.agrees(&b.y).unwrap());
    }

    #[test]
    fn orbit_count_examples() {
        let c = orbit_count(0, &int(5, 1)).unwrap();
        assert_eq!(c.count, OrbitCountValue::Finite(4));
        let c = orbit_count(0, &int(3, 1)).unwrap();
        assert_eq!(c.count, OrbitCountValue::Finite(4));
        let c = orbit_count(0, &int(2, 1)).unwrap();
        assert_eq!(c.count, OrbitCountValue::Finite(4));
        let c = orbit_count(1, &int(5, 0)).unwrap();
        assert!(matches!(
            c.count,
            OrbitCountValue::InfiniteFamily { per_order: 8, .. }
        ));
    }

    #[test]
    fn orbit_label_examples() {
        let l = orbit_label(&PlanePoint::from_integers(p(3), 1, 0)).unwrap();
        assert_eq!((l.r, l.x_residue, l.y_residue), (0, 1, 0));
        let l = orbit_label(&PlanePoint::from_integers(p(2), 1, 2)).unwrap();
        assert_eq!((l.r, l.x_residue, l.y_residue), (0, 1, 2));
    }

    #[test]
    fn embed_is_multiplicative_on_conjugates() {
        let pr = p(5);
        // (a, b) on C_1 times (a, -b) is the identity, and the embeddings
        // multiply to 1.
        let a = unit_circle_point(pr, &rat(2));
        let conj = PlanePoint::new(a.x.clone(), a.y.neg()).unwrap();
        let ea = circle_group_embed(&a, tr()).unwrap();
        let ec = circle_group_embed(&conj, tr()).unwrap();
        let prod = ea.mul(&ec).unwrap();
        assert!(prod.agrees(&PadicScalar::one(pr)).unwrap());
    }

    #[test]
    fn translates_are_distinct_on_level() {
        let base = solve_two_squares(&int(5, 2), tr()).unwrap();
        let pts = rotation_translates(&base, 4).unwrap();
        for q in &pts {
            assert!(q.level().unwrap().agrees(&int(5, 2)).unwrap());
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let same = pts[i].x.agrees(&pts[j].x).unwrap()
                    && pts[i].y.agrees(&pts[j].y).unwrap();
                assert!(!same, "translates {i} and {j} coincide");
            }
        }
    }
}
