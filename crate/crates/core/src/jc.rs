//! The coupled system `F = (J, H)` on `S^2_p x (Q_p)^2`:
//!
//! ```text
//! J = (u^2 + v^2)/2 + z,    H = (ux + vy)/2
//! ```
//!
//! Evaluation, Hamiltonian fields and the Poisson bracket in the z-chart,
//! critical-point classification, the `(z, b)` fiber machinery with its
//! z-classes and potential, fiber-topology descriptors, and image
//! membership for all primes.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{PadicError, Result};
use crate::poly::RatPoly;
use crate::prime::Prime;
use crate::quadratic::{is_sum_of_two_squares, rotation_translates, solve_two_squares};
use crate::scalar::{rat, rational_ord, PadicScalar, SeriesTruncation, Valuation};

/// A point `(x, y, z, u, v)` of the phase space, with `(x, y, z)` on the
/// sphere (exactly in exact mode, to working precision otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePoint {
    pub x: PadicScalar,
    pub y: PadicScalar,
    pub z: PadicScalar,
    pub u: PadicScalar,
    pub v: PadicScalar,
}

impl PhasePoint {
    pub fn new(
        x: PadicScalar,
        y: PadicScalar,
        z: PadicScalar,
        u: PadicScalar,
        v: PadicScalar,
    ) -> Result<Self> {
        let q = Self { x, y, z, u, v };
        let s = q.sphere_lhs()?;
        if !s.agrees(&PadicScalar::one(q.prime()))? {
            return Err(PadicError::ConstraintViolated(format!(
                "x^2 + y^2 + z^2 = {s} differs from 1"
            )));
        }
        Ok(q)
    }

    pub fn from_integers(prime: Prime, c: [i64; 5]) -> Result<Self> {
        let s = |n| PadicScalar::from_integer(prime, n);
        Self::new(s(c[0]), s(c[1]), s(c[2]), s(c[3]), s(c[4]))
    }

    pub fn prime(&self) -> Prime {
        self.x.prime()
    }

    pub fn sphere_lhs(&self) -> Result<PadicScalar> {
        self.x
            .mul(&self.x)?
            .add(&self.y.mul(&self.y)?)?
            .add(&self.z.mul(&self.z)?)
    }

    pub fn coords(&self) -> [&PadicScalar; 5] {
        [&self.x, &self.y, &self.z, &self.u, &self.v]
    }
}

/// A value `(j, h)` of the momentum map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumValue {
    pub j: PadicScalar,
    pub h: PadicScalar,
}

impl MomentumValue {
    pub fn new(j: PadicScalar, h: PadicScalar) -> Self {
        Self { j, h }
    }

    pub fn from_integers(prime: Prime, j: i64, h: i64) -> Self {
        Self {
            j: PadicScalar::from_integer(prime, j),
            h: PadicScalar::from_integer(prime, h),
        }
    }

    pub fn prime(&self) -> Prime {
        self.j.prime()
    }

    fn require_exact(&self) -> Result<(BigRational, BigRational)> {
        match (self.j.as_rational(), self.h.as_rational()) {
            (Some(j), Some(h)) => Ok((j.clone(), h.clone())),
            _ => Err(PadicError::InsufficientPrecision(
                "momentum values must be exact rationals".into(),
            )),
        }
    }

    pub fn agrees(&self, other: &Self) -> Result<bool> {
        Ok(self.j.agrees(&other.j)? && self.h.agrees(&other.h)?)
    }
}

/// `F(q) = (J(q), H(q))`, evaluated exactly.
pub fn evaluate_f(q: &PhasePoint) -> Result<MomentumValue> {
    let two = PadicScalar::from_integer(q.prime(), 2);
    let j = q
        .u
        .mul(&q.u)?
        .add(&q.v.mul(&q.v)?)?
        .div(&two)?
        .add(&q.z)?;
    let h = q.u.mul(&q.x)?.add(&q.v.mul(&q.y)?)?.div(&two)?;
    Ok(MomentumValue::new(j, h))
}

/// The Hamiltonian vector fields in the z-chart, as 5-component vectors in
/// the coordinates `(x, y, z, u, v)` with the dependent z-slot set to 0:
/// `X_J = (y, -x, 0, v, -u)` and `X_H = (1/2)(-vz, uz, 0, y, -x)`.
///
/// The sign of the `(x, y)` block of `X_H` is fixed by
/// `i(X_H) omega = dH` for `omega = -(1/z) dx^dy + du^dv`; with this sign
/// `X_H` equals `(a/2) X_J` along the rank-1 critical circle.
pub fn hamiltonian_fields(q: &PhasePoint) -> Result<([PadicScalar; 5], [PadicScalar; 5])> {
    let prime = q.prime();
    if q.z.is_zero_at_precision() {
        return Err(PadicError::ChartSingularity);
    }
    let zero = PadicScalar::zero(prime);
    let half = PadicScalar::from_fraction(prime, 1, 2);
    let xj = [
        q.y.clone(),
        q.x.neg(),
        zero.clone(),
        q.v.clone(),
        q.u.neg(),
    ];
    let xh = [
        q.v.mul(&q.z)?.neg().mul(&half)?,
        q.u.mul(&q.z)?.mul(&half)?,
        zero,
        q.y.mul(&half)?,
        q.x.neg().mul(&half)?,
    ];
    Ok((xj, xh))
}

/// `{J, H} = omega(X_J, X_H)` with `omega = -(1/z) dx^dy + du^dv`,
/// evaluated on the two Hamiltonian fields; exactly zero.
pub fn poisson_jh(q: &PhasePoint) -> Result<PadicScalar> {
    let (xj, xh) = hamiltonian_fields(q)?;
    omega_pair(&q.z, &xj, &xh)
}

/// `omega(a, b)` for tangent vectors in `(x, y, z, u, v)` chart components.
fn omega_pair(z: &PadicScalar, a: &[PadicScalar; 5], b: &[PadicScalar; 5]) -> Result<PadicScalar> {
    let xy = a[0].mul(&b[1])?.sub(&a[1].mul(&b[0])?)?;
    let uv = a[3].mul(&b[4])?.sub(&a[4].mul(&b[3])?)?;
    uv.sub(&xy.div(z)?)
}

/// Critical type of a phase point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriticalClassification {
    Regular,
    /// One of the two poles `(0, 0, +-1, 0, 0)`.
    Rank0 { pole: i8 },
    /// A point `(au, av, -a^2, u, v)` with `(u, v) != (0, 0)`.
    Rank1 { a: PadicScalar },
}

/// Classifies a phase point: the two poles have rank 0, the points
/// `(au, av, -a^2, u, v)` rank 1, everything else is regular. Solved
/// exactly: `a` is recovered from `x/u` (or `y/v`) and checked against
/// `z = -a^2`.
pub fn classify_point(q: &PhasePoint) -> Result<CriticalClassification> {
    let prime = q.prime();
    let uv_zero = q.u.is_zero_at_precision() && q.v.is_zero_at_precision();
    if uv_zero {
        if q.x.is_zero_at_precision() && q.y.is_zero_at_precision() {
            let one = PadicScalar::one(prime);
            if q.z.agrees(&one)? {
                return Ok(CriticalClassification::Rank0 { pole: 1 });
            }
            if q.z.agrees(&one.neg())? {
                return Ok(CriticalClassification::Rank0 { pole: -1 });
            }
        }
        return Ok(CriticalClassification::Regular);
    }
    let a = if !q.u.is_zero_at_precision() {
        q.x.div(&q.u)?
    } else {
        q.y.div(&q.v)?
    };
    let consistent = a.mul(&q.u)?.agrees(&q.x)?
        && a.mul(&q.v)?.agrees(&q.y)?
        && a.mul(&a)?.neg().agrees(&q.z)?;
    if consistent {
        Ok(CriticalClassification::Rank1 { a })
    } else {
        Ok(CriticalClassification::Regular)
    }
}

/// Rank of `dF` at `q` computed independently from 2x2 minors of the
/// Jacobian restricted to the sphere tangent space, in a chart whose
/// dependent coordinate is nonzero at `q`.
pub fn jacobian_rank(q: &PhasePoint) -> Result<usize> {
    let half = PadicScalar::from_fraction(q.prime(), 1, 2);
    let (dj, dh): (Vec<PadicScalar>, Vec<PadicScalar>) = if !q.z.is_zero_at_precision() {
        // chart (x, y, u, v), z dependent: dz = -(x dx + y dy)/z
        (
            vec![
                q.x.div(&q.z)?.neg(),
                q.y.div(&q.z)?.neg(),
                q.u.clone(),
                q.v.clone(),
            ],
            vec![
                q.u.mul(&half)?,
                q.v.mul(&half)?,
                q.x.mul(&half)?,
                q.y.mul(&half)?,
            ],
        )
    } else if !q.x.is_zero_at_precision() {
        // chart (y, z, u, v), x dependent: dx = -(y dy + z dz)/x
        (
            vec![
                PadicScalar::zero(q.prime()),
                PadicScalar::one(q.prime()),
                q.u.clone(),
                q.v.clone(),
            ],
            vec![
                q.v.sub(&q.u.mul(&q.y.div(&q.x)?)?)?.mul(&half)?,
                q.u.mul(&q.z.div(&q.x)?)?.neg().mul(&half)?,
                q.x.mul(&half)?,
                q.y.mul(&half)?,
            ],
        )
    } else {
        // chart (x, z, u, v), y dependent: dy = -(x dx + z dz)/y
        (
            vec![
                PadicScalar::zero(q.prime()),
                PadicScalar::one(q.prime()),
                q.u.clone(),
                q.v.clone(),
            ],
            vec![
                q.u.sub(&q.v.mul(&q.x.div(&q.y)?)?)?.mul(&half)?,
                q.v.mul(&q.z.div(&q.y)?)?.neg().mul(&half)?,
                q.x.mul(&half)?,
                q.y.mul(&half)?,
            ],
        )
    };
    let all_zero = |v: &[PadicScalar]| v.iter().all(|c| c.is_zero_at_precision());
    if all_zero(&dj) && all_zero(&dh) {
        return Ok(0);
    }
    for i in 0..4 {
        for k in i + 1..4 {
            let minor = dj[i].mul(&dh[k])?.sub(&dj[k].mul(&dh[i])?)?;
            if !minor.is_zero_at_precision() {
                return Ok(2);
            }
        }
    }
    Ok(1)
}

/// The critical value `((1 - 3a^4)/(2a^2), (1 - a^4)/(2a))`.
pub fn critical_value(a: &PadicScalar) -> Result<MomentumValue> {
    let prime = a.prime();
    if a.is_zero_at_precision() {
        return Err(PadicError::DivisionByZero);
    }
    let one = PadicScalar::one(prime);
    let two = PadicScalar::from_integer(prime, 2);
    let a2 = a.mul(a)?;
    let a4 = a2.mul(&a2)?;
    let j = one
        .sub(&a4.mul(&PadicScalar::from_integer(prime, 3))?)?
        .div(&two.mul(&a2)?)?;
    let h = one.sub(&a4)?.div(&two.mul(a)?)?;
    Ok(MomentumValue::new(j, h))
}

/// A solution of the critical-parameter equations for a given `(j, h)`.
#[derive(Debug, Clone)]
pub struct CriticalParameter {
    pub a: PadicScalar,
    /// `1 - a^4` is a sum of two squares, so critical points with this
    /// parameter actually exist.
    pub critical_circle_nonempty: bool,
    /// Set when `(j, h)` is one of the rank-0 values `(+-1, 0)`.
    pub pole_value: bool,
}

/// Inverts the critical-value map: finds every `a` with
/// `3a^4 + 2j a^2 - 1 = 0` and `a^4 + 2h a - 1 = 0`, i.e. the roots of the
/// gcd of the two quartics. Rational roots are found exactly; irrational
/// p-adic roots by Hensel lifting on the gcd. Absence is a legitimate
/// result (empty vector).
pub fn critical_parameter(
    jh: &MomentumValue,
    trunc: SeriesTruncation,
) -> Result<Vec<CriticalParameter>> {
    let prime = jh.prime();
    let (j, h) = jh.require_exact()?;
    let g1 = RatPoly::new(vec![rat(-1), rat(0), &j * rat(2), rat(0), rat(3)]);
    let g2 = RatPoly::new(vec![rat(-1), &h * rat(2), rat(0), rat(0), rat(1)]);
    let g = g1.gcd(&g2);
    if g.degree() == 0 {
        return Ok(Vec::new());
    }
    let pole_value = {
        let one = rat(1);
        h.is_zero() && (j == one || j == -&one)
    };
    let mut out: Vec<CriticalParameter> = Vec::new();
    let rational_roots = g.rational_roots(1_000_000);
    let mut deflated = g.clone();
    for r in &rational_roots {
        let a = PadicScalar::from_rational(prime, r.clone());
        let circle = is_sum_of_two_squares(&PadicScalar::one(prime).sub(&a.pow(4)?)?)?;
        out.push(CriticalParameter {
            a,
            critical_circle_nonempty: circle,
            pole_value,
        });
        let linear = RatPoly::new(vec![-r, rat(1)]);
        let (quot, rem) = deflated.div_rem(&linear);
        debug_assert!(rem.is_zero());
        deflated = quot;
    }
    for a in padic_roots(prime, &deflated, trunc)? {
        let circle = is_sum_of_two_squares(&PadicScalar::one(prime).sub(&a.pow(4)?)?)?;
        out.push(CriticalParameter {
            a,
            critical_circle_nonempty: circle,
            pole_value,
        });
    }
    Ok(out)
}

/// Irrational p-adic roots of a rational polynomial by residue search and
/// Hensel lifting, over a symmetric window of candidate valuations.
fn padic_roots(prime: Prime, g: &RatPoly, trunc: SeriesTruncation) -> Result<Vec<PadicScalar>> {
    let p = prime.value();
    let mut roots: Vec<PadicScalar> = Vec::new();
    if g.degree() == 0 {
        return Ok(roots);
    }
    for m in -6i64..=6 {
        // substitute a = p^m t and clear powers: unit roots t of g_m
        let scale = BigRational::from_integer(num_bigint::BigInt::from(p)).pow(m as i32);
        let coeffs: Vec<BigRational> = g
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * scale.pow(i as i32))
            .collect();
        let min_ord = coeffs
            .iter()
            .filter_map(|c| rational_ord(p, c).finite())
            .min()
            .unwrap_or(0);
        let clear = BigRational::from_integer(num_bigint::BigInt::from(p)).pow(min_ord as i32);
        let gm = RatPoly::new(coeffs.into_iter().map(|c| c / &clear).collect());
        let window = prime.d() + 2;
        let pw = p.pow(window);
        for t0 in 1..pw {
            if t0 % p == 0 {
                continue;
            }
            let t0r = rat(t0 as i64);
            let val = gm.eval(&t0r);
            if val.is_zero() {
                continue; // rational root, handled by the caller
            }
            let r = rational_ord(p, &val).finite().unwrap();
            let s = match rational_ord(p, &gm.derivative().eval(&t0r)) {
                Valuation::Finite(s) => s,
                Valuation::Infinity => continue,
            };
            if r > 2 * s && r >= window as i64 {
                let seed = PadicScalar::from_integer(prime, t0 as i64);
                if let Ok(root) = crate::hensel::hensel_lift(prime, &gm, &seed, trunc) {
                    let scaled = root.mul(&PadicScalar::prime_power(prime, m))?;
                    let mut fresh = true;
                    for known in &roots {
                        if known.agrees(&scaled)? {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        roots.push(scaled);
                    }
                }
            }
        }
    }
    Ok(roots)
}

/// `ord(2 (z^2 - 1)(z - j))`, the potential of `z` relative to `j`;
/// infinity when `z` is `1`, `-1` or `j`.
pub fn potential(z: &PadicScalar, j: &PadicScalar) -> Result<Valuation> {
    let prime = z.prime();
    let one = PadicScalar::one(prime);
    let t = PadicScalar::from_integer(prime, 2)
        .mul(&z.mul(z)?.sub(&one)?)?
        .mul(&z.sub(j)?)?;
    match t.as_rational() {
        Some(r) => Ok(rational_ord(prime.value(), r)),
        None => t.ord(),
    }
}

/// Squareness/order class of `z` relative to `j`, deciding fiber
/// membership per prime class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZClass {
    First,
    Second,
    Third,
    /// Only for `p = 2`: a factor ends in 11.
    Fourth,
}

impl ZClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZClass::First => "first",
            ZClass::Second => "second",
            ZClass::Third => "third",
            ZClass::Fourth => "fourth",
        }
    }
}

/// Classifies `z` into the first/second/third (and fourth for `p = 2`)
/// classes; `1`, `-1` and `j` are first class by convention.
pub fn z_class(z: &PadicScalar, j: &PadicScalar) -> Result<ZClass> {
    let prime = z.prime();
    let one = PadicScalar::one(prime);
    let z2m1 = z.mul(z)?.sub(&one)?;
    let jmz = j.sub(z)?;
    if z2m1.is_exact_zero() || jmz.is_exact_zero() {
        return Ok(ZClass::First);
    }
    let two = PadicScalar::from_integer(prime, 2);
    let product = two.mul(&jmz)?.mul(&one.sub(&z.mul(z)?)?)?;
    match prime.residue_class_mod_4() {
        1 => {
            if product.is_square()? {
                Ok(ZClass::First)
            } else if product.ord()?.is_even() {
                Ok(ZClass::Second)
            } else {
                Ok(ZClass::Third)
            }
        }
        3 => {
            let parts_even = z2m1.ord()?.is_even() && jmz.ord()?.is_even();
            if !parts_even {
                Ok(ZClass::Third)
            } else if product.is_square()? {
                Ok(ZClass::First)
            } else {
                Ok(ZClass::Second)
            }
        }
        _ => {
            // p = 2 digit classes on the factors j - z and 1 - z^2
            let f1_01 = jmz.ends_in(&[1, 0])?;
            let f2_01 = one.sub(&z.mul(z)?)?.ends_in(&[1, 0])?;
            if !(f1_01 && f2_01) {
                return Ok(ZClass::Fourth);
            }
            let v = product.ord()?;
            if !v.is_even() {
                return Ok(ZClass::Third);
            }
            if product.ends_in(&[1, 0, 0])? {
                Ok(ZClass::First)
            } else {
                Ok(ZClass::Second)
            }
        }
    }
}

/// Membership of `z` in the projection of `V_{j,h}`, together with the
/// admissible `b` values.
#[derive(Debug, Clone)]
pub enum VMembership {
    /// `z` does not occur in `V_{j,h}`.
    None,
    /// Exactly one `b`, namely zero.
    SingleZero,
    /// Two values `+-b`; the canonical root is carried.
    Pair { b: PadicScalar },
}

impl VMembership {
    pub fn is_member(&self) -> bool {
        !matches!(self, VMembership::None)
    }
}

/// Decides `(z, b) in V_{j,h}`: requires `2(j - z)` to be a sum of two
/// squares and `b^2 = t` for `t = 2(j - z)(1 - z^2) - 4h^2`.
pub fn v_set_membership(
    jh: &MomentumValue,
    z: &PadicScalar,
    trunc: SeriesTruncation,
) -> Result<VMembership> {
    let prime = z.prime();
    let two = PadicScalar::from_integer(prime, 2);
    let jmz = jh.j.sub(z)?;
    if !is_sum_of_two_squares(&two.mul(&jmz)?)? {
        return Ok(VMembership::None);
    }
    let t = fiber_discriminant(jh, z)?;
    if t.is_exact_zero() {
        return Ok(VMembership::SingleZero);
    }
    if t.is_square()? {
        Ok(VMembership::Pair { b: t.sqrt(trunc)? })
    } else {
        Ok(VMembership::None)
    }
}

/// `t = 2(j - z)(1 - z^2) - 4h^2`, the square whose roots are the `b`
/// values over `z`.
pub fn fiber_discriminant(jh: &MomentumValue, z: &PadicScalar) -> Result<PadicScalar> {
    let prime = z.prime();
    let one = PadicScalar::one(prime);
    let two = PadicScalar::from_integer(prime, 2);
    let four = PadicScalar::from_integer(prime, 4);
    two.mul(&jh.j.sub(z)?)?
        .mul(&one.sub(&z.mul(z)?)?)?
        .sub(&four.mul(&jh.h.mul(&jh.h)?)?)
}

/// Shape of the sub-fiber `U_{j,h}(z, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubfiberType {
    Circle,
    Point,
    /// Homeomorphic to `Q_p^*` (only `p = 1 mod 4`, `z = j`).
    PuncturedLine,
    /// Union of two 2-planes (only `p = 1 mod 4`, `z = j = +-1`).
    TwoPlanes,
}

impl SubfiberType {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubfiberType::Circle => "circle",
            SubfiberType::Point => "point",
            SubfiberType::PuncturedLine => "punctured-line",
            SubfiberType::TwoPlanes => "two-planes",
        }
    }
}

/// The sub-fiber type over `(z, b) in V_{j,h}`: a circle except when
/// `z = j`, where the slice degenerates by prime class and `(j, h)`.
pub fn subfiber_type(
    jh: &MomentumValue,
    z: &PadicScalar,
    _b: &PadicScalar,
) -> Result<SubfiberType> {
    let prime = z.prime();
    if !z.agrees(&jh.j)? {
        return Ok(SubfiberType::Circle);
    }
    let h_zero = jh.h.is_zero_at_precision();
    let is_pole_value = {
        let one = PadicScalar::one(prime);
        h_zero && (jh.j.agrees(&one)? || jh.j.agrees(&one.neg())?)
    };
    if prime.residue_class_mod_4() == 1 {
        if is_pole_value {
            Ok(SubfiberType::TwoPlanes)
        } else if h_zero {
            // u = v = 0 is forced when h = 0 away from the poles: the
            // slice is the circle x^2 + y^2 = 1 - j^2
            Ok(SubfiberType::Circle)
        } else {
            Ok(SubfiberType::PuncturedLine)
        }
    } else if is_pole_value {
        Ok(SubfiberType::Point)
    } else {
        Ok(SubfiberType::Circle)
    }
}

/// `n` points of the sub-fiber `U_{j,h}(z, b)`, `z != j`: solutions
/// `(u, v)` of `u^2 + v^2 = 2(j - z)` rotated through exact unit-circle
/// points, with `(x, y)` recovered from the linear system.
pub fn sample_fiber(
    jh: &MomentumValue,
    z: &PadicScalar,
    b: &PadicScalar,
    n: usize,
    trunc: SeriesTruncation,
) -> Result<Vec<PhasePoint>> {
    let prime = z.prime();
    if z.agrees(&jh.j)? {
        return Err(PadicError::NoSolution(
            "z = j sub-fibers have u = v = 0 and are sampled directly".into(),
        ));
    }
    let two = PadicScalar::from_integer(prime, 2);
    let k = two.mul(&jh.j.sub(z)?)?;
    let base = solve_two_squares(&k, trunc)?;
    let mut out = Vec::with_capacity(n);
    for uv in rotation_translates(&base, n)? {
        let denom = uv.level()?;
        let two_h = two.mul(&jh.h)?;
        let x = two_h.mul(&uv.x)?.sub(&b.mul(&uv.y)?)?.div(&denom)?;
        let y = two_h.mul(&uv.y)?.add(&b.mul(&uv.x)?)?.div(&denom)?;
        out.push(PhasePoint::new(x, y, z.clone(), uv.x, uv.y)?);
    }
    Ok(out)
}

/// Topological descriptor of a fiber `F^-1(j, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberVariant {
    TwoManifold,
    /// Rank-1 value, `-3a^4 - 1` not a square: critical circle disjoint
    /// from a 2-manifold.
    CriticalCircleDisjoint,
    /// Rank-1 value, `-3a^4 - 1` a square: dimension 2 with singularities
    /// along the critical circle.
    SingularAlongCircle,
    /// `(-1, 0)` for `p = 3 mod 4`.
    IsolatedPointPlusOptionalTwoManifold,
    /// `(-1, 0)` for `p = 2`.
    SinglePoint,
    /// `(1, 0)` for `p != 1 mod 4`.
    SingularAtPoint,
    /// `(+-1, 0)` for `p = 1 mod 4`: singular along the four lines `L_j`.
    SingularAlongFourLines { pole: i8 },
}

impl FiberVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiberVariant::TwoManifold => "two-manifold",
            FiberVariant::CriticalCircleDisjoint => "critical-circle-disjoint",
            FiberVariant::SingularAlongCircle => "singular-along-circle",
            FiberVariant::IsolatedPointPlusOptionalTwoManifold => {
                "isolated-point-plus-optional-two-manifold"
            }
            FiberVariant::SinglePoint => "single-point",
            FiberVariant::SingularAtPoint => "singular-at-point",
            FiberVariant::SingularAlongFourLines { .. } => "singular-along-four-lines",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiberReport {
    pub variant: FiberVariant,
    /// The rank-1 parameter, when one exists.
    pub a: Option<PadicScalar>,
    pub flags: Vec<String>,
}

/// Classifies the topology of the fiber over `(j, h)`, dispatching on
/// the prime class and the critical-parameter data.
pub fn fiber_descriptor(jh: &MomentumValue, trunc: SeriesTruncation) -> Result<FiberReport> {
    let prime = jh.prime();
    jh.require_exact()?;
    let one = PadicScalar::one(prime);
    let mut flags = Vec::new();
    if prime.is_two() {
        if let ImageVerdict::NotInImage { .. } = jc_image_test(jh, trunc)? {
            flags.push("empty-not-in-image".to_string());
        }
    }
    let is_minus_pole = jh.h.is_exact_zero() && jh.j.agrees(&one.neg())?;
    let is_plus_pole = jh.h.is_exact_zero() && jh.j.agrees(&one)?;
    if is_minus_pole {
        let variant = match prime.residue_class_mod_4() {
            1 => FiberVariant::SingularAlongFourLines { pole: -1 },
            3 => {
                flags.push("two-manifold-may-be-empty".to_string());
                FiberVariant::IsolatedPointPlusOptionalTwoManifold
            }
            _ => FiberVariant::SinglePoint,
        };
        return Ok(FiberReport {
            variant,
            a: None,
            flags,
        });
    }
    if is_plus_pole {
        let variant = if prime.residue_class_mod_4() == 1 {
            FiberVariant::SingularAlongFourLines { pole: 1 }
        } else {
            FiberVariant::SingularAtPoint
        };
        return Ok(FiberReport {
            variant,
            a: None,
            flags,
        });
    }
    let params = critical_parameter(jh, trunc)?;
    if let Some(param) = params.iter().find(|p| p.critical_circle_nonempty) {
        let a4 = param.a.pow(4)?;
        let test = PadicScalar::from_integer(prime, -3).mul(&a4)?.sub(&one)?;
        let variant = if test.is_square()? {
            FiberVariant::SingularAlongCircle
        } else {
            if prime.is_two() {
                flags.push("two-manifold-may-be-empty".to_string());
            }
            FiberVariant::CriticalCircleDisjoint
        };
        return Ok(FiberReport {
            variant,
            a: Some(param.a.clone()),
            flags,
        });
    }
    if let Some(param) = params.first() {
        flags.push("rank1-parameter-exists".to_string());
        flags.push("critical-circle-empty".to_string());
        return Ok(FiberReport {
            variant: FiberVariant::TwoManifold,
            a: Some(param.a.clone()),
            flags,
        });
    }
    Ok(FiberReport {
        variant: FiberVariant::TwoManifold,
        a: None,
        flags,
    })
}

/// Verdict on `(j, h)` being a value of `F`.
#[derive(Debug, Clone)]
pub enum ImageVerdict {
    InImage {
        witness: Option<PhasePoint>,
        reason: String,
    },
    NotInImage {
        reason: String,
    },
    /// Only for `p = 2`: no necessary condition fails and no sufficient
    /// condition holds; the report lists what was tested.
    Unknown { report: Vec<String> },
}

impl ImageVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ImageVerdict::InImage { .. } => "InImage",
            ImageVerdict::NotInImage { .. } => "NotInImage",
            ImageVerdict::Unknown { .. } => "Unknown",
        }
    }
}

/// Image membership: all of `(Q_p)^2` for `p > 2`; for `p = 2` the
/// necessary and sufficient ord/digit conditions, with a constructed
/// witness on the sufficient side and `Unknown` in the gap.
pub fn jc_image_test(jh: &MomentumValue, trunc: SeriesTruncation) -> Result<ImageVerdict> {
    let prime = jh.prime();
    jh.require_exact()?;
    if !prime.is_two() {
        return Ok(ImageVerdict::InImage {
            witness: None,
            reason: "F is surjective for p > 2".into(),
        });
    }
    let oj = rational_ord(2, jh.j.as_rational().unwrap());
    let oh = rational_ord(2, jh.h.as_rational().unwrap());
    // necessary conditions
    if oj.at_least(1) && !oh.at_least(0) {
        return Ok(ImageVerdict::NotInImage {
            reason: "ord(j)>=1 requires ord(h)>=0".into(),
        });
    }
    if oj == Valuation::Finite(0) {
        let ok = oh.at_least(-1) && oh != Valuation::Finite(0);
        if !ok {
            return Ok(ImageVerdict::NotInImage {
                reason: "ord(j)=0 requires ord(h)>=-1 and ord(h)!=0".into(),
            });
        }
    }
    if let Valuation::Finite(vj) = oj {
        if vj < 0 && vj % 2 == 0 && oh != Valuation::Finite(vj / 2 - 1) {
            return Ok(ImageVerdict::NotInImage {
                reason: "ord(j)<0 even requires ord(h)=ord(j)/2-1".into(),
            });
        }
        if vj < 0 && vj % 2 != 0 && !oh.at_least((vj - 1) / 2) {
            return Ok(ImageVerdict::NotInImage {
                reason: "ord(j)<0 odd requires ord(h)>=(ord(j)-1)/2".into(),
            });
        }
        if vj <= -2 && !jh.j.ends_in(&[1, 0])? {
            return Ok(ImageVerdict::NotInImage {
                reason: "ord(j)<=-2 requires j to end in 01".into(),
            });
        }
    }
    // sufficient conditions
    let mut report = vec!["necessary conditions hold".to_string()];
    let mut sufficient: Option<String> = None;
    if oj.at_least(1) && oh.at_least(0) {
        sufficient = Some("ord(j)>=1 and ord(h)>=0".into());
    } else if let Valuation::Finite(vj) = oj {
        if vj <= 0 && vj % 2 == 0 && jh.j.ends_in(&[1, 0])? && oh == Valuation::Finite(vj / 2 - 1)
        {
            sufficient = Some("ord(j)<=0 even, j ends in 01, ord(h)=ord(j)/2-1".into());
        } else if vj <= -3 && vj % 2 != 0 && jh.j.ends_in(&[1, 0])? && oh.at_least((vj + 1) / 2) {
            sufficient = Some("ord(j)<=-3 odd, j ends in 01, ord(h)>=(ord(j)+1)/2".into());
        } else {
            report.push("ord-based sufficiency not met".into());
        }
    } else {
        report.push("no ord-based sufficiency applies".into());
    }
    if sufficient.is_none() {
        // critical values are in the image when their circle is nonempty
        let one = PadicScalar::one(prime);
        let pole = jh.h.is_exact_zero() && (jh.j.agrees(&one)? || jh.j.agrees(&one.neg())?);
        if pole {
            sufficient = Some("rank-0 critical value".into());
        } else if critical_parameter(jh, trunc)?
            .iter()
            .any(|p| p.critical_circle_nonempty)
        {
            sufficient = Some("rank-1 critical value with nonempty circle".into());
        } else {
            report.push("not a critical value with nonempty circle".into());
        }
    }
    match sufficient {
        Some(reason) => {
            let witness = construct_fiber_point(jh, trunc).ok();
            Ok(ImageVerdict::InImage { witness, reason })
        }
        None => Ok(ImageVerdict::Unknown { report }),
    }
}

/// Constructs a point of `F^-1(j, h)` by a deterministic search over the
/// `z` recipes of the surjectivity and sufficiency proofs, verifying the
/// result by re-evaluation.
pub fn construct_fiber_point(jh: &MomentumValue, trunc: SeriesTruncation) -> Result<PhasePoint> {
    jh.require_exact()?;
    for z in candidate_z(jh)? {
        if let Some(q) = try_z(jh, &z, trunc)? {
            if evaluate_f(&q)?.agrees(jh)? {
                return Ok(q);
            }
        }
    }
    Err(PadicError::NoSolution(format!(
        "no fiber point found for (j, h) = ({}, {})",
        jh.j, jh.h
    )))
}

fn candidate_z(jh: &MomentumValue) -> Result<Vec<PadicScalar>> {
    let prime = jh.prime();
    let mut out = Vec::new();
    // the z = j slice (u = v = 0), only fruitful when h = 0
    if jh.h.is_exact_zero() {
        out.push(jh.j.clone());
    }
    if prime.is_two() {
        // small even integers cover the low-potential recipes
        for n in [0i64, 2, -2, 4, -4, 6, -6, 8, -8, 10, 12, 14, 16, 32, 64] {
            out.push(PadicScalar::from_integer(prime, n));
        }
        for n in [5i64, 11, 21, 27, -3, -11] {
            out.push(PadicScalar::from_integer(prime, n));
        }
        // z = j - s 2^e with s = 1 mod 4 covers the high-potential recipes
        for e in 1..=24i64 {
            for s in [1i64, 5, 13] {
                let shift =
                    PadicScalar::from_integer(prime, s).mul(&PadicScalar::prime_power(prime, e))?;
                out.push(jh.j.sub(&shift)?);
            }
        }
    } else {
        for n in -8i64..=8 {
            out.push(PadicScalar::from_integer(prime, n));
        }
        // z = 2 p^(-2M): 2z = (2 p^-M)^2 is a square of low order
        for m in 1..=14i64 {
            out.push(
                PadicScalar::from_integer(prime, 2).mul(&PadicScalar::prime_power(prime, -2 * m))?,
            );
        }
        for e in 1..=10i64 {
            out.push(jh.j.sub(&PadicScalar::prime_power(prime, e))?);
        }
    }
    Ok(out)
}

fn try_z(
    jh: &MomentumValue,
    z: &PadicScalar,
    trunc: SeriesTruncation,
) -> Result<Option<PhasePoint>> {
    let prime = jh.prime();
    let one = PadicScalar::one(prime);
    if z.agrees(&jh.j)? {
        // u = v = 0 requires h = 0 and 1 - j^2 a (possibly zero) sum of
        // two squares
        if !jh.h.is_exact_zero() {
            return Ok(None);
        }
        let k = one.sub(&z.mul(z)?)?;
        let zero = PadicScalar::zero(prime);
        if k.is_exact_zero() {
            return Ok(Some(PhasePoint::new(
                zero.clone(),
                zero.clone(),
                z.clone(),
                zero.clone(),
                zero,
            )?));
        }
        if !is_sum_of_two_squares(&k)? {
            return Ok(None);
        }
        let xy = solve_two_squares(&k, trunc)?;
        return Ok(Some(PhasePoint::new(
            xy.x,
            xy.y,
            z.clone(),
            zero.clone(),
            zero,
        )?));
    }
    match v_set_membership(jh, z, trunc)? {
        VMembership::None => Ok(None),
        VMembership::SingleZero => {
            let b = PadicScalar::zero(prime);
            let pts = sample_fiber(jh, z, &b, 1, trunc)?;
            Ok(pts.into_iter().next())
        }
        VMembership::Pair { b } => {
            let pts = sample_fiber(jh, z, &b, 1, trunc)?;
            Ok(pts.into_iter().next())
        }
    }
}

/// Classification of the values of a power series without constant term
/// near 0: mixed squares and non-squares, all squares, or no squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareNeighborhood {
    Mixed,
    AllSquares,
    NoSquares,
}

/// Applies the square-neighborhood criterion to the first two coefficients
/// (`coeffs[i]` is the coefficient of `x^(i+1)`).
pub fn square_neighborhood_class(coeffs: &[PadicScalar]) -> Result<SquareNeighborhood> {
    let a1 = coeffs.first().ok_or_else(|| {
        PadicError::InsufficientPrecision("need at least the linear coefficient".into())
    })?;
    if !a1.is_zero_at_precision() {
        return Ok(SquareNeighborhood::Mixed);
    }
    if !a1.is_exact_zero() {
        return Err(PadicError::InsufficientPrecision(
            "a1 is zero only to working precision".into(),
        ));
    }
    let a2 = coeffs.get(1).ok_or_else(|| {
        PadicError::InsufficientPrecision("need the quadratic coefficient".into())
    })?;
    if a2.is_zero_at_precision() {
        return Err(PadicError::InsufficientPrecision(
            "a1 = a2 = 0 at available precision".into(),
        ));
    }
    if a2.is_square()? {
        Ok(SquareNeighborhood::AllSquares)
    } else {
        Ok(SquareNeighborhood::NoSquares)
    }
}

/// What the class/potential criterion predicts about `z` appearing in
/// `V_{j,h}`, without evaluating the square test directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionPrediction {
    In,
    Out,
    /// The criterion leaves these cases value-dependent.
    ValueDependent,
}

/// The projection prediction for `z` from `(z_class, potential, ord h)`,
/// used to cross-check `v_set_membership` on random samples.
pub fn projection_prediction(jh: &MomentumValue, z: &PadicScalar) -> Result<ProjectionPrediction> {
    let prime = z.prime();
    let class = z_class(z, &jh.j)?;
    let pot = potential(z, &jh.j)?;
    let oh = match jh.h.as_rational() {
        Some(r) => rational_ord(prime.value(), r),
        None => jh.h.ord()?,
    };
    let Valuation::Finite(pot) = pot else {
        // z in {1, -1, j}: decided by the direct computation only
        return Ok(ProjectionPrediction::ValueDependent);
    };
    use ProjectionPrediction::*;
    use ZClass::*;
    if prime.is_two() {
        let threshold = match oh {
            Valuation::Finite(m) => 2 * m,
            Valuation::Infinity => return Ok(if class == First { In } else { Out }),
        };
        return Ok(match class {
            Fourth => Out,
            First => {
                if pot < threshold {
                    In
                } else if pot == threshold + 2 {
                    ValueDependent
                } else {
                    Out
                }
            }
            Second => {
                if pot == threshold {
                    In
                } else if pot == threshold + 2 {
                    ValueDependent
                } else {
                    Out
                }
            }
            Third => {
                if pot == threshold + 3 {
                    In
                } else {
                    Out
                }
            }
        });
    }
    // For odd p the competing term 4h^2 has ord 2 ord(h) (ord(2) = 0),
    // so the potential threshold is 2 ord(h), not the 2-adic 2 ord(h) + 2.
    let threshold = match oh {
        Valuation::Finite(m) => 2 * m,
        Valuation::Infinity => return Ok(if class == First { In } else { Out }),
    };
    let above_all_in = prime.residue_class_mod_4() == 1;
    Ok(match class {
        First => {
            if pot < threshold {
                In
            } else if pot == threshold {
                ValueDependent
            } else if above_all_in {
                In
            } else {
                Out
            }
        }
        Second => {
            if pot < threshold {
                Out
            } else if pot == threshold {
                ValueDependent
            } else if above_all_in {
                In
            } else {
                Out
            }
        }
        Third => {
            // odd potential: above the threshold the 4h^2 part wins with
            // an even-order leading term -(2h)^2
            if pot > threshold && above_all_in {
                In
            } else {
                Out
            }
        }
        Fourth => unreachable!("fourth class only exists for p = 2"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn tr() -> SeriesTruncation {
        SeriesTruncation::new(24).unwrap()
    }

    fn int(prime: Prime, n: i64) -> PadicScalar {
        PadicScalar::from_integer(prime, n)
    }

    #[test]
    fn evaluate_poles() {
        let pr = p(5);
        let north = PhasePoint::from_integers(pr, [0, 0, 1, 0, 0]).unwrap();
        let f = evaluate_f(&north).unwrap();
        assert_eq!(f.j.known_value(), rat(1));
        assert_eq!(f.h.known_value(), rat(0));
        let south = PhasePoint::from_integers(pr, [0, 0, -1, 0, 0]).unwrap();
        let f = evaluate_f(&south).unwrap();
        assert_eq!(f.j.known_value(), rat(-1));
    }

    fn rank1_point(prime: Prime, a: i64) -> PhasePoint {
        // (au, av, -a^2, u, v) with u^2 + v^2 = (1 - a^4)/a^2
        let a = int(prime, a);
        let one = PadicScalar::one(prime);
        let a2 = a.mul(&a).unwrap();
        let k = one.sub(&a2.mul(&a2).unwrap()).unwrap().div(&a2).unwrap();
        let uv = solve_two_squares(&k, tr()).unwrap();
        PhasePoint::new(
            a.mul(&uv.x).unwrap(),
            a.mul(&uv.y).unwrap(),
            a2.neg(),
            uv.x,
            uv.y,
        )
        .unwrap()
    }

    #[test]
    fn rank1_point_evaluates_to_critical_value() {
        let pr = p(5);
        let q = rank1_point(pr, 2);
        let f = evaluate_f(&q).unwrap();
        let expected = critical_value(&int(pr, 2)).unwrap();
        // figure value (-47/8, -15/4)
        assert_eq!(expected.j.known_value(), crate::scalar::rat_frac(-47, 8));
        assert_eq!(expected.h.known_value(), crate::scalar::rat_frac(-15, 4));
        assert!(f.agrees(&expected).unwrap());
    }

    #[test]
    fn classification_examples() {
        let pr = p(5);
        let north = PhasePoint::from_integers(pr, [0, 0, 1, 0, 0]).unwrap();
        assert_eq!(
            classify_point(&north).unwrap(),
            CriticalClassification::Rank0 { pole: 1 }
        );
        let q = rank1_point(pr, 2);
        match classify_point(&q).unwrap() {
            CriticalClassification::Rank1 { a } => assert!(a.agrees(&int(pr, 2)).unwrap()),
            other => panic!("expected rank 1, got {other:?}"),
        }
        let reg = PhasePoint::from_integers(pr, [1, 0, 0, 0, 0]).unwrap();
        assert_eq!(classify_point(&reg).unwrap(), CriticalClassification::Regular);
        assert_eq!(jacobian_rank(&reg).unwrap(), 2);
        assert_eq!(jacobian_rank(&north).unwrap(), 0);
        assert_eq!(jacobian_rank(&q).unwrap(), 1);
    }

    #[test]
    fn hamiltonian_field_values() {
        let pr = p(5);
        let q = PhasePoint::from_integers(pr, [0, 0, 1, 1, 0]).unwrap();
        let (xj, _) = hamiltonian_fields(&q).unwrap();
        let got: Vec<_> = xj.iter().map(|c| c.known_value()).collect();
        assert_eq!(got, vec![rat(0), rat(0), rat(0), rat(0), rat(-1)]);
        let north = PhasePoint::from_integers(pr, [0, 0, 1, 0, 0]).unwrap();
        let (_, xh) = hamiltonian_fields(&north).unwrap();
        assert!(xh.iter().all(|c| c.is_exact_zero()));
    }

    #[test]
    fn rank1_fields_are_parallel() {
        let pr = p(5);
        let q = rank1_point(pr, 2);
        let (xj, xh) = hamiltonian_fields(&q).unwrap();
        // X_H = (a/2) X_J at (au, av, -a^2, u, v)
        let lambda = PadicScalar::from_fraction(pr, 2, 2)
            .mul(&int(pr, 2))
            .unwrap()
            .mul(&PadicScalar::from_fraction(pr, 1, 2))
            .unwrap();
        for (a, b) in xj.iter().zip(xh.iter()) {
            assert!(a.mul(&lambda).unwrap().agrees(b).unwrap());
        }
    }

    #[test]
    fn poisson_vanishes() {
        // exact rational sphere points (3/5, 0, 4/5)-style
        let pr = p(7);
        let q = PhasePoint::new(
            PadicScalar::from_fraction(pr, 3, 5),
            PadicScalar::zero(pr),
            PadicScalar::from_fraction(pr, 4, 5),
            int(pr, 1),
            int(pr, 1),
        )
        .unwrap();
        let bracket = poisson_jh(&q).unwrap();
        assert!(bracket.is_exact_zero());
        let q2 = PhasePoint::new(
            PadicScalar::zero(pr),
            PadicScalar::from_fraction(pr, 3, 5),
            PadicScalar::from_fraction(pr, 4, 5),
            int(pr, 2),
            PadicScalar::zero(pr),
        )
        .unwrap();
        assert!(poisson_jh(&q2).unwrap().is_exact_zero());
    }

    #[test]
    fn critical_value_examples() {
        let pr = p(3);
        let f = critical_value(&int(pr, 1)).unwrap();
        assert_eq!(f.j.known_value(), rat(-1));
        assert_eq!(f.h.known_value(), rat(0));
        let f = critical_value(&int(pr, -1)).unwrap();
        assert_eq!(f.j.known_value(), rat(-1));
        assert_eq!(f.h.known_value(), rat(0));
    }

    #[test]
    fn critical_parameter_examples() {
        let pr5 = p(5);
        let jh = MomentumValue::new(
            PadicScalar::from_fraction(pr5, -47, 8),
            PadicScalar::from_fraction(pr5, -15, 4),
        );
        let params = critical_parameter(&jh, tr()).unwrap();
        assert_eq!(params.len(), 1);
        assert!(params[0].a.agrees(&int(pr5, 2)).unwrap());
        assert!(params[0].critical_circle_nonempty);

        let pr3 = p(3);
        let jh3 = MomentumValue::new(
            PadicScalar::from_fraction(pr3, -47, 8),
            PadicScalar::from_fraction(pr3, -15, 4),
        );
        let params = critical_parameter(&jh3, tr()).unwrap();
        assert_eq!(params.len(), 1);
        assert!(!params[0].critical_circle_nonempty);

        let poles = critical_parameter(&MomentumValue::from_integers(pr3, -1, 0), tr()).unwrap();
        assert_eq!(poles.len(), 2);
        assert!(poles.iter().all(|p| p.pole_value));

        let none = critical_parameter(&MomentumValue::from_integers(pr3, 0, 17), tr()).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn four_lines_parameter_for_p1mod4() {
        // at (1, 0) the gcd is a^2 + 1: roots +-i exist iff p = 1 mod 4
        let pr5 = p(5);
        let params = critical_parameter(&MomentumValue::from_integers(pr5, 1, 0), tr()).unwrap();
        assert_eq!(params.len(), 2);
        for param in &params {
            let sq = param.a.mul(&param.a).unwrap();
            assert!(sq.agrees(&int(pr5, -1)).unwrap());
        }
        let pr3 = p(3);
        let params = critical_parameter(&MomentumValue::from_integers(pr3, 1, 0), tr()).unwrap();
        assert!(params.is_empty());
    }

    #[test]
    fn potential_examples() {
        let pr = p(3);
        assert_eq!(
            potential(&int(pr, 0), &int(pr, 23)).unwrap(),
            Valuation::Finite(0)
        );
        assert_eq!(
            potential(&int(pr, 1), &int(pr, 23)).unwrap(),
            Valuation::Infinity
        );
        let pr2 = p(2);
        assert_eq!(
            potential(&int(pr2, 0), &int(pr2, 22)).unwrap(),
            Valuation::Finite(2)
        );
    }

    #[test]
    fn z_class_examples() {
        let pr3 = p(3);
        assert_eq!(z_class(&int(pr3, 0), &int(pr3, 23)).unwrap(), ZClass::First);
        let pr5 = p(5);
        assert_eq!(z_class(&int(pr5, 0), &int(pr5, 23)).unwrap(), ZClass::First);
        let pr2 = p(2);
        assert_eq!(z_class(&int(pr2, 0), &int(pr2, 22)).unwrap(), ZClass::Fourth);
    }

    #[test]
    fn v_membership_examples() {
        let pr = p(3);
        let jh = MomentumValue::from_integers(pr, 23, 0);
        match v_set_membership(&jh, &int(pr, 0), tr()).unwrap() {
            VMembership::Pair { b } => {
                let sq = b.mul(&b).unwrap();
                assert!(sq.agrees(&int(pr, 46)).unwrap());
            }
            other => panic!("expected a pair, got {other:?}"),
        }
        // z = 3: t = 2*20*(-8) = -320, a square in Q_3
        match v_set_membership(&jh, &int(pr, 3), tr()).unwrap() {
            VMembership::Pair { .. } => {}
            other => panic!("expected a pair, got {other:?}"),
        }
        // b = 0 at z = -1 when h = 0
        let jh1 = MomentumValue::from_integers(pr, 1, 0);
        match v_set_membership(&jh1, &int(pr, -1), tr()).unwrap() {
            VMembership::SingleZero => {}
            other => panic!("expected b = 0, got {other:?}"),
        }
    }

    #[test]
    fn subfiber_examples() {
        let pr3 = p(3);
        let jh = MomentumValue::from_integers(pr3, 1, 0);
        let b = PadicScalar::zero(pr3);
        assert_eq!(
            subfiber_type(&jh, &int(pr3, 1), &b).unwrap(),
            SubfiberType::Point
        );
        assert_eq!(
            subfiber_type(&jh, &int(pr3, -1), &b).unwrap(),
            SubfiberType::Circle
        );
        let pr5 = p(5);
        let jh5 = MomentumValue::from_integers(pr5, 1, 0);
        assert_eq!(
            subfiber_type(&jh5, &int(pr5, 1), &PadicScalar::zero(pr5)).unwrap(),
            SubfiberType::TwoPlanes
        );
    }

    #[test]
    fn sample_fiber_reevaluates() {
        let pr = p(3);
        let jh = MomentumValue::from_integers(pr, 23, 0);
        let z = int(pr, 0);
        let VMembership::Pair { b } = v_set_membership(&jh, &z, tr()).unwrap() else {
            panic!()
        };
        let pts = sample_fiber(&jh, &z, &b, 3, tr()).unwrap();
        assert_eq!(pts.len(), 3);
        for q in &pts {
            assert!(evaluate_f(q).unwrap().agrees(&jh).unwrap());
        }
        assert!(sample_fiber(&jh, &z, &b, 0, tr()).unwrap().is_empty());
    }

    #[test]
    fn fiber_descriptor_examples() {
        let pr2 = p(2);
        let rep = fiber_descriptor(&MomentumValue::from_integers(pr2, -1, 0), tr()).unwrap();
        assert_eq!(rep.variant, FiberVariant::SinglePoint);

        let pr5 = p(5);
        let rep = fiber_descriptor(&MomentumValue::from_integers(pr5, 1, 0), tr()).unwrap();
        assert_eq!(rep.variant, FiberVariant::SingularAlongFourLines { pole: 1 });

        let jh = MomentumValue::new(
            PadicScalar::from_fraction(pr5, -47, 8),
            PadicScalar::from_fraction(pr5, -15, 4),
        );
        let rep = fiber_descriptor(&jh, tr()).unwrap();
        // -3*16 - 1 = -49 = 1 mod 5 is a square
        assert_eq!(rep.variant, FiberVariant::SingularAlongCircle);

        let pr3 = p(3);
        let jh3 = MomentumValue::new(
            PadicScalar::from_fraction(pr3, -47, 8),
            PadicScalar::from_fraction(pr3, -15, 4),
        );
        let rep = fiber_descriptor(&jh3, tr()).unwrap();
        assert_eq!(rep.variant, FiberVariant::TwoManifold);
        assert!(rep.flags.contains(&"critical-circle-empty".to_string()));
    }

    #[test]
    fn image_examples() {
        let pr3 = p(3);
        let verdict = jc_image_test(&MomentumValue::from_integers(pr3, 7, -4), tr()).unwrap();
        assert!(matches!(verdict, ImageVerdict::InImage { .. }));

        let pr2 = p(2);
        let jh = MomentumValue::new(
            PadicScalar::from_integer(pr2, 6),
            PadicScalar::from_fraction(pr2, 1, 2),
        );
        let verdict = jc_image_test(&jh, tr()).unwrap();
        assert!(matches!(verdict, ImageVerdict::NotInImage { .. }));

        let verdict = jc_image_test(&MomentumValue::from_integers(pr2, 22, 1), tr()).unwrap();
        match verdict {
            ImageVerdict::InImage { witness, .. } => {
                let q = witness.expect("witness expected");
                let jh = MomentumValue::from_integers(pr2, 22, 1);
                assert!(evaluate_f(&q).unwrap().agrees(&jh).unwrap());
            }
            other => panic!("expected InImage, got {other:?}"),
        }
    }

    #[test]
    fn construct_examples() {
        let pr3 = p(3);
        let q = construct_fiber_point(&MomentumValue::from_integers(pr3, 0, 0), tr()).unwrap();
        assert!(evaluate_f(&q)
            .unwrap()
            .agrees(&MomentumValue::from_integers(pr3, 0, 0))
            .unwrap());

        let pr2 = p(2);
        let jh = MomentumValue::new(
            PadicScalar::from_integer(pr2, 6),
            PadicScalar::from_fraction(pr2, 1, 2),
        );
        assert!(construct_fiber_point(&jh, tr()).is_err());
    }

    #[test]
    fn square_neighborhood_examples() {
        let pr = p(3);
        let mixed =
            square_neighborhood_class(&[PadicScalar::one(pr), PadicScalar::zero(pr)]).unwrap();
        assert_eq!(mixed, SquareNeighborhood::Mixed);
        let all =
            square_neighborhood_class(&[PadicScalar::zero(pr), PadicScalar::one(pr)]).unwrap();
        assert_eq!(all, SquareNeighborhood::AllSquares);
        let none =
            square_neighborhood_class(&[PadicScalar::zero(pr), PadicScalar::from_integer(pr, 2)])
                .unwrap();
        assert_eq!(none, SquareNeighborhood::NoSquares);
        assert!(square_neighborhood_class(&[PadicScalar::zero(pr), PadicScalar::zero(pr)]).is_err());
    }
}
