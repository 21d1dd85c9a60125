//! Exact-rational verification of the normal forms at the critical points:
//! frame matrices, symplectic-form transformation, quadratic parts, and
//! non-degeneracy via characteristic polynomials.
//!
//! Everything here is over the exact rationals. Quadratic parts are checked
//! twice: through the closed-form Hessians in the z-chart, and through an
//! independent degree-2 jet expansion of `F` with the sphere constraint
//! eliminated by `z = +-sqrt(1 - x^2 - y^2)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{PadicError, Result};
use crate::poly::RatPoly;
use crate::ratmat::RationalMatrix;
use crate::scalar::{rat, rat_frac};

fn w_standard() -> RationalMatrix {
    RationalMatrix::from_i64(&[
        &[0, 1, 0, 0],
        &[-1, 0, 0, 0],
        &[0, 0, 0, 1],
        &[0, 0, -1, 0],
    ])
}

/// `d^2 H` in the chart coordinates `(x, y, u, v)` (the same at every
/// point of the phase space).
fn d2h() -> RationalMatrix {
    RationalMatrix::from_i64(&[
        &[0, 0, 1, 0],
        &[0, 0, 0, 1],
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
    ])
    .scale(&rat_frac(1, 2))
}

/// The rank-1 frame data at parameter `a`: the shear `D`, the value-side
/// frame `B`, the symplectic coefficient, and the quadratic coefficients
/// `alpha, beta, gamma`. The point-side frame `C` additionally depends on
/// `(u, v)` and is produced by [`Rank1Frame::c_matrix`].
#[derive(Debug, Clone)]
pub struct Rank1Frame {
    pub a: BigRational,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
    pub omega1_coefficient: BigRational,
    pub b: RationalMatrix,
    pub d: RationalMatrix,
}

pub fn rank1_frame(a: &BigRational) -> Result<Rank1Frame> {
    let one = BigRational::one();
    if a.is_zero() {
        return Err(PadicError::DegenerateParameter("a = 0".into()));
    }
    let a2 = a * a;
    let a4 = &a2 * &a2;
    if a4 == one {
        return Err(PadicError::DegenerateParameter("a^4 = 1".into()));
    }
    let three_a4_p1 = rat(3) * &a4 + &one;
    if three_a4_p1.is_zero() {
        return Err(PadicError::DegenerateParameter("3a^4 + 1 = 0".into()));
    }
    let a3 = &a2 * a;
    let a5 = &a4 * a;
    let a6 = &a4 * &a2;
    let ap1_sq = (&a2 + &one) * (&a2 + &one);
    let alpha = &a2 * &ap1_sq * &three_a4_p1 / rat(2);
    let beta = &three_a4_p1 * &three_a4_p1 / rat(2);
    let gamma = &a2 * (&one - &a4) * &ap1_sq / rat(2);
    let omega1_coefficient = (&one - &a4) * (&a2 + &one) / &a3;
    let b = RationalMatrix::from_rows(vec![
        vec![a.clone(), BigRational::zero()],
        vec![
            &a6 * &three_a4_p1 / (&one - &a4),
            rat(-2) * &a5 * &three_a4_p1 / (&one - &a4),
        ],
    ]);
    let mut d = RationalMatrix::identity(4);
    d[(1, 3)] = (rat(2) * &a6 - &a4 - &one) / (a * &three_a4_p1);
    d[(2, 0)] = a * (&a2 - &one) * (&a2 - &one) / &three_a4_p1;
    Ok(Rank1Frame {
        a: a.clone(),
        alpha,
        beta,
        gamma,
        omega1_coefficient,
        b,
        d,
    })
}

impl Rank1Frame {
    /// The frame matrix `C` at the concrete rank-1 point
    /// `(au, av, -a^2, u, v)`.
    pub fn c_matrix(&self, u: &BigRational, v: &BigRational) -> RationalMatrix {
        let a = &self.a;
        RationalMatrix::from_rows(vec![
            vec![v.clone(), a * u, a * v, u.clone()],
            vec![-u, a * v, -(a * u), v.clone()],
            vec![-(a * v), -u, v.clone(), a * u],
            vec![a * u, -v, -u, a * v],
        ])
    }

    /// The linear map of the symplectomorphism, `phi = C D`.
    pub fn phi(&self, u: &BigRational, v: &BigRational) -> RationalMatrix {
        self.c_matrix(u, v).mul(&self.d)
    }
}

/// Result of an identity verification: named checks with outcomes.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub checks: Vec<(String, bool)>,
}

impl IdentityReport {
    fn push(&mut self, name: &str, ok: bool) {
        self.checks.push((name.to_string(), ok));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// `d^2 J` at the rank-1 point in the chart `(x, y, u, v)`.
fn d2j_rank1(a: &BigRational, u: &BigRational, v: &BigRational) -> RationalMatrix {
    let one = BigRational::one();
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let mut m = RationalMatrix::zeros(4, 4);
    m[(0, 0)] = &one / &a2 + u * u / &a4;
    m[(0, 1)] = u * v / &a4;
    m[(1, 0)] = m[(0, 1)].clone();
    m[(1, 1)] = &one / &a2 + v * v / &a4;
    m[(2, 2)] = one.clone();
    m[(3, 3)] = one;
    m
}

/// Verifies the four rank-1 normal-form identities exactly at a concrete
/// `(a, u, v)` with `a^2(u^2 + v^2) + a^4 = 1`:
///
/// 1. `C^T A C` equals the displayed `A_1` (with `A = a d^2J - 2 d^2H`);
/// 2. the full frame diagonalizes the second component:
///    `(CD)^T (s A) (CD) = 2 diag(alpha, beta, 0, gamma)` where
///    `s = a^5(3a^4+1)/(1-a^4)` scales `A` to the Hessian of the second
///    component of `B(F - F(q))` -- cross-checked against an independent
///    degree-2 jet expansion of `F`;
/// 3. the pulled-back symplectic matrix is `omega1` times the standard
///    block form;
/// 4. `B` and `CD` are invertible, and the first component of
///    `B(F - F(q))` is proportional to `eta` at first order with factor
///    `(1 + a^2)(u^2 + v^2)`.
pub fn verify_rank1_identities(
    a: &BigRational,
    u: &BigRational,
    v: &BigRational,
) -> Result<IdentityReport> {
    let one = BigRational::one();
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let constraint = &a2 * (u * u + v * v) + &a4;
    if constraint != one {
        return Err(PadicError::ConstraintViolated(format!(
            "a^2(u^2+v^2) + a^4 = {constraint} differs from 1"
        )));
    }
    let frame = rank1_frame(a)?;
    let mut report = IdentityReport { checks: Vec::new() };

    let d2j = d2j_rank1(a, u, v);
    let a_mat = d2j.scale(a).sub(&d2h().scale(&rat(2)));
    let c = frame.c_matrix(u, v);
    let m = frame.phi(u, v);

    // (1) C^T A C against the displayed A_1
    let a1 = c.transpose().mul(&a_mat).mul(&c);
    let a1_displayed = {
        let a5 = &a4 * a;
        let a6 = &a4 * &a2;
        let a7 = &a6 * a;
        let a8 = &a4 * &a4;
        let factor = (&one - &a4) / &a7;
        let mut disp = RationalMatrix::zeros(4, 4);
        disp[(0, 0)] = &a4 * (&a2 + &one) * (&a2 + &one);
        disp[(1, 1)] = &a2 * (rat(3) * &a4 + &one);
        disp[(1, 3)] = rat(-2) * &a7 + &a5 + a;
        disp[(3, 1)] = disp[(1, 3)].clone();
        disp[(3, 3)] = &a8 - rat(2) * &a6 + &one;
        disp.scale(&factor)
    };
    report.push("hessian-frame-identity", a1 == a1_displayed);

    // (2) quadratic part of the second component
    let scale = {
        let a5 = &a4 * a;
        &a5 * (rat(3) * &a4 + &one) / (&one - &a4)
    };
    let quad = m.transpose().mul(&a_mat.scale(&scale)).mul(&m);
    let mut target = RationalMatrix::zeros(4, 4);
    target[(0, 0)] = rat(2) * &frame.alpha;
    target[(1, 1)] = rat(2) * &frame.beta;
    target[(3, 3)] = rat(2) * &frame.gamma;
    report.push("quadratic-normal-form", quad == target);

    // jet cross-check: degree-2 Taylor expansion of B(F - F(q)) in the
    // chart, independent of the closed-form Hessians
    let (f1_jet, f2_jet) = f_tilde_jets_rank1(&frame, u, v);
    let quad_jet = m.transpose().mul(&f2_jet.hessian).mul(&m);
    report.push("quadratic-normal-form-jet", quad_jet == target);
    let lin2 = m.transpose().apply(&f2_jet.gradient);
    report.push(
        "second-component-critical",
        lin2.iter().all(|c| c.is_zero()),
    );

    // (4a) first component: linear part proportional to eta
    let lin1 = m.transpose().apply(&f1_jet.gradient);
    let eta_factor = (&one + &a2) * (u * u + v * v);
    let lin_ok = lin1[0].is_zero()
        && lin1[1].is_zero()
        && lin1[2].is_zero()
        && lin1[3] == eta_factor
        && !eta_factor.is_zero();
    report.push("first-component-linear-in-eta", lin_ok);

    // (3) symplectic pullback
    let w_q = {
        let mut w = RationalMatrix::zeros(4, 4);
        w[(0, 1)] = &one / &a2;
        w[(1, 0)] = -(&one / &a2);
        w[(2, 3)] = one.clone();
        w[(3, 2)] = -one.clone();
        w
    };
    let pulled = m.transpose().mul(&w_q).mul(&m);
    report.push(
        "symplectic-pullback",
        pulled == w_standard().scale(&frame.omega1_coefficient),
    );

    // (4b) invertibility
    report.push(
        "frames-invertible",
        !frame.b.det().is_zero() && !m.det().is_zero(),
    );
    Ok(report)
}

/// The constant rank-0 frames: the displayed `C` and `B` matrices together
/// with the matrices of the coordinate maps `phi`.
#[derive(Debug, Clone)]
pub struct Rank0Frames {
    pub elliptic_c: RationalMatrix,
    pub elliptic_b: RationalMatrix,
    /// Matrix of `phi(x, xi, y, eta) = (x+y, xi+eta, x-y, xi-eta)/2`.
    pub elliptic_phi: RationalMatrix,
    pub focus_c: RationalMatrix,
    pub focus_b: RationalMatrix,
    /// Matrix of `phi(x, xi, y, eta) = (eta-x, y+xi, y-xi, eta+x)/2`.
    pub focus_phi: RationalMatrix,
}

pub fn rank0_frames() -> Rank0Frames {
    let elliptic_c = RationalMatrix::from_i64(&[
        &[1, 0, 1, 0],
        &[0, 1, 0, 1],
        &[1, 0, -1, 0],
        &[0, 1, 0, -1],
    ]);
    let focus_c = RationalMatrix::from_i64(&[
        &[-1, 0, 0, 1],
        &[0, 1, -1, 0],
        &[0, 1, 1, 0],
        &[1, 0, 0, 1],
    ]);
    let elliptic_phi = elliptic_c.scale(&rat_frac(1, 2));
    let focus_phi = focus_c.transpose().scale(&rat_frac(1, 2));
    Rank0Frames {
        elliptic_c,
        elliptic_b: RationalMatrix::from_i64(&[&[1, 2], &[1, -2]]),
        elliptic_phi,
        focus_c,
        focus_b: RationalMatrix::from_i64(&[&[2, 0], &[0, 4]]),
        focus_phi,
    }
}

/// Verifies the rank-0 normal form at the pole `(0, 0, pole, 0, 0)`:
/// the displayed Hessian factorizations, the symplectic pullback
/// `(dx^dxi + dy^deta)/2`, and the quadratic parts
/// `(x^2+xi^2, y^2+eta^2)/2` (elliptic) or `(x eta - y xi, x xi + y eta)`
/// (focus), each cross-checked against the degree-2 jet expansion.
pub fn verify_rank0_normal_form(pole: i8) -> Result<IdentityReport> {
    assert!(pole == 1 || pole == -1);
    let frames = rank0_frames();
    let mut report = IdentityReport { checks: Vec::new() };
    let one = BigRational::one();
    // d^2 J at the pole in the chart (x, y, u, v): z = pole sqrt(1-x^2-y^2)
    let mut d2j = RationalMatrix::identity(4);
    d2j[(0, 0)] = rat(-(pole as i64));
    d2j[(1, 1)] = rat(-(pole as i64));
    let d2h = d2h();
    let w_q = {
        // omega = -(1/z) dx^dy + du^dv at z = pole
        let mut w = RationalMatrix::zeros(4, 4);
        w[(0, 1)] = -rat(pole as i64).recip();
        w[(1, 0)] = rat(pole as i64).recip();
        w[(2, 3)] = one.clone();
        w[(3, 2)] = -one.clone();
        w
    };
    let half_w_std = w_standard().scale(&rat_frac(1, 2));
    let (f1_jet, f2_jet) = f_tilde_jets_rank0(pole);
    if pole == -1 {
        let c = &frames.elliptic_c;
        let m = &frames.elliptic_phi;
        // d^2(J + 2H) = C^T A_1 C and d^2(J - 2H) = C^T A_2 C
        let plus = d2j.add(&d2h.scale(&rat(2)));
        let minus = d2j.sub(&d2h.scale(&rat(2)));
        let a1 = RationalMatrix::from_i64(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
        ]);
        let a2 = RationalMatrix::from_i64(&[
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]);
        report.push(
            "hessian-factorization-first",
            plus == c.transpose().mul(&a1).mul(c),
        );
        report.push(
            "hessian-factorization-second",
            minus == c.transpose().mul(&a2).mul(c),
        );
        report.push(
            "omega-factorization",
            w_q == c.transpose().mul(&half_w_std).mul(c),
        );
        // quadratic parts (x^2 + xi^2)/2 and (y^2 + eta^2)/2
        report.push("quadratic-part-first", m.transpose().mul(&plus).mul(m) == a1);
        report.push(
            "quadratic-part-second",
            m.transpose().mul(&minus).mul(m) == a2,
        );
        report.push(
            "quadratic-part-first-jet",
            m.transpose().mul(&f1_jet.hessian).mul(m) == a1,
        );
        report.push(
            "quadratic-part-second-jet",
            m.transpose().mul(&f2_jet.hessian).mul(m) == a2,
        );
        report.push(
            "symplectic-pullback",
            m.transpose().mul(&w_q).mul(m) == half_w_std,
        );
    } else {
        let c = &frames.focus_c;
        let m = &frames.focus_phi;
        let k1 = RationalMatrix::from_i64(&[
            &[0, 0, 0, 1],
            &[0, 0, -1, 0],
            &[0, -1, 0, 0],
            &[1, 0, 0, 0],
        ]);
        let k2 = RationalMatrix::from_i64(&[
            &[0, 1, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[0, 0, 1, 0],
        ]);
        // 2 d^2J = C^T K_1 C and 4 d^2H = C^T K_2 C
        report.push(
            "hessian-factorization-first",
            d2j.scale(&rat(2)) == c.transpose().mul(&k1).mul(c),
        );
        report.push(
            "hessian-factorization-second",
            d2h.scale(&rat(4)) == c.transpose().mul(&k2).mul(c),
        );
        // quadratic parts x eta - y xi and x xi + y eta
        report.push(
            "quadratic-part-first",
            m.transpose().mul(&d2j.scale(&rat(2))).mul(m) == k1,
        );
        report.push(
            "quadratic-part-second",
            m.transpose().mul(&d2h.scale(&rat(4))).mul(m) == k2,
        );
        report.push(
            "quadratic-part-first-jet",
            m.transpose().mul(&f1_jet.hessian).mul(m) == k1,
        );
        report.push(
            "quadratic-part-second-jet",
            m.transpose().mul(&f2_jet.hessian).mul(m) == k2,
        );
        report.push(
            "symplectic-pullback",
            m.transpose().mul(&w_q).mul(m) == half_w_std,
        );
    }
    report.push(
        "critical-point",
        f1_jet.gradient.iter().all(|c| c.is_zero())
            && f2_jet.gradient.iter().all(|c| c.is_zero()),
    );
    let b = if pole == -1 {
        &frames.elliptic_b
    } else {
        &frames.focus_b
    };
    report.push(
        "frames-invertible",
        !b.det().is_zero()
            && !frames.elliptic_phi.det().is_zero()
            && !frames.focus_phi.det().is_zero(),
    );
    Ok(report)
}

/// Characteristic polynomial of the non-degeneracy pencil at a pole, with
/// the displayed factorization. The pencil follows the proofs' convention:
/// the unhalved symplectic matrix and the Hessian pair `(d^2J, 2 d^2H)`.
#[derive(Debug, Clone)]
pub struct CharpolyReport {
    pub poly: RatPoly,
    pub factored: RatPoly,
    pub matches: bool,
    pub distinct_roots: bool,
}

pub fn nondegeneracy_charpoly(pole: i8, lambda: &BigRational, mu: &BigRational) -> CharpolyReport {
    assert!(pole == 1 || pole == -1);
    let one = BigRational::one();
    let mut d2j = RationalMatrix::identity(4);
    d2j[(0, 0)] = rat(-(pole as i64));
    d2j[(1, 1)] = rat(-(pole as i64));
    let k = d2h().scale(&rat(2));
    let w = {
        let mut w = RationalMatrix::zeros(4, 4);
        w[(0, 1)] = -rat(pole as i64).recip();
        w[(1, 0)] = rat(pole as i64).recip();
        w[(2, 3)] = one.clone();
        w[(3, 2)] = -one;
        w
    };
    let pencil = w.inverse().mul(&d2j.scale(lambda).add(&k.scale(mu)));
    let poly = pencil.charpoly();
    let t = RatPoly::from_i64(&[0, 1]);
    let const_poly = |c: &BigRational| RatPoly::constant(c.clone());
    let factored = if pole == -1 {
        // [t^2 + (lambda+mu)^2][t^2 + (lambda-mu)^2]
        let s = lambda + mu;
        let d = lambda - mu;
        let f1 = t.mul(&t).add(&const_poly(&(&s * &s)));
        let f2 = t.mul(&t).add(&const_poly(&(&d * &d)));
        f1.mul(&f2)
    } else {
        // [(t+mu)^2 + lambda^2][(t-mu)^2 + lambda^2]
        let tp = t.add(&const_poly(mu));
        let tm = t.sub(&const_poly(mu));
        let l2 = const_poly(&(lambda * lambda));
        let f1 = tp.mul(&tp).add(&l2);
        let f2 = tm.mul(&tm).add(&l2);
        f1.mul(&f2)
    };
    let matches = poly == factored;
    let distinct_roots = if pole == -1 {
        !(lambda * mu).is_zero() && lambda * lambda != mu * mu
    } else {
        !lambda.is_zero() && !mu.is_zero()
    };
    CharpolyReport {
        poly,
        factored,
        matches,
        distinct_roots,
    }
}

/// Degree-2 jet in the four chart variables: value, gradient and Hessian,
/// with `f = value + gradient.w + (1/2) w^T Hessian w + O(3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Jet2 {
    value: BigRational,
    gradient: Vec<BigRational>,
    hessian: RationalMatrix,
}

impl Jet2 {
    fn constant(c: BigRational) -> Self {
        Self {
            value: c,
            gradient: vec![BigRational::zero(); 4],
            hessian: RationalMatrix::zeros(4, 4),
        }
    }

    fn variable(index: usize, base: BigRational) -> Self {
        let mut jet = Self::constant(base);
        jet.gradient[index] = BigRational::one();
        jet
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            value: &self.value + &other.value,
            gradient: self
                .gradient
                .iter()
                .zip(&other.gradient)
                .map(|(a, b)| a + b)
                .collect(),
            hessian: self.hessian.add(&other.hessian),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    fn scale(&self, c: &BigRational) -> Self {
        Self {
            value: &self.value * c,
            gradient: self.gradient.iter().map(|g| g * c).collect(),
            hessian: self.hessian.scale(c),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut hessian = self
            .hessian
            .scale(&other.value)
            .add(&other.hessian.scale(&self.value));
        for i in 0..4 {
            for j in 0..4 {
                let cross =
                    &self.gradient[i] * &other.gradient[j] + &self.gradient[j] * &other.gradient[i];
                hessian[(i, j)] += cross;
            }
        }
        Self {
            value: &self.value * &other.value,
            gradient: (0..4)
                .map(|i| &self.gradient[i] * &other.value + &other.gradient[i] * &self.value)
                .collect(),
            hessian,
        }
    }

    /// Square root with the branch whose value is `root` (an exact square
    /// root of the constant term).
    fn sqrt_with(&self, root: BigRational) -> Self {
        assert_eq!(&root * &root, self.value, "not a branch of the square root");
        assert!(!root.is_zero());
        let inv2r = (rat(2) * &root).recip();
        let gradient: Vec<BigRational> = self.gradient.iter().map(|g| g * &inv2r).collect();
        let mut hessian = self.hessian.clone();
        for i in 0..4 {
            for j in 0..4 {
                let mm = rat(2) * &gradient[i] * &gradient[j];
                hessian[(i, j)] -= mm;
            }
        }
        Self {
            value: root,
            gradient,
            hessian: hessian.scale(&inv2r),
        }
    }
}

/// Jets of `(J, H)` around a chart point `(x0, y0, u0, v0)` with
/// `z = sign * sqrt(1 - x^2 - y^2)` and `z0` supplied exactly.
fn jh_jets(
    x0: &BigRational,
    y0: &BigRational,
    u0: &BigRational,
    v0: &BigRational,
    z0: &BigRational,
) -> (Jet2, Jet2) {
    let x = Jet2::variable(0, x0.clone());
    let y = Jet2::variable(1, y0.clone());
    let u = Jet2::variable(2, u0.clone());
    let v = Jet2::variable(3, v0.clone());
    let one = Jet2::constant(BigRational::one());
    let inner = one.sub(&x.mul(&x)).sub(&y.mul(&y));
    let z = inner.sqrt_with(z0.clone());
    let j = u.mul(&u).add(&v.mul(&v)).scale(&rat_frac(1, 2)).add(&z);
    let h = u.mul(&x).add(&v.mul(&y)).scale(&rat_frac(1, 2));
    (j, h)
}

/// Jets of the two components of `B(F - F(q))` at the rank-1 point.
fn f_tilde_jets_rank1(frame: &Rank1Frame, u: &BigRational, v: &BigRational) -> (Jet2, Jet2) {
    let a = &frame.a;
    let a2 = a * a;
    let x0 = a * u;
    let y0 = a * v;
    let z0 = -&a2;
    let (j, h) = jh_jets(&x0, &y0, u, v, &z0);
    let j0 = Jet2::constant(j.value.clone());
    let h0 = Jet2::constant(h.value.clone());
    let dj = j.sub(&j0);
    let dh = h.sub(&h0);
    let f1 = dj.scale(&frame.b[(0, 0)]).add(&dh.scale(&frame.b[(0, 1)]));
    let f2 = dj.scale(&frame.b[(1, 0)]).add(&dh.scale(&frame.b[(1, 1)]));
    (f1, f2)
}

/// Jets of the two components of `B(F - F(q))` at a pole.
fn f_tilde_jets_rank0(pole: i8) -> (Jet2, Jet2) {
    let zero = BigRational::zero();
    let z0 = rat(pole as i64);
    let (j, h) = jh_jets(&zero, &zero, &zero, &zero, &z0);
    let j0 = Jet2::constant(j.value.clone());
    let dj = j.sub(&j0);
    let frames = rank0_frames();
    let b = if pole == -1 {
        frames.elliptic_b
    } else {
        frames.focus_b
    };
    let f1 = dj.scale(&b[(0, 0)]).add(&h.scale(&b[(0, 1)]));
    let f2 = dj.scale(&b[(1, 0)]).add(&h.scale(&b[(1, 1)]));
    (f1, f2)
}

/// The entrywise defects of the rank-1 identities at `(a, u, v)`,
/// computed from the closed-form Hessians only (no jets, so approximate
/// `(u, v)` are admissible). All defects vanish on an exact witness; on a
/// truncated witness their p-adic ord is bounded below by the witness
/// precision up to a parameter-dependent shift.
pub fn rank1_identity_defects(
    a: &BigRational,
    u: &BigRational,
    v: &BigRational,
) -> Result<Vec<(String, BigRational)>> {
    let one = BigRational::one();
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let frame = rank1_frame(a)?;
    let mut out = Vec::new();
    out.push((
        "constraint".to_string(),
        &a2 * (u * u + v * v) + &a4 - &one,
    ));
    let d2j = d2j_rank1(a, u, v);
    let a_mat = d2j.scale(a).sub(&d2h().scale(&rat(2)));
    let c = frame.c_matrix(u, v);
    let m = frame.phi(u, v);
    let a1 = c.transpose().mul(&a_mat).mul(&c);
    let a1_displayed = {
        let a5 = &a4 * a;
        let a6 = &a4 * &a2;
        let a7 = &a6 * a;
        let a8 = &a4 * &a4;
        let factor = (&one - &a4) / &a7;
        let mut disp = RationalMatrix::zeros(4, 4);
        disp[(0, 0)] = &a4 * (&a2 + &one) * (&a2 + &one);
        disp[(1, 1)] = &a2 * (rat(3) * &a4 + &one);
        disp[(1, 3)] = rat(-2) * &a7 + &a5 + a;
        disp[(3, 1)] = disp[(1, 3)].clone();
        disp[(3, 3)] = &a8 - rat(2) * &a6 + &one;
        disp.scale(&factor)
    };
    let scale = {
        let a5 = &a4 * a;
        &a5 * (rat(3) * &a4 + &one) / (&one - &a4)
    };
    let quad = m.transpose().mul(&a_mat.scale(&scale)).mul(&m);
    let mut target = RationalMatrix::zeros(4, 4);
    target[(0, 0)] = rat(2) * &frame.alpha;
    target[(1, 1)] = rat(2) * &frame.beta;
    target[(3, 3)] = rat(2) * &frame.gamma;
    let w_q = {
        let mut w = RationalMatrix::zeros(4, 4);
        w[(0, 1)] = &one / &a2;
        w[(1, 0)] = -(&one / &a2);
        w[(2, 3)] = one.clone();
        w[(3, 2)] = -one.clone();
        w
    };
    let pulled = m.transpose().mul(&w_q).mul(&m);
    let w_target = w_standard().scale(&frame.omega1_coefficient);
    for i in 0..4 {
        for k in 0..4 {
            out.push((
                format!("hessian-frame[{i}][{k}]"),
                &a1[(i, k)] - &a1_displayed[(i, k)],
            ));
            out.push((
                format!("quadratic[{i}][{k}]"),
                &quad[(i, k)] - &target[(i, k)],
            ));
            out.push((
                format!("symplectic[{i}][{k}]"),
                &pulled[(i, k)] - &w_target[(i, k)],
            ));
        }
    }
    // linear part of the first component: (CD)^T grad(aJ) = N e_4
    let grad = vec![u.clone(), v.clone(), a * u, a * v];
    let lin = m.transpose().apply(&grad);
    let eta_factor = (&one + &a2) * (u * u + v * v);
    out.push(("linear[0]".to_string(), lin[0].clone()));
    out.push(("linear[1]".to_string(), lin[1].clone()));
    out.push(("linear[2]".to_string(), lin[2].clone()));
    out.push(("linear[3]".to_string(), &lin[3] - &eta_factor));
    Ok(out)
}

/// Exact rational rank-1 witnesses `(a, u, v)` with
/// `a^2(u^2 + v^2) + a^4 = 1`, built from Pythagorean sines: whenever
/// `1 - a^2 = s^2` is a rational square, `(u, v) = (s/a, s)` works.
pub fn pythagorean_rank1_witnesses(count: usize) -> Vec<(BigRational, BigRational, BigRational)> {
    let mut out = Vec::new();
    'outer: for m in 2i64..40 {
        for n in 1..m {
            if (m + n) % 2 == 0 || num_integer::gcd(m, n) != 1 {
                continue;
            }
            let hyp = m * m + n * n;
            for (p, q) in [(m * m - n * n, 2 * m * n), (2 * m * n, m * m - n * n)] {
                for sign in [1i64, -1] {
                    let a = BigRational::new((sign * p).into(), hyp.into());
                    let s = BigRational::new(q.into(), hyp.into());
                    let u = &s / &a;
                    out.push((a, u, s.clone()));
                    if out.len() >= count {
                        break 'outer;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_values_at_two() {
        let f = rank1_frame(&rat(2)).unwrap();
        assert_eq!(f.alpha, rat(2450));
        assert_eq!(f.beta, rat_frac(2401, 2));
        assert_eq!(f.gamma, rat(-750));
        assert_eq!(f.omega1_coefficient, rat_frac(-75, 8));
        assert!(rank1_frame(&rat(1)).is_err());
        assert!(rank1_frame(&rat(0)).is_err());
        // a = 1/2: 3a^4 + 1 = 19/16, so denominators factor over {2, 19}
        let f = rank1_frame(&rat_frac(1, 2)).unwrap();
        for value in [
            f.alpha.clone(),
            f.beta.clone(),
            f.gamma.clone(),
            f.omega1_coefficient.clone(),
            f.d[(1, 3)].clone(),
            f.d[(2, 0)].clone(),
        ] {
            let mut d = value.denom().clone();
            for q in [2i64, 19] {
                let q = num_bigint::BigInt::from(q);
                while (&d % &q).is_zero() {
                    d /= &q;
                }
            }
            assert_eq!(d, num_bigint::BigInt::from(1), "denominator of {value}");
        }
    }

    #[test]
    fn rank1_identities_on_rational_witnesses() {
        for (a, u, v) in pythagorean_rank1_witnesses(6) {
            let report = verify_rank1_identities(&a, &u, &v).unwrap();
            assert!(report.all_pass(), "a = {a}: {:?}", report.checks);
        }
    }

    #[test]
    fn rank1_constraint_violation() {
        let err = verify_rank1_identities(&rat(2), &rat(1), &rat(1));
        assert!(matches!(err, Err(PadicError::ConstraintViolated(_))));
    }

    #[test]
    fn rank0_frames_displayed() {
        let f = rank0_frames();
        assert_eq!(f.elliptic_b, RationalMatrix::from_i64(&[&[1, 2], &[1, -2]]));
        assert_eq!(f.focus_b, RationalMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        assert!(!f.elliptic_phi.det().is_zero());
        assert!(!f.focus_phi.det().is_zero());
    }

    #[test]
    fn rank0_verification_passes() {
        for pole in [-1i8, 1] {
            let report = verify_rank0_normal_form(pole).unwrap();
            assert!(report.all_pass(), "pole {pole}: {:?}", report.checks);
        }
    }

    #[test]
    fn charpoly_examples() {
        let rep = nondegeneracy_charpoly(-1, &rat(1), &rat(0));
        // (t^2 + 1)^2
        assert!(rep.matches);
        assert_eq!(rep.poly, RatPoly::from_i64(&[1, 0, 2, 0, 1]));
        assert!(!rep.distinct_roots);

        let rep = nondegeneracy_charpoly(-1, &rat(1), &rat(2));
        // (t^2 + 9)(t^2 + 1)
        assert!(rep.matches);
        assert_eq!(rep.poly, RatPoly::from_i64(&[9, 0, 10, 0, 1]));
        assert!(rep.distinct_roots);

        let rep = nondegeneracy_charpoly(1, &rat(1), &rat(1));
        // ((t+1)^2 + 1)((t-1)^2 + 1)
        assert!(rep.matches);
        assert_eq!(rep.poly, RatPoly::from_i64(&[4, 0, 0, 0, 1]));
        assert!(rep.distinct_roots);
    }

    #[test]
    fn charpoly_matches_for_many_parameters() {
        for l in -3i64..=3 {
            for m in -3i64..=3 {
                for pole in [-1i8, 1] {
                    let rep = nondegeneracy_charpoly(pole, &rat(l), &rat(m));
                    assert!(rep.matches, "pole {pole}, lambda {l}, mu {m}");
                }
            }
        }
    }
}
