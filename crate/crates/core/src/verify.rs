//! The batch invariant suite: every module's stated properties, run over
//! seeded random samples and residue censuses. Used by the CLI `verify`
//! subcommand and by the acceptance test target.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::flows;
use crate::hensel::hensel_lift;
use crate::jc::{self, MomentumValue, PhasePoint};
use crate::normal_forms;
use crate::oracle::{self, CensusConfig};
use crate::poly::RatPoly;
use crate::prime::Prime;
use crate::quadratic::{self, PlanePoint};
use crate::sampling::Sampler;
use crate::scalar::{rat, rational_ord, PadicScalar, SeriesTruncation, Valuation};
use crate::spin;
use crate::viz;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CheckResult {
    fn pass(name: &str, details: String) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            details,
        }
    }

    fn fail(name: &str, details: String) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            details,
        }
    }

    fn from_counts(name: &str, failures: usize, total: usize, extra: &str) -> Self {
        if failures == 0 {
            Self::pass(name, format!("{total} cases{extra}"))
        } else {
            Self::fail(name, format!("{failures}/{total} failures{extra}"))
        }
    }
}

fn primes(list: &[u64]) -> Vec<Prime> {
    list.iter().map(|&p| Prime::new(p).unwrap()).collect()
}

fn tr(n: i64) -> SeriesTruncation {
    SeriesTruncation::new(n).unwrap()
}

/// A rank-1 phase point `(au, av, -a^2, u, v)` for an exact parameter `a`
/// with `(1 - a^4)/a^2` a sum of two squares.
pub fn rank1_phase_point(a: &PadicScalar, trunc: SeriesTruncation) -> Result<PhasePoint> {
    let prime = a.prime();
    let one = PadicScalar::one(prime);
    let a2 = a.mul(a)?;
    let k = one.sub(&a2.mul(&a2)?)?.div(&a2)?;
    let uv = quadratic::solve_two_squares(&k, trunc)?;
    PhasePoint::new(
        a.mul(&uv.x)?,
        a.mul(&uv.y)?,
        a2.neg(),
        uv.x,
        uv.y,
    )
}

/// Ultrametric law on random exact pairs.
pub fn check_ultrametric(seed: u64, cases: usize) -> CheckResult {
    let mut failures = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ prime.value());
        for _ in 0..cases {
            let x = s.nonzero_scalar(prime, 400);
            let y = s.nonzero_scalar(prime, 400);
            let ox = x.ord().unwrap();
            let oy = y.ord().unwrap();
            let sum = x.add(&y).unwrap();
            let os = match sum.ord() {
                Ok(v) => v,
                Err(_) => Valuation::Infinity,
            };
            let min = ox.min(oy);
            if os < min {
                failures += 1;
            }
            if ox != oy && os != min {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("scalar-ultrametric", failures, cases * 5, "")
}

/// `exp(x+y) = exp(x) exp(y)` to working precision on `p^d Z_p`.
pub fn check_exp_homomorphism(seed: u64, cases: usize, min_ord: i64) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 8));
        for _ in 0..cases {
            let x = s.in_pd_zp(prime, 50);
            let y = s.in_pd_zp(prime, 50);
            let lhs = x.add(&y).unwrap().exp(trunc).unwrap();
            let rhs = x.exp(trunc).unwrap().mul(&y.exp(trunc).unwrap()).unwrap();
            let diff = lhs.sub(&rhs).unwrap();
            total += 1;
            if !diff.ord_at_least(min_ord) {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("series-exp-homomorphism", failures, total, "")
}

/// `sin^2 + cos^2 = 1` to working precision, plus the image containments.
pub fn check_trig_identities(seed: u64, cases: usize, min_ord: i64) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let d = prime.d() as i64;
        let one = PadicScalar::one(prime);
        let mut s = Sampler::new(seed ^ (prime.value() << 16));
        for _ in 0..cases {
            let x = s.in_pd_zp(prime, 50);
            let sin = x.sin(trunc).unwrap();
            let cos = x.cos(trunc).unwrap();
            let pyth = sin
                .mul(&sin)
                .unwrap()
                .add(&cos.mul(&cos).unwrap())
                .unwrap()
                .sub(&one)
                .unwrap();
            let exp = x.exp(trunc).unwrap();
            total += 1;
            let ok = pyth.ord_at_least(min_ord)
                && exp.sub(&one).unwrap().ord_at_least(d)
                && sin.ord_at_least(d)
                && cos.sub(&one).unwrap().ord_at_least(2 * d - 1);
            if !ok {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("series-trig-identities", failures, total, "")
}

/// `is_square` against the census of squares mod `p^6`.
pub fn check_squares_vs_census() -> CheckResult {
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 13]) {
        let cfg = CensusConfig::new(prime, 6).unwrap();
        let census = oracle::census_squares(&cfg).unwrap();
        let p = prime.value();
        for u in 1..census.modulus {
            if u % p == 0 {
                continue;
            }
            total += 1;
            let predicted = PadicScalar::from_integer(prime, u as i64)
                .is_square()
                .unwrap();
            if predicted != census.unit_square_classes.contains(&u) {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("squares-vs-census", failures, total, "")
}

/// Random admissible Hensel instances: `ord(f(alpha)) >= target` and
/// `ord(alpha - alpha1) >= r - s` on the returned root.
pub fn check_hensel_instances(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut produced = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let p = prime.value();
        let mut s = Sampler::new(seed ^ (prime.value() << 24));
        let mut count = 0;
        let mut attempts = 0;
        while count < cases && attempts < cases * 200 {
            attempts += 1;
            // random cubic with p-integral coefficients and a seed that is
            // an approximate root: f(x) = (x - alpha1)(x^2 + bx + c) + p^k e
            let alpha1 = rat(s.integer(-50, 50));
            let b = rat(s.integer(-9, 9));
            let c = rat(s.integer(-9, 9));
            let k = s.integer(5, 9) as i32;
            let e = rat(s.integer(-9, 9));
            let noise = rat(p as i64).pow(k) * e;
            let linear = RatPoly::new(vec![-&alpha1, rat(1)]);
            let quad = RatPoly::new(vec![c, b, rat(1)]);
            let f = linear.mul(&quad).add(&RatPoly::constant(noise));
            let fa = f.eval(&alpha1);
            if fa.is_zero() {
                continue;
            }
            let r = rational_ord(p, &fa).finite().unwrap();
            let sv = match rational_ord(p, &f.derivative().eval(&alpha1)) {
                Valuation::Finite(v) => v,
                Valuation::Infinity => continue,
            };
            if r <= 2 * sv {
                continue;
            }
            count += 1;
            produced += 1;
            let seed_scalar = PadicScalar::from_rational(prime, alpha1.clone());
            match hensel_lift(prime, &f, &seed_scalar, trunc) {
                Ok(root) => {
                    let val = f.eval(&root.known_value());
                    let drift = &root.known_value() - &alpha1;
                    let ok = rational_ord(p, &val).at_least(32)
                        && rational_ord(p, &drift).at_least(r - sv);
                    if !ok {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    CheckResult::from_counts("hensel-instances", failures, produced, "")
}

/// `sqrt(x)^2 = x` exactly on exact rational squares, to precision
/// otherwise; canonical-branch rules hold.
pub fn check_sqrt(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 3));
        for _ in 0..cases {
            let base = s.nonzero_scalar(prime, 60);
            let square = base.mul(&base).unwrap();
            let root = match square.sqrt(trunc) {
                Ok(r) => r,
                Err(_) => {
                    failures += 1;
                    continue;
                }
            };
            total += 1;
            // exact rational square: exact root equal to +-base
            let ok = root.is_exact()
                && (root.known_value() == base.known_value()
                    || root.known_value() == -base.known_value());
            if !ok {
                failures += 1;
            }
            // a random square unit class, usually irrational
            let candidate = s.nonzero_scalar(prime, 60);
            if candidate.is_square().unwrap() && !candidate.is_zero_at_precision() {
                total += 1;
                let r = candidate.sqrt(trunc).unwrap();
                if !r.mul(&r).unwrap().agrees(&candidate).unwrap() {
                    failures += 1;
                }
            }
        }
    }
    CheckResult::from_counts("sqrt-roundtrip", failures, total, "")
}

/// Rotation equivalence is an equivalence relation on level sets.
pub fn check_rotation_equivalence(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 5));
        for _ in 0..cases {
            let k = s.nonzero_scalar(prime, 30);
            if !quadratic::is_sum_of_two_squares(&k).unwrap() {
                continue;
            }
            let base = match quadratic::solve_two_squares(&k, trunc) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let pts = quadratic::rotation_translates(&base, 3).unwrap();
            total += 1;
            let refl = quadratic::rotation_equivalent(&pts[0], &pts[0]).unwrap_or(false);
            let sym = quadratic::rotation_equivalent(&pts[0], &pts[1]).unwrap_or(false)
                == quadratic::rotation_equivalent(&pts[1], &pts[0]).unwrap_or(false);
            // transitivity on the triple
            let ab = quadratic::rotation_equivalent(&pts[0], &pts[1]).unwrap_or(false);
            let bc = quadratic::rotation_equivalent(&pts[1], &pts[2]).unwrap_or(false);
            let ac = quadratic::rotation_equivalent(&pts[0], &pts[2]).unwrap_or(false);
            let trans = !(ab && bc) || ac;
            if !(refl && sym && trans) {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("rotation-equivalence-relation", failures, total, "")
}

/// Transporters are unitary and transport.
pub fn check_transporter(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let one_total = &mut 0;
    let mut failures = 0;
    for prime in primes(&[2, 3, 5, 13]) {
        let one = PadicScalar::one(prime);
        let mut s = Sampler::new(seed ^ (prime.value() << 6));
        for _ in 0..cases {
            let k = s.nonzero_scalar(prime, 30);
            if !quadratic::is_sum_of_two_squares(&k).unwrap() {
                continue;
            }
            let base = match quadratic::solve_two_squares(&k, trunc) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let pts = quadratic::rotation_translates(&base, 2).unwrap();
            let m = match quadratic::unitary_transporter(&pts[0], &pts[1]) {
                Ok(m) => m,
                Err(_) => {
                    failures += 1;
                    continue;
                }
            };
            *one_total += 1;
            let det_ok = m.det().unwrap().agrees(&one).unwrap();
            let moved = m.apply(&pts[0]).unwrap();
            let maps = moved.x.agrees(&pts[1].x).unwrap() && moved.y.agrees(&pts[1].y).unwrap();
            if !(det_ok && maps) {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("transporter-unitary", failures, *one_total, "")
}

/// Deterministic k-values per prime spanning all order cases of the
/// orbit-count table.
pub fn orbit_grid_k_values(prime: Prime, per_prime: usize, seed: u64) -> Vec<PadicScalar> {
    let mut s = Sampler::new(seed ^ prime.value().rotate_left(13));
    let p = prime.value() as i64;
    let mut out = Vec::new();
    let mut e = -3i64;
    while out.len() < per_prime {
        // unit numerators coprime to p to pin the order exactly
        let mut c = s.integer(1, 4 * p);
        if c % p == 0 {
            c += 1;
        }
        let unit = rat(c);
        let k = unit * rat(p).pow(e as i32);
        out.push(PadicScalar::from_rational(prime, k));
        e += 1;
        if e > 3 {
            e = -3;
        }
    }
    out
}

/// Orbit counts against the census over the full grid.
pub fn check_orbits_vs_census(
    seed: u64,
    prime_list: &[u64],
    per_prime: usize,
    m: u32,
) -> CheckResult {
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(prime_list) {
        let cfg = CensusConfig::new(prime, m).unwrap();
        for k in orbit_grid_k_values(prime, per_prime, seed) {
            for r in -2..=2 {
                total += 1;
                let predicted = quadratic::orbit_count(r, &k).unwrap().orbits_at_order();
                match oracle::census_orbits(&cfg, &k, r) {
                    Ok(counted) => {
                        if predicted != counted {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
        }
        // the degenerate level
        let zero = PadicScalar::zero(prime);
        for r in -1..=1 {
            total += 1;
            let predicted = quadratic::orbit_count(r, &zero).unwrap().orbits_at_order();
            if predicted != oracle::census_orbits(&cfg, &zero, r).unwrap() {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("orbits-vs-census", failures, total, "")
}

/// Sum-of-two-squares census agreement over all residues mod p^6.
pub fn check_two_squares_vs_census() -> CheckResult {
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5]) {
        let m = if prime.is_two() { 7u32 } else { 6 };
        let modulus = prime.pow(m);
        let cfg = CensusConfig::new(prime, m).unwrap();
        for k in 1..modulus {
            total += 1;
            let kk = PadicScalar::from_integer(prime, k as i64);
            let predicted = quadratic::is_sum_of_two_squares(&kk).unwrap();
            // representable iff some order's census count is nonzero;
            // solutions of an integer level have order in [0, ord(k)/2]
            let v = rational_ord(prime.value(), kk.as_rational().unwrap())
                .finite()
                .unwrap();
            let mut found = false;
            for r in 0..=(v.div_euclid(2)).max(0) {
                if oracle::census_orbits(&cfg, &kk, r).unwrap() > 0 {
                    found = true;
                    break;
                }
            }
            if predicted != found {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("two-squares-vs-census", failures, total, "")
}

/// `is_sum_of_two_squares(k)` iff `solve_two_squares(k)` succeeds, and
/// solutions substitute back exactly.
pub fn check_solve_two_squares(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 9));
        for _ in 0..cases {
            let k = s.nonzero_scalar(prime, 80);
            total += 1;
            let predicted = quadratic::is_sum_of_two_squares(&k).unwrap();
            match quadratic::solve_two_squares(&k, trunc) {
                Ok(sol) => {
                    let ok = predicted && sol.level().unwrap().agrees(&k).unwrap();
                    if !ok {
                        failures += 1;
                    }
                }
                Err(_) => {
                    if predicted {
                        failures += 1;
                    }
                }
            }
        }
    }
    CheckResult::from_counts("solve-two-squares", failures, total, "")
}

/// The circle-group embedding is multiplicative on exact points of `C_1`.
pub fn check_embed_homomorphism(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[5, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 10));
        for _ in 0..cases {
            let p1 = quadratic::unit_circle_point(prime, &s.rational(40));
            let p2 = quadratic::unit_circle_point(prime, &s.rational(40));
            // the unitary product of circle points
            let prod = PlanePoint::new(
                p1.x.mul(&p2.x).unwrap().sub(&p1.y.mul(&p2.y).unwrap()).unwrap(),
                p1.x.mul(&p2.y).unwrap().add(&p1.y.mul(&p2.x).unwrap()).unwrap(),
            )
            .unwrap();
            let lhs = quadratic::circle_group_embed(&prod, trunc).unwrap();
            let rhs = quadratic::circle_group_embed(&p1, trunc)
                .unwrap()
                .mul(&quadratic::circle_group_embed(&p2, trunc).unwrap())
                .unwrap();
            total += 1;
            if !lhs.agrees(&rhs).unwrap() {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("embed-homomorphism", failures, total, "")
}

/// Spin fiber samples lie on the sphere with the right height, and the
/// classification agrees with the census.
pub fn check_spin(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5]) {
        let m = if prime.is_two() { 7u32 } else { 6 };
        let cfg = CensusConfig::new(prime, m).unwrap();
        let mut s = Sampler::new(seed ^ (prime.value() << 11));
        for _ in 0..cases {
            let z = PadicScalar::from_integer(prime, s.integer(-40, 40));
            let class = spin::spin_fiber_classify(&z).unwrap();
            total += 1;
            // census cross-check
            let census = oracle::census_spin_fiber(&cfg, &z).unwrap();
            let empty_agrees =
                (class == spin::SpinFiberClass::Empty) == census.is_empty_fiber();
            // sampling cross-check
            let sample_ok = if class != spin::SpinFiberClass::Empty {
                match spin::sample_spin_fiber(&z, 2.min(fiber_capacity(class)), trunc) {
                    Ok(points) => points.iter().all(|q| {
                        q.z.agrees(&z).unwrap()
                            && q.norm_square()
                                .unwrap()
                                .agrees(&PadicScalar::one(prime))
                                .unwrap()
                    }),
                    Err(_) => false,
                }
            } else {
                spin::sample_spin_fiber(&z, 1, trunc).is_err()
            };
            let image_agrees = spin::spin_image_contains(&z).unwrap()
                == spin::spin_image_explicit(&z).unwrap();
            if !(empty_agrees && sample_ok && image_agrees) {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("spin-fibers", failures, total, "")
}

fn fiber_capacity(class: spin::SpinFiberClass) -> usize {
    match class {
        spin::SpinFiberClass::Point => 1,
        _ => 2,
    }
}

/// The p = 2 spin image over all residues mod 2^7 equals the stated union.
pub fn check_spin_image_window_p2() -> CheckResult {
    let prime = Prime::new(2).unwrap();
    let mut failures = 0;
    let mut total = 0;
    for n in -64i64..64 {
        let z = PadicScalar::from_integer(prime, n);
        total += 1;
        if spin::spin_image_contains(&z).unwrap() != spin::spin_image_explicit(&z).unwrap() {
            failures += 1;
        }
    }
    CheckResult::from_counts("spin-image-window-p2", failures, total, "")
}

/// `{J, H} = 0` exactly on random exact phase points with `z != 0`.
pub fn check_poisson(seed: u64, cases: usize) -> CheckResult {
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 12));
        for _ in 0..cases {
            let q = s.phase_point(prime, true);
            total += 1;
            match jc::poisson_jh(&q) {
                Ok(b) => {
                    if !b.is_exact_zero() {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    CheckResult::from_counts("poisson-bracket-zero", failures, total, "")
}

/// Constructed rank-1 points classify as `Rank1(a)` with the exact
/// critical value, and agree with the Jacobian-minor rank.
pub fn check_rank1_classification(seed: u64, per_prime: usize) -> CheckResult {
    let trunc = tr(40);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 13));
        let mut found = 0;
        let mut attempts = 0;
        while found < per_prime && attempts < per_prime * 400 {
            attempts += 1;
            let a = s.nonzero_scalar(prime, 30);
            let one = PadicScalar::one(prime);
            let a2 = a.mul(&a).unwrap();
            let a4 = a2.mul(&a2).unwrap();
            if a4.agrees(&one).unwrap() {
                continue;
            }
            let k = one.sub(&a4).unwrap().div(&a2).unwrap();
            if k.is_exact_zero() || !quadratic::is_sum_of_two_squares(&k).unwrap() {
                continue;
            }
            found += 1;
            total += 1;
            let q = match rank1_phase_point(&a, trunc) {
                Ok(q) => q,
                Err(_) => {
                    failures += 1;
                    continue;
                }
            };
            let class_ok = match jc::classify_point(&q).unwrap() {
                jc::CriticalClassification::Rank1 { a: got } => got.agrees(&a).unwrap(),
                _ => false,
            };
            let value_ok = jc::evaluate_f(&q)
                .unwrap()
                .agrees(&jc::critical_value(&a).unwrap())
                .unwrap();
            let rank_ok = jc::jacobian_rank(&q).unwrap() == 1;
            if !(class_ok && value_ok && rank_ok) {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("rank1-classification", failures, total, "")
}

/// Random points classify `Regular`, matching the Jacobian rank 2.
pub fn check_regular_classification(seed: u64, cases: usize) -> CheckResult {
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 14));
        for _ in 0..cases {
            let q = s.phase_point(prime, false);
            total += 1;
            let class = jc::classify_point(&q).unwrap();
            let rank = jc::jacobian_rank(&q).unwrap();
            let consistent = match class {
                jc::CriticalClassification::Regular => rank == 2,
                jc::CriticalClassification::Rank1 { .. } => rank == 1,
                jc::CriticalClassification::Rank0 { .. } => rank == 0,
            };
            if !consistent {
                failures += 1;
            }
        }
    }
    CheckResult::from_counts("regular-classification", failures, total, "")
}

/// `v_set_membership` definitional consistency:
/// `b^2 + 4h^2 - 2(j-z)(1-z^2) = 0` whenever a pair is returned.
pub fn check_v_membership_definitional(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 15));
        for _ in 0..cases {
            let jh = s.momentum(prime, 40);
            let z = s.scalar(prime, 40);
            match jc::v_set_membership(&jh, &z, trunc) {
                Ok(jc::VMembership::Pair { b }) => {
                    total += 1;
                    let t = jc::fiber_discriminant(&jh, &z).unwrap();
                    let defect = b.mul(&b).unwrap().sub(&t).unwrap();
                    if !defect.is_zero_at_precision() {
                        failures += 1;
                    }
                }
                Ok(_) => {}
                Err(_) => failures += 1,
            }
        }
    }
    CheckResult::from_counts("v-membership-definitional", failures, total, "")
}

/// The class/potential projection criterion against the direct square
/// test, in every decidable case.
pub fn check_z_projection(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut decidable = 0;
    let mut value_dependent = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 17));
        for _ in 0..cases {
            let jh = s.momentum(prime, 40);
            let z = s.scalar(prime, 40);
            let prediction = jc::projection_prediction(&jh, &z).unwrap();
            let direct = jc::v_set_membership(&jh, &z, trunc).unwrap().is_member();
            match prediction {
                jc::ProjectionPrediction::In => {
                    decidable += 1;
                    if !direct {
                        failures += 1;
                    }
                }
                jc::ProjectionPrediction::Out => {
                    decidable += 1;
                    if direct {
                        failures += 1;
                    }
                }
                jc::ProjectionPrediction::ValueDependent => value_dependent += 1,
            }
        }
    }
    CheckResult::from_counts(
        "z-projection-criterion",
        failures,
        decidable,
        &format!(", {value_dependent} value-dependent skipped"),
    )
}

/// The six reference momentum values per prime: descriptor consistency
/// with the screened fiber census.
pub fn check_fiber_descriptors_vs_census() -> CheckResult {
    let trunc = tr(32);
    let mut problems: Vec<String> = Vec::new();
    for prime in primes(&[2, 3, 5]) {
        let p = prime.value();
        let (j0, hs, m) = match p {
            2 => (22i64, [0i64, 2, 1], 5u32),
            3 => (23, [0, 3, 1], 4),
            _ => (23, [0, 5, 1], 4),
        };
        let cfg = CensusConfig::new(prime, m).unwrap();
        let frac = |n: i64, d: i64| PadicScalar::from_fraction(prime, n, d);
        let mut cases: Vec<MomentumValue> = hs
            .iter()
            .map(|&h| MomentumValue::from_integers(prime, j0, h))
            .collect();
        cases.push(MomentumValue::new(frac(-47, 8), frac(-15, 4)));
        cases.push(MomentumValue::from_integers(prime, -1, 0));
        cases.push(MomentumValue::from_integers(prime, 1, 0));
        for jh in cases {
            let report = jc::fiber_descriptor(&jh, trunc).unwrap();
            let census = oracle::census_jc(&cfg, &jh).unwrap();
            let label = format!("p={p} (j,h)=({},{})", jh.j, jh.h);
            match report.variant {
                jc::FiberVariant::SinglePoint => {
                    if !census.pole_only(-1) {
                        problems.push(format!("{label}: expected pole-only census"));
                    }
                }
                jc::FiberVariant::SingularAtPoint
                | jc::FiberVariant::SingularAlongFourLines { .. } => {
                    // singular structure at z = j must be present
                    let at_pole = census.z_entries.iter().find(|e| {
                        PadicScalar::from_integer(prime, e.z).agrees(&jh.j).unwrap()
                    });
                    match at_pole {
                        Some(entry) if entry.kind.in_fiber() => {}
                        _ => problems.push(format!("{label}: missing singular slice")),
                    }
                }
                jc::FiberVariant::SingularAlongCircle
                | jc::FiberVariant::CriticalCircleDisjoint => {
                    // the critical circle lives over z = -a^2
                    let a = report.a.clone().expect("rank-1 descriptor carries a");
                    let z0 = a.mul(&a).unwrap().neg();
                    let entry = census
                        .z_entries
                        .iter()
                        .find(|e| PadicScalar::from_integer(prime, e.z).agrees(&z0).unwrap());
                    match entry {
                        Some(e) if e.kind.in_fiber() => {}
                        _ => problems.push(format!("{label}: missing critical-circle slice")),
                    }
                }
                jc::FiberVariant::TwoManifold => {
                    // consistency: when the critical circle is empty the
                    // census must not see the critical slice as b = 0
                    if report.flags.iter().any(|f| f == "critical-circle-empty") {
                        let a = report.a.clone().unwrap();
                        let z0 = a.mul(&a).unwrap().neg();
                        let entry = census.z_entries.iter().find(|e| {
                            PadicScalar::from_integer(prime, e.z).agrees(&z0).unwrap()
                        });
                        if let Some(e) = entry {
                            if e.kind.in_fiber() {
                                problems.push(format!(
                                    "{label}: empty critical circle but census slice present"
                                ));
                            }
                        }
                    } else if census.members().is_empty() {
                        problems.push(format!("{label}: two-manifold fiber with empty census"));
                    }
                }
                jc::FiberVariant::IsolatedPointPlusOptionalTwoManifold => {
                    let at_pole = census
                        .z_entries
                        .iter()
                        .find(|e| PadicScalar::from_integer(prime, e.z).agrees(&jh.j).unwrap());
                    match at_pole {
                        Some(entry) if entry.kind == oracle::ZMarginalKind::PolePoint => {}
                        _ => problems.push(format!("{label}: missing isolated point")),
                    }
                }
            }
        }
    }
    if problems.is_empty() {
        CheckResult::pass("fiber-descriptors-vs-census", "18 reference cases".into())
    } else {
        CheckResult::fail("fiber-descriptors-vs-census", problems.join("; "))
    }
}

/// The p = 2 image grid: sufficiency gives verified witnesses, necessary
/// violations give NotInImage, and InImage never contradicts the census.
pub fn check_p2_image_grid(grid_target: usize) -> CheckResult {
    let prime = Prime::new(2).unwrap();
    let trunc = tr(40);
    let mut failures: Vec<String> = Vec::new();
    let mut sufficient_cases = 0;
    let mut necessary_violations = 0;
    let mut unknown = 0;
    let mut grid: Vec<MomentumValue> = Vec::new();
    // j spans orders -6..=4 with units 1 and 3 mod 4; h spans orders -4..=3
    'outer: for je in -6i64..=4 {
        for js in [1i64, 3, 5] {
            for he in -4i64..=3 {
                let j = PadicScalar::from_rational(
                    prime,
                    rat(js) * rat(2).pow(je as i32),
                );
                let h = PadicScalar::from_rational(prime, rat(2).pow(he as i32));
                grid.push(MomentumValue::new(j, h));
                if grid.len() >= grid_target {
                    break 'outer;
                }
            }
        }
    }
    for jh in &grid {
        match jc::jc_image_test(jh, trunc).unwrap() {
            jc::ImageVerdict::InImage { witness, .. } => {
                sufficient_cases += 1;
                match witness {
                    Some(q) => {
                        let f = jc::evaluate_f(&q).unwrap();
                        if !f.agrees(jh).unwrap() {
                            failures
                                .push(format!("witness mismatch at ({}, {})", jh.j, jh.h));
                        }
                        // exact components must re-evaluate exactly
                        if q.coords().iter().all(|c| c.is_exact()) {
                            let exact = f.j.as_rational() == jh.j.as_rational()
                                && f.h.as_rational() == jh.h.as_rational();
                            if !exact {
                                failures.push(format!(
                                    "exact witness drifted at ({}, {})",
                                    jh.j, jh.h
                                ));
                            }
                        }
                    }
                    None => {
                        failures.push(format!("no witness at ({}, {})", jh.j, jh.h));
                    }
                }
            }
            jc::ImageVerdict::NotInImage { .. } => {
                necessary_violations += 1;
                // never contradicted by the census
                if jh.j.ord_at_least(0) && jh.h.ord_at_least(0) {
                    let cfg = CensusConfig::new(prime, 5).unwrap();
                    let census = oracle::census_jc(&cfg, jh).unwrap();
                    if !census.members().is_empty() {
                        failures.push(format!(
                            "census finds members for NotInImage ({}, {})",
                            jh.j, jh.h
                        ));
                    }
                }
            }
            jc::ImageVerdict::Unknown { .. } => unknown += 1,
        }
    }
    let details = format!(
        "{} grid points: {sufficient_cases} in-image, {necessary_violations} excluded, {unknown} unknown",
        grid.len()
    );
    if failures.is_empty() {
        CheckResult::pass("p2-image-grid", details)
    } else {
        CheckResult::fail("p2-image-grid", failures.join("; "))
    }
}

/// Sampled fiber points re-evaluate to their targets.
pub fn check_fiber_sampling(seed: u64, cases: usize) -> CheckResult {
    let trunc = tr(32);
    let mut failures = 0;
    let mut total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let mut s = Sampler::new(seed ^ (prime.value() << 18));
        for _ in 0..cases {
            let jh = s.momentum(prime, 30);
            let z = s.scalar(prime, 30);
            if z.agrees(&jh.j).unwrap() {
                continue;
            }
            let b = match jc::v_set_membership(&jh, &z, trunc).unwrap() {
                jc::VMembership::Pair { b } => b,
                jc::VMembership::SingleZero => PadicScalar::zero(prime),
                jc::VMembership::None => continue,
            };
            let points = match jc::sample_fiber(&jh, &z, &b, 2, trunc) {
                Ok(p) => p,
                Err(_) => {
                    failures += 1;
                    continue;
                }
            };
            for q in points {
                total += 1;
                if !jc::evaluate_f(&q).unwrap().agrees(&jh).unwrap() {
                    failures += 1;
                }
            }
        }
        // construct_fiber_point for p > 2 on random values
        if !prime.is_two() {
            for _ in 0..(cases / 4).max(2) {
                let jh = s.momentum(prime, 30);
                total += 1;
                match jc::construct_fiber_point(&jh, trunc) {
                    Ok(q) => {
                        if !jc::evaluate_f(&q).unwrap().agrees(&jh).unwrap() {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
        }
    }
    CheckResult::from_counts("fiber-sampling", failures, total, "")
}

/// Rank-1 normal-form identities: exact on rational witnesses, to working
/// precision on per-prime Hensel witnesses.
pub fn check_normal_forms_rank1(rational_samples: usize, seed: u64) -> CheckResult {
    let mut failures: Vec<String> = Vec::new();
    let witnesses = normal_forms::pythagorean_rank1_witnesses(rational_samples);
    let total = witnesses.len();
    for (a, u, v) in witnesses {
        match normal_forms::verify_rank1_identities(&a, &u, &v) {
            Ok(report) => {
                if !report.all_pass() {
                    failures.push(format!("a = {a}: {:?}", report.checks));
                }
            }
            Err(e) => failures.push(format!("a = {a}: {e}")),
        }
    }
    // per-prime truncated witnesses, asserted at working precision. Every
    // defect equals the constraint defect delta times a rational function
    // of (a, u, v), so ord(defect) >= ord(delta) - (denominator bound).
    let trunc = tr(48);
    let mut padic_total = 0;
    for prime in primes(&[2, 3, 5, 7, 13]) {
        let p = prime.value();
        let mut s = Sampler::new(seed ^ (prime.value() << 19));
        let mut found = 0;
        let mut attempts = 0;
        while found < 3 && attempts < 1200 {
            attempts += 1;
            let a = s.nonzero_scalar(prime, 20);
            // units only: the exact Pythagorean path covers general a, and
            // unit parameters keep the denominator bound tight
            if !matches!(a.ord(), Ok(Valuation::Finite(0))) {
                continue;
            }
            let one = PadicScalar::one(prime);
            let a2 = a.mul(&a).unwrap();
            let a4 = a2.mul(&a2).unwrap();
            if a4.agrees(&one).unwrap() {
                continue;
            }
            let k = one.sub(&a4).unwrap().div(&a2).unwrap();
            if k.is_exact_zero() || !quadratic::is_sum_of_two_squares(&k).unwrap() {
                continue;
            }
            let three_a4_p1 = a4
                .mul(&PadicScalar::from_integer(prime, 3))
                .unwrap()
                .add(&one)
                .unwrap();
            if three_a4_p1.is_zero_at_precision() {
                continue;
            }
            let uv = match quadratic::solve_two_squares(&k, trunc) {
                Ok(pt) => pt,
                Err(_) => continue,
            };
            if uv.x.is_exact() && uv.y.is_exact() {
                continue; // covered by the exact path
            }
            found += 1;
            padic_total += 1;
            let a_rat = a.known_value();
            let u_rat = uv.x.known_value();
            let v_rat = uv.y.known_value();
            match normal_forms::rank1_identity_defects(&a_rat, &u_rat, &v_rat) {
                Ok(defects) => {
                    let delta = defects
                        .iter()
                        .find(|(n, _)| n == "constraint")
                        .map(|(_, d)| d.clone())
                        .unwrap();
                    let delta_ord = match rational_ord(p, &delta) {
                        Valuation::Finite(v) => v,
                        Valuation::Infinity => i64::MAX / 2,
                    };
                    let abs = |v: &BigRational| {
                        rational_ord(p, v).finite().map(|o| o.abs()).unwrap_or(0)
                    };
                    let one_r = BigRational::one();
                    let a4_r = &a_rat * &a_rat * &a_rat * &a_rat;
                    let slack = 6
                        + 2 * abs(&(&one_r - &a4_r))
                        + abs(&(rat(3) * &a4_r + &one_r))
                        + 2 * abs(&u_rat).max(1)
                        + 2 * abs(&v_rat).max(1);
                    let threshold = (delta_ord - slack).max(12);
                    for (name, defect) in defects {
                        if !rational_ord(p, &defect).at_least(threshold) {
                            failures.push(format!(
                                "p={p} a={a_rat} {name}: ord {} < {threshold}",
                                rational_ord(p, &defect)
                            ));
                        }
                    }
                }
                Err(e) => failures.push(format!("p={p} a={a_rat}: {e}")),
            }
        }
    }
    if failures.is_empty() {
        CheckResult::pass(
            "normal-forms-rank1",
            format!("{total} exact witnesses, {padic_total} truncated"),
        )
    } else {
        CheckResult::fail("normal-forms-rank1", failures.join("; "))
    }
}

/// Rank-0 normal forms and characteristic polynomials.
pub fn check_normal_forms_rank0(seed: u64, charpoly_samples: usize) -> CheckResult {
    let mut failures: Vec<String> = Vec::new();
    for pole in [-1i8, 1] {
        match normal_forms::verify_rank0_normal_form(pole) {
            Ok(report) => {
                if !report.all_pass() {
                    failures.push(format!("pole {pole}: {:?}", report.checks));
                }
            }
            Err(e) => failures.push(format!("pole {pole}: {e}")),
        }
    }
    let mut s = Sampler::new(seed ^ 0xC0FFEE);
    for _ in 0..charpoly_samples {
        let lambda = s.rational(20);
        let mu = s.rational(20);
        for pole in [-1i8, 1] {
            let rep = normal_forms::nondegeneracy_charpoly(pole, &lambda, &mu);
            if !rep.matches {
                failures.push(format!("charpoly mismatch pole {pole} ({lambda}, {mu})"));
            }
        }
    }
    if failures.is_empty() {
        CheckResult::pass(
            "normal-forms-rank0",
            format!("2 poles, {charpoly_samples} charpoly samples"),
        )
    } else {
        CheckResult::fail("normal-forms-rank0", failures.join("; "))
    }
}

/// The oscillator flow: recurrence vs closed form vs scalar IVP solver,
/// and energy conservation, through degree 12.
pub fn check_flows(seed: u64) -> CheckResult {
    let mut s = Sampler::new(seed ^ 0xF10);
    let mut failures: Vec<String> = Vec::new();
    for _ in 0..10 {
        let x0 = s.rational(30);
        let y0 = s.rational(30);
        let (x, y) = flows::oscillator_flow_series(&x0, &y0, 12);
        let (cx, cy) = flows::oscillator_closed_form(&x0, &y0, 12);
        if x != cx || y != cy {
            failures.push(format!("closed form mismatch at ({x0}, {y0})"));
        }
        // scalar IVP cross-check: x' = 2 y(t) and y' = -2 x(t)
        let fx = flows::BivariatePoly::new(
            y.coefficients()
                .iter()
                .map(|c| vec![c * rat(2)])
                .collect(),
        );
        let x_ivp = flows::solve_ivp(&fx, &BigRational::zero(), &x0, 12);
        if x_ivp != x {
            failures.push(format!("ivp x-mismatch at ({x0}, {y0})"));
        }
        let fy = flows::BivariatePoly::new(
            x.coefficients()
                .iter()
                .map(|c| vec![c * rat(-2)])
                .collect(),
        );
        let y_ivp = flows::solve_ivp(&fy, &BigRational::zero(), &y0, 12);
        if y_ivp != y {
            failures.push(format!("ivp y-mismatch at ({x0}, {y0})"));
        }
        let energy = flows::flow_energy_series(&x, &y);
        if energy.coeff(0) != &x0 * &x0 + &y0 * &y0 {
            failures.push("energy constant term".into());
        }
        for i in 1..=12 {
            if !energy.coeff(i).is_zero() {
                failures.push(format!("energy coefficient {i} nonzero"));
            }
        }
    }
    // rotation matrices preserve levels
    for p in [3u64, 5] {
        let prime = Prime::new(p).unwrap();
        let t = PadicScalar::from_integer(prime, p as i64);
        let m = flows::rotation_matrix(&t, tr(24)).unwrap();
        let point = PlanePoint::from_integers(prime, 2, 1);
        let k = point.level().unwrap();
        let moved = m.apply(&point).unwrap();
        if !moved.level().unwrap().agrees(&k).unwrap() {
            failures.push(format!("rotation level drift for p = {p}"));
        }
        if !m
            .det()
            .unwrap()
            .agrees(&PadicScalar::one(prime))
            .unwrap()
        {
            failures.push(format!("rotation determinant for p = {p}"));
        }
    }
    if failures.is_empty() {
        CheckResult::pass("oscillator-flow", "degree-12 identities".into())
    } else {
        CheckResult::fail("oscillator-flow", failures.join("; "))
    }
}

/// Export determinism and depth-6 injectivity for p = 3.
pub fn check_viz() -> CheckResult {
    let prime = Prime::new(3).unwrap();
    let dataset: Vec<viz::LabelledTuple> = (0..64)
        .map(|n| {
            (
                vec![PadicScalar::from_integer(prime, n)],
                format!("c{}", n % 4),
            )
        })
        .collect();
    let a = viz::render_figure(&dataset, viz::FigureMapping::OneDim, 6).unwrap();
    let b = viz::render_figure(&dataset, viz::FigureMapping::OneDim, 6).unwrap();
    if a != b {
        return CheckResult::fail("viz-deterministic", "renders differ".into());
    }
    // exhaustive injectivity at depth 6
    let points: Vec<(f64, f64)> = (0..729)
        .map(|n| viz::repr1d(&PadicScalar::from_integer(prime, n), 6).unwrap())
        .collect();
    let mut min_dist = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dx = points[i].0 - points[j].0;
            let dy = points[i].1 - points[j].1;
            min_dist = min_dist.min((dx * dx + dy * dy).sqrt());
        }
    }
    if min_dist > 1e-9 {
        CheckResult::pass("viz-injectivity", format!("min separation {min_dist:.3e}"))
    } else {
        CheckResult::fail("viz-injectivity", format!("min separation {min_dist:.3e}"))
    }
}

/// Runs the whole suite. `quick` shrinks sample counts to finish fast.
pub fn run_suite(seed: u64, quick: bool) -> Vec<CheckResult> {
    let n = |full: usize, fast: usize| if quick { fast } else { full };
    vec![
        check_ultrametric(seed, n(200, 50)),
        check_exp_homomorphism(seed, n(500, 60), 28),
        check_trig_identities(seed, n(500, 60), 28),
        check_squares_vs_census(),
        check_hensel_instances(seed, n(40, 10)),
        check_sqrt(seed, n(120, 30)),
        check_rotation_equivalence(seed, n(200, 40)),
        check_transporter(seed, n(100, 25)),
        check_orbits_vs_census(seed, &[2, 3, 5, 7, 13], n(20, 6), 6),
        check_two_squares_vs_census(),
        check_solve_two_squares(seed, n(500, 80)),
        check_embed_homomorphism(seed, n(200, 40)),
        check_spin(seed, n(60, 15)),
        check_spin_image_window_p2(),
        check_poisson(seed, n(200, 40)),
        check_rank1_classification(seed, n(50, 10)),
        check_regular_classification(seed, n(500, 80)),
        check_v_membership_definitional(seed, n(300, 60)),
        check_z_projection(seed, n(500, 100)),
        check_fiber_descriptors_vs_census(),
        check_p2_image_grid(n(200, 60)),
        check_fiber_sampling(seed, n(60, 15)),
        check_normal_forms_rank1(n(25, 8), seed),
        check_normal_forms_rank0(seed, n(50, 12)),
        check_flows(seed),
        check_viz(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for result in run_suite(0, true) {
            assert!(result.passed, "{}: {}", result.name, result.details);
        }
    }
}
