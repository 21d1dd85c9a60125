//! Independent brute-force verification over residue rings `Z/p^m`:
//! censuses of squares, rotation orbits, sphere fibers and JC fibers.
//! Everything here enumerates residues and screens them for
//! Hensel-liftability; the closed forms of the other modules are never
//! consulted for the counting itself.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{PadicError, Result};
use crate::jc::{subfiber_type, v_set_membership, MomentumValue, SubfiberType, VMembership};
use crate::quadratic::is_sum_of_two_squares;
use crate::prime::Prime;
use crate::scalar::{rational_ord, PadicScalar, SeriesTruncation};

/// Shared census configuration.
#[derive(Debug, Clone, Copy)]
pub struct CensusConfig {
    pub prime: Prime,
    /// Exponent `m` of the residue window `Z/p^m`.
    pub modulus_exponent: u32,
    /// Apply Hensel-liftability screening (required for faithful counts).
    pub lift_filter: bool,
    /// Number of deterministic shards the enumeration is split into.
    pub shard_count: usize,
}

impl CensusConfig {
    pub fn new(prime: Prime, modulus_exponent: u32) -> Result<Self> {
        let cfg = Self {
            prime,
            modulus_exponent,
            lift_filter: true,
            shard_count: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// A window without the lift-screening size requirement; only the
    /// exactly-screened z-scan of [`census_jc`] accepts such configs.
    pub fn unscreened(prime: Prime, modulus_exponent: u32) -> Self {
        Self {
            prime,
            modulus_exponent,
            lift_filter: false,
            shard_count: 1,
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shard_count = shards.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        let needed = 3 + self.prime.d();
        if self.lift_filter && self.modulus_exponent < needed {
            return Err(PadicError::WindowTooSmall(format!(
                "lift screening needs m >= {needed}, got {}",
                self.modulus_exponent
            )));
        }
        Ok(())
    }

    fn modulus(&self) -> u64 {
        self.prime.pow(self.modulus_exponent)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// All square roots mod `p^m`, as a CSR table: `roots_of(s)` lists every
/// `y` with `y^2 = s mod p^m`. Tables are memoized per modulus, since the
/// verification grids run hundreds of censuses over the same window.
struct SqrtTable {
    modulus: u64,
    offsets: Vec<u32>,
    roots: Vec<u32>,
}

fn sqrt_table(modulus: u64) -> std::sync::Arc<SqrtTable> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<SqrtTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("table cache");
    guard
        .entry(modulus)
        .or_insert_with(|| Arc::new(SqrtTable::build(modulus)))
        .clone()
}

impl SqrtTable {
    fn build(modulus: u64) -> Self {
        let m = modulus as usize;
        let mut counts = vec![0u32; m + 1];
        for y in 0..modulus {
            counts[(mul_mod(y, y, modulus) as usize) + 1] += 1;
        }
        for i in 0..m {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut roots = vec![0u32; modulus as usize];
        for y in 0..modulus {
            let s = mul_mod(y, y, modulus) as usize;
            roots[cursor[s] as usize] = y as u32;
            cursor[s] += 1;
        }
        Self {
            modulus,
            offsets,
            roots,
        }
    }

    fn roots_of(&self, s: u64) -> &[u32] {
        debug_assert!(s < self.modulus);
        let lo = self.offsets[s as usize] as usize;
        let hi = self.offsets[s as usize + 1] as usize;
        &self.roots[lo..hi]
    }
}

/// Result of the square census: the liftable square classes among the
/// units mod `p^m`.
#[derive(Debug, Clone)]
pub struct SquareCensus {
    pub modulus: u64,
    pub unit_square_classes: BTreeSet<u64>,
    pub zero_included: bool,
}

/// Enumerates `r^2 mod p^m` over all unit residues. For `m >= 3 + d` a
/// unit class containing a square residue is liftably square by Hensel
/// lifting, so the enumeration itself is the screening.
pub fn census_squares(cfg: &CensusConfig) -> Result<SquareCensus> {
    cfg.validate()?;
    let p = cfg.prime.value();
    let modulus = cfg.modulus();
    let mut unit_square_classes = BTreeSet::new();
    let shards = cfg.shard_count.max(1) as u64;
    // deterministic merge: shard s takes residues congruent to s mod shards
    for shard in 0..shards {
        let mut local = Vec::new();
        let mut r = shard;
        while r < modulus {
            if r % p != 0 {
                local.push(mul_mod(r, r, modulus));
            }
            r += shards;
        }
        unit_square_classes.extend(local);
    }
    Ok(SquareCensus {
        modulus,
        unit_square_classes,
        zero_included: true,
    })
}

/// Counts the Hensel-screened order-`r` orbit labels of
/// `x^2 + y^2 = k` in the window `Z/p^m`: the census is run on the
/// order-0 rescaling of `k` and groups unit-scale solutions by their
/// residues mod `p^d`.
pub fn census_orbits(cfg: &CensusConfig, k: &PadicScalar, r: i64) -> Result<u64> {
    Ok(census_orbit_labels(cfg, k, r)?.len() as u64)
}

/// The screened orbit labels themselves: residue pairs mod `p^d` of the
/// order-0 rescaled solutions.
pub fn census_orbit_labels(
    cfg: &CensusConfig,
    k: &PadicScalar,
    r: i64,
) -> Result<BTreeSet<(u64, u64)>> {
    use num_traits::Zero;
    cfg.validate()?;
    if !cfg.lift_filter {
        return Err(PadicError::WindowTooSmall(
            "orbit censuses require the lift filter".into(),
        ));
    }
    let prime = cfg.prime;
    let p = prime.value();
    let d = prime.d();
    let k_rat = k
        .as_rational()
        .ok_or_else(|| PadicError::InsufficientPrecision("census needs exact k".into()))?;
    // Rescale to order 0: k' = k p^(-2r); faithful label counting needs
    // at least 3 + d digits of window at unit scale.
    let min_window = (3 + d) as i64;
    let nominal = cfg.modulus_exponent as i64 - r;
    let budget = {
        let mut e = 0u32;
        while prime.pow(e + 1) <= 5_000_000 {
            e += 1;
        }
        e as i64
    };
    let window = nominal.clamp(min_window, budget.max(min_window)) as u32;
    let modulus = prime.pow(window);
    let scaled =
        k_rat * num_rational::BigRational::from_integer(num_bigint::BigInt::from(p))
            .pow(-2 * r as i32);
    let target: u64 = if scaled.is_zero() {
        0
    } else {
        let v = rational_ord(p, &scaled).finite().unwrap();
        if v < 0 {
            // no p-integral solution of order 0 exists
            return Ok(BTreeSet::new());
        }
        if v >= window as i64 {
            // indistinguishable from the zero level inside the window;
            // order-0 label sets only depend on k mod p^(3+d), so the
            // residue-0 count is still faithful
            0
        } else {
            crate::scalar::rational_mod_pk(p, &scaled, window)
                .try_into()
                .expect("fits u64")
        }
    };
    let table = sqrt_table(modulus);
    let mut labels: BTreeSet<(u64, u64)> = BTreeSet::new();
    let label_mod = prime.pow(d);
    let shards = cfg.shard_count.max(1) as u64;
    for shard in 0..shards {
        let mut x = shard;
        while x < modulus {
            let rest = (target + modulus - mul_mod(x, x, modulus)) % modulus;
            for &y in table.roots_of(rest) {
                let y = y as u64;
                // order 0: at least one unit coordinate
                if x % p == 0 && y % p == 0 {
                    continue;
                }
                labels.insert((x % label_mod, y % label_mod));
            }
            x += shards;
        }
    }
    Ok(labels)
}

/// Summary of a spin-fiber census at `z`.
#[derive(Debug, Clone)]
pub struct SpinFiberCensus {
    /// Screened orbit-label counts of `x^2 + y^2 = 1 - z^2` per order,
    /// over the representable window of orders.
    pub classes_per_order: Vec<(i64, u64)>,
    /// `1 - z^2 = 0`, i.e. the fiber is the pole point.
    pub zero_level: bool,
}

impl SpinFiberCensus {
    pub fn total_classes(&self) -> u64 {
        self.classes_per_order.iter().map(|(_, c)| c).sum()
    }

    pub fn is_empty_fiber(&self) -> bool {
        !self.zero_level && self.total_classes() == 0
    }
}

/// Censuses the sphere slice at height `z`: counts the liftable residue
/// classes of `x^2 + y^2 = 1 - z^2`.
pub fn census_spin_fiber(cfg: &CensusConfig, z: &PadicScalar) -> Result<SpinFiberCensus> {
    use num_traits::Zero;
    cfg.validate()?;
    let one = num_rational::BigRational::from_integer(1.into());
    let z_rat = z
        .as_rational()
        .ok_or_else(|| PadicError::InsufficientPrecision("census needs exact z".into()))?;
    let k = &one - z_rat * z_rat;
    if k.is_zero() {
        return Ok(SpinFiberCensus {
            classes_per_order: Vec::new(),
            zero_level: true,
        });
    }
    let p = cfg.prime.value();
    let v = rational_ord(p, &k).finite().unwrap();
    // solutions have order at most floor(ord/2); orders strictly below
    // only occur for p = 1 mod 4, scan a small window of them
    let top = v.div_euclid(2);
    let k_scalar = PadicScalar::from_rational(cfg.prime, k);
    let mut classes = Vec::new();
    for r in (top - 2)..=top {
        let count = census_orbits(cfg, &k_scalar, r)?;
        classes.push((r, count));
    }
    Ok(SpinFiberCensus {
        classes_per_order: classes,
        zero_level: false,
    })
}

/// Exact screened classification of one `z` residue in a JC fiber census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZMarginalKind {
    /// Two values of `b`: a pair of circles.
    TwoCircles,
    /// `b = 0`: one circle.
    OneCircle,
    /// `z = j` pole slice: a single point.
    PolePoint,
    /// `z = j`, `p = 1 mod 4`, regular: dimension 1.
    DimOne,
    /// `z = j = +-1`, `p = 1 mod 4`: two planes.
    TwoPlanes,
    NotInFiber,
}

impl ZMarginalKind {
    pub fn label(&self) -> &'static str {
        match self {
            ZMarginalKind::TwoCircles => "two-circles",
            ZMarginalKind::OneCircle => "one-circle",
            ZMarginalKind::PolePoint => "point",
            ZMarginalKind::DimOne => "dim1",
            ZMarginalKind::TwoPlanes => "two-planes",
            ZMarginalKind::NotInFiber => "not-in-fiber",
        }
    }

    pub fn in_fiber(&self) -> bool {
        !matches!(self, ZMarginalKind::NotInFiber)
    }
}

#[derive(Debug, Clone)]
pub struct JcZEntry {
    /// Balanced representative of the residue class mod `p^m`.
    pub z: i64,
    pub kind: ZMarginalKind,
}

/// JC fiber census: an exactly screened z-marginal over balanced residue
/// representatives, plus (for p-integral data and affordable windows) a
/// raw count of residue 5-tuples satisfying the three congruences.
#[derive(Debug, Clone)]
pub struct JcCensus {
    pub z_entries: Vec<JcZEntry>,
    /// Raw solutions of the mod-p^m congruence system per z residue
    /// (unscreened window evidence), when computed.
    pub tuple_histogram: Option<BTreeMap<i64, u64>>,
}

impl JcCensus {
    pub fn members(&self) -> Vec<&JcZEntry> {
        self.z_entries.iter().filter(|e| e.kind.in_fiber()).collect()
    }

    /// True when the screened census finds exactly one member slice, at
    /// `z = pole`, and it is the single-point slice.
    pub fn pole_only(&self, pole: i64) -> bool {
        let members = self.members();
        members.len() == 1 && members[0].z == pole && members[0].kind == ZMarginalKind::PolePoint
    }
}

fn balanced_representative(residue: u64, modulus: u64) -> i64 {
    if residue * 2 >= modulus {
        residue as i64 - modulus as i64
    } else {
        residue as i64
    }
}

/// Scans all residues `z mod p^m` (balanced lifts) and classifies each by
/// the exact `V_{j,h}` membership test; optionally enumerates the raw
/// congruence solutions for the 5-tuple histogram.
pub fn census_jc(cfg: &CensusConfig, jh: &MomentumValue) -> Result<JcCensus> {
    if cfg.lift_filter {
        cfg.validate()?;
    }
    let prime = cfg.prime;
    let modulus = cfg.modulus();
    let trunc =
        SeriesTruncation::new((cfg.modulus_exponent as i64 + 4).max(8)).expect("positive");
    let mut z_entries = Vec::with_capacity(modulus as usize);
    for residue in 0..modulus {
        let z_int = balanced_representative(residue, modulus);
        let z = PadicScalar::from_integer(prime, z_int);
        let kind = match v_set_membership(jh, &z, trunc)? {
            VMembership::None => ZMarginalKind::NotInFiber,
            VMembership::SingleZero => match subfiber_type(jh, &z, &PadicScalar::zero(prime))? {
                SubfiberType::Circle => ZMarginalKind::OneCircle,
                SubfiberType::Point => ZMarginalKind::PolePoint,
                SubfiberType::PuncturedLine => ZMarginalKind::DimOne,
                SubfiberType::TwoPlanes => ZMarginalKind::TwoPlanes,
            },
            VMembership::Pair { b } => match subfiber_type(jh, &z, &b)? {
                SubfiberType::Circle => ZMarginalKind::TwoCircles,
                SubfiberType::Point => ZMarginalKind::PolePoint,
                SubfiberType::PuncturedLine => ZMarginalKind::DimOne,
                SubfiberType::TwoPlanes => ZMarginalKind::TwoPlanes,
            },
        };
        // The z = j slice needs extra screening beyond V-membership: for
        // p != 1 mod 4 it forces u = v = 0, hence h = 0 and a solvable
        // x^2 + y^2 = 1 - j^2.
        let kind = if z.agrees(&jh.j)? && prime.residue_class_mod_4() != 1 {
            let one = PadicScalar::one(prime);
            let level = one.sub(&z.mul(&z)?)?;
            let solvable = level.is_exact_zero() || is_sum_of_two_squares(&level)?;
            if !jh.h.is_exact_zero() || !solvable {
                ZMarginalKind::NotInFiber
            } else {
                kind
            }
        } else {
            kind
        };
        z_entries.push(JcZEntry { z: z_int, kind });
    }
    let tuple_histogram = census_jc_tuples(cfg, jh)?;
    Ok(JcCensus {
        z_entries,
        tuple_histogram,
    })
}

/// Raw enumeration of `(x, y, z, u, v) mod p^m` with
/// `x^2+y^2+z^2 = 1`, `u^2+v^2 = 2j - 2z`, `ux + vy = 2h`, when `2j` and
/// `2h` are p-adic integers and the window is affordable.
fn census_jc_tuples(cfg: &CensusConfig, jh: &MomentumValue) -> Result<Option<BTreeMap<i64, u64>>> {
    let prime = cfg.prime;
    let p = prime.value();
    let modulus = cfg.modulus();
    if modulus > 300 {
        return Ok(None);
    }
    let two_j = jh.j.as_rational().map(|r| r * crate::scalar::rat(2));
    let two_h = jh.h.as_rational().map(|r| r * crate::scalar::rat(2));
    let (Some(two_j), Some(two_h)) = (two_j, two_h) else {
        return Ok(None);
    };
    let window = cfg.modulus_exponent;
    let to_residue = |r: &num_rational::BigRational| -> Option<u64> {
        if !rational_ord(p, r).at_least(0) {
            return None;
        }
        Some(
            crate::scalar::rational_mod_pk(p, r, window)
                .try_into()
                .expect("fits"),
        )
    };
    let (Some(two_j), Some(two_h)) = (to_residue(&two_j), to_residue(&two_h)) else {
        return Ok(None);
    };
    let table = sqrt_table(modulus);
    let mut histogram: BTreeMap<i64, u64> = BTreeMap::new();
    for x in 0..modulus {
        let x2 = mul_mod(x, x, modulus);
        for y in 0..modulus {
            let y2 = mul_mod(y, y, modulus);
            let s = (1 + 2 * modulus - x2 - y2) % modulus;
            for &z in table.roots_of(s) {
                let z = z as u64;
                // u^2 + v^2 = 2j - 2z
                let k = (two_j + 2 * modulus - (2 * z) % modulus) % modulus;
                for u in 0..modulus {
                    let rest = (k + modulus - mul_mod(u, u, modulus)) % modulus;
                    for &v in table.roots_of(rest) {
                        let v = v as u64;
                        let hh = (mul_mod(u, x, modulus) + mul_mod(v, y, modulus)) % modulus;
                        if hh == two_h {
                            let zb = balanced_representative(z, modulus);
                            *histogram.entry(zb).or_insert(0) += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(Some(histogram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::{is_sum_of_two_squares, orbit_count};

    fn cfg(p: u64, m: u32) -> CensusConfig {
        CensusConfig::new(Prime::new(p).unwrap(), m).unwrap()
    }

    fn int(p: u64, n: i64) -> PadicScalar {
        PadicScalar::from_integer(Prime::new(p).unwrap(), n)
    }

    #[test]
    fn squares_census_examples() {
        let c5 = census_squares(&cfg(5, 4)).unwrap();
        // leading digits of unit squares mod 5 are {1, 4}
        let leading: BTreeSet<u64> = c5.unit_square_classes.iter().map(|&s| s % 5).collect();
        assert_eq!(leading, BTreeSet::from([1, 4]));
        let c2 = census_squares(&cfg(2, 5)).unwrap();
        assert!(c2.unit_square_classes.iter().all(|&s| s % 8 == 1));
        assert!(c2.zero_included);
    }

    #[test]
    fn squares_census_matches_is_square() {
        for p in [2u64, 3, 5, 13] {
            let census = census_squares(&cfg(p, 6)).unwrap();
            let modulus = census.modulus;
            for u in 1..modulus {
                if u % p == 0 {
                    continue;
                }
                let predicted = int(p, u as i64).is_square().unwrap();
                let counted = census.unit_square_classes.contains(&u);
                assert_eq!(predicted, counted, "p={p}, u={u}");
            }
        }
    }

    #[test]
    fn orbit_census_examples() {
        assert_eq!(census_orbits(&cfg(3, 6), &int(3, 1), 0).unwrap(), 4);
        assert_eq!(census_orbits(&cfg(5, 6), &int(5, 1), 0).unwrap(), 4);
        assert_eq!(census_orbits(&cfg(2, 7), &int(2, 1), 0).unwrap(), 4);
    }

    #[test]
    fn orbit_census_matches_closed_form() {
        for p in [2u64, 3, 5] {
            let c = cfg(p, 6);
            for k in [-9i64, -4, -2, -1, 1, 2, 3, 4, 5, 8, 9, 18, 50] {
                for r in -2..=2 {
                    let kk = int(p, k);
                    let predicted = orbit_count(r, &kk).unwrap().orbits_at_order();
                    let counted = census_orbits(&c, &kk, r).unwrap();
                    assert_eq!(predicted, counted, "p={p}, k={k}, r={r}");
                }
            }
        }
    }

    #[test]
    fn orbit_census_zero_level() {
        // p = 5, k = 0: two isotropic lines, 2p-2 = 8 sectors per order
        assert_eq!(census_orbits(&cfg(5, 6), &int(5, 0), 0).unwrap(), 8);
        assert_eq!(census_orbits(&cfg(3, 6), &int(3, 0), 0).unwrap(), 0);
    }

    #[test]
    fn orbit_census_shard_invariance() {
        let base = cfg(5, 6);
        let a = census_orbits(&base, &int(5, 2), 0).unwrap();
        let b = census_orbits(&base.with_shards(4), &int(5, 2), 0).unwrap();
        assert_eq!(a, b);
        let sa = census_squares(&base).unwrap();
        let sb = census_squares(&base.with_shards(3)).unwrap();
        assert_eq!(sa.unit_square_classes, sb.unit_square_classes);
    }

    #[test]
    fn spin_census_examples() {
        // p = 3, z = 4: empty fiber
        let c = census_spin_fiber(&cfg(3, 6), &int(3, 4)).unwrap();
        assert!(c.is_empty_fiber());
        // p = 2, z = 5: a circle
        let c = census_spin_fiber(&cfg(2, 7), &int(2, 5)).unwrap();
        assert!(!c.is_empty_fiber());
        assert!(c.total_classes() > 0);
        // z = 1: only the pole
        let c = census_spin_fiber(&cfg(2, 7), &int(2, 1)).unwrap();
        assert!(c.zero_level);
        // cross-check against 1 - z^2 being a sum of two squares
        for p in [2u64, 3, 5] {
            let window = if p == 2 { 7 } else { 6 };
            for z in -10i64..=10 {
                let zz = int(p, z);
                let one = PadicScalar::one(zz.prime());
                let k = one.sub(&zz.mul(&zz).unwrap()).unwrap();
                if k.is_exact_zero() {
                    continue;
                }
                let c = census_spin_fiber(&cfg(p, window), &zz).unwrap();
                assert_eq!(
                    !c.is_empty_fiber(),
                    is_sum_of_two_squares(&k).unwrap(),
                    "p={p}, z={z}"
                );
            }
        }
    }

    #[test]
    fn jc_census_pole_only_for_p2() {
        let pr = Prime::new(2).unwrap();
        let jh = MomentumValue::from_integers(pr, -1, 0);
        let census = census_jc(&cfg(2, 5), &jh).unwrap();
        assert!(census.pole_only(-1));
    }

    #[test]
    fn jc_census_rank1_value() {
        // p = 3, (23, 0): the b = 0 slice sits at z = 1, where
        // t = 2(j-z)(1-z^2) = 0 and 2(j-z) = 44 has even ord
        let pr = Prime::new(3).unwrap();
        let jh = MomentumValue::from_integers(pr, 23, 0);
        let census = census_jc(&cfg(3, 4), &jh).unwrap();
        let at_one = census
            .z_entries
            .iter()
            .find(|e| e.z == 1)
            .expect("entry for z = 1");
        assert_eq!(at_one.kind, ZMarginalKind::OneCircle);
        // z = -1 fails the two-squares clause: 2(j-z) = 48 has odd ord
        let at_minus_one = census.z_entries.iter().find(|e| e.z == -1).unwrap();
        assert!(!at_minus_one.kind.in_fiber());
    }

    #[test]
    fn jc_census_never_contradicts_not_in_image() {
        let pr = Prime::new(2).unwrap();
        // (6, 1/2) violates the necessary conditions
        let jh = MomentumValue::new(
            PadicScalar::from_integer(pr, 6),
            PadicScalar::from_fraction(pr, 1, 2),
        );
        let census = census_jc(&cfg(2, 5), &jh).unwrap();
        assert!(census.members().is_empty());
    }
}
