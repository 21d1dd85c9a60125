//! Real/complex visualization mappings of p-adic data and deterministic
//! figure-data export.
//!
//! Only `p` in `{2, 3, 5}` is supported, with the digit maps
//!
//! ```text
//! p = 2:  R(sum x_n 2^n) = sum x_n (3i/5)^n
//! p = 3:  R(sum x_n 3^n) = sum exp(2 pi i x_n / 3) (1/2)^n
//! p = 5:  R(sum x_n 5^n) = sum exp(2 pi i x_n / 5) (3/10)^n
//! ```
//!
//! for one variable, and the componentwise map `sum x_i c^i` with
//! `c = 2/5, 2/9, 2/15` for pairs. Inputs of negative valuation are
//! shifted to valuation 0 by the documented offset `p^-ord(x)` before
//! mapping. Digits beyond the end of a terminating expansion contribute
//! nothing.

use std::io::Write as _;

use crate::error::{PadicError, Result};
use crate::jc::MomentumValue;
use crate::oracle::{census_jc, CensusConfig};
use crate::prime::Prime;
use crate::quadratic::{orbit_label, unit_circle_point};
use crate::scalar::{rat, PadicScalar, SeriesTruncation};

/// A labelled plotted point.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

fn supported(prime: Prime) -> Result<()> {
    match prime.value() {
        2 | 3 | 5 => Ok(()),
        p => Err(PadicError::UnsupportedPrime(p)),
    }
}

/// The first `depth` digits of `x` from the leading position. Negative
/// valuations are shifted to 0 (the documented offset `p^-ord(x)`), and a
/// terminating expansion is trimmed at its last nonzero digit so the
/// trailing zeros contribute nothing to the angular maps.
fn mapping_digits(x: &PadicScalar, depth: usize) -> Result<(i64, Vec<u32>)> {
    if x.is_zero_at_precision() {
        return Ok((0, Vec::new()));
    }
    let ord = match x.ord()? {
        crate::scalar::Valuation::Finite(v) => v,
        crate::scalar::Valuation::Infinity => return Ok((0, Vec::new())),
    };
    let start = ord.max(0);
    let (_, mut digits) = x.digits(depth)?;
    if let Some(r) = x.as_rational() {
        use num_traits::Zero;
        let p = rat(x.prime().value() as i64);
        // strip the valuation, then peel digits to find where (and
        // whether) the expansion terminates within the window
        let mut unit = r / p.pow(ord as i32);
        let mut nonterminating = false;
        let mut count = 0usize;
        while count < depth {
            if unit.is_zero() {
                break;
            }
            let d = crate::scalar::rational_mod_pk(x.prime().value(), &unit, 1);
            let d: i64 = d.try_into().expect("digit");
            unit = (unit - rat(d)) / &p;
            count += 1;
            if count == depth && !unit.is_zero() {
                nonterminating = true;
            }
        }
        if !nonterminating {
            digits.truncate(count);
        }
    }
    Ok((start, digits))
}

/// The one-variable complex representation of the first `depth` digits.
pub fn repr1d(x: &PadicScalar, depth: usize) -> Result<(f64, f64)> {
    let prime = x.prime();
    supported(prime)?;
    let (start, digits) = mapping_digits(x, depth)?;
    let p = prime.value();
    let mut re = 0.0;
    let mut im = 0.0;
    match p {
        2 => {
            // w = 3i/5: w^n cycles through i^n with radius (3/5)^n
            let radius: f64 = 0.6f64.powi(start as i32);
            let mut wr = radius * rotate_i(start).0;
            let mut wi = radius * rotate_i(start).1;
            for (idx, &d) in digits.iter().enumerate() {
                let _ = idx;
                if d != 0 {
                    re += wr;
                    im += wi;
                }
                let (nr, ni) = (-0.6 * wi, 0.6 * wr);
                wr = nr;
                wi = ni;
            }
        }
        _ => {
            let base: f64 = if p == 3 { 0.5 } else { 0.3 };
            let mut weight = base.powi(start as i32);
            for &d in &digits {
                let angle = 2.0 * std::f64::consts::PI * (d as f64) / (p as f64);
                re += weight * angle.cos();
                im += weight * angle.sin();
                weight *= base;
            }
        }
    }
    Ok((re, im))
}

/// `i^n` as a unit complex number.
fn rotate_i(n: i64) -> (f64, f64) {
    match n.rem_euclid(4) {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// The two-variable real representation: componentwise digit sums with
/// contraction `c = 2/5, 2/9, 2/15`.
pub fn repr2d(x: &PadicScalar, y: &PadicScalar, depth: usize) -> Result<(f64, f64)> {
    let prime = x.prime();
    supported(prime)?;
    let c: f64 = match prime.value() {
        2 => 0.4,
        3 => 2.0 / 9.0,
        _ => 2.0 / 15.0,
    };
    let component = |s: &PadicScalar| -> Result<f64> {
        let (start, digits) = mapping_digits(s, depth)?;
        let mut weight = c.powi(start as i32);
        let mut acc = 0.0;
        for &d in &digits {
            acc += (d as f64) * weight;
            weight *= c;
        }
        Ok(acc)
    };
    Ok((component(x)?, component(y)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureMapping {
    OneDim,
    TwoDim,
}

/// A dataset row: a tuple of scalars (1 or 2 used by the mapping) plus a
/// class label.
pub type LabelledTuple = (Vec<PadicScalar>, String);

/// Renders the CSV content for a dataset: header `re,im,label` or
/// `X,Y,label`, rows in input order. Byte-identical across runs for
/// identical input.
pub fn render_figure(
    dataset: &[LabelledTuple],
    mapping: FigureMapping,
    depth: usize,
) -> Result<String> {
    let mut out = String::new();
    match mapping {
        FigureMapping::OneDim => out.push_str("re,im,label\n"),
        FigureMapping::TwoDim => out.push_str("X,Y,label\n"),
    }
    for (tuple, label) in dataset {
        let (a, b) = match mapping {
            FigureMapping::OneDim => {
                let first = tuple.first().ok_or_else(|| {
                    PadicError::ParseError("1d mapping needs one scalar per row".into())
                })?;
                repr1d(first, depth)?
            }
            FigureMapping::TwoDim => {
                if tuple.len() < 2 {
                    return Err(PadicError::ParseError(
                        "2d mapping needs two scalars per row".into(),
                    ));
                }
                repr2d(&tuple[0], &tuple[1], depth)?
            }
        };
        out.push_str(&format!("{a},{b},{label}\n"));
    }
    Ok(out)
}

/// Writes the rendered CSV to `path`.
pub fn export_figure(
    dataset: &[LabelledTuple],
    mapping: FigureMapping,
    depth: usize,
    path: &std::path::Path,
) -> Result<()> {
    let content = render_figure(dataset, mapping, depth)?;
    let mut file =
        std::fs::File::create(path).map_err(|e| PadicError::IoFailure(e.to_string()))?;
    file.write_all(content.as_bytes())
        .map_err(|e| PadicError::IoFailure(e.to_string()))?;
    Ok(())
}

/// The critical-set dataset: a deterministic grid of momentum values
/// labelled `rank0`, `rank1` or `regular`, plus the images of a range of
/// rank-1 parameters (the critical curve).
pub fn critical_set_dataset(prime: Prime, grid_radius: i64) -> Result<Vec<LabelledTuple>> {
    supported(prime)?;
    let trunc = SeriesTruncation::default_precision();
    let mut out = Vec::new();
    for j in -grid_radius..=grid_radius {
        for h in -grid_radius..=grid_radius {
            let jh = MomentumValue::from_integers(prime, j, h);
            let label = if h == 0 && (j == 1 || j == -1) {
                "rank0"
            } else {
                let params = crate::jc::critical_parameter(&jh, trunc)?;
                if params.iter().any(|p| p.critical_circle_nonempty) {
                    "rank1"
                } else {
                    "regular"
                }
            };
            out.push((vec![jh.j, jh.h], label.to_string()));
        }
    }
    // the rank-1 critical curve sampled through its parametrization
    for numer in [-3i64, -2, -1, 1, 2, 3] {
        for denom in [1i64, 2, 3] {
            if num_integer::gcd(numer, denom) != 1 || numer.abs() == denom {
                continue;
            }
            let a = PadicScalar::from_fraction(prime, numer, denom);
            let jh = crate::jc::critical_value(&a)?;
            out.push((vec![jh.j, jh.h], "rank1".to_string()));
        }
    }
    Ok(out)
}

/// The z-marginal fiber dataset at `(j, h)`: balanced residues mod `p^m`
/// labelled by the screened membership kind.
pub fn fiber_dataset(prime: Prime, jh: &MomentumValue, m: u32) -> Result<Vec<LabelledTuple>> {
    supported(prime)?;
    let cfg = CensusConfig::new(prime, m)?;
    let census = census_jc(&cfg, jh)?;
    Ok(census
        .z_entries
        .iter()
        .map(|entry| {
            (
                vec![PadicScalar::from_integer(prime, entry.z)],
                entry.kind.label().to_string(),
            )
        })
        .collect())
}

/// Rational points of the unit circle labelled by their rotation-sector
/// label.
pub fn circle_sector_dataset(prime: Prime, count: usize) -> Result<Vec<LabelledTuple>> {
    supported(prime)?;
    let mut out = Vec::new();
    let mut t = 0i64;
    while out.len() < count {
        let point = unit_circle_point(prime, &rat(t));
        // skip parameters that are not p-adic units on both coordinates
        if !point.x.is_zero_at_precision() || !point.y.is_zero_at_precision() {
            let label = match orbit_label(&point) {
                Ok(l) => format!("sector-{}-{}-{}", l.r, l.x_residue, l.y_residue),
                Err(_) => "origin".to_string(),
            };
            out.push((vec![point.x, point.y], label));
        }
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

    #[test]
    fn repr1d_examples() {
        let zero = PadicScalar::zero(p(5));
        assert_eq!(repr1d(&zero, 6).unwrap(), (0.0, 0.0));
        // single term e^(2 pi i / 5)
        let one = PadicScalar::one(p(5));
        let (re, im) = repr1d(&one, 6).unwrap();
        assert!((re - 0.30901699437494745).abs() < 1e-12);
        assert!((im - 0.9510565162951535).abs() < 1e-12);
        // p = 2: (3i/5)^0 = 1
        let one2 = PadicScalar::one(p(2));
        assert_eq!(repr1d(&one2, 4).unwrap(), (1.0, 0.0));
        let seven = PadicScalar::from_integer(p(7), 1);
        assert!(matches!(
            repr1d(&seven, 4),
            Err(PadicError::UnsupportedPrime(7))
        ));
    }

    #[test]
    fn repr2d_examples() {
        let pr = p(2);
        let one = PadicScalar::one(pr);
        let zero = PadicScalar::zero(pr);
        assert_eq!(repr2d(&one, &zero, 5).unwrap(), (1.0, 0.0));
        assert_eq!(repr2d(&zero, &zero, 5).unwrap(), (0.0, 0.0));
        let pr3 = p(3);
        let three = PadicScalar::from_integer(pr3, 3);
        let (x, _) = repr2d(&three, &PadicScalar::zero(pr3), 5).unwrap();
        assert!((x - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn depth_tail_bound() {
        // increasing depth moves repr2d by at most c^depth/(1-c)
        let pr = p(3);
        let x = PadicScalar::from_fraction(pr, 1, 2);
        let zero = PadicScalar::zero(pr);
        let (a6, _) = repr2d(&x, &zero, 6).unwrap();
        let (a12, _) = repr2d(&x, &zero, 12).unwrap();
        let c: f64 = 2.0 / 9.0;
        assert!((a6 - a12).abs() <= c.powi(6) / (1.0 - c) + 1e-12);
    }

    #[test]
    fn export_is_deterministic() {
        let pr = p(3);
        let dataset: Vec<LabelledTuple> = (0..10)
            .map(|n| {
                (
                    vec![PadicScalar::from_integer(pr, n)],
                    format!("class{}", n % 3),
                )
            })
            .collect();
        let a = render_figure(&dataset, FigureMapping::OneDim, 6).unwrap();
        let b = render_figure(&dataset, FigureMapping::OneDim, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("re,im,label\n"));
        assert_eq!(a.lines().count(), 11);
        // empty dataset: header only
        let empty = render_figure(&[], FigureMapping::TwoDim, 6).unwrap();
        assert_eq!(empty, "X,Y,label\n");
    }

    #[test]
    fn injectivity_p3_depth6() {
        // distinct residues mod 3^6 stay separated by more than 1e-9
        let pr = p(3);
        let points: Vec<(f64, f64)> = (0..729)
            .map(|n| repr1d(&PadicScalar::from_integer(pr, n), 6).unwrap())
            .collect();
        let mut min_dist = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                let dist = (dx * dx + dy * dy).sqrt();
                if dist < min_dist {
                    min_dist = dist;
                }
            }
        }
        assert!(min_dist > 1e-9, "minimum distance {min_dist}");
    }
}
