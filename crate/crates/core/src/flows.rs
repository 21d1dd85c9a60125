//! Formal power-series solutions of analytic initial value problems, and
//! the oscillator/spin rotation flow.
//!
//! The IVP solver is formal: coefficients are exact rationals obtained
//! from the degree-matching recurrence. Evaluating a flow at a p-adic time
//! goes through the series of `sin` and `cos` with their domain checks.
//!
//! Uniqueness only holds among analytic solutions: over `Q_p` there are
//! injective functions with zero derivative everywhere, so a p-adic flow
//! is never unique among merely differentiable functions. This module
//! computes the canonical analytic germ.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::quadratic::Mat2;
use crate::scalar::{rat, PadicScalar, SeriesTruncation};

/// A truncated univariate power series with exact rational coefficients;
/// `coefficients[i]` multiplies `t^i` and the length is `degree + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coefficients: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn new(coefficients: Vec<BigRational>) -> Self {
        assert!(!coefficients.is_empty());
        Self { coefficients }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coefficients: vec![BigRational::zero(); degree + 1],
        }
    }

    pub fn degree_bound(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coefficients
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn truncate(&self, degree: usize) -> Self {
        let mut c = self.coefficients.clone();
        c.truncate(degree + 1);
        c.resize(degree + 1, BigRational::zero());
        Self { coefficients: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        Self {
            coefficients: (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        }
    }

    /// Product truncated at the smaller degree bound.
    pub fn mul(&self, other: &Self) -> Self {
        let bound = self.degree_bound().min(other.degree_bound());
        let mut out = vec![BigRational::zero(); bound + 1];
        for i in 0..=bound {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(bound - i) {
                out[i + j] += self.coeff(i) * other.coeff(j);
            }
        }
        Self { coefficients: out }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }
}

/// A bivariate polynomial `f(x, y) = sum c[m][n] x^m y^n` in absolute
/// coordinates; the IVP solver recenters it internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePoly {
    /// `coeffs[m][n]` multiplies `x^m y^n`.
    coeffs: Vec<Vec<BigRational>>,
}

impl BivariatePoly {
    pub fn new(coeffs: Vec<Vec<BigRational>>) -> Self {
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[&[i64]]) -> Self {
        Self {
            coeffs: coeffs
                .iter()
                .map(|row| row.iter().map(|&c| rat(c)).collect())
                .collect(),
        }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn total_degree(&self) -> usize {
        let mut deg = 0;
        for (m, row) in self.coeffs.iter().enumerate() {
            for (n, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    deg = deg.max(m + n);
                }
            }
        }
        deg
    }

    /// Evaluates `f(x0 + t, y(t))` as a truncated series in `t`, where
    /// `y` is given as a series in `t`.
    fn compose(&self, x0: &BigRational, y: &TruncatedSeries, degree: usize) -> TruncatedSeries {
        let mut x_series = TruncatedSeries::zero(degree);
        x_series.coefficients[0] = x0.clone();
        if degree >= 1 {
            x_series.coefficients[1] = BigRational::one();
        }
        let y = y.truncate(degree);
        let mut acc = TruncatedSeries::zero(degree);
        // Horner over powers of x, with an inner Horner over powers of y
        for row in self.coeffs.iter().rev() {
            let mut row_series = TruncatedSeries::zero(degree);
            for c in row.iter().rev() {
                row_series = row_series.mul(&y);
                row_series.coefficients[0] += c;
            }
            acc = acc.mul(&x_series).add(&row_series).truncate(degree);
        }
        acc
    }
}

/// Solves `y' = f(x, y)`, `y(x0) = y0` as a formal power series in
/// `t = x - x0` up to the requested degree, by the coefficient recurrence
/// `(k+1) a_{k+1} = [t^k] f(x0 + t, y(t))`.
pub fn solve_ivp(
    f: &BivariatePoly,
    x0: &BigRational,
    y0: &BigRational,
    degree: usize,
) -> TruncatedSeries {
    let mut y = TruncatedSeries::zero(degree);
    y.coefficients[0] = y0.clone();
    for k in 0..degree {
        let rhs = f.compose(x0, &y, k);
        let next = rhs.coeff(k) / rat(k as i64 + 1);
        y.coefficients[k + 1] = next;
    }
    y
}

/// The oscillator flow `x' = 2y`, `y' = -2x` solved by its coefficient
/// recurrence `(i+1) a_{i+1} = 2 b_i`, `(i+1) b_{i+1} = -2 a_i`: the
/// series of `cos(2t) x0 + sin(2t) y0` and `-sin(2t) x0 + cos(2t) y0`.
pub fn oscillator_flow_series(
    x0: &BigRational,
    y0: &BigRational,
    degree: usize,
) -> (TruncatedSeries, TruncatedSeries) {
    let mut a = vec![BigRational::zero(); degree + 1];
    let mut b = vec![BigRational::zero(); degree + 1];
    a[0] = x0.clone();
    b[0] = y0.clone();
    for i in 0..degree {
        let div = rat(i as i64 + 1);
        a[i + 1] = rat(2) * &b[i] / &div;
        b[i + 1] = rat(-2) * &a[i] / &div;
    }
    (TruncatedSeries::new(a), TruncatedSeries::new(b))
}

/// Closed forms for the oscillator coefficients:
/// `a_{2i} = (-1)^i 2^{2i}/(2i)! x0`, `a_{2i+1} = (-1)^i 2^{2i+1}/(2i+1)! y0`,
/// `b_{2i} = (-1)^i 2^{2i}/(2i)! y0`, `b_{2i+1} = (-1)^{i+1} 2^{2i+1}/(2i+1)! x0`.
pub fn oscillator_closed_form(
    x0: &BigRational,
    y0: &BigRational,
    degree: usize,
) -> (TruncatedSeries, TruncatedSeries) {
    let mut a = vec![BigRational::zero(); degree + 1];
    let mut b = vec![BigRational::zero(); degree + 1];
    let mut power = BigRational::one(); // 2^n / n!
    for n in 0..=degree {
        if n > 0 {
            power = power * rat(2) / rat(n as i64);
        }
        let i = n / 2;
        let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
        if n % 2 == 0 {
            a[n] = &sign * &power * x0;
            b[n] = &sign * &power * y0;
        } else {
            a[n] = &sign * &power * y0;
            b[n] = -(&sign * &power * x0);
        }
    }
    (TruncatedSeries::new(a), TruncatedSeries::new(b))
}

/// The rotation matrix `[[cos t, -sin t], [sin t, cos t]]` at a p-adic
/// time `t` with `ord(t) >= d`; its determinant is 1 to working precision.
pub fn rotation_matrix(t: &PadicScalar, trunc: SeriesTruncation) -> Result<Mat2> {
    let cos = t.cos(trunc)?;
    let sin = t.sin(trunc)?;
    Ok(Mat2 {
        entries: [[cos.clone(), sin.neg()], [sin, cos]],
    })
}

/// Substitutes the flow series into `x(t)^2 + y(t)^2`; the flow preserves
/// the Hamiltonian iff all positive-degree coefficients vanish.
pub fn flow_energy_series(x: &TruncatedSeries, y: &TruncatedSeries) -> TruncatedSeries {
    x.mul(x).add(&y.mul(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::PadicError;
    use crate::prime::Prime;
    use crate::scalar::rat_frac;

    #[test]
    fn ivp_exponential() {
        // y' = y, y(0) = 1
        let f = BivariatePoly::from_i64(&[&[0, 1]]);
        let y = solve_ivp(&f, &rat(0), &rat(1), 4);
        assert_eq!(
            y.coefficients(),
            &[rat(1), rat(1), rat_frac(1, 2), rat_frac(1, 6), rat_frac(1, 24)]
        );
    }

    #[test]
    fn ivp_constant_and_linear() {
        let zero = BivariatePoly::zero();
        let y = solve_ivp(&zero, &rat(0), &rat(7), 3);
        assert_eq!(y.coefficients(), &[rat(7), rat(0), rat(0), rat(0)]);
        // y' = 2x, y(0) = 0 -> y = x^2
        let f = BivariatePoly::from_i64(&[&[0], &[2]]);
        let y = solve_ivp(&f, &rat(0), &rat(0), 4);
        assert_eq!(y.coefficients(), &[rat(0), rat(0), rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn oscillator_examples() {
        let (x, _) = oscillator_flow_series(&rat(3), &rat(5), 3);
        // [x0, 2 y0, -2 x0, -4 y0 / 3]
        assert_eq!(
            x.coefficients(),
            &[rat(3), rat(10), rat(-6), rat_frac(-20, 3)]
        );
        let (_, y) = oscillator_flow_series(&rat(1), &rat(0), 2);
        assert_eq!(y.coefficients(), &[rat(0), rat(-2), rat(0)]);
        let (x, y) = oscillator_flow_series(&rat(0), &rat(0), 5);
        assert!(x.coefficients().iter().all(|c| c.is_zero()));
        assert!(y.coefficients().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn recurrence_matches_closed_form() {
        let (x, y) = oscillator_flow_series(&rat_frac(2, 7), &rat(-3), 12);
        let (cx, cy) = oscillator_closed_form(&rat_frac(2, 7), &rat(-3), 12);
        assert_eq!(x, cx);
        assert_eq!(y, cy);
    }

    #[test]
    fn flow_preserves_energy() {
        let (x, y) = oscillator_flow_series(&rat(3), &rat(-2), 12);
        let e = flow_energy_series(&x, &y);
        assert_eq!(e.coeff(0), rat(13));
        for i in 1..=12 {
            assert!(e.coeff(i).is_zero(), "degree {i} coefficient nonzero");
        }
    }

    #[test]
    fn rotation_matrix_properties() {
        let pr = Prime::new(5).unwrap();
        let tr = SeriesTruncation::new(16).unwrap();
        let t0 = PadicScalar::zero(pr);
        let id = rotation_matrix(&t0, tr).unwrap();
        assert!(id.entries[0][0].is_exact());
        assert_eq!(id.entries[0][0].known_value(), rat(1));
        assert_eq!(id.entries[0][1].known_value(), rat(0));

        let t = PadicScalar::from_integer(pr, 5);
        let m = rotation_matrix(&t, tr).unwrap();
        let one = PadicScalar::one(pr);
        assert!(m.det().unwrap().agrees(&one).unwrap());
        // R(t) R(-t) = identity
        let m_inv = rotation_matrix(&t.neg(), tr).unwrap();
        let prod = m.mul(&m_inv).unwrap();
        assert!(prod.entries[0][0].agrees(&one).unwrap());
        assert!(prod.entries[0][1].is_zero_at_precision());

        let bad = PadicScalar::one(pr);
        assert!(matches!(
            rotation_matrix(&bad, tr),
            Err(PadicError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn rotation_preserves_level() {
        let pr = Prime::new(3).unwrap();
        let tr = SeriesTruncation::new(16).unwrap();
        let t = PadicScalar::from_integer(pr, 3);
        let m = rotation_matrix(&t, tr).unwrap();
        let p0 = crate::quadratic::PlanePoint::from_integers(pr, 2, 1);
        let k = p0.level().unwrap();
        let moved = m.apply(&p0).unwrap();
        assert!(moved.level().unwrap().agrees(&k).unwrap());
    }
}
