//! Truncated power series: evaluation, negative integer powers through the
//! J.C.P. Miller recurrence, Lagrange reversion, and root-test radius
//! estimates.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default number of trailing coefficients inspected by the root test.
pub const DEFAULT_ROOT_TEST_WINDOW: usize = 15;

/// Coefficients of `sum c[n] (x - center)^n` for `n = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T: Scalar> {
    center: T,
    coeffs: Vec<T>,
    precision_digits: Option<usize>,
}

impl<T: Scalar> TruncatedSeries<T> {
    pub fn new(center: T, coeffs: Vec<T>) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::EmptySeries)?;
        let precision_digits = T::precision_digits(&first.context());
        Ok(TruncatedSeries {
            center,
            coeffs,
            precision_digits,
        })
    }

    /// Series about zero.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::EmptySeries)?;
        let center = T::zero(&first.context());
        Self::new(center, coeffs)
    }

    pub fn center(&self) -> &T {
        &self.center
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    /// Truncation order `N = len - 1`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn precision_digits(&self) -> Option<usize> {
        self.precision_digits
    }

    fn ctx(&self) -> T::Context {
        self.coeffs[0].context()
    }

    /// Keeps coefficients up to and including `order`.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::TruncationTooLong {
                requested: order,
                available: self.order(),
            });
        }
        Ok(TruncatedSeries {
            center: self.center.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
            precision_digits: self.precision_digits,
        })
    }

    /// Converts every coefficient (and the center) into another backend.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        let coeffs: Vec<U> = self.coeffs.iter().map(&f).collect();
        let precision_digits = U::precision_digits(&coeffs[0].context());
        TruncatedSeries {
            center: f(&self.center),
            coeffs,
            precision_digits,
        }
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: &T) -> T {
        let h = x.clone() - self.center.clone();
        horner(self.coeffs.iter().rev().cloned(), &h, &self.ctx())
    }

    /// First or second derivative of the truncated series at `x`.
    pub fn eval_derivative(&self, x: &T, k: u32) -> Result<T> {
        if !(1..=2).contains(&k) {
            return Err(Error::UnsupportedOrder(k));
        }
        let ctx = self.ctx();
        let h = x.clone() - self.center.clone();
        let k = k as usize;
        // coefficient of h^(n-k) is n (n-1) .. (n-k+1) c[n]
        let terms = self.coeffs.iter().enumerate().skip(k).rev().map(|(n, c)| {
            let falling: i64 = (0..k).map(|i| (n - i) as i64).product();
            T::from_int(falling, &ctx) * c.clone()
        });
        Ok(horner(terms, &h, &ctx))
    }
}

fn horner<T: Scalar>(rev_coeffs: impl Iterator<Item = T>, h: &T, ctx: &T::Context) -> T {
    rev_coeffs.fold(T::zero(ctx), |acc, c| acc * h.clone() + c)
}

/// Coefficient `a_n`, or zero past the end of the series.
fn coeff_or_zero<T: Scalar>(a: &TruncatedSeries<T>, n: usize, ctx: &T::Context) -> T {
    a.coeff(n).cloned().unwrap_or_else(|| T::zero(ctx))
}

fn leading_coefficient<T: Scalar>(a: &TruncatedSeries<T>) -> Result<T> {
    match a.coeff(1) {
        Some(a1) if !a1.is_negligible() => Ok(a1.clone()),
        _ => Err(Error::ZeroLeadingCoefficient),
    }
}

/// One step of the Miller recurrence for `(sum a_{j+1} x^j)^(-m)`:
///
/// `D[n] = -1/(n a1) * sum_{j=1}^{n} (j m + n - j) a_{j+1} D[n-j]`
fn miller_next<T: Scalar>(
    a: &TruncatedSeries<T>,
    a1: &T,
    m: i64,
    n: usize,
    previous: impl Fn(usize) -> T,
    ctx: &T::Context,
) -> T {
    let mut sum = T::zero(ctx);
    for j in 1..=n {
        let Some(aj) = a.coeff(j + 1) else { break };
        if aj.is_negligible() {
            continue;
        }
        let weight = T::from_int(j as i64 * m + (n - j) as i64, ctx);
        sum = sum + weight * aj.clone() * previous(n - j);
    }
    -(sum / (T::from_int(n as i64, ctx) * a1.clone()))
}

fn inverse_power<T: Scalar>(a1: &T, m: i64, ctx: &T::Context) -> T {
    let power = (0..m).fold(T::one(ctx), |acc, _| acc * a1.clone());
    T::one(ctx) / power
}

/// Coefficients `D_{0..=order, m}` of `(sum_{n>=0} a_{n+1} x^n)^(-m)`.
///
/// Only `a_1, a_2, ...` of the input are used; `a_0` is ignored.
pub fn series_power_neg<T: Scalar>(
    a: &TruncatedSeries<T>,
    m: u32,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let a1 = leading_coefficient(a)?;
    let ctx = a1.context();
    let m = i64::from(m.max(1));
    let mut d = Vec::with_capacity(order + 1);
    d.push(inverse_power(&a1, m, &ctx));
    for n in 1..=order {
        let next = miller_next(a, &a1, m, n, |k| d[k].clone(), &ctx);
        d.push(next);
    }
    TruncatedSeries::from_coeffs(d)
}

/// Table of Miller coefficients `D_{n,m}` for `0 <= n < rows`, `1 <= m <= max_m`.
///
/// Rows are filled in increasing `n` across every stored `m`, so that each
/// diagonal entry `D_{n,n+1}` finds the lower rows of its own column ready.
#[derive(Clone, Debug)]
pub struct ReversionTable<'a, T: Scalar> {
    source: &'a TruncatedSeries<T>,
    // d[n][m - 1]
    d: Vec<Vec<T>>,
}

impl<'a, T: Scalar> ReversionTable<'a, T> {
    pub fn build(source: &'a TruncatedSeries<T>, rows: usize, max_m: usize) -> Result<Self> {
        let a1 = leading_coefficient(source)?;
        let ctx = a1.context();
        let mut d: Vec<Vec<T>> = Vec::with_capacity(rows);
        if rows > 0 {
            d.push(
                (1..=max_m)
                    .map(|m| inverse_power(&a1, m as i64, &ctx))
                    .collect(),
            );
        }
        for n in 1..rows {
            let row = (1..=max_m)
                .map(|m| miller_next(source, &a1, m as i64, n, |k| d[k][m - 1].clone(), &ctx))
                .collect();
            d.push(row);
        }
        Ok(ReversionTable { source, d })
    }

    pub fn source(&self) -> &TruncatedSeries<T> {
        self.source
    }

    pub fn rows(&self) -> usize {
        self.d.len()
    }

    pub fn max_m(&self) -> usize {
        self.d.first().map_or(0, Vec::len)
    }

    /// `D_{n,m}`, if stored.
    pub fn get(&self, n: usize, m: usize) -> Option<&T> {
        if m == 0 {
            return None;
        }
        self.d.get(n)?.get(m - 1)
    }

    /// `b_{n+1} = D_{n,n+1} / (n+1)`.
    pub fn inverse_coefficient(&self, n_plus_1: usize) -> Option<T> {
        let n = n_plus_1.checked_sub(1)?;
        let d = self.get(n, n_plus_1)?;
        Some(d.clone() / T::from_int(n_plus_1 as i64, &d.context()))
    }
}

/// Compositional inverse of `y = sum a_n x^n` as `x = sum_{n=1}^{order} b_n (y - a_0)^n`.
///
/// The result is centered at `a_0` with a zero constant term.
pub fn revert<T: Scalar>(a: &TruncatedSeries<T>, order: usize) -> Result<TruncatedSeries<T>> {
    if order == 0 {
        return Err(Error::InvalidTermCount(order));
    }
    let table = ReversionTable::build(a, order, order)?;
    let ctx = a.ctx();
    let mut b = Vec::with_capacity(order + 1);
    b.push(T::zero(&ctx));
    for n in 1..=order {
        b.push(table.inverse_coefficient(n).expect("table covers the diagonal"));
    }
    let center = coeff_or_zero(a, 0, &ctx);
    TruncatedSeries::new(center, b)
}

/// `(n, |c_n|^(-1/n))` for every nonzero coefficient with `n >= 1`.
pub fn root_test_terms<T: Scalar>(s: &TruncatedSeries<T>) -> Vec<(usize, f64)> {
    s.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(n, c)| {
            let magnitude = c.to_f64().abs();
            (magnitude > 0.0 && magnitude.is_finite())
                .then(|| (n, (-magnitude.ln() / n as f64).exp()))
        })
        .collect()
}

fn tail_window<T: Scalar>(s: &TruncatedSeries<T>, tail: usize) -> Result<(Vec<(usize, f64)>, usize)> {
    let terms = root_test_terms(s);
    if tail == 0 || terms.len() < tail {
        return Err(Error::InsufficientTerms {
            needed: tail.max(1),
            found: terms.len(),
        });
    }
    let start = terms.len() - tail;
    Ok((terms, start))
}

/// Plain average of `|c_n|^(-1/n)` over the last `tail` usable coefficients.
pub fn root_test_tail_mean<T: Scalar>(s: &TruncatedSeries<T>, tail: usize) -> Result<f64> {
    let (terms, start) = tail_window(s, tail)?;
    Ok(terms[start..].iter().map(|&(_, r)| r).sum::<f64>() / tail as f64)
}

/// Root-test radius of convergence from the last `tail` usable coefficients.
///
/// `|c_n|^(-1/n)` approaches the radius like `R + c/n`. When the sequence
/// oscillates (complex singularities), only its local minima trace the
/// limit superior of `|c_n|^(1/n)`; those are used if there are at least two
/// in the window, otherwise every point in the window is. A least-squares
/// line in `1/n` is extrapolated to `n -> infinity`.
pub fn estimate_radius_root_test<T: Scalar>(s: &TruncatedSeries<T>, tail: usize) -> Result<f64> {
    let (terms, start) = tail_window(s, tail)?;
    let window = &terms[start..];
    let minima: Vec<(usize, f64)> = (start.max(1)..terms.len() - 1)
        .filter(|&i| terms[i].1 <= terms[i - 1].1 && terms[i].1 <= terms[i + 1].1)
        .map(|i| terms[i])
        .collect();
    let points = if minima.len() >= 2 { &minima[..] } else { window };
    Ok(extrapolate_inverse_n(points))
}

/// Intercept of the least-squares line `r = R + c / n`.
fn extrapolate_inverse_n(points: &[(usize, f64)]) -> f64 {
    if points.len() == 1 {
        return points[0].1;
    }
    let k = points.len() as f64;
    let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(n, r)| {
        let x = 1.0 / n as f64;
        (acc.0 + x, acc.1 + r, acc.2 + x * x, acc.3 + x * r)
    });
    let det = k * sxx - sx * sx;
    if det.abs() <= f64::EPSILON * k * sxx {
        return sy / k;
    }
    (sxx * sy - sx * sxy) / det
}
