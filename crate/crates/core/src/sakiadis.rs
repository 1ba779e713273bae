//! Far-field series solution of the Sakiadis boundary layer.
//!
//! With the gauge `g = gamma * exp(-C eta / 2)` and `F(g) = f(eta) / C`, the
//! similarity equation `2 f''' + f f'' = 0` becomes an initial value problem
//! at `g = 0` whose power series `F = sum A_n g^n` has rational coefficients
//! and no free parameters. Reverting that series gives `g(F)`, and the three
//! remaining conditions at the wall (`f(0) = 0`, `f'(0) = 1`, `f''(0) = kappa`)
//! become sums of the reverted coefficients `b_n` evaluated at `F = 0`.

use dashu::rational::RBig;

use crate::error::{Error, Result};
use crate::scalar::{Precision, Real, RealScalar, Scalar};
use crate::series::{revert, TruncatedSeries};

pub const DEFAULT_TERMS: usize = 50;
pub const DEFAULT_DIGITS: usize = 40;
/// Extra digits carried through the closing sums.
pub const GUARD_DIGITS: usize = 10;

/// `A_0 ..= A_terms` of the far-field series `F(g) = sum A_n g^n`.
///
/// `A_0 = A_1 = 1` and
/// `A_{n+1} = 1/(n (n+1)^2) * sum_{j=1}^{n} j^2 A_j A_{n-j+1}`.
pub fn compute_a<T: Scalar>(terms: usize, ctx: &T::Context) -> Result<Vec<T>> {
    if terms < 1 {
        return Err(Error::InvalidTermCount(terms));
    }
    let mut a = vec![T::one(ctx), T::one(ctx)];
    for n in 1..terms {
        let mut sum = T::zero(ctx);
        for j in 1..=n {
            let weight = T::from_int((j * j) as i64, ctx);
            sum = sum + weight * a[j].clone() * a[n - j + 1].clone();
        }
        let scale = T::from_int((n * (n + 1) * (n + 1)) as i64, ctx);
        a.push(sum / scale);
    }
    Ok(a)
}

/// `F(g)` as a series about `g = 0`.
pub fn far_field_series<T: Scalar>(terms: usize, ctx: &T::Context) -> Result<TruncatedSeries<T>> {
    TruncatedSeries::from_coeffs(compute_a(terms, ctx)?)
}

/// Inverse series `g(F) = sum_{n=1}^{terms} b_n (F - 1)^n`.
pub fn compute_b<T: Scalar>(a: &TruncatedSeries<T>, terms: usize) -> Result<TruncatedSeries<T>> {
    if a.order() < terms {
        return Err(Error::TruncationTooLong {
            requested: terms,
            available: a.order(),
        });
    }
    revert(a, terms)
}

fn leading<T: Scalar>(b: &TruncatedSeries<T>, terms: usize) -> Result<TruncatedSeries<T>> {
    if terms < 1 {
        return Err(Error::InvalidTermCount(terms));
    }
    b.truncated(terms)
}

/// `gamma = g(F = 0) = sum_{n=1}^{terms} b_n (-1)^n`.
pub fn compute_gamma<T: Scalar>(b: &TruncatedSeries<T>, terms: usize) -> Result<T> {
    let b = leading(b, terms)?;
    let zero = T::zero(&b.center().context());
    Ok(b.eval(&zero))
}

/// `C = [(-2/gamma) sum n b_n (-1)^(n-1)]^(1/2)`, the positive root.
pub fn compute_c<T: RealScalar>(gamma: &T, b: &TruncatedSeries<T>, terms: usize) -> Result<T> {
    let b = leading(b, terms)?;
    let ctx = b.center().context();
    if !(gamma < &T::zero(&ctx)) {
        return Err(Error::Domain(format!(
            "gamma must be negative, got {}",
            gamma.to_f64()
        )));
    }
    // g'(0) = 1 / F'(gamma)
    let slope = b.eval_derivative(&T::zero(&ctx), 1)?;
    let radicand = T::from_int(-2, &ctx) / gamma.clone() * slope;
    if !(radicand > T::zero(&ctx)) {
        return Err(Error::NegativeRadicand(format!("{:e}", radicand.to_f64())));
    }
    Ok(radicand.sqrt())
}

/// `kappa = -C/2 + 2/(gamma C^3) sum n (n-1) b_n (-1)^n`.
pub fn compute_kappa<T: RealScalar>(
    gamma: &T,
    c: &T,
    b: &TruncatedSeries<T>,
    terms: usize,
) -> Result<T> {
    let b = leading(b, terms)?;
    let ctx = b.center().context();
    let zero = T::zero(&ctx);
    if !(gamma < &zero) || !(c > &zero) {
        return Err(Error::Domain(format!(
            "need gamma < 0 < C, got gamma = {}, C = {}",
            gamma.to_f64(),
            c.to_f64()
        )));
    }
    let curvature = b.eval_derivative(&zero, 2)?;
    let two = T::from_int(2, &ctx);
    let c3 = c.clone() * c.clone() * c.clone();
    Ok(-(c.clone() / two.clone()) + two / (gamma.clone() * c3) * curvature)
}

/// Exact rational `A_n` and `b_n`, shared by every truncation up to `terms`.
#[derive(Clone, Debug)]
pub struct Coefficients {
    a: TruncatedSeries<RBig>,
    b: TruncatedSeries<RBig>,
}

impl Coefficients {
    pub fn exact(terms: usize) -> Result<Self> {
        let a = far_field_series::<RBig>(terms, &())?;
        let b = compute_b(&a, terms)?;
        Ok(Coefficients { a, b })
    }

    pub fn terms(&self) -> usize {
        self.b.order()
    }

    pub fn a(&self) -> &TruncatedSeries<RBig> {
        &self.a
    }

    pub fn b(&self) -> &TruncatedSeries<RBig> {
        &self.b
    }

    /// Closes the problem with the first `terms` coefficients, rounded into `T`.
    pub fn solution<T: RealScalar>(
        &self,
        terms: usize,
        ctx: &T::Context,
    ) -> Result<SakiadisSolution<T>> {
        if terms < 1 || terms > self.terms() {
            return Err(Error::TruncationTooLong {
                requested: terms,
                available: self.terms(),
            });
        }
        let convert = |r: &RBig| T::from_rational(r, ctx);
        let a = self.a.truncated(terms)?.map(convert);
        let b = self.b.truncated(terms)?.map(convert);
        let gamma = compute_gamma(&b, terms)?;
        let c = compute_c(&gamma, &b, terms)?;
        let kappa = compute_kappa(&gamma, &c, &b, terms)?;
        let precision_digits = T::precision_digits(ctx);
        Ok(SakiadisSolution {
            a,
            b,
            gamma,
            c,
            kappa,
            terms,
            precision_digits,
        })
    }
}

/// `terms`-term solution carried at `digits` significant digits (plus guard digits).
pub fn solve(terms: usize, digits: usize) -> Result<SakiadisSolution<Real>> {
    if terms < 2 {
        return Err(Error::InvalidTermCount(terms));
    }
    let mut sol = Coefficients::exact(terms)?.solution(terms, &Precision(digits + GUARD_DIGITS))?;
    sol.precision_digits = Some(digits);
    Ok(sol)
}

/// Truncated series solution `f = C sum A_n (gamma exp(-C eta/2))^n` with its constants.
#[derive(Clone, Debug, PartialEq)]
pub struct SakiadisSolution<T: Scalar> {
    a: TruncatedSeries<T>,
    b: TruncatedSeries<T>,
    gamma: T,
    c: T,
    kappa: T,
    terms: usize,
    precision_digits: Option<usize>,
}

impl<T: RealScalar> SakiadisSolution<T> {
    /// Far-field coefficients `A_0 ..= A_N`.
    pub fn a(&self) -> &TruncatedSeries<T> {
        &self.a
    }

    /// Inverse coefficients `b_n` (index 0 is zero), centered at `F = 1`.
    pub fn b(&self) -> &TruncatedSeries<T> {
        &self.b
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    pub fn kappa(&self) -> &T {
        &self.kappa
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Requested significant digits (`None` is never produced for real backends).
    pub fn precision_digits(&self) -> Option<usize> {
        self.precision_digits
    }

    pub fn context(&self) -> T::Context {
        self.gamma.context()
    }

    /// Same solution in double precision.
    pub fn to_f64(&self) -> SakiadisSolution<f64> {
        let f = |x: &T| x.to_f64();
        SakiadisSolution {
            a: self.a.map(f),
            b: self.b.map(f),
            gamma: self.gamma.to_f64(),
            c: self.c.to_f64(),
            kappa: self.kappa.to_f64(),
            terms: self.terms,
            precision_digits: Some(self.precision_digits.map_or(17, |d| d.min(17))),
        }
    }

    /// `q = gamma exp(-C eta / 2)`.
    pub fn gauge(&self, eta: &T) -> T {
        let ctx = self.context();
        let rate = -(self.c.clone() / T::from_int(2, &ctx));
        self.gamma.clone() * (rate * eta.clone()).exp()
    }

    /// `d^k f / d eta^k` for `k <= 3`, term-wise: `C (-C/2)^k sum n^k A_n q^n`.
    pub fn eval_derivative(&self, eta: &T, k: u32) -> Result<T> {
        let ctx = self.context();
        if !(eta >= &T::zero(&ctx)) {
            return Err(Error::Domain(format!(
                "eta must be >= 0, got {}",
                eta.to_f64()
            )));
        }
        if k > 3 {
            return Err(Error::UnsupportedOrder(k));
        }
        let q = self.gauge(eta);
        let sum = self
            .a
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .fold(T::zero(&ctx), |acc, (n, an)| {
                let weight = T::from_int((n as i64).pow(k), &ctx);
                acc * q.clone() + weight * an.clone()
            });
        let factor = -(self.c.clone() / T::from_int(2, &ctx));
        let scale = (0..k).fold(self.c.clone(), |acc, _| acc * factor.clone());
        Ok(scale * sum)
    }

    pub fn eval_f(&self, eta: &T) -> Result<T> {
        self.eval_derivative(eta, 0)
    }

    pub fn eval_fp(&self, eta: &T) -> Result<T> {
        self.eval_derivative(eta, 1)
    }

    pub fn eval_fpp(&self, eta: &T) -> Result<T> {
        self.eval_derivative(eta, 2)
    }

    pub fn eval_fppp(&self, eta: &T) -> Result<T> {
        self.eval_derivative(eta, 3)
    }

    /// `2 f''' + f f''` at `eta`.
    pub fn ode_residual(&self, eta: &T) -> Result<T> {
        let two = T::from_int(2, &self.context());
        Ok(two * self.eval_fppp(eta)? + self.eval_f(eta)? * self.eval_fpp(eta)?)
    }
}

/// Errors of the truncated constants against a higher-order reference.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub terms: usize,
    pub gamma_error: Real,
    pub c_error: Real,
    pub kappa_error: Real,
}

/// Reference truncation used by [`convergence`].
pub const REFERENCE_TERMS: usize = 60;
pub const REFERENCE_DIGITS: usize = 50;

/// `|gamma_N - gamma_ref|`, `|C_N - C_ref|`, `|kappa_N - kappa_ref|` for `N = 2..=max_terms`.
///
/// The reference uses at least [`REFERENCE_TERMS`] terms (more when
/// `max_terms` gets close) at [`REFERENCE_DIGITS`] digits.
pub fn convergence(max_terms: usize, digits: usize) -> Result<Vec<ConvergenceRow>> {
    if max_terms < 2 {
        return Err(Error::InvalidTermCount(max_terms));
    }
    let reference_terms = REFERENCE_TERMS.max(max_terms + 10);
    let coefficients = Coefficients::exact(reference_terms)?;
    let reference_precision = Precision(REFERENCE_DIGITS.max(digits) + GUARD_DIGITS);
    let reference = coefficients.solution::<Real>(reference_terms, &reference_precision)?;
    let working = Precision(digits + GUARD_DIGITS);
    (2..=max_terms)
        .map(|terms| {
            let sol = coefficients.solution::<Real>(terms, &working)?;
            let err = |x: &Real, r: &Real| (x - r).abs().with_precision(Precision(digits));
            Ok(ConvergenceRow {
                terms,
                gamma_error: err(sol.gamma(), reference.gamma()),
                c_error: err(sol.c(), reference.c()),
                kappa_error: err(sol.kappa(), reference.kappa()),
            })
        })
        .collect()
}
