//! Saddle-point asymptotics for convolution families.
//!
//! For `F_n(x) = [z^n] exp(x f(z))` with `f(0) = 0`, `f'(0) = 1`, the
//! saddle point `s` solves `s f'(s) = n/x` and
//!
//! ```text
//!     Ftilde_n(x) = F(s)^x (n / e s)^n / n!
//! ```
//!
//! approximates `F_n(x)` when `y = n/x` stays modest. The ratio
//! `F_n / Ftilde_n` expands as an exact formal series
//! `sum c_ij y^i x^{-j}`; this module computes that expansion over any
//! coefficient ring (rational or symbolic), the auxiliary triangle of
//! associated Stirling numbers behind it, a two-term corrected
//! approximation, and float comparison reports.
//!
//! The float layer works in the log domain throughout so that values like
//! `F_128(1024)` never overflow; exact and float arithmetic only meet in
//! [`compare`].

use num_traits::{One, Signed, Zero};

use crate::coeff::{rat_ln, rat_to_f64, Coeff};
use crate::family::exp_family;
use crate::mpoly::MPoly;
use crate::poly::XPolynomial;
use crate::series::TruncatedSeries;
use crate::triangle::revert;
use crate::util::{binomial_int, factorial_rat};
use crate::{Error, Int, Rat, Result, Series};

/// Relative tolerance on `s f'(s) - n/x` for the Newton solve.
const SADDLE_TOL: f64 = 1e-12;

/// Triangle of the integers `p_{ji}` (associated Stirling numbers of the
/// first kind: permutations of `i + j` elements with no fixed points and
/// exactly `i` cycles), which represent `[k brack k-j]` as
/// `sum_i p_{ji} C(k, j+i)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PjiTriangle {
    rows: Vec<Vec<Int>>,
}

impl PjiTriangle {
    pub fn j_max(&self) -> usize {
        self.rows.len()
    }

    /// `p_{ji}` for `1 <= i <= j`; zero outside.
    pub fn entry(&self, j: usize, i: usize) -> Int {
        if j == 0 || i == 0 || i > j || j > self.rows.len() {
            Int::zero()
        } else {
            self.rows[j - 1][i - 1].clone()
        }
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }
}

/// Build the `p_{ji}` triangle through row `j_max` by the
/// derangement-style recurrence `d(m, i) = (m-1)(d(m-1, i) + d(m-2, i-1))`
/// with `p_{ji} = d(i+j, i)`, then verify the representation
/// `[k brack k-j] = sum_i p_{ji} C(k, j+i)` against the cycle-number
/// triangle for all `k <= 2 j_max + 2`.
pub fn p_triangle(j_max: usize) -> Result<PjiTriangle> {
    assert!(j_max >= 1);
    let m_max = 2 * j_max;
    // d[m][i], 0 <= i <= m
    let mut d = vec![vec![Int::zero(); m_max + 1]; m_max + 1];
    d[0][0] = Int::one();
    for m in 1..=m_max {
        for i in 1..=m {
            let prev = d[m - 1][i].clone();
            let prev2 = if m >= 2 {
                d[m - 2][i - 1].clone()
            } else {
                Int::zero()
            };
            d[m][i] = Int::from(m - 1) * (prev + prev2);
        }
    }
    let rows: Vec<Vec<Int>> = (1..=j_max)
        .map(|j| (1..=j).map(|i| d[i + j][i].clone()).collect())
        .collect();
    let tri = PjiTriangle { rows };

    // representation check against the unsigned cycle numbers
    let k_max = 2 * j_max + 2;
    let rising = crate::family::catalog_log_series("rising", k_max, None)?;
    let cycles = crate::triangle::ConvolutionTriangle::from_series(&rising, k_max)?;
    for j in 1..=j_max {
        for k in (j + 1)..=k_max {
            let mut sum = Rat::zero();
            for i in 1..=j {
                sum += Rat::from_integer(tri.entry(j, i) * binomial_int(k, j + i));
            }
            if sum != cycles.entry(k, k - j) {
                return Err(Error::InvalidArgument(format!(
                    "p-triangle representation failed at j={j}, k={k}"
                )));
            }
        }
    }
    Ok(tri)
}

/// Solve `s f'(s) = n/x` by damped Newton iteration, seeded with the
/// exact series reversion of `z f'(z)` evaluated at `y = n/x`.
/// Requires `f(0) = 0`, `f'(0) = 1`.
pub fn saddle_solve(f: &Series, n: usize, x: f64) -> Result<f64> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    if !f.coeff(1).is_one() {
        return Err(Error::LinearCoefficientNotOne);
    }
    let y = n as f64 / x;
    if y == 0.0 {
        return Ok(0.0);
    }
    let u = (&Series::z(f.order()) * &f.derivative()).truncated(f.order());
    // series seed s(y) = y(1 - f2 y + ...) from a low-order reversion
    let seed_order = f.order().min(12);
    let s_series = revert(&u.truncated(seed_order))?;
    let seed = s_series.to_f64().eval(&y);

    let uf = u.to_f64();
    let duf = uf.derivative();
    let tol = SADDLE_TOL * y.abs();
    let mut s = if seed.is_finite() && seed > 0.0 {
        seed
    } else {
        y
    };
    let mut residual = uf.eval(&s) - y;
    for _ in 0..64 {
        if residual.abs() <= tol {
            return Ok(s);
        }
        let slope = duf.eval(&s);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let mut step = residual / slope;
        // damping: halve the step until the residual decreases
        let mut improved = false;
        for _ in 0..40 {
            let candidate = s - step;
            let r = uf.eval(&candidate) - y;
            if r.abs() < residual.abs() {
                s = candidate;
                residual = r;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if residual.abs() <= tol {
        Ok(s)
    } else {
        Err(Error::SaddleDiverged { last: s, residual })
    }
}

/// `ln Ftilde_n(x)` for a saddle point `s` already in hand.
pub fn approx_ln(f: &Series, n: usize, x: f64, s: f64) -> f64 {
    let fs = f.to_f64().eval(&s);
    let nf = n as f64;
    x * fs + nf * (nf.ln() - 1.0 - s.ln()) - rat_ln(&factorial_rat(n))
}

/// The saddle-point approximation `Ftilde_n(x) = F(s)^x (n/es)^n / n!`,
/// evaluated in the log domain.
pub fn approx(f: &Series, n: usize, x: f64) -> Result<f64> {
    let s = saddle_solve(f, n, x)?;
    Ok(approx_ln(f, n, x, s).exp())
}

/// The two-term correction factor
/// `(1 + s^2 d2/y)^{-1/2} + (s/y)^3 A / (x (1 + s^2 d2/y)^{7/2})`
/// with `d_k = f^(k)(s)` and
/// `A = s^3 d2^3/(12 y) - 3 s d2^2/4 - s^2 d2 d3/2 - 5 s^3 d3^2/24
///    + y d3/3 + s^3 d2 d4/8 + s y d4/8`.
pub fn correction_factor(f: &Series, n: usize, x: f64, s: f64) -> f64 {
    let y = n as f64 / x;
    let d2s = f.derivative().derivative();
    let d3s = d2s.derivative();
    let d4s = d3s.derivative();
    let d2 = d2s.to_f64().eval(&s);
    let d3 = d3s.to_f64().eval(&s);
    let d4 = d4s.to_f64().eval(&s);
    let base = 1.0 + s * s * d2 / y;
    let a = s.powi(3) * d2.powi(3) / (12.0 * y)
        - 0.75 * s * d2 * d2
        - 0.5 * s * s * d2 * d3
        - 5.0 / 24.0 * s.powi(3) * d3 * d3
        + y * d3 / 3.0
        + 0.125 * s.powi(3) * d2 * d4
        + 0.125 * s * y * d4;
    base.powf(-0.5) + (s / y).powi(3) * a / (x * base.powf(3.5))
}

/// Saddle-point approximation with the `O(x^{-1})` correction applied.
pub fn corrected_approx(f: &Series, n: usize, x: f64) -> Result<f64> {
    let s = saddle_solve(f, n, x)?;
    Ok((approx_ln(f, n, x, s) + correction_factor(f, n, x, s).ln()).exp())
}

/// Exact `F_n(x0)` for a rational evaluation point, via
/// `[z^n] exp(x0 f(z))`.
pub fn exact_coefficient(f: &Series, n: usize, x0: &Rat) -> Result<Rat> {
    if f.order() < n {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small for n = {n}",
            f.order()
        )));
    }
    Ok(f.truncated(n).scale_rat(x0).exp()?.coeff(n))
}

/// Exact truncation of the ratio `F_n(x)/Ftilde_n(x)` as a bivariate
/// series `sum c[i][j] y^i x^{-j}`.
#[derive(Clone, PartialEq, Debug)]
pub struct RatioSeries<T> {
    c: Vec<Vec<T>>,
}

impl<T: Coeff> RatioSeries<T> {
    pub fn max_i(&self) -> usize {
        self.c.len() - 1
    }

    pub fn max_j(&self) -> usize {
        self.c[0].len() - 1
    }

    /// Coefficient of `y^i x^{-j}`.
    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.c
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(T::zero)
    }
}

impl RatioSeries<Rat> {
    /// Evaluate the truncation at a float point `(y, 1/x)`.
    pub fn eval_f64(&self, y: f64, x: f64) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.c.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                acc += rat_to_f64(c) * y.powi(i as i32) * x.powi(-(j as i32));
            }
        }
        acc
    }

    /// Evaluate only the pure-`y` column through `i <= i_max` (the
    /// `x -> infinity` limit of the ratio).
    pub fn eval_y_only(&self, y: f64, i_max: usize) -> f64 {
        self.c
            .iter()
            .take(i_max + 1)
            .enumerate()
            .map(|(i, row)| rat_to_f64(&row[0]) * y.powi(i as i32))
            .sum()
    }
}

/// Product of dense polynomials in `w` whose coefficients are `y`-series.
fn wpoly_mul<T: Coeff>(
    a: &[TruncatedSeries<T>],
    b: &[TruncatedSeries<T>],
    w_max: usize,
    y_order: usize,
) -> Vec<TruncatedSeries<T>> {
    let mut out = vec![TruncatedSeries::<T>::zero_series(y_order); w_max + 1];
    for (i, ai) in a.iter().enumerate().take(w_max + 1) {
        if ai.is_zero_series() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > w_max {
                break;
            }
            if bj.is_zero_series() {
                continue;
            }
            out[i + j] = &out[i + j] + &ai.mul_series(bj);
        }
    }
    out
}

/// Shared exact ingredients of the ratio expansions: the reverted saddle
/// series as `y`-series over `T`.
struct SaddleSeries<T> {
    /// `sigma(y) = s/y`, truncated at the working `y` order.
    sigma: TruncatedSeries<T>,
    /// `s(y) = y sigma(y)`, same truncation (constant term zero).
    s: TruncatedSeries<T>,
}

fn saddle_series<T: Coeff>(f: &TruncatedSeries<T>, y_order: usize) -> Result<SaddleSeries<T>> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    if !f.coeff(1).is_one() {
        return Err(Error::LinearCoefficientNotOne);
    }
    let u = (&TruncatedSeries::<T>::z(f.order()) * &f.derivative()).truncated(f.order());
    let s_full = revert(&u.truncated(y_order + 1))?;
    let sigma = s_full.shift_down(1).truncated(y_order);
    let s = s_full.truncated(y_order);
    Ok(SaddleSeries { sigma, s })
}

/// Exact bivariate truncation of `F_n/Ftilde_n = sum_j P_j/(-n)^j` as a
/// series in `y` and `x^{-1}`, with the saddle point eliminated through
/// the reverted series `s(y)`. Works over any coefficient ring; with
/// symbolic coefficients (`f_2, f_3, ...` as atoms) it reproduces the
/// general formulas, e.g. `c[1][0] = -f_2/2` and
/// `c[2][0] = (11 f_2^2 - 4 f_3)/8`. Symbolic use is practical for
/// `max_i <= 4`; the term count grows quickly beyond that.
///
/// Requires `f.order() >= 2 (max_i + 2 max_j) + max_i`.
pub fn ratio_series<T: Coeff>(
    f: &TruncatedSeries<T>,
    max_i: usize,
    max_j: usize,
) -> Result<RatioSeries<T>> {
    let j_max = max_i + 2 * max_j;
    let l_max = 2 * j_max;
    let needed = l_max + max_i;
    if f.order() < needed {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small; ratio_series(max_i={max_i}, max_j={max_j}) needs {needed}",
            f.order()
        )));
    }

    let mut c = vec![vec![T::zero(); max_j + 1]; max_i + 1];
    c[0][0] = T::one();
    if j_max == 0 {
        return Ok(RatioSeries { c });
    }

    let SaddleSeries { sigma, s } = saddle_series(f, max_i)?;

    // d_m(y) = f^(m)(s(y)) for 2 <= m <= l_max
    let mut deriv = f.derivative();
    let mut d = vec![TruncatedSeries::<T>::zero_series(max_i); l_max + 1];
    for dm in d.iter_mut().skip(2) {
        deriv = deriv.derivative();
        *dm = deriv.truncated(max_i.max(1)).compose(&s)?.truncated(max_i);
    }

    // g(w) = sum_{m>=2} d_m w^m / m!; G[k][l] = [w^l] g^k / k!
    let g: Vec<TruncatedSeries<T>> = (0..=l_max)
        .map(|m| {
            if m >= 2 {
                d[m].scale_rat(&factorial_rat(m).recip())
            } else {
                TruncatedSeries::zero_series(max_i)
            }
        })
        .collect();
    let mut g_table = Vec::with_capacity(j_max + 1);
    let mut unit = vec![TruncatedSeries::<T>::zero_series(max_i); l_max + 1];
    unit[0] = TruncatedSeries::one_series(max_i);
    g_table.push(unit);
    for k in 1..=j_max {
        let mut next = wpoly_mul(&g_table[k - 1], &g, l_max, max_i);
        for entry in next.iter_mut() {
            *entry = entry.scale_rat(&Rat::new(Int::one(), Int::from(k)));
        }
        g_table.push(next);
    }

    // sigma powers up to 2 j_max
    let mut sigma_pows = vec![TruncatedSeries::<T>::one_series(max_i)];
    for m in 1..=l_max {
        sigma_pows.push(sigma_pows[m - 1].mul_series(&sigma));
    }

    let pji = p_triangle(j_max)?;

    // assemble: P_j/(-n)^j = sum_{i<=j} (-1)^j p_{ji} y^i sigma^{j+i}
    //                        * sum_k G[k][j+i] x^{k-j}
    for j in 1..=j_max {
        let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
        for i in 1..=j.min(max_i) {
            let p = Rat::from_integer(pji.entry(j, i));
            let l = j + i;
            for (k, gk) in g_table.iter().enumerate().take(j + 1) {
                if 2 * k > l {
                    continue;
                }
                let jj = j - k;
                if jj > max_j {
                    continue;
                }
                let series_y = sigma_pows[l].mul_series(&gk[l]);
                let weight = &sign * &p;
                for dpow in 0..=(max_i - i) {
                    let v = series_y.coeff(dpow);
                    if v.is_zero() {
                        continue;
                    }
                    c[i + dpow][jj] = c[i + dpow][jj].clone() + v.scale_rat(&weight);
                }
            }
        }
    }
    Ok(RatioSeries { c })
}

/// The intermediate expansion `F_n/Ftilde_n = sum a[i][j] n^i x^{-j}`,
/// computed by the direct route: `F_n n!/x^n = 1 + sum_k f_{n(n-k)} x^{-k}`
/// with the extended-entry polynomials in `n`, divided by
/// `Ftilde_n n!/x^n = exp(n h(y))` at `y = n/x`. Returns the dense matrix
/// `a[i][j]` for `j <= max_j`, `i <= 2 max_j`; the structural fact the
/// ratio series rests on is that `a[i][j] = 0` whenever `i > j`.
///
/// Requires `f.order() >= 2 max_j + 1`.
pub fn ratio_n_expansion<T: Coeff>(f: &TruncatedSeries<T>, max_j: usize) -> Result<Vec<Vec<T>>> {
    let needed = 2 * max_j + 1;
    if f.order() < needed {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small; ratio_n_expansion(max_j={max_j}) needs {needed}",
            f.order()
        )));
    }
    let SaddleSeries { sigma, s } = saddle_series(f, max_j)?;
    let fhat = f.shift_down(1).truncated(2 * max_j);

    // h(y) = sigma Fhat(s) - 1 - ln sigma
    let fhat_of_s = fhat.truncated(max_j.max(1)).compose(&s)?.truncated(max_j);
    let h =
        &(&sigma.mul_series(&fhat_of_s) - &TruncatedSeries::one_series(max_j)) - &sigma.log()?;

    type PolySeries<T> = TruncatedSeries<XPolynomial<T>>;
    // -n h(nv) as a v-series with polynomial-in-n coefficients
    let minus_nh = PolySeries::<T>::from_coeffs(
        (0..=max_j)
            .map(|i| XPolynomial::monomial(-h.coeff(i), i + 1))
            .collect(),
    );
    let inv_ftilde = minus_nh.exp()?;

    // Phi(v) = 1 + sum_k n(n-1)...(n-k+1) Fhat_k(n-k) v^k
    let fam_hat = exp_family(&fhat.log()?)?;
    let phi = PolySeries::<T>::from_coeffs(
        (0..=max_j)
            .map(|k| {
                if k == 0 {
                    XPolynomial::one()
                } else {
                    XPolynomial::falling_factorial(k) * fam_hat[k].shift(&T::from_int(-(k as i64)))
                }
            })
            .collect(),
    );

    let ratio = phi.mul_series(&inv_ftilde);
    let mut a = vec![vec![T::zero(); max_j + 1]; 2 * max_j + 1];
    for j in 0..=max_j {
        let poly = ratio.coeff(j);
        for (i, row) in a.iter_mut().enumerate() {
            row[j] = poly.coeff(i);
        }
    }
    Ok(a)
}

/// Log series with the coefficients `f_2 .. f_{num_atoms+1}` kept
/// symbolic: `z + a_0 z^2/2! + a_1 z^3/3! + ...`, zero beyond, truncated
/// at `order`.
pub fn symbolic_log_series(num_atoms: usize, order: usize) -> TruncatedSeries<MPoly> {
    let mut coeffs = vec![MPoly::zero(); order + 1];
    coeffs[1] = MPoly::one();
    for a in 0..num_atoms {
        let j = a + 2;
        if j <= order {
            coeffs[j] = MPoly::atom(a as u32).scale_rat(&factorial_rat(j).recip());
        }
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Floating comparison record for one `(n, x)` pair.
#[derive(Clone, Debug)]
pub struct SaddleReport {
    pub n: usize,
    pub x: f64,
    /// `y = n/x` exactly as computed.
    pub y: f64,
    /// Saddle point with `s f'(s) = n/x` to relative `1e-12`.
    pub s: f64,
    /// `Ftilde_n(x)` (may overflow to infinity; the ratio is always
    /// computed in the log domain).
    pub approx: f64,
    /// Exact `F_n(x)` rounded to float (may overflow).
    pub exact: f64,
    /// `exact / approx`, log-domain.
    pub ratio: f64,
    /// Truncated ratio series evaluated at `(y, 1/x)`.
    pub ratio_series_estimate: f64,
    /// `approx` times the two-term correction factor.
    pub corrected: f64,
    /// The correction factor itself (kept separate so corrected/exact is
    /// representable even when the values overflow).
    pub correction_factor: f64,
}

impl SaddleReport {
    /// `corrected / exact`, computed without overflow.
    pub fn corrected_over_exact(&self) -> f64 {
        self.correction_factor / self.ratio
    }

    pub fn tsv_header() -> &'static str {
        "n\tx\ty\ts\texact\tapprox\tcorrected\tratio\tpredicted_ratio"
    }

    pub fn to_tsv_row(&self) -> String {
        format!(
            "{}\t{:.6e}\t{:.6e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}",
            self.n,
            self.x,
            self.y,
            self.s,
            self.exact,
            self.approx,
            self.corrected,
            self.ratio,
            self.ratio_series_estimate
        )
    }

    pub fn to_json(&self) -> String {
        format!(
            "{{\"n\": {}, \"x\": {:e}, \"y\": {:e}, \"s\": {:e}, \"exact\": {:e}, \"approx\": {:e}, \"corrected\": {:e}, \"ratio\": {:e}, \"predicted_ratio\": {:e}}}",
            self.n,
            self.x,
            self.y,
            self.s,
            self.exact,
            self.approx,
            self.corrected,
            self.ratio,
            self.ratio_series_estimate
        )
    }
}

/// Assemble a full comparison report: exact value (from the exact layer),
/// saddle approximation, measured ratio, ratio-series prediction at
/// `(max_i, max_j) = (3, 1)`, and corrected approximation.
///
/// Requires `f.order() >= max(n, 13)` and `x > 0`.
pub fn compare(f: &Series, n: usize, x: f64) -> Result<SaddleReport> {
    if n == 0 || x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidArgument(
            "compare needs n >= 1 and x > 0".into(),
        ));
    }
    if f.order() < n.max(13) {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small; compare needs max(n, 13) = {}",
            f.order(),
            n.max(13)
        )));
    }
    let y = n as f64 / x;
    let s = saddle_solve(f, n, x)?;
    let ln_approx = approx_ln(f, n, x, s);
    let x_rat =
        Rat::from_float(x).ok_or_else(|| Error::InvalidArgument("x is not finite".into()))?;
    let exact_rat = exact_coefficient(f, n, &x_rat)?;
    let ratio = if exact_rat.is_zero() {
        0.0
    } else {
        let magnitude = (rat_ln(&exact_rat.abs()) - ln_approx).exp();
        if exact_rat.is_negative() {
            -magnitude
        } else {
            magnitude
        }
    };
    let rs = ratio_series(&f.truncated(13), 3, 1)?;
    let estimate = rs.eval_f64(y, x);
    let corr = correction_factor(f, n, x, s);
    Ok(SaddleReport {
        n,
        x,
        y,
        s,
        approx: ln_approx.exp(),
        exact: rat_to_f64(&exact_rat),
        ratio,
        ratio_series_estimate: estimate,
        corrected: (ln_approx + corr.ln()).exp(),
        correction_factor: corr,
    })
}
