//! Convolution matrices and their algebra.
//!
//! The convolution matrix of `f` is the lower-triangular array
//! `f_{nk} = n! [x^k] F_n(x)` for `1 <= k <= n`, with `F_n(x) = [z^n]
//! exp(x f(z))`. Matrix multiplication corresponds to composing the
//! exponent series (`FG` belongs to `g(f(z))`), fractional matrix powers
//! to fractional iteration of `f`, and the matrix inverse to series
//! reversion; Lagrange's inversion theorem gives the inverse entries in
//! closed form. Entries extend off the triangle as polynomials
//! `f_{y(y-k)}`, which is where the Stirling duality lives.

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::family::exp_family;
use crate::poly::{binomial_poly, binomial_poly_shifted};
use crate::series::TruncatedSeries;
use crate::util::{binomial_int, factorial_rat};
use crate::{rat_int, Error, Rat, Result, Series, XPoly};

/// Plain lower-triangular rational array with rows `1 ..= n_max`; row `n`
/// stores entries for columns `1 ..= n`. No convolution invariants:
/// matrix logarithms and other derived arrays also use this shape.
#[derive(Clone, PartialEq, Debug)]
pub struct LowerTriangle {
    rows: Vec<Vec<Rat>>,
}

impl LowerTriangle {
    pub fn zero(n_max: usize) -> Self {
        assert!(n_max >= 1, "triangle needs at least one row");
        Self {
            rows: (1..=n_max).map(|n| vec![Rat::zero(); n]).collect(),
        }
    }

    pub fn identity(n_max: usize) -> Self {
        let mut t = Self::zero(n_max);
        for n in 1..=n_max {
            t.set(n, n, Rat::one());
        }
        t
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        assert!(!rows.is_empty());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(
                row.len(),
                i + 1,
                "row {} must have {} entries",
                i + 1,
                i + 1
            );
        }
        Self { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Entry at 1-based `(n, k)`; zero outside the triangle.
    pub fn entry(&self, n: usize, k: usize) -> Rat {
        if n == 0 || k == 0 || k > n || n > self.n_max() {
            Rat::zero()
        } else {
            self.rows[n - 1][k - 1].clone()
        }
    }

    pub fn set(&mut self, n: usize, k: usize, value: Rat) {
        self.rows[n - 1][k - 1] = value;
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[Rat] {
        &self.rows[n - 1]
    }

    pub fn first_column(&self) -> Vec<Rat> {
        self.rows.iter().map(|r| r[0].clone()).collect()
    }

    /// Lower-triangular matrix product.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_max(), other.n_max(), "triangle sizes must match");
        let n_max = self.n_max();
        let mut out = Self::zero(n_max);
        for n in 1..=n_max {
            for m in 1..=n {
                let mut acc = Rat::zero();
                for k in m..=n {
                    let a = self.entry(n, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * other.entry(k, m);
                }
                out.set(n, m, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_max(), other.n_max());
        let mut out = self.clone();
        for n in 1..=self.n_max() {
            for k in 1..=n {
                out.set(n, k, self.entry(n, k) + other.entry(n, k));
            }
        }
        out
    }

    pub fn scale_all(&self, c: &Rat) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    pub fn is_zero_triangle(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    pub fn to_tsv(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("\t")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|v| format!("\"{v}\"")).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!(
            "{{\"n_max\": {}, \"rows\": [{}]}}",
            self.n_max(),
            rows.join(", ")
        )
    }
}

/// The convolution matrix `(f_{nk})` of a series `f` with `f(0) = 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct ConvolutionTriangle {
    tri: LowerTriangle,
}

impl ConvolutionTriangle {
    /// Build from the series by the set-partition recurrence
    /// `f_{nk} = sum_j C(n-1, j-1) f_j f_{(n-j)(k-1)}`, seeded by the
    /// first column `f_{n1} = f_n` (exponential coefficients of `f`).
    pub fn from_series(f: &Series, n_max: usize) -> Result<Self> {
        if !f.coeff(0).is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        if f.order() < n_max {
            return Err(Error::InvalidArgument(format!(
                "series order {} too small for n_max {}",
                f.order(),
                n_max
            )));
        }
        let fj: Vec<Rat> = (0..=n_max).map(|j| f.exp_coeff(j)).collect();
        let mut tri = LowerTriangle::zero(n_max);
        for n in 1..=n_max {
            tri.set(n, 1, fj[n].clone());
        }
        for n in 1..=n_max {
            for k in 2..=n {
                let mut acc = Rat::zero();
                for j in 1..=(n - k + 1) {
                    if fj[j].is_zero() {
                        continue;
                    }
                    let c = Rat::from_integer(binomial_int(n - 1, j - 1));
                    acc += c * &fj[j] * tri.entry(n - j, k - 1);
                }
                tri.set(n, k, acc);
            }
        }
        Ok(Self { tri })
    }

    /// The matrix of `f(z) = z` (ones on the diagonal).
    pub fn identity(n_max: usize) -> Self {
        Self {
            tri: LowerTriangle::identity(n_max),
        }
    }

    pub fn from_lower_unchecked(tri: LowerTriangle) -> Self {
        Self { tri }
    }

    pub fn n_max(&self) -> usize {
        self.tri.n_max()
    }

    pub fn entry(&self, n: usize, k: usize) -> Rat {
        self.tri.entry(n, k)
    }

    pub fn row(&self, n: usize) -> &[Rat] {
        self.tri.row(n)
    }

    pub fn raw(&self) -> &LowerTriangle {
        &self.tri
    }

    pub fn is_unit_diagonal(&self) -> bool {
        (1..=self.n_max()).all(|n| self.entry(n, n).is_one())
    }

    /// Recover the series: ordinary coefficients `f_{n1}/n!`, constant 0.
    pub fn to_series(&self) -> Series {
        let mut exp = vec![Rat::zero()];
        exp.extend(self.tri.first_column());
        Series::from_exp_coeffs(exp)
    }

    /// Matrix product; corresponds to `g(f(z))` when `self` belongs to
    /// `f` and `other` to `g`.
    pub fn matmul(&self, other: &Self) -> Self {
        Self {
            tri: self.tri.matmul(&other.tri),
        }
    }

    /// Row/column rescaling `f_{nk} -> alpha^n beta^k f_{nk}`,
    /// corresponding to `f(z) -> beta f(alpha z)`.
    pub fn scaled(&self, alpha: &Rat, beta: &Rat) -> Self {
        let n_max = self.n_max();
        let mut tri = LowerTriangle::zero(n_max);
        let mut alpha_pow = Rat::one();
        for n in 1..=n_max {
            alpha_pow *= alpha;
            let mut factor = alpha_pow.clone();
            for k in 1..=n {
                factor *= beta;
                tri.set(n, k, self.entry(n, k) * &factor);
            }
        }
        Self { tri }
    }

    /// `F - I` (strictly lower triangular when the diagonal is all ones).
    fn deviation(&self) -> LowerTriangle {
        let mut d = self.tri.clone();
        for n in 1..=self.n_max() {
            let v = d.entry(n, n) - Rat::one();
            d.set(n, n, v);
        }
        d
    }

    /// Powers `(F-I)^0 .. (F-I)^{n_max-1}`; higher powers vanish.
    fn deviation_powers(&self) -> Vec<LowerTriangle> {
        let n_max = self.n_max();
        let d = self.deviation();
        let mut powers = vec![LowerTriangle::identity(n_max)];
        for l in 1..n_max {
            powers.push(powers[l - 1].matmul(&d));
        }
        powers
    }

    /// Matrix power with the exponent kept as a polynomial variable:
    /// entry `(n, k)` is `sum_l C(q, l) (F-I)^l_{nk}`, a polynomial in
    /// `q` of degree at most `n - k`. Requires a unit diagonal.
    pub fn power_poly(&self) -> Result<QMatrix> {
        if !self.is_unit_diagonal() {
            return Err(Error::LinearCoefficientNotOne);
        }
        let n_max = self.n_max();
        let powers = self.deviation_powers();
        let binomials: Vec<XPoly> = (0..n_max).map(binomial_poly).collect();
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut row = Vec::with_capacity(n);
            for k in 1..=n {
                let mut acc = XPoly::zero();
                for (l, p) in powers.iter().enumerate().take(n - k + 1) {
                    let c = p.entry(n, k);
                    if c.is_zero() {
                        continue;
                    }
                    acc = acc + binomials[l].scale_rat(&c);
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(QMatrix { rows })
    }

    /// Same parametrized power through the Lagrange-interpolation form
    /// `sum_j F^j_{nk} C(q, j) C(q-j-1, m-j) (-1)^{m-j}` with `m = n-k`.
    /// Agreement with [`Self::power_poly`] is a strong self-test.
    pub fn power_poly_interpolation(&self) -> Result<QMatrix> {
        if !self.is_unit_diagonal() {
            return Err(Error::LinearCoefficientNotOne);
        }
        let n_max = self.n_max();
        let mut int_powers = vec![LowerTriangle::identity(n_max)];
        for j in 1..n_max {
            int_powers.push(int_powers[j - 1].matmul(&self.tri));
        }
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut row = Vec::with_capacity(n);
            for k in 1..=n {
                let m = n - k;
                let mut acc = XPoly::zero();
                for (j, p) in int_powers.iter().enumerate().take(m + 1) {
                    let v = p.entry(n, k);
                    if v.is_zero() {
                        continue;
                    }
                    let sign = if (m - j) % 2 == 0 {
                        Rat::one()
                    } else {
                        -Rat::one()
                    };
                    let term = binomial_poly(j) * binomial_poly_shifted(j as i64 + 1, m - j);
                    acc = acc + term.scale_rat(&(v * sign));
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(QMatrix { rows })
    }

    /// Numeric matrix power `F^q` for a rational exponent; integer
    /// `q >= 1` agrees with repeated multiplication. Requires a unit
    /// diagonal.
    pub fn power_rat(&self, q: &Rat) -> Result<Self> {
        if !self.is_unit_diagonal() {
            return Err(Error::LinearCoefficientNotOne);
        }
        let n_max = self.n_max();
        let powers = self.deviation_powers();
        let mut acc = LowerTriangle::zero(n_max);
        for (l, p) in powers.iter().enumerate() {
            let c = crate::util::binomial_rat(q, l);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&p.scale_all(&c));
        }
        Ok(Self { tri: acc })
    }

    /// Finite matrix logarithm `(F-I) - (F-I)^2/2 + (F-I)^3/3 - ...`;
    /// strictly lower triangular, not itself a convolution matrix. The
    /// first column is the nonnegativity certificate for iterates with
    /// `q >= 0`.
    pub fn log_triangle(&self) -> Result<LowerTriangle> {
        if !self.is_unit_diagonal() {
            return Err(Error::LinearCoefficientNotOne);
        }
        let powers = self.deviation_powers();
        let mut acc = LowerTriangle::zero(self.n_max());
        for (l, p) in powers.iter().enumerate().skip(1) {
            let sign = if l % 2 == 1 { Rat::one() } else { -Rat::one() };
            acc = acc.add(&p.scale_all(&(sign / rat_int(l as i64))));
        }
        Ok(acc)
    }

    pub fn to_tsv(&self) -> String {
        self.tri.to_tsv()
    }

    pub fn to_json(&self) -> String {
        self.tri.to_json()
    }
}

/// Convolution matrix power with polynomial entries in the iteration
/// parameter `q`: evaluating at `q = 0` gives the identity, at `q = 1`
/// the base matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct QMatrix {
    rows: Vec<Vec<XPoly>>,
}

impl QMatrix {
    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Entry at 1-based `(n, k)` as a polynomial in `q`.
    pub fn entry(&self, n: usize, k: usize) -> XPoly {
        if n == 0 || k == 0 || k > n || n > self.n_max() {
            XPoly::zero()
        } else {
            self.rows[n - 1][k - 1].clone()
        }
    }

    pub fn eval(&self, q: &Rat) -> ConvolutionTriangle {
        let mut tri = LowerTriangle::zero(self.n_max());
        for n in 1..=self.n_max() {
            for k in 1..=n {
                tri.set(n, k, self.rows[n - 1][k - 1].eval(q));
            }
        }
        ConvolutionTriangle::from_lower_unchecked(tri)
    }

    /// Entrywise derivative in `q` evaluated at `q = 0`; equals the
    /// matrix logarithm.
    pub fn derivative_at_zero(&self) -> LowerTriangle {
        let mut tri = LowerTriangle::zero(self.n_max());
        for n in 1..=self.n_max() {
            for k in 1..=n {
                tri.set(n, k, self.rows[n - 1][k - 1].coeff(1));
            }
        }
        tri
    }

    /// JSON with every entry as its coefficient list in `q`.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|p| {
                        let cs: Vec<String> = if p.is_zero() {
                            vec!["\"0\"".to_string()]
                        } else {
                            p.coeffs().iter().map(|c| format!("\"{c}\"")).collect()
                        };
                        format!("[{}]", cs.join(", "))
                    })
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!(
            "{{\"n_max\": {}, \"rows\": [{}]}}",
            self.n_max(),
            rows.join(", ")
        )
    }
}

/// The `q`-th iterate of `f` (with `f(0) = 0`, `f'(0) = 1`): the series
/// whose convolution matrix is `F^q`. `q = -1` is the reversion.
pub fn iterate_series(f: &Series, q: &Rat, order: usize) -> Result<Series> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    if !f.coeff(1).is_one() {
        return Err(Error::LinearCoefficientNotOne);
    }
    if order == 0 {
        return Ok(Series::zero_series(0));
    }
    let tri = ConvolutionTriangle::from_series(&f.truncated(order), order)?;
    Ok(tri.power_rat(q)?.to_series())
}

/// Compositional inverse `g` with `g(f(z)) = z`, by Lagrange's formula
/// `g_{n1} = (n-1)! Fhat_{n-1}(-n)` where `Fhat = f/z`. A non-unit
/// linear coefficient is normalized away and restored (`g(w) = h(w)/f_1`
/// for `h` reverting `f(z/f_1)`); reversion fails when `f_1 = 0`.
pub fn revert<T: Coeff>(f: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    let f1 = f.coeff(1);
    if f1.is_zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    if f1.is_one() {
        return revert_normalized(f);
    }
    let inv = f1.try_inv().ok_or(Error::NotInvertible)?;
    let h = revert_normalized(&f.scale_var(&inv))?;
    Ok(h.scale(&inv))
}

fn revert_normalized<T: Coeff>(f: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    let order = f.order();
    if order == 0 {
        return Ok(TruncatedSeries::zero_series(0));
    }
    let fhat = f.shift_down(1);
    let fam = exp_family(&fhat.log()?)?;
    let mut coeffs = vec![T::zero(); order + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        // g_n / n! = (n-1)! Fhat_{n-1}(-n) / n!
        *c = fam[n - 1].eval(&T::from_int(-(n as i64))).div_int(n as i64);
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Direct convolution-matrix entry `f_{nk} = (n!/k!) Fhat_{n-k}(k)`,
/// the formula behind Lagrange's theorem. Requires `f'(0) = 1`.
pub fn lagrange_entry(f: &Series, n: usize, k: usize) -> Result<Rat> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    if !f.coeff(1).is_one() {
        return Err(Error::LinearCoefficientNotOne);
    }
    if k == 0 || k > n {
        return Ok(Rat::zero());
    }
    let fhat = f.shift_down(1);
    if fhat.order() < n - k {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small for entry ({n}, {k})",
            f.order()
        )));
    }
    let fam = exp_family(&fhat.log()?)?;
    let value = fam[n - k].eval(&rat_int(k as i64));
    Ok(factorial_rat(n) / factorial_rat(k) * value)
}

/// Whole inverse matrix by Lagrange's theorem,
/// `g_{nk} = ((n-1)!/(k-1)!) Fhat_{n-k}(-n)`.
pub fn lagrange_inverse_triangle(f: &Series, n_max: usize) -> Result<ConvolutionTriangle> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    if !f.coeff(1).is_one() {
        return Err(Error::LinearCoefficientNotOne);
    }
    if f.order() < n_max {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small for n_max {n_max}",
            f.order()
        )));
    }
    let fhat = f.shift_down(1);
    let fam = exp_family(&fhat.log()?)?;
    let mut tri = LowerTriangle::zero(n_max);
    for n in 1..=n_max {
        for k in 1..=n {
            let v = fam[n - k].eval(&rat_int(-(n as i64)));
            tri.set(n, k, factorial_rat(n - 1) / factorial_rat(k - 1) * v);
        }
    }
    Ok(ConvolutionTriangle::from_lower_unchecked(tri))
}

/// Extended matrix entry: the polynomial `p(y) = f_{y(y-k)} =
/// y(y-1)...(y-k+1) Fhat_k(y-k)`, of degree at most `2k`. Evaluating at
/// integers `y = n >= k` reproduces `f_{n(n-k)}`; negative arguments
/// realize the duality `f_{nk} = (-1)^{n-k} g_{(-k)(-n)}`.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtendedEntry {
    pub offset: usize,
    pub poly: XPoly,
}

impl ExtendedEntry {
    pub fn eval(&self, y: &Rat) -> Rat {
        self.poly.eval(y)
    }
}

pub fn extended_entry(f: &Series, k: usize) -> Result<ExtendedEntry> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    if !f.coeff(1).is_one() {
        return Err(Error::LinearCoefficientNotOne);
    }
    if f.order() < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "series order {} too small for offset {k}",
            f.order()
        )));
    }
    let fhat = f.shift_down(1);
    let fam = exp_family(&fhat.log()?)?;
    let falling = XPoly::falling_factorial(k);
    let shifted = fam[k].shift(&rat_int(-(k as i64)));
    Ok(ExtendedEntry {
        offset: k,
        poly: falling * shifted,
    })
}

/// Stirling polynomial: `sigma_n(x) = F_n(x)/x` for the family of
/// `(z e^z/(e^z-1))^x`. Defined for `n >= 1` (`sigma_0(x) = 1/x` is not
/// a polynomial).
pub fn stirling_polynomial(n: usize) -> Result<XPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sigma_0(x) = 1/x is not a polynomial; require n >= 1".into(),
        ));
    }
    let fam = crate::family::catalog("stirling-poly", n, None)?;
    fam.poly(n).div_linear(&Rat::zero())
}

/// Certificate that all coefficients of `f^[q]` are nonnegative for all
/// `q >= 0`: holds if and only if the first column of `ln F` is
/// nonnegative through the truncation. Whether a simple condition on `f`
/// characterizes this remains open; the certificate is the sharpest
/// finite test available.
pub fn iterates_nonnegative_certificate(f: &Series, n_max: usize) -> Result<bool> {
    let t = ConvolutionTriangle::from_series(&f.truncated(n_max), n_max)?;
    let log = t.log_triangle()?;
    Ok(log.first_column().iter().all(|v| *v >= Rat::zero()))
}

/// The binary operation `h_{nk} = sum_{i,j} C(n,j) f_{ji} g_{(n-j)(k-i)}`
/// on raw 0-indexed lower-triangular arrays (`a[n][k]`, `0 <= k <= n`).
/// Associative and commutative for arbitrary arrays.
pub fn circ_raw(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n_max = a.len().min(b.len()) - 1;
    let mut out: Vec<Vec<Rat>> = (0..=n_max).map(|n| vec![Rat::zero(); n + 1]).collect();
    for (n, row) in out.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let mut acc = Rat::zero();
            for j in 0..=n {
                let c = Rat::from_integer(binomial_int(n, j));
                for i in 0..=k.min(j) {
                    if k - i > n - j {
                        continue;
                    }
                    let fa = &a[j][i];
                    if fa.is_zero() {
                        continue;
                    }
                    acc += &c * fa * &b[n - j][k - i];
                }
            }
            *cell = acc;
        }
    }
    out
}

/// `F o G` on convolution matrices: embeds the implicit row 0 (`F_0 = 1`)
/// before applying [`circ_raw`] and strips it afterwards. Convolution
/// matrices satisfy `F o F = F diag(2, 4, 8, ...)`.
pub fn circ_combine(f: &ConvolutionTriangle, g: &ConvolutionTriangle) -> ConvolutionTriangle {
    let embed = |t: &ConvolutionTriangle| -> Vec<Vec<Rat>> {
        let mut rows = vec![vec![Rat::one()]];
        for n in 1..=t.n_max() {
            let mut row = vec![Rat::zero()];
            row.extend(t.row(n).iter().cloned());
            rows.push(row);
        }
        rows
    };
    let h = circ_raw(&embed(f), &embed(g));
    let n_max = h.len() - 1;
    let mut tri = LowerTriangle::zero(n_max);
    for n in 1..=n_max {
        for k in 1..=n {
            tri.set(n, k, h[n][k].clone());
        }
    }
    ConvolutionTriangle::from_lower_unchecked(tri)
}
