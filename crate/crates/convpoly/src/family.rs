//! Convolution polynomial families.
//!
//! A family is the list of polynomials `F_n(x) = [z^n] exp(x f(z))` for a
//! log series `f` with `f(0) = 0`. This module constructs families from
//! `f`, evaluates the defining and derived convolution identities exactly,
//! and implements the family-to-family constructions: umbral substitution,
//! the `t`-shift `x F_n(x + tn)/(x + tn)`, the one-parameter convolution
//! `sum_k F_k(x) G_{n-k}(x + tk)`, and a catalog of named families.

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::poly::XPolynomial;
use crate::series::TruncatedSeries;
use crate::util::{binomial_rat, factorial_rat, falling_rat};
use crate::{rat_int, Error, Int, Rat, Result, Series, XPoly};

/// Expand `exp(x f(z))` through `[z^order]`; entry `n` is the polynomial
/// in `x` whose value at `x0` is `[z^n] F(z)^{x0}`. Works over any
/// coefficient ring.
pub fn exp_family<T: Coeff>(f: &TruncatedSeries<T>) -> Result<Vec<XPolynomial<T>>> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    let xf = f.map(|c| XPolynomial::monomial(c.clone(), 1));
    let expanded = xf.exp()?;
    Ok((0..=f.order()).map(|n| expanded.coeff(n)).collect())
}

/// A convolution family with exact rational coefficients, stored as
/// explicit polynomials `F_0 .. F_N`.
#[derive(Clone, PartialEq, Debug)]
pub struct Family {
    polys: Vec<XPoly>,
    source: Option<Series>,
    name: Option<String>,
}

impl Family {
    /// Build the family of `exp(x f(z))`; `f` must have zero constant
    /// term.
    pub fn from_log_series(f: &Series) -> Result<Self> {
        let polys = exp_family(f)?;
        Ok(Self {
            polys,
            source: Some(f.clone()),
            name: None,
        })
    }

    /// Wrap explicit polynomials without checking the family invariants.
    /// Used for the degenerate all-zero family and for deliberately
    /// corrupted families in negative-control tests.
    pub fn from_polys_unchecked(polys: Vec<XPoly>) -> Self {
        assert!(!polys.is_empty());
        Self {
            polys,
            source: None,
            name: None,
        }
    }

    /// The degenerate family `F_n(x) = 0` for all `n` (the identically
    /// zero solution of the convolution condition).
    pub fn degenerate(order: usize) -> Self {
        Self::from_polys_unchecked(vec![XPoly::zero(); order + 1])
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The log series the family was built from, when known. Families
    /// produced by umbral substitution or combination do not track one;
    /// [`Self::log_series`] recomputes it from the polynomials.
    pub fn source(&self) -> Option<&Series> {
        self.source.as_ref()
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &XPoly {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[XPoly] {
        &self.polys
    }

    /// `F_n` evaluated at a rational point.
    pub fn eval(&self, n: usize, x: &Rat) -> Rat {
        self.polys[n].eval(x)
    }

    /// The log series `f(z)`: its ordinary coefficient of `z^n` is the
    /// `x^1` coefficient of `F_n(x)`.
    pub fn log_series(&self) -> Series {
        Series::from_coeffs((0..=self.order()).map(|n| self.polys[n].coeff(1)).collect())
    }

    /// Matrix-convention row `n`: coefficients of `n! F_n(x)` for
    /// `x^1 .. x^n`.
    pub fn row(&self, n: usize) -> Vec<Rat> {
        let scaled = self.polys[n].scale_rat(&factorial_rat(n));
        (1..=n).map(|k| scaled.coeff(k)).collect()
    }

    /// Corrupt one forced coefficient. The linear coefficients `f_{n1}`
    /// are free parameters of a convolution family, so the corruption
    /// targets the `x^2` coefficient of the top polynomial (falling back
    /// to the constant of `F_0` for tiny orders). Negative control for
    /// verification drivers.
    pub fn tampered(&self) -> Self {
        let mut polys = self.polys.clone();
        let n = self.order();
        if n >= 2 {
            let mut coeffs: Vec<Rat> = (0..=n).map(|k| polys[n].coeff(k)).collect();
            coeffs[2] += Rat::one();
            polys[n] = XPoly::from_coeffs(coeffs);
        } else {
            polys[0] = polys[0].clone() + XPoly::one();
        }
        Self {
            polys,
            source: self.source.clone(),
            name: self.name.clone(),
        }
    }

    /// Serialize as JSON: `{"order": N, "name": ..., "rows": [[...], ...]}`
    /// where row `n` holds the `n! F_n(x)` coefficients of `x^1 .. x^n`.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = (1..=self.order())
            .map(|n| {
                let cells: Vec<String> = self.row(n).iter().map(|c| format!("\"{c}\"")).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        let name = match &self.name {
            Some(n) => format!("\"name\": \"{n}\", "),
            None => String::new(),
        };
        format!(
            "{{\"order\": {}, {}\"rows\": [{}]}}",
            self.order(),
            name,
            rows.join(", ")
        )
    }

    /// One tab-separated line per row `1..=N`.
    pub fn to_tsv(&self) -> String {
        (1..=self.order())
            .map(|n| {
                self.row(n)
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join("\t")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Residual of the defining convolution condition
/// `F_n(x+y) - sum_k F_k(x) F_{n-k}(y)`; exactly zero for genuine
/// families.
pub fn check_convolution(fam: &Family, n: usize, x: &Rat, y: &Rat) -> Rat {
    let lhs = fam.eval(n, &(x + y));
    let mut rhs = Rat::zero();
    for k in 0..=n {
        rhs += fam.eval(k, x) * fam.eval(n - k, y);
    }
    lhs - rhs
}

/// Residual of the derived convolution
/// `(x+y) sum_k k F_k(x) F_{n-k}(y) - x n F_n(x+y)`.
pub fn check_derived_convolution(fam: &Family, n: usize, x: &Rat, y: &Rat) -> Rat {
    let mut sum = Rat::zero();
    for k in 1..=n {
        sum += rat_int(k as i64) * fam.eval(k, x) * fam.eval(n - k, y);
    }
    (x + y) * sum - x * rat_int(n as i64) * fam.eval(n, &(x + y))
}

/// Residual of the summed `t`-shift identity
/// `(x+y) F_n(x+y+tn)/(x+y+tn) = sum_k [x F_k(x+tk)/(x+tk)] [y F_{n-k}(y+t(n-k))/(y+t(n-k))]`.
/// Returns `None` when the chosen point hits a pole of the displayed
/// form.
pub fn check_t_identity_sum(fam: &Family, t: &Rat, n: usize, x: &Rat, y: &Rat) -> Option<Rat> {
    let shifted = |k: usize, v: &Rat| -> Option<Rat> {
        let den = v + t * rat_int(k as i64);
        if den.is_zero() {
            return None;
        }
        Some(v * fam.eval(k, &den) / den)
    };
    let den = x + y + t * rat_int(n as i64);
    if den.is_zero() {
        return None;
    }
    let lhs = (x + y) * fam.eval(n, &den) / den;
    let mut rhs = Rat::zero();
    for k in 0..=n {
        rhs += shifted(k, x)? * shifted(n - k, y)?;
    }
    Some(lhs - rhs)
}

/// Residual of the weighted `t`-shift identity
/// `n F_n(x+y+tn)/(x+y+tn) = sum_{k>=1} [k F_k(x+tk)/(x+tk)] [y F_{n-k}(y+t(n-k))/(y+t(n-k))]`.
pub fn check_t_identity_weighted(fam: &Family, t: &Rat, n: usize, x: &Rat, y: &Rat) -> Option<Rat> {
    let den = x + y + t * rat_int(n as i64);
    if den.is_zero() {
        return None;
    }
    let lhs = rat_int(n as i64) * fam.eval(n, &den) / den;
    let mut rhs = Rat::zero();
    for k in 1..=n {
        let dx = x + t * rat_int(k as i64);
        let dy = y + t * rat_int((n - k) as i64);
        if dx.is_zero() || dy.is_zero() {
            return None;
        }
        rhs += rat_int(k as i64) * fam.eval(k, &dx) / dx * (y * fam.eval(n - k, &dy) / dy);
    }
    Some(lhs - rhs)
}

/// Residual of the four-parameter convolution
/// `sum_k C(x+t(n-k), n-k) C(y+tk, k) y/(y+tk) - C(x+y+tn, n)`,
/// evaluated through the pole-free product form of the second factor.
pub fn rothe_residual(t: &Rat, x: &Rat, y: &Rat, n: usize) -> Rat {
    let mut sum = Rat::zero();
    for k in 0..=n {
        let first = binomial_rat(&(x + t * rat_int((n - k) as i64)), n - k);
        sum += first * binomial_family_coefficient(t, y, k);
    }
    sum - binomial_rat(&(x + y + t * rat_int(n as i64)), n)
}

/// The binomial power series `B_t(z)`, the unique series with constant
/// term 1 satisfying `B = 1 + z B^t`, truncated at `order`. Computed by
/// fixed-point iteration with progressive truncation (`k` iterations pin
/// the coefficients through `z^k`).
pub fn binomial_series(t: &Rat, order: usize) -> Series {
    let mut b = Series::one_series(0);
    for k in 1..=order {
        let p = b.pow_rat(t).expect("constant term stays 1");
        b = &Series::one_series(k) + &p.truncated(k).shift_up(1);
    }
    b
}

/// Closed form `[z^n] B_t(z)^x = x (x+tn-1)(x+tn-2)...(x+tn-n+1)/n!`,
/// evaluated in the product form, which has no pole.
pub fn binomial_family_coefficient(t: &Rat, x: &Rat, n: usize) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    let start = x + t * rat_int(n as i64) - Rat::one();
    x * falling_rat(&start, n - 1) / factorial_rat(n)
}

/// The tree function `T(z) = sum n^{n-1} z^n / n!`, satisfying
/// `T = z e^T`.
pub fn tree_function(order: usize) -> Series {
    let mut coeffs = vec![Rat::zero(); order + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = Rat::from_integer(Int::from(n).pow(n as u32 - 1)) / factorial_rat(n);
    }
    Series::from_coeffs(coeffs)
}

/// Family of `(1 - T(z))^{-x}`; row `n` holds the tree polynomial
/// coefficients `t_{nk}` counting `n`-set self-maps with `k` cycles.
pub fn tree_polynomials(order: usize) -> Result<Family> {
    let t = tree_function(order);
    let f = -&(&Series::one_series(order) - &t).log()?;
    Ok(Family::from_log_series(&f)?.with_name("tree-poly"))
}

/// Family of `e^{x z e^z}`; row `n` counts idempotent self-maps of an
/// `n`-set by number of cycles.
pub fn idempotent_polynomials(order: usize) -> Result<Family> {
    let f = Series::z(order.max(1)).exp()?.truncated(order).shift_up(1);
    Ok(Family::from_log_series(&f)?.with_name("idempotent"))
}

/// Umbral substitution: replace each power `x^k` in `F_n(x)` by
/// `k! G_k(x)`. The result is the convolution family of `G(ln F(z))^x`.
pub fn umbral_substitute(f: &Family, g: &Family) -> Family {
    let order = f.order().min(g.order());
    let polys = (0..=order)
        .map(|n| {
            let mut acc = XPoly::zero();
            for k in 0..=f.polys[n].degree() {
                let c = f.polys[n].coeff(k);
                if c.is_zero() {
                    continue;
                }
                acc = acc + g.polys[k].scale_rat(&(c * factorial_rat(k)));
            }
            acc
        })
        .collect();
    Family {
        polys,
        source: None,
        name: None,
    }
}

/// The `t`-shift construction: `polys[n] = x F_n(x + tn) / (x + tn)`,
/// expanded exactly (the division is exact because `F_n(0) = 0` for
/// `n >= 1`).
pub fn t_shift(fam: &Family, t: &Rat) -> Result<Family> {
    let mut polys = Vec::with_capacity(fam.polys.len());
    polys.push(XPoly::one());
    for n in 1..=fam.order() {
        let tn = t * rat_int(n as i64);
        let shifted = fam.polys[n].shift(&tn);
        let quot = shifted.div_linear(&(-tn))?;
        polys.push(quot * XPoly::x());
    }
    let mut out = Family {
        polys,
        source: None,
        name: None,
    };
    out.source = Some(out.log_series());
    Ok(out)
}

/// One-parameter combination `H_n(x) = sum_k F_k(x) G_{n-k}(x + tk)`,
/// the family of `(G(z) F(z G(z)^t))^x`. At `t = 0` this is the
/// coefficient-wise product family.
pub fn combine(f: &Family, g: &Family, t: &Rat) -> Family {
    let order = f.order().min(g.order());
    let polys = (0..=order)
        .map(|n| {
            let mut acc = XPoly::zero();
            for k in 0..=n {
                let shift = t * rat_int(k as i64);
                let gk = g.polys[n - k].shift(&shift);
                acc = acc + f.polys[k].clone() * gk;
            }
            acc
        })
        .collect();
    Family {
        polys,
        source: None,
        name: None,
    }
}

/// Canonical catalog names, for error messages and the CLI.
pub const CATALOG_NAMES: &[&str] = &[
    "exp",
    "binomial",
    "rising",
    "catalan-t",
    "s-step",
    "tree",
    "tree-poly",
    "idempotent",
    "bell",
    "arcsin",
    "central-factorial",
    "stirling-poly",
    "exp-minus-one",
    "log-geometric",
    "lah",
];

/// Log series `f(z)` of a named family. `param` supplies `t` for
/// `catalan-t` and the step for `s-step`. Aliases: `power` (exp),
/// `stirling2`/`bell` (exp-minus-one), `stirling1`/`log-geometric`
/// (rising).
pub fn catalog_log_series(name: &str, order: usize, param: Option<&Rat>) -> Result<Series> {
    let one = Series::one_series(order);
    let z = Series::z(order.max(1)).truncated(order);
    match name {
        "exp" | "power" => Ok(z),
        "binomial" => (&one + &z).log(),
        "rising" | "log-geometric" | "stirling1" => Ok(-&(&one - &z).log()?),
        "exp-minus-one" | "bell" | "stirling2" => Ok(&z.exp()? - &one),
        "catalan-t" => {
            let t = param.ok_or(Error::MissingParameter("t"))?;
            binomial_series(t, order).log()
        }
        "s-step" => {
            let s = param.ok_or(Error::MissingParameter("t"))?;
            if s.is_zero() {
                Ok(z)
            } else {
                Ok((&one + &z.scale_rat(s)).log()?.scale_rat(&s.recip()))
            }
        }
        "tree" => Ok(tree_function(order)),
        "tree-poly" => Ok(-&(&one - &tree_function(order)).log()?),
        "idempotent" => Ok(z.exp()?.truncated(order).shift_up(1)),
        "arcsin" => {
            // arcsin z = integral of (1 - z^2)^{-1/2}
            if order == 0 {
                return Ok(Series::zero_series(0));
            }
            let d_order = order - 1;
            let mut base = Series::one_series(d_order);
            if d_order >= 2 {
                base = &base - &Series::monomial(Rat::one(), 2, d_order);
            }
            Ok(base.pow_rat(&crate::rat(-1, 2))?.integral())
        }
        "central-factorial" => {
            // f_j = 2^{1-j} for odd j, i.e. f(z) = 2 sinh(z/2)
            let mut coeffs = vec![Rat::zero(); order + 1];
            for (j, c) in coeffs.iter_mut().enumerate().skip(1).step_by(2) {
                *c = Rat::new(Int::one(), Int::one() << (j - 1)) / factorial_rat(j);
            }
            Ok(Series::from_coeffs(coeffs))
        }
        "stirling-poly" => {
            // F(z) = z e^z / (e^z - 1); f = ln F
            let em1 = &Series::z(order + 1).exp()? - &Series::one_series(order + 1);
            let z_over_em1 = em1.shift_down(1).inverse()?;
            let ez = Series::z(order.max(1)).truncated(order).exp()?;
            (&z_over_em1 * &ez).log()
        }
        "lah" => {
            // f(z) = z/(1-z)
            let geom = (&one - &z).inverse()?;
            Ok(&geom - &one)
        }
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

/// Construct a named family from the catalog.
pub fn catalog(name: &str, order: usize, param: Option<&Rat>) -> Result<Family> {
    let f = catalog_log_series(name, order, param)?;
    Ok(Family::from_log_series(&f)?.with_name(name))
}
