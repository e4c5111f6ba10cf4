//! Sparse multivariate polynomials over the rationals.
//!
//! Used as a series coefficient ring when identities must hold with the
//! series coefficients themselves kept symbolic (e.g. generic `f_2, f_3,
//! f_4`). Variables are abstract atom indices; callers decide what each
//! index means.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::Rat;

/// Exponent map `atom index -> power`; zero exponents are never stored.
type Monomial = BTreeMap<u32, u32>;

/// Multivariate polynomial; zero coefficients are never stored, so
/// equality is structural.
#[derive(Clone, PartialEq)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        Self { terms }
    }

    /// The atom `a_i` as a polynomial.
    pub fn atom(i: u32) -> Self {
        let mut m = Monomial::new();
        m.insert(i, 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, Rat::one());
        Self { terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant (monomial-free) coefficient.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::new())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::new()))
    }

    /// Substitute rational values for every atom: `values[i]` replaces
    /// atom `i`. Atoms beyond the slice are substituted with zero.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        'terms: for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (&var, &exp) in mono {
                let v = match values.get(var as usize) {
                    Some(v) => v.clone(),
                    None => continue 'terms,
                };
                if v.is_zero() {
                    continue 'terms;
                }
                for _ in 0..exp {
                    term *= &v;
                }
            }
            acc += term;
        }
        acc
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, Rat>, mono: Monomial, c: Rat) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        Self::constant(Rat::one())
    }

    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::new()).is_some_and(|c| c.is_one())
    }
}

impl Add for MPoly {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut terms = self.terms;
        for (m, c) in rhs.terms {
            Self::insert_term(&mut terms, m, c);
        }
        Self { terms }
    }
}

impl Sub for MPoly {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for MPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for MPoly {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                for (&var, &exp) in mb {
                    *m.entry(var).or_insert(0) += exp;
                }
                Self::insert_term(&mut terms, m, ca * cb);
            }
        }
        Self { terms }
    }
}

impl Coeff for MPoly {
    fn from_rat(r: &Rat) -> Self {
        Self::constant(r.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_constant() {
            let c = self.constant_term();
            if c.is_zero() {
                None
            } else {
                Some(Self::constant(c.recip()))
            }
        } else {
            None
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (mono, c) in &self.terms {
            let mut factors = Vec::new();
            if !c.is_one() || mono.is_empty() {
                factors.push(c.to_string());
            }
            for (&var, &exp) in mono {
                if exp == 1 {
                    factors.push(format!("a{var}"));
                } else {
                    factors.push(format!("a{var}^{exp}"));
                }
            }
            parts.push(factors.join("*"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{self}]")
    }
}
