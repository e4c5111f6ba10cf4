//! Small exact combinatorial helpers shared across modules.

use num_traits::{One, Zero};

use crate::{Int, Rat};

/// `n!` as a big integer.
pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

/// `n!` as an exact rational.
pub fn factorial_rat(n: usize) -> Rat {
    Rat::from_integer(factorial(n))
}

/// Integer binomial coefficient `C(n, k)`.
pub fn binomial_int(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

/// Generalized binomial coefficient `C(a, k) = a(a-1)...(a-k+1)/k!` for an
/// arbitrary rational upper argument.
pub fn binomial_rat(a: &Rat, k: usize) -> Rat {
    falling_rat(a, k) / factorial_rat(k)
}

/// Falling factorial `a(a-1)...(a-k+1)` of a rational.
pub fn falling_rat(a: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc *= a - Rat::from_integer(Int::from(i));
    }
    acc
}

/// Rising factorial `a(a+1)...(a+k-1)` of a rational.
pub fn rising_rat(a: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc *= a + Rat::from_integer(Int::from(i));
    }
    acc
}

/// Bernoulli numbers `B_0 .. B_n` (convention `B_1 = -1/2`), read off the
/// exponential generating function `z/(e^z - 1)`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rat> {
    let em1 = &crate::Series::z(n + 1).exp().expect("zero constant term")
        - &crate::Series::one_series(n + 1);
    let egf = em1.shift_down(1).inverse().expect("unit constant term");
    (0..=n).map(|k| egf.exp_coeff(k)).collect()
}
