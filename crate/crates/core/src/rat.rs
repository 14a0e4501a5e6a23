//! The universal scalar: arbitrary-precision exact rationals, plus the
//! handful of number-theoretic helpers the series layers need (factorial
//! ratios, harmonic-style sums, rational binomials, Bernoulli numbers).
//!
//! `Rat` is `num_rational::BigRational`, which stores lowest terms with a
//! positive denominator; arithmetic never rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    assert!(den != 0);
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Render as "num/den" (or plain "num" for integers); the wire format used
/// everywhere rationals leave the process.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Falling Pochhammer symbol (a)_m = a(a-1)...(a-m+1) for rational a.
pub fn falling(a: &Rat, m: u64) -> Rat {
    let mut acc = Rat::one();
    for i in 0..m {
        acc *= a - rat_i64(i as i64);
    }
    acc
}

/// Generalized binomial coefficient C(a, m) with rational top.
pub fn binom_rat(a: &Rat, m: u64) -> Rat {
    falling(a, m) / Rat::from_integer(factorial(m))
}

/// Integer binomial C(n, k).
pub fn binom_u64(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli numbers B_0..B_max (B_1 = -1/2 convention), by the defining
/// recurrence sum_{j<=m} C(m+1, j) B_j = 0.
pub fn bernoulli(max: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(max + 1);
    for m in 0..=max {
        if m == 0 {
            b.push(Rat::one());
            continue;
        }
        let mut acc = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rat::from_integer(binom_u64(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / rat_i64(m as i64 + 1));
    }
    b
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
