//! Minimal commutative-ring interface shared by the scalar and quotient
//! layers. Zero and one are minted from an existing element (`ring_zero`,
//! `ring_one`) so that context-carrying rings (quotient rings holding their
//! modulus) fit the same trait as plain rationals.

use crate::rat::Rat;
use num_traits::{One, Zero};

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// n·1 in the ring of `self`.
    #[allow(clippy::wrong_self_convention)] // the receiver supplies the ring context
    fn from_int(&self, n: i64) -> Self;
    /// Multiply by a rational scalar.
    fn scale(&self, c: &Rat) -> Self;
}

impl Ring for Rat {
    fn ring_zero(&self) -> Self {
        Rat::zero()
    }
    fn ring_one(&self) -> Self {
        Rat::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(&self, n: i64) -> Self {
        crate::rat::rat_i64(n)
    }
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
}
