//! Truncated formal power series in q over an arbitrary coefficient ring.
//!
//! The truncation order is explicit data: `coeffs.len() == order + 1`
//! always, and `order` is the highest exponent whose coefficient is
//! reliable. Every binary operation contracts to the minimum order of its
//! operands, so a result can never claim more precision than its inputs
//! carried. Equality is only meaningful up to the common order and is
//! reported together with that order.

use crate::error::{Error, Result};
use crate::par;
use crate::rat::{rat_i64, Rat};
use crate::ring::Ring;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R: Ring> {
    coeffs: Vec<R>,
    order: usize,
}

pub type QSeries = TruncSeries<Rat>;

impl<R: Ring + Send + Sync> TruncSeries<R> {
    /// Build from coefficients; pads with zeros (minted from `proto`) or
    /// truncates so that exactly `order + 1` coefficients are stored.
    pub fn new(mut coeffs: Vec<R>, order: usize, proto: &R) -> Self {
        let zero = proto.ring_zero();
        coeffs.resize(order + 1, zero);
        TruncSeries { coeffs, order }
    }

    pub fn zero(order: usize, proto: &R) -> Self {
        TruncSeries::new(vec![], order, proto)
    }

    pub fn one(order: usize, proto: &R) -> Self {
        TruncSeries::new(vec![proto.ring_one()], order, proto)
    }

    pub fn constant(c: R, order: usize) -> Self {
        let proto = c.ring_zero();
        TruncSeries::new(vec![c], order, &proto)
    }

    /// The monomial q (requires order >= 1 to be representable faithfully).
    pub fn q(order: usize, proto: &R) -> Self {
        TruncSeries::new(vec![proto.ring_zero(), proto.ring_one()], order, proto)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, d: usize) -> &R {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn proto(&self) -> R {
        self.coeffs[0].ring_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest nonzero exponent within the window, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            order,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].add(&rhs.coeffs[i]))
            .collect();
        TruncSeries { coeffs, order }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].sub(&rhs.coeffs[i]))
            .collect();
        TruncSeries { coeffs, order }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
            order: self.order,
        }
    }

    pub fn scale_ring(&self, c: &R) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            order: self.order,
        }
    }

    /// Cauchy product, contracted to the minimum operand order. Each output
    /// coefficient is an independent dot product; large products go through
    /// the parallel kernel.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = par::map_indexed(order + 1, 33, |n| self.conv_at(rhs, n));
        TruncSeries { coeffs, order }
    }

    /// Sequential twin of `mul`, kept for the bench comparison.
    pub fn mul_seq(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = par::map_indexed_seq(order + 1, |n| self.conv_at(rhs, n));
        TruncSeries { coeffs, order }
    }

    fn conv_at(&self, rhs: &Self, n: usize) -> R {
        let mut acc = self.coeffs[0].ring_zero();
        for i in 0..=n {
            let (a, b) = (&self.coeffs[i], &rhs.coeffs[n - i]);
            if !a.is_zero() && !b.is_zero() {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    }

    /// Multiply by q^k; coefficients shift up and the order grows by k
    /// (the shifted coefficients stay reliable).
    pub fn mul_qpow(&self, k: usize) -> Self {
        let mut coeffs = vec![self.proto(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries {
            coeffs,
            order: self.order + k,
        }
    }

    /// The derivation D = q d/dq; output order equals input order.
    pub fn d(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&rat_i64(i as i64)))
            .collect();
        TruncSeries {
            coeffs,
            order: self.order,
        }
    }

    /// Term-by-term integral of s/q from 0: q^d -> q^d/d. Requires zero
    /// constant term.
    pub fn integrate_dlog(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroInnerConstant);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    c.ring_zero()
                } else {
                    c.scale(&(Rat::one() / rat_i64(i as i64)))
                }
            })
            .collect();
        Ok(TruncSeries {
            coeffs,
            order: self.order,
        })
    }

    /// Multiplicative inverse; the constant term must be a unit of R
    /// (`unit_inv` supplies its inverse or None).
    pub fn invert_with(&self, unit_inv: impl Fn(&R) -> Option<R>) -> Result<Self> {
        let c0 = unit_inv(&self.coeffs[0]).ok_or(Error::NonUnitConstantTerm)?;
        let mut inv: Vec<R> = Vec::with_capacity(self.order + 1);
        inv.push(c0.clone());
        for n in 1..=self.order {
            // b_n = -c0_inv * sum_{i=1..n} a_i b_{n-i}
            let mut acc = self.coeffs[0].ring_zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() && !inv[n - i].is_zero() {
                    acc = acc.add(&self.coeffs[i].mul(&inv[n - i]));
                }
            }
            inv.push(acc.neg().mul(&c0));
        }
        Ok(TruncSeries {
            coeffs: inv,
            order: self.order,
        })
    }

    /// Substitute `inner` (which must have zero constant term) for q.
    /// Under a valuation-1 inner series the result order is the minimum of
    /// the two operand orders.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroInnerConstant);
        }
        let order = self.order.min(inner.order);
        let proto = self.proto();
        let mut acc = TruncSeries::constant(self.coeffs[0].clone(), order);
        let mut pw = TruncSeries::one(order, &proto);
        for i in 1..=order {
            pw = pw.mul(&inner.truncate(order));
            if !self.coeffs[i].is_zero() {
                acc = acc.add(&pw.scale_ring(&self.coeffs[i]));
            }
        }
        Ok(acc)
    }

    /// exp of a series with zero constant term (still exact: finitely many
    /// terms contribute at each order).
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroInnerConstant);
        }
        let proto = self.proto();
        let mut acc = TruncSeries::one(self.order, &proto);
        let mut term = TruncSeries::one(self.order, &proto);
        for n in 1..=self.order {
            term = term.mul(self).scale(&(Rat::one() / rat_i64(n as i64)));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let proto = self.proto();
        let mut acc = TruncSeries::one(self.order, &proto);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient-wise equality up to the common order; reports that order
    /// and the first differing exponent if any.
    pub fn eq_report(&self, rhs: &Self) -> (bool, usize, Option<usize>) {
        let order = self.order.min(rhs.order);
        for i in 0..=order {
            if self.coeffs[i] != rhs.coeffs[i] {
                return (false, order, Some(i));
            }
        }
        (true, order, None)
    }

    pub fn eq_to_order(&self, rhs: &Self) -> bool {
        self.eq_report(rhs).0
    }
}

impl QSeries {
    pub fn from_i64(coeffs: Vec<i64>, order: usize) -> Self {
        let v: Vec<Rat> = coeffs.into_iter().map(rat_i64).collect();
        TruncSeries::new(v, order, &Rat::zero())
    }

    pub fn rat_one(order: usize) -> Self {
        TruncSeries::one(order, &Rat::zero())
    }

    pub fn rat_zero(order: usize) -> Self {
        TruncSeries::zero(order, &Rat::zero())
    }

    /// Geometric series 1/(1 - c q).
    pub fn geometric(c: &Rat, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut acc = Rat::one();
        for _ in 0..=order {
            coeffs.push(acc.clone());
            acc *= c;
        }
        TruncSeries { coeffs, order }
    }

    pub fn invert(&self) -> Result<Self> {
        self.invert_with(|c| {
            if num_traits::Zero::is_zero(c) {
                None
            } else {
                Some(Rat::one() / c)
            }
        })
    }

    /// (1 + u)^e for rational e applied to self = 1 + (positive-valuation
    /// part); binomial series, exact.
    pub fn pow_rat(&self, e: &Rat) -> Result<Self> {
        if self.coeffs[0] != Rat::one() {
            return Err(Error::NonUnitConstantTerm);
        }
        let u = self.sub(&QSeries::rat_one(self.order));
        let mut acc = QSeries::rat_one(self.order);
        let mut pw = QSeries::rat_one(self.order);
        for m in 1..=self.order as u64 {
            pw = pw.mul(&u);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw.scale(&crate::rat::binom_rat(e, m)));
        }
        Ok(acc)
    }
}
