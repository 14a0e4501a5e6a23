//! Finite z-windows of q-series coefficients: the carrier type for
//! J-functions, S-matrix columns and R-matrix expansions.
//!
//! A block stores coefficients for z-exponents `lo ..= hi`, each a
//! truncated q-series over the coefficient ring, all sharing one q-order.
//! Because the objects here arise from two different expansions of the same
//! rational functions — near z = infinity (descending tails, e.g. the
//! global S-matrix) and near z = 0 (ascending tails, e.g. the restriction
//! to the hypersurface) — a block carries two exactness flags:
//!
//!   exact_below: all coefficients below `lo` are genuinely zero
//!   exact_above: all coefficients above `hi` are genuinely zero
//!
//! A missing flag means "truncated there, unknown beyond". Arithmetic
//! tracks the reliable window so a truncated tail can never contaminate an
//! asserted coefficient.

use crate::rat::Rat;
use crate::ring::Ring;
use crate::series::TruncSeries;

#[derive(Clone, Debug)]
pub struct LaurentBlock<R: Ring> {
    lo: i64,
    coeffs: Vec<TruncSeries<R>>,
    pub exact_below: bool,
    pub exact_above: bool,
}

impl<R: Ring + Send + Sync> LaurentBlock<R> {
    pub fn new(lo: i64, coeffs: Vec<TruncSeries<R>>, exact_below: bool, exact_above: bool) -> Self {
        assert!(!coeffs.is_empty(), "empty z-window");
        let order = coeffs.iter().map(|c| c.order()).min().unwrap();
        let coeffs = coeffs.into_iter().map(|c| c.truncate(order)).collect();
        LaurentBlock {
            lo,
            coeffs,
            exact_below,
            exact_above,
        }
    }

    /// All-zero block on a given window.
    pub fn zero(
        lo: i64,
        hi: i64,
        q_order: usize,
        proto: &R,
        exact_below: bool,
        exact_above: bool,
    ) -> Self {
        let len = (hi - lo + 1) as usize;
        LaurentBlock {
            lo,
            coeffs: vec![TruncSeries::zero(q_order, proto); len],
            exact_below,
            exact_above,
        }
    }

    /// A single term c(q) z^e, exact on both sides.
    pub fn term(e: i64, c: TruncSeries<R>) -> Self {
        LaurentBlock {
            lo: e,
            coeffs: vec![c],
            exact_below: true,
            exact_above: true,
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn q_order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn proto(&self) -> R {
        self.coeffs[0].proto()
    }

    /// Coefficient of z^e; exponents outside the window are zero when the
    /// corresponding side is exact, and a panic otherwise (reading a
    /// truncated coefficient is a bug, not a value).
    pub fn coeff(&self, e: i64) -> TruncSeries<R> {
        if e < self.lo {
            assert!(self.exact_below, "read below the reliable z-window");
            return TruncSeries::zero(self.q_order(), &self.proto());
        }
        if e > self.hi() {
            assert!(self.exact_above, "read above the reliable z-window");
            return TruncSeries::zero(self.q_order(), &self.proto());
        }
        self.coeffs[(e - self.lo) as usize].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drop known-zero fringe columns (never narrows the reliable window).
    pub fn compact(mut self) -> Self {
        while self.coeffs.len() > 1 && self.exact_above && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
        while self.coeffs.len() > 1 && self.exact_below && self.coeffs[0].is_zero() {
            self.coeffs.remove(0);
            self.lo += 1;
        }
        self
    }

    pub fn truncate_q(&self, order: usize) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.truncate(order)).collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    /// Restrict the window to [lo, hi] (marks the cut sides as truncated
    /// unless nothing was cut).
    pub fn clip(&self, lo: i64, hi: i64) -> Self {
        let new_lo = lo.max(self.lo);
        let new_hi = hi.min(self.hi());
        assert!(new_lo <= new_hi, "clip to empty window");
        let coeffs = (new_lo..=new_hi).map(|e| self.coeff(e)).collect();
        LaurentBlock {
            lo: new_lo,
            coeffs,
            exact_below: self.exact_below && new_lo == self.lo,
            exact_above: self.exact_above && new_hi == self.hi(),
        }
    }

    /// Drop everything above `hi` after checking it is zero on the stored
    /// window; upper exactness is preserved because the dropped
    /// coefficients were verified.
    pub fn clip_zero_above(&self, hi: i64) -> Self {
        for e in (hi + 1)..=self.hi() {
            assert!(
                self.coeff(e).is_zero(),
                "clip_zero_above dropped a nonzero z^{e}"
            );
        }
        let coeffs = (self.lo..=hi).map(|e| self.coeff(e)).collect();
        LaurentBlock {
            lo: self.lo,
            coeffs,
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let lo = if self.exact_below && rhs.exact_below {
            self.lo.min(rhs.lo)
        } else if self.exact_below {
            rhs.lo
        } else if rhs.exact_below {
            self.lo
        } else {
            self.lo.max(rhs.lo)
        };
        let hi = if self.exact_above && rhs.exact_above {
            self.hi().max(rhs.hi())
        } else if self.exact_above {
            rhs.hi()
        } else if rhs.exact_above {
            self.hi()
        } else {
            self.hi().min(rhs.hi())
        };
        assert!(lo <= hi, "sum has empty reliable window");
        let coeffs = (lo..=hi)
            .map(|e| self.coeff(e).add(&rhs.coeff(e)))
            .collect();
        LaurentBlock {
            lo,
            coeffs,
            exact_below: self.exact_below && rhs.exact_below,
            exact_above: self.exact_above && rhs.exact_above,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|s| s.scale(c)).collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    /// Multiply every coefficient by a fixed ring element.
    pub fn scale_ring(&self, c: &R) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|s| s.scale_ring(c)).collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    /// Multiply every coefficient by a fixed q-series.
    pub fn scale_series(&self, c: &TruncSeries<R>) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|s| s.mul(c)).collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    /// Multiply by z^k.
    pub fn shift_z(&self, k: i64) -> Self {
        LaurentBlock {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    /// Substitute z -> -z.
    pub fn negate_z(&self) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let e = self.lo + i as i64;
                    if e.rem_euclid(2) == 1 {
                        c.neg()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    /// q d/dq on every coefficient.
    pub fn d(&self) -> Self {
        LaurentBlock {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.d()).collect(),
            exact_below: self.exact_below,
            exact_above: self.exact_above,
        }
    }

    fn nz_lo(&self) -> i128 {
        if self.exact_below {
            self.lo as i128
        } else {
            i128::MIN / 4
        }
    }

    fn nz_hi(&self) -> i128 {
        if self.exact_above {
            self.hi() as i128
        } else {
            i128::MAX / 4
        }
    }

    /// Cauchy product in z (q-orders contract as usual). The reliable
    /// window of the result excludes every exponent a truncated tail could
    /// reach.
    pub fn mul(&self, rhs: &Self) -> Self {
        // unknown a_i below a.lo pair with any possibly-nonzero b_j and
        // reach e <= a.lo - 1 + nz_hi(b); reliable exponents sit above all
        // such contamination (and symmetrically for the upper side)
        let mut rel_lo = self.lo as i128 + rhs.lo as i128;
        if !self.exact_below {
            rel_lo = rel_lo.max(self.lo as i128 + rhs.nz_hi());
        }
        if !rhs.exact_below {
            rel_lo = rel_lo.max(rhs.lo as i128 + self.nz_hi());
        }
        let mut rel_hi = self.hi() as i128 + rhs.hi() as i128;
        if !self.exact_above {
            rel_hi = rel_hi.min(self.hi() as i128 + rhs.nz_lo());
        }
        if !rhs.exact_above {
            rel_hi = rel_hi.min(rhs.hi() as i128 + self.nz_lo());
        }
        assert!(
            rel_lo <= rel_hi,
            "product has empty reliable window: [{},{}]({},{}) x [{},{}]({},{})",
            self.lo,
            self.hi(),
            self.exact_below,
            self.exact_above,
            rhs.lo,
            rhs.hi(),
            rhs.exact_below,
            rhs.exact_above
        );
        let (lo, hi) = (rel_lo as i64, rel_hi as i64);
        let q_order = self.q_order().min(rhs.q_order());
        let proto = self.proto();
        let n = (hi - lo + 1) as usize;
        let coeffs = crate::par::map_indexed(n, 9, |idx| {
            let e = lo + idx as i64;
            let mut acc = TruncSeries::zero(q_order, &proto);
            let i_min = self.lo.max(e - rhs.hi());
            let i_max = self.hi().min(e - rhs.lo);
            for i in i_min..=i_max {
                let a = &self.coeffs[(i - self.lo) as usize];
                let b = &rhs.coeffs[(e - i - rhs.lo) as usize];
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b).truncate(q_order));
                }
            }
            acc
        });
        LaurentBlock {
            lo,
            coeffs,
            exact_below: self.exact_below && rhs.exact_below,
            exact_above: self.exact_above && rhs.exact_above,
        }
        .compact()
    }

    /// Invert an exact block as a descending (near z = infinity) expansion
    /// down to z-exponent `lo_limit`. The top z-coefficient must be an
    /// invertible q-series (`inv_top` provides its inverse).
    pub fn inv_descending(
        &self,
        lo_limit: i64,
        inv_top: impl Fn(&TruncSeries<R>) -> Option<TruncSeries<R>>,
    ) -> Option<Self> {
        assert!(
            self.exact_above && self.exact_below,
            "invert needs an exact block"
        );
        let me = self.clone().compact();
        let s = me.hi();
        let top = me.coeff(s);
        let top_inv = inv_top(&top)?;
        // the inverse tops out at z^{-s} and descends to lo_limit
        let q_order = me.q_order();
        let proto = me.proto();
        let depth = (-s - lo_limit).max(0) as usize;
        // g^{-1} = z^{-s} top_inv sum_j u^j, truncated at z^{lo_limit}
        let mut inv_coeffs: Vec<TruncSeries<R>> =
            vec![TruncSeries::zero(q_order, &proto); depth + 1];
        // solve g * ginv = 1 coefficient by coefficient from the top:
        // ginv_{-s-k} determined by earlier ones
        for k in 0..=depth {
            // coefficient of z^{-k} in g * ginv must be [k == 0]
            let mut acc = if k == 0 {
                TruncSeries::one(q_order, &proto)
            } else {
                TruncSeries::zero(q_order, &proto)
            };
            // sum over j < k of g_{s-(k-j)} * ginv_{-s-j}
            for j in 0..k {
                let ge = s - (k as i64 - j as i64);
                if ge >= me.lo() {
                    let g = me.coeff(ge);
                    if !g.is_zero() && !inv_coeffs[j].is_zero() {
                        acc = acc.sub(&g.mul(&inv_coeffs[j]));
                    }
                }
            }
            inv_coeffs[k] = acc.mul(&top_inv);
        }
        inv_coeffs.reverse();
        Some(LaurentBlock {
            lo: -s - depth as i64,
            coeffs: inv_coeffs,
            exact_below: false,
            exact_above: true,
        })
    }

    /// Invert an exact block as an ascending (near z = 0) expansion up to
    /// z-exponent `hi_limit`; the bottom z-coefficient must be invertible.
    pub fn inv_ascending(
        &self,
        hi_limit: i64,
        inv_bottom: impl Fn(&TruncSeries<R>) -> Option<TruncSeries<R>>,
    ) -> Option<Self> {
        assert!(
            self.exact_above && self.exact_below,
            "invert needs an exact block"
        );
        let me = self.clone().compact();
        let s = me.lo();
        let bottom = me.coeff(s);
        let bot_inv = inv_bottom(&bottom)?;
        let q_order = me.q_order();
        let proto = me.proto();
        let depth = (hi_limit + s).max(0) as usize;
        let mut inv_coeffs: Vec<TruncSeries<R>> =
            vec![TruncSeries::zero(q_order, &proto); depth + 1];
        for k in 0..=depth {
            let mut acc = if k == 0 {
                TruncSeries::one(q_order, &proto)
            } else {
                TruncSeries::zero(q_order, &proto)
            };
            for j in 0..k {
                let ge = s + (k as i64 - j as i64);
                if ge <= me.hi() {
                    let g = me.coeff(ge);
                    if !g.is_zero() && !inv_coeffs[j].is_zero() {
                        acc = acc.sub(&g.mul(&inv_coeffs[j]));
                    }
                }
            }
            inv_coeffs[k] = acc.mul(&bot_inv);
        }
        Some(LaurentBlock {
            lo: -s,
            coeffs: inv_coeffs,
            exact_below: true,
            exact_above: false,
        })
    }

    /// First (z-exponent, q-exponent) where the block differs from zero,
    /// scanning the reliable window.
    pub fn first_nonzero(&self) -> Option<(i64, usize)> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Some(d) = c.valuation() {
                return Some((self.lo + i as i64, d));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::QSeries;

    fn qs(v: Vec<i64>, order: usize) -> QSeries {
        QSeries::from_i64(v, order)
    }

    #[test]
    fn mul_windows_and_values() {
        // (z + 1) * (z - 1) = z^2 - 1, all exact
        let a = LaurentBlock::new(0, vec![qs(vec![1], 3), qs(vec![1], 3)], true, true);
        let b = LaurentBlock::new(0, vec![qs(vec![-1], 3), qs(vec![1], 3)], true, true);
        let p = a.mul(&b);
        assert_eq!(p.coeff(2), qs(vec![1], 3));
        assert!(p.coeff(1).is_zero());
        assert_eq!(p.coeff(0), qs(vec![-1], 3));
        assert!(p.exact_below && p.exact_above);
    }

    #[test]
    fn descending_reliability() {
        // two descending blocks on [-3, 0]: product reliable on [-3, 0]
        let a = LaurentBlock::new(-3, vec![qs(vec![1], 2); 4], false, true);
        let b = LaurentBlock::new(-3, vec![qs(vec![2], 2); 4], false, true);
        let p = a.mul(&b);
        assert_eq!(p.lo(), -3);
        assert_eq!(p.hi(), 0);
        assert!(!p.exact_below && p.exact_above);
    }

    #[test]
    fn inv_descending_linear() {
        // (z - 1)^{-1} near infinity: z^{-1} + z^{-2} + ...
        let f = LaurentBlock::new(0, vec![qs(vec![-1], 2), qs(vec![1], 2)], true, true);
        let inv = f.inv_descending(-4, |s| s.invert().ok()).unwrap();
        for e in -4..=-1 {
            assert_eq!(inv.coeff(e), qs(vec![1], 2), "coeff at {e}");
        }
        // check f * inv = 1 on the reliable window
        let p = f.mul(&inv);
        assert_eq!(p.coeff(0), qs(vec![1], 2));
        for e in p.lo()..0 {
            assert!(p.coeff(e).is_zero());
        }
    }

    #[test]
    fn inv_ascending_linear() {
        // (1 - z)^{-1} near zero: 1 + z + z^2 + ...
        let f = LaurentBlock::new(0, vec![qs(vec![1], 2), qs(vec![-1], 2)], true, true);
        let inv = f.inv_ascending(4, |s| s.invert().ok()).unwrap();
        for e in 0..=4 {
            assert_eq!(inv.coeff(e), qs(vec![1], 2), "coeff at {e}");
        }
    }
}
