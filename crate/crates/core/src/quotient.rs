//! Polynomial quotient rings over Q with canonical reduction.
//!
//! Three instances carry the whole computation:
//!   TRing  = Q[t]/(t^N + 1)        equivariant scalars after t^N = -1
//!   PRing  = Q[p]/(p^4 (p^N + 1))  the even state space
//!   HRing  = Q[H]/(H^4)            cohomology of the hypersurface
//!
//! Elements hold an `Arc` to their ring definition; mixing rings panics.

use crate::poly::Poly;
use crate::rat::{rat_i64, Rat};
use crate::ring::Ring;
use num_traits::One;
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
pub struct QuotientRing {
    pub name: String,
    pub var: char,
    pub modulus: Poly,
}

impl QuotientRing {
    pub fn dim(&self) -> usize {
        self.modulus.degree().expect("modulus must be nonzero")
    }
}

/// Q[t]/(t^N + 1)
pub fn t_ring(n: usize) -> Arc<QuotientRing> {
    let mut m = Poly::monomial(Rat::one(), n);
    m = m.add(&Poly::one());
    Arc::new(QuotientRing {
        name: format!("T({n})"),
        var: 't',
        modulus: m,
    })
}

/// Q[p]/(p^4 (p^N + 1))
pub fn p_ring(n: usize) -> Arc<QuotientRing> {
    let f = Poly::monomial(Rat::one(), n).add(&Poly::one());
    let m = Poly::monomial(Rat::one(), 4).mul(&f);
    Arc::new(QuotientRing {
        name: format!("P({n})"),
        var: 'p',
        modulus: m,
    })
}

/// Q[t]/Φ_{2N}(t), the 2N-th cyclotomic field for odd prime N. Here
/// t^N = -1 still holds, t² is a primitive N-th root of unity, and —
/// unlike Q[t]/(t^N+1), which has a junk t = -1 factor where all the
/// equivariant weights collapse — every nonzero element is invertible, so
/// the root-of-unity identities hold on the nose.
pub fn cyc_ring(n: usize) -> Arc<QuotientRing> {
    assert!(n % 2 == 1 && n >= 3);
    let coeffs: Vec<Rat> = (0..n)
        .map(|i| if i % 2 == 0 { Rat::one() } else { -Rat::one() })
        .collect();
    Arc::new(QuotientRing {
        name: format!("Cyc(2*{n})"),
        var: 't',
        modulus: Poly::new(coeffs),
    })
}

/// Q[H]/(H^4)
pub fn h_ring() -> Arc<QuotientRing> {
    Arc::new(QuotientRing {
        name: "H".into(),
        var: 'H',
        modulus: Poly::monomial(Rat::one(), 4),
    })
}

#[derive(Clone, Debug)]
pub struct QElem {
    pub ring: Arc<QuotientRing>,
    /// canonical representative, deg < dim; dense, may hold trailing zeros
    /// up to dim
    pub poly: Poly,
}

impl PartialEq for QElem {
    fn eq(&self, other: &Self) -> bool {
        assert!(
            same_ring(&self.ring, &other.ring),
            "comparing elements of different rings"
        );
        self.poly == other.poly
    }
}

fn same_ring(a: &Arc<QuotientRing>, b: &Arc<QuotientRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl QElem {
    /// Canonical representative of `poly` in `ring`.
    pub fn reduce(ring: &Arc<QuotientRing>, poly: &Poly) -> QElem {
        let (_, r) = poly.div_rem(&ring.modulus);
        QElem {
            ring: ring.clone(),
            poly: r,
        }
    }

    pub fn zero_of(ring: &Arc<QuotientRing>) -> QElem {
        QElem {
            ring: ring.clone(),
            poly: Poly::zero(),
        }
    }

    pub fn one_of(ring: &Arc<QuotientRing>) -> QElem {
        QElem {
            ring: ring.clone(),
            poly: Poly::one(),
        }
    }

    pub fn constant(ring: &Arc<QuotientRing>, c: Rat) -> QElem {
        QElem {
            ring: ring.clone(),
            poly: Poly::constant(c),
        }
    }

    /// The class of the generator variable to the k-th power.
    pub fn var_pow(ring: &Arc<QuotientRing>, k: usize) -> QElem {
        QElem::reduce(ring, &Poly::monomial(Rat::one(), k))
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.poly.coeff(i)
    }

    /// Multiplicative inverse when it exists (extended Euclid against the
    /// modulus); None for zero divisors.
    pub fn inv(&self) -> Option<QElem> {
        if self.poly.is_zero() {
            return None;
        }
        let (g, s, _) = self.poly.ext_gcd(&self.ring.modulus);
        if g.degree() != Some(0) {
            return None;
        }
        // g is monic constant 1 after normalization
        Some(QElem::reduce(&self.ring, &s))
    }

    /// Substitute the generator by `x` into another ring (a ring map iff
    /// modulus(x) = 0 there, which the caller is responsible for).
    pub fn substitute(&self, target: &Arc<QuotientRing>, x: &QElem) -> QElem {
        let mut acc = QElem::zero_of(target);
        for c in self.poly.coeffs.iter().rev() {
            acc = acc.mul(x).add(&QElem::constant(target, c.clone()));
        }
        acc
    }

    /// Reduce a PRing class mod p^4, renaming p -> H: the restriction to
    /// the hypersurface.
    pub fn restrict_h(&self, h: &Arc<QuotientRing>) -> QElem {
        let coeffs: Vec<Rat> = self.poly.coeffs.iter().take(4).cloned().collect();
        QElem::reduce(h, &Poly::new(coeffs))
    }

    pub fn rational_part(&self) -> Option<Rat> {
        if self.poly.degree().is_none_or(|d| d == 0) {
            Some(self.poly.coeff(0))
        } else {
            None
        }
    }
}

impl Ring for QElem {
    fn ring_zero(&self) -> Self {
        QElem::zero_of(&self.ring)
    }
    fn ring_one(&self) -> Self {
        QElem::one_of(&self.ring)
    }
    fn add(&self, rhs: &Self) -> Self {
        assert!(same_ring(&self.ring, &rhs.ring));
        QElem {
            ring: self.ring.clone(),
            poly: self.poly.add(&rhs.poly),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        assert!(same_ring(&self.ring, &rhs.ring));
        QElem {
            ring: self.ring.clone(),
            poly: self.poly.sub(&rhs.poly),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        assert!(same_ring(&self.ring, &rhs.ring));
        QElem::reduce(&self.ring, &self.poly.mul(&rhs.poly))
    }
    fn neg(&self) -> Self {
        QElem {
            ring: self.ring.clone(),
            poly: self.poly.neg(),
        }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn from_int(&self, n: i64) -> Self {
        QElem::constant(&self.ring, rat_i64(n))
    }
    fn scale(&self, c: &Rat) -> Self {
        QElem {
            ring: self.ring.clone(),
            poly: self.poly.scale(c),
        }
    }
}

/// t_alpha = -zeta_N^alpha t represented inside TRing with zeta_N = t^2
/// (t has multiplicative order 2N, so for odd N the square generates the
/// N-th roots): t_alpha = -t^{2 alpha + 1}.
pub fn t_alpha(tr: &Arc<QuotientRing>, n: usize, alpha: usize) -> QElem {
    let e = (2 * alpha + 1) % (2 * n);
    // t^e with t^N = -1 folded in
    let (q, r) = (e / n, e % n);
    let sign = if q % 2 == 1 { -Rat::one() } else { Rat::one() };
    QElem::reduce(tr, &Poly::monomial(-sign, r))
}

/// zeta_N^j = t^{2j} in TRing.
pub fn zeta_pow(tr: &Arc<QuotientRing>, n: usize, j: i64) -> QElem {
    let n = n as i64;
    let e = ((2 * j) % (2 * n) + 2 * n) % (2 * n);
    let (q, r) = (e / n, e % n);
    let sign = if q % 2 == 1 { -Rat::one() } else { Rat::one() };
    QElem::reduce(tr, &Poly::monomial(sign, r as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relations() {
        let n = 7;
        let tr = t_ring(n);
        // t^N = -1
        let tn = QElem::var_pow(&tr, n);
        assert_eq!(tn, QElem::constant(&tr, rat_i64(-1)));
        let pr = p_ring(n);
        // p^{N+4} = -p^4
        let a = QElem::var_pow(&pr, n + 4);
        let b = QElem::var_pow(&pr, 4).neg();
        assert_eq!(a, b);
    }

    #[test]
    fn brute_force_reduction_oracle() {
        // (p^3)(p^{N+1}) with N = 7: long-divide p^11 by p^4(p^7+1)
        let n = 7;
        let pr = p_ring(n);
        let prod = QElem::var_pow(&pr, 3).mul(&QElem::var_pow(&pr, n + 1));
        let (_, rem) = Poly::monomial(Rat::one(), 11).div_rem(&pr.modulus);
        assert_eq!(prod.poly, rem);
        assert_eq!(prod, QElem::var_pow(&pr, 4).neg());
    }

    #[test]
    fn zeta_has_order_n() {
        let n = 7;
        for tr in [t_ring(n), cyc_ring(n)] {
            let one = QElem::one_of(&tr);
            let mut acc = QElem::one_of(&tr);
            for j in 1..n {
                acc = acc.mul(&zeta_pow(&tr, n, 1));
                assert_ne!(acc, one, "zeta^{j} must differ from 1");
            }
            acc = acc.mul(&zeta_pow(&tr, n, 1));
            assert_eq!(acc, one);
        }
    }

    #[test]
    fn inverse_of_units_and_zero_divisors() {
        let n = 7;
        let tr = t_ring(n);
        let t = QElem::var_pow(&tr, 1);
        let tinv = t.inv().unwrap();
        assert_eq!(t.mul(&tinv), QElem::one_of(&tr));
        // in Q[t]/(t^N+1) the weight difference is a zero divisor (the
        // ring has a junk t = -1 component); in the cyclotomic field it
        // is an honest unit
        let d = t_alpha(&tr, n, 2).sub(&t_alpha(&tr, n, 1));
        assert!(d.inv().is_none());
        let cy = cyc_ring(n);
        let d = t_alpha(&cy, n, 2).sub(&t_alpha(&cy, n, 1));
        assert!(d.inv().is_some());
    }

    #[test]
    fn weight_difference_product_is_derivative_value() {
        // prod_{beta != alpha} (t_beta - t_alpha) = N t_alpha^{N-1},
        // brute-force product against the derivative of x^N + t^N
        let n = 7;
        let cy = cyc_ring(n);
        for alpha in [1usize, 3, 6] {
            let mut prod = QElem::one_of(&cy);
            for beta in 1..=n {
                if beta != alpha {
                    prod = prod.mul(&t_alpha(&cy, n, beta).sub(&t_alpha(&cy, n, alpha)));
                }
            }
            let mut expect = QElem::constant(&cy, rat_i64(n as i64));
            for _ in 0..(n - 1) {
                expect = expect.mul(&t_alpha(&cy, n, alpha));
            }
            assert_eq!(prod, expect, "alpha = {alpha}");
        }
    }
}
