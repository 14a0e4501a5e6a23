//! Polynomials in the generator tower Y, A_1, A_2, ..., B_1, B_2, ... with
//! rational coefficients, closed under the derivation D via
//!
//!   D Y   = Y² − Y·... = Y(Y−1),
//!   D A_m = A_{m+1} − A_1 A_m,
//!   D B_m = B_{m+1} − B_1 B_m.
//!
//! The five-generator ring Q[A, B, B₂, B₃, Y] sits inside as the span of
//! monomials using only A_1, B_1, B_2, B_3, Y; membership certificates are
//! expressed there, while the normalized-potential recursion is free to
//! walk up the tower.

use crate::ifun::Generators;
use crate::rat::{rat_i64, Rat};
use crate::series::QSeries;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// (y exponent, A-tower exponents, B-tower exponents); tower vectors carry
/// no trailing zeros so the map key is canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub y: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl Monomial {
    fn canon(mut self) -> Self {
        while self.a.last() == Some(&0) {
            self.a.pop();
        }
        while self.b.last() == Some(&0) {
            self.b.pop();
        }
        self
    }

    pub fn one() -> Self {
        Monomial {
            y: 0,
            a: vec![],
            b: vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenPoly {
    pub terms: BTreeMap<Monomial, Rat>,
}

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        GenPoly::term(Monomial::one(), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m.canon(), c);
        }
        GenPoly { terms }
    }

    pub fn y() -> Self {
        GenPoly::term(
            Monomial {
                y: 1,
                a: vec![],
                b: vec![],
            },
            Rat::one(),
        )
    }

    /// A_m as a polynomial (m >= 1).
    pub fn a_m(m: usize) -> Self {
        let mut a = vec![0u32; m];
        a[m - 1] = 1;
        GenPoly::term(Monomial { y: 0, a, b: vec![] }, Rat::one())
    }

    pub fn b_m(m: usize) -> Self {
        let mut b = vec![0u32; m];
        b[m - 1] = 1;
        GenPoly::term(Monomial { y: 0, a: vec![], b }, Rat::one())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        GenPoly { terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return GenPoly::zero();
        }
        GenPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = GenPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut a = m1.a.clone();
                a.resize(a.len().max(m2.a.len()), 0);
                for (i, e) in m2.a.iter().enumerate() {
                    a[i] += e;
                }
                let mut b = m1.b.clone();
                b.resize(b.len().max(m2.b.len()), 0);
                for (i, e) in m2.b.iter().enumerate() {
                    b[i] += e;
                }
                let m = Monomial {
                    y: m1.y + m2.y,
                    a,
                    b,
                };
                out = out.add(&GenPoly::term(m, c1 * c2));
            }
        }
        out
    }

    /// The derivation D applied via the product rule and the tower rules.
    pub fn d(&self) -> Self {
        let mut out = GenPoly::zero();
        for (m, c) in &self.terms {
            // Y factor
            if m.y > 0 {
                // d(Y^y) = y Y^{y-1} · Y(Y-1) = y (Y^{y+1} - Y^y)
                let mut up = m.clone();
                up.y += 1;
                out = out.add(&GenPoly::term(up, c * rat_i64(m.y as i64)));
                out = out.add(&GenPoly::term(m.clone(), -(c * rat_i64(m.y as i64))));
            }
            for (i, &e) in m.a.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                // d(A_{i+1}) = A_{i+2} - A_1 A_{i+1}
                let coeff = c * rat_i64(e as i64);
                let mut up = m.clone();
                up.a[i] -= 1;
                up.a.resize(up.a.len().max(i + 2), 0);
                up.a[i + 1] += 1;
                out = out.add(&GenPoly::term(up.canon(), coeff.clone()));
                let mut cross = m.clone();
                cross.a.resize(cross.a.len().max(1), 0);
                cross.a[0] += 1;
                out = out.add(&GenPoly::term(cross.canon(), -coeff));
            }
            for (i, &e) in m.b.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let coeff = c * rat_i64(e as i64);
                let mut up = m.clone();
                up.b[i] -= 1;
                up.b.resize(up.b.len().max(i + 2), 0);
                up.b[i + 1] += 1;
                out = out.add(&GenPoly::term(up.canon(), coeff.clone()));
                let mut cross = m.clone();
                cross.b.resize(cross.b.len().max(1), 0);
                cross.b[0] += 1;
                out = out.add(&GenPoly::term(cross.canon(), -coeff));
            }
        }
        out
    }

    /// Largest tower index used (for sizing the generator expansion).
    pub fn tower_depth(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.a.len().max(m.b.len()))
            .max()
            .unwrap_or(0)
    }

    /// Expand to a q-series using computed generator series.
    pub fn expand(&self, g: &Generators) -> QSeries {
        let order = g.order;
        let mut acc = QSeries::rat_zero(order);
        for (m, c) in &self.terms {
            let mut t = QSeries::rat_one(order);
            for _ in 0..m.y {
                t = t.mul(&g.y);
            }
            for (i, &e) in m.a.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(g.a_m(i + 1));
                }
            }
            for (i, &e) in m.b.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(g.b_m(i + 1));
                }
            }
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Human-readable rendering with Y, A1..,B1.. names.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (m, c) in &self.terms {
            let mut factors = vec![];
            if m.y > 0 {
                factors.push(if m.y == 1 {
                    "Y".into()
                } else {
                    format!("Y^{}", m.y)
                });
            }
            for (i, &e) in m.a.iter().enumerate() {
                if e > 0 {
                    let name = if i == 0 {
                        "A".into()
                    } else {
                        format!("A{}", i + 1)
                    };
                    factors.push(if e == 1 { name } else { format!("{name}^{e}") });
                }
            }
            for (i, &e) in m.b.iter().enumerate() {
                if e > 0 {
                    let name = if i == 0 {
                        "B".into()
                    } else {
                        format!("B{}", i + 1)
                    };
                    factors.push(if e == 1 { name } else { format!("{name}^{e}") });
                }
            }
            let mono = if factors.is_empty() {
                "1".into()
            } else {
                factors.join("*")
            };
            parts.push(format!("({})*{}", crate::rat::rat_to_string(c), mono));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::target_config;

    #[test]
    fn d_rules_match_series() {
        let t = target_config(6).unwrap();
        let g = crate::ifun::generators_with_tower(&t, 12, 7);
        // D of a mixed monomial matches the series derivative exactly
        let p = GenPoly::y().mul(&GenPoly::a_m(1)).mul(&GenPoly::b_m(2));
        let lhs = p.d().expand(&g);
        let rhs = p.expand(&g).d();
        assert!(lhs.eq_to_order(&rhs));
    }

    #[test]
    fn canonical_keys() {
        let a = GenPoly::a_m(2).mul(&GenPoly::a_m(2));
        assert_eq!(a.terms.len(), 1);
        let m = a.terms.keys().next().unwrap();
        assert_eq!(m.a, vec![0, 2]);
    }
}
