//! Non-commutative differential operators in D and multiplication by
//! polynomials of X, normalized with coefficients on the left:
//! sum_j f_j(X) D^{j}. The commutation rule is D·f(X) = f(X)·D + 𝔡f with
//! 𝔡f = X(1−X) f'(X), matching D = q d/dq acting through X.

use crate::poly::Poly;
use crate::rat::Rat;
use num_traits::One;

/// 𝔡 f = X(1-X) f'
pub fn ddx(f: &Poly) -> Poly {
    let x = Poly::x();
    let one_minus_x = Poly::one().sub(&x);
    f.derivative().mul(&x).mul(&one_minus_x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PFOperator {
    /// coefficient of D^j at index j; normal form keeps the vector dense
    /// and trimmed of leading zero operators
    pub coeffs: Vec<Poly>,
}

impl PFOperator {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PFOperator { coeffs }
    }

    pub fn zero() -> Self {
        PFOperator { coeffs: vec![] }
    }

    pub fn identity() -> Self {
        PFOperator {
            coeffs: vec![Poly::one()],
        }
    }

    pub fn d() -> Self {
        PFOperator {
            coeffs: vec![Poly::zero(), Poly::one()],
        }
    }

    pub fn mul_poly(f: Poly) -> Self {
        PFOperator::new(vec![f])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> Poly {
        self.coeffs.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PFOperator::new((0..n).map(|j| self.coeff(j).add(&rhs.coeff(j))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PFOperator::new(self.coeffs.iter().map(|f| f.scale(c)).collect())
    }

    /// Composition self ∘ rhs, commuting D-powers through the rhs
    /// coefficients: D^a ∘ g = sum_i C(a,i) 𝔡^i(g) D^{a-i}.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = PFOperator::zero();
        for (a, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (b, g) in rhs.coeffs.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let mut dg = g.clone();
                for i in 0..=a {
                    let binc = Rat::from_integer(crate::rat::binom_u64(a as u64, i as u64));
                    let mut term = vec![Poly::zero(); a - i + b + 1];
                    term[a - i + b] = f.mul(&dg).scale(&binc);
                    out = out.add(&PFOperator::new(term));
                    if i < a {
                        dg = ddx(&dg);
                    }
                }
            }
        }
        out
    }

    /// Apply to a polynomial in X.
    pub fn apply(&self, h: &Poly) -> Poly {
        let mut acc = Poly::zero();
        let mut dh = h.clone();
        for f in &self.coeffs {
            acc = acc.add(&f.mul(&dh));
            dh = ddx(&dh);
        }
        acc
    }

    /// Substitute D -> D + g(X)· , expanding the powers.
    pub fn subst_d(&self, g: &Poly) -> Self {
        // (D + g)^j built iteratively
        let shifted = PFOperator::new(vec![g.clone(), Poly::one()]);
        let mut power = PFOperator::identity();
        let mut out = PFOperator::zero();
        for (j, f) in self.coeffs.iter().enumerate() {
            if j > 0 {
                power = shifted.compose(&power);
            }
            if !f.is_zero() {
                out = out.add(&PFOperator::mul_poly(f.clone()).compose(&power));
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (j, f) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero() {
                continue;
            }
            let cs: Vec<String> = f
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(i, c)| match i {
                    0 => crate::rat::rat_to_string(c),
                    1 => format!("{} X", crate::rat::rat_to_string(c)),
                    _ => format!("{} X^{i}", crate::rat::rat_to_string(c)),
                })
                .collect();
            let fs = cs.join(" + ");
            match j {
                0 => parts.push(format!("({fs})")),
                1 => parts.push(format!("({fs}) D")),
                _ => parts.push(format!("({fs}) D^{j}")),
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i64;

    #[test]
    fn commutator_is_multiplication_by_x_one_minus_x() {
        // (D∘X − X∘D) h = X(1−X) h for any polynomial h
        let d = PFOperator::d();
        let x = PFOperator::mul_poly(Poly::x());
        let comm = d.compose(&x).sub(&x.compose(&d));
        let xx = Poly::x().mul(&Poly::one().sub(&Poly::x()));
        for h in [
            Poly::one(),
            Poly::x(),
            Poly::new(vec![rat_i64(3), rat_i64(-2), rat_i64(5), rat_i64(1)]),
        ] {
            assert_eq!(comm.apply(&h), xx.mul(&h));
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let a = PFOperator::new(vec![Poly::x(), Poly::one(), Poly::x().mul(&Poly::x())]);
        let b = PFOperator::new(vec![Poly::one().sub(&Poly::x()), Poly::x()]);
        let h = Poly::new(vec![rat_i64(1), rat_i64(4), rat_i64(-3)]);
        let lhs = a.compose(&b).apply(&h);
        let rhs = a.apply(&b.apply(&h));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn subst_d_matches_conjugation_rule() {
        // substituting D -> D + cX into D² and applying to h equals
        // (D + cX)((D + cX) h)
        let c = crate::rat::rat_frac(-5, 7);
        let g = Poly::monomial(c.clone(), 1);
        let d2 = PFOperator::new(vec![Poly::zero(), Poly::zero(), Poly::one()]);
        let s = d2.subst_d(&g);
        let h = Poly::new(vec![rat_i64(2), rat_i64(1), rat_i64(1)]);
        let step = |f: &Poly| ddx(f).add(&g.mul(f));
        assert_eq!(s.apply(&h), step(&step(&h)));
    }
}
