//! Finite-generation certificates: decide whether a q-series agrees with a
//! polynomial in the five generators A, B, B2, B3, Y through a fitting
//! window plus guard coefficients, and emit the polynomial when it does.
//!
//! The solver fits the exact linear system of q-coefficients of generator
//! monomials (graded lexicographic order, deterministic pivoting) and then
//! re-expands the candidate against the guard coefficients beyond the
//! window. A fit without guards is only ever reported as underdetermined;
//! relations among the generators make the system rank-deficient, so the
//! emitted certificate is the greedy sparsest solution under the fixed
//! ordering, reproducible byte for byte.

use crate::error::{Error, Result};
use crate::ifun::Generators;
use crate::rat::{rat_to_string, Rat};
use crate::series::QSeries;
use num_traits::Zero;
use serde::Serialize;

/// Monomial exponents over (A, B, B2, B3, Y).
pub type Exps = [u32; 5];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Certified,
    RefutedAtDegree,
    Underdetermined,
}

#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub target_k: u64,
    pub degree_bound: u32,
    pub terms: Vec<(Exps, Rat)>,
    pub matched_order: usize,
    pub guard_order: usize,
    pub status: CertStatus,
}

#[derive(Serialize)]
struct CertJson {
    target: u64,
    degree_bound: u32,
    monomials: Vec<MonJson>,
    matched_order: usize,
    guard_order: usize,
}

#[derive(Serialize)]
struct MonJson {
    exponents: [u32; 5],
    coeff: String,
}

impl MembershipCertificate {
    pub fn to_json(&self) -> String {
        let j = CertJson {
            target: self.target_k,
            degree_bound: self.degree_bound,
            monomials: self
                .terms
                .iter()
                .map(|(e, c)| MonJson {
                    exponents: *e,
                    coeff: rat_to_string(c),
                })
                .collect(),
            matched_order: self.matched_order,
            guard_order: self.guard_order,
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = ["A", "B", "B2", "B3", "Y"];
        let mut parts = vec![];
        for (e, c) in &self.terms {
            let mut factors = vec![];
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    factors.push(names[i].to_string());
                } else if p > 1 {
                    factors.push(format!("{}^{}", names[i], p));
                }
            }
            let mono = if factors.is_empty() {
                "1".into()
            } else {
                factors.join("*")
            };
            parts.push(format!("({})*{}", rat_to_string(c), mono));
        }
        parts.join(" + ")
    }
}

/// Graded-lexicographic monomials of total degree <= bound over 5
/// variables.
pub fn monomials(bound: u32) -> Vec<Exps> {
    let mut out = vec![];
    for total in 0..=bound {
        let mut stack = vec![(0usize, total, [0u32; 5])];
        while let Some((pos, rem, acc)) = stack.pop() {
            if pos == 4 {
                let mut m = acc;
                m[4] = rem;
                out.push(m);
                continue;
            }
            // lexicographic within a grade: highest exponent on the first
            // variable first
            for e in (0..=rem).rev() {
                let mut m = acc;
                m[pos] = e;
                stack.push((pos + 1, rem - e, m));
            }
        }
    }
    // stack ordering reversed lexicographic; fix deterministically
    let key = |m: &Exps| {
        let total: u32 = m.iter().sum();
        let mut v = vec![total];
        v.extend(m.iter().map(|&e| u32::MAX - e));
        v
    };
    out.sort_by_key(key);
    out.dedup();
    out
}

fn expand_monomial(g: &Generators, e: &Exps, order: usize) -> QSeries {
    let gens = g.ring_generators();
    let mut acc = QSeries::rat_one(order);
    for (i, &p) in e.iter().enumerate() {
        for _ in 0..p {
            acc = acc.mul(&gens[i].truncate(order));
        }
    }
    acc
}

/// Expand all monomials, reusing each one's predecessor (first variable
/// exponent decremented) so every expansion costs one convolution.
fn expand_all(g: &Generators, mons: &[Exps], order: usize) -> Vec<QSeries> {
    use std::collections::BTreeMap;
    let gens = g.ring_generators();
    let mut cache: BTreeMap<Exps, QSeries> = BTreeMap::new();
    cache.insert([0; 5], QSeries::rat_one(order));
    let mut out = Vec::with_capacity(mons.len());
    for m in mons {
        if let Some(s) = cache.get(m) {
            out.push(s.clone());
            continue;
        }
        let i = m.iter().position(|&e| e > 0).expect("nonconstant");
        let mut prev = *m;
        prev[i] -= 1;
        let base = cache
            .get(&prev)
            .cloned()
            .unwrap_or_else(|| expand_monomial(g, &prev, order));
        let s = base.mul(&gens[i].truncate(order));
        cache.insert(*m, s.clone());
        out.push(s);
    }
    out
}

/// Fit `s` as a polynomial of total degree <= `degree_bound` in the five
/// generators; the fitting window is everything except the last `guard`
/// coefficients, which must then be matched by re-expansion.
pub fn find_polynomial(
    s: &QSeries,
    g: &Generators,
    degree_bound: u32,
    guard: usize,
) -> Result<MembershipCertificate> {
    let mons = monomials(degree_bound);
    let need = mons.len() + guard;
    if s.order() < need {
        return Err(Error::InsufficientOrder {
            have: s.order(),
            need,
        });
    }
    let order = s.order().min(g.order);
    let fit = order - guard;
    let cols: Vec<QSeries> = expand_all(g, &mons, order);
    let rows: Vec<Vec<Rat>> = (0..=fit)
        .map(|d| cols.iter().map(|c| c.coeff(d).clone()).collect())
        .collect();
    let rhs: Vec<Rat> = (0..=fit).map(|d| s.coeff(d).clone()).collect();
    // wide systems go through the deterministic modular support hint;
    // the result is verified exactly either way
    let solved = if mons.len() > 24 {
        crate::linalg::solve_with_support_hint(&rows, &rhs)
    } else {
        crate::linalg::solve(&rows, &rhs)
    };
    let Some(sol) = solved else {
        return Ok(MembershipCertificate {
            target_k: 0,
            degree_bound,
            terms: vec![],
            matched_order: fit,
            guard_order: guard,
            status: CertStatus::RefutedAtDegree,
        });
    };
    let terms: Vec<(Exps, Rat)> = mons
        .iter()
        .zip(&sol.x)
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    // guard verification: re-expand and compare the full window
    let mut expansion = QSeries::rat_zero(order);
    for (m, c) in &terms {
        expansion = expansion.add(&expand_monomial(g, m, order).scale(c));
    }
    for d in (fit + 1)..=order {
        if expansion.coeff(d) != s.coeff(d) {
            return Err(Error::GuardFailed(d));
        }
    }
    let status = if guard == 0 {
        CertStatus::Underdetermined
    } else {
        CertStatus::Certified
    };
    Ok(MembershipCertificate {
        target_k: 0,
        degree_bound,
        terms,
        matched_order: fit,
        guard_order: guard,
        status,
    })
}

#[derive(Debug)]
pub struct DClosureReport {
    pub k: u64,
    pub order: usize,
    pub guard: usize,
    /// (name, certificate)
    pub witnesses: Vec<(String, MembershipCertificate)>,
}

/// Witnesses that the five-generator ring absorbs the derivation: solver
/// certificates for DA, DB2, DB3, A2 and B4.
pub fn dclosure_witnesses(
    t: &crate::targets::TargetConfig,
    order: usize,
) -> Result<DClosureReport> {
    let guard = 8;
    let g = crate::ifun::generators_with_tower(t, order, 6);
    // DB = B2 - B² holds by the chain rule, no solver needed
    let db = g.b[0].d();
    let chain = g.b[1].sub(&g.b[0].mul(&g.b[0]));
    assert!(db.eq_to_order(&chain), "chain rule for DB failed");
    let jobs: Vec<(String, QSeries)> = vec![
        ("DA".into(), g.a[0].d()),
        ("DB2".into(), g.b[1].d()),
        ("DB3".into(), g.b[2].d()),
        ("A2".into(), g.a[1].clone()),
        ("B4".into(), g.b[3].clone()),
    ];
    let mut witnesses = vec![];
    for (name, series) in jobs {
        let mut cert = find_polynomial(&series, &g, 2, guard)?;
        cert.target_k = t.k;
        if cert.status != CertStatus::Certified {
            return Err(Error::MembershipFailed(format!("{name} for k = {}", t.k)));
        }
        witnesses.push((name, cert));
    }
    Ok(DClosureReport {
        k: t.k,
        order,
        guard,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i64;
    use crate::targets::target_config;

    #[test]
    fn monomial_count_and_order() {
        let m = monomials(2);
        assert_eq!(m.len(), 21); // 1 + 5 + 15
        assert_eq!(m[0], [0, 0, 0, 0, 0]);
        // grade 1 block starts with A
        assert_eq!(m[1], [1, 0, 0, 0, 0]);
        assert_eq!(m[5], [0, 0, 0, 0, 1]);
        // grade 2 block starts with A²
        assert_eq!(m[6], [2, 0, 0, 0, 0]);
    }

    #[test]
    fn trivial_certificates() {
        let t = target_config(6).unwrap();
        let g = crate::ifun::generators(&t, 31);
        // the Y series certifies as "Y"
        let cert = find_polynomial(&g.y, &g, 1, 8).unwrap();
        assert_eq!(cert.status, CertStatus::Certified);
        assert_eq!(cert.terms, vec![([0, 0, 0, 0, 1], rat_i64(1))]);
        // the normalized Yukawa combination I0² I11² I22 certifies as "Y"
        let s = g.i0.pow(2).mul(&g.i11.pow(2)).mul(&g.i22);
        let cert = find_polynomial(&s, &g, 1, 8).unwrap();
        assert_eq!(cert.terms, vec![([0, 0, 0, 0, 1], rat_i64(1))]);
    }

    #[test]
    fn insufficient_order_reported() {
        let t = target_config(6).unwrap();
        let g = crate::ifun::generators(&t, 10);
        assert!(matches!(
            find_polynomial(&g.y, &g, 2, 8),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn dclosure_k6() {
        let t = target_config(6).unwrap();
        let rep = dclosure_witnesses(&t, 30).unwrap();
        assert_eq!(rep.witnesses.len(), 5);
        for (name, cert) in &rep.witnesses {
            assert_eq!(cert.status, CertStatus::Certified, "{name}");
            // re-expansion identity is enforced by construction; check the
            // certificate is nonempty
            assert!(!cert.terms.is_empty(), "{name}");
        }
    }

    #[test]
    fn guard_rejects_wrong_series() {
        // a series that matches Y to the fitting window but deviates in
        // the guard must be rejected, not certified
        let t = target_config(6).unwrap();
        let g = crate::ifun::generators(&t, 31);
        let mut coeffs: Vec<Rat> = (0..=31).map(|d| g.y.coeff(d).clone()).collect();
        coeffs[30] += rat_i64(1);
        let s = QSeries::new(coeffs, 31, &crate::rat::rat_zero());
        match find_polynomial(&s, &g, 1, 8) {
            Err(Error::GuardFailed(d)) => assert_eq!(d, 30),
            other => panic!("expected guard failure, got {other:?}"),
        }
    }
}
