//! Genus-zero Gromov-Witten theory of the hypersurface: the S-matrix of the
//! quantum connection, the Yukawa coupling and its rational normalization,
//! the genus-zero invariants through the mirror map, and the normalized
//! potential recursion.

use crate::error::{Error, Result};
use crate::genpoly::GenPoly;
use crate::ifun::Generators;
use crate::laurent::LaurentBlock;
use crate::rat::{rat_i64, rat_to_string, Rat};
use crate::series::QSeries;
use crate::targets::TargetConfig;
use num_traits::{One, Zero};

/// 4x4 matrix of z-Laurent blocks with rational q-series entries, in the
/// basis 1, H, H², H³; entry[a][b] is the H^a-component of the image of
/// H^b.
#[derive(Clone, Debug)]
pub struct SZMatrix {
    pub entries: Vec<Vec<LaurentBlock<Rat>>>,
    pub order: usize,
}

fn zero_block(order: usize) -> LaurentBlock<Rat> {
    LaurentBlock::term(0, QSeries::rat_zero(order))
}

impl SZMatrix {
    pub fn entry(&self, a: usize, b: usize) -> &LaurentBlock<Rat> {
        &self.entries[a][b]
    }

    /// The adjoint with respect to the Poincaré pairing on 1..H³ (pairing
    /// couples H^a with H^{3-a}): matrix anti-transpose.
    pub fn adjoint(&self) -> SZMatrix {
        let mut entries = vec![vec![zero_block(self.order); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                entries[a][b] = self.entries[3 - b][3 - a].clone();
            }
        }
        SZMatrix {
            entries,
            order: self.order,
        }
    }

    pub fn negate_z(&self) -> SZMatrix {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.negate_z()).collect())
            .collect();
        SZMatrix {
            entries,
            order: self.order,
        }
    }

    pub fn matmul(&self, rhs: &SZMatrix) -> SZMatrix {
        let mut entries = vec![vec![zero_block(self.order.min(rhs.order)); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut acc: Option<LaurentBlock<Rat>> = None;
                for c in 0..4 {
                    let p = self.entries[a][c].mul(&rhs.entries[c][b]);
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.add(&p),
                    });
                }
                entries[a][b] = acc.unwrap();
            }
        }
        SZMatrix {
            entries,
            order: self.order.min(rhs.order),
        }
    }

    /// Apply to a 4-vector of Laurent blocks.
    pub fn apply(&self, v: &[LaurentBlock<Rat>; 4]) -> [LaurentBlock<Rat>; 4] {
        std::array::from_fn(|a| {
            let mut acc = self.entries[a][0].mul(&v[0]);
            for c in 1..4 {
                acc = acc.add(&self.entries[a][c].mul(&v[c]));
            }
            acc
        })
    }
}

/// (H + zD) applied to a column vector over the H-basis.
fn connection_apply(col: &[LaurentBlock<Rat>; 4]) -> [LaurentBlock<Rat>; 4] {
    std::array::from_fn(|a| {
        let dz = col[a].d().shift_z(1);
        if a == 0 {
            dz
        } else {
            dz.add(&col[a - 1])
        }
    })
}

/// Build S^Z(z)* as the fundamental solution of the quantum connection,
/// seeded by the normalized I-function column z^{-1} I/I_0: each next
/// column is (H + zD) of the previous one divided by the matching
/// subdiagonal entry of the connection matrix (I11, I22, I11), and the
/// chain must terminate: (H + zD) applied to the last column vanishes.
/// That final identity and the unit z^0-part are the context of the
/// construction and both are checked.
pub fn s_z_matrix(t: &TargetConfig, order: usize) -> Result<SZMatrix> {
    let g = crate::ifun::generators(t, order);
    s_z_matrix_from(&g)
}

pub fn s_z_matrix_from(g: &Generators) -> Result<SZMatrix> {
    let order = g.order;
    let col0: [LaurentBlock<Rat>; 4] = [
        LaurentBlock::term(0, QSeries::rat_one(order)),
        LaurentBlock::term(-1, g.j1.clone()),
        LaurentBlock::term(-2, g.j2.clone()),
        LaurentBlock::term(-3, g.j3.clone()),
    ];
    let subdiag = [g.i11.clone(), g.i22.clone(), g.i11.clone()];
    let mut cols = vec![col0];
    for b in 0..3 {
        let inv = subdiag[b]
            .invert()
            .expect("subdiagonal entries have constant term 1");
        let nxt = connection_apply(&cols[b]);
        let col: [LaurentBlock<Rat>; 4] = std::array::from_fn(|a| nxt[a].scale_series(&inv));
        // unit z^0-part: the diagonal entry is exactly 1, above-diagonal 0
        for (a, entry) in col.iter().enumerate() {
            let z0 = entry.coeff(0);
            let expect = if a == b + 1 {
                QSeries::rat_one(order)
            } else {
                QSeries::rat_zero(order)
            };
            if !z0.eq_to_order(&expect) {
                return Err(Error::ConnectionResidualNonzero(format!(
                    "column {} H^{a} z^0-part is not {}",
                    b + 1,
                    if a == b + 1 { "1" } else { "0" }
                )));
            }
        }
        cols.push(col);
    }
    // top of the chain: (H + zD) kills the last column
    let top = connection_apply(&cols[3]);
    for (a, entry) in top.iter().enumerate() {
        if !entry.is_zero() {
            let loc = entry.first_nonzero().unwrap();
            return Err(Error::ConnectionResidualNonzero(format!(
                "(H+zD) S* H^3 has H^{a}-component nonzero at z^{} q^{}",
                loc.0, loc.1
            )));
        }
    }
    let mut entries = vec![vec![zero_block(order); 4]; 4];
    for (b, col) in cols.iter().enumerate() {
        for a in 0..4 {
            entries[a][b] = col[a].clone();
        }
    }
    Ok(SZMatrix { entries, order })
}

/// Residual of (H + zD)S* − S*·A^Z over all columns; identically zero by
/// construction for the first three and contentful for the last. Returns
/// the first nonzero locus if any.
pub fn connection_residual(t: &TargetConfig, order: usize) -> Result<Option<(usize, i64, usize)>> {
    let g = crate::ifun::generators(t, order);
    let s = s_z_matrix_from(&g)?;
    let subdiag = [g.i11.clone(), g.i22.clone(), g.i11.clone()];
    for b in 0..4 {
        let col: [LaurentBlock<Rat>; 4] = std::array::from_fn(|a| s.entries[a][b].clone());
        let lhs = connection_apply(&col);
        for a in 0..4 {
            let mut rhs = zero_block(order);
            if b < 3 {
                rhs = s.entries[a][b + 1].scale_series(&subdiag[b]);
            }
            let diff = lhs[a].sub(&rhs);
            if !diff.is_zero() {
                let (z, q) = diff.first_nonzero().unwrap();
                return Ok(Some((b, z, q)));
            }
        }
    }
    Ok(None)
}

/// The Yukawa coupling p_k I22 / I11 as an exact q-series.
pub fn yukawa(t: &TargetConfig, order: usize) -> QSeries {
    let g = crate::ifun::generators(t, order);
    yukawa_from(t, &g)
}

pub fn yukawa_from(t: &TargetConfig, g: &Generators) -> QSeries {
    g.i22.mul(&g.i11.invert().expect("I11 unit")).scale(&t.p_k)
}

#[derive(Clone, Debug)]
pub struct YukawaReport {
    pub k: u64,
    pub order: usize,
    pub pass: bool,
    pub first_failure: Option<usize>,
}

/// Check the normalization I0² I11² I22 = 1/(1 − rq) coefficient-wise.
pub fn verify_yukawa_identity(t: &TargetConfig, order: usize) -> YukawaReport {
    let g = crate::ifun::generators(t, order);
    verify_yukawa_from(t, &g)
}

pub fn verify_yukawa_from(t: &TargetConfig, g: &Generators) -> YukawaReport {
    let lhs = g.i0.pow(2).mul(&g.i11.pow(2)).mul(&g.i22);
    let (pass, order, first_failure) = lhs.eq_report(&g.y);
    YukawaReport {
        k: t.k,
        order,
        pass,
        first_failure,
    }
}

#[derive(Clone, Debug)]
pub struct Genus0Report {
    pub k: u64,
    /// Yukawa in the q-coordinate
    pub yukawa_q_series: QSeries,
    /// Yukawa pushed through the mirror map, in the Q-coordinate
    pub yukawa_kahler: QSeries,
    /// N_{0,d} for d = 1..=dmax
    pub invariants: Vec<Rat>,
    /// denominators observed (logged, not asserted)
    pub denominators: Vec<String>,
}

/// Invert the mirror map Q = q e^{J1} as a formal series by fixed-point
/// iteration: q(Q) = Q / E(q(Q)) converges one order per pass.
pub fn mirror_inverse(g: &Generators) -> Result<QSeries> {
    let order = g.order;
    let e = g.j1.exp().expect("J1 vanishes at 0");
    if e.coeff(0) != &Rat::one() {
        return Err(Error::MirrorMapNotInvertible);
    }
    let e_inv = e.invert()?;
    let q_lead = QSeries::rat_zero(order).add(&QSeries::rat_one(order).mul_qpow(1).truncate(order));
    let mut x = q_lead.clone();
    for _ in 0..=order {
        // x <- Q * E^{-1}(x)
        x = q_lead.mul(&e_inv.compose(&x)?);
    }
    // round trip must be the identity series
    let mirror = q_lead.mul(&e);
    let round = mirror.compose(&x)?;
    if !round.eq_to_order(&q_lead) {
        return Err(Error::MirrorMapNotInvertible);
    }
    Ok(x)
}

/// Genus-zero invariants N_{0,d} via the third logarithmic derivative of
/// the potential: push the Yukawa series to the Kähler coordinate,
/// subtract the classical constant p_k, and divide the Q^d coefficient by
/// d³. A second, independent route extracts the same numbers from the
/// H²- and H³-components of the normalized I-function through the
/// string/divisor structure; both must agree exactly.
pub fn genus0_invariants(t: &TargetConfig, dmax: usize) -> Result<Genus0Report> {
    let order = dmax + 2;
    let g = crate::ifun::generators(t, order);
    let kq = yukawa_from(t, &g);
    let x = mirror_inverse(&g)?;
    let push = kq.compose(&x)?;
    if push.coeff(0) != &t.p_k {
        return Err(Error::ConnectionResidualNonzero(
            "Kähler-coordinate Yukawa constant term is not p_k".into(),
        ));
    }
    let mut invariants = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let d3 = rat_i64(d as i64).pow(3);
        invariants.push(push.coeff(d) / d3);
    }
    // independent route: T2 := (J2 - J1²/2)∘q(Q) satisfies
    // p_k T2 = sum_d d N_d Q^d
    let t2 =
        g.j2.sub(&g.j1.mul(&g.j1).scale(&Rat::new(1.into(), 2.into())))
            .compose(&x)?;
    for d in 1..=dmax {
        let from_t2 = t2.coeff(d) * &t.p_k / rat_i64(d as i64);
        if from_t2 != invariants[d - 1] {
            return Err(Error::RoutesDisagree(format!(
                "N_(0,{d}): Yukawa route {} vs J-component route {}",
                rat_to_string(&invariants[d - 1]),
                rat_to_string(&from_t2)
            )));
        }
    }
    // third check: the H³-component identity
    // p_k (J3 - J1³/6)∘x = nu · p_k T2 - 2 sum_d N_d Q^d with nu = J1∘x
    let t3 =
        g.j3.sub(&g.j1.pow(3).scale(&Rat::new(1.into(), 6.into())))
            .compose(&x)?;
    let nu = g.j1.compose(&x)?;
    let mut f_inst = QSeries::rat_zero(order);
    for d in 1..=dmax {
        let mut v = vec![Rat::zero(); d + 1];
        v[d] = invariants[d - 1].clone();
        f_inst = f_inst.add(&QSeries::new(v, order, &Rat::zero()));
    }
    let lhs = t3.scale(&t.p_k).truncate(dmax);
    let rhs = nu
        .mul(&t2)
        .scale(&t.p_k)
        .sub(&f_inst.scale(&rat_i64(2)))
        .truncate(dmax);
    if !lhs.eq_to_order(&rhs) {
        return Err(Error::RoutesDisagree("H³-component identity failed".into()));
    }
    let denominators = invariants.iter().map(|r| r.denom().to_string()).collect();
    Ok(Genus0Report {
        k: t.k,
        yukawa_q_series: kq,
        yukawa_kahler: push,
        invariants,
        denominators,
    })
}

/// One step of the normalized-potential recursion
/// P_{g,n+1} = (D + (g−1)(2B + 1 − Y) − nA) P_{g,n}
/// on generator-tower polynomials.
pub fn p_recursion_poly(p: &GenPoly, g_genus: i64, n_pts: i64) -> GenPoly {
    let two_b = GenPoly::b_m(1).scale(&rat_i64(2));
    let lin = two_b
        .add(&GenPoly::one())
        .sub(&GenPoly::y())
        .scale(&rat_i64(g_genus - 1))
        .sub(&GenPoly::a_m(1).scale(&rat_i64(n_pts)));
    p.d().add(&lin.mul(p))
}

/// The same operator applied directly to a q-series.
pub fn p_recursion_series(p: &QSeries, g_genus: i64, n_pts: i64, g: &Generators) -> QSeries {
    let one = QSeries::rat_one(g.order);
    let lin = g.b[0]
        .scale(&rat_i64(2))
        .add(&one)
        .sub(&g.y)
        .scale(&rat_i64(g_genus - 1))
        .sub(&g.a[0].scale(&rat_i64(n_pts)));
    p.d().add(&lin.mul(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{all_targets, target_config};

    #[test]
    fn yukawa_constant_terms() {
        for t in all_targets() {
            let y = yukawa(&t, 4);
            assert_eq!(y.coeff(0), &t.p_k, "k={}", t.k);
        }
    }

    #[test]
    fn yukawa_normalization_k6_k8() {
        for k in [6u32, 8] {
            let t = target_config(k).unwrap();
            let rep = verify_yukawa_identity(&t, 20);
            assert!(rep.pass, "k={k} first failure {:?}", rep.first_failure);
        }
    }

    #[test]
    fn yukawa_mutation_detected() {
        // perturbing I22 by +q^5 must fail at coefficient 5
        let t = target_config(6).unwrap();
        let mut g = crate::ifun::generators(&t, 20);
        g.i22 = g.i22.add(&QSeries::rat_one(20).mul_qpow(5).truncate(20));
        let rep = verify_yukawa_from(&t, &g);
        assert!(!rep.pass);
        assert_eq!(rep.first_failure, Some(5));
    }

    #[test]
    fn s_matrix_entries_and_residual() {
        let t = target_config(6).unwrap();
        let order = 15;
        let g = crate::ifun::generators(&t, order);
        let s = s_z_matrix_from(&g).unwrap();
        // z^0-part is the identity
        for a in 0..4 {
            for b in 0..4 {
                let z0 = s.entry(a, b).coeff(0);
                if a == b {
                    assert!(z0.eq_to_order(&QSeries::rat_one(order)));
                } else {
                    assert!(z0.is_zero());
                }
            }
        }
        // column 0 carries the J-components: (2,0) at 1/z² is J2, (3,0) at
        // 1/z³ is J3
        assert!(s.entry(2, 0).coeff(-2).eq_to_order(&g.j2));
        assert!(s.entry(3, 0).coeff(-3).eq_to_order(&g.j3));
        assert!(s.entry(1, 0).coeff(-1).eq_to_order(&g.j1));
        // (2,1) entry is (J1 + D J2)/I11
        let j2p = g.j1.add(&g.j2.d()).mul(&g.i11.invert().unwrap());
        assert!(s.entry(2, 1).coeff(-1).eq_to_order(&j2p));
        // residual of the full connection (columns 0..3) vanishes
        assert_eq!(connection_residual(&t, order).unwrap(), None);
    }

    #[test]
    fn s_matrix_symplectic_and_displayed_corner() {
        let t = target_config(6).unwrap();
        let order = 12;
        let g = crate::ifun::generators(&t, order);
        let s = s_z_matrix_from(&g).unwrap();
        // S(z) S(-z)* = Id
        let s_op = s.adjoint();
        let prod = s_op.matmul(&s.negate_z());
        for a in 0..4 {
            for b in 0..4 {
                let e = &prod.entries[a][b];
                for z in e.lo()..=e.hi() {
                    let c = e.coeff(z);
                    if a == b && z == 0 {
                        assert!(c.eq_to_order(&QSeries::rat_one(order)));
                    } else {
                        assert!(c.is_zero(), "entry ({a},{b}) z^{z}");
                    }
                }
            }
        }
        // the (3,1) corner combination (J2'/J1')J1 - J2 against the solved
        // entry at 1/z²
        let j1p = g.i11.clone();
        let j2p = g.j1.add(&g.j2.d());
        let corner = j2p.mul(&j1p.invert().unwrap()).mul(&g.j1).sub(&g.j2);
        assert!(s.entry(3, 1).coeff(-2).eq_to_order(&corner));
    }

    #[test]
    fn genus0_invariant_anchors() {
        // leading invariants for the three targets, dual-route verified
        let expect = [(6u32, 7884i64), (8, 29504), (10, 231200)];
        for (k, n1) in expect {
            let t = target_config(k).unwrap();
            let rep = genus0_invariants(&t, 3).unwrap();
            assert_eq!(rep.invariants[0], rat_i64(n1), "k={k}");
            assert_eq!(rep.yukawa_kahler.coeff(0), &t.p_k);
        }
    }

    #[test]
    fn mirror_round_trip() {
        for t in all_targets() {
            let g = crate::ifun::generators(&t, 10);
            let x = mirror_inverse(&g).unwrap();
            let mirror = QSeries::rat_one(10)
                .mul_qpow(1)
                .truncate(10)
                .mul(&g.j1.exp().unwrap());
            let round = x.compose(&mirror).unwrap();
            let id = QSeries::rat_one(10).mul_qpow(1).truncate(10);
            assert!(round.eq_to_order(&id), "k={}", t.k);
        }
    }

    #[test]
    fn p_recursion_base_cases() {
        // P=1, g=0, n=3 -> Y - 1 - 2B - 3A
        let p = GenPoly::one();
        let next = p_recursion_poly(&p, 0, 3);
        let expect = GenPoly::y()
            .sub(&GenPoly::one())
            .sub(&GenPoly::b_m(1).scale(&rat_i64(2)))
            .sub(&GenPoly::a_m(1).scale(&rat_i64(3)));
        assert_eq!(next, expect);
        // P=1, g=1, n=1 -> -A
        let next = p_recursion_poly(&p, 1, 1);
        assert_eq!(next, GenPoly::a_m(1).scale(&rat_i64(-1)));
    }

    #[test]
    fn p_recursion_dual_route() {
        let t = target_config(6).unwrap();
        let g = crate::ifun::generators_with_tower(&t, 12, 8);
        // chain P_{0,3} = 1 -> P_{0,4} -> P_{0,5}, both routes
        let mut poly = GenPoly::one();
        let mut series = QSeries::rat_one(12);
        for n in 3..5i64 {
            poly = p_recursion_poly(&poly, 0, n);
            series = p_recursion_series(&series, 0, n, &g);
            assert!(poly.expand(&g).eq_to_order(&series), "n={n}");
        }
    }
}
