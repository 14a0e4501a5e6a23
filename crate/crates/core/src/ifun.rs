//! Hypergeometric series attached to a target: the four-component
//! I-function of the hypersurface, the generator tower (A_m, B_m, Y, I11,
//! I22), the master-space I-function over the state ring in both z-window
//! conventions, and the level-1 mirror map.

use crate::error::{Error, Result};
use crate::laurent::LaurentBlock;
use crate::poly::Poly;
use crate::quotient::{h_ring, p_ring, QElem, QuotientRing};
use crate::rat::{rat_i64, Rat};
use crate::ring::Ring;
use crate::series::{QSeries, TruncSeries};
use crate::targets::TargetConfig;
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct ZIFunction {
    pub i0: QSeries,
    pub i1: QSeries,
    pub i2: QSeries,
    pub i3: QSeries,
}

/// Multiply truncated u-polynomials (u = H/z), keeping degree < 4.
fn umul(a: &Poly, b: &Poly, cap: usize) -> Poly {
    let mut v = vec![Rat::zero(); cap];
    for (i, x) in a.coeffs.iter().enumerate().take(cap) {
        if num_traits::Zero::is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if i + j >= cap {
                break;
            }
            v[i + j] += x * y;
        }
    }
    Poly::new(v)
}

fn uinv(a: &Poly, cap: usize) -> Poly {
    let c0 = a.coeff(0);
    assert!(!num_traits::Zero::is_zero(&c0));
    let c0i = Rat::one() / c0;
    let mut inv = vec![Rat::zero(); cap];
    inv[0] = c0i.clone();
    for n in 1..cap {
        let mut acc = Rat::zero();
        for i in 1..=n {
            acc += a.coeff(i) * &inv[n - i];
        }
        inv[n] = -acc * &c0i;
    }
    Poly::new(inv)
}

/// The degree-d coefficient of the I-function as a u-polynomial (u = H/z):
/// prod_{m<=kd}(m + k u) / prod_i prod_{m<=a_i d}(m + a_i u) in Q[u]/(u^4).
fn z_ifun_degree(t: &TargetConfig, d: u64) -> Poly {
    let cap = 4;
    let mut num = Poly::one();
    for m in 1..=(t.k * d) {
        num = umul(
            &num,
            &Poly::new(vec![rat_i64(m as i64), rat_i64(t.k as i64)]),
            cap,
        );
    }
    let mut den = Poly::one();
    for &a in &t.weights {
        for m in 1..=(a * d) {
            den = umul(
                &den,
                &Poly::new(vec![rat_i64(m as i64), rat_i64(a as i64)]),
                cap,
            );
        }
    }
    umul(&num, &uinv(&den, cap), cap)
}

/// Exact summation of the I-function; the weights sum to k, so the z-powers
/// cancel degree by degree and exactly four components survive (H^4 = 0).
pub fn z_ifunction(t: &TargetConfig, order: usize) -> ZIFunction {
    let comps = crate::par::map_indexed(order + 1, 8, |d| z_ifun_degree(t, d as u64));
    let mut cs = vec![vec![Rat::zero(); order + 1]; 4];
    for (d, p) in comps.iter().enumerate() {
        for j in 0..4 {
            cs[j][d] = p.coeff(j);
        }
    }
    let mk = |v: Vec<Rat>| TruncSeries::new(v, order, &Rat::zero());
    let mut it = cs.into_iter();
    ZIFunction {
        i0: mk(it.next().unwrap()),
        i1: mk(it.next().unwrap()),
        i2: mk(it.next().unwrap()),
        i3: mk(it.next().unwrap()),
    }
}

/// The generator tower. A_m and B_m are logarithmic derivative towers of
/// I11 and I0; Y is the rational function 1/(1-rq).
#[derive(Clone, Debug)]
pub struct Generators {
    pub order: usize,
    pub i0: QSeries,
    pub i11: QSeries,
    pub i22: QSeries,
    /// J_i = I_i / I_0
    pub j1: QSeries,
    pub j2: QSeries,
    pub j3: QSeries,
    /// a[m-1] = A_m, b[m-1] = B_m
    pub a: Vec<QSeries>,
    pub b: Vec<QSeries>,
    pub y: QSeries,
}

impl Generators {
    pub fn a_m(&self, m: usize) -> &QSeries {
        &self.a[m - 1]
    }
    pub fn b_m(&self, m: usize) -> &QSeries {
        &self.b[m - 1]
    }
    /// The five ring generators (A, B, B2, B3, Y).
    pub fn ring_generators(&self) -> [QSeries; 5] {
        [
            self.a[0].clone(),
            self.b[0].clone(),
            self.b[1].clone(),
            self.b[2].clone(),
            self.y.clone(),
        ]
    }
}

pub fn generators(t: &TargetConfig, order: usize) -> Generators {
    generators_with_tower(t, order, 6)
}

pub fn generators_with_tower(t: &TargetConfig, order: usize, tower: usize) -> Generators {
    let zi = z_ifunction(t, order);
    let i0_inv = zi.i0.invert().expect("I0 has constant term 1");
    let j1 = zi.i1.mul(&i0_inv);
    let j2 = zi.i2.mul(&i0_inv);
    let j3 = zi.i3.mul(&i0_inv);
    let one = QSeries::rat_one(order);
    let i11 = one.add(&j1.d());
    let i11_inv = i11.invert().expect("I11 has constant term 1");
    // I22 = 1 + D((J1 + D J2)/I11); the classical constant makes I22(0) = 1,
    // matching the q = 0 limit of the quantum product
    let i22 = one.add(&j1.add(&j2.d()).mul(&i11_inv).d());
    let mut a = Vec::with_capacity(tower);
    let mut b = Vec::with_capacity(tower);
    a.push(i11.d().mul(&i11_inv));
    b.push(zi.i0.d().mul(&i0_inv));
    for m in 1..tower {
        // A_{m+1} = D A_m + A_1 A_m, same for B
        a.push(a[m - 1].d().add(&a[0].mul(&a[m - 1])));
        b.push(b[m - 1].d().add(&b[0].mul(&b[m - 1])));
    }
    let y = QSeries::geometric(&t.r, order);
    Generators {
        order,
        i0: zi.i0,
        i11,
        i22,
        j1,
        j2,
        j3,
        a,
        b,
        y,
    }
}

/// Scalar part of the level-1 mirror map: integral from 0 of (L(x)-1) dx/x
/// with L = (1-rx)^{1/N}; the full map is -t_alpha times this.
pub fn tau_level1(t: &TargetConfig, n: usize, order: usize) -> QSeries {
    let l = l_series(t, n, order);
    l.sub(&QSeries::rat_one(order))
        .integrate_dlog()
        .expect("L - 1 vanishes at 0")
}

/// L = (1 - r q)^{1/N}.
pub fn l_series(t: &TargetConfig, n: usize, order: usize) -> QSeries {
    let base = QSeries::rat_one(order).sub(
        &QSeries::constant(t.r.clone(), order)
            .mul_qpow(1)
            .truncate(order),
    );
    base.pow_rat(&Rat::new(1.into(), (n as i64).into()))
        .expect("unit constant term")
}

/// The master-space I-function over the state ring, expanded near
/// z = infinity: the q^d term occupies z-exponents <= 1 - N d, so the
/// requested window must reach down to 1 - N*order.
pub struct MSPIFunction {
    pub n: usize,
    pub ring: Arc<QuotientRing>,
    pub block: LaurentBlock<QElem>,
}

pub fn default_zdepth(n: usize, order: usize) -> i64 {
    ((n + 4) * order + 4) as i64
}

pub fn msp_ifunction(
    t: &TargetConfig,
    n: usize,
    order: usize,
    zdepth: i64,
) -> Result<MSPIFunction> {
    assert!(n >= 7 && n % 2 == 1, "N must be an odd prime >= 7");
    if zdepth < (n as i64) * (order as i64) - 1 {
        return Err(Error::DepthTooSmall { zdepth, order, n });
    }
    let ring = p_ring(n);
    let proto = QElem::zero_of(&ring);
    let one0 = TruncSeries::constant(QElem::one_of(&ring), 0);
    // degree-0 term: z * 1
    let mut total = LaurentBlock::zero(-zdepth, 1, order, &proto, false, true);
    total = total.add(&lift_qdeg(&LaurentBlock::term(1, one0), 0, order));
    let terms = crate::par::map_indexed(order, 2, |i| {
        let d = (i + 1) as u64;
        msp_term(t, n, &ring, d, zdepth)
    });
    for (i, term) in terms.into_iter().enumerate() {
        total = total.add(&lift_qdeg(&term, i + 1, order));
    }
    Ok(MSPIFunction {
        n,
        ring,
        block: total,
    })
}

/// Place a q-constant block at q-degree d inside a window of q-order
/// `order`.
fn lift_qdeg(block: &LaurentBlock<QElem>, d: usize, order: usize) -> LaurentBlock<QElem> {
    let proto = block.proto();
    let coeffs: Vec<TruncSeries<QElem>> = (block.lo()..=block.hi())
        .map(|e| {
            let c = block.coeff(e);
            let mut v = vec![proto.clone(); order + 1];
            if d <= order {
                v[d] = c.coeff(0).clone();
            }
            TruncSeries::new(v, order, &proto)
        })
        .collect();
    LaurentBlock::new(block.lo(), coeffs, block.exact_below, block.exact_above)
}

/// One degree of the master-space I-function as a q-constant descending
/// block: z prod(kp + mz) / [prod(a_i p + mz) prod((p+mz)^N + 1)].
fn msp_term(
    t: &TargetConfig,
    n: usize,
    ring: &Arc<QuotientRing>,
    d: u64,
    zdepth: i64,
) -> LaurentBlock<QElem> {
    let cst = |c: QElem| TruncSeries::constant(c, 0);
    let p = QElem::var_pow(ring, 1);
    let lo_limit = -zdepth - ((t.k + n as u64) * d) as i64 - 2;
    // numerator: z * prod (kp + mz)
    let mut num = LaurentBlock::term(1, cst(QElem::one_of(ring)));
    for m in 1..=(t.k * d) {
        let f = LaurentBlock::new(
            0,
            vec![
                cst(p.scale(&rat_i64(t.k as i64))),
                cst(QElem::constant(ring, rat_i64(m as i64))),
            ],
            true,
            true,
        );
        num = num.mul(&f);
    }
    // weight denominator
    let mut den_a = LaurentBlock::term(0, cst(QElem::one_of(ring)));
    for &a in &t.weights {
        for m in 1..=(a * d) {
            let f = LaurentBlock::new(
                0,
                vec![
                    cst(p.scale(&rat_i64(a as i64))),
                    cst(QElem::constant(ring, rat_i64(m as i64))),
                ],
                true,
                true,
            );
            den_a = den_a.mul(&f);
        }
    }
    // equivariant denominator: prod ((p + mz)^N + 1) with t^N = -1 folded in
    let mut den_c = LaurentBlock::term(0, cst(QElem::one_of(ring)));
    for m in 1..=d {
        den_c = den_c.mul(&pmz_pow_n_plus_one(ring, n, m as i64));
    }
    let inv = |b: &LaurentBlock<QElem>| {
        b.inv_descending(lo_limit, |s| {
            let c = s.coeff(0);
            c.inv().map(|ci| TruncSeries::constant(ci, 0))
        })
        .expect("leading z-coefficient is a rational unit")
    };
    num.mul(&inv(&den_a))
        .mul(&inv(&den_c))
        .clip(-zdepth, 1 - (n as i64) * d as i64)
}

/// (p + mz)^N + 1 as an exact block over the state ring.
fn pmz_pow_n_plus_one(ring: &Arc<QuotientRing>, n: usize, m: i64) -> LaurentBlock<QElem> {
    let proto = QElem::zero_of(ring);
    let mut coeffs: Vec<TruncSeries<QElem>> = vec![TruncSeries::constant(proto.clone(), 0); n + 1];
    // binomial expansion: sum_i C(N, i) p^i (m z)^{N-i}
    for i in 0..=n {
        let c = crate::rat::binom_u64(n as u64, i as u64);
        let mut mz = Rat::one();
        for _ in 0..(n - i) {
            mz *= rat_i64(m);
        }
        let e = QElem::var_pow(ring, i).scale(&(Rat::from_integer(c) * mz));
        coeffs[n - i] = TruncSeries::constant(e, 0);
    }
    let one = TruncSeries::constant(QElem::one_of(ring), 0);
    coeffs[0] = coeffs[0].add(&one);
    LaurentBlock::new(0, coeffs, true, true)
}

/// The hypersurface restriction of the master-space I-function divided by
/// z, expanded near z = 0 (ascending), over Q[H]/(H^4). Returns the block
/// reliable through z-exponent `hi_limit`.
pub fn msp_ifunction_z_ascending(
    t: &TargetConfig,
    n: usize,
    order: usize,
    hi_limit: i64,
) -> LaurentBlock<QElem> {
    let ring = h_ring();
    let proto = QElem::zero_of(&ring);
    let one0 = TruncSeries::constant(QElem::one_of(&ring), 0);
    let mut total = LaurentBlock::zero(-3, hi_limit, order, &proto, true, false);
    total = total.add(&lift_qdeg(&LaurentBlock::term(0, one0.clone()), 0, order));
    for d in 1..=order as u64 {
        let term = msp_term_z(t, n, &ring, d, hi_limit);
        total = total.add(&lift_qdeg(&term, d as usize, order));
    }
    total
}

fn msp_term_z(
    t: &TargetConfig,
    n: usize,
    ring: &Arc<QuotientRing>,
    d: u64,
    hi_limit: i64,
) -> LaurentBlock<QElem> {
    let cst = |c: QElem| TruncSeries::constant(c, 0);
    // numerator as u-polynomial times z^{kd}, u = H/z
    let mut num_u = Poly::one();
    for m in 1..=(t.k * d) {
        num_u = umul(
            &num_u,
            &Poly::new(vec![rat_i64(m as i64), rat_i64(t.k as i64)]),
            4,
        );
    }
    let mut den_u = Poly::one();
    for &a in &t.weights {
        for m in 1..=(a * d) {
            den_u = umul(
                &den_u,
                &Poly::new(vec![rat_i64(m as i64), rat_i64(a as i64)]),
                4,
            );
        }
    }
    let ratio = umul(&num_u, &uinv(&den_u, 4), 4);
    // ratio(u) = sum_j c_j H^j z^{-j}: an exact block on [-3, 0]
    let mut rat_coeffs: Vec<TruncSeries<QElem>> = Vec::with_capacity(4);
    for j in (0..4).rev() {
        let h = QElem::var_pow(ring, j).scale(&ratio.coeff(j));
        rat_coeffs.push(cst(h));
    }
    let ratio_block = LaurentBlock::new(-3, rat_coeffs, true, true);
    // equivariant factors ((H+mz)^N + 1), ascending inverse (unit at z^0
    // since H^N = 0)
    let hi_c = hi_limit + 3 + 2;
    let mut den_c = LaurentBlock::term(0, cst(QElem::one_of(ring)));
    for m in 1..=d {
        den_c = den_c.mul(&pmz_pow_n_plus_one(ring, n, m as i64));
    }
    let inv_c = den_c
        .inv_ascending(hi_c, |s| {
            let c = s.coeff(0);
            c.inv().map(|ci| TruncSeries::constant(ci, 0))
        })
        .expect("constant z-coefficient is 1 + H-nilpotent");
    ratio_block.mul(&inv_c).clip(-3, hi_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::target_config;

    #[test]
    fn i_function_anchors_k6() {
        let t = target_config(6).unwrap();
        let zi = z_ifunction(&t, 3);
        assert_eq!(zi.i0.coeff(0), &Rat::one());
        assert_eq!(zi.i1.coeff(0), &Rat::zero());
        assert_eq!(zi.i2.coeff(0), &Rat::zero());
        assert_eq!(zi.i3.coeff(0), &Rat::zero());
        // direct factorial-ratio sum: (6d)!/(d!^4 (2d)!)
        assert_eq!(zi.i0.coeff(1), &rat_i64(360));
        assert_eq!(zi.i0.coeff(2), &rat_i64(1247400));
        // digamma-expansion coefficient of q^1
        assert_eq!(zi.i1.coeff(1), &rat_i64(2772));
    }

    #[test]
    fn i0_positive_all_targets() {
        for t in crate::targets::all_targets() {
            let zi = z_ifunction(&t, 8);
            for d in 0..=8 {
                assert!(
                    crate::rat::is_positive(zi.i0.coeff(d)),
                    "I0 coefficient q^{d} for k={}",
                    t.k
                );
            }
        }
    }

    #[test]
    fn i0_inverse_round_trip_all_targets() {
        for t in crate::targets::all_targets() {
            let zi = z_ifunction(&t, 12);
            let inv = zi.i0.invert().unwrap();
            assert!(
                zi.i0.mul(&inv).eq_to_order(&QSeries::rat_one(12)),
                "k={}",
                t.k
            );
        }
    }

    #[test]
    fn invert_i0_by_long_division_oracle() {
        // brute-force long division of 1 by the directly summed I0
        let t = target_config(6).unwrap();
        let zi = z_ifunction(&t, 6);
        let inv = zi.i0.invert().unwrap();
        let mut rem = QSeries::rat_one(6);
        let mut quot = vec![];
        for d in 0..=6usize {
            let c = rem.coeff(d).clone();
            quot.push(c.clone());
            rem = rem.sub(&zi.i0.mul_qpow(d).truncate(6).scale(&c));
        }
        assert_eq!(inv, QSeries::new(quot, 6, &Rat::zero()));
        assert_eq!(inv.coeff(1), &rat_i64(-360));
        assert_eq!(inv.coeff(2), &(rat_i64(360 * 360) - rat_i64(1247400)));
        assert!(zi.i0.mul(&inv).eq_to_order(&QSeries::rat_one(6)));
    }

    #[test]
    fn generator_identities() {
        for t in crate::targets::all_targets() {
            let g = generators_with_tower(&t, 12, 6);
            // DY = Y(Y-1)
            let lhs = g.y.d();
            let rhs = g.y.mul(&g.y.sub(&QSeries::rat_one(12)));
            assert!(lhs.eq_to_order(&rhs), "DY = Y(Y-1) for k={}", t.k);
            // chain rule towers: A_{m+1} = D A_m + A A_m for m <= 5
            for m in 1..=5usize {
                let want = g.a[m - 1].d().add(&g.a[0].mul(&g.a[m - 1]));
                assert!(want.eq_to_order(&g.a[m]));
                let want = g.b[m - 1].d().add(&g.b[0].mul(&g.b[m - 1]));
                assert!(want.eq_to_order(&g.b[m]));
            }
            // A(0) = B(0) = 0
            assert!(
                num_traits::Zero::is_zero(g.a[0].coeff(0))
                    && num_traits::Zero::is_zero(g.b[0].coeff(0))
            );
        }
    }

    #[test]
    fn i11_and_i22_first_coefficients_match_connection_constants() {
        // [q^1] of (I0, I11, I22) reproduces the quantum-connection band
        for t in crate::targets::all_targets() {
            let g = generators(&t, 4);
            assert_eq!(g.i0.coeff(1), &rat_i64(t.c_vec[0]), "k={}", t.k);
            assert_eq!(g.i11.coeff(1), &rat_i64(t.c_vec[1]), "k={}", t.k);
            assert_eq!(g.i22.coeff(1), &rat_i64(t.c_vec[2]), "k={}", t.k);
        }
    }

    #[test]
    fn tau_level1_anchors() {
        let t = target_config(6).unwrap();
        let n = 7;
        let tau = tau_level1(&t, n, 10);
        assert!(num_traits::Zero::is_zero(tau.coeff(0)));
        assert_eq!(tau.coeff(1), &(-&t.r / rat_i64(n as i64)));
        // D(tau) = L - 1 to order 10
        let l = l_series(&t, n, 10);
        assert!(tau.d().eq_to_order(&l.sub(&QSeries::rat_one(10))));
    }

    #[test]
    fn msp_ifunction_q0_and_restriction() {
        let t = target_config(6).unwrap();
        let n = 7;
        let order = 2;
        let im = msp_ifunction(&t, n, order, default_zdepth(n, order)).unwrap();
        // q^0 part is z * 1
        let z1 = im.block.coeff(1);
        assert_eq!(z1.coeff(0), &QElem::one_of(&im.ring));
        assert!(z1.coeff(1).is_zero());
        for e in (1 - (n as i64))..1 {
            assert!(im.block.coeff(e).coeff(0).is_zero(), "q^0 z^{e}");
        }
        // p -> 0 restriction of the q^1 term: 360 / (z^N + 1) near infinity
        // has +360 at z^{-N} and -360 at z^{-2N}
        let at0 = |e: i64| im.block.coeff(e).coeff(1).poly.coeff(0);
        assert_eq!(at0(1 - n as i64), rat_i64(360));
        for e in (1 - 2 * (n as i64) + 1)..(1 - n as i64) {
            assert_eq!(at0(e), Rat::zero(), "z^{e}");
        }
        assert_eq!(at0(1 - 2 * (n as i64)), rat_i64(-360));
    }

    #[test]
    fn msp_ifunction_z_restriction_matches_ascending_rational_function() {
        // near z = 0 the p -> 0 restriction of the q^1 term of I^M/z is
        // 360/(z^N+1): +360 at z^0, 0 in between, -360 at z^N
        let t = target_config(6).unwrap();
        let n = 7;
        let asc = msp_ifunction_z_ascending(&t, n, 1, n as i64 + 1);
        let at0 = |e: i64| asc.coeff(e).coeff(1).poly.coeff(0);
        assert_eq!(at0(0), rat_i64(360));
        for e in 1..(n as i64) {
            assert_eq!(at0(e), Rat::zero(), "z^{e}");
        }
        assert_eq!(at0(n as i64), rat_i64(-360));
        // and the q^0 part is 1
        assert_eq!(asc.coeff(0).coeff(0), &QElem::one_of(&h_ring()));
    }

    #[test]
    fn depth_too_small_detected() {
        let t = target_config(6).unwrap();
        assert!(matches!(
            msp_ifunction(&t, 7, 4, 10),
            Err(Error::DepthTooSmall { .. })
        ));
    }
}
