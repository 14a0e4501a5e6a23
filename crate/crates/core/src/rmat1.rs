//! Level-1 computations at the isolated fixed points: the z-expansion of
//! the Picard-Fuchs operator in the (X, D) variables, the scalar tower r_m
//! solved from the resulting triangular ODEs, the boundary comparison
//! against the quantum Riemann-Roch exponential, the full entry recursion,
//! and the tail-contribution constants.
//!
//! Everything here lives in the variables X = 1 - Y (so DX = X(1-X)) and
//! integer powers of the root function L_alpha (D L_alpha = (X/N) L_alpha).
//! Objects are stored as z-graded sums of f(X)·L_alpha^s; multiplying by q
//! raises the L-grade by N (q = X L_alpha^N / r), and grades within a slot
//! are folded upward with L_alpha^{-N} = X - 1.

use crate::error::{Error, Result};
use crate::pfop::{ddx, PFOperator};
use crate::poly::Poly;
use crate::rat::{bernoulli, binom_u64, rat_frac, rat_i64, rat_to_string, Rat};
use crate::targets::TargetConfig;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// z-graded, L-graded X-polynomials.
#[derive(Clone, Debug)]
struct LSeries {
    zmax: usize,
    slots: Vec<BTreeMap<i64, Poly>>,
}

impl LSeries {
    fn zero(zmax: usize) -> Self {
        LSeries {
            zmax,
            slots: vec![BTreeMap::new(); zmax + 1],
        }
    }

    fn term(zmax: usize, slot: usize, grade: i64, f: Poly) -> Self {
        let mut s = LSeries::zero(zmax);
        if !f.is_zero() {
            s.slots[slot].insert(grade, f);
        }
        s
    }

    fn insert(&mut self, slot: usize, grade: i64, f: Poly) {
        if slot > self.zmax || f.is_zero() {
            return;
        }
        let e = self.slots[slot].entry(grade).or_insert_with(Poly::zero);
        *e = e.add(&f);
        if e.is_zero() {
            self.slots[slot].remove(&grade);
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        let zmax = self.zmax.min(rhs.zmax);
        let mut out = LSeries::zero(zmax);
        for m in 0..=zmax {
            for (g, f) in &self.slots[m] {
                out.insert(m, *g, f.clone());
            }
            for (g, f) in &rhs.slots[m] {
                out.insert(m, *g, f.clone());
            }
        }
        out
    }

    fn scale(&self, c: &Rat) -> Self {
        let mut out = LSeries::zero(self.zmax);
        for m in 0..=self.zmax {
            for (g, f) in &self.slots[m] {
                out.insert(m, *g, f.scale(c));
            }
        }
        out
    }

    /// D_L = zD + L: the derivation raises the z-slot keeping the grade
    /// (D(f L^s) = (ddx f + (s/N) X f) L^s), the multiplication raises the
    /// grade keeping the slot.
    fn dl(&self, n: usize) -> Self {
        let mut out = LSeries::zero(self.zmax);
        let ninv = rat_frac(1, n as i64);
        for m in 0..=self.zmax {
            for (g, f) in &self.slots[m] {
                if m < self.zmax {
                    let df = ddx(f).add(&Poly::x().mul(f).scale(&(&ninv * rat_i64(*g))));
                    out.insert(m + 1, *g, df);
                }
                out.insert(m, g + 1, f.clone());
            }
        }
        out
    }

    /// (k D_L + j z)
    fn kdl_jz(&self, n: usize, k: u64, j: u64) -> Self {
        let mut out = self.dl(n).scale(&rat_i64(k as i64));
        for m in 0..self.zmax {
            for (g, f) in &self.slots[m] {
                out.insert(m + 1, *g, f.scale(&rat_i64(j as i64)));
            }
        }
        out
    }

    /// Multiplication by q = X L^N / r.
    fn mul_q(&self, n: usize, r: &Rat) -> Self {
        let mut out = LSeries::zero(self.zmax);
        let rinv = Rat::one() / r;
        for m in 0..=self.zmax {
            for (g, f) in &self.slots[m] {
                out.insert(m, g + n as i64, Poly::x().mul(f).scale(&rinv));
            }
        }
        out
    }

    /// Fold each slot's grades up to the maximal grade using
    /// L^{-N} = X - 1; grades within a slot always differ by multiples
    /// of N.
    fn fold_slot(&self, m: usize, n: usize) -> Option<(i64, Poly)> {
        let slot = &self.slots[m];
        let top = *slot.keys().max()?;
        let xm1 = Poly::new(vec![rat_i64(-1), rat_i64(1)]);
        let mut acc = Poly::zero();
        for (g, f) in slot {
            let diff = top - g;
            assert!(
                diff >= 0 && diff % n as i64 == 0,
                "grades differ by a non-multiple of N"
            );
            let mut t = f.clone();
            for _ in 0..(diff / n as i64) {
                t = t.mul(&xm1);
            }
            acc = acc.add(&t);
        }
        Some((top, acc))
    }
}

/// Apply the full annihilating operator
///   D_L^5 (D_L^N + 1) - (r/k^5) q prod_{j ordinary} (k D_L + j z)
/// to an L-series, truncated at its z-budget.
fn apply_operator(t: &TargetConfig, n: usize, ls: &LSeries) -> LSeries {
    let mut a = ls.clone();
    for _ in 0..n {
        a = a.dl(n);
    }
    a = a.add(ls);
    for _ in 0..5 {
        a = a.dl(n);
    }
    let mut b = ls.clone();
    for &j in &t.ordinary {
        b = b.kdl_jz(n, t.k, j);
    }
    let mut scale = t.r.clone();
    for _ in 0..5 {
        scale /= rat_i64(t.k as i64);
    }
    b = b.mul_q(n, &t.r).scale(&scale);
    a.add(&b.scale(&-Rat::one()))
}

/// The z^m coefficient of the normalized Picard-Fuchs expansion acting on
/// a grade-0 probe: PF_m(h), a polynomial identity in X.
pub fn pf_action(t: &TargetConfig, n: usize, m: usize, h: &Poly) -> Poly {
    let probe = LSeries::term(m, 0, 0, h.clone());
    let out = apply_operator(t, n, &probe);
    match out.fold_slot(m, n) {
        None => Poly::zero(),
        Some((g, f)) => {
            assert_eq!(g, (n + 5 - m) as i64, "unexpected top grade in PF_{m}");
            f
        }
    }
}

/// Reconstruct PF_m = sum_j f_{m,j}(X) D^{m-j} (deg f_{m,j} <= j) from its
/// action on probes; the ansatz degrees are part of the statement and the
/// overdetermined solve must be consistent.
pub fn pf_expand(t: &TargetConfig, n: usize, m_max: usize) -> Result<Vec<PFOperator>> {
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let action = |h: &Poly| pf_action(t, n, m, h);
        out.push(operator_from_action(m, &action)?);
    }
    Ok(out)
}

fn operator_from_action(m: usize, action: &dyn Fn(&Poly) -> Poly) -> Result<PFOperator> {
    // unknowns: coefficients of f_{m,j}, j = 0..m, deg <= j
    let mut col_of = vec![];
    for j in 0..=m {
        for i in 0..=j {
            col_of.push((j, i));
        }
    }
    let ncols = col_of.len();
    let probes: Vec<Poly> = (0..=(m + 2))
        .map(|s| Poly::monomial(Rat::one(), s))
        .collect();
    let mut rows: Vec<Vec<Rat>> = vec![];
    let mut rhs: Vec<Rat> = vec![];
    for h in &probes {
        let target = action(h);
        // D^{m-j} h
        let mut dh = vec![h.clone()];
        for _ in 0..m {
            dh.push(ddx(dh.last().unwrap()));
        }
        let deg = probes.len() + 2 * m + 4;
        for xdeg in 0..=deg {
            let mut row = vec![Rat::zero(); ncols];
            for (c, &(j, i)) in col_of.iter().enumerate() {
                // coefficient of X^xdeg in X^i * D^{m-j} h
                if xdeg >= i {
                    row[c] = dh[m - j].coeff(xdeg - i);
                }
            }
            rows.push(row);
            rhs.push(target.coeff(xdeg));
        }
    }
    let sol =
        crate::linalg::solve_unique(&rows, &rhs).ok_or_else(|| Error::NoPolynomialSolution {
            m,
            detail: "operator extraction failed".into(),
        })?;
    let mut coeffs = vec![Poly::zero(); m + 1];
    for (c, &(j, i)) in col_of.iter().enumerate() {
        if !sol[c].is_zero() {
            coeffs[m - j] = coeffs[m - j].add(&Poly::monomial(sol[c].clone(), i));
        }
    }
    Ok(PFOperator::new(coeffs))
}

/// The scalar tower r_m in Q[Y] (deg <= k), m = 0..=m_max.
pub struct RScalarTower {
    pub n: usize,
    pub k: u64,
    /// r[m] as a polynomial in Y
    pub r: Vec<Poly>,
}

fn x_to_y(f: &Poly) -> Poly {
    // substitute X = 1 - Y
    let lin = Poly::new(vec![rat_i64(1), rat_i64(-1)]);
    subst(f, &lin)
}

#[cfg(test)]
fn y_to_x(f: &Poly) -> Poly {
    x_to_y(f) // the substitution is an involution
}

fn subst(f: &Poly, g: &Poly) -> Poly {
    let mut acc = Poly::zero();
    for c in f.coeffs.iter().rev() {
        acc = acc.mul(g).add(&Poly::constant(c.clone()));
    }
    acc
}

/// Solve the tower: the asymptotic column R(z)*1 at a level-1 point is
/// L^{-(N+3)/2} (1 + sum_m r_m z^m / L_alpha^m), and plugging the ansatz
/// into the annihilating operator makes the z^{m+1} slot a triangular
/// linear condition on r_m. The polynomial ansatz (degree k + 2, excess
/// asserted zero) pins the solution: the homogeneous solutions are
/// non-polynomial powers of Y for 0 < m < N.
pub fn solve_r_tower(t: &TargetConfig, n: usize, m_max: usize) -> Result<RScalarTower> {
    if m_max >= n {
        return Err(Error::NonUniqueSolution(n));
    }
    let base = -((n as i64) + 3) / 2;
    let mut r_x: Vec<Poly> = vec![Poly::one()];
    for m in 1..=m_max {
        let zmax = m + 1;
        let mut phi = LSeries::zero(zmax);
        for (j, rj) in r_x.iter().enumerate() {
            phi.insert(j, base - j as i64, rj.clone());
        }
        let image = apply_operator(t, n, &phi);
        // lower slots must already vanish
        for s in 0..=m {
            if let Some((_, f)) = image.fold_slot(s, n) {
                if !f.is_zero() {
                    return Err(Error::NoPolynomialSolution {
                        m,
                        detail: format!("slot {s} not annihilated by the solved prefix"),
                    });
                }
            }
        }
        let known = image.fold_slot(zmax, n);
        // probe columns for the unknown r_m
        let deg_cap = t.k as usize + 2;
        let mut cols: Vec<(i64, Poly)> = vec![];
        for i in 0..=deg_cap {
            let probe = LSeries::term(zmax, m, base - m as i64, Poly::monomial(Rat::one(), i));
            let img = apply_operator(t, n, &probe);
            let folded = img.fold_slot(zmax, n).expect("probe image nonzero");
            cols.push(folded);
        }
        let grade = cols[0].0;
        let (kg, kf) = match &known {
            Some((g, f)) => {
                assert_eq!(*g, grade, "defect grade mismatch");
                (*g, f.clone())
            }
            None => (grade, Poly::zero()),
        };
        let _ = kg;
        // solve sum_i rho_i col_i = -known
        let width = cols
            .iter()
            .map(|(_, f)| f.coeffs.len())
            .chain([kf.coeffs.len()])
            .max()
            .unwrap();
        let mut rows = vec![vec![Rat::zero(); deg_cap + 1]; width];
        let mut rhs = vec![Rat::zero(); width];
        for (i, (_, f)) in cols.iter().enumerate() {
            for (d, c) in f.coeffs.iter().enumerate() {
                rows[d][i] = c.clone();
            }
        }
        for (d, c) in kf.coeffs.iter().enumerate() {
            rhs[d] = -c.clone();
        }
        let sol = crate::linalg::solve_unique(&rows, &rhs).ok_or_else(|| {
            Error::NoPolynomialSolution {
                m,
                detail: "no consistent polynomial solution".into(),
            }
        })?;
        // excess coefficients beyond degree k must vanish
        for (i, c) in sol.iter().enumerate().skip(t.k as usize + 1) {
            if !c.is_zero() {
                return Err(Error::DegreeBoundViolated(format!(
                    "r_{m} has X-degree {i} beyond k = {}",
                    t.k
                )));
            }
        }
        r_x.push(Poly::new(sol));
    }
    Ok(RScalarTower {
        n,
        k: t.k,
        r: r_x.iter().map(x_to_y).collect(),
    })
}

impl RScalarTower {
    /// r_m evaluated at Y = 1 (q = 0 boundary value).
    pub fn at_one(&self, m: usize) -> Rat {
        self.r[m].eval(&Rat::one())
    }

    /// r_m evaluated at Y = 0 (reported, not asserted: see the design
    /// notes — the limit suppression comes from 1/L_alpha^m, not from a
    /// zero of r_m).
    pub fn at_zero(&self, m: usize) -> Rat {
        self.r[m].coeff(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopWeightReading {
    /// 1/(k t_alpha)^{2j-1} inside the QRR exponential
    K,
    /// 1/(r t_alpha)^{2j-1} as printed
    R,
}

#[derive(Debug)]
pub struct DeltaReport {
    pub n: usize,
    pub k: u64,
    pub m_max: usize,
    pub matches: Vec<(LoopWeightReading, bool)>,
    pub verdict: Option<LoopWeightReading>,
    /// (-t_alpha)^m [z^m] Delta under the matching reading, for the record
    pub normalized_delta: Vec<Rat>,
}

/// Inverse-power sums S_s = sum_{gamma=1}^{N-1} (zeta^gamma - 1)^{-s},
/// exact rationals by Newton's identities on the reciprocal of
/// ((x+1)^N - 1)/x.
pub fn zeta_inverse_power_sums(n: usize, smax: usize) -> Vec<Rat> {
    // reciprocal polynomial: monic of degree N-1 with e_i = (-1)^i C(N, i+1)/N
    let e: Vec<Rat> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 1 { -Rat::one() } else { Rat::one() };
            sign * Rat::from_integer(binom_u64(n as u64, i as u64 + 1)) / rat_i64(n as i64)
        })
        .collect();
    // p_s - e_1 p_{s-1} + e_2 p_{s-2} - ... + (-1)^{s-1} e_{s-1} p_1 + (-1)^s s e_s = 0
    let mut p: Vec<Rat> = vec![Rat::zero(); smax + 1];
    for s in 1..=smax {
        let mut acc = Rat::zero();
        for i in 1..s {
            let sign = if i % 2 == 1 { -Rat::one() } else { Rat::one() };
            let ei = if i < e.len() {
                e[i].clone()
            } else {
                Rat::zero()
            };
            acc += sign * ei * &p[s - i];
        }
        let sign = if s % 2 == 1 { -Rat::one() } else { Rat::one() };
        let es = if s < e.len() {
            e[s].clone()
        } else {
            Rat::zero()
        };
        p[s] = -(acc + sign * es * rat_i64(s as i64));
    }
    p
}

/// (-t_alpha)^m [z^m] of the QRR exponential, alpha-independent exact
/// rationals; `reading` selects the loop-weight term.
pub fn normalized_delta_expansion(
    t: &TargetConfig,
    n: usize,
    m_max: usize,
    reading: LoopWeightReading,
) -> Vec<Rat> {
    let s = zeta_inverse_power_sums(n, m_max + 1);
    let b = bernoulli(m_max + 2);
    let wt = match reading {
        LoopWeightReading::K => rat_i64(t.k as i64),
        LoopWeightReading::R => t.r.clone(),
    };
    // log Delta, normalized: coefficient of z^{2j-1} is
    // B_{2j}/(2j(2j-1)) (sum_i a_i^{1-2j} - wt^{1-2j} - S_{2j-1})
    let mut log_delta = vec![Rat::zero(); m_max + 1];
    let mut j = 1usize;
    while 2 * j - 1 <= m_max {
        let e = (2 * j - 1) as i32;
        let mut w = Rat::zero();
        for &a in &t.weights {
            w += rat_i64(a as i64).pow(-e);
        }
        w -= wt.pow(-e);
        w -= s[2 * j - 1].clone();
        log_delta[2 * j - 1] = &b[2 * j] / (rat_i64(2 * j as i64) * rat_i64(2 * j as i64 - 1)) * w;
        j += 1;
    }
    // exponentiate
    let series = crate::series::QSeries::new(log_delta, m_max, &Rat::zero());
    let exp = series.exp().expect("log Delta has no constant term");
    (0..=m_max).map(|m| exp.coeff(m).clone()).collect()
}

/// Compare the solved tower at the q = 0 boundary against the QRR
/// expansion under both readings of the loop-weight term; exactly one must
/// match (and which one is recorded).
pub fn delta_compare(t: &TargetConfig, n: usize, m_max: usize) -> Result<DeltaReport> {
    let tower = solve_r_tower(t, n, m_max)?;
    let mut matches = vec![];
    let mut verdict = None;
    let mut recorded = vec![];
    for reading in [LoopWeightReading::K, LoopWeightReading::R] {
        let delta = normalized_delta_expansion(t, n, m_max, reading);
        // the solved tower matches the QRR expansion through z -> -z:
        // r_m(1) = (-1)^m (-t_alpha)^m [z^m] Delta (see the Birkhoff-side
        // extraction test, which pins this parity independently)
        let ok = (0..=m_max).all(|m| {
            let sign = if m % 2 == 1 { -Rat::one() } else { Rat::one() };
            tower.at_one(m) == sign * &delta[m]
        });
        if ok && verdict.is_none() {
            verdict = Some(reading);
            recorded = delta.clone();
        }
        matches.push((reading, ok));
    }
    if verdict.is_none() {
        return Err(Error::NeitherReadingMatches);
    }
    if matches.iter().filter(|(_, ok)| *ok).count() > 1 {
        return Err(Error::ConstantMismatch(
            "both readings match, comparison is vacuous".into(),
        ));
    }
    Ok(DeltaReport {
        n,
        k: t.k,
        m_max,
        matches,
        verdict,
        normalized_delta: recorded,
    })
}

#[derive(Debug)]
pub struct TailReport {
    pub n: usize,
    pub k: u64,
    /// C_k recovered from r_1 at the boundary
    pub c_tail: Rat,
    /// c_k recovered from the X-coefficient of the z² operator slot
    pub c_pf2: Rat,
    pub pass: bool,
}

/// Recover the tail constant from the z² coefficient of the level-1 tail
/// series z(1 - L^{(N+3)/2} R(z)^{-1} 1): with R(z)^{-1} = R(-z)* the z²
/// coefficient is +r_1 (up to the 1/L_alpha normalization), which must
/// equal (N/24 + C_k) + ((Y-1)/N)(N²/12 + 23N/24 + 47/24). The z¹
/// coefficient is 1 - r_0 = 0. The companion constant c_k sits in the
/// X-linear part of the z² operator slot.
pub fn tail_constants(t: &TargetConfig, n: usize) -> Result<TailReport> {
    let tower = solve_r_tower(t, n, 2)?;
    assert_eq!(tower.r[0], Poly::one(), "tail series must be O(z^2)");
    let nn = rat_i64(n as i64);
    // the z² coefficient of the tail z(1 - L^{(N+3)/2} R(z)^{-1} 1) is
    // -r_1 in our column parity; the closed linear-in-Y form applies to it
    let r1_tail = tower.r[1].scale(&-Rat::one());
    let c_tail = r1_tail.eval(&Rat::one()) - &nn / rat_i64(24);
    let slope = (&nn * &nn) / rat_i64(12) + &nn * rat_frac(23, 24) + rat_frac(47, 24);
    let closed = Poly::new(vec![
        &nn / rat_i64(24) + &c_tail - &slope / &nn,
        &slope / &nn,
    ]);
    if r1_tail != closed {
        return Err(Error::ConstantMismatch(format!(
            "r_1 = {:?} does not have the closed linear form",
            tower.r[1]
        )));
    }
    let expect_c = match t.k {
        6 => rat_frac(23, 72),
        8 => rat_frac(29, 96),
        10 => rat_frac(31, 120),
        _ => unreachable!(),
    };
    // PF_2 constant: the printed D^0 row is the conjugated (tilde)
    // operator's; extract from PF_2 shifted by D -> D - (N+3)/(2N) X
    let pf = pf_expand(t, n, 2)?;
    let shift = Poly::monomial(rat_frac(-(n as i64 + 3), 2 * n as i64), 1);
    let f22 = pf[1].subst_d(&shift).coeff(0);
    let x1 = f22.coeff(1); // X^1 part is -(N²/12 + N + c_k)
    let c_pf2 = -(x1 + (&nn * &nn) / rat_i64(12) + &nn);
    let expect_pf2 = match t.k {
        6 => rat_frac(41, 18),
        8 => rat_frac(217, 96),
        10 => rat_frac(133, 60),
        _ => unreachable!(),
    };
    let pass = c_tail == expect_c && c_pf2 == expect_pf2;
    if !pass {
        return Err(Error::ConstantMismatch(format!(
            "k={}: C recovered {} (expect {}), pf2 constant {} (expect {})",
            t.k,
            rat_to_string(&c_tail),
            rat_to_string(&expect_c),
            rat_to_string(&c_pf2),
            rat_to_string(&expect_pf2)
        )));
    }
    Ok(TailReport {
        n,
        k: t.k,
        c_tail,
        c_pf2,
        pass,
    })
}

/// Level-1 entry table (R_m)_j as Y-polynomials, built by the first-order
/// recursion seeded by the scalar tower in the j = 0 column; the recursion
/// never references the hour, so alpha-independence is structural.
pub struct Level1Entries {
    pub n: usize,
    pub k: u64,
    /// table[m][j]
    pub table: Vec<Vec<Poly>>,
}

pub fn r_entries_level1(
    t: &TargetConfig,
    n: usize,
    j_max: usize,
    m_max: usize,
) -> Result<Level1Entries> {
    let tower = solve_r_tower(t, n, m_max)?;
    let am = crate::msp0::connection_am(t, n);
    let mut table = vec![vec![Poly::zero(); j_max + 1]; m_max + 1];
    #[allow(clippy::needless_range_loop)]
    for m in 0..=m_max {
        table[m][0] = tower.r[m].clone();
    }
    let y = Poly::x();
    let one_minus_y = Poly::one().sub(&y);
    let dy = |f: &Poly| y.mul(&y.sub(&Poly::one())).mul(&f.derivative());
    for j in 1..=j_max {
        for m in 0..=m_max {
            let mut acc = table[m][j - 1].clone();
            if m >= 1 {
                let c = rat_frac(1, n as i64)
                    * (rat_i64((n as i64 + 3) / 2) - rat_i64(j as i64) + rat_i64(m as i64));
                let prev = &table[m - 1][j - 1];
                acc = acc.add(&dy(prev).sub(&one_minus_y.mul(prev).scale(&c)));
            }
            if j >= n && j - n <= 4 {
                let c = rat_i64(am.band(j - n)) / &t.r;
                acc = acc.add(&one_minus_y.mul(&table[m][j - n]).scale(&c));
            }
            // degree bound k + floor(j/N)
            let bound = t.k as usize + j / n;
            if acc.degree().is_some_and(|d| d > bound) {
                return Err(Error::DegreeBoundViolated(format!(
                    "(R_{m})_{j} has degree {} > {bound}",
                    acc.degree().unwrap()
                )));
            }
            table[m][j] = acc;
        }
    }
    Ok(Level1Entries { n, k: t.k, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{all_targets, target_config};

    #[test]
    fn pf1_display() {
        // PF_1 = N D + (N+3)/2 X for all targets and several N
        for t in all_targets() {
            for n in [7usize, 11] {
                let pf = pf_expand(&t, n, 1).unwrap();
                let expect = PFOperator::new(vec![
                    Poly::monomial(rat_frac((n as i64 + 3) / 2, 1), 1),
                    Poly::constant(rat_i64(n as i64)),
                ]);
                assert_eq!(pf[0], expect, "k={} N={n}", t.k);
                // tilde shift: substituting D -> D - (N+3)/(2N) X gives N D
                let shift = Poly::monomial(rat_frac(-(n as i64 + 3), 2 * n as i64), 1);
                let tilde = pf[0].subst_d(&shift);
                assert_eq!(
                    tilde,
                    PFOperator::new(vec![Poly::zero(), Poly::constant(rat_i64(n as i64))])
                );
            }
        }
    }

    #[test]
    fn pf2_display() {
        // The printed second slot carries N(N+9)/2 on the top D-power
        // (printed as D, realized as D²), (N²+12N+23)/2 on X D, and its
        // D⁰ row lives in the conjugated frame D -> D - (N+3)/(2N) X:
        // (N²/12 + 25N/24 + 35/12 + 47/(24N)) X² - (N²/12 + N + c_k) X.
        let cks = [
            (6u32, rat_frac(41, 18)),
            (8, rat_frac(217, 96)),
            (10, rat_frac(133, 60)),
        ];
        for (k, ck) in cks {
            let t = target_config(k).unwrap();
            for n in [7i64, 11, 13] {
                let pf = pf_expand(&t, n as usize, 2).unwrap();
                let nn = rat_i64(n);
                // top D-power coefficient is the constant N(N+9)/2
                assert_eq!(
                    pf[1].coeff(2),
                    Poly::constant(&nn * (&nn + rat_i64(9)) / rat_i64(2)),
                    "k={k} N={n} D² row"
                );
                // D¹ coefficient is (N²+12N+23)/2 X
                assert_eq!(
                    pf[1].coeff(1),
                    Poly::monomial(
                        (&nn * &nn + rat_i64(12) * &nn + rat_i64(23)) / rat_i64(2),
                        1
                    ),
                    "k={k} N={n} D row"
                );
                // conjugated D⁰ row
                let shift = Poly::monomial(rat_frac(-(n + 3), 2 * n), 1);
                let tilde = pf[1].subst_d(&shift);
                let x2 = (&nn * &nn) / rat_i64(12)
                    + &nn * rat_frac(25, 24)
                    + rat_frac(35, 12)
                    + rat_frac(47, 24) / &nn;
                let x1 = -((&nn * &nn) / rat_i64(12) + &nn + &ck);
                assert_eq!(
                    tilde.coeff(0),
                    Poly::new(vec![Rat::zero(), x1, x2]),
                    "k={k} N={n} D⁰ row"
                );
            }
        }
    }

    #[test]
    fn r_tower_degrees_and_boundary() {
        for t in all_targets() {
            for n in [7usize, 11] {
                let tower = solve_r_tower(&t, n, 4).unwrap();
                assert_eq!(tower.r[0], Poly::one());
                for m in 1..=4 {
                    let d = tower.r[m].degree().unwrap_or(0);
                    assert!(d <= t.k as usize, "k={} N={n} m={m} deg={d}", t.k);
                }
            }
        }
    }

    #[test]
    fn delta_comparison_selects_one_reading() {
        for t in all_targets() {
            let rep = delta_compare(&t, 7, 4).unwrap();
            assert_eq!(rep.verdict, Some(LoopWeightReading::K), "k={}", t.k);
        }
    }

    #[test]
    fn tail_constants_recovered() {
        for t in all_targets() {
            for n in [7usize, 11] {
                let rep = tail_constants(&t, n).unwrap();
                assert!(rep.pass, "k={} N={n}", t.k);
            }
        }
    }

    #[test]
    fn inverse_power_sum_anchor() {
        // S_1 = -(N-1)/2
        for n in [7usize, 11, 13] {
            let s = zeta_inverse_power_sums(n, 3);
            assert_eq!(s[1], rat_frac(-((n as i64 - 1) / 2), 1), "N={n}");
        }
    }

    #[test]
    fn level1_entries_bounds_and_base() {
        let t = target_config(6).unwrap();
        let n = 7;
        let e = r_entries_level1(&t, n, n + 3, 4).unwrap();
        assert_eq!(e.table[0][0], Poly::one());
        // base column equals the scalar tower
        let tower = solve_r_tower(&t, n, 4).unwrap();
        for m in 0..=4 {
            assert_eq!(e.table[m][0], tower.r[m]);
        }
    }

    #[test]
    fn ode_residual_exact() {
        // N D(r_m) - m X r_m - P_m = 0 is what the slot solve enforces;
        // re-check by plugging the solved tower back into the operator
        let t = target_config(8).unwrap();
        let n = 7;
        let m_max = 3;
        let tower = solve_r_tower(&t, n, m_max).unwrap();
        let base = -((n as i64) + 3) / 2;
        let mut phi = LSeries::zero(m_max + 1);
        for (j, rj) in tower.r.iter().enumerate() {
            phi.insert(j, base - j as i64, y_to_x(rj));
        }
        let image = apply_operator(&t, n, &phi);
        for s in 0..=m_max {
            if let Some((_, f)) = image.fold_slot(s, n) {
                assert!(f.is_zero(), "slot {s} residual nonzero");
            }
        }
    }
}
