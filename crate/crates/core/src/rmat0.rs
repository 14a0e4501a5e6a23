//! Level-0 computations on the hypersurface: the direct Birkhoff
//! construction of the R-matrix restricted to Z (finite there, because the
//! hypersurface block of the QRR factor is trivial and S^Z is a finite
//! Laurent matrix), the entry recursion in the normalized basis, the
//! mod-N vanishing pattern, and the ring-membership inputs.

use crate::error::{Error, Result};
use crate::gw0::{s_z_matrix_from, SZMatrix};
use crate::ifun::{generators, msp_ifunction_z_ascending, Generators};
use crate::laurent::LaurentBlock;
use crate::quotient::QElem;
use crate::rat::{rat_i64, Rat};
use crate::series::{QSeries, TruncSeries};
use crate::targets::TargetConfig;

/// Columns of R(z)* restricted to the hypersurface, ascending in z.
pub struct Level0Direct {
    pub n: usize,
    pub order: usize,
    /// reliable upper z-exponent of the R-columns
    pub ztop: i64,
    /// columns[j][a] = H^a-component of R(z)* p^j |_Z
    pub columns: Vec<[LaurentBlock<Rat>; 4]>,
    pub gens: Generators,
}

fn h_component(block: &LaurentBlock<QElem>, a: usize) -> LaurentBlock<Rat> {
    let coeffs: Vec<QSeries> = (block.lo()..=block.hi())
        .map(|e| {
            let c = block.coeff(e);
            let v: Vec<Rat> = (0..=c.order()).map(|d| c.coeff(d).coeff(a)).collect();
            TruncSeries::new(v, c.order(), &crate::rat::rat_zero())
        })
        .collect();
    LaurentBlock::new(block.lo(), coeffs, block.exact_below, block.exact_above)
}

/// Build R(z)*p^j|_Z = S^Z(-z) (S^M(z)* p^j)|_Z. The restricted S-matrix
/// columns are marched from the restricted I-function with the same
/// connection recursion (restriction is a ring map), in the ascending
/// expansion where the hypersurface block is honest: every negative
/// z-power of the result must cancel, which is asserted.
pub fn level0_r_direct(t: &TargetConfig, n: usize, order: usize, zup: i64) -> Result<Level0Direct> {
    let gens = generators(t, order.max(2));
    let sz = s_z_matrix_from(&gens)?;
    let am = crate::msp0::connection_am(t, n);
    let col0 = msp_ifunction_z_ascending(t, n, order, zup + 6);
    let hring = crate::quotient::h_ring();
    let h = QElem::var_pow(&hring, 1);
    let mut cols = vec![col0];
    for j in 0..(n + 3) {
        let prev = &cols[j];
        let mut col = prev.scale_ring(&h).add(&prev.d().shift_z(1));
        if j >= n - 1 {
            let i = j - (n - 1);
            let back = &cols[j + 1 - n];
            let backq: Vec<TruncSeries<QElem>> = (back.lo()..=back.hi())
                .map(|e| back.coeff(e).mul_qpow(1).truncate(order))
                .collect();
            let backq = LaurentBlock::new(back.lo(), backq, back.exact_below, back.exact_above);
            col = col.sub(&backq.scale(&rat_i64(am.band(i))));
        }
        cols.push(col);
    }
    // S^Z(-z) as an operator matrix
    let sz_op_neg: SZMatrix = sz.adjoint().negate_z();
    let mut columns = Vec::with_capacity(n + 4);
    let mut ztop = i64::MAX;
    for (j, col) in cols.iter().enumerate() {
        let v: [LaurentBlock<Rat>; 4] = std::array::from_fn(|a| h_component(col, a));
        let r = sz_op_neg.apply(&v);
        // R is a power series in z: the principal parts must cancel
        for (a, entry) in r.iter().enumerate() {
            for e in entry.lo()..0 {
                if !entry.coeff(e).is_zero() {
                    return Err(Error::ExpansionWindowViolated(format!(
                        "R* p^{j} has H^{a} z^{e} residue"
                    )));
                }
            }
            ztop = ztop.min(entry.hi());
        }
        columns.push(r);
    }
    Ok(Level0Direct {
        n,
        order,
        ztop,
        columns,
        gens,
    })
}

impl Level0Direct {
    /// normalization factor Pi_b = I0 I11 ... I_{bb} (I33 = I11)
    pub fn pi(&self, b: usize) -> QSeries {
        let g = &self.gens;
        match b {
            0 => g.i0.clone(),
            1 => g.i0.mul(&g.i11),
            2 => g.i0.mul(&g.i11).mul(&g.i22),
            3 => g.i0.mul(&g.i11).mul(&g.i22).mul(&g.i11),
            _ => unreachable!(),
        }
    }

    /// (R_m)_j^b from the direct construction.
    pub fn entry(&self, m: usize, j: usize, b: usize) -> QSeries {
        let block = &self.columns[j][b];
        let coeff = block.coeff(m as i64);
        coeff.mul(&self.pi(b).invert().expect("Pi_b has unit constant term"))
    }

    /// Check the two displayed expansions:
    ///   R(z)*1|_Z = I0 + O(z^{N-3}),
    ///   R(z)*p|_Z = z D(I0) + I0 I11 H + O(z^{N-2}).
    pub fn check_leading_expansions(&self) -> Result<()> {
        let g = &self.gens;
        let n = self.n as i64;
        let win = (n - 3).min(self.ztop + 1);
        let col = &self.columns[0];
        for e in 0..win {
            for (a, entry) in col.iter().enumerate() {
                let c = entry.coeff(e);
                let expect = if a == 0 && e == 0 {
                    g.i0.clone()
                } else {
                    QSeries::rat_zero(self.order)
                };
                if !c.eq_to_order(&expect) {
                    return Err(Error::ExpansionWindowViolated(format!(
                        "column 0: H^{a} z^{e} differs from the displayed window"
                    )));
                }
            }
        }
        let win = (n - 2).min(self.ztop + 1);
        let col = &self.columns[1];
        for e in 0..win {
            for (a, entry) in col.iter().enumerate() {
                let c = entry.coeff(e);
                let expect = if a == 0 && e == 1 {
                    g.i0.d()
                } else if a == 1 && e == 0 {
                    g.i0.mul(&g.i11)
                } else {
                    QSeries::rat_zero(self.order)
                };
                if !c.eq_to_order(&expect) {
                    return Err(Error::ExpansionWindowViolated(format!(
                        "column 1: H^{a} z^{e} differs from the displayed window"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The (m, j, b) entry table built by the level-0 recursion
///   (R_m)_j^b = (D + C_b)(R_{m-1})_{j-1}^b + (R_m)_{j-1}^{b-1}
///               - c_{j-N} q (R_m)_{j-N}^b,
/// seeded by (R_m)_0^b = delta_{b,0} delta_{m,0}; the quantity j - b - m
/// is preserved mod N by every term, so entries with j != b + m (mod N)
/// vanish, which is asserted.
pub struct Level0Entries {
    pub n: usize,
    pub order: usize,
    pub m_max: usize,
    /// table[m][j][b]
    pub table: Vec<Vec<Vec<QSeries>>>,
}

pub fn r_entries_level0(
    t: &TargetConfig,
    n: usize,
    m_max: usize,
    order: usize,
) -> Result<Level0Entries> {
    r_entries_level0_upto(t, n, m_max, order, n + 3)
}

/// Restrict the table to columns j <= j_max (the recursion only looks
/// backward in j, so a truncated table is exact on its window).
pub fn r_entries_level0_upto(
    t: &TargetConfig,
    n: usize,
    m_max: usize,
    order: usize,
    j_max: usize,
) -> Result<Level0Entries> {
    assert!(m_max < n - 3, "entry recursion window requires m < N - 3");
    let g = generators(t, order);
    let am = crate::msp0::connection_am(t, n);
    // C_b = D log Pi_b
    let pis = {
        let p0 = g.i0.clone();
        let p1 = p0.mul(&g.i11);
        let p2 = p1.mul(&g.i22);
        let p3 = p2.mul(&g.i11);
        [p0, p1, p2, p3]
    };
    let cb: Vec<QSeries> = pis
        .iter()
        .map(|p| p.d().mul(&p.invert().expect("unit constant")))
        .collect();
    let zero = QSeries::rat_zero(order);
    let mut table = vec![vec![vec![zero.clone(); 4]; j_max + 1]; m_max + 1];
    table[0][0][0] = QSeries::rat_one(order);
    for j in 1..=j_max {
        for m in 0..=m_max {
            for b in 0..4 {
                let mut acc = QSeries::rat_zero(order);
                if m >= 1 {
                    let prev = &table[m - 1][j - 1][b];
                    acc = acc.add(&prev.d()).add(&cb[b].mul(prev));
                }
                if b >= 1 {
                    acc = acc.add(&table[m][j - 1][b - 1]);
                }
                if j >= n && j - n <= 4 {
                    let band = rat_i64(am.band(j - n));
                    acc = acc.sub(&table[m][j - n][b].mul_qpow(1).truncate(order).scale(&band));
                }
                table[m][j][b] = acc;
            }
        }
    }
    let e = Level0Entries {
        n,
        order,
        m_max,
        table,
    };
    e.check_vanishing()?;
    Ok(e)
}

impl Level0Entries {
    pub fn entry(&self, m: usize, j: usize, b: usize) -> &QSeries {
        &self.table[m][j][b]
    }

    fn check_vanishing(&self) -> Result<()> {
        for (m, per_j) in self.table.iter().enumerate() {
            for (j, per_b) in per_j.iter().enumerate() {
                for (b, s) in per_b.iter().enumerate() {
                    if (j as i64 - b as i64 - m as i64).rem_euclid(self.n as i64) != 0
                        && !s.is_zero()
                    {
                        return Err(Error::VanishingPatternViolated { m, j, b });
                    }
                }
            }
        }
        Ok(())
    }

    /// The surviving entries handed to the membership solver:
    /// (R_m)_{b+m}^b, and -Y (R_m)_{b+N+m}^b when in range.
    pub fn survivors(&self, y: &QSeries) -> Vec<(usize, usize, bool, QSeries)> {
        let j_max = self.table[0].len() - 1;
        let mut out = vec![];
        for m in 0..=self.m_max {
            for b in 0..4 {
                let j = b + m;
                if j <= j_max {
                    out.push((m, b, false, self.table[m][j][b].clone()));
                }
                let j2 = b + self.n + m;
                if j2 <= j_max.min(self.n + 3) {
                    let s = self.table[m][j2][b].mul(y).neg();
                    out.push((m, b, true, s));
                }
            }
        }
        out
    }
}
