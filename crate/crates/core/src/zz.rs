//! The hypergeometric tower behind the Yukawa normalization: the
//! two-variable series F(w, x), the operator M F = w^{-1} D_w (F / F(0,x)),
//! the tower I_p = (M^p F)(0, x), and the product and symmetry identities
//! I_0 ... I_4 = Y, I_p = I_{4-p}.

use crate::error::{Error, Result};
use crate::rat::{rat_i64, Rat};
use crate::series::QSeries;
use crate::targets::TargetConfig;

/// Double truncation: coefficient of x^d is a truncated series in w.
#[derive(Clone, Debug)]
pub struct WSeries {
    pub coeffs: Vec<QSeries>,
    pub x_order: usize,
    pub w_order: usize,
}

impl WSeries {
    fn new(coeffs: Vec<QSeries>) -> Self {
        let x_order = coeffs.len() - 1;
        let w_order = coeffs.iter().map(|c| c.order()).min().unwrap();
        let coeffs = coeffs.into_iter().map(|c| c.truncate(w_order)).collect();
        WSeries {
            coeffs,
            x_order,
            w_order,
        }
    }

    /// The x-series of values at w = 0.
    pub fn at_w0(&self) -> QSeries {
        let v: Vec<Rat> = self.coeffs.iter().map(|c| c.coeff(0).clone()).collect();
        QSeries::new(v, self.x_order, &crate::rat::rat_zero())
    }
}

/// The generic-form series sum_d x^d prod(kw+m) / prod_i prod(a_i w + m);
/// for k = 6 the weight-2 factors regroup into the displayed
/// 2^d (w+r)^5 (2w+2r-1) denominator, which is asserted separately.
pub fn f_series(t: &TargetConfig, x_order: usize, w_order: usize) -> WSeries {
    let coeffs = crate::par::map_indexed(x_order + 1, 4, |d| f_degree(t, d as u64, w_order));
    WSeries::new(coeffs)
}

fn linear_w(c0: i64, c1: i64, w_order: usize) -> QSeries {
    QSeries::from_i64(vec![c0, c1], w_order)
}

fn f_degree(t: &TargetConfig, d: u64, w_order: usize) -> QSeries {
    let mut num = QSeries::rat_one(w_order);
    for m in 1..=(t.k * d) {
        num = num.mul(&linear_w(m as i64, t.k as i64, w_order));
    }
    let mut den = QSeries::rat_one(w_order);
    for &a in &t.weights {
        for m in 1..=(a * d) {
            den = den.mul(&linear_w(m as i64, a as i64, w_order));
        }
    }
    num.mul(&den.invert().expect("denominator has nonzero constant term"))
}

/// The k = 6 display: prod_{r=1}^{6d}(6w+r) / (2^d prod_{r=1}^d (w+r)^5 (2w+2r-1)).
pub fn f_degree_displayed_k6(d: u64, w_order: usize) -> QSeries {
    let mut num = QSeries::rat_one(w_order);
    for m in 1..=(6 * d) {
        num = num.mul(&linear_w(m as i64, 6, w_order));
    }
    let mut den = QSeries::rat_one(w_order);
    for r in 1..=d {
        let wr = linear_w(r as i64, 1, w_order);
        den = den
            .mul(&wr.pow(5))
            .mul(&linear_w(2 * r as i64 - 1, 2, w_order));
    }
    den = den.scale(&rat_i64(2).pow(d as i32));
    num.mul(&den.invert().expect("unit constant"))
}

/// M F = w^{-1} D_w (F / F(0,x)) with D_w = w + x d/dx; each application
/// costs one order of w-precision, and the division by w requires (and
/// asserts) that the numerator has w-valuation >= 1.
pub fn m_operator(f: &WSeries) -> Result<WSeries> {
    let f0 = f.at_w0();
    let f0_inv = f0.invert().map_err(|_| Error::WValuationViolated)?;
    // G = F / F(0,x): x-convolution with rational coefficients
    let mut g: Vec<QSeries> = Vec::with_capacity(f.x_order + 1);
    for d in 0..=f.x_order {
        let mut acc = QSeries::rat_zero(f.w_order);
        for i in 0..=d {
            if !num_traits::Zero::is_zero(f0_inv.coeff(d - i)) {
                acc = acc.add(&f.coeffs[i].scale(f0_inv.coeff(d - i)));
            }
        }
        g.push(acc);
    }
    // D_w G = w G + x dG/dx, then divide by w
    let mut out: Vec<QSeries> = Vec::with_capacity(f.x_order + 1);
    for (d, gd) in g.iter().enumerate() {
        let dw = gd
            .mul_qpow(1)
            .truncate(f.w_order)
            .add(&gd.scale(&rat_i64(d as i64)));
        // divide by w: the constant term must vanish
        if !num_traits::Zero::is_zero(dw.coeff(0)) {
            return Err(Error::WValuationViolated);
        }
        let mut v: Vec<Rat> = (1..=dw.order()).map(|i| dw.coeff(i).clone()).collect();
        v.resize(f.w_order, crate::rat::rat_zero());
        out.push(QSeries::new(v, f.w_order - 1, &crate::rat::rat_zero()));
    }
    Ok(WSeries::new(out))
}

/// I_0 .. I_4 from five applications of M.
pub fn ip_tower(t: &TargetConfig, x_order: usize) -> Result<Vec<QSeries>> {
    let guard = 4;
    let w_order = 5 + guard;
    let mut f = f_series(t, x_order, w_order);
    let mut out = vec![f.at_w0()];
    for _ in 1..=4 {
        f = m_operator(&f)?;
        out.push(f.at_w0());
    }
    Ok(out)
}

#[derive(Debug)]
pub struct ZZReport {
    pub k: u64,
    pub x_order: usize,
    pub product_identity: bool,
    pub symmetry_identity: bool,
    pub first_product_failure: Option<usize>,
    pub first_symmetry_failure: Option<(usize, usize)>,
}

/// Verify I_0(x)...I_4(x) = 1/(1-rx) and I_p = I_{4-p} through x_order.
pub fn verify_zz(t: &TargetConfig, x_order: usize) -> Result<ZZReport> {
    let tower = ip_tower(t, x_order)?;
    let mut prod = QSeries::rat_one(x_order);
    for ip in &tower {
        prod = prod.mul(&ip.truncate(x_order));
    }
    let y = QSeries::geometric(&t.r, x_order);
    let (product_identity, _, first_product_failure) = prod.eq_report(&y);
    let mut symmetry_identity = true;
    let mut first_symmetry_failure = None;
    for p in 0..=4usize {
        let (ok, _, at) = tower[p].eq_report(&tower[4 - p]);
        if !ok && symmetry_identity {
            symmetry_identity = false;
            first_symmetry_failure = at.map(|d| (p, d));
        }
    }
    Ok(ZZReport {
        k: t.k,
        x_order,
        product_identity,
        symmetry_identity,
        first_product_failure,
        first_symmetry_failure,
    })
}
