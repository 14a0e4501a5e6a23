//! The acceptance suite: one runnable check per criterion, each reporting
//! a stable id, the verified depth, and the first failure locus if any.
//! The CLI's verify-all and the integration test target both consume this
//! registry, so a criterion can never silently drift from its test.

use crate::error::Error;
use crate::ifun;
use crate::membership::{self, CertStatus};
use crate::msp0;
use crate::rat::{rat_to_string, Rat};
use crate::rmat0;
use crate::rmat1;
use crate::series::QSeries;
use crate::targets::{all_targets, target_config};
use crate::zz;
use crate::{genpoly::GenPoly, gw0};
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check_id: String,
    pub title: String,
    pub status: CheckStatus,
    /// what depth the statement was verified through
    pub order: String,
    pub first_failure: Option<String>,
    /// recorded values, verdicts, observations
    pub detail: Vec<String>,
}

impl CheckOutcome {
    fn pass(id: &str, title: &str, order: String, detail: Vec<String>) -> Self {
        CheckOutcome {
            check_id: id.into(),
            title: title.into(),
            status: CheckStatus::Pass,
            order,
            first_failure: None,
            detail,
        }
    }

    fn fail(id: &str, title: &str, order: String, locus: String, detail: Vec<String>) -> Self {
        CheckOutcome {
            check_id: id.into(),
            title: title.into(),
            status: CheckStatus::Fail,
            order,
            first_failure: Some(locus),
            detail,
        }
    }
}

pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub run: Box<dyn Fn() -> CheckOutcome + Send + Sync>,
}

fn err_outcome(id: &str, title: &str, order: String, e: &Error) -> CheckOutcome {
    CheckOutcome::fail(id, title, order, e.to_string(), vec![])
}

fn check_yukawa() -> CheckOutcome {
    let id = "C01-yukawa-normalization";
    let title = "I0^2 I11^2 I22 = 1/(1-rq) through order 30 for k = 6, 8, 10";
    let mut detail = vec![];
    for t in all_targets() {
        let rep = gw0::verify_yukawa_identity(&t, 30);
        if !rep.pass {
            return CheckOutcome::fail(
                id,
                title,
                "order 30".into(),
                format!(
                    "k={} first failing coefficient q^{:?}",
                    t.k, rep.first_failure
                ),
                detail,
            );
        }
        detail.push(format!("k={}: exact through q^{}", t.k, rep.order));
    }
    CheckOutcome::pass(id, title, "order 30".into(), detail)
}

fn check_appendix_identities() -> CheckOutcome {
    let id = "C02-appendix-identities";
    let title = "product identity I0..I4 = Y and symmetry I_p = I_{4-p}";
    let mut detail = vec![];
    for t in all_targets() {
        let order = 25;
        match zz::verify_zz(&t, order) {
            Ok(rep) => {
                if !rep.product_identity || !rep.symmetry_identity {
                    return CheckOutcome::fail(
                        id,
                        title,
                        format!("order {order}"),
                        format!(
                            "k={}: product {:?}, symmetry {:?}",
                            t.k, rep.first_product_failure, rep.first_symmetry_failure
                        ),
                        detail,
                    );
                }
                let form = if t.k == 6 {
                    "displayed-form-checked"
                } else {
                    "generic form"
                };
                detail.push(format!(
                    "k={}: both identities exact through x^{order} ({form})",
                    t.k
                ));
            }
            Err(e) => return err_outcome(id, title, format!("order {order}"), &e),
        }
    }
    CheckOutcome::pass(id, title, "order 25".into(), detail)
}

fn check_mirror_connection() -> CheckOutcome {
    let id = "C03-mirror-connection";
    let title = "S-matrix from the quantum connection: mirror column, wrap-around, symplectic identity (k=6, N=7, order 6)";
    let t = target_config(6).unwrap();
    let n = 7;
    let order = 6;
    let zdepth = (n * order + 6) as i64;
    let sm = match msp0::solve_sm(&t, n, order, zdepth) {
        Ok(sm) => sm,
        Err(e) => return err_outcome(id, title, format!("order {order}, zdepth {zdepth}"), &e),
    };
    // column 0 is z^{-1} I^M by construction; re-derive I^M independently
    // and compare to make the identification explicit
    let im = ifun::msp_ifunction(&t, n, order, zdepth).unwrap();
    let col0 = &sm.columns[0];
    let shifted = im.block.shift_z(-1);
    for e in col0.lo()..=col0.hi() {
        if !col0.coeff(e).eq_to_order(&shifted.coeff(e)) {
            return CheckOutcome::fail(
                id,
                title,
                format!("order {order}"),
                format!("column 0 differs from z^-1 I^M at z^{e}"),
                vec![],
            );
        }
    }
    if let Some((a, b, z, q)) = sm.symplectic_residual() {
        return CheckOutcome::fail(
            id,
            title,
            format!("order {order}"),
            format!("S(z)S(-z)* - Id nonzero at entry ({a},{b}) z^{z} q^{q}"),
            vec![],
        );
    }
    CheckOutcome::pass(
        id,
        title,
        format!("order {order}, z-window [-{zdepth}, 0]"),
        vec![
            "column 0 = z^-1 I^M exactly".into(),
            "wrap-around column identity holds (asserted during the solve)".into(),
            "S(z)S(-z)* = Id on the full reliable window".into(),
        ],
    )
}

fn check_pf_annihilation() -> CheckOutcome {
    let id = "C04-picard-fuchs";
    let title = "the Picard-Fuchs operator annihilates I^M through order 4 at N = 7";
    let mut detail = vec![];
    for t in all_targets() {
        match msp0::pf_check(&t, 7, 4) {
            Ok(rep) if rep.pass => {
                detail.push(format!("k={}: operator image vanishes identically", t.k))
            }
            Ok(rep) => {
                return CheckOutcome::fail(
                    id,
                    title,
                    "order 4".into(),
                    format!(
                        "k={}: first residue at (z,q) = {:?}",
                        t.k, rep.first_failure
                    ),
                    detail,
                )
            }
            Err(e) => return err_outcome(id, title, "order 4".into(), &e),
        }
    }
    CheckOutcome::pass(id, title, "order 4, N = 7".into(), detail)
}

fn check_specialized_entries() -> CheckOutcome {
    let id = "C05-specialized-entries";
    let title = "specialized S-entries: unit value, rotation, q-degree bounds (a <= 3k, N = 7)";
    let n = 7usize;
    let mut detail = vec![];
    for t in all_targets() {
        // S^alpha_{1;0} = 1 for every alpha, cross-checked closed form vs
        // connection marching
        match msp0::specialize_cross_check(&t, n, 1) {
            Ok(s) => {
                if !s.eq_to_order(&QSeries::rat_one(s.order())) {
                    return CheckOutcome::fail(
                        id,
                        title,
                        "a = 1".into(),
                        format!("k={}: S_(1;0) != 1", t.k),
                        detail,
                    );
                }
            }
            Err(e) => return err_outcome(id, title, "a = 1".into(), &e),
        }
        let mut degenerate = vec![];
        for a in 1..=(3 * t.k) {
            if msp0::specialization_degenerate(&t, a) {
                degenerate.push(a);
                // both routes must report, not evaluate
                if msp0::specialize_closed_form(&t, n, a).is_ok()
                    || msp0::specialize_s_alpha(&t, n, a, 0, 1).is_ok()
                {
                    return CheckOutcome::fail(
                        id,
                        title,
                        format!("a = {a}"),
                        format!(
                            "k={}: degenerate a={a} was evaluated instead of reported",
                            t.k
                        ),
                        detail,
                    );
                }
                continue;
            }
            // closed form vs marching at i = 0, all alpha
            if let Err(e) = msp0::specialize_cross_check(&t, n, a) {
                return err_outcome(id, title, format!("a = {a}"), &e);
            }
            // degree bounds for all i, plus the correlator-degree form
            // (g-1 + (3g-3 + sum of insertion degrees)/N at g = 0):
            // ceil(a/k)-1+floor(i/N) <= (a-1)/k + i/N
            let res = match msp0::specialize_s_alpha(&t, n, a, n + 3, 1) {
                Ok(r) => r,
                Err(e) => return err_outcome(id, title, format!("a = {a}"), &e),
            };
            for r in &res {
                let bound = (a as usize).div_ceil(t.k as usize) - 1 + r.i / n;
                let smooth = ((a as usize - 1) * n + r.i * t.k as usize) / (t.k as usize * n);
                if let Some(d) = r.degree {
                    if d > bound || d > smooth {
                        return CheckOutcome::fail(
                            id,
                            title,
                            format!("a = {a}, i = {}", r.i),
                            format!("k={}: degree {d} exceeds bound {} / {}", t.k, bound, smooth),
                            detail,
                        );
                    }
                }
            }
            // rotation property on a spot grid
            for (alpha, beta, i) in [(1usize, 2usize, 1usize), (2, 5, 3), (3, 6, n + 2)] {
                match msp0::rotation_check(&t, n, a, i, alpha, beta) {
                    Ok(true) => {}
                    Ok(false) => {
                        return CheckOutcome::fail(
                            id,
                            title,
                            format!("a = {a}"),
                            format!(
                                "k={}: rotation fails at (a={a}, i={i}, {alpha}->{beta})",
                                t.k
                            ),
                            detail,
                        )
                    }
                    Err(e) => return err_outcome(id, title, format!("a = {a}"), &e),
                }
            }
        }
        detail.push(format!(
            "k={}: bounds and rotation exact for a <= {}, degenerate a reported: {:?}",
            t.k,
            3 * t.k,
            degenerate
        ));
    }
    CheckOutcome::pass(id, title, "a <= 3k, i <= N+3, N = 7".into(), detail)
}

fn check_level1_tower() -> CheckOutcome {
    let id = "C06-level1-tower";
    let title = "level-1 scalar tower: r_m in Q[Y], deg <= k, boundary matches one QRR reading";
    let mut detail = vec![];
    for t in all_targets() {
        for n in [7usize, 11] {
            let m_max = 6.min(n - 1);
            match rmat1::solve_r_tower(&t, n, m_max) {
                Ok(tower) => {
                    for m in 0..=m_max {
                        let d = tower.r[m].degree().unwrap_or(0);
                        if d > t.k as usize {
                            return CheckOutcome::fail(
                                id,
                                title,
                                format!("m <= {m_max}"),
                                format!("k={} N={n}: deg r_{m} = {d} > k", t.k),
                                detail,
                            );
                        }
                    }
                }
                Err(e) => return err_outcome(id, title, format!("N={n}"), &e),
            }
        }
        match rmat1::delta_compare(&t, 7, 4) {
            Ok(rep) => {
                detail.push(format!(
                    "k={}: boundary matches exactly one reading: {:?}; r_m(0) observed: {}",
                    t.k,
                    rep.verdict.unwrap(),
                    {
                        let tower = rmat1::solve_r_tower(&t, 7, 4).unwrap();
                        (1..=4)
                            .map(|m| rat_to_string(&tower.at_zero(m)))
                            .collect::<Vec<_>>()
                            .join(", ")
                    }
                ));
            }
            Err(e) => return err_outcome(id, title, "m <= 4".into(), &e),
        }
    }
    CheckOutcome::pass(id, title, "m <= min(6, N-1), N in {7, 11}".into(), detail)
}

fn check_tail_constants() -> CheckOutcome {
    let id = "C07-tail-constants";
    let title = "tail constants C_k and PF2 constants c_k recovered exactly";
    let mut detail = vec![];
    for t in all_targets() {
        for n in [7usize, 11] {
            match rmat1::tail_constants(&t, n) {
                Ok(rep) => detail.push(format!(
                    "k={} N={n}: C = {}, pf2 constant = {}",
                    t.k,
                    rat_to_string(&rep.c_tail),
                    rat_to_string(&rep.c_pf2)
                )),
                Err(e) => return err_outcome(id, title, format!("N={n}"), &e),
            }
        }
    }
    CheckOutcome::pass(id, title, "exact, N in {7, 11}".into(), detail)
}

fn check_level0_entries() -> CheckOutcome {
    let id = "C08-level0-entries";
    let title =
        "level-0 R-matrix: window expansions, vanishing pattern, membership certificates (N = 11)";
    let t = target_config(6).unwrap();
    let n = 11usize;
    let mut detail = vec![];
    let direct = match rmat0::level0_r_direct(&t, n, 6, 12) {
        Ok(d) => d,
        Err(e) => return err_outcome(id, title, "N=11".into(), &e),
    };
    if let Err(e) = direct.check_leading_expansions() {
        return err_outcome(id, title, "N=11".into(), &e);
    }
    let m_max = 4.min(n - 4);
    // full-window table for the dual route, vanishing pattern and the
    // twisted survivors (certificates of total degree <= 3)
    let order = 72usize;
    let entries = match rmat0::r_entries_level0(&t, n, m_max, order) {
        Ok(e) => e,
        Err(e) => return err_outcome(id, title, format!("m <= {m_max}"), &e),
    };
    // dual route against the direct construction
    for m in 0..=2usize.min(direct.ztop as usize) {
        for j in 0..=(n + 3) {
            for b in 0..4 {
                if !direct.entry(m, j, b).eq_to_order(entries.entry(m, j, b)) {
                    return CheckOutcome::fail(
                        id,
                        title,
                        "m <= 2".into(),
                        format!("direct and recursion disagree at (m,j,b) = ({m},{j},{b})"),
                        detail,
                    );
                }
            }
        }
    }
    detail.push("direct Birkhoff construction and entry recursion agree for m <= 2".into());
    let g = ifun::generators_with_tower(&t, order, 6);
    // certify every survivor, escalating the total degree; each fit runs
    // on the series truncated to exactly the window its bound needs, and
    // the expensive degree-4 data (126 monomials + 8 guards of depth) is
    // only built if some entry genuinely resists degree 3
    let mut certified = 0usize;
    let mut max_degree = 0u32;
    let mut needs_deep: Vec<(usize, usize, bool)> = vec![];
    for (m, b, twisted, series) in entries.survivors(&g.y) {
        if series.is_zero() {
            continue;
        }
        match certify_upto(&series, &g, 3) {
            Ok(Some(bound)) => {
                certified += 1;
                max_degree = max_degree.max(bound);
            }
            Ok(None) => needs_deep.push((m, b, twisted)),
            Err(e) => return err_outcome(id, title, "membership".into(), &e),
        }
    }
    if !needs_deep.is_empty() {
        let deep_order = membership::monomials(4).len() + 8;
        let deep = match rmat0::r_entries_level0_upto(&t, n, m_max, deep_order, m_max + 3) {
            Ok(e) => e,
            Err(e) => return err_outcome(id, title, "deep table".into(), &e),
        };
        let g_deep = ifun::generators_with_tower(&t, deep_order, 6);
        for (m, b, twisted) in needs_deep {
            let j = if twisted { b + n + m } else { b + m };
            if twisted || j > m_max + 3 {
                return CheckOutcome::fail(
                    id,
                    title,
                    "membership".into(),
                    format!("no certificate for the (m={m}, b={b}, twisted={twisted}) entry"),
                    detail,
                );
            }
            let series = deep.entry(m, j, b).clone();
            match membership::find_polynomial(&series, &g_deep, 4, 8) {
                Ok(cert) if cert.status == CertStatus::Certified => {
                    certified += 1;
                    max_degree = max_degree.max(4);
                }
                Ok(_) | Err(Error::GuardFailed(_)) => {
                    return CheckOutcome::fail(
                        id,
                        title,
                        "membership".into(),
                        format!("no certificate for the (m={m}, b={b}) entry up to degree 4"),
                        detail,
                    )
                }
                Err(e) => return err_outcome(id, title, "membership".into(), &e),
            }
        }
    }
    detail.push(format!(
        "{certified} surviving entries certified in Q[A,B,B2,B3,Y] with 8 guard coefficients (max total degree {max_degree})"
    ));
    CheckOutcome::pass(
        id,
        title,
        format!("N = 11, m <= {m_max}, order {order}"),
        detail,
    )
}

/// Try certifying with ascending degree bounds, truncating the series to
/// the exact window each bound needs; Ok(None) means every bound within
/// the series order was exhausted.
fn certify_upto(
    series: &QSeries,
    g: &crate::ifun::Generators,
    top: u32,
) -> Result<Option<u32>, Error> {
    for bound in 1..=top {
        let need = membership::monomials(bound).len() + 8;
        if series.order() < need {
            break;
        }
        match membership::find_polynomial(&series.truncate(need), g, bound, 8) {
            Ok(cert) if cert.status == CertStatus::Certified => return Ok(Some(bound)),
            Ok(_) => {}
            Err(Error::GuardFailed(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn check_finite_generation() -> CheckOutcome {
    let id = "C09-finite-generation";
    let title = "D-closure witnesses at order 30 with 8 guards; potential recursion dual route";
    let mut detail = vec![];
    for t in all_targets() {
        match membership::dclosure_witnesses(&t, 30) {
            Ok(rep) => {
                let names: Vec<&str> = rep.witnesses.iter().map(|(n, _)| n.as_str()).collect();
                detail.push(format!("k={}: certificates for {}", t.k, names.join(", ")));
            }
            Err(e) => return err_outcome(id, title, "order 30".into(), &e),
        }
        // P_{0,3} = 1 and the chain to P_{0,5} agrees between routes
        let g = ifun::generators_with_tower(&t, 12, 8);
        let mut poly = GenPoly::one();
        let mut series = QSeries::rat_one(12);
        for npts in 3..5i64 {
            poly = gw0::p_recursion_poly(&poly, 0, npts);
            series = gw0::p_recursion_series(&series, 0, npts, &g);
            if !poly.expand(&g).eq_to_order(&series) {
                return CheckOutcome::fail(
                    id,
                    title,
                    format!("n = {npts}"),
                    format!("k={}: generator-polynomial and series routes disagree", t.k),
                    detail,
                );
            }
        }
    }
    CheckOutcome::pass(id, title, "order 30, guards 8".into(), detail)
}

fn check_degree_sanity() -> CheckOutcome {
    let id = "C10-degree-sanity";
    let title = "correlator q-degree bound at genus 0 on the specialized entries";
    // the bound g-1+(3g-3+sum a_i)/N at g=0 specializes, for the one-edge
    // one-insertion pairing behind S^alpha_{a;i}, to (a-1)/k + i/N; the
    // entries of C05 are re-scanned against it
    let n = 7usize;
    let mut scanned = 0usize;
    for t in all_targets() {
        for a in 1..=(3 * t.k) {
            if msp0::specialization_degenerate(&t, a) {
                continue;
            }
            let res = match msp0::specialize_s_alpha(&t, n, a, n + 3, 2) {
                Ok(r) => r,
                Err(e) => return err_outcome(id, title, format!("a={a}"), &e),
            };
            for r in &res {
                let smooth = ((a as usize - 1) * n + r.i * t.k as usize) / (t.k as usize * n);
                if let Some(d) = r.degree {
                    if d > smooth {
                        return CheckOutcome::fail(
                            id,
                            title,
                            format!("a={a}, i={}", r.i),
                            format!("k={}: degree {d} exceeds {smooth}", t.k),
                            vec![],
                        );
                    }
                }
                scanned += 1;
            }
        }
    }
    CheckOutcome::pass(
        id,
        title,
        "a <= 3k, N = 7".into(),
        vec![format!("{scanned} entries scanned")],
    )
}

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: "C01-yukawa-normalization",
            title: "Yukawa normalization",
            run: Box::new(check_yukawa),
        },
        Check {
            id: "C02-appendix-identities",
            title: "hypergeometric tower identities",
            run: Box::new(check_appendix_identities),
        },
        Check {
            id: "C03-mirror-connection",
            title: "mirror column and symplectic identity",
            run: Box::new(check_mirror_connection),
        },
        Check {
            id: "C04-picard-fuchs",
            title: "Picard-Fuchs annihilation",
            run: Box::new(check_pf_annihilation),
        },
        Check {
            id: "C05-specialized-entries",
            title: "specialized S-matrix entries",
            run: Box::new(check_specialized_entries),
        },
        Check {
            id: "C06-level1-tower",
            title: "level-1 scalar tower",
            run: Box::new(check_level1_tower),
        },
        Check {
            id: "C07-tail-constants",
            title: "tail and PF2 constants",
            run: Box::new(check_tail_constants),
        },
        Check {
            id: "C08-level0-entries",
            title: "level-0 entries and membership",
            run: Box::new(check_level0_entries),
        },
        Check {
            id: "C09-finite-generation",
            title: "finite-generation witnesses",
            run: Box::new(check_finite_generation),
        },
        Check {
            id: "C10-degree-sanity",
            title: "correlator degree bound",
            run: Box::new(check_degree_sanity),
        },
    ]
}

/// Run every check (in parallel when enabled), preserving registry order.
pub fn run_all() -> Vec<CheckOutcome> {
    let jobs: Vec<_> = checks().into_iter().map(|c| c.run).collect();
    crate::par::run_jobs(jobs)
}

/// Observed coefficient-growth ratio of I0 against r (a convergence-radius
/// diagnostic, logged by the CLI, never asserted).
pub fn radius_diagnostic(k: u32) -> Option<(Rat, Rat)> {
    let t = target_config(k).ok()?;
    let zi = ifun::z_ifunction(&t, 12);
    let hi = zi.i0.coeff(12).clone();
    let lo = zi.i0.coeff(11).clone();
    if num_traits::Zero::is_zero(&lo) {
        return None;
    }
    Some((hi / lo, t.r.clone()))
}
