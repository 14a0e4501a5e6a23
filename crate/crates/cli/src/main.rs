//! Command-line surface: every theorem-level check is one invocation, and
//! verify-all runs the full acceptance registry. Exit codes: 0 when all
//! requested assertions pass, 2 on an assertion failure (with the first
//! failure locus), 3 on an invalid job specification.

mod cache;
mod config;
mod report;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use msplab_core::acceptance::{self, CheckOutcome, CheckStatus};
use msplab_core::rat::rat_to_string;
use msplab_core::series::QSeries;
use msplab_core::targets::target_config;
use msplab_core::{gw0, ifun, membership, msp0, rmat0, rmat1, zz};
use report::Report;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "msplab",
    version,
    about = "exact-arithmetic verification lab for MSP genus-zero structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    job: JobArgs,
}

#[derive(Args, Clone)]
struct JobArgs {
    /// target degree (6, 8 or 10)
    #[arg(long, global = true)]
    k: Option<u32>,
    /// number of master-space directions (odd prime >= 7)
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// q-truncation order
    #[arg(long, global = true)]
    order: Option<usize>,
    /// z-window depth override
    #[arg(long, global = true)]
    zdepth: Option<i64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// cache directory (or MSPLAB_CACHE)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// key=value config file overriding defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the generator series A, B, B2, B3, Y (cached when a cache
    /// directory is configured)
    Generators,
    /// Genus-zero invariants through the mirror map, dual-route checked
    Gw0 {
        #[arg(long, default_value_t = 8)]
        dmax: usize,
    },
    /// Verify the Yukawa normalization I0²I11²I22 = 1/(1-rq)
    YukawaVerify,
    /// Solve the S-matrix from the quantum connection; optionally
    /// specialize an entry
    Smatrix {
        /// a,i,alpha — report the specialized entry S^alpha_{a;i}
        #[arg(long)]
        specialize: Option<String>,
    },
    /// Apply the Picard-Fuchs operator to the master-space I-function
    PfCheck,
    /// R-matrix computations at one level
    Rmatrix {
        #[arg(long)]
        level: u8,
    },
    /// Compare the level-1 tower boundary against the QRR expansion under
    /// both loop-weight readings
    DeltaCompare,
    /// Recover the tail and PF2 constants
    TailConstants,
    /// Membership certificate for a named series
    Membership {
        /// one of DA, DB2, DB3, A2, B4, Y, yukawa-normalized
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Verify the hypergeometric tower identities
    ZzVerify,
    /// Run the full acceptance registry
    VerifyAll,
}

struct Job {
    k: u32,
    n: usize,
    order: usize,
    zdepth: Option<i64>,
    format: Format,
    cache_dir: Option<PathBuf>,
}

fn resolve_job(args: &JobArgs) -> Result<Job, String> {
    let file = match &args.config {
        Some(p) => config::load(p).map_err(|e| format!("config: {e}"))?,
        None => Default::default(),
    };
    let k = args.k.or(file.k).unwrap_or(6);
    let n = args.n.or(file.n).unwrap_or(11);
    let order = args.order.or(file.order).unwrap_or(20);
    if ![6, 8, 10].contains(&k) {
        return Err(format!("invalid target k = {k}"));
    }
    if n < 7 || n.is_multiple_of(2) || !is_prime(n) {
        return Err(format!("N must be an odd prime >= 7, got {n}"));
    }
    if order == 0 {
        return Err("order must be positive".into());
    }
    let format = args.format.or(file.format).unwrap_or(Format::Text);
    let cache_dir = cache::default_cache_dir(args.cache_dir.clone().or(file.cache_dir));
    Ok(Job {
        k,
        n,
        order,
        zdepth: args.zdepth.or(file.zdepth),
        format,
        cache_dir,
    })
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn main() {
    let cli = Cli::parse();
    let job = match resolve_job(&cli.job) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("invalid job spec: {e}");
            std::process::exit(3);
        }
    };
    match run(cli.command, job) {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(2),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn emit(job: &Job, report: &Report, csv: Option<String>) {
    match job.format {
        Format::Json => println!("{}", report::render_json(report)),
        Format::Csv => {
            if let Some(c) = csv {
                print!("{c}");
            } else {
                println!("{}", report::render_json(report));
            }
        }
        Format::Text => print!("{}", report::render_text(report)),
    }
}

fn single(job: &Job, command: &str, outcome: CheckOutcome, csv: Option<String>) -> bool {
    let ok = outcome.status == CheckStatus::Pass;
    let report = Report {
        command: command.into(),
        k: Some(job.k),
        n: Some(job.n),
        order: Some(job.order),
        checks: vec![outcome],
        payload_ref: None,
    };
    emit(job, &report, csv);
    ok
}

fn run(command: Command, job: Job) -> Result<bool> {
    match command {
        Command::Generators => cmd_generators(&job),
        Command::Gw0 { dmax } => cmd_gw0(&job, dmax),
        Command::YukawaVerify => cmd_yukawa(&job),
        Command::Smatrix { specialize } => cmd_smatrix(&job, specialize),
        Command::PfCheck => cmd_pf(&job),
        Command::Rmatrix { level } => cmd_rmatrix(&job, level),
        Command::DeltaCompare => cmd_delta(&job),
        Command::TailConstants => cmd_tail(&job),
        Command::Membership { series, degree } => cmd_membership(&job, &series, degree),
        Command::ZzVerify => cmd_zz(&job),
        Command::VerifyAll => cmd_verify_all(&job),
    }
}

fn cmd_generators(job: &Job) -> Result<bool> {
    let t = target_config(job.k)?;
    let key = cache::CacheKey {
        module: "ifun".into(),
        op: "generators".into(),
        target: job.k,
        n: 0,
        order: job.order,
        zdepth: 0,
    };
    let mut payload: Option<cache::Payload> = None;
    let mut from_cache = false;
    if let Some(dir) = &job.cache_dir {
        match cache::load(dir, &key) {
            Ok(Some(p)) => {
                // spot check: one coefficient recomputed from the
                // factorial-ratio definition before trusting the entry
                let zi = ifun::z_ifunction(&t, 1.min(job.order));
                let expect = rat_to_string(zi.i0.coeff(1.min(job.order)));
                let stored = p
                    .iter()
                    .find(|(n, _)| n == "I0")
                    .and_then(|(_, c)| c.get(1.min(job.order)))
                    .cloned();
                if stored.as_deref() == Some(expect.as_str()) {
                    payload = Some(p);
                    from_cache = true;
                } else {
                    eprintln!("cache spot-check failed; recomputing");
                }
            }
            Ok(None) => {}
            Err(e) => eprintln!("cache ignored: {e}"),
        }
    }
    let payload = match payload {
        Some(p) => p,
        None => {
            let g = ifun::generators(&t, job.order);
            let names: [(&str, &QSeries); 7] = [
                ("A", &g.a[0]),
                ("B", &g.b[0]),
                ("B2", &g.b[1]),
                ("B3", &g.b[2]),
                ("Y", &g.y),
                ("I0", &g.i0),
                ("I11", &g.i11),
            ];
            let p: Vec<_> = names
                .iter()
                .map(|(n, s)| report::series_payload(n, s))
                .collect();
            if let Some(dir) = &job.cache_dir {
                cache::store(dir, &key, p.clone())?;
            }
            p
        }
    };
    match job.format {
        Format::Csv => {
            for (name, coeffs) in &payload {
                println!("# {name}");
                println!("d,value");
                for (d, c) in coeffs.iter().enumerate() {
                    println!("{d},{c}");
                }
            }
        }
        _ => {
            let obj: Vec<serde_json::Value> = payload
                .iter()
                .map(|(n, c)| serde_json::json!({"series": n, "coefficients": c}))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "command": "generators", "k": job.k, "order": job.order,
                    "from_cache": from_cache, "payload": obj
                }))?
            );
        }
    }
    Ok(true)
}

fn cmd_gw0(job: &Job, dmax: usize) -> Result<bool> {
    let t = target_config(job.k)?;
    let rep = gw0::genus0_invariants(&t, dmax)?;
    if let Some((ratio, r)) = acceptance::radius_diagnostic(job.k) {
        eprintln!(
            "note: I0 coefficient growth ratio {} vs r = {} (convergence-radius diagnostic)",
            rat_to_string(&ratio),
            rat_to_string(&r)
        );
    }
    let csv = report::invariants_csv(&rep.invariants);
    let detail: Vec<String> = rep
        .invariants
        .iter()
        .enumerate()
        .map(|(i, v)| format!("N_(0,{}) = {}", i + 1, rat_to_string(v)))
        .chain([format!("denominators observed: {:?}", rep.denominators)])
        .collect();
    let outcome = CheckOutcome {
        check_id: "gw0-invariants".into(),
        title: "genus-zero invariants via the mirror map, dual-route checked".into(),
        status: CheckStatus::Pass,
        order: format!("d <= {dmax}"),
        first_failure: None,
        detail,
    };
    Ok(single(job, "gw0", outcome, Some(csv)))
}

fn cmd_yukawa(job: &Job) -> Result<bool> {
    let t = target_config(job.k)?;
    let rep = gw0::verify_yukawa_identity(&t, job.order);
    let outcome = if rep.pass {
        CheckOutcome {
            check_id: "yukawa-verify".into(),
            title: format!("I0²I11²I22 = 1/(1-rq) for k = {}", job.k),
            status: CheckStatus::Pass,
            order: format!("order {}", rep.order),
            first_failure: None,
            detail: vec![],
        }
    } else {
        CheckOutcome {
            check_id: "yukawa-verify".into(),
            title: format!("I0²I11²I22 = 1/(1-rq) for k = {}", job.k),
            status: CheckStatus::Fail,
            order: format!("order {}", rep.order),
            first_failure: rep.first_failure.map(|d| format!("coefficient q^{d}")),
            detail: vec![],
        }
    };
    Ok(single(job, "yukawa-verify", outcome, None))
}

fn cmd_smatrix(job: &Job, specialize: Option<String>) -> Result<bool> {
    let t = target_config(job.k)?;
    if let Some(spec) = specialize {
        let parts: Vec<usize> = spec
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| anyhow::anyhow!("--specialize expects a,i,alpha: {e}"))?;
        if parts.len() != 3 {
            eprintln!("--specialize expects a,i,alpha");
            std::process::exit(3);
        }
        let (a, i, alpha) = (parts[0] as u64, parts[1], parts[2]);
        if msp0::specialization_degenerate(&t, a) {
            let outcome = CheckOutcome {
                check_id: "smatrix-specialize".into(),
                title: format!("S^{alpha}_({a};{i})"),
                status: CheckStatus::Pass,
                order: "degenerate".into(),
                first_failure: None,
                detail: vec![format!(
                    "a = {a} is degenerate for k = {} (a vanishing denominator factor); reported, not evaluated",
                    job.k
                )],
            };
            return Ok(single(job, "smatrix", outcome, None));
        }
        let res = msp0::specialize_s_alpha(&t, job.n, a, i, alpha)?;
        let entry = &res[i];
        let detail = vec![
            format!("q-degree observed: {:?}", entry.degree),
            format!(
                "coefficients (cyclotomic field, t-polynomial form): {}",
                (0..=entry.series.order())
                    .map(|d| format!(
                        "q^{d}: {:?}",
                        entry
                            .series
                            .coeff(d)
                            .poly
                            .coeffs
                            .iter()
                            .map(rat_to_string)
                            .collect::<Vec<_>>()
                    ))
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
        ];
        let outcome = CheckOutcome {
            check_id: "smatrix-specialize".into(),
            title: format!("S^{alpha}_({a};{i}) at N = {}", job.n),
            status: CheckStatus::Pass,
            order: format!(
                "q-polynomial, bound {}",
                (a as usize).div_ceil(t.k as usize)
            ),
            first_failure: None,
            detail,
        };
        return Ok(single(job, "smatrix", outcome, None));
    }
    let order = job.order.min(6);
    let zdepth = job.zdepth.unwrap_or(ifun::default_zdepth(job.n, order));
    let sm = msp0::solve_sm(&t, job.n, order, zdepth)?;
    let outcome = CheckOutcome {
        check_id: "smatrix".into(),
        title: format!("S-matrix solve at k = {}, N = {}", job.k, job.n),
        status: CheckStatus::Pass,
        order: format!("order {order}, z-window [-{zdepth}, 0]"),
        first_failure: None,
        detail: vec![
            format!(
                "{} columns over the state ring (dim {})",
                sm.columns.len(),
                sm.state.dim
            ),
            "wrap-around connection identity asserted".into(),
        ],
    };
    Ok(single(job, "smatrix", outcome, None))
}

fn cmd_pf(job: &Job) -> Result<bool> {
    let t = target_config(job.k)?;
    let order = job.order.min(4);
    let rep = msp0::pf_check(&t, job.n, order)?;
    let outcome = CheckOutcome {
        check_id: "pf-check".into(),
        title: format!("Picard-Fuchs annihilation, k = {}, N = {}", job.k, job.n),
        status: if rep.pass {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        order: format!("order {order}"),
        first_failure: rep.first_failure.map(|(z, q)| format!("z^{z} q^{q}")),
        detail: vec![],
    };
    Ok(single(job, "pf-check", outcome, None))
}

fn cmd_rmatrix(job: &Job, level: u8) -> Result<bool> {
    let t = target_config(job.k)?;
    match level {
        0 => {
            let order = job.order.min(10);
            let direct = rmat0::level0_r_direct(&t, job.n, order, 12)?;
            direct.check_leading_expansions()?;
            let m_max = 4.min(job.n - 4);
            let entries = rmat0::r_entries_level0(&t, job.n, m_max, order)?;
            let outcome = CheckOutcome {
                check_id: "rmatrix-level0".into(),
                title: format!("level-0 R-matrix, k = {}, N = {}", job.k, job.n),
                status: CheckStatus::Pass,
                order: format!("m <= {m_max}, order {order}"),
                first_failure: None,
                detail: vec![
                    "window expansions R*1 = I0 + O(z^{N-3}), R*p = zD(I0) + I0I11 H + O(z^{N-2}) hold".into(),
                    format!("vanishing pattern j = b + m (mod {}) exact", entries.n),
                ],
            };
            Ok(single(job, "rmatrix", outcome, None))
        }
        1 => {
            let m_max = 6.min(job.n - 1);
            let tower = rmat1::solve_r_tower(&t, job.n, m_max)?;
            let entries = rmat1::r_entries_level1(&t, job.n, job.n + 3, 4.min(m_max))?;
            let detail: Vec<String> = (0..=m_max)
                .map(|m| {
                    format!(
                        "r_{m}: degree {}, r_{m}(1) = {}",
                        tower.r[m].degree().unwrap_or(0),
                        rat_to_string(&tower.at_one(m))
                    )
                })
                .chain([format!(
                    "entry table filled to j = {}",
                    entries.table[0].len() - 1
                )])
                .collect();
            let outcome = CheckOutcome {
                check_id: "rmatrix-level1".into(),
                title: format!(
                    "level-1 scalar tower and entries, k = {}, N = {}",
                    job.k, job.n
                ),
                status: CheckStatus::Pass,
                order: format!("m <= {m_max}"),
                first_failure: None,
                detail,
            };
            Ok(single(job, "rmatrix", outcome, None))
        }
        other => {
            eprintln!("invalid level {other}, expected 0 or 1");
            std::process::exit(3);
        }
    }
}

fn cmd_delta(job: &Job) -> Result<bool> {
    let t = target_config(job.k)?;
    let rep = rmat1::delta_compare(&t, job.n, 4)?;
    let detail = vec![
        format!("readings checked: {:?}", rep.matches),
        format!("verdict: loop weight reads as {:?}", rep.verdict.unwrap()),
        format!(
            "normalized QRR coefficients: {}",
            rep.normalized_delta
                .iter()
                .map(rat_to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ];
    let outcome = CheckOutcome {
        check_id: "delta-compare".into(),
        title: format!("QRR boundary comparison, k = {}, N = {}", job.k, job.n),
        status: CheckStatus::Pass,
        order: "m <= 4".into(),
        first_failure: None,
        detail,
    };
    Ok(single(job, "delta-compare", outcome, None))
}

fn cmd_tail(job: &Job) -> Result<bool> {
    let t = target_config(job.k)?;
    let rep = rmat1::tail_constants(&t, job.n)?;
    let outcome = CheckOutcome {
        check_id: "tail-constants".into(),
        title: format!("tail and PF2 constants, k = {}", job.k),
        status: CheckStatus::Pass,
        order: "exact".into(),
        first_failure: None,
        detail: vec![
            format!("C = {}", rat_to_string(&rep.c_tail)),
            format!("PF2 constant = {}", rat_to_string(&rep.c_pf2)),
        ],
    };
    Ok(single(job, "tail-constants", outcome, None))
}

fn cmd_membership(job: &Job, series: &str, degree: u32) -> Result<bool> {
    let t = target_config(job.k)?;
    let order = job.order.max(membership::monomials(degree).len() + 8);
    let g = ifun::generators_with_tower(&t, order, 6);
    let s = match series {
        "DA" => g.a[0].d(),
        "DB" => g.b[0].d(),
        "DB2" => g.b[1].d(),
        "DB3" => g.b[2].d(),
        "A2" => g.a[1].clone(),
        "B4" => g.b[3].clone(),
        "Y" => g.y.clone(),
        "yukawa-normalized" => g.i0.pow(2).mul(&g.i11.pow(2)).mul(&g.i22),
        other => {
            eprintln!(
                "unknown series {other}; expected DA, DB, DB2, DB3, A2, B4, Y or yukawa-normalized"
            );
            std::process::exit(3);
        }
    };
    let mut cert = membership::find_polynomial(&s, &g, degree, 8)?;
    cert.target_k = t.k;
    println!("{}", cert.to_json());
    eprintln!("certificate: {} = {}", series, cert.render());
    Ok(cert.status == membership::CertStatus::Certified)
}

fn cmd_zz(job: &Job) -> Result<bool> {
    let t = target_config(job.k)?;
    let order = job.order.min(25);
    let rep = zz::verify_zz(&t, order)?;
    let pass = rep.product_identity && rep.symmetry_identity;
    let outcome = CheckOutcome {
        check_id: "zz-verify".into(),
        title: format!("tower identities for k = {}", job.k),
        status: if pass {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        order: format!("order {order}"),
        first_failure: rep
            .first_product_failure
            .map(|d| format!("product at x^{d}"))
            .or(rep
                .first_symmetry_failure
                .map(|(p, d)| format!("symmetry I_{p} at x^{d}"))),
        detail: vec![],
    };
    Ok(single(job, "zz-verify", outcome, None))
}

fn cmd_verify_all(job: &Job) -> Result<bool> {
    let outcomes = acceptance::run_all();
    let pass = outcomes.iter().all(|o| o.status == CheckStatus::Pass);
    let report = Report {
        command: "verify-all".into(),
        k: None,
        n: None,
        order: None,
        checks: outcomes,
        payload_ref: None,
    };
    emit(job, &report, None);
    Ok(pass)
}
