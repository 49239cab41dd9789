use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use isobound::asymmetric::{certify_asymmetric, CertifyConfig, FEASIBILITY_TOL};
use isobound::baseline::BaselineResult;
use isobound::symmetric::{nu_star as compute_nu_star, truncate4, DEFAULT_NU_TOL};
use isobound::{BaselineF64, CertificateF64};
use serde::{Deserialize, Serialize};

use crate::{CertifyArgs, Status};

/// Output of `certify --json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub delta: usize,
    pub nu_star: f64,
    pub baseline: BaselineF64,
    pub certificate: CertificateF64,
    pub tolerances: BTreeMap<String, f64>,
    pub runtime_ms: u64,
    pub tool_version: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NuStarReport {
    pub delta: usize,
    pub nu_star: f64,
    pub nu_star_truncated: f64,
    pub bracket_width: f64,
    pub residual: f64,
    pub root_bound_verified: bool,
}

pub fn nu_star(delta: usize, tol: f64, json: bool) -> Result<Status> {
    let r = compute_nu_star(delta, tol)?;
    if json {
        let out = NuStarReport {
            delta,
            nu_star: r.nu,
            nu_star_truncated: truncate4(r.nu),
            bracket_width: r.bracket_width,
            residual: r.residual,
            root_bound_verified: r.root_bound_verified,
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{:.4}", truncate4(r.nu));
    }
    if !r.root_bound_verified {
        eprintln!("warning: the root bound behind nu* is only proven for delta in {{4, 6, 8}}");
    }
    Ok(Status::Success)
}

pub fn baseline(delta: usize, json: bool) -> Result<Status> {
    let r: BaselineResult<f64> = isobound::baseline::baseline(delta)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&r)?);
    } else {
        println!("{:.4}", truncate4(r.nu_lower));
    }
    Ok(Status::Success)
}

pub fn certify(args: &CertifyArgs) -> Result<Status> {
    let start = Instant::now();
    if args.margin.is_nan() || args.margin < 0.0 {
        bail!("--margin must be nonnegative");
    }
    let nu_star = compute_nu_star(args.delta, DEFAULT_NU_TOL)?.nu;
    let baseline = isobound::baseline::baseline::<f64>(args.delta)?;
    let config = CertifyConfig {
        delta: args.delta,
        nu: args.nu.unwrap_or(nu_star - args.margin),
        nu_lower: args.nu_lower.unwrap_or(baseline.nu_lower),
        alpha_floor: args.alpha_floor,
        grid_m: args.grid,
        method: args.method,
    };
    let certificate = certify_asymmetric(&config)?;
    let negative = certificate.negative;
    let report = BoundReport {
        delta: args.delta,
        nu_star,
        baseline,
        tolerances: BTreeMap::from([
            ("nu_bisection".to_string(), DEFAULT_NU_TOL),
            ("feasibility".to_string(), FEASIBILITY_TOL),
        ]),
        certificate,
        runtime_ms: start.elapsed().as_millis() as u64,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: None,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_certificate(&report);
    }
    Ok(if negative {
        Status::Success
    } else {
        Status::Failed
    })
}

fn print_certificate(r: &BoundReport) {
    let c = &r.certificate;
    println!(
        "delta {}  nu {:.6}  (nu* {:.6}, baseline {:.6})",
        r.delta, c.nu, r.nu_star, r.baseline.nu_lower
    );
    println!(
        "grid {0}x{0}  method {1}  cells {2}",
        c.grid_m, c.method, c.cells
    );
    println!("f* <= {:.6}", c.f_star_upper);
    if let Some(w) = &c.worst_cell {
        println!(
            "worst cell  alpha [{:.5}, {:.5}]  gamma [{:.5}, {:.5}]",
            w.alpha_lo, w.alpha_hi, w.gamma_lo, w.gamma_hi
        );
    }
    if let Some(msg) = &c.first_failure {
        println!("{} cells failed, first: {msg}", c.failed_cells);
    }
    println!(
        "{}",
        if c.negative {
            "certified"
        } else {
            "NOT certified"
        }
    );
}

/// Literature values quoted from published tables; never computed here.
const QUOTED: [(usize, f64, f64); 3] = [
    (4, 0.4403, 0.4452),
    (6, 1.0438, 1.0584),
    (8, 1.7161, 1.7297),
];

#[derive(Debug)]
struct TableRow {
    pub delta: usize,
    pub bollobas: f64,
    pub amit_linial: Option<f64>,
    pub daneshgar: Option<f64>,
    pub ours: f64,
}

fn table_deltas() -> Result<Vec<usize>> {
    match std::env::var("ISOBOUND_TABLE_DELTAS") {
        Ok(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .with_context(|| format!("bad degree {s:?} in ISOBOUND_TABLE_DELTAS"))
            })
            .collect(),
        Err(_) => Ok(vec![4, 6, 8]),
    }
}

pub fn table(csv: bool) -> Result<Status> {
    let mut rows = Vec::new();
    for delta in table_deltas()? {
        let quoted = QUOTED.iter().find(|q| q.0 == delta);
        rows.push(TableRow {
            delta,
            bollobas: truncate4(isobound::baseline::bollobas_bound(delta)?),
            amit_linial: quoted.map(|q| q.1),
            daneshgar: quoted.map(|q| q.2),
            ours: truncate4(compute_nu_star(delta, DEFAULT_NU_TOL)?.nu),
        });
    }
    if csv {
        let fixed = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v:.4}"));
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(["delta", "bollobas", "amit_linial", "daneshgar", "ours"])?;
        for r in &rows {
            w.write_record([
                r.delta.to_string(),
                fixed(Some(r.bollobas)),
                fixed(r.amit_linial),
                fixed(r.daneshgar),
                fixed(Some(r.ours)),
            ])?;
        }
        w.flush()?;
        return Ok(Status::Success);
    }
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:>5}  {:>9}  {:>12}  {:>10}  {:>7}",
        "delta", "bollobas", "amit_linial*", "daneshgar*", "ours"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:>5}  {:>9.4}  {:>12}  {:>10}  {:>7.4}",
            r.delta,
            r.bollobas,
            cell(r.amit_linial),
            cell(r.daneshgar),
            r.ours
        )?;
    }
    writeln!(out, "* quoted from the literature, not computed")?;
    Ok(Status::Success)
}
