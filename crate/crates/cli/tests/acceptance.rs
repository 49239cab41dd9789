//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness
//! so the lines are always printed; exits nonzero if a gating criterion fails.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use isobound::pairing::{exact_expansion, sample_pairing};

const BIN: &str = env!("CARGO_BIN_EXE_isobound");

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn isobound");
    (out, start.elapsed())
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, pass: bool, detail: String) {
        println!(
            "{} criterion {id}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failed.push(id);
        }
    }
}

fn nu_star_regression(r: &mut Report) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (delta, want) in [("4", "0.4894"), ("6", "1.1205"), ("8", "1.8130")] {
        let (out, t) = run(&["nu-star", "--delta", delta]);
        let got = stdout(&out);
        ok &= out.status.success() && got == want && t < Duration::from_secs(1);
        notes.push(format!("delta {delta} -> {got} in {t:.0?}"));
    }
    r.record(1, ok, format!("nu* regression ({})", notes.join(", ")));
}

fn baseline_regression(r: &mut Report) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (delta, want) in [("4", "0.4401"), ("6", "1.0437"), ("8", "1.7160")] {
        let (out, t) = run(&["baseline", "--delta", delta]);
        let got = stdout(&out);
        ok &= out.status.success() && got == want && t < Duration::from_millis(100);
        notes.push(format!("delta {delta} -> {got} in {t:.0?}"));
    }
    r.record(2, ok, format!("baseline regression ({})", notes.join(", ")));
}

fn certification(r: &mut Report) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (delta, claim) in [("4", -0.009), ("6", -0.004), ("8", -0.001)] {
        for method in ["corner", "tangent"] {
            let (out, t) = run(&[
                "certify", "--delta", delta, "--grid", "200", "--method", method, "--json",
            ]);
            let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
            let f = report["certificate"]["f_star_upper"]
                .as_f64()
                .unwrap_or(f64::INFINITY);
            let within = match method {
                "corner" => f <= claim + 2e-3,
                _ => f < 0.0,
            };
            ok &= out.status.success() && within && t < Duration::from_secs(60);
            notes.push(format!("delta {delta} {method} f* <= {f:.5} in {t:.1?}"));
        }
    }
    r.record(
        3,
        ok,
        format!("asymmetric certificate M=200 ({})", notes.join(", ")),
    );
}

fn suite(r: &mut Report, id: u32, name: &str, extra: &[&str], limit: Duration) {
    let mut args = vec!["verify", "--suite", name];
    args.extend_from_slice(extra);
    let (out, t) = run(&args);
    let text = stdout(&out);
    let summary = text.lines().last().unwrap_or("").to_string();
    let pass = out.status.success() && t < limit;
    if !pass {
        for line in text.lines().filter(|l| l.starts_with("FAIL")) {
            println!("    {line}");
        }
    }
    r.record(
        id,
        pass,
        format!("verify --suite {name}: {summary} (wall {t:.1?}, limit {limit:?})"),
    );
}

/// Non-gating: at n = 20 the asymptotic statement is only indicative.
fn small_graph_log() {
    let samples = 50;
    let above = (0..samples)
        .filter(|&seed| {
            let g = sample_pairing(20, 4, seed).unwrap();
            exact_expansion(&g).unwrap().0 > 0.4894
        })
        .count();
    let label = if 2 * above > samples as usize {
        "PASS"
    } else {
        "INFO"
    };
    println!(
        "{label} criterion 9 (non-gating): exact iota > 0.4894 in {above}/{samples} samples at n=20, delta=4"
    );
}

fn main() {
    let mut r = Report { failed: Vec::new() };
    nu_star_regression(&mut r);
    baseline_regression(&mut r);
    certification(&mut r);
    suite(
        &mut r,
        4,
        "entropy",
        &["--seed", "0"],
        Duration::from_secs(120),
    );
    suite(&mut r, 5, "rootbound", &[], Duration::from_secs(120));
    suite(
        &mut r,
        6,
        "counting",
        &["--trials", "200000", "--seed", "3"],
        Duration::from_secs(30),
    );
    suite(&mut r, 7, "ordering", &[], Duration::from_secs(120));
    suite(
        &mut r,
        8,
        "dominance",
        &["--seed", "0"],
        Duration::from_secs(300),
    );
    small_graph_log();
    if r.failed.is_empty() {
        println!("acceptance: all gating criteria passed");
    } else {
        println!("acceptance: failed criteria {:?}", r.failed);
        std::process::exit(1);
    }
}
