use std::collections::HashMap;
use std::time::Instant;

use anyhow::Result;
use isobound::asymmetric::{
    cell_upper_bound, certify_asymmetric, f_value, sample_feasible, CertifyConfig, ExponentPoint,
    Method,
};
use isobound::baseline::{baseline, SMALL_SET_ALPHA};
use isobound::binomial;
use isobound::entropy::oracle::brute_force_phi_star;
use isobound::entropy::{phi_star, phi_star_derivative_c, EntropyProblem};
use isobound::pairing::{
    configuration_probability, configuration_vector, enumerate_configuration_vectors, mask_from,
    ordering_count_brute_force, ordering_probability, sample_pairing_with, ConfigurationVector,
};
use isobound::symmetric::{
    check_q_positive, h_value, nu_star, q_polynomial, verify_root_bound, DEFAULT_NU_TOL,
    VERIFIED_DEGREES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Status, Suite};

/// Counts failures and prints one line per check.
#[derive(Default)]
struct Log {
    failures: usize,
}

impl Log {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            println!("ok    {name}");
        } else {
            self.failures += 1;
            println!("FAIL  {name}: {}", detail());
        }
    }
}

pub fn run(suite: Suite, trials: Option<usize>, seed: u64) -> Result<Status> {
    let start = Instant::now();
    let mut log = Log::default();
    match suite {
        Suite::Entropy => entropy(&mut log, trials.unwrap_or(100), seed)?,
        Suite::Rootbound => rootbound(&mut log)?,
        Suite::Counting => counting(&mut log, trials.unwrap_or(200_000), seed)?,
        Suite::Ordering => ordering(&mut log),
        Suite::Dominance => dominance(&mut log, trials.unwrap_or(1000), seed)?,
    }
    println!("{} failures in {:.2?}", log.failures, start.elapsed());
    Ok(if log.failures == 0 {
        Status::Success
    } else {
        Status::Failed
    })
}

fn entropy(log: &mut Log, trials: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_gap = 0f64;
    let mut worst_derivative = 0f64;
    for _ in 0..trials {
        let t = rng.random_range(1..=3usize);
        let weights: Vec<f64> = (0..=t).map(|_| rng.random_range(0.2..5.0)).collect();
        let mass = rng.random_range(0.2..2.0);
        let moment = mass * t as f64 * rng.random_range(0.05..0.95);
        let p = EntropyProblem::new(weights, mass, moment)?;
        let exact = phi_star(&p)?;
        let grid = brute_force_phi_star(&p, 1e-4)?;
        let gap = exact - grid;
        worst_gap = worst_gap.max(gap.abs());
        log.check(
            "closed form vs grid oracle",
            gap.abs() <= 5e-3 && grid <= exact + 1e-9,
            || format!("{p:?}: closed form {exact}, grid {grid}"),
        );

        let h = 1e-5 * p.max_moment();
        let at = |c: f64| {
            phi_star(&EntropyProblem {
                moment: c,
                ..p.clone()
            })
        };
        let fd = (at(moment + h)? - at(moment - h)?) / (2.0 * h);
        let d = phi_star_derivative_c(&p)?;
        worst_derivative = worst_derivative.max((fd - d).abs());
        log.check(
            "derivative vs central difference",
            (fd - d).abs() <= 1e-5,
            || format!("{p:?}: -ln z* = {d}, difference quotient {fd}"),
        );
    }
    println!("max |closed form - oracle| = {worst_gap:.3e}, max derivative error = {worst_derivative:.3e}");
    Ok(())
}

fn rootbound(log: &mut Log) -> Result<()> {
    let expected: [(usize, &[i64]); 3] = [
        (4, &[0, 2, 1, -6, -3]),
        (6, &[0, 3, 12, 0, -30, -15]),
        (8, &[0, 4, 24, 56, -14, -140, -70]),
    ];
    for (delta, coeffs) in expected {
        let q = q_polynomial(delta)?;
        log.check(
            &format!("delta {delta}: Q coefficients"),
            q.coeffs() == coeffs,
            || format!("{:?} != {coeffs:?}", q.coeffs()),
        );
        let pos = check_q_positive(delta)?;
        log.check(
            &format!(
                "delta {delta}: Q > 0 on {} samples and by decomposition",
                pos.samples
            ),
            pos.holds(),
            || format!("{pos:?}"),
        );
        let top = delta as f64 / 8.0;
        let mut violations = Vec::new();
        for k in 1..=1000 {
            let gamma = top * k as f64 / 1001.0;
            let w = verify_root_bound(delta, gamma)?;
            if !w.holds {
                violations.push(gamma);
            }
        }
        log.check(
            &format!("delta {delta}: z* < z0 on 1000 grid points"),
            violations.is_empty(),
            || format!("violated at gamma = {violations:?}"),
        );
    }
    Ok(())
}

fn counting(log: &mut Log, trials: usize, seed: u64) -> Result<()> {
    for (n, delta) in [(2, 2), (4, 2), (4, 4), (6, 4)] {
        for k in 1..n {
            let total: f64 = enumerate_configuration_vectors(n, delta, k)
                .iter()
                .map(|cv| configuration_probability(n, delta, cv))
                .sum();
            log.check(
                &format!("n {n} delta {delta} k {k}: probabilities sum to 1"),
                (total - 1.0).abs() <= 1e-9,
                || format!("sum = {total}"),
            );
        }
    }

    let two = |s: Vec<usize>| ConfigurationVector {
        k: 1,
        c: 2 * s[2],
        s: s.clone(),
        s_bar: s,
    };
    let p0 = configuration_probability(2, 2, &two(vec![1, 0, 0]));
    let p2 = configuration_probability(2, 2, &two(vec![0, 0, 1]));
    log.check(
        "n 2 delta 2: P(cut 0) = 1/3",
        (p0 - 1.0 / 3.0).abs() <= 1e-15,
        || format!("{p0}"),
    );
    log.check(
        "n 2 delta 2: P(cut 2) = 2/3",
        (p2 - 2.0 / 3.0).abs() <= 1e-15,
        || format!("{p2}"),
    );

    let (n, delta) = (6, 4);
    let subset = mask_from(n, &[0, 1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: HashMap<ConfigurationVector, usize> = HashMap::new();
    for _ in 0..trials {
        let g = sample_pairing_with(n, delta, &mut rng, None)?;
        *counts.entry(configuration_vector(&g, &subset)).or_default() += 1;
    }
    let t = trials as f64;
    let within =
        |observed: f64, p: f64| (observed - p * t).abs() <= 4.0 * (t * p * (1.0 - p)).sqrt();
    let (mut rare_p, mut rare_observed, mut profiles) = (0.0, 0.0, 0);
    let mut seen = 0;
    for cv in enumerate_configuration_vectors(n, delta, 3) {
        let p = configuration_probability(n, delta, &cv);
        let observed = counts.get(&cv).copied().unwrap_or(0);
        seen += observed;
        if p == 0.0 {
            log.check(
                &format!(
                    "impossible profile {:?}/{:?} never observed",
                    cv.s, cv.s_bar
                ),
                observed == 0,
                || format!("observed {observed} times"),
            );
        } else if p * t >= 5.0 {
            profiles += 1;
            log.check(
                &format!("profile {:?}/{:?} within 4 sigma", cv.s, cv.s_bar),
                within(observed as f64, p),
                || format!("observed {observed}, expected {:.1}", p * t),
            );
        } else {
            rare_p += p;
            rare_observed += observed as f64;
        }
    }
    log.check(
        "every sampled profile is enumerated",
        seen == trials,
        || format!("{seen} of {trials}"),
    );
    log.check(
        &format!("pooled rare profiles within 4 sigma ({profiles} profiles tested alone)"),
        within(rare_observed, rare_p),
        || format!("observed {rare_observed}, expected {:.1}", rare_p * t),
    );
    Ok(())
}

fn ordering(log: &mut Log) {
    for total in 0..=8 {
        for p in 0..=total {
            let q = total - p;
            let (fav, all) = ordering_count_brute_force(p, q);
            let exact = fav * binomial(total, q) == all;
            let prob = ordering_probability(p, q);
            log.check(
                &format!("p {p} q {q}: {fav}/{all} = 1/C({total}, {q})"),
                exact && prob == fav as f64 / all as f64,
                || format!("closed form {prob}"),
            );
        }
    }
}

fn dominance(log: &mut Log, trials: usize, seed: u64) -> Result<()> {
    for delta in VERIFIED_DEGREES {
        let nu = nu_star(delta, DEFAULT_NU_TOL)?.nu;
        let nu_lower = baseline::<f64>(delta)?.nu_lower;
        let mut config = CertifyConfig {
            delta,
            nu,
            nu_lower,
            alpha_floor: SMALL_SET_ALPHA,
            grid_m: 200,
            method: Method::Corner,
        };

        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ delta as u64);
        let mut worst = f64::NEG_INFINITY;
        let mut checked = 0;
        let mut bad = None;
        while checked < trials {
            let alpha = rng.random_range(SMALL_SET_ALPHA..0.5);
            let gamma = alpha * rng.random_range(nu_lower..nu);
            let Some(cell) = config.covering_cell(alpha, gamma) else {
                continue;
            };
            let s = rng.random();
            let point = ExponentPoint {
                alpha,
                gamma,
                x: sample_feasible(delta, alpha, gamma, s)?,
                x_bar: sample_feasible(delta, 1.0 - alpha, gamma, s ^ 1)?,
            };
            let f = f_value(&point, delta)?;
            for method in [Method::Corner, Method::Tangent] {
                let bound = cell_upper_bound(delta, cell, method)?.total;
                worst = worst.max(f - bound);
                if f > bound + 1e-9 && bad.is_none() {
                    bad = Some(format!(
                        "{method} at alpha {alpha} gamma {gamma}: f {f} > {bound}"
                    ));
                }
            }
            checked += 1;
        }
        log.check(
            &format!(
                "delta {delta}: f <= cell bound on {trials} tuples (max f - bound = {worst:.3e})"
            ),
            bad.is_none(),
            || bad.clone().unwrap_or_default(),
        );

        let (lo, hi) = (1e-4, delta as f64 / 8.0);
        let mut prev = f64::NEG_INFINITY;
        let mut increasing = true;
        for k in 0..1000 {
            let h = h_value(delta, lo + (hi - lo) * k as f64 / 1000.0)?;
            increasing &= h > prev;
            prev = h;
        }
        log.check(
            &format!("delta {delta}: H strictly increasing on 1000 points"),
            increasing,
            String::new,
        );

        let coarse = certify_asymmetric(&config)?.f_star_upper;
        config.grid_m = 400;
        let fine = certify_asymmetric(&config)?.f_star_upper;
        log.check(
            &format!("delta {delta}: M=400 bound {fine:.6} <= M=200 bound {coarse:.6}"),
            fine <= coarse + 1e-12,
            String::new,
        );
    }
    Ok(())
}
