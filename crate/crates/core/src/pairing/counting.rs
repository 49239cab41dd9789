use itertools::Itertools;

use super::cut::ConfigurationVector;
use crate::binomial;

/// `ln m!` for `m <= max`, accumulated term by term.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    table: Vec<f64>,
}

impl LogFactorials {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        for m in 1..=max {
            table.push(table[m - 1] + (m as f64).ln());
        }
        Self { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    /// Panics past the table size.
    pub fn ln_factorial(&self, m: usize) -> f64 {
        self.table[m]
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }

    /// Log of the number of perfect matchings of `m` points, `(m-1)!!`;
    /// `None` for odd `m`.
    pub fn ln_matchings(&self, m: usize) -> Option<f64> {
        if m % 2 == 1 {
            return None;
        }
        Some(self.table[m] - (m / 2) as f64 * std::f64::consts::LN_2 - self.table[m / 2])
    }
}

/// Probability that a fixed `S` with `|S| = k` has configuration vector `cv` in
/// the pairing model. The three pairings (inside `S`, inside `S_bar`, and the cut)
/// are counted as perfect matchings.
pub fn configuration_probability(n: usize, delta: usize, cv: &ConfigurationVector) -> f64 {
    if !cv.is_consistent() || cv.delta() != delta || cv.n() != n {
        return 0.0;
    }
    let (k, c) = (cv.k, cv.c);
    let inside = delta * k;
    let outside = delta * (n - k);
    if c > inside || c > outside {
        return 0.0;
    }
    let lf = LogFactorials::new(delta * n);
    let (Some(m_in), Some(m_out), Some(m_all)) = (
        lf.ln_matchings(inside - c),
        lf.ln_matchings(outside - c),
        lf.ln_matchings(delta * n),
    ) else {
        return 0.0;
    };
    let side = |hist: &[usize], size: usize| {
        lf.ln_factorial(size)
            + hist
                .iter()
                .enumerate()
                .map(|(i, &s)| s as f64 * lf.ln_binomial(delta, i) - lf.ln_factorial(s))
                .sum::<f64>()
    };
    let ln_p = side(&cv.s, k) + side(&cv.s_bar, n - k) + lf.ln_factorial(c) + m_in + m_out - m_all;
    ln_p.exp()
}

/// All vectors `(s, s_bar)` with `sum s = k`, `sum s_bar = n - k` and equal cut
/// moments, including parity-infeasible ones.
pub fn enumerate_configuration_vectors(
    n: usize,
    delta: usize,
    k: usize,
) -> Vec<ConfigurationVector> {
    let left = histograms(k, delta + 1);
    let right = histograms(n.saturating_sub(k), delta + 1);
    let moment = |v: &[usize]| v.iter().enumerate().map(|(i, x)| i * x).sum::<usize>();
    let mut out = Vec::new();
    for s in &left {
        let c = moment(s);
        for s_bar in right.iter().filter(|r| moment(r) == c) {
            out.push(ConfigurationVector {
                k,
                c,
                s: s.clone(),
                s_bar: s_bar.clone(),
            });
        }
    }
    out
}

/// Weak compositions of `total` into `bins` parts.
fn histograms(total: usize, bins: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, bins: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == bins {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rest {
            cur.push(x);
            rec(rest - x, bins, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, bins, &mut Vec::with_capacity(bins), &mut out);
    out
}

/// Probability that, in a uniformly random order of `p + q` items, all `p`
/// marked items precede the `q` others: `1 / C(p+q, q)`.
/// Exact (one rounding) while `C(p+q, q)` fits in a `u64`.
pub fn ordering_probability(p: usize, q: usize) -> f64 {
    if p + q <= 60 {
        return 1.0 / binomial(p + q, q) as f64;
    }
    let lf = LogFactorials::new(p + q);
    (-lf.ln_binomial(p + q, q)).exp()
}

/// `(favourable, total)` over all permutations of `p + q` items.
pub fn ordering_count_brute_force(p: usize, q: usize) -> (u64, u64) {
    let mut favourable = 0;
    let mut total = 0;
    for perm in (0..p + q).permutations(p + q) {
        total += 1;
        // Items `0..p` are the marked ones; they must fill the first `p` positions.
        if perm[..p].iter().all(|&x| x < p) {
            favourable += 1;
        }
    }
    (favourable, total)
}

/// `min(1, n^(2 delta) / C(s_h + s_bar_h, s_h))` with `h = delta/2`.
pub fn lex_bound(n: usize, delta: usize, cv: &ConfigurationVector) -> f64 {
    let h = delta / 2;
    let (s, s_bar) = (cv.s[h], cv.s_bar[h]);
    if s <= delta {
        return 1.0;
    }
    let lf = LogFactorials::new(s + s_bar);
    let ln = 2.0 * delta as f64 * (n as f64).ln() - lf.ln_binomial(s + s_bar, s);
    ln.min(0.0).exp()
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use approx::assert_relative_eq;

    use super::*;
    use crate::pairing::{configuration_vector, mask_from, sample_pairing};

    fn cv(k: usize, s: Vec<usize>, s_bar: Vec<usize>) -> ConfigurationVector {
        let c = s.iter().enumerate().map(|(i, x)| i * x).sum();
        ConfigurationVector { k, c, s, s_bar }
    }

    #[test]
    fn log_factorials() {
        let lf = LogFactorials::new(20);
        assert_relative_eq!(lf.ln_factorial(10), 3_628_800f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(
            lf.ln_matchings(6).unwrap(),
            15f64.ln(),
            max_relative = 1e-14
        );
        assert_eq!(lf.ln_matchings(0), Some(0.0));
        assert_eq!(lf.ln_matchings(5), None);
        assert_relative_eq!(
            lf.ln_binomial(20, 7),
            (binomial(20, 7) as f64).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn two_vertex_cycle_probabilities() {
        assert_relative_eq!(
            configuration_probability(2, 2, &cv(1, vec![1, 0, 0], vec![1, 0, 0])),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            configuration_probability(2, 2, &cv(1, vec![0, 0, 1], vec![0, 0, 1])),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        // Odd cut from a side of degree 2 is impossible.
        assert_eq!(
            configuration_probability(2, 2, &cv(1, vec![0, 1, 0], vec![0, 1, 0])),
            0.0
        );
        // Inconsistent moment.
        let bad = ConfigurationVector {
            k: 1,
            c: 1,
            s: vec![1, 0, 0],
            s_bar: vec![1, 0, 0],
        };
        assert_eq!(configuration_probability(2, 2, &bad), 0.0);
    }

    #[test]
    fn total_probability_is_one() {
        for (n, delta) in [(2, 2), (4, 2), (4, 4), (6, 4)] {
            for k in 1..n {
                let total: f64 = enumerate_configuration_vectors(n, delta, k)
                    .iter()
                    .map(|v| configuration_probability(n, delta, v))
                    .sum();
                assert!(
                    (total - 1.0).abs() <= 1e-9,
                    "n={n} delta={delta} k={k}: {total}"
                );
            }
        }
    }

    #[test]
    fn monte_carlo_agrees() {
        let (n, delta, trials) = (6, 4, 20_000);
        let subset = mask_from(n, &[0, 1, 2]);
        let mut counts: HashMap<ConfigurationVector, u64> = HashMap::new();
        for seed in 0..trials {
            let g = sample_pairing(n, delta, seed).unwrap();
            *counts.entry(configuration_vector(&g, &subset)).or_default() += 1;
        }
        for v in enumerate_configuration_vectors(n, delta, 3) {
            let p = configuration_probability(n, delta, &v);
            let observed = *counts.get(&v).unwrap_or(&0) as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (observed - p).abs() <= 4.0 * sigma + 1e-12,
                "{v:?}: {observed} vs {p}"
            );
        }
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(ordering_probability(0, 5), 1.0);
        assert_eq!(ordering_probability(1, 1), 0.5);
        assert_eq!(ordering_probability(2, 2), 1.0 / 6.0);
        assert_relative_eq!(
            ordering_probability(70, 10),
            1.0 / binomial(80, 10) as f64,
            max_relative = 1e-12
        );
        assert_eq!(ordering_count_brute_force(2, 2), (4, 24));
        for total in 0..=6 {
            for p in 0..=total {
                let (fav, all) = ordering_count_brute_force(p, total - p);
                assert_eq!(all / fav, binomial(total, p));
                assert_eq!(all % fav, 0);
            }
        }
    }

    #[test]
    fn lex_examples() {
        let mut s = vec![0; 5];
        let mut s_bar = vec![0; 5];
        assert_eq!(lex_bound(1000, 4, &cv(0, s.clone(), s_bar.clone())), 1.0);
        s[2] = 4;
        s_bar[2] = 50;
        assert_eq!(lex_bound(1000, 4, &cv(4, s.clone(), s_bar.clone())), 1.0);
        s[2] = 100;
        s_bar[2] = 100;
        let got = lex_bound(1000, 4, &cv(100, s, s_bar));
        let lf = LogFactorials::new(200);
        let expected = (24.0 * 10f64.ln() - lf.ln_binomial(200, 100)).exp();
        assert!(got < 1e-30);
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }
}
