//! Grid certificate that the unbalanced-cut exponent is negative.
//!
//! For `alpha` in `(alpha_floor, 1/2)` and `gamma` in `[alpha nu_lower, alpha nu]`
//! the exponent is bounded by
//!
//! ```text
//! G(alpha, gamma) + Phi*(alpha, gamma, b) + Phi*(1 - alpha, gamma, b_bar)
//! ```
//!
//! with `b_i = C(delta, i)` on `{0..delta/2}` and `b_bar_i = C(delta, i)` on
//! `{0..delta/2 - 1}`. `G` decreases in both arguments while
//! `gamma < delta alpha / 4`, so on a cell it is bounded by its lower corner. The
//! two `Phi*` terms are bounded either by their largest corner value
//! ([`Method::Corner`]) or by the tangent plane at the cell centre
//! ([`Method::Tangent`]), which is sound because `Phi*` is jointly concave in
//! `(a, c)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{solve_entropy, EntropyProblem};
use crate::symmetric::check_even_degree;
use crate::{binomial, Error, Result, Scalar};

/// Default number of subintervals per axis.
pub const DEFAULT_GRID_M: usize = 200;

/// Tolerance for the feasibility checks in [`f_value`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A point `(alpha, gamma, x, x_bar)` of the exponent's domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint<S> {
    pub alpha: S,
    pub gamma: S,
    /// Normalised cross-degree profile of the smaller side, indexed `0..=delta/2`.
    pub x: Vec<S>,
    /// Profile of the larger side, indexed `0..=delta/2`.
    pub x_bar: Vec<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Corner,
    Tangent,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Corner => "corner",
            Method::Tangent => "tangent",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corner" => Ok(Method::Corner),
            "tangent" => Ok(Method::Tangent),
            other => Err(Error::OutOfDomain(format!("unknown method {other:?}"))),
        }
    }
}

/// Axis-aligned cell `[alpha_lo, alpha_hi] x [gamma_lo, gamma_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell<S> {
    pub alpha_lo: S,
    pub alpha_hi: S,
    pub gamma_lo: S,
    pub gamma_hi: S,
}

impl<S: Scalar> Cell<S> {
    pub fn contains(&self, alpha: S, gamma: S) -> bool {
        alpha >= self.alpha_lo
            && alpha <= self.alpha_hi
            && gamma >= self.gamma_lo
            && gamma <= self.gamma_hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellBound<S> {
    pub alpha_lo: S,
    pub alpha_hi: S,
    pub gamma_lo: S,
    pub gamma_hi: S,
    pub g_bound: S,
    pub phi_bound: S,
    pub phi_bar_bound: S,
    pub total: S,
    pub method: Method,
}

impl<S: Scalar> CellBound<S> {
    pub fn cell(&self) -> Cell<S> {
        Cell {
            alpha_lo: self.alpha_lo,
            alpha_hi: self.alpha_hi,
            gamma_lo: self.gamma_lo,
            gamma_hi: self.gamma_hi,
        }
    }
}

/// Inputs of [`certify_asymmetric`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig<S> {
    pub delta: usize,
    /// Target bound `nu`.
    pub nu: S,
    /// Baseline `nu_lower` (lower end of the `gamma / alpha` range).
    pub nu_lower: S,
    pub alpha_floor: S,
    pub grid_m: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate<S> {
    pub delta: usize,
    pub nu: S,
    pub nu_lower: S,
    pub alpha_floor: S,
    pub grid_m: usize,
    /// Maximum cell total over all cells that evaluated successfully.
    pub f_star_upper: S,
    /// `f_star_upper < 0` and no cell failed.
    pub negative: bool,
    pub worst_cell: Option<CellBound<S>>,
    pub method: Method,
    pub cells: usize,
    pub failed_cells: usize,
    /// First failure message, if any cell failed.
    pub first_failure: Option<String>,
}

fn half_degree<S: Scalar>(delta: usize) -> S {
    S::from_index(delta) / S::lit(2.0)
}

/// Weights `C(delta, i)` for `i` in `0..=top`.
pub fn binomial_weights<S: Scalar>(delta: usize, top: usize) -> Vec<S> {
    (0..=top)
        .map(|i| S::lit(binomial(delta, i) as f64))
        .collect()
}

fn g_unchecked<S: Scalar>(delta: usize, alpha: S, gamma: S) -> S {
    let d = S::from_index(delta);
    let two = S::lit(2.0);
    let small = alpha * d - gamma;
    let large = d * (S::one() - alpha) - gamma;
    -half_degree::<S>(delta) * d.ln() + gamma.xlnx() + small.xlnx() / two + large.xlnx() / two
}

fn check_g_domain<S: Scalar>(delta: usize, alpha: S, gamma: S) -> Result<()> {
    check_even_degree(delta)?;
    let d = S::from_index(delta);
    let limit = (alpha * d).min((S::one() - alpha) * d);
    if !(alpha > S::zero() && alpha <= S::lit(0.5) && gamma >= S::zero() && gamma < limit) {
        return Err(Error::OutOfDomain(format!(
            "G needs 0 < alpha <= 1/2 and 0 <= gamma < {limit}; got alpha = {alpha}, gamma = {gamma}"
        )));
    }
    Ok(())
}

/// `G(alpha, gamma) = -(delta/2) ln delta + gamma ln gamma
///  + ((alpha delta - gamma)/2) ln(alpha delta - gamma)
///  + ((delta (1 - alpha) - gamma)/2) ln(delta (1 - alpha) - gamma)`.
pub fn g_value<S: Scalar>(delta: usize, alpha: S, gamma: S) -> Result<S> {
    check_g_domain(delta, alpha, gamma)?;
    Ok(g_unchecked(delta, alpha, gamma))
}

/// `(dG/dalpha, dG/dgamma)`; both negative when `alpha < 1/2` and `gamma < delta alpha / 4`.
pub fn g_partials<S: Scalar>(delta: usize, alpha: S, gamma: S) -> Result<(S, S)> {
    check_g_domain(delta, alpha, gamma)?;
    if gamma <= S::zero() {
        return Err(Error::OutOfDomain("dG/dgamma diverges at gamma = 0".into()));
    }
    let d = S::from_index(delta);
    let small = alpha * d - gamma;
    let large = d * (S::one() - alpha) - gamma;
    let d_alpha = half_degree::<S>(delta) * (small / large).ln();
    let d_gamma = (gamma / (small * large).sqrt()).ln();
    Ok((d_alpha, d_gamma))
}

/// Highest index a profile in `X(mass, gamma)` may use.
fn profile_top(delta: usize, mass: f64) -> usize {
    if mass > 0.5 {
        delta / 2 - 1
    } else {
        delta / 2
    }
}

fn check_profile<S: Scalar>(name: &str, delta: usize, v: &[S], mass: S, gamma: S) -> Result<()> {
    let half = delta / 2;
    let tol = S::lit(FEASIBILITY_TOL);
    if v.len() != half + 1 {
        return Err(Error::LengthMismatch {
            left: v.len(),
            right: half + 1,
        });
    }
    if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !(**x >= -tol)) {
        return Err(Error::InfeasiblePoint(format!(
            "{name}_{i} = {x} is negative"
        )));
    }
    let total = v.iter().fold(S::zero(), |acc, &x| acc + x);
    let moment = v
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (i, &x)| acc + S::from_index(i) * x);
    if (total - mass).abs() > tol {
        return Err(Error::InfeasiblePoint(format!(
            "sum of {name} is {total}, expected {mass}"
        )));
    }
    if (moment - gamma).abs() > tol {
        return Err(Error::InfeasiblePoint(format!(
            "first moment of {name} is {moment}, expected {gamma}"
        )));
    }
    if profile_top(delta, mass.to_f64_lossy()) < half && v[half].abs() > tol {
        return Err(Error::InfeasiblePoint(format!(
            "{name}_{half} must vanish when its side holds more than half the vertices"
        )));
    }
    Ok(())
}

/// The exponent `f(alpha, gamma, x, x_bar)`; profiles must lie in `X(alpha, gamma)`
/// and `X(1 - alpha, gamma)` up to [`FEASIBILITY_TOL`].
pub fn f_value<S: Scalar>(point: &ExponentPoint<S>, delta: usize) -> Result<S> {
    check_even_degree(delta)?;
    let alpha = point.alpha;
    let gamma = point.gamma;
    if !(alpha > S::zero() && alpha <= S::lit(0.5)) {
        return Err(Error::OutOfDomain(format!(
            "alpha = {alpha} not in (0, 1/2]"
        )));
    }
    check_profile("x", delta, &point.x, alpha, gamma)?;
    check_profile("x_bar", delta, &point.x_bar, S::one() - alpha, gamma)?;
    let d = S::from_index(delta);
    if !(gamma >= S::zero() && gamma < alpha * d) {
        return Err(Error::OutOfDomain(format!(
            "gamma = {gamma} not in [0, alpha delta)"
        )));
    }

    let half = delta / 2;
    let term = |v: S, b: S| {
        if v > S::zero() {
            v * (b / v).ln()
        } else {
            S::zero()
        }
    };
    let mut value = g_unchecked(delta, alpha, gamma);
    let middle = point.x[half].max(S::zero()) + point.x_bar[half].max(S::zero());
    value += term(middle, S::lit(binomial(delta, half) as f64));
    for i in 0..half {
        let b = S::lit(binomial(delta, i) as f64);
        value += term(point.x[i], b) + term(point.x_bar[i], b);
    }
    Ok(value)
}

/// Draws a point of `X(mass, gamma)` (profiles over `0..=delta/2`) as a random
/// convex combination of the polytope's vertices with flat Dirichlet weights.
pub fn sample_feasible<S: Scalar>(delta: usize, mass: S, gamma: S, seed: u64) -> Result<Vec<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_feasible_with(delta, mass, gamma, &mut rng)
}

/// As [`sample_feasible`] but drawing from a caller-supplied generator.
pub fn sample_feasible_with<S: Scalar, R: Rng + ?Sized>(
    delta: usize,
    mass: S,
    gamma: S,
    rng: &mut R,
) -> Result<Vec<S>> {
    check_even_degree(delta)?;
    let empty = || Error::EmptyFeasibleSet {
        alpha: mass.to_f64_lossy(),
        gamma: gamma.to_f64_lossy(),
    };
    if !(mass > S::zero() && mass <= S::one() && gamma >= S::zero()) {
        return Err(empty());
    }
    let top = profile_top(delta, mass.to_f64_lossy());
    let ratio = gamma / mass;
    if ratio > S::from_index(top) {
        return Err(empty());
    }

    // Vertices of {x >= 0, sum x = mass, sum i x_i = gamma} sit on at most two indices.
    let mut vertices: Vec<(usize, S, usize, S)> = Vec::new();
    for i in 0..=top {
        let fi = S::from_index(i);
        if fi > ratio {
            break;
        }
        if fi == ratio {
            vertices.push((i, mass, i, S::zero()));
        }
        for j in (i + 1)..=top {
            let fj = S::from_index(j);
            if fj <= ratio {
                continue;
            }
            let span = fj - fi;
            vertices.push((i, mass * (fj - ratio) / span, j, mass * (ratio - fi) / span));
        }
    }
    if vertices.is_empty() {
        return Err(empty());
    }

    let weights: Vec<f64> = vertices
        .iter()
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let norm: f64 = weights.iter().sum();
    let mut x = vec![S::zero(); delta / 2 + 1];
    for (&(i, xi, j, xj), w) in vertices.iter().zip(&weights) {
        let w = S::lit(w / norm);
        x[i] += w * xi;
        x[j] += w * xj;
    }
    Ok(x)
}

/// `Phi*` with moments at or beyond `a T` clamped to the point-mass value at `T`.
fn phi_clamped<S: Scalar>(weights: &[S], mass: S, moment: S) -> Result<S> {
    let t = weights.len() - 1;
    let max = mass * S::from_index(t);
    let moment = moment.max(S::zero());
    if moment >= max {
        return Ok(mass * (weights[t] / mass).ln());
    }
    Ok(solve_entropy(&EntropyProblem {
        weights: weights.to_vec(),
        mass,
        moment,
    })?
    .objective)
}

/// `Phi*(centre) + |lambda| half_width_a + |mu| half_width_c`.
fn phi_tangent<S: Scalar>(weights: &[S], mass: S, moment: S, half_a: S, half_c: S) -> Result<S> {
    let sol = solve_entropy(&EntropyProblem {
        weights: weights.to_vec(),
        mass,
        moment,
    })?;
    match (sol.lambda, sol.mu) {
        (Some(lambda), Some(mu)) => Ok(sol.objective + lambda.abs() * half_a + mu.abs() * half_c),
        _ => Err(Error::OutOfDomain(format!(
            "tangent bound needs an interior centre (a = {mass}, c = {moment})"
        ))),
    }
}

/// Upper-bounds the exponent over one cell.
pub fn cell_upper_bound<S: Scalar>(
    delta: usize,
    cell: Cell<S>,
    method: Method,
) -> Result<CellBound<S>> {
    check_even_degree(delta)?;
    let Cell {
        alpha_lo,
        alpha_hi,
        gamma_lo,
        gamma_hi,
    } = cell;
    let half = S::lit(0.5);
    if !(alpha_lo > S::zero() && alpha_lo <= alpha_hi && alpha_hi <= half) {
        return Err(Error::OutOfDomain(format!(
            "alpha interval [{alpha_lo}, {alpha_hi}] not inside (0, 1/2]"
        )));
    }
    if !(gamma_lo > S::zero() && gamma_lo <= gamma_hi) {
        return Err(Error::OutOfDomain(format!(
            "gamma interval [{gamma_lo}, {gamma_hi}] must be positive and ordered"
        )));
    }
    let limit = S::from_index(delta) * alpha_lo / S::lit(4.0);
    if !(gamma_hi < limit) {
        return Err(Error::MonotoneGuardViolated {
            gamma_hi: gamma_hi.to_f64_lossy(),
            limit: limit.to_f64_lossy(),
        });
    }

    let b = binomial_weights::<S>(delta, delta / 2);
    let b_bar = binomial_weights::<S>(delta, delta / 2 - 1);
    let g_bound = g_value(delta, alpha_lo, gamma_lo)?;

    let (phi_bound, phi_bar_bound) = match method {
        Method::Corner => {
            let mut phi = S::neg_infinity();
            let mut phi_bar = S::neg_infinity();
            for alpha in [alpha_lo, alpha_hi] {
                for gamma in [gamma_lo, gamma_hi] {
                    phi = phi.max(phi_clamped(&b, alpha, gamma)?);
                    phi_bar = phi_bar.max(phi_clamped(&b_bar, S::one() - alpha, gamma)?);
                }
            }
            (phi, phi_bar)
        }
        Method::Tangent => {
            let two = S::lit(2.0);
            let alpha_c = (alpha_lo + alpha_hi) / two;
            let gamma_c = (gamma_lo + gamma_hi) / two;
            let half_a = (alpha_hi - alpha_lo) / two;
            let half_c = (gamma_hi - gamma_lo) / two;
            (
                phi_tangent(&b, alpha_c, gamma_c, half_a, half_c)?,
                phi_tangent(&b_bar, S::one() - alpha_c, gamma_c, half_a, half_c)?,
            )
        }
    };

    Ok(CellBound {
        alpha_lo,
        alpha_hi,
        gamma_lo,
        gamma_hi,
        g_bound,
        phi_bound,
        phi_bar_bound,
        total: g_bound + phi_bound + phi_bar_bound,
        method,
    })
}

impl<S: Scalar> CertifyConfig<S> {
    pub fn validate(&self) -> Result<()> {
        check_even_degree(self.delta)?;
        if !(self.nu_lower > S::zero() && self.nu > self.nu_lower) {
            return Err(Error::OutOfDomain(format!(
                "need nu > nu_lower > 0, got nu = {}, nu_lower = {}",
                self.nu, self.nu_lower
            )));
        }
        if !(self.alpha_floor > S::zero() && self.alpha_floor < S::lit(0.5)) {
            return Err(Error::OutOfDomain(format!(
                "alpha floor {} not in (0, 1/2)",
                self.alpha_floor
            )));
        }
        if self.grid_m == 0 {
            return Err(Error::OutOfDomain("grid size must be at least 1".into()));
        }
        Ok(())
    }

    /// Endpoints of the `i`-th alpha subinterval; the last one ends exactly at 1/2.
    pub fn alpha_interval(&self, i: usize) -> (S, S) {
        let m = self.grid_m;
        let half = S::lit(0.5);
        let width = half - self.alpha_floor;
        let at = |k: usize| {
            if k == m {
                half
            } else {
                self.alpha_floor + width * S::from_index(k) / S::from_index(m)
            }
        };
        (at(i), at(i + 1))
    }

    /// The `M` gamma cells of alpha row `i`, covering `[alpha_lo nu_lower, alpha_hi nu]`.
    pub fn row_cells(&self, i: usize) -> Vec<Cell<S>> {
        let m = self.grid_m;
        let (alpha_lo, alpha_hi) = self.alpha_interval(i);
        let g0 = alpha_lo * self.nu_lower;
        let g1 = alpha_hi * self.nu;
        let at = |k: usize| {
            if k == m {
                g1
            } else {
                g0 + (g1 - g0) * S::from_index(k) / S::from_index(m)
            }
        };
        (0..m)
            .map(|j| Cell {
                alpha_lo,
                alpha_hi,
                gamma_lo: at(j),
                gamma_hi: at(j + 1),
            })
            .collect()
    }

    /// All `M x M` cells in row-major order.
    pub fn cells(&self) -> Vec<Cell<S>> {
        (0..self.grid_m).flat_map(|i| self.row_cells(i)).collect()
    }

    /// A cell of the partition containing `(alpha, gamma)`, if any.
    pub fn covering_cell(&self, alpha: S, gamma: S) -> Option<Cell<S>> {
        let width = S::lit(0.5) - self.alpha_floor;
        let guess = ((alpha - self.alpha_floor) / width * S::from_index(self.grid_m))
            .floor()
            .to_f64_lossy();
        let guess = guess.clamp(0.0, (self.grid_m - 1) as f64) as usize;
        let rows = guess.saturating_sub(1)..=(guess + 1).min(self.grid_m - 1);
        rows.flat_map(|i| self.row_cells(i))
            .find(|c| c.contains(alpha, gamma))
    }
}

/// Evaluates every cell of one alpha row.
pub fn row_bounds<S: Scalar>(config: &CertifyConfig<S>, row: usize) -> Vec<Result<CellBound<S>>> {
    config
        .row_cells(row)
        .into_iter()
        .map(|cell| cell_upper_bound(config.delta, cell, config.method))
        .collect()
}

/// Runs the grid certificate. Rows are evaluated in parallel on the current rayon
/// pool and merged in row-major order, so the result does not depend on the
/// number of workers. Failing cells are counted and make the certificate fail.
pub fn certify_asymmetric<S: Scalar>(config: &CertifyConfig<S>) -> Result<Certificate<S>> {
    config.validate()?;
    let rows: Vec<Vec<Result<CellBound<S>>>> = (0..config.grid_m)
        .into_par_iter()
        .map(|i| row_bounds(config, i))
        .collect();

    let mut worst: Option<CellBound<S>> = None;
    let mut failed = 0usize;
    let mut first_failure = None;
    let mut cells = 0usize;
    for bound in rows.into_iter().flatten() {
        cells += 1;
        match bound {
            Ok(b) => {
                if worst.as_ref().is_none_or(|w| b.total > w.total) {
                    worst = Some(b);
                }
            }
            Err(e) => {
                failed += 1;
                first_failure.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let f_star_upper = worst.as_ref().map_or(S::infinity(), |w| w.total);
    Ok(Certificate {
        delta: config.delta,
        nu: config.nu,
        nu_lower: config.nu_lower,
        alpha_floor: config.alpha_floor,
        grid_m: config.grid_m,
        f_star_upper,
        negative: failed == 0 && f_star_upper < S::zero(),
        worst_cell: worst,
        method: config.method,
        cells,
        failed_cells: failed,
        first_failure,
    })
}

/// Corner and tangent certificates for the same grid, with the number of cells
/// whose totals have opposite signs under the two rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison<S> {
    pub corner: Certificate<S>,
    pub tangent: Certificate<S>,
    pub sign_disagreements: usize,
}

pub fn compare_methods<S: Scalar>(config: &CertifyConfig<S>) -> Result<MethodComparison<S>> {
    let corner_cfg = CertifyConfig {
        method: Method::Corner,
        ..config.clone()
    };
    let tangent_cfg = CertifyConfig {
        method: Method::Tangent,
        ..config.clone()
    };
    let corner = certify_asymmetric(&corner_cfg)?;
    let tangent = certify_asymmetric(&tangent_cfg)?;
    let sign_disagreements = (0..config.grid_m)
        .into_par_iter()
        .map(|i| {
            row_bounds(&corner_cfg, i)
                .into_iter()
                .zip(row_bounds(&tangent_cfg, i))
                .filter(|(c, t)| match (c, t) {
                    (Ok(c), Ok(t)) => (c.total < S::zero()) != (t.total < S::zero()),
                    _ => false,
                })
                .count()
        })
        .sum();
    Ok(MethodComparison {
        corner,
        tangent,
        sign_disagreements,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::entropy::phi_star;
    use crate::symmetric::h_value;

    #[test]
    fn g_at_half_matches_symmetric_prefix() {
        for gamma in [0.1, 0.3, 0.45] {
            let g = g_value(4, 0.5, gamma).unwrap();
            let phi =
                phi_star(&EntropyProblem::new(vec![1.0, 4.0, 3.0], 0.5, gamma).unwrap()).unwrap();
            assert_abs_diff_eq!(g + 2.0 * phi, h_value(4, gamma).unwrap(), epsilon = 1e-13);
        }
    }

    #[test]
    fn g_pinned_value() {
        // -2 ln 4 + 0.15 ln 0.15 + 0.525 ln 1.05 + 1.325 ln 2.65, expanded by hand.
        let want =
            -2.0 * 4f64.ln() + 0.15 * 0.15f64.ln() + 0.525 * 1.05f64.ln() + 1.325 * 2.65f64.ln();
        assert_abs_diff_eq!(g_value(4, 0.3, 0.15).unwrap(), want, epsilon = 1e-15);
        assert_abs_diff_eq!(want, -1.740250360786188, epsilon = 1e-12);
    }

    #[test]
    fn g_continuous_at_zero_gamma() {
        let at_zero = g_value(4, 0.3, 0.0).unwrap();
        assert_abs_diff_eq!(g_value(4, 0.3, 1e-12).unwrap(), at_zero, epsilon = 1e-10);
    }

    #[test]
    fn partials_signs_and_values() {
        let (da, _) = g_partials(4, 0.5, 0.2).unwrap();
        assert_abs_diff_eq!(da, 0.0, epsilon = 1e-15);
        let (da, dg) = g_partials(4, 0.3, 0.15).unwrap();
        assert!(da < 0.0 && dg < 0.0);
    }

    #[test]
    fn partials_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = 1e-6;
        for _ in 0..50 {
            let delta = [4usize, 6, 8][rng.random_range(0..3)];
            let alpha: f64 = rng.random_range(0.1..0.49);
            let gamma = rng.random_range(0.01..(delta as f64 * alpha / 4.0));
            let (da, dg) = g_partials(delta, alpha, gamma).unwrap();
            let fa = (g_value(delta, alpha + h, gamma).unwrap()
                - g_value(delta, alpha - h, gamma).unwrap())
                / (2.0 * h);
            let fg = (g_value(delta, alpha, gamma + h).unwrap()
                - g_value(delta, alpha, gamma - h).unwrap())
                / (2.0 * h);
            assert_abs_diff_eq!(da, fa, epsilon = 1e-6);
            assert_abs_diff_eq!(dg, fg, epsilon = 1e-6);
            assert!(da < 0.0 && dg < 0.0);
        }
    }

    #[test]
    fn sampler_vertices_and_constraints() {
        assert_eq!(
            sample_feasible(4, 0.3, 0.6, 1).unwrap(),
            vec![0.0, 0.0, 0.3]
        );
        assert_eq!(
            sample_feasible(4, 0.3, 0.0, 1).unwrap(),
            vec![0.3, 0.0, 0.0]
        );
        let x = sample_feasible(4, 0.4, 0.3, 7).unwrap();
        let total: f64 = x.iter().sum();
        let moment: f64 = x.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
        assert_abs_diff_eq!(total, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(moment, 0.3, epsilon = 1e-12);
        assert!(x.iter().all(|v| *v >= 0.0));
        assert_eq!(x, sample_feasible(4, 0.4, 0.3, 7).unwrap());
        // The larger side may not use index delta/2.
        let x_bar = sample_feasible(4, 0.6, 0.3, 3).unwrap();
        assert_eq!(x_bar[2], 0.0);
        assert!(matches!(
            sample_feasible(4, 0.6, 0.7, 3),
            Err(Error::EmptyFeasibleSet { .. })
        ));
    }

    #[test]
    fn f_on_diagonal_is_h_of_profile() {
        let gamma = 0.2;
        let x = sample_feasible(4, 0.5, gamma, 11).unwrap();
        let p = ExponentPoint {
            alpha: 0.5,
            gamma,
            x: x.clone(),
            x_bar: x.clone(),
        };
        let b_sym = [1.0, 4.0, 3.0];
        let h = g_value(4, 0.5, gamma).unwrap()
            + 2.0 * crate::entropy::evaluate_objective(&x, &b_sym).unwrap();
        assert_abs_diff_eq!(f_value(&p, 4).unwrap(), h, epsilon = 1e-13);
    }

    #[test]
    fn f_below_closed_form_supremum() {
        let b = binomial_weights::<f64>(6, 3);
        let b_bar = binomial_weights::<f64>(6, 2);
        for seed in 0..40 {
            let (alpha, gamma) = (0.35, 0.3);
            let p = ExponentPoint {
                alpha,
                gamma,
                x: sample_feasible(6, alpha, gamma, seed).unwrap(),
                x_bar: sample_feasible(6, 1.0 - alpha, gamma, seed + 1000).unwrap(),
            };
            let sup = g_value(6, alpha, gamma).unwrap()
                + phi_star(&EntropyProblem::new(b.clone(), alpha, gamma).unwrap()).unwrap()
                + phi_star(&EntropyProblem::new(b_bar.clone(), 1.0 - alpha, gamma).unwrap())
                    .unwrap();
            assert!(f_value(&p, 6).unwrap() <= sup + 1e-9);
        }
    }

    #[test]
    fn f_rejects_infeasible_points() {
        let p = ExponentPoint {
            alpha: 0.3,
            gamma: 0.1,
            x: vec![0.3, 0.0, 0.0],
            x_bar: vec![0.6, 0.1, 0.0],
        };
        assert!(matches!(f_value(&p, 4), Err(Error::InfeasiblePoint(_))));
        let p = ExponentPoint {
            alpha: 0.3,
            gamma: 0.2,
            x: vec![0.2, 0.0, 0.1],
            x_bar: vec![0.6, 0.0, 0.1],
        };
        assert!(matches!(f_value(&p, 4), Err(Error::InfeasiblePoint(_))));
    }

    #[test]
    fn degenerate_cell_is_pointwise() {
        let cell = Cell {
            alpha_lo: 0.3,
            alpha_hi: 0.3,
            gamma_lo: 0.12,
            gamma_hi: 0.12,
        };
        let want = g_value(4, 0.3, 0.12).unwrap()
            + phi_star(&EntropyProblem::new(vec![1.0, 4.0, 6.0], 0.3, 0.12).unwrap()).unwrap()
            + phi_star(&EntropyProblem::new(vec![1.0, 4.0], 0.7, 0.12).unwrap()).unwrap();
        for method in [Method::Corner, Method::Tangent] {
            let b = cell_upper_bound(4, cell, method).unwrap();
            assert_abs_diff_eq!(b.total, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn cell_bounds_dominate_interior_points() {
        let cell = Cell {
            alpha_lo: 0.3,
            alpha_hi: 0.32,
            gamma_lo: 0.12,
            gamma_hi: 0.14,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for method in [Method::Corner, Method::Tangent] {
            let bound = cell_upper_bound(4, cell, method).unwrap();
            assert_abs_diff_eq!(
                bound.total,
                bound.g_bound + bound.phi_bound + bound.phi_bar_bound,
                epsilon = 0.0
            );
            for _ in 0..20 {
                let alpha: f64 = rng.random_range(0.3..0.32);
                let gamma: f64 = rng.random_range(0.12..0.14);
                let p = ExponentPoint {
                    alpha,
                    gamma,
                    x: sample_feasible_with(4, alpha, gamma, &mut rng).unwrap(),
                    x_bar: sample_feasible_with(4, 1.0 - alpha, gamma, &mut rng).unwrap(),
                };
                assert!(f_value(&p, 4).unwrap() <= bound.total);
            }
        }
    }

    #[test]
    fn tangent_dominates_centre_value() {
        let cell = Cell {
            alpha_lo: 0.2,
            alpha_hi: 0.25,
            gamma_lo: 0.15,
            gamma_hi: 0.2,
        };
        let t = cell_upper_bound(6, cell, Method::Tangent).unwrap();
        let centre =
            phi_star(&EntropyProblem::new(binomial_weights(6, 3), 0.225, 0.175).unwrap()).unwrap();
        assert!(t.phi_bound >= centre);
    }

    #[test]
    fn monotone_guard() {
        let cell = Cell {
            alpha_lo: 0.2,
            alpha_hi: 0.25,
            gamma_lo: 0.1,
            gamma_hi: 0.2,
        };
        assert!(matches!(
            cell_upper_bound(4, cell, Method::Corner),
            Err(Error::MonotoneGuardViolated { .. })
        ));
    }

    fn config(delta: usize, nu: f64, m: usize, method: Method) -> CertifyConfig<f64> {
        CertifyConfig {
            delta,
            nu,
            nu_lower: crate::baseline::bollobas_bound(delta).unwrap(),
            alpha_floor: 0.1,
            grid_m: m,
            method,
        }
    }

    #[test]
    fn partition_covers_the_region() {
        let cfg = config(4, 0.4894, 17, Method::Corner);
        assert_eq!(cfg.cells().len(), 17 * 17);
        assert_eq!(cfg.alpha_interval(16).1, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let alpha: f64 = rng.random_range(0.1..0.5);
            let gamma = alpha * rng.random_range(cfg.nu_lower..=cfg.nu);
            assert!(cfg.covering_cell(alpha, gamma).is_some(), "{alpha} {gamma}");
        }
        for i in 0..17 {
            let (lo, hi) = cfg.alpha_interval(i);
            let row = cfg.row_cells(i);
            assert_eq!(row[0].gamma_lo, lo * cfg.nu_lower);
            assert_eq!(row[16].gamma_hi, hi * cfg.nu);
            assert!(row.windows(2).all(|w| w[0].gamma_hi == w[1].gamma_lo));
        }
    }

    #[test]
    fn coarse_certificate_is_deterministic() {
        let cfg = config(4, 0.4894, 20, Method::Tangent);
        let a = certify_asymmetric(&cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| certify_asymmetric(&cfg).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.cells, 400);
        assert_eq!(a.failed_cells, 0);
    }

    #[test]
    fn invalid_config() {
        let mut cfg = config(4, 0.4894, 20, Method::Corner);
        cfg.nu = 0.3;
        assert!(certify_asymmetric(&cfg).is_err());
        assert!("diagonal".parse::<Method>().is_err());
        assert_eq!("tangent".parse::<Method>().unwrap(), Method::Tangent);
    }
}
