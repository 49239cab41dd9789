//! Balanced-cut exponent `H_delta(gamma)` and the expansion bound `nu*_delta`.
//!
//! `H_delta(gamma) = -(delta/2) ln delta + gamma ln gamma
//!                   + (delta/2 - gamma) ln(delta/2 - gamma) + 2 Phi*(1/2, gamma, b)`
//! with `b_i = C(delta, i)` for `i < delta/2` and `b_{delta/2} = C(delta, delta/2)/2`.
//! `H` is strictly increasing on `(0, delta/8)` for `delta` in {4, 6, 8}, so its
//! root `gamma = nu*/2` is found by bisection.

use serde::{Deserialize, Serialize};

use crate::entropy::{phi_star, root_z_star, EntropyProblem};
use crate::poly::Poly;
use crate::{binomial, Error, Result, Scalar};

/// Degrees for which the root bound (and hence monotonicity of `H`) is proven.
pub const VERIFIED_DEGREES: [usize; 3] = [4, 6, 8];

/// Default bisection tolerance on `nu`.
pub const DEFAULT_NU_TOL: f64 = 1e-9;

/// Distance kept from both ends of the `nu` search bracket `(0, delta/4)`.
const NU_BRACKET_MARGIN: f64 = 1e-6;
const UNVERIFIED_SCAN_STEPS: usize = 64;

pub(crate) fn check_even_degree(delta: usize) -> Result<()> {
    if delta < 4 || !delta.is_multiple_of(2) {
        return Err(Error::InvalidDelta(delta));
    }
    Ok(())
}

/// The symmetric-case weight vector over `{0, ..., delta/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricWeights<S> {
    pub delta: usize,
    pub b: Vec<S>,
    /// `false` outside {4, 6, 8}: values are computable but the root bound is unproven.
    pub verified: bool,
}

impl<S: Scalar> SymmetricWeights<S> {
    pub fn new(delta: usize) -> Result<Self> {
        check_even_degree(delta)?;
        let half = delta / 2;
        let b = (0..=half)
            .map(|i| {
                let c = binomial(delta, i) as f64;
                S::lit(if i == half { c / 2.0 } else { c })
            })
            .collect();
        Ok(Self {
            delta,
            b,
            verified: VERIFIED_DEGREES.contains(&delta),
        })
    }

    fn problem(&self, gamma: S) -> EntropyProblem<S> {
        EntropyProblem {
            weights: self.b.clone(),
            mass: S::lit(0.5),
            moment: gamma,
        }
    }
}

/// Outcome of checking `z* < sqrt(gamma / (delta/2 - gamma))` at one `gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootBoundWitness<S> {
    pub delta: usize,
    pub gamma: S,
    pub z_star: S,
    pub z0: S,
    pub holds: bool,
}

/// A computed `nu*` together with the degree's verification status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuStar<S> {
    pub delta: usize,
    pub nu: S,
    /// Final bisection bracket width.
    pub bracket_width: S,
    /// `H(nu/2)` at the returned value.
    pub residual: S,
    /// `false` when `delta` is outside the proven cases.
    pub root_bound_verified: bool,
}

/// The balanced-cut prefix shared with `G(1/2, gamma)`.
fn balanced_prefix<S: Scalar>(delta: usize, gamma: S) -> S {
    let d = S::from_index(delta);
    let half = d / S::lit(2.0);
    -half * d.ln() + gamma.xlnx() + (half - gamma).xlnx()
}

/// `H_delta(gamma)` for `0 < gamma <= delta/4`.
pub fn h_value<S: Scalar>(delta: usize, gamma: S) -> Result<S> {
    let weights = SymmetricWeights::<S>::new(delta)?;
    let quarter = S::from_index(delta) / S::lit(4.0);
    if !(gamma > S::zero() && gamma <= quarter) {
        return Err(Error::OutOfDomain(format!(
            "H_{delta} needs 0 < gamma <= {quarter}, got {gamma}"
        )));
    }
    let phi = phi_star(&weights.problem(gamma))?;
    Ok(balanced_prefix(delta, gamma) + S::lit(2.0) * phi)
}

/// `H'(gamma) = ln(gamma / (delta/2 - gamma)) - 2 ln z*` for `0 < gamma < delta/4`.
pub fn h_derivative<S: Scalar>(delta: usize, gamma: S) -> Result<S> {
    let weights = SymmetricWeights::<S>::new(delta)?;
    let d = S::from_index(delta);
    if !(gamma > S::zero() && gamma < d / S::lit(4.0)) {
        return Err(Error::OutOfDomain(format!(
            "H'_{delta} needs 0 < gamma < {}, got {gamma}",
            d / S::lit(4.0)
        )));
    }
    let z = root_z_star(&weights.problem(gamma))?;
    Ok((gamma / (d / S::lit(2.0) - gamma)).ln() - S::lit(2.0) * z.ln())
}

/// `Q(z) = (1 + z^2) S1(z) - (delta/2) z^2 S2(z)` with exact integer coefficients.
///
/// Computed as `2Q = (1 + z^2) sum_i i b_i z^i - delta z^2 sum_i b_i z^i`, which
/// has integer coefficients, and then halved.
pub fn q_polynomial(delta: usize) -> Result<Poly<i64>> {
    if !VERIFIED_DEGREES.contains(&delta) {
        return Err(Error::UnsupportedDelta(delta));
    }
    let half = delta / 2;
    let b: Vec<i64> = (0..=half)
        .map(|i| {
            let c = binomial(delta, i) as i64;
            if i == half {
                c / 2
            } else {
                c
            }
        })
        .collect();
    let twice_s1 = Poly::new(b.iter().enumerate().map(|(i, &bi)| i as i64 * bi).collect());
    let s2 = Poly::new(b);
    let one_plus_z2 = Poly::new(vec![1, 0, 1]);
    let z2 = Poly::monomial(1i64, 2);
    let twice_q = one_plus_z2 * twice_s1 - Poly::constant(delta as i64) * z2 * s2;
    debug_assert!(twice_q.coeffs().iter().all(|c| c % 2 == 0));
    Ok(twice_q.map(|c| c / 2))
}

/// A factor of the form `head - tail * z^power` with even `power`. It decreases in
/// `z`, so it is positive on the open interval `(0, 1/sqrt 3)` when its value at the
/// right endpoint, `head - tail / 3^(power/2)`, is nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DecreasingFactor {
    head: i64,
    tail: i64,
    power: usize,
}

impl DecreasingFactor {
    fn poly(self) -> Poly<i64> {
        Poly::constant(self.head) - Poly::monomial(self.tail, self.power)
    }

    fn positive_below_inv_sqrt3(self) -> bool {
        let endpoint_scaled = self.head * 3i64.pow(self.power as u32 / 2) - self.tail;
        self.power.is_multiple_of(2) && self.head > 0 && self.tail >= 0 && endpoint_scaled >= 0
    }
}

/// One summand `coeff * z^shift * factor` of a positive-term decomposition.
#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: i64,
    shift: usize,
    factor: DecreasingFactor,
}

/// Hand decompositions of `Q` into terms that are visibly positive on `(0, 1/sqrt 3)`.
/// Each decomposition is `outer_coeff * z * sum(terms)`, plus an optional product form.
fn q_decomposition(delta: usize) -> Option<(i64, Vec<Term>)> {
    let f = |head, tail, power| DecreasingFactor { head, tail, power };
    match delta {
        // z (2 + z)(1 - 3z^2) = z [2(1 - 3z^2) + z(1 - 3z^2)]
        4 => Some((
            1,
            vec![
                Term {
                    coeff: 2,
                    shift: 0,
                    factor: f(1, 3, 2),
                },
                Term {
                    coeff: 1,
                    shift: 1,
                    factor: f(1, 3, 2),
                },
            ],
        )),
        // 3z ((1 - 5z^4) + z (4 - 10z^2))
        6 => Some((
            3,
            vec![
                Term {
                    coeff: 1,
                    shift: 0,
                    factor: f(1, 5, 4),
                },
                Term {
                    coeff: 1,
                    shift: 1,
                    factor: f(4, 10, 2),
                },
            ],
        )),
        // 2z (2 + z(3 - 7z^2) + z(9 - 35z^4) + 14z^2 (2 - 5z^2))
        8 => Some((
            2,
            vec![
                Term {
                    coeff: 1,
                    shift: 0,
                    factor: f(2, 0, 0),
                },
                Term {
                    coeff: 1,
                    shift: 1,
                    factor: f(3, 7, 2),
                },
                Term {
                    coeff: 1,
                    shift: 1,
                    factor: f(9, 35, 4),
                },
                Term {
                    coeff: 14,
                    shift: 2,
                    factor: f(2, 5, 2),
                },
            ],
        )),
        _ => None,
    }
}

/// Diagnostics of [`verify_q_positive`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPositivity {
    pub delta: usize,
    pub coefficients: Vec<i64>,
    pub samples: usize,
    pub min_sample: f64,
    pub sampled_positive: bool,
    pub decomposition_matches: bool,
    pub decomposition_terms_positive: bool,
}

impl QPositivity {
    pub fn holds(&self) -> bool {
        self.sampled_positive && self.decomposition_matches && self.decomposition_terms_positive
    }
}

/// Number of interior sample points used by [`verify_q_positive`].
pub const Q_SAMPLES: usize = 100_000;

/// Checks `Q > 0` on `(0, 1/sqrt 3)` by dense sampling and by the positive-term
/// decomposition (coefficient-wise identity plus sign of every factor).
pub fn check_q_positive(delta: usize) -> Result<QPositivity> {
    let q = q_polynomial(delta)?;
    let qf = q.map(|&c| c as f64);
    let zmax = 1.0 / 3f64.sqrt();
    let mut min_sample = f64::INFINITY;
    for k in 1..=Q_SAMPLES {
        let z = zmax * k as f64 / (Q_SAMPLES + 1) as f64;
        min_sample = min_sample.min(qf.eval(z));
    }

    let (outer, terms) = q_decomposition(delta).expect("verified degree");
    let rebuilt = terms.iter().fold(Poly::<i64>::zero(), |acc, t| {
        acc + Poly::monomial(t.coeff, t.shift) * t.factor.poly()
    }) * Poly::monomial(outer, 1);
    let terms_positive = outer > 0
        && terms
            .iter()
            .all(|t| t.coeff > 0 && t.factor.positive_below_inv_sqrt3());

    Ok(QPositivity {
        delta,
        coefficients: q.coeffs().to_vec(),
        samples: Q_SAMPLES,
        min_sample,
        sampled_positive: min_sample > 0.0,
        decomposition_matches: rebuilt == q,
        decomposition_terms_positive: terms_positive,
    })
}

/// `true` iff `Q(z) > 0` on `(0, 1/sqrt 3)` per [`check_q_positive`].
pub fn verify_q_positive(delta: usize) -> Result<bool> {
    check_q_positive(delta).map(|r| r.holds())
}

/// Compares `z*(1/2, gamma, b)` against `z0 = sqrt(gamma / (delta/2 - gamma))`
/// for `gamma` in `(0, delta/8)`.
pub fn verify_root_bound<S: Scalar>(delta: usize, gamma: S) -> Result<RootBoundWitness<S>> {
    let weights = SymmetricWeights::<S>::new(delta)?;
    let d = S::from_index(delta);
    if !(gamma > S::zero() && gamma < d / S::lit(8.0)) {
        return Err(Error::OutOfDomain(format!(
            "root bound needs 0 < gamma < {}, got {gamma}",
            d / S::lit(8.0)
        )));
    }
    let z_star = root_z_star(&weights.problem(gamma))?;
    let z0 = (gamma / (d / S::lit(2.0) - gamma)).sqrt();
    Ok(RootBoundWitness {
        delta,
        gamma,
        z_star,
        z0,
        holds: z_star < z0,
    })
}

/// Bisection for the root of `H_delta(nu/2)` on `nu` in `[1e-6, delta/4 - 1e-6]`.
///
/// For degrees outside [`VERIFIED_DEGREES`] the root can lie above `delta/4`
/// (already for `delta = 10`). `H` is unimodal there, so the upper end is the first
/// point of a scan from `delta/4` towards `delta/2` where `H > 0`, and the result is
/// flagged as unverified.
pub fn nu_star<S: Scalar>(delta: usize, tol: S) -> Result<NuStar<S>> {
    check_even_degree(delta)?;
    if !(tol >= S::lit(1e-12)) {
        return Err(Error::OutOfDomain(format!(
            "tolerance {tol} is below 1e-12"
        )));
    }
    let two = S::lit(2.0);
    let d = S::from_index(delta);
    let margin = S::lit(NU_BRACKET_MARGIN);
    let mut lo = margin;
    let verified = VERIFIED_DEGREES.contains(&delta);
    let mut hi = d / S::lit(4.0) - margin;
    let mut h_hi = h_value(delta, hi / two)?;
    if !verified {
        for j in 1..UNVERIFIED_SCAN_STEPS {
            if h_hi > S::zero() {
                break;
            }
            hi = d / S::lit(4.0)
                * (S::one() + S::from_index(j) / S::from_index(UNVERIFIED_SCAN_STEPS));
            h_hi = h_value(delta, hi / two)?;
        }
    }
    let h_lo = h_value(delta, lo / two)?;
    if !(h_lo < S::zero() && h_hi > S::zero()) {
        return Err(Error::NoSignChange {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        });
    }
    while hi - lo > tol {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if h_value(delta, mid / two)? > S::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let nu = (lo + hi) / two;
    if verified && !(nu / two < d / S::lit(8.0)) {
        return Err(Error::OutOfDomain(format!(
            "nu*/2 = {} is not below delta/8; monotonicity of H is not guaranteed there",
            nu / two
        )));
    }
    Ok(NuStar {
        delta,
        nu,
        bracket_width: hi - lo,
        residual: h_value(delta, nu / two)?,
        root_bound_verified: verified,
    })
}

/// Truncates (not rounds) to four decimals, e.g. `0.48947 -> 0.4894`.
pub fn truncate4(x: f64) -> f64 {
    (x * 1e4).floor() / 1e4
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn weights_for_degree_four() {
        let w = SymmetricWeights::<f64>::new(4).unwrap();
        assert_eq!(w.b, vec![1.0, 4.0, 3.0]);
        assert!(w.verified);
        assert!(!SymmetricWeights::<f64>::new(10).unwrap().verified);
        assert_eq!(SymmetricWeights::<f64>::new(5), Err(Error::InvalidDelta(5)));
    }

    #[test]
    fn h_limit_at_zero() {
        assert_abs_diff_eq!(h_value(4, 1e-9).unwrap(), -(2f64.ln()), epsilon = 1e-4);
    }

    #[test]
    fn h_vanishes_at_reference_roots() {
        assert_abs_diff_eq!(h_value(4, 0.2447).unwrap(), 0.0, epsilon = 2e-3);
        assert_abs_diff_eq!(h_value(6, 0.56025).unwrap(), 0.0, epsilon = 2e-3);
        assert_abs_diff_eq!(h_value(8, 0.9065).unwrap(), 0.0, epsilon = 2e-3);
    }

    #[test]
    fn h_domain() {
        assert!(matches!(h_value(4, 0.0), Err(Error::OutOfDomain(_))));
        assert!(matches!(h_value(4, 1.5), Err(Error::OutOfDomain(_))));
        assert!(h_value(4, 1.0).is_ok());
        assert!(matches!(h_derivative(4, 1.0), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for delta in [4usize, 6, 8] {
            for gamma in [0.05, 0.3, delta as f64 / 8.0 - 0.01] {
                let d = h_derivative(delta, gamma).unwrap();
                let fd = (h_value(delta, gamma + h).unwrap() - h_value(delta, gamma - h).unwrap())
                    / (2.0 * h);
                assert_abs_diff_eq!(d, fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn derivative_positive_below_delta_over_eight() {
        for delta in [4usize, 6, 8] {
            let top = delta as f64 / 8.0;
            for k in 0..200 {
                let gamma = 0.01 + (top - 0.01) * k as f64 / 200.0;
                assert!(
                    h_derivative(delta, gamma).unwrap() > 0.0,
                    "delta {delta} gamma {gamma}"
                );
            }
        }
    }

    #[test]
    fn q_coefficients_match_hand_expansion() {
        assert_eq!(q_polynomial(4).unwrap().coeffs(), &[0, 2, 1, -6, -3]);
        assert_eq!(q_polynomial(6).unwrap().coeffs(), &[0, 3, 12, 0, -30, -15]);
        assert_eq!(
            q_polynomial(8).unwrap().coeffs(),
            &[0, 4, 24, 56, -14, -140, -70]
        );
        // z (2 + z)(1 - 3 z^2)
        let factored = Poly::monomial(1i64, 1) * Poly::new(vec![2, 1]) * Poly::new(vec![1, 0, -3]);
        assert_eq!(q_polynomial(4).unwrap(), factored);
        assert_eq!(q_polynomial(10), Err(Error::UnsupportedDelta(10)));
    }

    #[test]
    fn q_positive_for_all_verified_degrees() {
        for delta in VERIFIED_DEGREES {
            let r = check_q_positive(delta).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn root_bound_examples() {
        assert!(verify_root_bound(4, 0.25).unwrap().holds);
        assert!(verify_root_bound(8, 0.999).unwrap().holds);
        let w = verify_root_bound(4, 1e-6).unwrap();
        assert!(w.holds);
        assert!(w.z_star / w.z0 < 0.9);
        assert!(verify_root_bound(4, 0.5).is_err());
    }

    #[test]
    fn nu_star_matches_reference_values() {
        for (delta, want) in [(4usize, 0.4894), (6, 1.1205), (8, 1.8130)] {
            let r = nu_star(delta, 1e-9).unwrap();
            assert_eq!(truncate4(r.nu), want, "delta {delta}: {}", r.nu);
            assert!(r.bracket_width <= 1e-9);
            assert!(r.root_bound_verified);
        }
    }

    #[test]
    fn nu_star_general_degree_is_flagged() {
        let r: NuStar<f64> = nu_star(10, 1e-9).unwrap();
        assert!(!r.root_bound_verified);
        assert!(r.nu > 2.5 && r.nu < 5.0, "{}", r.nu);
        assert!(r.residual.abs() < 1e-6);
    }

    #[test]
    fn truncation_not_rounding() {
        assert_eq!(truncate4(0.48947591), 0.4894);
        assert_eq!(truncate4(1.81307144), 1.8130);
    }
}
