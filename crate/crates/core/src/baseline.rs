//! The classical first-moment baseline `nu_lower = (1 - eta) delta / 2`, where
//! `(1 - eta) log2(1 - eta) + (1 + eta) log2(1 + eta) = 4 / delta`, plus the
//! small-set constants used by the asymmetric certificate.

use serde::{Deserialize, Serialize};

use crate::symmetric::check_even_degree;
use crate::{Error, Result, Scalar};

/// Relative size below which small sets are handled by the cited small-set bound.
pub const SMALL_SET_ALPHA: f64 = 0.1;

/// `3 delta / 8 - 1`, the expansion floor for sets of relative size at most
/// [`SMALL_SET_ALPHA`] (cited constant, not computed here).
pub fn small_set_floor(delta: usize) -> f64 {
    3.0 * delta as f64 / 8.0 - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult<S> {
    pub delta: usize,
    pub eta: S,
    /// `(1 - eta) delta / 2`; expansion exceeds every smaller `nu` with high probability.
    pub nu_lower: S,
    pub small_set_alpha: S,
    pub small_set_floor: S,
}

fn entropy_sum<S: Scalar>(eta: S) -> S {
    let one = S::one();
    let ln2 = S::lit(std::f64::consts::LN_2);
    ((one - eta).xlnx() + (one + eta).xlnx()) / ln2
}

/// Solves the defining equation for `eta` in `(0, 1)` by bisection; the left side
/// increases strictly from 0 to 2 on that interval.
pub fn bollobas_eta<S: Scalar>(delta: usize, tol: S) -> Result<S> {
    check_even_degree(delta)?;
    if !(tol >= S::lit(1e-14)) {
        return Err(Error::OutOfDomain(format!(
            "tolerance {tol} is below 1e-14"
        )));
    }
    let target = S::lit(4.0) / S::from_index(delta);
    let (mut lo, mut hi) = (S::zero(), S::one());
    let two = S::lit(2.0);
    let mut eta = (lo + hi) / two;
    for _ in 0..400 {
        eta = (lo + hi) / two;
        let residual = entropy_sum(eta) - target;
        if residual.abs() <= tol || eta <= lo || eta >= hi {
            break;
        }
        if residual > S::zero() {
            hi = eta;
        } else {
            lo = eta;
        }
    }
    Ok(eta)
}

/// `(1 - eta) delta / 2`.
pub fn bollobas_bound<S: Scalar>(delta: usize) -> Result<S> {
    let eta = bollobas_eta(delta, S::lit(1e-14).max(S::epsilon() * S::lit(8.0)))?;
    Ok((S::one() - eta) * S::from_index(delta) / S::lit(2.0))
}

pub fn baseline<S: Scalar>(delta: usize) -> Result<BaselineResult<S>> {
    let eta = bollobas_eta(delta, S::lit(1e-14).max(S::epsilon() * S::lit(8.0)))?;
    Ok(BaselineResult {
        delta,
        eta,
        nu_lower: (S::one() - eta) * S::from_index(delta) / S::lit(2.0),
        small_set_alpha: S::lit(SMALL_SET_ALPHA),
        small_set_floor: S::lit(small_set_floor(delta)),
    })
}
