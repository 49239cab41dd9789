//! Root-free grid oracle for `Phi*`, used to cross-check the closed form.
//!
//! The free coordinates are `y_2, ..., y_T`; `y_1` and `y_0` follow from the two
//! linear constraints and grid points where either turns negative are skipped.
//! The search zooms into the best cell until the grid spacing reaches the
//! requested resolution. Every evaluated point is feasible, so the returned
//! value never exceeds the true optimum.

use super::{evaluate_objective, EntropyProblem};
use crate::{Error, Result, Scalar};

/// Grid points evaluated per zoom level.
const POINTS_PER_LEVEL: usize = 20_000;
const MAX_POINTS_PER_DIM: usize = 200_000;

/// Lower-bounds `Phi*` by zooming grid search; `resolution` is the final grid
/// spacing in `y` units and must be at most `1e-2`.
pub fn brute_force_phi_star<S: Scalar>(problem: &EntropyProblem<S>, resolution: S) -> Result<S> {
    problem.validate()?;
    let a = problem.mass;
    let c = problem.moment;
    if !(c > S::zero() && c < problem.max_moment()) {
        return Err(Error::InfeasibleMoment {
            moment: c.to_f64_lossy(),
            max: problem.max_moment().to_f64_lossy(),
            open: true,
        });
    }
    if !(resolution > S::zero() && resolution <= S::lit(1e-2)) {
        return Err(Error::OutOfDomain(format!(
            "oracle resolution {resolution} must lie in (0, 1e-2]"
        )));
    }

    let t = problem.dimension();
    let dims = t - 1;
    let b = &problem.weights;
    let mut y = vec![S::zero(); t + 1];

    let mut eval = |free: &[S]| -> Option<S> {
        let (mut mass, mut moment) = (S::zero(), S::zero());
        for (j, &v) in free.iter().enumerate() {
            let i = j + 2;
            y[i] = v;
            mass += v;
            moment += S::from_index(i) * v;
        }
        let y1 = c - moment;
        let y0 = a - mass - y1;
        if y1 < S::zero() || y0 < S::zero() {
            return None;
        }
        y[0] = y0;
        y[1] = y1;
        evaluate_objective(&y, b).ok()
    };

    if dims == 0 {
        return eval(&[]).ok_or(Error::EmptyFeasibleSet {
            alpha: a.to_f64_lossy(),
            gamma: c.to_f64_lossy(),
        });
    }

    let upper: Vec<S> = (2..=t).map(|i| a.min(c / S::from_index(i))).collect();
    let mut lo = vec![S::zero(); dims];
    let mut hi = upper.clone();
    let mut per_dim = points_per_dim(dims);
    let mut best: Option<(S, Vec<S>)> = None;
    let mut point = vec![S::zero(); dims];

    loop {
        let spacing: Vec<S> = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &h)| (h - l) / S::from_index(per_dim - 1))
            .collect();
        let mut level_best: Option<(S, Vec<S>)> = None;
        let mut idx = vec![0usize; dims];
        'grid: loop {
            for d in 0..dims {
                point[d] = (lo[d] + spacing[d] * S::from_index(idx[d])).min(hi[d]);
            }
            if let Some(v) = eval(&point) {
                if level_best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    level_best = Some((v, point.clone()));
                }
            }
            for i in idx.iter_mut() {
                *i += 1;
                if *i < per_dim {
                    continue 'grid;
                }
                *i = 0;
            }
            break;
        }

        match level_best {
            None if best.is_none() => {
                // Feasible region thinner than the grid: refine the first level.
                if per_dim >= MAX_POINTS_PER_DIM {
                    return Err(Error::EmptyFeasibleSet {
                        alpha: a.to_f64_lossy(),
                        gamma: c.to_f64_lossy(),
                    });
                }
                per_dim = (per_dim * 2).min(MAX_POINTS_PER_DIM);
                continue;
            }
            None => break,
            Some((v, p)) => {
                if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, p));
                }
            }
        }

        let max_spacing = spacing.iter().fold(S::zero(), |m, &s| m.max(s));
        if max_spacing <= resolution {
            break;
        }
        let centre = &best.as_ref().expect("set above").1;
        for d in 0..dims {
            lo[d] = (centre[d] - spacing[d]).max(S::zero());
            hi[d] = (centre[d] + spacing[d]).min(upper[d]);
        }
    }

    Ok(best.expect("at least one feasible grid point").0)
}

fn points_per_dim(dims: usize) -> usize {
    let k = (POINTS_PER_LEVEL as f64).powf(1.0 / dims as f64).floor() as usize;
    k.clamp(5, MAX_POINTS_PER_DIM)
}
