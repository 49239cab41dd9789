//! Closed-form solution of the mean-constrained relative-entropy problem
//!
//! ```text
//! Phi*(a, c, b) = max  sum_i y_i ln(b_i / y_i)
//!                 s.t. sum_i y_i = a,  sum_i i*y_i = c,  y >= 0
//! ```
//!
//! over the index set `{0, ..., T}`. In the interior regime `0 < c < a*T` the
//! optimum is the exponential tilt `y_i = b_i a z^i / Z(z)` where `Z(z) = sum b_i z^i`
//! and `z` is the unique positive root of `sum_i (a*i - c) b_i z^i`. The
//! coefficient sequence of that polynomial changes sign exactly once, so the
//! root can be bracketed and bisected without any risk of missing it.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::{Error, Result, Scalar};

/// Lower end of the root bracket.
const BRACKET_LO: f64 = 1e-18;
/// Bisection stops once `hi - lo <= BISECTION_REL_WIDTH * hi`.
const BISECTION_REL_WIDTH: f64 = 1e-14;
const NEWTON_POLISH_STEPS: usize = 3;
const MAX_BISECTION_STEPS: usize = 4096;

/// An instance of the constrained entropy problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProblem<S> {
    /// Weights `b_0, ..., b_T`, all strictly positive.
    pub weights: Vec<S>,
    /// Total mass `a`.
    pub mass: S,
    /// First moment `c`.
    pub moment: S,
}

/// Optimal point of an [`EntropyProblem`] together with its Lagrange multipliers.
///
/// `z_star`, `lambda` and `mu` are absent for the boundary moments `c = 0` and
/// `c = a*T`, where the optimum is a point mass and the multipliers diverge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySolution<S> {
    pub y_star: Vec<S>,
    pub z_star: Option<S>,
    pub objective: S,
    pub lambda: Option<S>,
    pub mu: Option<S>,
}

/// Which part of the feasible moment range a problem sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Interior,
    LowerBoundary,
    UpperBoundary,
}

impl<S: Scalar> EntropyProblem<S> {
    /// Builds a problem, checking `T >= 1`, positive weights and a positive mass.
    /// The moment is only range-checked by the solving operations.
    pub fn new(weights: Vec<S>, mass: S, moment: S) -> Result<Self> {
        let problem = Self {
            weights,
            mass,
            moment,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// `T`, the largest index.
    pub fn dimension(&self) -> usize {
        self.weights.len().saturating_sub(1)
    }

    /// `a*T`, the largest feasible moment.
    pub fn max_moment(&self) -> S {
        self.mass * S::from_index(self.dimension())
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.len() < 2 {
            return Err(Error::DegenerateDimension);
        }
        if let Some((i, w)) = self
            .weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > S::zero()))
        {
            return Err(Error::InvalidProblem(format!(
                "weight b_{i} = {w} is not positive"
            )));
        }
        if !(self.mass.is_finite() && self.mass > S::zero()) {
            return Err(Error::InvalidProblem(format!(
                "mass {} is not positive",
                self.mass
            )));
        }
        if !self.moment.is_finite() {
            return Err(Error::InvalidProblem("moment is not finite".into()));
        }
        Ok(())
    }

    /// Classifies the moment, rejecting `c < 0` and `c > a*T`.
    pub fn regime(&self) -> Result<Regime> {
        self.validate()?;
        let max = self.max_moment();
        if self.moment < S::zero() || self.moment > max {
            return Err(self.infeasible(false));
        }
        Ok(if self.moment == S::zero() {
            Regime::LowerBoundary
        } else if self.moment == max {
            Regime::UpperBoundary
        } else {
            Regime::Interior
        })
    }

    /// The root polynomial `P(z) = sum_i (a*i - c) b_i z^i`.
    pub fn root_polynomial(&self) -> Poly<S> {
        Poly::new(
            self.weights
                .iter()
                .enumerate()
                .map(|(i, &b)| (self.mass * S::from_index(i) - self.moment) * b)
                .collect(),
        )
    }

    /// The partition function `Z(z) = sum_i b_i z^i`.
    pub fn partition(&self, z: S) -> S {
        self.weights
            .iter()
            .rev()
            .fold(S::zero(), |acc, &b| acc * z + b)
    }

    fn infeasible(&self, open: bool) -> Error {
        Error::InfeasibleMoment {
            moment: self.moment.to_f64_lossy(),
            max: self.max_moment().to_f64_lossy(),
            open,
        }
    }

    fn require_interior(&self) -> Result<()> {
        self.validate()?;
        if !(self.moment > S::zero() && self.moment < self.max_moment()) {
            return Err(self.infeasible(true));
        }
        Ok(())
    }
}

/// The unique positive root `z*` of `sum_i (a*i - c) b_i z^i`.
///
/// Requires the interior regime `0 < c < a*T`.
pub fn root_z_star<S: Scalar>(problem: &EntropyProblem<S>) -> Result<S> {
    problem.require_interior()?;
    let p = problem.root_polynomial();
    Ok(positive_root(&p))
}

/// Finds the single positive root of a polynomial with `p(0) < 0` and a positive
/// leading coefficient: doubling bracket, bisection, then safeguarded Newton.
fn positive_root<S: Scalar>(p: &Poly<S>) -> S {
    let rel_width = S::lit(BISECTION_REL_WIDTH).max(S::epsilon() * S::lit(4.0));
    let mut lo = S::lit(BRACKET_LO);
    let mut hi = S::one();
    if p.eval_scaled(lo) >= S::zero() {
        hi = lo;
        lo = S::zero();
    } else {
        while p.eval_scaled(hi) <= S::zero() {
            lo = hi;
            hi = hi + hi;
        }
    }

    let two = S::lit(2.0);
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= rel_width * hi {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if p.eval_scaled(mid) > S::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let dp = p.derivative();
    let mut z = (lo + hi) / two;
    for _ in 0..NEWTON_POLISH_STEPS {
        let value = p.eval(z);
        let slope = dp.eval(z);
        if value == S::zero() || slope <= S::zero() {
            break;
        }
        let next = z - value / slope;
        // Keep the step inside the certified bracket and only accept progress.
        if !(next >= lo && next <= hi) || p.eval(next).abs() >= value.abs() {
            break;
        }
        z = next;
    }
    z
}

/// `sum_i y_i ln(b_i / y_i)` with `0 ln(b/0) = 0`.
pub fn evaluate_objective<S: Scalar>(y: &[S], b: &[S]) -> Result<S> {
    if y.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: b.len(),
        });
    }
    Ok(y.iter()
        .zip(b)
        .filter(|(yi, _)| **yi > S::zero())
        .fold(S::zero(), |acc, (&yi, &bi)| acc + yi * (bi / yi).ln()))
}

/// Solves the problem in closed form. Boundary moments return point masses.
pub fn solve_entropy<S: Scalar>(problem: &EntropyProblem<S>) -> Result<EntropySolution<S>> {
    let t = problem.dimension();
    let a = problem.mass;
    match problem.regime()? {
        Regime::LowerBoundary => Ok(point_mass(problem, 0)),
        Regime::UpperBoundary => Ok(point_mass(problem, t)),
        Regime::Interior => {
            let z = positive_root(&problem.root_polynomial());
            let partition = problem.partition(z);
            let mut y_star = Vec::with_capacity(t + 1);
            let mut power = S::one();
            for &b in &problem.weights {
                y_star.push(b * a * power / partition);
                power *= z;
            }
            let log_z = z.ln();
            let log_ratio = (partition / a).ln();
            // At the optimum ln(b_i / y_i) = ln(Z/a) - i ln z, so the objective
            // collapses to a ln(Z/a) - c ln z using the two constraints.
            let objective = a * log_ratio - problem.moment * log_z;
            Ok(EntropySolution {
                y_star,
                z_star: Some(z),
                objective,
                lambda: Some(log_ratio - S::one()),
                mu: Some(-log_z),
            })
        }
    }
}

fn point_mass<S: Scalar>(problem: &EntropyProblem<S>, at: usize) -> EntropySolution<S> {
    let a = problem.mass;
    let mut y_star = vec![S::zero(); problem.weights.len()];
    y_star[at] = a;
    EntropySolution {
        y_star,
        z_star: None,
        objective: a * (problem.weights[at] / a).ln(),
        lambda: None,
        mu: None,
    }
}

/// `Phi*` alone. Same contract as [`solve_entropy`].
pub fn phi_star<S: Scalar>(problem: &EntropyProblem<S>) -> Result<S> {
    solve_entropy(problem).map(|s| s.objective)
}

/// Sensitivity `dPhi*/dc = -ln z*` (envelope theorem); interior regime only.
pub fn phi_star_derivative_c<S: Scalar>(problem: &EntropyProblem<S>) -> Result<S> {
    root_z_star(problem).map(|z| -z.ln())
}
