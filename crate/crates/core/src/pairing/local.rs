use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cut::{ConfigurationVector, CutState, Objective};
use super::MultiGraph;
use crate::{Error, Result};

/// A permutation `pi` of the vertices; the score of `S` is `sum_{v in S} pi(v)`
/// with `pi(v)` in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreOrder {
    pi: Vec<u64>,
}

impl ScoreOrder {
    pub fn identity(n: usize) -> Self {
        Self {
            pi: (1..=n as u64).collect(),
        }
    }

    /// Seeded Fisher-Yates permutation.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut pi: Vec<u64> = (1..=n as u64).collect();
        pi.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self { pi }
    }

    pub fn from_values(pi: Vec<u64>) -> Result<Self> {
        let n = pi.len() as u64;
        let mut seen = vec![false; pi.len()];
        for &p in &pi {
            if p == 0 || p > n || std::mem::replace(&mut seen[(p - 1) as usize], true) {
                return Err(Error::OutOfDomain(format!(
                    "{pi:?} is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(Self { pi })
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn value(&self, v: usize) -> u64 {
        self.pi[v]
    }

    pub fn score(&self, subset: &[bool]) -> u64 {
        subset
            .iter()
            .zip(&self.pi)
            .filter(|(m, _)| **m)
            .map(|(_, p)| p)
            .sum()
    }
}

/// `s_j = s_bar_j = 0` for `j > delta/2`, and `s_bar_{delta/2} = 0` when `k < n/2`.
pub fn u_local_membership(cv: &ConfigurationVector, n: usize) -> bool {
    let half = cv.delta() / 2;
    let no_high = cv.s.iter().chain(&cv.s_bar).enumerate().all(|(idx, &x)| {
        let j = idx % (cv.delta() + 1);
        j <= half || x == 0
    });
    no_high && (2 * cv.k >= n || cv.s_bar[half] == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// A vertex with cross-degree above `delta/2` changes side.
    HighCrossDegree,
    /// A vertex of the larger side with cross-degree exactly `delta/2` joins the
    /// smaller side while `|S| < n/2`.
    HalfCrossDegree,
    /// Exchange of non-adjacent cross-degree-`delta/2` vertices that lowers the score.
    ScoreSwap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub vertices: Vec<usize>,
    pub before: Objective,
    pub after: Objective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSearchOutcome {
    pub expansion: f64,
    /// The preferred side (`|S| <= n/2`) of the final cut.
    pub subset: Vec<bool>,
    pub objective: Objective,
    pub moves: Vec<MoveRecord>,
}

/// Improves `start` by single-vertex moves and score-reducing swaps until none
/// strictly lowers `(expansion, |S|, score)`. The result upper-bounds `iota(G)`.
pub fn local_search_expansion(
    graph: &MultiGraph,
    order: &ScoreOrder,
    start: &[bool],
) -> Result<LocalSearchOutcome> {
    let n = graph.n();
    if order.len() != n || start.len() != n {
        return Err(Error::LengthMismatch {
            left: start.len(),
            right: n,
        });
    }
    let k = start.iter().filter(|&&m| m).count();
    if k == 0 || k == n {
        return Err(Error::EmptyOrFullSet);
    }
    let half = graph.delta() / 2;
    let mut state = CutState::new(graph, start, order.pi.clone());
    state.normalize();
    let mut moves = Vec::new();

    loop {
        let before = state.objective().expect("nontrivial cut");
        let mut applied = None;

        // Single-vertex moves: high cross-degree on either side, or a larger-side
        // vertex with cross-degree delta/2 while the cut is unbalanced.
        for v in 0..n {
            let cross = state.cross_degree(v);
            let kind = if cross > half {
                MoveKind::HighCrossDegree
            } else if cross == half && !state.in_subset(v) && 2 * state.size() < n {
                MoveKind::HalfCrossDegree
            } else {
                continue;
            };
            state.flip(v);
            match state.objective() {
                Some(after) if after < before => {
                    applied = Some(MoveRecord {
                        kind,
                        vertices: vec![v],
                        before,
                        after,
                    });
                    break;
                }
                _ => state.flip(v),
            }
        }

        if applied.is_none() {
            applied = try_score_swap(&mut state, order, half, before);
        }

        match applied {
            Some(record) => {
                state.normalize();
                moves.push(record);
            }
            None => break,
        }
    }

    let objective = state.objective().expect("nontrivial cut");
    Ok(LocalSearchOutcome {
        expansion: objective.expansion(),
        subset: state.subset().to_vec(),
        objective,
        moves,
    })
}

/// Tries `v in S_{delta/2}`, `w in S_bar_{delta/2}`, non-adjacent, `pi(w) < pi(v)`:
/// the cut is unchanged and the score drops. Candidates are scanned with `w` by
/// increasing score and `v` by decreasing score.
fn try_score_swap(
    state: &mut CutState<'_>,
    order: &ScoreOrder,
    half: usize,
    before: Objective,
) -> Option<MoveRecord> {
    let n = state.graph().n();
    let mut inside: Vec<usize> = (0..n)
        .filter(|&v| state.in_subset(v) && state.cross_degree(v) == half)
        .collect();
    let mut outside: Vec<usize> = (0..n)
        .filter(|&v| !state.in_subset(v) && state.cross_degree(v) == half)
        .collect();
    inside.sort_by_key(|&v| std::cmp::Reverse(order.value(v)));
    outside.sort_by_key(|&v| order.value(v));
    for &w in &outside {
        for &v in &inside {
            if order.value(v) <= order.value(w) {
                break;
            }
            if state.graph().multiplicity(v, w) > 0 {
                continue;
            }
            state.flip(v);
            state.flip(w);
            match state.objective() {
                Some(after) if after < before => {
                    return Some(MoveRecord {
                        kind: MoveKind::ScoreSwap,
                        vertices: vec![v, w],
                        before,
                        after,
                    });
                }
                _ => {
                    state.flip(w);
                    state.flip(v);
                }
            }
        }
    }
    None
}
