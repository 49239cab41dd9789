//! Pairing-model simulation: sampling, cuts, exact and heuristic expansion,
//! the configuration-vector probability formula and the tie-breaking probabilities.
//!
//! Graphs are multigraphs. Cross-degrees and cuts count edges with
//! multiplicity and self-loops never cross a cut.

mod counting;
mod cut;
mod local;

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use counting::{
    configuration_probability, enumerate_configuration_vectors, lex_bound,
    ordering_count_brute_force, ordering_probability, LogFactorials,
};
pub use cut::{
    configuration_vector, exact_expansion, set_expansion, ConfigurationVector, CutState, Objective,
    EXACT_LIMIT,
};
pub use local::{
    local_search_expansion, u_local_membership, LocalSearchOutcome, MoveKind, MoveRecord,
    ScoreOrder,
};

/// Half-edge `(vertex, slot)` with `slot < delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfEdge {
    pub vertex: usize,
    pub slot: usize,
}

/// A delta-regular multigraph given by a perfect matching of half-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    n: usize,
    delta: usize,
    seed: Option<u64>,
    matching: Vec<(HalfEdge, HalfEdge)>,
    /// Per-vertex neighbour multiset; a self-loop contributes the vertex twice.
    adjacency: Vec<Vec<usize>>,
}

impl MultiGraph {
    /// Builds a graph from a perfect matching over `[n] x [delta]`.
    pub fn from_matching(
        n: usize,
        delta: usize,
        matching: Vec<(HalfEdge, HalfEdge)>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if n == 0 || delta == 0 {
            return Err(Error::InvalidGraph("n and delta must be positive".into()));
        }
        let mut seen = vec![false; n * delta];
        let mut adjacency = vec![Vec::with_capacity(delta); n];
        for &(a, b) in &matching {
            for h in [a, b] {
                if h.vertex >= n || h.slot >= delta {
                    return Err(Error::InvalidGraph(format!("half-edge {h:?} out of range")));
                }
                let idx = h.vertex * delta + h.slot;
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(Error::InvalidGraph(format!("half-edge {h:?} used twice")));
                }
            }
            adjacency[a.vertex].push(b.vertex);
            adjacency[b.vertex].push(a.vertex);
        }
        if let Some(idx) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!(
                "half-edge ({}, {}) is unmatched",
                idx / delta,
                idx % delta
            )));
        }
        Ok(Self {
            n,
            delta,
            seed,
            matching,
            adjacency,
        })
    }

    /// Builds a graph from an edge list, assigning slots in order of appearance.
    /// Every vertex must end up with degree exactly `delta`; `n` may be odd here.
    pub fn from_edges(n: usize, delta: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut next = vec![0usize; n];
        let mut matching = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            let mut take = |w: usize| -> Result<HalfEdge> {
                let slot = next[w];
                if slot >= delta {
                    return Err(Error::InvalidGraph(format!(
                        "vertex {w} exceeds degree {delta}"
                    )));
                }
                next[w] += 1;
                Ok(HalfEdge { vertex: w, slot })
            };
            let a = take(u)?;
            let b = take(v)?;
            matching.push((a, b));
        }
        Self::from_matching(n, delta, matching, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn matching(&self) -> &[(HalfEdge, HalfEdge)] {
        &self.matching
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Number of edges between `u` and `v` (self-loops count once).
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let hits = self.adjacency[u].iter().filter(|&&w| w == v).count();
        if u == v {
            hits / 2
        } else {
            hits
        }
    }

    /// Edges as `(min, max)` pairs, sorted; the canonical form for comparisons.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<_> = self
            .matching
            .iter()
            .map(|(a, b)| (a.vertex.min(b.vertex), a.vertex.max(b.vertex)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Same vertex count, degree and edge multiset.
    pub fn same_graph(&self, other: &MultiGraph) -> bool {
        self.n == other.n
            && self.delta == other.delta
            && self.canonical_edges() == other.canonical_edges()
    }

    /// Serialises to the edge-list format: a header `n delta seed` (seed `-` when
    /// unknown) followed by one `u v` line per edge in matching order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        match self.seed {
            Some(s) => writeln!(out, "{} {} {}", self.n, self.delta, s),
            None => writeln!(out, "{} {} -", self.n, self.delta),
        }
        .expect("writing to a String");
        for (a, b) in &self.matching {
            writeln!(out, "{} {}", a.vertex, b.vertex).expect("writing to a String");
        }
        out
    }

    /// Parses the format written by [`MultiGraph::to_edge_list`]. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: "header must be `n delta seed`".into(),
            });
        }
        let num = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line,
                msg: format!("bad {what} {s:?}: {e}"),
            })
        };
        let n = num(fields[0], "n")?;
        let delta = num(fields[1], "delta")?;
        let seed = match fields[2] {
            "-" => None,
            s => Some(s.parse::<u64>().map_err(|e| Error::Parse {
                line,
                msg: format!("bad seed: {e}"),
            })?),
        };
        let mut edges = Vec::new();
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or(Error::Parse {
                        line,
                        msg: "expected `u v`".into(),
                    })?
                    .parse()
                    .map_err(|e| Error::Parse {
                        line,
                        msg: format!("bad vertex: {e}"),
                    })
            };
            edges.push((next()?, next()?));
            if it.next().is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "trailing fields".into(),
                });
            }
        }
        let mut g = Self::from_edges(n, delta, &edges)?;
        g.seed = seed;
        Ok(g)
    }
}

/// Samples `P(n, delta)`: Fisher-Yates shuffle of the `n delta` half-edges,
/// paired off consecutively. Deterministic per seed.
pub fn sample_pairing(n: usize, delta: usize, seed: u64) -> Result<MultiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_pairing_with(n, delta, &mut rng, Some(seed))
}

/// As [`sample_pairing`] but drawing from a caller-supplied generator.
pub fn sample_pairing_with<R: rand::Rng + ?Sized>(
    n: usize,
    delta: usize,
    rng: &mut R,
    seed: Option<u64>,
) -> Result<MultiGraph> {
    if n == 0 || delta == 0 || !n.is_multiple_of(2) || !delta.is_multiple_of(2) {
        return Err(Error::InvalidParity { n, delta });
    }
    let mut half_edges: Vec<HalfEdge> = (0..n)
        .flat_map(|vertex| (0..delta).map(move |slot| HalfEdge { vertex, slot }))
        .collect();
    half_edges.shuffle(rng);
    let matching = half_edges.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    MultiGraph::from_matching(n, delta, matching, seed)
}

/// Membership mask of length `n` from a vertex list.
pub fn mask_from(n: usize, members: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in members {
        mask[v] = true;
    }
    mask
}

/// Vertices of a membership mask.
pub fn members(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(v, &m)| m.then_some(v))
        .collect()
}
