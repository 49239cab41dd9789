use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::MultiGraph;
use crate::{Error, Result};

/// Largest `n` accepted by [`exact_expansion`].
pub const EXACT_LIMIT: usize = 24;

/// Cross-degree histograms of a cut `(S, S_bar)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigurationVector {
    /// `|S|`
    pub k: usize,
    /// Cut size, with multiplicity.
    pub c: usize,
    /// `s[j]` = number of vertices of `S` with cross-degree `j`, for `j` in `0..=delta`.
    pub s: Vec<usize>,
    pub s_bar: Vec<usize>,
}

impl ConfigurationVector {
    pub fn delta(&self) -> usize {
        self.s.len() - 1
    }

    pub fn n(&self) -> usize {
        self.k + self.s_bar.iter().sum::<usize>()
    }

    /// Checks the histogram sums and that both sides see the same cut.
    pub fn is_consistent(&self) -> bool {
        let moment = |v: &[usize]| v.iter().enumerate().map(|(i, x)| i * x).sum::<usize>();
        self.s.len() == self.s_bar.len()
            && !self.s.is_empty()
            && self.s.iter().sum::<usize>() == self.k
            && moment(&self.s) == self.c
            && moment(&self.s_bar) == self.c
    }
}

pub fn configuration_vector(graph: &MultiGraph, subset: &[bool]) -> ConfigurationVector {
    assert_eq!(subset.len(), graph.n(), "subset mask length must equal n");
    let delta = graph.delta();
    let mut s = vec![0usize; delta + 1];
    let mut s_bar = vec![0usize; delta + 1];
    let mut c = 0;
    for v in 0..graph.n() {
        let cross = graph
            .neighbors(v)
            .iter()
            .filter(|&&u| subset[u] != subset[v])
            .count();
        if subset[v] {
            s[cross] += 1;
            c += cross;
        } else {
            s_bar[cross] += 1;
        }
    }
    ConfigurationVector {
        k: subset.iter().filter(|&&m| m).count(),
        c,
        s,
        s_bar,
    }
}

/// `|E(S, S_bar)| / min(|S|, |S_bar|)`.
pub fn set_expansion(graph: &MultiGraph, subset: &[bool]) -> Result<f64> {
    let k = subset.iter().filter(|&&m| m).count();
    if k == 0 || k == graph.n() {
        return Err(Error::EmptyOrFullSet);
    }
    let cv = configuration_vector(graph, subset);
    Ok(cv.c as f64 / k.min(graph.n() - k) as f64)
}

/// Lexicographic objective `(cut / size, size, score)` of a set with
/// `size <= n/2`. Expansion is compared exactly by cross-multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub cut: usize,
    pub size: usize,
    pub score: u64,
}

impl Objective {
    pub fn expansion(&self) -> f64 {
        self.cut as f64 / self.size as f64
    }

    pub fn cmp_expansion(&self, other: &Self) -> Ordering {
        (self.cut as u128 * other.size as u128).cmp(&(other.cut as u128 * self.size as u128))
    }
}

impl Ord for Objective {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_expansion(other)
            .then(self.size.cmp(&other.size))
            .then(self.score.cmp(&other.score))
    }
}

impl PartialOrd for Objective {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Incrementally maintained cut: side membership, cross-degrees, cut size and
/// score of `S` under per-vertex scores.
#[derive(Debug, Clone)]
pub struct CutState<'g> {
    graph: &'g MultiGraph,
    side: Vec<bool>,
    cross: Vec<usize>,
    scores: Vec<u64>,
    total_score: u64,
    cut: usize,
    size: usize,
    score: u64,
}

impl<'g> CutState<'g> {
    pub fn new(graph: &'g MultiGraph, subset: &[bool], scores: Vec<u64>) -> Self {
        assert_eq!(subset.len(), graph.n());
        assert_eq!(scores.len(), graph.n());
        let cross: Vec<usize> = (0..graph.n())
            .map(|v| {
                graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| subset[u] != subset[v])
                    .count()
            })
            .collect();
        let cut = (0..graph.n())
            .filter(|&v| subset[v])
            .map(|v| cross[v])
            .sum();
        let size = subset.iter().filter(|&&m| m).count();
        let score = (0..graph.n())
            .filter(|&v| subset[v])
            .map(|v| scores[v])
            .sum();
        let total_score = scores.iter().sum();
        Self {
            graph,
            side: subset.to_vec(),
            cross,
            scores,
            total_score,
            cut,
            size,
            score,
        }
    }

    pub fn graph(&self) -> &'g MultiGraph {
        self.graph
    }

    pub fn in_subset(&self, v: usize) -> bool {
        self.side[v]
    }

    pub fn subset(&self) -> &[bool] {
        &self.side
    }

    pub fn cross_degree(&self, v: usize) -> usize {
        self.cross[v]
    }

    pub fn score_of(&self, v: usize) -> u64 {
        self.scores[v]
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn score(&self) -> u64 {
        self.score
    }

    /// Moves `v` to the other side.
    pub fn flip(&mut self, v: usize) {
        let old_side = self.side[v];
        let mut non_self = 0usize;
        for &u in self.graph.neighbors(v) {
            if u == v {
                continue;
            }
            non_self += 1;
            // Before the flip u crosses to v iff sides differ; afterwards the opposite.
            if self.side[u] == old_side {
                self.cross[u] += 1;
            } else {
                self.cross[u] -= 1;
            }
        }
        let old_cross = self.cross[v];
        self.cut = self.cut + non_self - 2 * old_cross;
        self.cross[v] = non_self - old_cross;
        self.side[v] = !old_side;
        if old_side {
            self.size -= 1;
            self.score -= self.scores[v];
        } else {
            self.size += 1;
            self.score += self.scores[v];
        }
    }

    /// Raw objective of `S` itself (no side normalisation).
    pub fn raw_objective(&self) -> Objective {
        Objective {
            cut: self.cut,
            size: self.size,
            score: self.score,
        }
    }

    fn complement_objective(&self) -> Objective {
        Objective {
            cut: self.cut,
            size: self.graph.n() - self.size,
            score: self.total_score - self.score,
        }
    }

    /// Objective of whichever side is preferred: the smaller one, or at a
    /// bisection the one with the smaller score. `None` for trivial cuts.
    pub fn objective(&self) -> Option<Objective> {
        let n = self.graph.n();
        if self.size == 0 || self.size == n {
            return None;
        }
        let raw = self.raw_objective();
        let comp = self.complement_objective();
        Some(match (2 * self.size).cmp(&n) {
            Ordering::Less => raw,
            Ordering::Greater => comp,
            Ordering::Equal => raw.min(comp),
        })
    }

    /// Swaps sides wholesale if the complement is the preferred side.
    pub fn normalize(&mut self) {
        if let Some(best) = self.objective() {
            if best != self.raw_objective() {
                for s in self.side.iter_mut() {
                    *s = !*s;
                }
                self.size = self.graph.n() - self.size;
                self.score = self.total_score - self.score;
            }
        }
    }
}

/// Minimum expansion over all `S` with `1 <= |S| <= n/2`, with the witness that is
/// smallest under `(expansion, |S|, sum of v+1)`. Enumerates subsets in Gray-code
/// order with O(delta) incremental updates.
pub fn exact_expansion(graph: &MultiGraph) -> Result<(f64, Vec<bool>)> {
    let n = graph.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::EmptyOrFullSet);
    }
    let identity: Vec<u64> = (1..=n as u64).collect();
    let mut state = CutState::new(graph, &vec![false; n], identity);
    let mut best: Option<(Objective, u32)> = None;
    let mut mask: u32 = 0;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        state.flip(v);
        mask ^= 1 << v;
        let size = state.size();
        if size == 0 || 2 * size > n {
            continue;
        }
        let obj = state.raw_objective();
        if best.is_none_or(|(b, _)| obj < b) {
            best = Some((obj, mask));
        }
    }
    let (obj, mask) = best.expect("n >= 2 has a nontrivial subset");
    let witness = (0..n).map(|v| mask & (1 << v) != 0).collect();
    Ok((obj.expansion(), witness))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::pairing::{mask_from, sample_pairing};

    fn cycle4() -> MultiGraph {
        MultiGraph::from_edges(4, 2, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn k5() -> MultiGraph {
        let edges: Vec<_> = (0..5)
            .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
            .collect();
        MultiGraph::from_edges(5, 4, &edges).unwrap()
    }

    #[test]
    fn trivial_subsets() {
        let g = sample_pairing(6, 4, 1).unwrap();
        let cv = configuration_vector(&g, &[false; 6]);
        assert_eq!(cv.k, 0);
        assert_eq!(cv.c, 0);
        assert_eq!(cv.s, vec![0; 5]);
        assert_eq!(cv.s_bar[0], 6);
        let full = configuration_vector(&g, &[true; 6]);
        assert_eq!(full.s, cv.s_bar);
        assert_eq!(full.s_bar, cv.s);
    }

    #[test]
    fn cycle_cut_by_hand() {
        let g = cycle4();
        let cv = configuration_vector(&g, &mask_from(4, &[0, 1]));
        assert_eq!(cv.c, 2);
        assert_eq!(cv.s, vec![0, 2, 0]);
        assert_eq!(cv.s_bar, vec![0, 2, 0]);
        let (iota, witness) = exact_expansion(&g).unwrap();
        assert_eq!(iota, 1.0);
        assert_eq!(set_expansion(&g, &witness).unwrap(), 1.0);
    }

    #[test]
    fn complete_graph_expansion() {
        let g = k5();
        assert_eq!(set_expansion(&g, &mask_from(5, &[1, 3])).unwrap(), 3.0);
        let (iota, witness) = exact_expansion(&g).unwrap();
        assert_eq!(iota, 3.0);
        // Tie-break: smallest size, then smallest score -> {0, 1}.
        assert_eq!(witness, mask_from(5, &[0, 1]));
    }

    #[test]
    fn disconnected_graph_has_zero_expansion() {
        // Two disjoint 5-vertex 4-regular components.
        let mut edges = Vec::new();
        for base in [0, 5] {
            for u in 0..5 {
                for v in (u + 1)..5 {
                    edges.push((base + u, base + v));
                }
            }
        }
        let g = MultiGraph::from_edges(10, 4, &edges).unwrap();
        assert_eq!(
            set_expansion(&g, &mask_from(10, &[0, 1, 2, 3, 4])).unwrap(),
            0.0
        );
        assert_eq!(exact_expansion(&g).unwrap().0, 0.0);
    }

    #[test]
    fn two_vertex_multigraphs() {
        // Exhaust the 7!! = 105 matchings of 8 half-edges at n = 2, delta = 4:
        // the cut counts the parallel edges between the vertices.
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..400 {
            let g = sample_pairing(2, 4, seed).unwrap();
            let (iota, _) = exact_expansion(&g).unwrap();
            let between = g.multiplicity(0, 1);
            assert_eq!(iota, between as f64);
            seen.insert(between);
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![0, 2, 4]);
    }

    #[test]
    fn flip_tracks_cut() {
        let g = sample_pairing(16, 6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut state = CutState::new(&g, &[false; 16], (1..=16).collect());
        for _ in 0..200 {
            state.flip(rng.random_range(0..16));
            let cv = configuration_vector(&g, state.subset());
            assert_eq!(state.cut(), cv.c);
            assert_eq!(state.size(), cv.k);
            // Parity: delta k - c counts half-edges matched inside S.
            assert_eq!((6 * cv.k - cv.c) % 2, 0);
            for v in 0..16 {
                let direct = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| state.in_subset(u) != state.in_subset(v))
                    .count();
                assert_eq!(state.cross_degree(v), direct);
            }
        }
    }

    #[test]
    fn cut_is_symmetric() {
        let g = sample_pairing(12, 4, 9).unwrap();
        let s = mask_from(12, &[0, 3, 4, 9]);
        let comp: Vec<bool> = s.iter().map(|m| !m).collect();
        assert_eq!(
            configuration_vector(&g, &s).c,
            configuration_vector(&g, &comp).c
        );
        assert_eq!(
            set_expansion(&g, &s).unwrap(),
            set_expansion(&g, &comp).unwrap()
        );
    }

    #[test]
    fn guards() {
        let g = sample_pairing(26, 2, 0).unwrap();
        assert_eq!(
            exact_expansion(&g),
            Err(Error::TooLarge {
                n: 26,
                limit: EXACT_LIMIT
            })
        );
        assert_eq!(set_expansion(&g, &[false; 26]), Err(Error::EmptyOrFullSet));
    }

    #[test]
    fn exact_matches_naive_enumeration() {
        for seed in 0..5 {
            let g = sample_pairing(10, 4, seed).unwrap();
            let mut best = f64::INFINITY;
            for m in 1u32..(1 << 10) - 1 {
                let mask: Vec<bool> = (0..10).map(|v| m & (1 << v) != 0).collect();
                best = best.min(set_expansion(&g, &mask).unwrap());
            }
            assert_eq!(exact_expansion(&g).unwrap().0, best);
        }
    }
}
