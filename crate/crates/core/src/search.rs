//! Exact combinatorial solvers: maximum clique and independent set,
//! k-colourability and chromatic number, homomorphism existence, odd girth.
//!
//! Every solver runs under a [`SearchBudget`]. Running out of budget yields
//! an inconclusive outcome carrying whatever valid partial information was
//! found; it never produces a wrong answer.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::graph::{or_power, Graph};
use crate::iso::is_complementing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("permutation is not a complementing permutation of the graph")]
    NotComplementing,
    #[error("clique witness failed verification")]
    WitnessRejected,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn seconds(secs: f64) -> Self {
        SearchBudget {
            max_nodes: None,
            max_time: Some(Duration::from_secs_f64(secs)),
        }
    }
}

struct Meter {
    start: Instant,
    budget: SearchBudget,
    nodes: u64,
    exhausted: bool,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter {
            start: Instant::now(),
            budget,
            nodes: 0,
            exhausted: false,
        }
    }

    /// Counts one search node; false once the budget is spent.
    #[inline]
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if let Some(limit) = self.budget.max_nodes {
            if self.nodes > limit {
                self.exhausted = true;
            }
        }
        if let Some(limit) = self.budget.max_time {
            if self.nodes % 1024 == 0 && self.start.elapsed() > limit {
                self.exhausted = true;
            }
        }
        !self.exhausted
    }
}

/// Outcome of a decision search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision<T> {
    Found(T),
    Refuted,
    Inconclusive,
}

impl<T> Decision<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Decision::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Decision::Refuted)
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Decision::Inconclusive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliqueResult {
    pub size: usize,
    pub witness: Vec<usize>,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
}

/// Pairwise adjacency check, independent of the search code.
pub fn verify_clique(g: &Graph, vertices: &[usize]) -> bool {
    vertices.iter().all(|&v| v < g.n())
        && vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..].iter().all(|&v| u != v && g.has_edge(u, v))
        })
}

pub fn verify_independent_set(g: &Graph, vertices: &[usize]) -> bool {
    vertices.iter().all(|&v| v < g.n())
        && vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..].iter().all(|&v| u != v && !g.has_edge(u, v))
        })
}

pub fn verify_coloring(g: &Graph, colors: &[usize], k: usize) -> bool {
    colors.len() == g.n()
        && colors.iter().all(|&c| c < k)
        && g.edges().into_iter().all(|(u, v)| colors[u] != colors[v])
}

/// Vertices ordered densest-core first: the reverse of a smallest-last
/// elimination, ties broken by index.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg = g.degrees();
    let mut removed = vec![false; n];
    let mut elim = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        removed[v] = true;
        elim.push(v);
        for w in g.neighbors(v).iter() {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    elim.reverse();
    elim
}

struct CliqueSearch {
    adj: Vec<BitSet>,
    order: Vec<usize>,
    rank: Vec<usize>,
}

struct CliqueRun<'a> {
    s: &'a CliqueSearch,
    meter: Meter,
    best: Vec<usize>,
    threshold: usize,
    stop_at: Option<usize>,
    done: bool,
}

impl CliqueSearch {
    fn new(g: &Graph) -> Self {
        let order = degeneracy_order(g);
        let n = g.n();
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let adj = order
            .iter()
            .map(|&v| BitSet::from_indices(n, g.neighbors(v).iter().map(|w| rank[w])))
            .collect();
        CliqueSearch { adj, order, rank }
    }

    fn to_internal(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(set.capacity(), set.iter().map(|v| self.rank[v]))
    }

    fn to_external(&self, clique: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = clique.iter().map(|&i| self.order[i]).collect();
        out.sort_unstable();
        out
    }

    /// Best clique inside `cand` (external indices). Returns the clique found
    /// and whether the search completed.
    fn run(
        &self,
        cand: &BitSet,
        threshold: usize,
        stop_at: Option<usize>,
        budget: SearchBudget,
    ) -> (Vec<usize>, bool, u64) {
        let mut run = CliqueRun {
            s: self,
            meter: Meter::new(budget),
            best: Vec::new(),
            threshold,
            stop_at,
            done: false,
        };
        let p = self.to_internal(cand);
        if !p.is_empty() {
            run.expand(&mut Vec::new(), p);
        }
        let complete = !run.meter.exhausted;
        (self.to_external(&run.best), complete, run.meter.nodes)
    }
}

impl CliqueRun<'_> {
    fn bound(&self) -> usize {
        self.best.len().max(self.threshold)
    }

    /// Greedy sequential colouring of `p`; returns (vertex, colour) pairs in
    /// non-decreasing colour order.
    fn color_sort(&self, p: &BitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.count());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.difference_with(&self.s.adj[v]);
                uncolored.remove(v);
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut p: BitSet) {
        if !self.meter.tick() {
            return;
        }
        let colored = self.color_sort(&p);
        for &(v, c) in colored.iter().rev() {
            if current.len() + c <= self.bound() {
                return;
            }
            current.push(v);
            let next = p.intersection(&self.s.adj[v]);
            if next.is_empty() {
                if current.len() > self.bound() {
                    self.best = current.clone();
                    if self.stop_at.is_some_and(|s| self.best.len() >= s) {
                        self.done = true;
                    }
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            p.remove(v);
            if self.done || self.meter.exhausted {
                return;
            }
        }
    }
}

/// Maximum clique; the witness is the lexicographically least maximum clique.
pub fn max_clique(g: &Graph, budget: SearchBudget) -> CliqueResult {
    max_clique_with(g, budget, true)
}

/// Maximum clique with optional witness canonicalisation. The reported size
/// does not depend on `deterministic`.
pub fn max_clique_with(g: &Graph, budget: SearchBudget, deterministic: bool) -> CliqueResult {
    let n = g.n();
    if n == 0 {
        return CliqueResult {
            size: 0,
            witness: Vec::new(),
            nodes_explored: 0,
            proven_optimal: true,
        };
    }
    let search = CliqueSearch::new(g);
    let all = BitSet::full(n);
    let (mut witness, complete, mut nodes) = search.run(&all, 0, None, budget);
    if complete && deterministic {
        if let Some((lex, extra)) = lex_least_clique(&search, g, witness.len(), budget) {
            witness = lex;
            nodes += extra;
        }
    }
    debug_assert!(verify_clique(g, &witness));
    CliqueResult {
        size: witness.len(),
        witness,
        nodes_explored: nodes,
        proven_optimal: complete,
    }
}

/// Greedy extraction of the lexicographically least clique of size `omega`,
/// one existence query per candidate vertex.
fn lex_least_clique(
    search: &CliqueSearch,
    g: &Graph,
    omega: usize,
    budget: SearchBudget,
) -> Option<(Vec<usize>, u64)> {
    let mut chosen = Vec::with_capacity(omega);
    let mut cand = BitSet::full(g.n());
    let mut nodes = 0;
    for v in 0..g.n() {
        if chosen.len() == omega {
            break;
        }
        if !cand.contains(v) {
            continue;
        }
        let need = omega - chosen.len() - 1;
        let mut rest = cand.intersection(g.neighbors(v));
        // later vertices only, so the choice is lexicographic
        for w in 0..=v {
            rest.remove(w);
        }
        let ok = if need == 0 {
            true
        } else {
            let (c, complete, used) = search.run(&rest, need - 1, Some(need), budget);
            nodes += used;
            if !complete && c.len() < need {
                return None;
            }
            c.len() >= need
        };
        if ok {
            chosen.push(v);
            cand = rest;
        }
    }
    (chosen.len() == omega).then_some((chosen, nodes))
}

pub fn max_independent_set(g: &Graph, budget: SearchBudget) -> CliqueResult {
    max_clique(&g.complement(), budget)
}

/// Whether a clique of size at least `size` exists.
pub fn has_clique_of_size(g: &Graph, size: usize, budget: SearchBudget) -> Decision<Vec<usize>> {
    if size == 0 {
        return Decision::Found(Vec::new());
    }
    let search = CliqueSearch::new(g);
    let (c, complete, _) = search.run(&BitSet::full(g.n()), size - 1, Some(size), budget);
    if c.len() >= size {
        Decision::Found(c)
    } else if complete {
        Decision::Refuted
    } else {
        Decision::Inconclusive
    }
}

struct ColoringRun<'a> {
    g: &'a Graph,
    k: usize,
    colors: Vec<Option<usize>>,
    counts: Vec<Vec<u32>>,
    meter: Meter,
}

impl ColoringRun<'_> {
    fn saturation(&self, v: usize) -> usize {
        self.counts[v].iter().filter(|&&c| c > 0).count()
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = Some(c);
        for w in self.g.neighbors(v).iter() {
            self.counts[w][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = None;
        for w in self.g.neighbors(v).iter() {
            self.counts[w][c] -= 1;
        }
    }

    fn pick(&self) -> Option<usize> {
        (0..self.g.n())
            .filter(|&v| self.colors[v].is_none())
            .max_by_key(|&v| {
                let free_deg = self
                    .g
                    .neighbors(v)
                    .iter()
                    .filter(|&w| self.colors[w].is_none())
                    .count();
                (self.saturation(v), free_deg, std::cmp::Reverse(v))
            })
    }

    /// Some(true) = coloured, Some(false) = refuted, None = out of budget.
    fn solve(&mut self, used: usize) -> Option<bool> {
        if !self.meter.tick() {
            return None;
        }
        let Some(v) = self.pick() else {
            return Some(true);
        };
        let limit = self.k.min(used + 1);
        for c in 0..limit {
            if self.counts[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            let dead_end = self.g.neighbors(v).iter().any(|w| {
                self.colors[w].is_none() && self.saturation(w) == self.k
            });
            if !dead_end {
                match self.solve(used.max(c + 1)) {
                    Some(true) => return Some(true),
                    None => {
                        self.unassign(v, c);
                        return None;
                    }
                    Some(false) => {}
                }
            }
            self.unassign(v, c);
        }
        Some(false)
    }
}

/// Exhaustive k-colourability with saturation ordering; colours are
/// introduced in order, which fixes the first vertex's colour.
pub fn is_k_colorable(g: &Graph, k: usize, budget: SearchBudget) -> Decision<Vec<usize>> {
    let n = g.n();
    if n == 0 {
        return Decision::Found(Vec::new());
    }
    if k == 0 {
        return Decision::Refuted;
    }
    if k >= n {
        return Decision::Found((0..n).collect());
    }
    let mut run = ColoringRun {
        g,
        k,
        colors: vec![None; n],
        counts: vec![vec![0; k]; n],
        meter: Meter::new(budget),
    };
    match run.solve(0) {
        Some(true) => {
            let colors: Vec<usize> = run.colors.iter().map(|c| c.expect("all coloured")).collect();
            debug_assert!(verify_coloring(g, &colors, k));
            Decision::Found(colors)
        }
        Some(false) => Decision::Refuted,
        None => Decision::Inconclusive,
    }
}

/// Greedy saturation colouring; an upper bound only.
pub fn dsatur_greedy(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<Option<usize>> = vec![None; n];
    let mut neigh_colors: Vec<BitSet> = vec![BitSet::new(n.max(1)); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v].is_none())
            .max_by_key(|&v| (neigh_colors[v].count(), g.degree(v), std::cmp::Reverse(v)))
            .expect("uncoloured vertex remains");
        let c = (0..n).find(|&c| !neigh_colors[v].contains(c)).unwrap_or(0);
        colors[v] = Some(c);
        for w in g.neighbors(v).iter() {
            neigh_colors[w].insert(c);
        }
    }
    colors.into_iter().map(|c| c.unwrap_or(0)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChromaticResult {
    pub lower: usize,
    pub upper: usize,
    /// A proper colouring with `upper` colours.
    pub coloring: Vec<usize>,
}

impl ChromaticResult {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn exact(&self) -> Option<usize> {
        self.is_exact().then_some(self.upper)
    }
}

/// Binary search between the clique number and a greedy colouring. An
/// inconclusive sub-search leaves the bracketing interval open.
pub fn chromatic_number(g: &Graph, budget: SearchBudget) -> ChromaticResult {
    let n = g.n();
    if n == 0 {
        return ChromaticResult {
            lower: 0,
            upper: 0,
            coloring: Vec::new(),
        };
    }
    let clique = max_clique_with(g, budget, false);
    let mut coloring = dsatur_greedy(g);
    let mut lo = clique.size.max(1);
    let mut hi = coloring.iter().max().map_or(0, |m| m + 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match is_k_colorable(g, mid, budget) {
            Decision::Found(c) => {
                coloring = c;
                hi = mid;
            }
            Decision::Refuted => lo = mid + 1,
            Decision::Inconclusive => break,
        }
    }
    ChromaticResult {
        lower: lo,
        upper: hi,
        coloring,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomWitness {
    pub mapping: Vec<usize>,
}

impl HomWitness {
    pub fn verify(&self, from: &Graph, to: &Graph) -> bool {
        from.is_homomorphism_to(to, &self.mapping)
    }

    /// `self: F -> G` followed by `next: G -> H`.
    pub fn compose(&self, next: &HomWitness) -> HomWitness {
        HomWitness {
            mapping: self.mapping.iter().map(|&x| next.mapping[x]).collect(),
        }
    }
}

struct HomRun<'a> {
    f: &'a Graph,
    g: &'a Graph,
    meter: Meter,
}

impl HomRun<'_> {
    /// Arc consistency from the vertices in `queue`; false on a wipe-out.
    fn propagate(&self, domains: &mut [BitSet], mut queue: VecDeque<usize>) -> bool {
        let mut queued = vec![false; domains.len()];
        for &w in &queue {
            queued[w] = true;
        }
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            for u in self.f.neighbors(w).iter() {
                let unsupported: Vec<usize> = domains[u]
                    .iter()
                    .filter(|&x| !self.g.neighbors(x).intersects(&domains[w]))
                    .collect();
                if unsupported.is_empty() {
                    continue;
                }
                for x in unsupported {
                    domains[u].remove(x);
                }
                if domains[u].is_empty() {
                    return false;
                }
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
        true
    }

    fn solve(&mut self, domains: Vec<BitSet>) -> Option<Option<Vec<usize>>> {
        if !self.meter.tick() {
            return None;
        }
        let open = (0..self.f.n())
            .filter(|&u| domains[u].count() > 1)
            .min_by_key(|&u| (domains[u].count(), u));
        let Some(u) = open else {
            let map: Vec<usize> = domains.iter().map(|d| d.first().expect("nonempty")).collect();
            return Some(Some(map));
        };
        for x in domains[u].iter() {
            let mut next = domains.clone();
            next[u] = BitSet::from_indices(self.g.n(), [x]);
            if !self.propagate(&mut next, VecDeque::from([u])) {
                continue;
            }
            match self.solve(next) {
                Some(Some(m)) => return Some(Some(m)),
                None => return None,
                Some(None) => {}
            }
        }
        Some(None)
    }
}

/// Homomorphism search with arc-consistent domain pruning; vertices with
/// the smallest domain branch first.
pub fn homomorphism(f: &Graph, g: &Graph, budget: SearchBudget) -> Decision<HomWitness> {
    if f.n() == 0 {
        return Decision::Found(HomWitness {
            mapping: Vec::new(),
        });
    }
    if g.n() == 0 {
        return Decision::Refuted;
    }
    let non_isolated = BitSet::from_indices(g.n(), (0..g.n()).filter(|&x| g.degree(x) > 0));
    let domains: Vec<BitSet> = (0..f.n())
        .map(|u| {
            if f.degree(u) > 0 {
                non_isolated.clone()
            } else {
                BitSet::full(g.n())
            }
        })
        .collect();
    if domains.iter().any(BitSet::is_empty) {
        return Decision::Refuted;
    }
    let mut run = HomRun {
        f,
        g,
        meter: Meter::new(budget),
    };
    let mut domains = domains;
    if !run.propagate(&mut domains, (0..f.n()).collect()) {
        return Decision::Refuted;
    }
    match run.solve(domains) {
        Some(Some(mapping)) => {
            let w = HomWitness { mapping };
            debug_assert!(w.verify(f, g));
            Decision::Found(w)
        }
        Some(None) => Decision::Refuted,
        None => Decision::Inconclusive,
    }
}

/// Length of the shortest odd cycle, `None` when the graph is bipartite.
/// BFS on the bipartite double cover from every vertex.
pub fn odd_girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; 2 * n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[2 * s] = 0;
        let mut queue = VecDeque::from([2 * s]);
        while let Some(state) = queue.pop_front() {
            let (v, parity) = (state / 2, state % 2);
            let d = dist[state];
            if best.is_some_and(|b| d + 1 >= b) {
                break;
            }
            for w in g.neighbors(v).iter() {
                let next = 2 * w + (1 - parity);
                if dist[next] == usize::MAX {
                    dist[next] = d + 1;
                    queue.push_back(next);
                }
            }
            if dist[2 * s + 1] != usize::MAX {
                break;
            }
        }
        let closing = dist[2 * s + 1];
        if closing != usize::MAX {
            best = Some(best.map_or(closing, |b| b.min(closing)));
        }
    }
    best
}

/// The clique `{(v, sigma(v))}` of `G^2` built from a complementing
/// permutation, as product indices `v * n + sigma(v)`.
pub fn selfcomp_square_clique(g: &Graph, sigma: &[usize]) -> Result<Vec<usize>, SearchError> {
    if !is_complementing(g, sigma) {
        return Err(SearchError::NotComplementing);
    }
    let n = g.n();
    let clique: Vec<usize> = (0..n).map(|v| v * n + sigma[v]).collect();
    let verified = match or_power(g, 2) {
        Ok(square) => verify_clique(&square, &clique),
        // too large to materialise: check the OR rule pair by pair
        Err(_) => (0..n).all(|u| {
            (u + 1..n).all(|v| g.has_edge(u, v) || g.has_edge(sigma[u], sigma[v]))
        }),
    };
    if verified {
        Ok(clique)
    } else {
        Err(SearchError::WitnessRejected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{or_power, tensor_product};
    use crate::paley::{paley_family, paley_graph, self_complement_witness, PaleyVariant};

    fn unlimited() -> SearchBudget {
        SearchBudget::unlimited()
    }

    #[test]
    fn clique_examples() {
        let p17 = paley_graph(17).unwrap();
        let r = max_clique(&p17, unlimited());
        assert_eq!(r.size, 3);
        assert!(r.proven_optimal && verify_clique(&p17, &r.witness));

        let c5sq = or_power(&Graph::cycle(5), 2).unwrap();
        let r = max_clique(&c5sq, unlimited());
        assert_eq!(r.size, 5);
        assert!(verify_clique(&c5sq, &r.witness));

        let k1 = max_clique(&Graph::complete(1), unlimited());
        assert_eq!((k1.size, k1.witness), (1, vec![0]));
    }

    #[test]
    fn lexicographic_witness() {
        let c5sq = or_power(&Graph::cycle(5), 2).unwrap();
        let a = max_clique(&c5sq, unlimited());
        let b = max_clique(&c5sq, unlimited());
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.witness[0], 0);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let p = paley_graph(41).unwrap();
        let r = max_clique(&p, SearchBudget::nodes(2));
        assert!(!r.proven_optimal);
        assert!(verify_clique(&p, &r.witness));
        assert!(is_k_colorable(&paley_graph(17).unwrap(), 5, SearchBudget::nodes(3))
            .is_inconclusive());
    }

    #[test]
    fn independence_examples() {
        let p13 = paley_graph(13).unwrap();
        let r = max_independent_set(&p13, unlimited());
        assert_eq!(r.size, 3);
        assert!(verify_independent_set(&p13, &r.witness));
        assert_eq!(max_independent_set(&Graph::cycle(5), unlimited()).size, 2);
        assert_eq!(max_independent_set(&paley_graph(17).unwrap(), unlimited()).size, 3);
    }

    #[test]
    fn coloring_examples() {
        assert!(is_k_colorable(&paley_graph(17).unwrap(), 5, unlimited()).is_refuted());
        assert!(is_k_colorable(&paley_graph(13).unwrap(), 4, unlimited()).is_refuted());
        let c5 = Graph::cycle(5);
        let col = is_k_colorable(&c5, 3, unlimited());
        assert!(verify_coloring(&c5, col.found().unwrap(), 3));
        assert!(is_k_colorable(&c5, 2, unlimited()).is_refuted());
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&Graph::cycle(5), unlimited()).exact(), Some(3));
        assert_eq!(chromatic_number(&Graph::complete(6), unlimited()).exact(), Some(6));
        let p13 = paley_graph(13).unwrap();
        let r = chromatic_number(&p13, unlimited());
        assert_eq!(r.exact(), Some(5));
        assert!(verify_coloring(&p13, &r.coloring, 5));
    }

    #[test]
    fn homomorphism_examples() {
        let (c9, c5) = (Graph::cycle(9), Graph::cycle(5));
        let w = homomorphism(&c9, &c5, unlimited());
        assert!(w.found().unwrap().verify(&c9, &c5));
        assert!(homomorphism(&c5, &c9, unlimited()).is_refuted());
        assert!(homomorphism(&Graph::complete(3), &c5, unlimited()).is_refuted());
        let t = tensor_product(&c5, &Graph::complete(3)).unwrap();
        assert!(homomorphism(&t, &c5, unlimited()).found().is_some());
        // isolated vertices map anywhere, edges need edges
        assert!(homomorphism(&Graph::empty(3), &Graph::complete(1), unlimited())
            .found()
            .is_some());
        assert!(homomorphism(&Graph::complete(2), &Graph::empty(4), unlimited()).is_refuted());
    }

    #[test]
    fn odd_girth_examples() {
        assert_eq!(odd_girth(&Graph::cycle(5)), Some(5));
        assert_eq!(odd_girth(&Graph::complete(2)), None);
        assert_eq!(odd_girth(&Graph::cycle(6)), None);
        assert_eq!(odd_girth(&Graph::complete(4)), Some(3));
        let t = tensor_product(&Graph::cycle(5), &Graph::cycle(7)).unwrap();
        assert_eq!(odd_girth(&t), Some(7));
    }

    #[test]
    fn square_clique_examples() {
        let c5 = Graph::cycle(5);
        let sigma: Vec<usize> = (0..5).map(|x| 2 * x % 5).collect();
        let c = selfcomp_square_clique(&c5, &sigma).unwrap();
        assert_eq!(c, vec![0, 7, 14, 16, 23]);

        let q16 = paley_family(17, PaleyVariant::OneDeleted).unwrap();
        let w = self_complement_witness(17).unwrap();
        let c = selfcomp_square_clique(&q16, &w.one_deleted).unwrap();
        assert_eq!(c.len(), 16);

        assert_eq!(selfcomp_square_clique(&Graph::complete(1), &[0]).unwrap(), vec![0]);
        assert_eq!(
            selfcomp_square_clique(&c5, &[0, 1, 2, 3, 4]),
            Err(SearchError::NotComplementing)
        );
    }
}
