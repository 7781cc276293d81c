//! Small-graph isomorphism by colour refinement plus backtracking.
//!
//! Vertices of the first graph are assigned in index order and candidates
//! are tried in ascending order, so the first bijection found is the
//! lexicographically least one.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::graph::Graph;

pub const DEFAULT_ISO_BUDGET: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("isomorphism search limited to {budget} vertices, got {n}")]
    TooLarge { n: usize, budget: usize },
}

/// Returns the lexicographically least isomorphism `F -> G`, if any.
pub fn is_isomorphic(f: &Graph, g: &Graph) -> Result<Option<Vec<usize>>, IsoError> {
    is_isomorphic_within(f, g, DEFAULT_ISO_BUDGET)
}

pub fn is_isomorphic_within(f: &Graph, g: &Graph, budget: usize) -> Result<Option<Vec<usize>>, IsoError> {
    find_isomorphism(f, g, &[], budget)
}

/// Isomorphism search with some assignments fixed up front.
pub fn find_isomorphism(
    f: &Graph,
    g: &Graph,
    pins: &[(usize, usize)],
    budget: usize,
) -> Result<Option<Vec<usize>>, IsoError> {
    let n = f.n();
    if n > budget || g.n() > budget {
        return Err(IsoError::TooLarge {
            n: n.max(g.n()),
            budget,
        });
    }
    if n != g.n() || f.edge_count() != g.edge_count() {
        return Ok(None);
    }
    let (cf, cg) = refine_jointly(f, g);
    let mut hf = cf.clone();
    let mut hg = cg.clone();
    hf.sort_unstable();
    hg.sort_unstable();
    if hf != hg {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; n];
    for &(u, x) in pins {
        if u >= n || x >= n || cf[u] != cg[x] {
            return Ok(None);
        }
        map[u] = x;
    }
    let mut class_of: BTreeMap<usize, BitSet> = BTreeMap::new();
    for (x, &c) in cg.iter().enumerate() {
        class_of.entry(c).or_insert_with(|| BitSet::new(n)).insert(x);
    }
    let mut used = BitSet::new(n);
    let mut search = Backtrack {
        f,
        g,
        colors: &cf,
        class_of: &class_of,
        pinned: pins.iter().map(|&(u, _)| u).collect(),
    };
    if search.extend(0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

/// Whether `perm` is an automorphism of `g`.
pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    is_bijection(perm, g.n())
        && g.edges().into_iter().all(|(u, v)| g.has_edge(perm[u], perm[v]))
}

/// Whether `perm` maps edges exactly onto non-edges.
pub fn is_complementing(g: &Graph, perm: &[usize]) -> bool {
    let n = g.n();
    is_bijection(perm, n)
        && (0..n).all(|u| (u + 1..n).all(|v| g.has_edge(u, v) != g.has_edge(perm[u], perm[v])))
}

/// Whether `map` is an isomorphism `F -> G`.
pub fn is_isomorphism(f: &Graph, g: &Graph, map: &[usize]) -> bool {
    let n = f.n();
    n == g.n()
        && is_bijection(map, n)
        && (0..n).all(|u| (u + 1..n).all(|v| f.has_edge(u, v) == g.has_edge(map[u], map[v])))
}

pub(crate) fn is_bijection(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Finds an automorphism of `g` mapping `from` to `to`.
pub fn automorphism_mapping(
    g: &Graph,
    from: usize,
    to: usize,
    budget: usize,
) -> Result<Option<Vec<usize>>, IsoError> {
    find_isomorphism(g, g, &[(from, to)], budget)
}

/// Orbit closure of a vertex set under a list of permutations.
pub fn vertex_orbit(n: usize, start: usize, generators: &[Vec<usize>]) -> BitSet {
    let mut orbit = BitSet::new(n);
    orbit.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for gen in generators {
            let w = gen[v];
            if !orbit.contains(w) {
                orbit.insert(w);
                stack.push(w);
            }
        }
    }
    orbit
}

/// Whether some automorphism maps vertex 0 to every vertex. Automorphisms
/// found along the way are reused through orbit closure.
pub fn is_vertex_transitive(g: &Graph, budget: usize) -> Result<Option<Vec<Vec<usize>>>, IsoError> {
    let n = g.n();
    if n <= 1 {
        return Ok(Some(Vec::new()));
    }
    if n > budget {
        return Err(IsoError::TooLarge { n, budget });
    }
    let (colors, _) = refine_jointly(g, g);
    if colors.iter().any(|&c| c != colors[0]) {
        return Ok(None);
    }
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut orbit = vertex_orbit(n, 0, &gens);
    for v in 1..n {
        if orbit.contains(v) {
            continue;
        }
        match automorphism_mapping(g, 0, v, budget)? {
            Some(a) => {
                gens.push(a);
                orbit = vertex_orbit(n, 0, &gens);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(gens))
}

/// Colour refinement run on the disjoint union so colours are comparable.
fn refine_jointly(f: &Graph, g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = f.n();
    let graphs = [f, g];
    let mut colors: Vec<usize> = graphs
        .iter()
        .flat_map(|h| (0..h.n()).map(|v| h.degree(v)))
        .collect();
    let mut classes = count_classes(&colors);
    loop {
        let mut signatures: Vec<(usize, Vec<usize>)> = Vec::with_capacity(colors.len());
        for (side, h) in graphs.iter().enumerate() {
            for v in 0..h.n() {
                let mut neigh: Vec<usize> =
                    h.neighbors(v).iter().map(|w| colors[side * n + w]).collect();
                neigh.sort_unstable();
                signatures.push((colors[side * n + v], neigh));
            }
        }
        // sorted signature order gives canonical ids
        let mut canon: BTreeMap<&(usize, Vec<usize>), usize> =
            signatures.iter().map(|s| (s, 0)).collect();
        for (i, id) in canon.values_mut().enumerate() {
            *id = i;
        }
        let new_colors: Vec<usize> = signatures.iter().map(|s| canon[s]).collect();
        let new_classes = count_classes(&new_colors);
        colors = new_colors;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    let cg = colors.split_off(n);
    (colors, cg)
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Backtrack<'a> {
    f: &'a Graph,
    g: &'a Graph,
    colors: &'a [usize],
    class_of: &'a BTreeMap<usize, BitSet>,
    pinned: Vec<usize>,
}

impl Backtrack<'_> {
    fn consistent(&self, u: usize, x: usize, map: &[usize]) -> bool {
        (0..self.f.n())
            .filter(|&w| w != u && map[w] != usize::MAX)
            .all(|w| self.f.has_edge(u, w) == self.g.has_edge(x, map[w]))
    }

    fn extend(&mut self, u: usize, map: &mut Vec<usize>, used: &mut BitSet) -> bool {
        let n = self.f.n();
        if u == n {
            return true;
        }
        if self.pinned.contains(&u) {
            let x = map[u];
            if used.contains(x) || !self.consistent(u, x, map) {
                return false;
            }
            used.insert(x);
            if self.extend(u + 1, map, used) {
                return true;
            }
            used.remove(x);
            return false;
        }
        let mut cand = self.class_of[&self.colors[u]].clone();
        cand.difference_with(used);
        for w in 0..u {
            let x = map[w];
            if self.f.has_edge(u, w) {
                cand.intersect_with(self.g.neighbors(x));
            } else {
                let mut non = self.g.neighbors(x).clone();
                non.insert(x);
                cand.difference_with(&non);
            }
        }
        let pinned_targets: Vec<usize> = self.pinned.iter().map(|&p| map[p]).collect();
        for x in cand.iter() {
            if pinned_targets.contains(&x) || !self.consistent(u, x, map) {
                continue;
            }
            map[u] = x;
            used.insert(x);
            if self.extend(u + 1, map, used) {
                return true;
            }
            used.remove(x);
            map[u] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c5_self_complementary() {
        let c5 = Graph::cycle(5);
        let m = is_isomorphic(&c5, &c5.complement()).unwrap().unwrap();
        assert!(is_isomorphism(&c5, &c5.complement(), &m));
        assert!(is_complementing(&c5, &m));
    }

    #[test]
    fn cycle_vs_path() {
        assert_eq!(is_isomorphic(&Graph::cycle(5), &Graph::path(5)).unwrap(), None);
    }

    #[test]
    fn lexicographically_least_witness() {
        let c4 = Graph::cycle(4);
        assert_eq!(is_isomorphic(&c4, &c4).unwrap(), Some(vec![0, 1, 2, 3]));
        let relabelled = Graph::new(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        // 0->0, then 1 must be a neighbour of 0 in the target: least is 2
        assert_eq!(
            is_isomorphic(&c4, &relabelled).unwrap(),
            Some(vec![0, 2, 1, 3])
        );
    }

    #[test]
    fn refinement_separates_nonisomorphic_regular() {
        // two triangles vs hexagon: both 2-regular on 6 vertices
        let tt = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(is_isomorphic(&tt, &Graph::cycle(6)).unwrap(), None);
    }

    #[test]
    fn budget_refused() {
        let big = Graph::empty(65);
        assert!(matches!(
            is_isomorphic(&big, &big),
            Err(IsoError::TooLarge { n: 65, .. })
        ));
    }

    #[test]
    fn transitivity() {
        assert!(is_vertex_transitive(&Graph::cycle(7), 64).unwrap().is_some());
        assert!(is_vertex_transitive(&Graph::path(3), 64).unwrap().is_none());
    }
}
