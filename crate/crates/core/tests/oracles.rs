//! Library results checked against independent brute-force definitions.

use orcap_core::field::FiniteField;
use orcap_core::graph::{and_product, join, or_power, or_product, pair_index, tensor_product};
use orcap_core::io::{decode_graph6, encode_graph6, parse_dimacs, write_dimacs};
use orcap_core::iso::is_isomorphic;
use orcap_core::paley::paley_graph;
use orcap_core::search::{
    chromatic_number, homomorphism, is_k_colorable, max_clique, max_independent_set, odd_girth,
    Decision, SearchBudget,
};
use orcap_core::theta::{lovasz_theta, theta_bar, SolverConfig};
use orcap_core::Graph;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut k = 0;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn brute_clique(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&m| {
            (0..n).all(|u| (u + 1..n).all(|v| m >> u & 1 == 0 || m >> v & 1 == 0 || g.has_edge(u, v)))
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

fn brute_colorable(g: &Graph, k: usize) -> bool {
    let n = g.n();
    let total = k.pow(n as u32);
    (0..total).any(|mut code| {
        let mut c = vec![0; n];
        for slot in c.iter_mut() {
            *slot = code % k;
            code /= k;
        }
        g.edges().iter().all(|&(u, v)| c[u] != c[v])
    })
}

fn brute_hom(f: &Graph, g: &Graph) -> bool {
    let (n, m) = (f.n(), g.n());
    (0..m.pow(n as u32)).any(|mut code| {
        let mut map = vec![0; n];
        for slot in map.iter_mut() {
            *slot = code % m;
            code /= m;
        }
        f.is_homomorphism_to(g, &map)
    })
}

/// Shortest odd closed walk, read off boolean adjacency powers.
fn brute_odd_girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect();
    let mut walk = adj.clone();
    for len in 1..=2 * n + 1 {
        if len % 2 == 1 && (0..n).any(|v| walk[v][v]) {
            return Some(len);
        }
        walk = (0..n)
            .map(|u| (0..n).map(|v| (0..n).any(|w| walk[u][w] && adj[w][v])).collect())
            .collect();
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clique_matches_subset_enumeration(g in arb_graph(11)) {
        let r = max_clique(&g, SearchBudget::unlimited());
        prop_assert!(r.proven_optimal);
        prop_assert_eq!(r.size, brute_clique(&g));
        prop_assert_eq!(max_independent_set(&g, SearchBudget::unlimited()).size, brute_clique(&g.complement()));
    }

    #[test]
    fn chromatic_matches_enumeration(g in arb_graph(7)) {
        let r = chromatic_number(&g, SearchBudget::unlimited());
        let chi = r.exact().unwrap();
        prop_assert!(brute_colorable(&g, chi));
        prop_assert!(chi == 1 || !brute_colorable(&g, chi - 1));
        for k in 1..=4 {
            let d = is_k_colorable(&g, k, SearchBudget::unlimited());
            prop_assert_eq!(d.found().is_some(), brute_colorable(&g, k));
        }
    }

    #[test]
    fn homomorphism_matches_enumeration(f in arb_graph(6), g in arb_graph(5)) {
        let d = homomorphism(&f, &g, SearchBudget::unlimited());
        prop_assert!(!d.is_inconclusive());
        if let Decision::Found(w) = &d {
            prop_assert!(f.is_homomorphism_to(&g, &w.mapping));
        }
        prop_assert_eq!(d.found().is_some(), brute_hom(&f, &g));
    }

    #[test]
    fn odd_girth_matches_walk_powers(g in arb_graph(9)) {
        prop_assert_eq!(odd_girth(&g), brute_odd_girth(&g));
    }

    #[test]
    fn isomorphism_matches_permutation_search(f in arb_graph(6), g in arb_graph(6)) {
        let brute = f.n() == g.n() && permutations(f.n()).iter().any(|p| {
            (0..f.n()).all(|u| (0..f.n()).all(|v| u == v || f.has_edge(u, v) == g.has_edge(p[u], p[v])))
        });
        prop_assert_eq!(is_isomorphic(&f, &g).unwrap().is_some(), brute);
    }

    #[test]
    fn products_follow_their_definitions(f in arb_graph(5), g in arb_graph(5)) {
        let t = tensor_product(&f, &g).unwrap();
        let o = or_product(&f, &g).unwrap();
        let a = and_product(&f, &g).unwrap();
        let (nf, ng) = (f.n(), g.n());
        for x in 0..nf { for u in 0..ng { for y in 0..nf { for v in 0..ng {
            if (x, u) == (y, v) { continue; }
            let (i, j) = (pair_index(x, u, ng), pair_index(y, v, ng));
            let fx = f.has_edge(x, y);
            let gu = g.has_edge(u, v);
            prop_assert_eq!(t.has_edge(i, j), fx && gu);
            prop_assert_eq!(o.has_edge(i, j), fx || gu);
            prop_assert_eq!(a.has_edge(i, j), (fx || x == y) && (gu || u == v));
        }}}}
        let jn = join(&f, &g);
        prop_assert_eq!(jn.edge_count(), f.edge_count() + g.edge_count() + nf * ng);
    }

    #[test]
    fn graph6_round_trip(g in arb_graph(40)) {
        let s = encode_graph6(&g).unwrap();
        prop_assert!(s.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(decode_graph6(s.as_bytes()).unwrap(), g.clone());
        prop_assert_eq!(parse_dimacs(&write_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn theta_sandwich(g in arb_graph(8)) {
        let cfg = SolverConfig::default();
        let t = lovasz_theta(&g, &cfg).unwrap();
        let tb = theta_bar(&g, &cfg).unwrap();
        let alpha = brute_clique(&g.complement()) as f64;
        let omega = brute_clique(&g) as f64;
        prop_assert!(t.lower <= t.upper && tb.lower <= tb.upper);
        prop_assert!(alpha <= t.upper + 1e-6);
        prop_assert!(omega <= tb.upper + 1e-6);
        // theta(G) * theta(co G) >= n
        prop_assert!(t.upper * tb.upper >= g.n() as f64 - 1e-6);
    }
}

#[test]
fn or_power_is_iterated_or_product() {
    let c5 = Graph::cycle(5);
    let sq = or_product(&c5, &c5).unwrap();
    assert_eq!(or_power(&c5, 2).unwrap(), sq);
    assert_eq!(or_power(&c5, 3).unwrap(), or_product(&sq, &c5).unwrap());
}

#[test]
fn odd_cycle_theta_closed_form() {
    // theta(C_n) = n cos(pi/n) / (1 + cos(pi/n)) for odd n
    for n in [5usize, 7, 9, 11, 13] {
        let c = (std::f64::consts::PI / n as f64).cos();
        let expect = n as f64 * c / (1.0 + c);
        let t = lovasz_theta(&Graph::cycle(n), &SolverConfig::default()).unwrap();
        assert!(t.contains(expect, 1e-7), "C{n}: {t:?} vs {expect}");
    }
}

#[test]
fn paley_adjacency_matches_modular_squares() {
    for p in [5u64, 13, 17, 29, 37, 41] {
        let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
        let g = paley_graph(p).unwrap();
        for u in 0..p {
            for v in 0..p {
                if u != v {
                    let d = (u + p - v) % p;
                    assert_eq!(g.has_edge(u as usize, v as usize), squares.contains(&d));
                }
            }
        }
    }
}

#[test]
fn gf9_matches_gaussian_integers_mod_3() {
    // the least modulus x^2 + 1 makes GF(9) = Z_3[i]; index a + 3b <-> a + b i
    let f = FiniteField::new(3, 2).unwrap();
    for x in 0..9usize {
        for y in 0..9usize {
            let (a, b, c, d) = (x % 3, x / 3, y % 3, y / 3);
            let re = (a * c + 2 * b * d) % 3;
            let im = (a * d + b * c) % 3;
            assert_eq!(f.mul(x, y), re + 3 * im, "{x} * {y}");
            assert_eq!(f.add(x, y), (a + c) % 3 + 3 * ((b + d) % 3));
        }
    }
}
