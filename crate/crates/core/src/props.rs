//! Seeded randomized property suites: product identities, Hedetniemi-type
//! equalities, theta-bar spectrum axioms and homomorphism facts.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{and_product, join, or_product, tensor_product, Graph};
use crate::search::{homomorphism, max_clique, odd_girth, Decision, SearchBudget};
use crate::theta::{theta_bar, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyConfig {
    pub seed: u64,
    pub de_morgan_pairs: usize,
    pub clique_pairs: usize,
    pub odd_girth_pairs: usize,
    pub theta_pairs: usize,
    pub hom_pairs: usize,
}

impl PropertyConfig {
    pub fn full(seed: u64) -> Self {
        PropertyConfig {
            seed,
            de_morgan_pairs: 200,
            clique_pairs: 100,
            odd_girth_pairs: 50,
            theta_pairs: 30,
            hom_pairs: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Uniform random graph with `1..=max_n` vertices and a random edge density.
pub fn random_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let density: f64 = rng.gen_range(0.2..0.8);
    Graph::from_fn(n, |_, _| rng.gen_bool(density))
}

fn describe(f: &Graph, g: &Graph) -> String {
    format!("F edges {:?} on {}, G edges {:?} on {}", f.edges(), f.n(), g.edges(), g.n())
}

struct Suite {
    name: &'static str,
    start: Instant,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            start: Instant::now(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(detail);
        }
    }

    fn finish(self) -> (SuiteResult, f64) {
        let result = SuiteResult {
            name: self.name.into(),
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        };
        (result, self.start.elapsed().as_secs_f64())
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn de_morgan(rng: &mut impl Rng, pairs: usize) -> (SuiteResult, f64) {
    let mut s = Suite::new("de-morgan");
    for _ in 0..pairs {
        let (f, g) = (random_graph(rng, 6), random_graph(rng, 6));
        let or = or_product(&f, &g).expect("small product");
        let and = and_product(&f.complement(), &g.complement()).expect("small product");
        s.check(or.complement() == and, || describe(&f, &g));
    }
    s.finish()
}

pub fn clique_hedetniemi(rng: &mut impl Rng, pairs: usize) -> (SuiteResult, f64) {
    let mut s = Suite::new("clique-hedetniemi");
    let budget = SearchBudget::unlimited();
    for _ in 0..pairs {
        let (f, g) = (random_graph(rng, 7), random_graph(rng, 7));
        let p = tensor_product(&f, &g).expect("small product");
        let lhs = max_clique(&p, budget).size;
        let rhs = max_clique(&f, budget).size.min(max_clique(&g, budget).size);
        s.check(lhs == rhs, || format!("{lhs} != {rhs}: {}", describe(&f, &g)));
    }
    s.finish()
}

fn random_non_bipartite(rng: &mut impl Rng, max_n: usize) -> Graph {
    loop {
        let g = random_graph(rng, max_n);
        if odd_girth(&g).is_some() {
            return g;
        }
    }
}

pub fn odd_girth_hedetniemi(rng: &mut impl Rng, pairs: usize) -> (SuiteResult, f64) {
    let mut s = Suite::new("odd-girth-hedetniemi");
    for _ in 0..pairs {
        let (f, g) = (random_non_bipartite(rng, 8), random_non_bipartite(rng, 8));
        let p = tensor_product(&f, &g).expect("small product");
        let lhs = odd_girth(&p);
        let rhs = odd_girth(&f).max(odd_girth(&g));
        s.check(lhs == rhs, || format!("{lhs:?} != {rhs:?}: {}", describe(&f, &g)));
    }
    s.finish()
}

/// Normalisation, additivity under join and multiplicativity under the
/// OR-product, to relative tolerance 1e-3.
pub fn theta_spectrum(rng: &mut impl Rng, pairs: usize, cfg: &SolverConfig) -> (SuiteResult, f64) {
    let mut s = Suite::new("theta-spectrum");
    let tb = |g: &Graph| theta_bar(g, cfg).map(|v| v.midpoint()).unwrap_or(f64::NAN);
    let k1 = tb(&Graph::complete(1));
    s.check(rel_close(k1, 1.0, 1e-3), || format!("theta-bar(K1) = {k1}"));
    for _ in 0..pairs {
        let (f, g) = (random_graph(rng, 8), random_graph(rng, 8));
        let (a, b) = (tb(&f), tb(&g));
        let j = tb(&join(&f, &g));
        s.check(rel_close(j, a + b, 1e-3), || {
            format!("join {j} vs {a} + {b}: {}", describe(&f, &g))
        });
        let o = tb(&or_product(&f, &g).expect("small product"));
        s.check(rel_close(o, a * b, 1e-3), || {
            format!("or-product {o} vs {a} * {b}: {}", describe(&f, &g))
        });
    }
    s.finish()
}

/// A random graph `F` built to map onto `G` via a random vertex map.
fn pullback(rng: &mut impl Rng, g: &Graph, max_n: usize) -> (Graph, Vec<usize>) {
    let n = rng.gen_range(1..=max_n);
    let map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..g.n())).collect();
    let f = Graph::from_fn(n, |u, v| g.has_edge(map[u], map[v]) && rng.gen_bool(0.7));
    (f, map)
}

pub fn hom_monotonicity(rng: &mut impl Rng, pairs: usize, cfg: &SolverConfig) -> (SuiteResult, f64) {
    let mut s = Suite::new("hom-monotonicity");
    for _ in 0..pairs {
        let g = random_graph(rng, 8);
        let (f, map) = pullback(rng, &g, 8);
        let witnessed = f.is_homomorphism_to(&g, &map);
        let (tf, tg) = match (theta_bar(&f, cfg), theta_bar(&g, cfg)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                s.check(false, || format!("solver failure: {}", describe(&f, &g)));
                continue;
            }
        };
        s.check(witnessed && tf.lower <= tg.upper + 1e-6, || {
            format!("theta-bar {} > {}: {}", tf.lower, tg.upper, describe(&f, &g))
        });
    }
    s.finish()
}

/// `C_{2k+1} -> C_{2l+1}` exactly when `k >= l`, for cycles of length 3..=9.
pub fn odd_cycle_table() -> (SuiteResult, f64) {
    let mut s = Suite::new("odd-cycle-homomorphisms");
    for a in [3usize, 5, 7, 9] {
        for b in [3usize, 5, 7, 9] {
            let d = homomorphism(&Graph::cycle(a), &Graph::cycle(b), SearchBudget::unlimited());
            let ok = match &d {
                Decision::Found(w) => a >= b && w.verify(&Graph::cycle(a), &Graph::cycle(b)),
                Decision::Refuted => a < b,
                Decision::Inconclusive => false,
            };
            s.check(ok, || format!("C{a} -> C{b}: {d:?}"));
        }
    }
    s.finish()
}

/// Runs every suite; wall-clock seconds per suite are returned separately
/// so the report itself is reproducible from the seed.
pub fn run_properties(cfg: &PropertyConfig, solver: &SolverConfig) -> (PropertyReport, Vec<(String, f64)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let timed = vec![
        de_morgan(&mut rng, cfg.de_morgan_pairs),
        clique_hedetniemi(&mut rng, cfg.clique_pairs),
        odd_girth_hedetniemi(&mut rng, cfg.odd_girth_pairs),
        theta_spectrum(&mut rng, cfg.theta_pairs, solver),
        hom_monotonicity(&mut rng, cfg.hom_pairs, solver),
        odd_cycle_table(),
    ];
    let timings = timed.iter().map(|(s, t)| (s.name.clone(), *t)).collect();
    let suites = timed.into_iter().map(|(s, _)| s).collect();
    (
        PropertyReport {
            seed: cfg.seed,
            suites,
        },
        timings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let cfg = PropertyConfig {
            seed: 7,
            de_morgan_pairs: 20,
            clique_pairs: 10,
            odd_girth_pairs: 5,
            theta_pairs: 3,
            hom_pairs: 3,
        };
        let (a, _) = run_properties(&cfg, &SolverConfig::default());
        assert!(a.passed(), "{a:#?}");
        let (b, _) = run_properties(&cfg, &SolverConfig::default());
        assert_eq!(a, b);
        assert_eq!(a.suite("odd-cycle-homomorphisms").unwrap().cases, 16);
    }
}
