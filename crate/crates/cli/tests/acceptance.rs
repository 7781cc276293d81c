//! Acceptance criteria 1-10. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use orcap_cli::report::{verify_document, ReportDocument, Results};
use orcap_core::bounds::{
    capacity_bounds_with, BoundsConfig, GapVerdict, GraphHints, BOUND_TOLERANCE,
};
use orcap_core::graph::or_power;
use orcap_core::paley::{paley_family, self_complement_witness, PaleyVariant};
use orcap_core::props::{run_properties, PropertyConfig};
use orcap_core::search::{
    is_k_colorable, max_clique, max_independent_set, selfcomp_square_clique, verify_clique,
    Decision, SearchBudget,
};
use orcap_core::theta::{lovasz_theta, theta_bar, SolverConfig};
use orcap_core::Graph;

const GOLDEN_TOL: f64 = 5e-3;
/// Half a unit in the fourth decimal, the precision of the reference values.
const ROUNDING: f64 = 5e-5;

fn family(q: u64, v: PaleyVariant) -> Graph {
    paley_family(q, v).unwrap()
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    assert!(took <= limit, "{what} took {took:?}, limit {limit:?}");
    out
}

fn unbounded() -> SearchBudget {
    SearchBudget::unlimited()
}

fn theta_golden() -> String {
    let cfg = SolverConfig::default();
    let mut parts = Vec::new();
    for (p, golden) in [(13, 3.4927), (17, 4.0035), (29, 5.3069), (37, 6.0025), (41, 6.3493)] {
        let g = family(p, PaleyVariant::OneDeleted);
        let v = timed(Duration::from_secs(60), &format!("theta-bar(Q{})", p - 1), || {
            theta_bar(&g, &cfg).unwrap()
        });
        assert!((v.midpoint() - golden).abs() <= GOLDEN_TOL, "Q{}: {v:?}", p - 1);
        assert!(v.contains(golden, ROUNDING), "Q{}: {v:?} does not contain {golden}", p - 1);
        parts.push(format!("Q{} {:.4}", p - 1, v.midpoint()));
    }
    parts.join(", ")
}

fn z_pairs() -> String {
    let cfg = SolverConfig::default();
    let mut parts = Vec::new();
    for (p, golden, ell) in [
        (17u64, [3.8726, 3.8849], 4.0),
        (37, [5.9128, 5.9251], 6.0),
        (101, [9.9496, 9.9574], 10.0),
    ] {
        let mut vals = Vec::new();
        for v in [PaleyVariant::TwoDeletedAdjacent, PaleyVariant::TwoDeletedNonadjacent] {
            let g = family(p, v);
            let t = timed(Duration::from_secs(30 * 60), &format!("theta-bar({g:?})"), || {
                theta_bar(&g, &cfg).unwrap()
            });
            vals.push(t);
        }
        vals.sort_by(|a, b| a.midpoint().total_cmp(&b.midpoint()));
        for (t, gold) in vals.iter().zip(golden) {
            assert!((t.midpoint() - gold).abs() <= GOLDEN_TOL, "p={p}: {t:?} vs {gold}");
            assert!(t.contains(gold, ROUNDING), "p={p}: {t:?} does not contain {gold}");
        }
        let cap = vals.iter().map(|t| t.upper).fold(0.0, f64::max);
        assert!(cap < ell, "p={p}: certified cap {cap} not below {ell}");
        parts.push(format!("Z{} {{{:.4}, {:.4}}} < {ell}", p - 2, vals[0].midpoint(), vals[1].midpoint()));
    }
    parts.join(", ")
}

fn c5_exact() -> String {
    let start = Instant::now();
    let c5 = Graph::cycle(5);
    let t = lovasz_theta(&c5, &SolverConfig::default()).unwrap();
    assert!((t.midpoint() - 2.23607).abs() <= 1e-4, "{t:?}");
    let sq = or_power(&c5, 2).unwrap();
    let w = max_clique(&sq, unbounded());
    assert!(w.proven_optimal && w.size == 5 && verify_clique(&sq, &w.witness));
    let took = start.elapsed();
    assert!(took <= Duration::from_secs(1), "took {took:?}");
    format!("theta(C5) {:.5}, omega(C5^2) = 5 witness {:?}", t.midpoint(), w.witness)
}

fn ramsey_paley() -> String {
    let limit = Duration::from_secs(10);
    let p17 = family(17, PaleyVariant::Full);
    let p13 = family(13, PaleyVariant::Full);
    let w = timed(limit, "omega(P17)", || max_clique(&p17, unbounded()));
    assert!(w.proven_optimal && w.size == 3);
    let a = timed(limit, "alpha(P17)", || max_independent_set(&p17, unbounded()));
    assert!(a.proven_optimal && a.size == 3);
    let a13 = timed(limit, "alpha(P13)", || max_independent_set(&p13, unbounded()));
    assert!(a13.proven_optimal && a13.size == 3);
    let c17 = timed(limit, "5-colouring P17", || is_k_colorable(&p17, 5, unbounded()));
    assert_eq!(c17, Decision::Refuted);
    let c13 = timed(limit, "4-colouring P13", || is_k_colorable(&p13, 4, unbounded()));
    assert_eq!(c13, Decision::Refuted);
    "omega(P17) = alpha(P17) = 3, alpha(P13) = 3, P17 not 5-colourable, P13 not 4-colourable".into()
}

fn hanson_petridis() -> String {
    let mut parts = Vec::new();
    for p in [13u64, 17, 29, 37, 41] {
        let bound = ((2.0 * p as f64 - 1.0).sqrt() + 1.0) / 2.0;
        let g = family(p, PaleyVariant::Full);
        let w = timed(Duration::from_secs(60), &format!("omega(P{p})"), || max_clique(&g, unbounded()));
        assert!(w.proven_optimal && verify_clique(&g, &w.witness));
        assert!(w.size as f64 <= bound, "P{p}: {} > {bound}", w.size);
        parts.push(format!("P{p} {} <= {bound:.4}", w.size));
    }
    parts.join(", ")
}

fn even_power_cliques() -> String {
    let start = Instant::now();
    for (q, v, expect) in [
        (9u64, PaleyVariant::Full, 3usize),
        (25, PaleyVariant::Full, 5),
        (9, PaleyVariant::OneDeleted, 3),
        (25, PaleyVariant::OneDeleted, 5),
    ] {
        let g = family(q, v);
        let w = max_clique(&g, unbounded());
        assert!(w.proven_optimal && verify_clique(&g, &w.witness));
        assert_eq!(w.size, expect, "{g:?}");
    }
    let took = start.elapsed();
    assert!(took <= Duration::from_secs(60), "took {took:?}");
    "omega(P9) = 3, omega(P25) = 5, omega(Q8) = 3, omega(Q24) = 5".into()
}

fn square_cliques() -> String {
    let mut parts = Vec::new();
    for p in [17u64, 37] {
        let q = family(p, PaleyVariant::OneDeleted);
        let sigma = self_complement_witness(p).unwrap().one_deleted;
        let clique = selfcomp_square_clique(&q, &sigma).unwrap();
        let sq = or_power(&q, 2).unwrap();
        let ok = timed(Duration::from_secs(5), "square clique check", || verify_clique(&sq, &clique));
        assert!(ok && clique.len() == q.n());
        parts.push(format!("{}-clique in Q{}^2", clique.len(), p - 1));
    }
    parts.join(", ")
}

fn testcase(args: &[&str], json: &std::path::Path) -> (i32, String, ReportDocument) {
    let out = Command::new(env!("CARGO_BIN_EXE_orcap"))
        .args(args)
        .arg("--json")
        .arg(json)
        .output()
        .unwrap();
    let doc = ReportDocument::parse(&std::fs::read_to_string(json).unwrap()).unwrap();
    verify_document(&doc).unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), doc)
}

fn gap_certificates() -> String {
    let dir = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    for (p, ell) in [(17u64, 4.0), (37, 6.0), (101, 10.0)] {
        let path = dir.path().join(format!("p{p}.json"));
        let ps = p.to_string();
        let (code, _, doc) = testcase(&["testcase", "--p", &ps, "--variant", "deleted"], &path);
        assert_eq!(code, 0);
        let Results::Gap { certificate } = doc.results else {
            panic!("p={p}: not a gap certificate")
        };
        assert_eq!(certificate.verdict, GapVerdict::GapOpen, "{}", certificate.narrative);
        assert_eq!(certificate.pair.upper, ell);
        let cap = certificate.pair.lower_bound_cap.as_ref().unwrap().value;
        assert!(cap < ell, "p={p}: cap {cap}");
        parts.push(format!("p={p} upper {ell} cap {cap:.4}"));
    }
    let path = dir.path().join("p13.json");
    let (code, stdout, doc) = testcase(&["testcase", "--p", "13"], &path);
    assert_eq!(code, 0);
    assert!(stdout.contains("not yet true for p=13"), "{stdout}");
    let Results::Gap { certificate } = doc.results else {
        panic!("p=13: not a gap certificate")
    };
    let GapVerdict::HypothesisFails { step } = certificate.verdict else {
        panic!("p=13 should fail a hypothesis")
    };
    parts.push(format!("p=13 fails '{step}'"));
    parts.join(", ")
}

fn property_suites() -> String {
    let cfg = PropertyConfig::full(20_240_501);
    let start = Instant::now();
    let (report, _) = run_properties(&cfg, &SolverConfig::default());
    let took = start.elapsed();
    assert!(took <= Duration::from_secs(15 * 60), "took {took:?}");
    for s in &report.suites {
        assert!(s.passed(), "{} failed: {:?}", s.name, s.first_failure);
    }
    let cases = |name: &str| report.suite(name).unwrap().cases;
    assert_eq!(cases("de-morgan"), 200);
    assert_eq!(cases("clique-hedetniemi"), 100);
    assert_eq!(cases("odd-girth-hedetniemi"), 50);
    assert_eq!(cases("theta-spectrum"), 1 + 2 * 30);
    assert_eq!(cases("hom-monotonicity"), 30);
    assert_eq!(cases("odd-cycle-homomorphisms"), 16);
    format!("{} suites, seed {}, {:.1}s", report.suites.len(), cfg.seed, took.as_secs_f64())
}

fn interval_sanity() -> String {
    let cfg = BoundsConfig {
        budget: SearchBudget::seconds(5.0),
        ..BoundsConfig::default()
    };
    let mut graphs: Vec<(Graph, GraphHints, u32)> = vec![(Graph::cycle(5), GraphHints::default(), 2)];
    for q in [5u64, 9, 13, 17, 25, 29, 37, 41] {
        graphs.push((family(q, PaleyVariant::Full), GraphHints::paley(q, PaleyVariant::Full).unwrap(), 1));
    }
    for q in [9u64, 13, 17, 25, 29, 37, 41] {
        graphs.push((
            family(q, PaleyVariant::OneDeleted),
            GraphHints::paley(q, PaleyVariant::OneDeleted).unwrap(),
            1,
        ));
    }
    for p in [17u64, 37, 101] {
        for v in [PaleyVariant::TwoDeletedAdjacent, PaleyVariant::TwoDeletedNonadjacent] {
            graphs.push((family(p, v), GraphHints::default(), 1));
        }
    }
    let count = graphs.len();
    for (g, hints, t) in graphs {
        let r = capacity_bounds_with(&g, t, &cfg, &hints).unwrap();
        assert!(r.best_lower <= r.best_upper + BOUND_TOLERANCE, "{}: {r:?}", r.graph);
    }
    for q in [5u64, 13, 17, 29] {
        let g = family(q, PaleyVariant::Full);
        let r = capacity_bounds_with(&g, 1, &cfg, &GraphHints::paley(q, PaleyVariant::Full).unwrap()).unwrap();
        let s = (q as f64).sqrt();
        assert!(
            (r.best_lower - s).abs() <= 1e-3 && (r.best_upper - s).abs() <= 1e-3,
            "P{q}: [{}, {}]",
            r.best_lower,
            r.best_upper
        );
    }
    format!("{count} reports ordered; P5, P13, P17, P29 pinned at sqrt(q)")
}

fn main() {
    let criteria: [(&str, fn() -> String); 10] = [
        ("theta golden values", theta_golden),
        ("Z-pair golden values", z_pairs),
        ("exact C5 value", c5_exact),
        ("Ramsey/Paley combinatorics", ramsey_paley),
        ("Hanson-Petridis consistency", hanson_petridis),
        ("even-power prime case", even_power_cliques),
        ("self-complementary square clique", square_cliques),
        ("gap certificates", gap_certificates),
        ("property suites", property_suites),
        ("capacity interval sanity", interval_sanity),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
