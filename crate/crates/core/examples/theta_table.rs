//! Prints certified theta-bar values for the deleted Paley graphs.

use std::time::Instant;

use orcap_core::paley::{paley_family, PaleyVariant};
use orcap_core::theta::{theta_bar, SolverConfig};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let primes = if args.is_empty() { vec![13, 17, 29, 37, 41] } else { args };
    let cfg = SolverConfig::default();
    for p in primes {
        for variant in [
            PaleyVariant::OneDeleted,
            PaleyVariant::TwoDeletedAdjacent,
            PaleyVariant::TwoDeletedNonadjacent,
        ] {
            let g = paley_family(p, variant).expect("valid Paley order");
            let t = Instant::now();
            let v = theta_bar(&g, &cfg).expect("nonempty graph");
            println!(
                "{:>6}  [{:.6}, {:.6}]  iters {:>3}  {:?}  {:.2?}",
                g.label().unwrap_or("?"),
                v.lower,
                v.upper,
                v.iterations,
                v.status,
                t.elapsed()
            );
        }
    }
}
