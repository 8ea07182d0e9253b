//! Largest arcs: exact branch and bound, brute force, pruning and the greedy lower bound.

use arclab::maxarc::{greedy_arc, max_arc_brute, max_arc_exact, prune_tuples, Removal};
use arclab::randlab::{sample_random, RandomModel};
use arclab::{PlaneKind, PlaneModel};

fn main() -> arclab::Result<()> {
    for q in [3u64, 4, 5, 7] {
        let m = PlaneModel::from_order(q, PlaneKind::Affine)?;
        let cert = max_arc_exact(&m, &m.full_set())?;
        println!(
            "a(AG(2,{q})) = {} witness {:?} ({} nodes)",
            cert.size,
            cert.witness.to_vec(),
            cert.nodes
        );
    }

    let m = PlaneModel::from_order(9, PlaneKind::Affine)?;
    let q = sample_random(&m, &RandomModel::new(9, 0.2, 11)?)?;
    let exact = max_arc_exact(&m, &q)?;
    let pruned = prune_tuples(&m, &q, 3, Removal::HighestId)?;
    let greedy = greedy_arc(&m, &q, 11)?;
    println!(
        "random Q in AG(2,9), |Q|={}: exact {} (optimal {}), pruned arc {}, greedy {}",
        q.len(),
        exact.size,
        exact.optimal,
        pruned.set.len(),
        greedy.certificate.size
    );
    if q.len() <= 18 {
        assert_eq!(max_arc_brute(&m, &q), exact.size);
    }
    println!("{}", exact.to_json());
    Ok(())
}
