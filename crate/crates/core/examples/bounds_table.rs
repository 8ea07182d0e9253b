//! Trivial, product and exponential bounds on arc counts, and the large-size bound.

use arclab::bounds::{larget_bound, smallt_bounds, trivial_bounds};

fn main() -> arclab::Result<()> {
    let delta = 0.1;
    println!("q,k,trivial_hi,product_lo,product_hi,exp_lo,exp_hi,sandwich");
    for q in [25u64, 49, 121, 1024] {
        let kmax = ((q as f64).sqrt() / (1.0 + delta)).floor() as u64;
        for k in 3..=kmax.min(8) {
            let b = smallt_bounds(q, k, delta)?;
            let (_, hi) = trivial_bounds(q, k);
            println!(
                "{q},{k},{hi},{:.5},{:.5},{:.5},{:.5},{}",
                num_traits::ToPrimitive::to_f64(&b.product_lo).unwrap_or(f64::NAN),
                num_traits::ToPrimitive::to_f64(&b.product_hi).unwrap_or(f64::NAN),
                b.exp_lo_prob,
                b.exp_hi_prob,
                b.exp_sandwich_holds()
            );
        }
    }
    for t in [0.6, 0.75, 0.9] {
        let b = larget_bound(1 << 20, t, 0.02)?;
        println!(
            "q=2^20 t={t}: k={} bound has {} digits, improves trivial: {}",
            b.k,
            b.bound.to_string().len(),
            b.improves_trivial()
        );
    }
    Ok(())
}
