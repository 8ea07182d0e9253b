//! The container step condition over a grid of parameters, plus codegrees of small planes.

use arclab::bounds::{codegrees, container_condition, BoundParams};
use arclab::{PlaneKind, PlaneModel};

fn main() -> arclab::Result<()> {
    for q in [4u64, 5] {
        let m = PlaneModel::from_order(q, PlaneKind::Affine)?;
        println!("AG(2,{q}) collinear triples: {:?}", codegrees(&m));
    }
    println!("log10q,t,s,delta,terminal,condition_margin,sufficient");
    for log10q in [20.0, 40.0, 80.0] {
        for t in [0.6, 0.8] {
            for s in [0.2, 0.4] {
                let p = BoundParams::new(10f64.powf(log10q), t, s, 0.02);
                let c = container_condition(p);
                match &c.checks {
                    Some(k) => println!(
                        "{log10q},{t},{s},0.02,false,{:.3},{}",
                        k.condition.log_margin,
                        k.sufficiency_holds()
                    ),
                    None => println!("{log10q},{t},{s},0.02,true,-,-"),
                }
            }
        }
    }
    Ok(())
}
