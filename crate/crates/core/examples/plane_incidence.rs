//! Points, lines and collineations of AG(2,5) and PG(2,4).

use arclab::{Collineation, PlaneKind, PlaneModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> arclab::Result<()> {
    let ag = PlaneModel::from_order(5, PlaneKind::Affine)?;
    println!(
        "AG(2,5): {} points, {} lines of {} points",
        ag.num_points(),
        ag.num_lines(),
        ag.line_size()
    );
    let (a, b) = (ag.affine_point(1, 2)?, ag.affine_point(3, 4)?);
    let l = ag.line(ag.line_id_through(a, b)?);
    let [u, v, w] = l.coords;
    println!(
        "line through {a} and {b}: {u}x + {v}y + {w}z = 0, points {:?}",
        l.points()
    );

    let pg = PlaneModel::from_order(4, PlaneKind::Projective)?;
    println!(
        "PG(2,4): {} points, {} lines through each point",
        pg.num_points(),
        pg.lines_through(0).len()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = Collineation::random_projective(pg.field(), &mut rng);
    let perm = g.permutation(&pg)?;
    println!(
        "a random collineation moves point 0 to {} and point 20 to {}",
        perm[0], perm[20]
    );
    Ok(())
}
