use std::sync::Arc;

use crbem::mesh::{graded_square_mesh, uniform_refine};
use crbem::space::{clement_interpolate, DofSpace, PwLinear};

fn main() -> crbem::Result<()> {
    let coarse = Arc::new(graded_square_mesh(4, 2.0)?);
    let (fine, map) = uniform_refine(&coarse);
    let fine = Arc::new(fine);
    let f = |p: crbem::mesh::Point2| {
        (std::f64::consts::PI * p.x).sin() * (std::f64::consts::PI * p.y).sin()
    };
    let u = PwLinear::interpolate(Arc::clone(&fine), f);
    let p1 = Arc::new(DofSpace::conforming(Arc::clone(&coarse)));
    let iu = clement_interpolate(&u, &p1, &map)?;
    let mut worst = 0f64;
    for (i, v) in iu.values.iter().enumerate() {
        worst = worst.max((v - f(coarse.vertices[p1.entity_of(i)])).abs());
    }
    println!(
        "{} coarse nodes, max nodal deviation {worst:.3e}",
        p1.dof_count()
    );
    Ok(())
}
