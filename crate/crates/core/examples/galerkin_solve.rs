use std::sync::Arc;

use crbem::assembly::{rhs_constant, EnergyForm, QuadSettings};
use crbem::linalg::solve_spd;
use crbem::mesh::{build_initial_square_mesh, uniform_refine};
use crbem::space::DofSpace;

fn main() -> crbem::Result<()> {
    let mut mesh = build_initial_square_mesh();
    for _ in 0..3 {
        mesh = uniform_refine(&mesh).0;
    }
    let mesh = Arc::new(mesh);
    let form = EnergyForm::assemble(Arc::clone(&mesh), QuadSettings::default())?;
    for space in [
        DofSpace::cr(Arc::clone(&mesh)),
        DofSpace::conforming(Arc::clone(&mesh)),
    ] {
        let a = form.stiffness(&space)?;
        let b = rhs_constant(&space);
        let u = solve_spd(&a, &b)?;
        let energy: f64 = u.iter().zip(&b).map(|(x, y)| x * y).sum();
        println!(
            "{:?}: {} dofs, energy {energy:.10e}",
            space.kind(),
            space.dof_count()
        );
    }
    Ok(())
}
