use crbem::mesh::{graded_square_mesh, grading_map};

fn main() -> crbem::Result<()> {
    for beta in [1.0, 2.0, 3.0] {
        let mesh = graded_square_mesh(8, beta)?;
        let h = mesh.mesh_width();
        let (lo, hi) = h
            .iter()
            .fold((f64::MAX, 0f64), |(a, b), &x| (a.min(x), b.max(x)));
        println!(
            "beta {beta}: {} triangles, h in [{lo:.4}, {hi:.4}], first node {:.5}",
            mesh.n_triangles(),
            grading_map(0.125, beta)
        );
    }
    Ok(())
}
