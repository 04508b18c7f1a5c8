use crbem::mesh::{
    build_initial_square_mesh, max_tiling_defect, mesh_io_write, refine_nvb, uniform_refine,
};

fn main() -> crbem::Result<()> {
    let mesh = build_initial_square_mesh();
    println!(
        "initial: {} vertices, {} triangles",
        mesh.n_vertices(),
        mesh.n_triangles()
    );

    let (fine, map) = uniform_refine(&mesh);
    println!(
        "uniform: {} triangles, tiling defect {:.1e}",
        fine.n_triangles(),
        max_tiling_defect(&mesh, &fine, &map)
    );

    // Marking one element pulls its neighbours in through the closure.
    let (adapted, map) = refine_nvb(&fine, &[0])?;
    println!(
        "nvb on one element: {} triangles, min angle {:.2} deg",
        adapted.n_triangles(),
        adapted.min_angle().to_degrees()
    );
    for (parent, kids) in map
        .parent_to_children
        .iter()
        .enumerate()
        .filter(|(_, k)| k.len() > 1)
    {
        println!("  parent {parent} -> {kids:?}");
    }

    let mut out = Vec::new();
    mesh_io_write(&mesh, &mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
