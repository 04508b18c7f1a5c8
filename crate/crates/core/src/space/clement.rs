use std::sync::Arc;

use ndarray::Array2;

use super::{CoefVec, DofSpace, PwLinear, SpaceKind};
use crate::error::{Error, Result};
use crate::linalg::solve_spd;
use crate::mesh::RefinementMap;

/// `∫_T u v` for linear `u`, `v` given by vertex values.
fn linear_product(area: f64, u: [f64; 3], v: [f64; 3]) -> f64 {
    let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    area / 12.0 * (dot + (u[0] + u[1] + u[2]) * (v[0] + v[1] + v[2]))
}

/// Clément quasi-interpolation of a fine piecewise linear function into the
/// coarse conforming space.
///
/// For each interior coarse node `z` the function is projected in L² onto the
/// continuous piecewise linears on the node patch (all patch-node hats,
/// including those of boundary nodes) and the projection is evaluated at `z`.
pub fn clement_interpolate(
    fine: &PwLinear,
    coarse_space: &Arc<DofSpace>,
    map: &RefinementMap,
) -> Result<CoefVec> {
    if coarse_space.kind() != SpaceKind::Conforming {
        return Err(Error::InvalidParameter(
            "Clément interpolation targets the conforming space".into(),
        ));
    }
    let coarse = coarse_space.mesh();
    if map.n_parents() != coarse.n_triangles() || map.n_children() != fine.mesh.n_triangles() {
        return Err(Error::MeshMismatch("refinement map does not match meshes"));
    }
    let mut out = coarse_space.zeros();
    for dof in 0..coarse_space.dof_count() {
        let z = coarse_space.entity_of(dof);
        let patch = coarse.node_patch(z)?;
        let mut nodes: Vec<usize> = patch.iter().flat_map(|&t| coarse.triangles[t].v).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let local = |w: usize| nodes.binary_search(&w).expect("patch node");
        let n = nodes.len();
        let mut mass = Array2::<f64>::zeros((n, n));
        let mut rhs = vec![0.0; n];
        for &t in &patch {
            let tri = &coarse.triangles[t];
            let area = coarse.area(t);
            for i in 0..3 {
                for j in 0..3 {
                    let f = if i == j { 2.0 } else { 1.0 };
                    mass[[local(tri.v[i]), local(tri.v[j])]] += area / 12.0 * f;
                }
            }
            for &c in &map.parent_to_children[t] {
                let lambdas = fine.mesh.corners(c).map(|p| coarse.barycentric(t, p));
                let child_area = fine.mesh.area(c);
                for i in 0..3 {
                    let hat = lambdas.map(|l| l[i]);
                    rhs[local(tri.v[i])] += linear_product(child_area, fine.values[c], hat);
                }
            }
        }
        let psi = solve_spd(&mass, &rhs)?;
        out.values[dof] = psi[local(z)];
    }
    Ok(out)
}
