//! Degrees of freedom for the Crouzeix-Raviart space and the conforming P1
//! space, together with the discrete operators acting on them.
//!
//! Every discrete function is eventually handled as a [`PwLinear`]: its three
//! vertex values on each element. Curls, jumps, prolongation and the Clément
//! operator all work on that representation.

mod clement;
mod fields;

pub use clement::clement_interpolate;
pub use fields::{
    curl_field, embed_coarse_in_fine, jump_field, project_pwconst, EdgeJump, EdgeJumpField,
    PwConstVecField,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, RefinementMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// One DOF per interior edge, continuity at edge midpoints only.
    CrouzeixRaviart,
    /// Continuous P1 vanishing on the boundary, one DOF per interior node.
    Conforming,
}

/// Gradients of the barycentric coordinates of one element.
#[derive(Clone, Copy, Debug)]
pub struct ElementGeometry {
    pub area: f64,
    pub grad_lambda: [[f64; 2]; 3],
}

impl ElementGeometry {
    pub fn new(mesh: &Mesh, t: usize) -> Result<Self> {
        let [p0, p1, p2] = mesh.corners(t);
        let twice = crate::mesh::orient2d(p0, p1, p2);
        if twice <= 0.0 || !twice.is_finite() {
            return Err(Error::DegenerateTriangle(t));
        }
        let g = |a: crate::mesh::Point2, b: crate::mesh::Point2| {
            [(a.y - b.y) / twice, (b.x - a.x) / twice]
        };
        Ok(ElementGeometry {
            area: 0.5 * twice,
            grad_lambda: [g(p1, p2), g(p2, p0), g(p0, p1)],
        })
    }

    /// Gradient of the linear function with the given vertex values.
    pub fn gradient(&self, values: [f64; 3]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (v, gl) in values.iter().zip(&self.grad_lambda) {
            g[0] += v * gl[0];
            g[1] += v * gl[1];
        }
        g
    }
}

/// Gradient of barycentric coordinate `local` on element `t`.
pub fn basis_gradient(mesh: &Mesh, t: usize, local: usize) -> Result<[f64; 2]> {
    if local > 2 {
        return Err(Error::IndexOutOfRange {
            what: "local basis",
            index: local,
            len: 3,
        });
    }
    Ok(ElementGeometry::new(mesh, t)?.grad_lambda[local])
}

/// Vertex values of the local Crouzeix-Raviart basis function of local edge
/// `k`, i.e. `1 - 2 λ_{k+2}`.
pub fn cr_local_values(k: usize) -> [f64; 3] {
    let mut v = [1.0; 3];
    v[(k + 2) % 3] = -1.0;
    v
}

/// DOF numbering of one discrete space on one mesh.
#[derive(Clone, Debug)]
pub struct DofSpace {
    kind: SpaceKind,
    mesh: Arc<Mesh>,
    /// Mesh entity (edge or vertex) to DOF.
    dof_of_entity: Vec<Option<usize>>,
    entity_of_dof: Vec<usize>,
}

impl DofSpace {
    pub fn new(mesh: Arc<Mesh>, kind: SpaceKind) -> Self {
        let free: Vec<bool> = match kind {
            SpaceKind::CrouzeixRaviart => mesh.edges().iter().map(|e| !e.boundary).collect(),
            SpaceKind::Conforming => mesh.boundary_vertex_flags.iter().map(|b| !b).collect(),
        };
        let mut dof_of_entity = vec![None; free.len()];
        let mut entity_of_dof = Vec::new();
        for (i, f) in free.into_iter().enumerate() {
            if f {
                dof_of_entity[i] = Some(entity_of_dof.len());
                entity_of_dof.push(i);
            }
        }
        DofSpace {
            kind,
            mesh,
            dof_of_entity,
            entity_of_dof,
        }
    }

    pub fn cr(mesh: Arc<Mesh>) -> Self {
        DofSpace::new(mesh, SpaceKind::CrouzeixRaviart)
    }

    pub fn conforming(mesh: Arc<Mesh>) -> Self {
        DofSpace::new(mesh, SpaceKind::Conforming)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn dof_count(&self) -> usize {
        self.entity_of_dof.len()
    }

    /// DOF attached to an edge (CR) or vertex (conforming).
    pub fn dof_of(&self, entity: usize) -> Option<usize> {
        self.dof_of_entity.get(entity).copied().flatten()
    }

    pub fn entity_of(&self, dof: usize) -> usize {
        self.entity_of_dof[dof]
    }

    /// For each local basis function on `t`: its DOF (if not constrained) and
    /// its vertex values on `t`.
    pub fn local_basis(&self, t: usize) -> [(Option<usize>, [f64; 3]); 3] {
        let tri = &self.mesh.triangles[t];
        match self.kind {
            SpaceKind::CrouzeixRaviart => {
                let edges = self.mesh.element_edges(t);
                std::array::from_fn(|k| (self.dof_of_entity[edges[k]], cr_local_values(k)))
            }
            SpaceKind::Conforming => std::array::from_fn(|i| {
                let mut v = [0.0; 3];
                v[i] = 1.0;
                (self.dof_of_entity[tri.v[i]], v)
            }),
        }
    }

    /// Curls of the unconstrained local basis functions on `t`.
    pub fn local_curls(&self, t: usize, geo: &ElementGeometry) -> Vec<(usize, [f64; 2])> {
        self.local_basis(t)
            .into_iter()
            .filter_map(|(dof, vals)| {
                dof.map(|d| {
                    let g = geo.gradient(vals);
                    (d, [g[1], -g[0]])
                })
            })
            .collect()
    }

    /// Elements in the support of each DOF's basis function.
    pub fn supports(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.dof_count()];
        for t in 0..self.mesh.n_triangles() {
            for (dof, _) in self.local_basis(t) {
                if let Some(d) = dof {
                    s[d].push(t);
                }
            }
        }
        s
    }

    pub fn zeros(self: &Arc<Self>) -> CoefVec {
        CoefVec {
            space: Arc::clone(self),
            values: vec![0.0; self.dof_count()],
        }
    }

    pub fn coefs(self: &Arc<Self>, values: Vec<f64>) -> Result<CoefVec> {
        if values.len() != self.dof_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                self.dof_count(),
                values.len()
            )));
        }
        Ok(CoefVec {
            space: Arc::clone(self),
            values,
        })
    }
}

/// Coefficients of a function in a [`DofSpace`].
#[derive(Clone, Debug)]
pub struct CoefVec {
    pub space: Arc<DofSpace>,
    pub values: Vec<f64>,
}

impl CoefVec {
    pub fn mesh(&self) -> &Arc<Mesh> {
        self.space.mesh()
    }

    pub fn to_pw_linear(&self) -> PwLinear {
        let mesh = self.mesh();
        let values = (0..mesh.n_triangles())
            .map(|t| {
                let mut v = [0.0; 3];
                for (dof, basis) in self.space.local_basis(t) {
                    if let Some(d) = dof {
                        let c = self.values[d];
                        for i in 0..3 {
                            v[i] += c * basis[i];
                        }
                    }
                }
                v
            })
            .collect();
        PwLinear {
            mesh: Arc::clone(mesh),
            values,
        }
    }
}

/// A discontinuous piecewise linear function stored by its vertex values on
/// each element.
#[derive(Clone, Debug)]
pub struct PwLinear {
    pub mesh: Arc<Mesh>,
    pub values: Vec<[f64; 3]>,
}

impl PwLinear {
    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.n_triangles();
        PwLinear {
            mesh,
            values: vec![[0.0; 3]; n],
        }
    }

    /// Evaluates a global function at the vertices of every element.
    pub fn interpolate(mesh: Arc<Mesh>, f: impl Fn(crate::mesh::Point2) -> f64) -> Self {
        let values = (0..mesh.n_triangles())
            .map(|t| mesh.corners(t).map(&f))
            .collect();
        PwLinear { mesh, values }
    }

    /// Value on element `t` at barycentric coordinates `lambda`.
    pub fn eval_local(&self, t: usize, lambda: [f64; 3]) -> f64 {
        let v = self.values[t];
        v[0] * lambda[0] + v[1] * lambda[1] + v[2] * lambda[2]
    }

    /// Evaluates the coarse function on the elements of a refinement.
    pub fn prolongate(&self, fine: &Arc<Mesh>, map: &RefinementMap) -> Result<PwLinear> {
        if map.n_parents() != self.mesh.n_triangles() || map.n_children() != fine.n_triangles() {
            return Err(Error::MeshMismatch("refinement map does not match meshes"));
        }
        let values = map
            .child_to_parent
            .iter()
            .enumerate()
            .map(|(c, &p)| {
                fine.corners(c)
                    .map(|q| self.eval_local(p, self.mesh.barycentric(p, q)))
            })
            .collect();
        Ok(PwLinear {
            mesh: Arc::clone(fine),
            values,
        })
    }

    pub fn sub(&self, other: &PwLinear) -> Result<PwLinear> {
        if !Arc::ptr_eq(&self.mesh, &other.mesh) {
            return Err(Error::MeshMismatch("difference of functions"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
            .collect();
        Ok(PwLinear {
            mesh: Arc::clone(&self.mesh),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_initial_square_mesh, Point2, Triangle};

    fn unit_right(offset: f64) -> Arc<Mesh> {
        Arc::new(
            Mesh::new(
                vec![
                    Point2::new(offset, offset),
                    Point2::new(1.0 + offset, offset),
                    Point2::new(offset, 1.0 + offset),
                ],
                vec![Triangle::new([0, 1, 2], 1)],
            )
            .unwrap(),
        )
    }

    #[test]
    fn barycentric_gradients() {
        let m = unit_right(0.0);
        assert_eq!(basis_gradient(&m, 0, 0).unwrap(), [-1.0, -1.0]);
        let shifted = unit_right(3.5);
        assert_eq!(basis_gradient(&shifted, 0, 0).unwrap(), [-1.0, -1.0]);
        assert!(basis_gradient(&m, 0, 3).is_err());
    }

    #[test]
    fn cr_basis_of_hypotenuse() {
        let m = unit_right(0.0);
        let geo = ElementGeometry::new(&m, 0).unwrap();
        // Local edge 1 joins (1,0) and (0,1); the opposite vertex is (0,0).
        assert_eq!(geo.gradient(cr_local_values(1)), [2.0, 2.0]);
    }

    #[test]
    fn dof_counts_on_initial_mesh() {
        let m = Arc::new(build_initial_square_mesh());
        assert_eq!(DofSpace::cr(Arc::clone(&m)).dof_count(), 8);
        assert_eq!(DofSpace::conforming(m).dof_count(), 1);
    }

    #[test]
    fn prolongation_reproduces_linear_functions() {
        let m0 = Arc::new(build_initial_square_mesh());
        let (m1, map) = crate::mesh::uniform_refine(&m0);
        let m1 = Arc::new(m1);
        let f = |p: Point2| 2.0 * p.x - 3.0 * p.y + 0.5;
        let coarse = PwLinear::interpolate(Arc::clone(&m0), f);
        let fine = coarse.prolongate(&m1, &map).unwrap();
        let direct = PwLinear::interpolate(Arc::clone(&m1), f);
        for (a, b) in fine.values.iter().zip(&direct.values) {
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-14);
            }
        }
    }
}
