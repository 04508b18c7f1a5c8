use std::sync::Arc;

use ndarray::Array2;

use super::panel::{Adjacency, PanelQuadrature, QuadSettings};
use super::quadrature::TriangleRule;
use crate::error::{Error, Result};
use crate::mesh::{orient2d, Mesh, Point2, RefinementMap};
use crate::space::{DofSpace, ElementGeometry, PwConstVecField};

/// Element-pair table `G[T][T'] = (1/4π) ∫_T ∫_T' |x - y|^{-1}` on one mesh.
///
/// `a(u, v) = Σ_{T,T'} (u_T · v_T') G[T][T']` for elementwise constant
/// vector fields, which is the single-layer form acting componentwise.
#[derive(Clone, Debug)]
pub struct EnergyForm {
    pub mesh: Arc<Mesh>,
    pub g: Array2<f64>,
}

struct Panel {
    corners: [Point2; 3],
    centroid: Point2,
    radius: f64,
    diameter: f64,
    /// Far-field rule points and weights including the Jacobian.
    far: Vec<(Point2, f64)>,
}

impl EnergyForm {
    pub fn assemble(mesh: Arc<Mesh>, settings: QuadSettings) -> Result<Self> {
        let quad = PanelQuadrature::new(settings)?;
        let far_rule = TriangleRule::collapsed(settings.far_order);
        let n = mesh.n_triangles();
        let panels: Vec<Panel> = (0..n)
            .map(|t| {
                let corners = mesh.corners(t);
                let jac = orient2d(corners[0], corners[1], corners[2]);
                if !(jac > 0.0) {
                    return Err(Error::DegenerateTriangle(t));
                }
                let centroid = mesh.centroid(t);
                let radius = corners.iter().map(|p| p.dist(centroid)).fold(0.0, f64::max);
                let diameter = corners[0]
                    .dist(corners[1])
                    .max(corners[1].dist(corners[2]))
                    .max(corners[2].dist(corners[0]));
                let far = far_rule
                    .map(corners)
                    .into_iter()
                    .zip(&far_rule.weights)
                    .map(|(p, w)| (p, w * jac))
                    .collect();
                Ok(Panel {
                    corners,
                    centroid,
                    radius,
                    diameter,
                    far,
                })
            })
            .collect::<Result<_>>()?;
        let inv4pi = 1.0 / (4.0 * std::f64::consts::PI);
        let mut g = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            let vi = mesh.triangles[i].v;
            let pi = &panels[i];
            for j in i..n {
                let vj = mesh.triangles[j].v;
                let pj = &panels[j];
                let shares = vi.iter().any(|v| vj.contains(v));
                let value = if !shares
                    && pi.centroid.dist(pj.centroid) - pi.radius - pj.radius
                        >= settings.far_separation * pi.diameter.max(pj.diameter)
                {
                    let mut s = 0.0;
                    for &(x, wx) in &pi.far {
                        let mut inner = 0.0;
                        for &(y, wy) in &pj.far {
                            let (dx, dy) = (x.x - y.x, x.y - y.y);
                            inner += wy / (dx * dx + dy * dy).sqrt();
                        }
                        s += wx * inner;
                    }
                    s * inv4pi
                } else {
                    let adj = Adjacency::classify(pi.corners, pj.corners, |a, b| vi[a] == vj[b]);
                    quad.integrate(&adj)
                };
                g[[i, j]] = value;
                g[[j, i]] = value;
            }
        }
        Ok(EnergyForm { mesh, g })
    }

    /// The form on a coarser mesh obtained by summing the entries of the
    /// children of each coarse element pair.
    pub fn coarsen(&self, coarse: Arc<Mesh>, map: &RefinementMap) -> Result<EnergyForm> {
        if map.n_children() != self.mesh.n_triangles() || map.n_parents() != coarse.n_triangles() {
            return Err(Error::MeshMismatch("refinement map does not match meshes"));
        }
        let nf = self.mesh.n_triangles();
        let nc = coarse.n_triangles();
        let mut rows = Array2::<f64>::zeros((nc, nf));
        for (c, &p) in map.child_to_parent.iter().enumerate() {
            let mut dst = rows.row_mut(p);
            dst += &self.g.row(c);
        }
        let mut g = Array2::<f64>::zeros((nc, nc));
        for p in 0..nc {
            for q in p..nc {
                let s: f64 = map.parent_to_children[q]
                    .iter()
                    .map(|&d| rows[[p, d]])
                    .sum();
                g[[p, q]] = s;
                g[[q, p]] = s;
            }
        }
        Ok(EnergyForm { mesh: coarse, g })
    }

    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    fn check(&self, u: &PwConstVecField) -> Result<()> {
        if u.values.len() != self.n() {
            return Err(Error::MeshMismatch(
                "field does not live on the form's mesh",
            ));
        }
        Ok(())
    }

    /// `G u`, componentwise.
    pub fn apply(&self, u: &PwConstVecField) -> Result<Vec<[f64; 2]>> {
        self.check(u)?;
        let (ux, uy) = (u.x(), u.y());
        Ok(self
            .g
            .rows()
            .into_iter()
            .map(|row| {
                let row = row.as_slice().expect("standard layout");
                [dot(row, &ux), dot(row, &uy)]
            })
            .collect())
    }

    pub fn energy_inner(&self, u: &PwConstVecField, v: &PwConstVecField) -> Result<f64> {
        self.check(u)?;
        let gv = self.apply(v)?;
        Ok(u.values
            .iter()
            .zip(&gv)
            .map(|(a, b)| a[0] * b[0] + a[1] * b[1])
            .sum())
    }

    /// Galerkin matrix `A[i][j] = a(curl ψ_i, curl ψ_j)` of a space on this mesh.
    pub fn stiffness(&self, space: &DofSpace) -> Result<Array2<f64>> {
        let curls = basis_curls(&self.mesh, space, self.n())?;
        let n = space.dof_count();
        let mut a = Array2::<f64>::zeros((n, n));
        let nt = self.n();
        let mut kx = vec![0.0; nt];
        let mut ky = vec![0.0; nt];
        for i in 0..n {
            kx.iter_mut().for_each(|x| *x = 0.0);
            ky.iter_mut().for_each(|x| *x = 0.0);
            for &(t, c) in &curls[i] {
                let row = self.g.row(t);
                let row = row.as_slice().expect("standard layout");
                for ((x, y), g) in kx.iter_mut().zip(ky.iter_mut()).zip(row) {
                    *x += c[0] * g;
                    *y += c[1] * g;
                }
            }
            for j in i..n {
                let s: f64 = curls[j]
                    .iter()
                    .map(|&(t, c)| c[0] * kx[t] + c[1] * ky[t])
                    .sum();
                a[[i, j]] = s;
                a[[j, i]] = s;
            }
        }
        Ok(a)
    }

    /// `b_i = a(u, curl ψ_i)` for every basis function of `space`.
    pub fn load_from_field(&self, u: &PwConstVecField, space: &DofSpace) -> Result<Vec<f64>> {
        let gu = self.apply(u)?;
        let curls = basis_curls(&self.mesh, space, self.n())?;
        Ok(curls
            .iter()
            .map(|sup| {
                sup.iter()
                    .map(|&(t, c)| c[0] * gu[t][0] + c[1] * gu[t][1])
                    .sum()
            })
            .collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per DOF: the elements of its support with the basis curl there.
fn basis_curls(mesh: &Mesh, space: &DofSpace, n: usize) -> Result<Vec<Vec<(usize, [f64; 2])>>> {
    if space.mesh().n_triangles() != n || space.mesh().n_vertices() != mesh.n_vertices() {
        return Err(Error::MeshMismatch(
            "space does not live on the form's mesh",
        ));
    }
    let mut curls = vec![Vec::new(); space.dof_count()];
    for t in 0..n {
        let geo = ElementGeometry::new(mesh, t)?;
        for (d, c) in space.local_curls(t, &geo) {
            curls[d].push((t, c));
        }
    }
    Ok(curls)
}
