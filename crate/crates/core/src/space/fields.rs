use std::sync::Arc;

use super::{ElementGeometry, PwLinear};
use crate::error::{Error, Result};
use crate::mesh::{Mesh, RefinementMap};

/// A vector field that is constant on each element.
#[derive(Clone, Debug)]
pub struct PwConstVecField {
    pub mesh: Arc<Mesh>,
    pub values: Vec<[f64; 2]>,
}

impl PwConstVecField {
    pub fn sub(&self, other: &PwConstVecField) -> Result<PwConstVecField> {
        if !Arc::ptr_eq(&self.mesh, &other.mesh)
            && self.mesh.n_triangles() != other.mesh.n_triangles()
        {
            return Err(Error::MeshMismatch("difference of fields"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| [a[0] - b[0], a[1] - b[1]])
            .collect();
        Ok(PwConstVecField {
            mesh: Arc::clone(&self.mesh),
            values,
        })
    }

    /// `Σ_T |T| |v_T|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(t, v)| self.mesh.area(t) * (v[0] * v[0] + v[1] * v[1]))
            .sum()
    }

    pub fn x(&self) -> Vec<f64> {
        self.values.iter().map(|v| v[0]).collect()
    }

    pub fn y(&self) -> Vec<f64> {
        self.values.iter().map(|v| v[1]).collect()
    }
}

/// Elementwise surface curl `(∂_y v, -∂_x v)`.
pub fn curl_field(v: &PwLinear) -> Result<PwConstVecField> {
    let values = (0..v.mesh.n_triangles())
        .map(|t| {
            let g = ElementGeometry::new(&v.mesh, t)?.gradient(v.values[t]);
            Ok([g[1], -g[0]])
        })
        .collect::<Result<_>>()?;
    Ok(PwConstVecField {
        mesh: Arc::clone(&v.mesh),
        values,
    })
}

/// Copies a coarse elementwise constant field onto the children.
pub fn embed_coarse_in_fine(
    coarse: &PwConstVecField,
    fine: &Arc<Mesh>,
    map: &RefinementMap,
) -> Result<PwConstVecField> {
    if map.n_parents() != coarse.mesh.n_triangles() || map.n_children() != fine.n_triangles() {
        return Err(Error::MeshMismatch("refinement map does not match meshes"));
    }
    Ok(PwConstVecField {
        mesh: Arc::clone(fine),
        values: map
            .child_to_parent
            .iter()
            .map(|&p| coarse.values[p])
            .collect(),
    })
}

/// L² projection of a fine elementwise constant field onto constants on the
/// coarse elements: the area-weighted average over the children.
pub fn project_pwconst(
    fine: &PwConstVecField,
    coarse: &Arc<Mesh>,
    map: &RefinementMap,
) -> Result<PwConstVecField> {
    if map.n_parents() != coarse.n_triangles() || map.n_children() != fine.mesh.n_triangles() {
        return Err(Error::MeshMismatch("refinement map does not match meshes"));
    }
    let values = map
        .parent_to_children
        .iter()
        .map(|kids| {
            let mut s = [0.0; 2];
            let mut area = 0.0;
            for &c in kids {
                let a = fine.mesh.area(c);
                s[0] += a * fine.values[c][0];
                s[1] += a * fine.values[c][1];
                area += a;
            }
            [s[0] / area, s[1] / area]
        })
        .collect();
    Ok(PwConstVecField {
        mesh: Arc::clone(coarse),
        values,
    })
}

/// Jump across one edge, linear along it, given by its values at the two
/// endpoints `edge.v[0]` and `edge.v[1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeJump {
    pub at_ends: [f64; 2],
}

impl EdgeJump {
    pub fn tangential_derivative(&self, length: f64) -> f64 {
        (self.at_ends[1] - self.at_ends[0]) / length
    }

    pub fn midpoint_value(&self) -> f64 {
        0.5 * (self.at_ends[0] + self.at_ends[1])
    }
}

#[derive(Clone, Debug)]
pub struct EdgeJumpField {
    pub mesh: Arc<Mesh>,
    pub jumps: Vec<EdgeJump>,
}

/// Jumps of a piecewise linear function over every edge: the trace from the
/// first adjacent element minus the trace from the second, or minus zero on
/// the boundary.
pub fn jump_field(v: &PwLinear) -> EdgeJumpField {
    let mesh = &v.mesh;
    let trace = |t: usize, w: usize| {
        let k = mesh.triangles[t]
            .local_index(w)
            .expect("edge vertex belongs to element");
        v.values[t][k]
    };
    let jumps = mesh
        .edges()
        .iter()
        .map(|e| {
            let plus = e.elements[0].expect("every edge has an element");
            let at_ends = e.v.map(|w| {
                let minus = e.elements[1].map_or(0.0, |t| trace(t, w));
                trace(plus, w) - minus
            });
            EdgeJump { at_ends }
        })
        .collect();
    EdgeJumpField {
        mesh: Arc::clone(mesh),
        jumps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_initial_square_mesh, uniform_refine, Point2};
    use crate::space::{CoefVec, DofSpace};

    #[test]
    fn curl_of_linear_function() {
        let m = Arc::new(build_initial_square_mesh());
        let v = PwLinear::interpolate(m, |p: Point2| 2.0 * p.x + 5.0 * p.y);
        for c in curl_field(&v).unwrap().values {
            assert!((c[0] - 5.0).abs() < 1e-13 && (c[1] + 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn cr_jumps_vanish_at_interior_midpoints() {
        let m = Arc::new(build_initial_square_mesh());
        let space = Arc::new(DofSpace::cr(Arc::clone(&m)));
        let u: CoefVec = space
            .coefs((0..8).map(|i| (i as f64).sin() + 0.3).collect())
            .unwrap();
        let jumps = jump_field(&u.to_pw_linear());
        for (e, j) in m.edges().iter().zip(&jumps.jumps) {
            assert!(j.midpoint_value().abs() < 1e-14, "edge {:?}", e.v);
        }
    }

    #[test]
    fn continuous_function_has_only_boundary_jumps() {
        let m = Arc::new(build_initial_square_mesh());
        let v = PwLinear::interpolate(Arc::clone(&m), |p: Point2| p.x * 0.5 + 1.0);
        let jumps = jump_field(&v);
        for (e, j) in m.edges().iter().zip(&jumps.jumps) {
            if !e.boundary {
                assert!(j.at_ends.iter().all(|x| x.abs() < 1e-15));
            } else {
                let expect = e.v.map(|w| m.vertices[w].x * 0.5 + 1.0);
                assert_eq!(j.at_ends, expect);
            }
        }
    }

    #[test]
    fn projection_then_embedding_preserves_integral() {
        let m0 = Arc::new(build_initial_square_mesh());
        let (m1, map) = uniform_refine(&m0);
        let m1 = Arc::new(m1);
        let f = PwConstVecField {
            mesh: Arc::clone(&m1),
            values: (0..m1.n_triangles())
                .map(|t| [t as f64, -(t as f64) * 0.5])
                .collect(),
        };
        let p = project_pwconst(&f, &m0, &map).unwrap();
        let back = embed_coarse_in_fine(&p, &m1, &map).unwrap();
        let integral = |g: &PwConstVecField| -> f64 {
            g.values
                .iter()
                .enumerate()
                .map(|(t, v)| g.mesh.area(t) * v[0])
                .sum()
        };
        assert!((integral(&f) - integral(&back)).abs() < 1e-12);
        assert!(embed_coarse_in_fine(&p, &m0, &map).is_err());
    }
}
