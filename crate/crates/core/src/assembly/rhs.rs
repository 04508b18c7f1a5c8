use std::f64::consts::PI;
use std::sync::Arc;

use super::energy::EnergyForm;
use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point2};
use crate::space::{curl_field, CoefVec, DofSpace, PwLinear, SpaceKind};

/// `b_i = ∫ ψ_i`.
pub fn rhs_constant(space: &DofSpace) -> Vec<f64> {
    let mesh = space.mesh();
    let mut b = vec![0.0; space.dof_count()];
    for t in 0..mesh.n_triangles() {
        let area = mesh.area(t);
        for (dof, v) in space.local_basis(t) {
            if let Some(d) = dof {
                b[d] += area * (v[0] + v[1] + v[2]) / 3.0;
            }
        }
    }
    b
}

/// `b_i = ∫ x^α ψ_i` for `-1 < α`, integrated in closed form.
pub fn rhs_power(space: &DofSpace, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mesh = space.mesh();
    if mesh.vertices.iter().any(|p| p.x < 0.0) {
        return Err(Error::InvalidParameter(
            "x^alpha data needs a mesh in x >= 0".into(),
        ));
    }
    let mut b = vec![0.0; space.dof_count()];
    for t in 0..mesh.n_triangles() {
        let corners = mesh.corners(t);
        for (dof, v) in space.local_basis(t) {
            if let Some(d) = dof {
                b[d] += integrate_power_linear(corners, v, alpha)?;
            }
        }
    }
    Ok(b)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::DivergentIntegral(format!(
            "x^{alpha} is not integrable at x = 0"
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent {alpha}")));
    }
    Ok(())
}

/// `∫_T x^α v` for the linear function `v` with the given vertex values.
///
/// The triangle is cut at its middle vertex into pieces that are
/// x-monotone; the y-integral of `v` over each piece is a quadratic in x.
pub fn integrate_power_linear(corners: [Point2; 3], values: [f64; 3], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let mut idx = [0, 1, 2];
    idx.sort_by(|&a, &b| corners[a].x.total_cmp(&corners[b].x));
    let p = idx.map(|i| corners[i]);
    let v = idx.map(|i| values[i]);
    if p[0].x < 0.0 {
        return Err(Error::InvalidParameter("x^alpha needs x >= 0".into()));
    }
    // Value and slope at x = xa of the line through vertices i and j, for
    // both y and v.
    let line = |i: usize, j: usize, xa: f64| {
        let dx = p[j].x - p[i].x;
        let (sy, sv) = ((p[j].y - p[i].y) / dx, (v[j] - v[i]) / dx);
        let off = xa - p[i].x;
        ([p[i].y + sy * off, sy], [v[i] + sv * off, sv])
    };
    let mut total = 0.0;
    for (xa, xb, other) in [(p[0].x, p[1].x, (0, 1)), (p[1].x, p[2].x, (1, 2))] {
        let w = xb - xa;
        if !(w > 0.0) {
            continue;
        }
        let (yu, vu) = line(0, 2, xa);
        let (yl, vl) = line(other.0, other.1, xa);
        let d = [yu[0] - yl[0], yu[1] - yl[1]];
        let s = [vu[0] + vl[0], vu[1] + vl[1]];
        let sign = if d[0] + d[1] * 0.5 * w >= 0.0 {
            0.5
        } else {
            -0.5
        };
        let q = [
            sign * d[0] * s[0],
            sign * (d[0] * s[1] + d[1] * s[0]),
            sign * d[1] * s[1],
        ];
        total += power_moment(xa, w, alpha, q);
    }
    Ok(total)
}

/// `∫_0^w (xa + t)^α (q0 + q1 t + q2 t²) dt`.
fn power_moment(xa: f64, w: f64, alpha: f64, q: [f64; 3]) -> f64 {
    if xa <= w {
        // Expand t^k in powers of (xa + t); the terms are all of size w^α.
        let xb = xa + w;
        let m = |j: i32| {
            let e = alpha + j as f64 + 1.0;
            (xb.powf(e) - xa.powf(e)) / e
        };
        let (m0, m1, m2) = (m(0), m(1), m(2));
        q[0] * m0 + q[1] * (m1 - xa * m0) + q[2] * (m2 - 2.0 * xa * m1 + xa * xa * m0)
    } else {
        // Away from the singularity x^α is analytic on a disc of radius xa > w
        // around the interval, so Gauss converges to rounding.
        let (nodes, weights) = gauss_legendre(16);
        nodes
            .iter()
            .zip(&weights)
            .map(|(&s, &wt)| {
                let t = s * w;
                wt * w * (xa + t).powf(alpha) * (q[0] + t * (q[1] + t * q[2]))
            })
            .sum()
    }
}

/// `∫_T |x - y|^{-1} dy` for a point `x` in the plane of the triangle.
pub fn triangle_potential(corners: [Point2; 3], x: Point2) -> f64 {
    let c = if crate::mesh::orient2d(corners[0], corners[1], corners[2]) > 0.0 {
        corners
    } else {
        [corners[0], corners[2], corners[1]]
    };
    let mut s = 0.0;
    for k in 0..3 {
        let (a, b) = (c[k], c[(k + 1) % 3]);
        let len = a.dist(b);
        let (tx, ty) = ((b.x - a.x) / len, (b.y - a.y) / len);
        let h = (a.x - x.x) * ty - (a.y - x.y) * tx;
        if h == 0.0 {
            continue;
        }
        let s0 = (a.x - x.x) * tx + (a.y - x.y) * ty;
        let s1 = (b.x - x.x) * tx + (b.y - x.y) * ty;
        s += h * ((s1 / h.abs()).asinh() - (s0 / h.abs()).asinh());
    }
    s
}

/// Manufactured data `f = W φ` for a conforming function `φ` given on a base
/// mesh that every computational mesh refines.
#[derive(Clone, Debug)]
pub struct Manufactured {
    pub phi: PwLinear,
    curl: Vec<[f64; 2]>,
}

const EDGE_POINTS: usize = 10;

impl Manufactured {
    pub fn new(phi: &CoefVec) -> Result<Self> {
        if phi.space.kind() != SpaceKind::Conforming {
            return Err(Error::InvalidParameter(
                "manufactured solution must be conforming".into(),
            ));
        }
        let phi = phi.to_pw_linear();
        let curl = curl_field(&phi)?.values;
        Ok(Manufactured { phi, curl })
    }

    /// The hat function of the centre node of the initial square mesh.
    pub fn centre_hat(base: Arc<Mesh>) -> Result<Self> {
        let space = Arc::new(DofSpace::conforming(Arc::clone(&base)));
        let centre = base
            .vertices
            .iter()
            .position(|p| p.x == 0.5 && p.y == 0.5)
            .and_then(|v| space.dof_of(v))
            .ok_or_else(|| {
                Error::InvalidParameter("base mesh has no interior centre node".into())
            })?;
        let mut c = space.zeros();
        c.values[centre] = 1.0;
        Manufactured::new(&c)
    }

    /// `φ` on the elements of a refinement of the base mesh.
    pub fn on_mesh(&self, mesh: &Arc<Mesh>) -> Result<PwLinear> {
        let base = &self.phi.mesh;
        let values = (0..mesh.n_triangles())
            .map(|t| {
                let parent = base.locate(mesh.centroid(t)).ok_or(Error::MeshMismatch(
                    "mesh does not refine the manufactured solution's mesh",
                ))?;
                Ok(mesh
                    .corners(t)
                    .map(|q| self.phi.eval_local(parent, base.barycentric(parent, q))))
            })
            .collect::<Result<_>>()?;
        Ok(PwLinear {
            mesh: Arc::clone(mesh),
            values,
        })
    }

    /// `w = V curl φ` at a point of the screen.
    pub fn potential(&self, x: Point2) -> [f64; 2] {
        let base = &self.phi.mesh;
        let mut w = [0.0; 2];
        for (t, c) in self.curl.iter().enumerate() {
            if c[0] == 0.0 && c[1] == 0.0 {
                continue;
            }
            let p = triangle_potential(base.corners(t), x) / (4.0 * PI);
            w[0] += c[0] * p;
            w[1] += c[1] * p;
        }
        w
    }

    /// `b_i = <W φ, ψ_i>`.
    ///
    /// Elementwise integration by parts gives `a(φ, ψ_i)` plus the boundary
    /// terms `Σ_T ∮_∂T ψ_i (w · t_T)` with `t_T` the counterclockwise tangent.
    /// The boundary terms vanish for conforming `ψ_i` but not for
    /// Crouzeix-Raviart functions, which jump across edges.
    pub fn rhs(&self, form: &EnergyForm, space: &DofSpace) -> Result<Vec<f64>> {
        let mesh = &form.mesh;
        let phi = self.on_mesh(mesh)?;
        let mut b = form.load_from_field(&curl_field(&phi)?, space)?;
        if space.kind() == SpaceKind::Conforming {
            return Ok(b);
        }
        let terms = edge_terms(mesh, space, |x| self.potential(x));
        for (bi, ti) in b.iter_mut().zip(terms) {
            *bi += ti;
        }
        Ok(b)
    }
}

/// `Σ_T ∮_∂T ψ_i (w · t_T)` for every basis function, with `t_T` the
/// counterclockwise unit tangent of `T`.
pub fn edge_terms(mesh: &Mesh, space: &DofSpace, w: impl Fn(Point2) -> [f64; 2]) -> Vec<f64> {
    let (nodes, weights) = gauss_legendre(EDGE_POINTS);
    // Moments ∫_e (w · t) λ_lo and ∫_e (w · t) λ_hi along each edge,
    // oriented from its lower to its higher vertex.
    let moments: Vec<[f64; 2]> = mesh
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (mesh.vertices[e.v[0]], mesh.vertices[e.v[1]]);
            let t = [(b.x - a.x) / e.length, (b.y - a.y) / e.length];
            let mut m = [0.0; 2];
            for (&s, &wt) in nodes.iter().zip(&weights) {
                let x = Point2::new(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y));
                let wx = w(x);
                let f = wt * e.length * (wx[0] * t[0] + wx[1] * t[1]);
                m[0] += f * (1.0 - s);
                m[1] += f * s;
            }
            m
        })
        .collect();
    let mut out = vec![0.0; space.dof_count()];
    for tri in 0..mesh.n_triangles() {
        let edges = mesh.element_edges(tri);
        let verts = mesh.triangles[tri].v;
        for (dof, vals) in space.local_basis(tri) {
            let Some(d) = dof else { continue };
            for (k, &e) in edges.iter().enumerate() {
                let edge = &mesh.edges()[e];
                let sign = if verts[k] == edge.v[0] { 1.0 } else { -1.0 };
                let at = |v: usize| vals[mesh.triangles[tri].local_index(v).expect("edge vertex")];
                let m = moments[e];
                out[d] += sign * (at(edge.v[0]) * m[0] + at(edge.v[1]) * m[1]);
            }
        }
    }
    out
}
