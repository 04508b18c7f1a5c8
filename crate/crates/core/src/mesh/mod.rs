//! Triangulations of the screen, newest-vertex bisection and mesh I/O.
//!
//! Triangles are stored counterclockwise. Local edge `k` joins local vertices
//! `k` and `k + 1 (mod 3)` and lies opposite local vertex `k + 2 (mod 3)`.

mod generate;
mod io;
mod refine;

pub use generate::{build_initial_square_mesh, graded_square_mesh, grading_map};
pub use io::{mesh_io_read, mesh_io_write};
pub use refine::{max_tiling_defect, refine_nvb, uniform_refine, RefinementMap};

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Twice the signed area of `(a, b, c)`; positive for counterclockwise order.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    /// Vertex indices, counterclockwise.
    pub v: [usize; 3],
    /// Local index of the reference edge used by newest-vertex bisection.
    pub ref_edge: u8,
    /// Index of the parent triangle in the mesh this one was refined from.
    pub parent: Option<usize>,
    /// Number of bisections separating this triangle from the initial mesh.
    pub level: u32,
}

impl Triangle {
    pub fn new(v: [usize; 3], ref_edge: u8) -> Self {
        Triangle {
            v,
            ref_edge,
            parent: None,
            level: 0,
        }
    }

    /// Endpoints of local edge `k`.
    pub fn edge(&self, k: usize) -> (usize, usize) {
        (self.v[k], self.v[(k + 1) % 3])
    }

    pub fn local_index(&self, vertex: usize) -> Option<usize> {
        self.v.iter().position(|&w| w == vertex)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Endpoints, lower vertex index first. This fixes the edge orientation.
    pub v: [usize; 2],
    /// Adjacent triangles; `elements[0]` has the lower index.
    pub elements: [Option<usize>; 2],
    pub boundary: bool,
    pub midpoint: Point2,
    pub length: f64,
}

impl Edge {
    pub fn adjacent(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().flatten().copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTable {
    pub edges: Vec<Edge>,
    /// Global edge index of each local edge of each triangle.
    pub element_edges: Vec<[usize; 3]>,
    lookup: HashMap<(usize, usize), usize>,
}

impl EdgeTable {
    fn build(vertices: &[Point2], triangles: &[Triangle]) -> Result<Self> {
        let mut edges: Vec<Edge> = Vec::with_capacity(triangles.len() * 3 / 2 + 4);
        let mut lookup = HashMap::with_capacity(triangles.len() * 2);
        let mut element_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut ids = [0; 3];
            for (k, id) in ids.iter_mut().enumerate() {
                let (a, b) = tri.edge(k);
                let key = (a.min(b), a.max(b));
                *id = match lookup.get(&key) {
                    Some(&e) => {
                        let edge: &mut Edge = &mut edges[e];
                        if edge.elements[1].is_some() {
                            return Err(Error::NonConforming(format!(
                                "edge ({}, {}) shared by more than two triangles",
                                key.0, key.1
                            )));
                        }
                        edge.elements[1] = Some(t);
                        edge.boundary = false;
                        e
                    }
                    None => {
                        let e = edges.len();
                        let (pa, pb) = (vertices[key.0], vertices[key.1]);
                        edges.push(Edge {
                            v: [key.0, key.1],
                            elements: [Some(t), None],
                            boundary: true,
                            midpoint: pa.midpoint(pb),
                            length: pa.dist(pb),
                        });
                        lookup.insert(key, e);
                        e
                    }
                };
            }
            element_edges.push(ids);
        }
        Ok(EdgeTable {
            edges,
            element_edges,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Global index of the edge joining two vertices, if present.
    pub fn find(&self, a: usize, b: usize) -> Option<usize> {
        self.lookup.get(&(a.min(b), a.max(b))).copied()
    }
}

/// A conforming triangulation. Immutable once built; refinement returns a new mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point2>,
    pub triangles: Vec<Triangle>,
    pub edge_table: EdgeTable,
    pub boundary_vertex_flags: Vec<bool>,
    vertex_elements: Vec<Vec<usize>>,
}

impl Mesh {
    /// Builds the edge table and checks every mesh invariant: positive
    /// orientation, valid reference edges, at most two triangles per edge and
    /// no hanging nodes.
    pub fn new(vertices: Vec<Point2>, triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidParameter("mesh has no triangles".into()));
        }
        for (i, p) in vertices.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidParameter(format!("vertex {i} is not finite")));
            }
        }
        let nv = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            for &w in &tri.v {
                if w >= nv {
                    return Err(Error::IndexOutOfRange {
                        what: "vertex",
                        index: w,
                        len: nv,
                    });
                }
            }
            if tri.ref_edge > 2 {
                return Err(Error::InvalidParameter(format!(
                    "triangle {t} has reference edge {}",
                    tri.ref_edge
                )));
            }
            let [a, b, c] = tri.v;
            if a == b || b == c || a == c {
                return Err(Error::DegenerateTriangle(t));
            }
            if orient2d(vertices[a], vertices[b], vertices[c]) <= 0.0 {
                return Err(Error::DegenerateTriangle(t));
            }
        }
        let edge_table = EdgeTable::build(&vertices, &triangles)?;
        let mut boundary_vertex_flags = vec![false; nv];
        for e in edge_table.edges.iter().filter(|e| e.boundary) {
            boundary_vertex_flags[e.v[0]] = true;
            boundary_vertex_flags[e.v[1]] = true;
        }
        let mut vertex_elements = vec![Vec::new(); nv];
        for (t, tri) in triangles.iter().enumerate() {
            for &w in &tri.v {
                vertex_elements[w].push(t);
            }
        }
        let mesh = Mesh {
            vertices,
            triangles,
            edge_table,
            boundary_vertex_flags,
            vertex_elements,
        };
        mesh.check_no_hanging_nodes()?;
        Ok(mesh)
    }

    fn check_no_hanging_nodes(&self) -> Result<()> {
        // Interior edges are matched by construction, so a hanging node can only
        // sit in the interior of an edge that has a single neighbor.
        let boundary: Vec<&Edge> = self
            .edge_table
            .edges
            .iter()
            .filter(|e| e.boundary)
            .collect();
        let mut candidates: Vec<usize> = boundary.iter().flat_map(|e| e.v).collect();
        candidates.sort_unstable();
        candidates.dedup();
        for e in &boundary {
            let (a, b) = (self.vertices[e.v[0]], self.vertices[e.v[1]]);
            let len2 = (b.x - a.x).powi(2) + (b.y - a.y).powi(2);
            for &w in &candidates {
                if w == e.v[0] || w == e.v[1] {
                    continue;
                }
                let p = self.vertices[w];
                let cross = orient2d(a, b, p);
                if cross.abs() > 1e-12 * len2 {
                    continue;
                }
                let s = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
                if s > 1e-12 && s < 1.0 - 1e-12 {
                    return Err(Error::NonConforming(format!(
                        "vertex {w} hangs on edge ({}, {})",
                        e.v[0], e.v[1]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_table.len()
    }

    pub fn corners(&self, t: usize) -> [Point2; 3] {
        self.triangles[t].v.map(|w| self.vertices[w])
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * orient2d(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.area(t)).sum()
    }

    pub fn centroid(&self, t: usize) -> Point2 {
        let [a, b, c] = self.corners(t);
        Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edge_table.edges
    }

    pub fn element_edges(&self, t: usize) -> [usize; 3] {
        self.edge_table.element_edges[t]
    }

    pub fn n_interior_edges(&self) -> usize {
        self.edges().iter().filter(|e| !e.boundary).count()
    }

    pub fn n_interior_vertices(&self) -> usize {
        self.boundary_vertex_flags.iter().filter(|b| !**b).count()
    }

    /// Local mesh width `h(T) = |T|^{1/2}` per element.
    pub fn mesh_width(&self) -> Vec<f64> {
        (0..self.n_triangles())
            .map(|t| self.area(t).sqrt())
            .collect()
    }

    /// Smallest interior angle over all elements, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.n_triangles() {
            let p = self.corners(t);
            for i in 0..3 {
                let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
                let u = (b.x - a.x, b.y - a.y);
                let v = (c.x - a.x, c.y - a.y);
                let cos = (u.0 * v.0 + u.1 * v.1) / (a.dist(b) * a.dist(c));
                min = min.min(cos.clamp(-1.0, 1.0).acos());
            }
        }
        min
    }

    fn check_vertex(&self, node: usize) -> Result<()> {
        if node >= self.n_vertices() {
            return Err(Error::IndexOutOfRange {
                what: "vertex",
                index: node,
                len: self.n_vertices(),
            });
        }
        Ok(())
    }

    fn check_element(&self, t: usize) -> Result<()> {
        if t >= self.n_triangles() {
            return Err(Error::IndexOutOfRange {
                what: "triangle",
                index: t,
                len: self.n_triangles(),
            });
        }
        Ok(())
    }

    /// Elements containing `node`, ascending.
    pub fn node_patch(&self, node: usize) -> Result<Vec<usize>> {
        self.check_vertex(node)?;
        Ok(self.vertex_elements[node].clone())
    }

    /// The one or two elements sharing `edge`.
    pub fn edge_patch(&self, edge: usize) -> Result<Vec<usize>> {
        let e = self.edges().get(edge).ok_or(Error::IndexOutOfRange {
            what: "edge",
            index: edge,
            len: self.n_edges(),
        })?;
        Ok(e.adjacent().collect())
    }

    /// All elements sharing at least one vertex with `t`, including `t`.
    pub fn element_patch(&self, t: usize) -> Result<Vec<usize>> {
        self.check_element(t)?;
        let mut patch: Vec<usize> = self.triangles[t]
            .v
            .iter()
            .flat_map(|&w| self.vertex_elements[w].iter().copied())
            .collect();
        patch.sort_unstable();
        patch.dedup();
        Ok(patch)
    }

    /// Index of an element containing `p` (closed), by brute-force search.
    pub fn locate(&self, p: Point2) -> Option<usize> {
        (0..self.n_triangles()).find(|&t| {
            let [a, b, c] = self.corners(t);
            let scale = 1e-12 * orient2d(a, b, c);
            orient2d(a, b, p) >= -scale
                && orient2d(b, c, p) >= -scale
                && orient2d(c, a, p) >= -scale
        })
    }

    /// Barycentric coordinates of `p` with respect to element `t`.
    pub fn barycentric(&self, t: usize, p: Point2) -> [f64; 3] {
        let [a, b, c] = self.corners(t);
        let twice = orient2d(a, b, c);
        [
            orient2d(p, b, c) / twice,
            orient2d(a, p, c) / twice,
            orient2d(a, b, p) / twice,
        ]
    }
}
