//! Newest-vertex bisection.
//!
//! Marked elements have all three edges marked. The marking is then closed so
//! that any element with a marked edge also has its reference edge marked.
//! Each element is split by bisecting its reference edge and then, in each
//! child, the parent edge that became the child's reference edge if it is
//! marked. This gives 1, 2, 3 or 4 children and a conforming mesh.

use super::{Mesh, Triangle};
use crate::error::{Error, Result};

/// Parent/child links between a mesh and its refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementMap {
    pub child_to_parent: Vec<usize>,
    pub parent_to_children: Vec<Vec<usize>>,
}

impl RefinementMap {
    pub fn identity(n: usize) -> Self {
        RefinementMap {
            child_to_parent: (0..n).collect(),
            parent_to_children: (0..n).map(|t| vec![t]).collect(),
        }
    }

    pub fn n_parents(&self) -> usize {
        self.parent_to_children.len()
    }

    pub fn n_children(&self) -> usize {
        self.child_to_parent.len()
    }
}

/// Rotates a triangle so that its reference edge becomes local edge 0.
fn rotated(tri: &Triangle) -> [usize; 3] {
    let r = tri.ref_edge as usize;
    [tri.v[r], tri.v[(r + 1) % 3], tri.v[(r + 2) % 3]]
}

pub fn refine_nvb(mesh: &Mesh, marked: &[usize]) -> Result<(Mesh, RefinementMap)> {
    let nt = mesh.n_triangles();
    if let Some(&bad) = marked.iter().find(|&&t| t >= nt) {
        return Err(Error::IndexOutOfRange {
            what: "triangle",
            index: bad,
            len: nt,
        });
    }
    if marked.is_empty() {
        return Ok((mesh.clone(), RefinementMap::identity(nt)));
    }

    let edges = mesh.edges();
    let mut edge_marked = vec![false; edges.len()];
    for &t in marked {
        for e in mesh.element_edges(t) {
            edge_marked[e] = true;
        }
    }
    loop {
        let mut changed = false;
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let ids = mesh.element_edges(t);
            let r = ids[tri.ref_edge as usize];
            if !edge_marked[r] && ids.iter().any(|&e| edge_marked[e]) {
                edge_marked[r] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut vertices = mesh.vertices.clone();
    let mut midpoint_of = vec![usize::MAX; edges.len()];
    for (e, edge) in edges.iter().enumerate() {
        if edge_marked[e] {
            midpoint_of[e] = vertices.len();
            vertices.push(edge.midpoint);
        }
    }
    let mid = |a: usize, b: usize| -> Option<usize> {
        let e = mesh.edge_table.find(a, b).expect("edge of the mesh");
        edge_marked[e].then_some(midpoint_of[e])
    };

    let mut triangles = Vec::with_capacity(nt * 2);
    let mut child_to_parent = Vec::with_capacity(nt * 2);
    let mut parent_to_children = Vec::with_capacity(nt);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = rotated(tri);
        let mut kids: Vec<([usize; 3], u32)> = Vec::with_capacity(4);
        match mid(a, b) {
            None => {}
            Some(m) => {
                // Left child (c, a, m) and right child (b, c, m); in both the
                // reference edge is opposite the new vertex m.
                match mid(c, a) {
                    Some(m1) => {
                        kids.push(([m, c, m1], 2));
                        kids.push(([a, m, m1], 2));
                    }
                    None => kids.push(([c, a, m], 1)),
                }
                match mid(b, c) {
                    Some(m2) => {
                        kids.push(([m, b, m2], 2));
                        kids.push(([c, m, m2], 2));
                    }
                    None => kids.push(([b, c, m], 1)),
                }
            }
        }
        let first = triangles.len();
        if kids.is_empty() {
            triangles.push(Triangle {
                parent: Some(t),
                ..tri.clone()
            });
        } else {
            for (v, depth) in kids {
                triangles.push(Triangle {
                    v,
                    ref_edge: 0,
                    parent: Some(t),
                    level: tri.level + depth,
                });
            }
        }
        let children: Vec<usize> = (first..triangles.len()).collect();
        child_to_parent.extend(std::iter::repeat_n(t, children.len()));
        parent_to_children.push(children);
    }

    let refined = Mesh::new(vertices, triangles)?;
    Ok((
        refined,
        RefinementMap {
            child_to_parent,
            parent_to_children,
        },
    ))
}

/// Uniform bisec(3) refinement: every element is split into four.
pub fn uniform_refine(mesh: &Mesh) -> (Mesh, RefinementMap) {
    let all: Vec<usize> = (0..mesh.n_triangles()).collect();
    refine_nvb(mesh, &all).expect("uniform refinement of a valid mesh")
}

/// Checks that children tile their parents in area and returns the largest
/// relative deviation.
pub fn max_tiling_defect(coarse: &Mesh, fine: &Mesh, map: &RefinementMap) -> f64 {
    map.parent_to_children
        .iter()
        .enumerate()
        .map(|(p, kids)| {
            let sum: f64 = kids.iter().map(|&c| fine.area(c)).sum();
            (sum - coarse.area(p)).abs() / coarse.area(p)
        })
        .fold(0.0, f64::max)
}
