use super::{uniform_refine, Mesh, Point2, Triangle};
use crate::error::{Error, Result};

/// The unit square cut along both diagonals and both midlines: 8 congruent
/// right isosceles triangles whose reference edges lie on the diagonals.
pub fn build_initial_square_mesh() -> Mesh {
    let vertices = vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
        Point2::new(0.5, 0.0),
        Point2::new(1.0, 0.5),
        Point2::new(0.5, 1.0),
        Point2::new(0.0, 0.5),
        Point2::new(0.5, 0.5),
    ];
    let triangles = vec![
        Triangle::new([0, 4, 8], 2),
        Triangle::new([4, 1, 8], 1),
        Triangle::new([1, 5, 8], 2),
        Triangle::new([5, 2, 8], 1),
        Triangle::new([2, 6, 8], 2),
        Triangle::new([6, 3, 8], 1),
        Triangle::new([3, 7, 8], 2),
        Triangle::new([7, 0, 8], 1),
    ];
    Mesh::new(vertices, triangles).expect("initial mesh is valid")
}

/// Coordinate map `g_β` pushing points towards `t = 0` and `t = 1`.
pub fn grading_map(t: f64, beta: f64) -> f64 {
    if t <= 0.5 {
        0.5 * (2.0 * t).powf(beta)
    } else {
        1.0 - 0.5 * (2.0 * (1.0 - t)).powf(beta)
    }
}

/// Mesh of the unit square with `n` cells per side, graded towards the
/// boundary curve with exponent `beta`.
///
/// Built by refining the initial mesh uniformly until it has `n` cells per
/// side and then mapping each coordinate through [`grading_map`], so the
/// result is conforming by construction. `n` must be a power of two.
pub fn graded_square_mesh(n: usize, beta: f64) -> Result<Mesh> {
    if !beta.is_finite() || beta < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "grading exponent must be >= 1, got {beta}"
        )));
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "cells per side must be a power of two >= 2, got {n}"
        )));
    }
    let mut mesh = build_initial_square_mesh();
    for _ in 1..n.trailing_zeros() {
        mesh = uniform_refine(&mesh).0;
    }
    let vertices = mesh
        .vertices
        .iter()
        .map(|p| Point2::new(grading_map(p.x, beta), grading_map(p.y, beta)))
        .collect();
    let triangles = mesh
        .triangles
        .into_iter()
        .map(|t| Triangle { parent: None, ..t })
        .collect();
    Mesh::new(vertices, triangles)
}
