//! Independent reference values for the single-layer panel integrals.
#![allow(dead_code)]

use std::sync::Arc;

use crbem::assembly::QuadSettings;
use crbem::estimators::{solve_pair, RhsRecipe, SolvePair};
use crbem::mesh::{
    build_initial_square_mesh, graded_square_mesh, refine_nvb, uniform_refine, Mesh, Point2,
};

/// `∫_T |x - y|^{-1} dy` for `x` in the plane of `T`, summed edge by edge in
/// closed form.
pub fn potential(t: [Point2; 3], x: Point2) -> f64 {
    let ccw = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x) > 0.0;
    let t = if ccw { t } else { [t[0], t[2], t[1]] };
    let mut s = 0.0;
    for k in 0..3 {
        let (p, q) = (t[k], t[(k + 1) % 3]);
        let len = ((q.x - p.x).powi(2) + (q.y - p.y).powi(2)).sqrt();
        let (tx, ty) = ((q.x - p.x) / len, (q.y - p.y) / len);
        let h = (p.x - x.x) * ty - (p.y - x.y) * tx;
        if h.abs() < 1e-300 {
            continue;
        }
        let s0 = (p.x - x.x) * tx + (p.y - x.y) * ty;
        let s1 = (q.x - x.x) * tx + (q.y - x.y) * ty;
        s += h * ((s1 / h.abs()).asinh() - (s0 / h.abs()).asinh());
    }
    s
}

fn gauss(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..200 {
            let (mut p0, mut p1) = (1.0f64, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Duffy-collapsed Gauss with `n` points per
/// direction, returning physical points and weights (summing to the area).
fn triangle_rule(t: [Point2; 3], n: usize) -> Vec<(Point2, f64)> {
    let (g, gw) = gauss(n);
    let area =
        0.5 * ((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x)).abs();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (g[i], g[j]);
            let l1 = u * (1.0 - v);
            let l2 = u * v;
            let l0 = 1.0 - l1 - l2;
            let p = Point2::new(
                l0 * t[0].x + l1 * t[1].x + l2 * t[2].x,
                l0 * t[0].y + l1 * t[1].y + l2 * t[2].y,
            );
            out.push((p, 2.0 * area * gw[i] * gw[j] * u));
        }
    }
    out
}

fn split(t: [Point2; 3]) -> [[Point2; 3]; 4] {
    let m = |a: Point2, b: Point2| Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    let (m01, m12, m20) = (m(t[0], t[1]), m(t[1], t[2]), m(t[2], t[0]));
    [
        [t[0], m01, m20],
        [m01, t[1], m12],
        [m20, m12, t[2]],
        [m01, m12, m20],
    ]
}

fn adaptive(outer: [Point2; 3], inner: [Point2; 3], whole: f64, tol: f64, depth: u32) -> f64 {
    let kids = split(outer);
    let parts: Vec<f64> = kids
        .iter()
        .map(|&k| {
            triangle_rule(k, 10)
                .iter()
                .map(|(p, w)| w * potential(inner, *p))
                .sum()
        })
        .collect();
    let sum: f64 = parts.iter().sum();
    if (sum - whole).abs() <= tol || depth >= 14 {
        return sum;
    }
    kids.iter()
        .zip(&parts)
        .map(|(&k, &part)| adaptive(k, inner, part, tol / 2.0, depth + 1))
        .sum()
}

/// `(1/4π) ∫_a ∫_b |x - y|^{-1}` by the closed-form inner integral and
/// adaptive subdivision of the outer triangle.
pub fn panel_oracle(a: [Point2; 3], b: [Point2; 3], tol: f64) -> f64 {
    let whole: f64 = triangle_rule(a, 10)
        .iter()
        .map(|(p, w)| w * potential(b, *p))
        .sum();
    adaptive(a, b, whole, tol, 0) / (4.0 * std::f64::consts::PI)
}

/// Plain tensor Gauss with `n` points per direction on each triangle.
pub fn tensor_gauss(a: [Point2; 3], b: [Point2; 3], n: usize) -> f64 {
    let ra = triangle_rule(a, n);
    let rb = triangle_rule(b, n);
    let mut s = 0.0;
    for (x, wx) in &ra {
        for (y, wy) in &rb {
            s += wx * wy / ((x.x - y.x).powi(2) + (x.y - y.y).powi(2)).sqrt();
        }
    }
    s / (4.0 * std::f64::consts::PI)
}

pub fn pt(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Locally refined mesh with hanging-node closure.
pub fn nvb_fixture() -> Mesh {
    let (m, _) = uniform_refine(&build_initial_square_mesh());
    let (m, _) = refine_nvb(&m, &[0, 5, 11]).unwrap();
    refine_nvb(&m, &[2, 3]).unwrap().0
}

pub const FIXTURE_RECIPES: [fn() -> RhsRecipe; 3] = [
    || RhsRecipe::Constant,
    || RhsRecipe::Power(-0.6),
    || RhsRecipe::Constant,
];

/// Solve pairs on the initial mesh, a graded mesh and a locally refined mesh.
pub fn fixture_pairs() -> Vec<SolvePair> {
    let meshes = [
        build_initial_square_mesh(),
        graded_square_mesh(2, 2.0).unwrap(),
        nvb_fixture(),
    ];
    meshes
        .into_iter()
        .zip(FIXTURE_RECIPES)
        .map(|(m, r)| solve_pair(Arc::new(m), &r(), QuadSettings::default()).unwrap())
        .collect()
}
