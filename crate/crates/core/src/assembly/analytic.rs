//! Closed-form panel integrals by reduction to the panel edges.
//!
//! In the plane `div_x (x - y)/|x - y| = 1/|x - y|` and
//! `(x - y)·n / |x - y| = -div_y (n |x - y|)`, so
//!
//! `∫_a ∫_b |x - y|^{-1} = -Σ_e Σ_f (n_e · n_f) ∫_e ∫_f |x - y|`
//!
//! over the edges `e` of `a` and `f` of `b` with outward normals. Each
//! segment pair integral is again closed form: after the substitution
//! `z = x - y` it becomes `∫ |z|` over a parallelogram, and
//! `div (z |z|) = 3 |z|` reduces that to its four sides.

use crate::mesh::{orient2d, Point2};

/// `∫_a ∫_b |x - y|^{-1} dy dx` for two triangles in the plane.
pub fn coplanar_pair_integral(a: [Point2; 3], b: [Point2; 3]) -> f64 {
    let a = ccw(a);
    let b = ccw(b);
    let mut sum = 0.0;
    for i in 0..3 {
        let (p, q) = (a[i], a[(i + 1) % 3]);
        let ne = outward_normal(p, q);
        for j in 0..3 {
            let (r, s) = (b[j], b[(j + 1) % 3]);
            let nf = outward_normal(r, s);
            let c = ne[0] * nf[0] + ne[1] * nf[1];
            if c != 0.0 {
                sum -= c * segment_pair(p, q, r, s);
            }
        }
    }
    sum
}

fn ccw(t: [Point2; 3]) -> [Point2; 3] {
    if orient2d(t[0], t[1], t[2]) > 0.0 {
        t
    } else {
        [t[0], t[2], t[1]]
    }
}

fn outward_normal(p: Point2, q: Point2) -> [f64; 2] {
    let l = p.dist(q);
    [(q.y - p.y) / l, -(q.x - p.x) / l]
}

/// `∫ sqrt(σ² + h²) dσ`.
fn line_primitive(s: f64, h: f64) -> f64 {
    let r = s.hypot(h);
    if h == 0.0 {
        0.5 * s * r
    } else {
        0.5 * (s * r + h * h * (s / h.abs()).asinh())
    }
}

/// Second primitive of `sqrt(σ² + h²)`.
fn line_primitive2(s: f64, h: f64) -> f64 {
    let r = s.hypot(h);
    if h == 0.0 {
        r * r * r / 6.0
    } else {
        (r * r * r / 3.0 + h * h * (s * (s / h.abs()).asinh() - r)) / 2.0
    }
}

/// Segments whose directions have a smaller sine are treated as parallel.
const PARALLEL_SINE: f64 = 1e-12;

/// `∫_{[p,q]} ∫_{[r,s]} |x - y| dy dx`.
pub fn segment_pair(p: Point2, q: Point2, r: Point2, s: Point2) -> f64 {
    let (l1, l2) = (p.dist(q), r.dist(s));
    let u = [(q.x - p.x) / l1, (q.y - p.y) / l1];
    let v = [(s.x - r.x) / l2, (s.y - r.y) / l2];
    let c = [p.x - r.x, p.y - r.y];
    let sine = u[0] * v[1] - u[1] * v[0];
    if sine.abs() < PARALLEL_SINE {
        let dir = if u[0] * v[0] + u[1] * v[1] > 0.0 {
            1.0
        } else {
            -1.0
        };
        let h = c[0] * u[1] - c[1] * u[0];
        let d = c[0] * u[0] + c[1] * u[1];
        // |x - y| = sqrt((σ + d)² + h²) with σ = s - dir·t.
        let f = |x: f64| line_primitive2(x + d, h);
        return if dir > 0.0 {
            f(l1) - f(l1 - l2) - f(0.0) + f(-l2)
        } else {
            f(l1 + l2) - f(l1) - f(l2) + f(0.0)
        };
    }
    // Parallelogram {c + σ u - τ v}, made counter-clockwise.
    let z0 = c;
    let z1 = [c[0] + l1 * u[0], c[1] + l1 * u[1]];
    let z2 = [z1[0] - l2 * v[0], z1[1] - l2 * v[1]];
    let z3 = [c[0] - l2 * v[0], c[1] - l2 * v[1]];
    let mut poly = [z0, z1, z2, z3];
    if sine > 0.0 {
        poly.reverse();
    }
    let mut sum = 0.0;
    for k in 0..4 {
        let (a, b) = (poly[k], poly[(k + 1) % 4]);
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let t = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
        let h = a[0] * t[1] - a[1] * t[0];
        if h == 0.0 {
            continue;
        }
        let s0 = a[0] * t[0] + a[1] * t[1];
        sum += h * (line_primitive(s0 + len, h) - line_primitive(s0, h));
    }
    sum / (3.0 * sine.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn collinear_segment_with_itself() {
        let v = segment_pair(p(0.0, 0.0), p(2.0, 0.0), p(0.0, 0.0), p(2.0, 0.0));
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
        let w = segment_pair(p(0.0, 0.0), p(2.0, 0.0), p(2.0, 0.0), p(0.0, 0.0));
        assert!((w - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn perpendicular_unit_segments() {
        // ∫∫ sqrt(s² + t²) over the unit square.
        let exact = (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln()) / 3.0;
        let v = segment_pair(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0), p(0.0, 1.0));
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn nearly_parallel_is_continuous() {
        let a = segment_pair(p(0.0, 0.0), p(1.0, 0.0), p(0.2, 0.3), p(1.5, 0.3));
        let b = segment_pair(p(0.0, 0.0), p(1.0, 0.0), p(0.2, 0.3), p(1.5, 0.3 + 1e-7));
        assert!((a - b).abs() < 1e-7);
    }
}
