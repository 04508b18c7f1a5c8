//! Quadrature for `∫_{T1}∫_{T2} |x - y|^{-1}` over pairs of flat triangles.
//!
//! Both triangles are pulled back to the reference triangle
//! `K = {0 <= x2 <= x1 <= 1}` by `χ(x) = A + x1 (B - A) + x2 (C - B)`.
//! Pairs sharing a face, an edge or a vertex are handled by the Sauter-Schwab
//! regularizing transformations of `[0,1]^4`, which cancel the singularity
//! and leave a smooth integrand for tensor Gauss rules.

use crate::mesh::Point2;

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    Identical,
    /// Shared edge `A -> B` in both parametrizations.
    Edge,
    /// Shared vertex `A` in both parametrizations.
    Vertex,
    Disjoint,
}

/// A rule on the reference triangle: points `(x1, x2)` and weights.
#[derive(Clone, Debug)]
pub struct TriangleRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    /// Collapsed tensor Gauss rule with `order` points per direction.
    pub fn collapsed(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut points = Vec::with_capacity(order * order);
        let mut weights = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                points.push([x[i], x[i] * x[j]]);
                weights.push(w[i] * w[j] * x[i]);
            }
        }
        TriangleRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Physical points on the triangle `(a, b, c)`.
    pub fn map(&self, [a, b, c]: [Point2; 3]) -> Vec<Point2> {
        self.points
            .iter()
            .map(|&[s, t]| {
                Point2::new(
                    a.x + s * (b.x - a.x) + t * (c.x - b.x),
                    a.y + s * (b.y - a.y) + t * (c.y - b.y),
                )
            })
            .collect()
    }
}

/// Points `(x̂, ŷ)` in `K × K` with weights for one pair case. `order` is
/// the number of Gauss points in each regularized direction.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub case: PairCase,
    pub order: usize,
    pub points: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(case: PairCase, order: usize) -> Self {
        let (g, gw) = gauss_legendre(order);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut push = |x: [f64; 2], y: [f64; 2], w: f64| {
            points.push([x[0], x[1], y[0], y[1]]);
            weights.push(w);
        };
        if case == PairCase::Disjoint {
            let t = TriangleRule::collapsed(order);
            for (p, wp) in t.points.iter().zip(&t.weights) {
                for (q, wq) in t.points.iter().zip(&t.weights) {
                    push(*p, *q, wp * wq);
                }
            }
            return QuadratureRule {
                case,
                order,
                points,
                weights,
            };
        }
        // Every singular case has |x - y| = ξ |F(η)| and a Jacobian with a
        // factor ξ³, so the ξ integrand is exactly ξ² and two points suffice.
        let (gx, gxw) = gauss_legendre(2);
        for (a, &xi) in gx.iter().enumerate() {
            for (b, &e1) in g.iter().enumerate() {
                for (c, &e2) in g.iter().enumerate() {
                    for (d, &e3) in g.iter().enumerate() {
                        let w = gxw[a] * gw[b] * gw[c] * gw[d];
                        match case {
                            PairCase::Identical => {
                                let w = w * xi.powi(3) * e1 * e1 * e2;
                                let x = [xi, xi * (1.0 - e1 + e1 * e2)];
                                let y = [xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)];
                                push(x, y, w);
                                push(y, x, w);
                                let x = [xi, xi * e1 * (1.0 - e2 + e2 * e3)];
                                let y = [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)];
                                push(x, y, w);
                                push(y, x, w);
                                let x = [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)];
                                let y = [xi, xi * e1 * (1.0 - e2)];
                                push(x, y, w);
                                push(y, x, w);
                            }
                            PairCase::Edge => {
                                let w0 = w * xi.powi(3) * e1 * e1;
                                let w1 = w0 * e2;
                                push(
                                    [xi, xi * e1 * e3],
                                    [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
                                    w0,
                                );
                                push(
                                    [xi, xi * e1],
                                    [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)],
                                    w1,
                                );
                                push(
                                    [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
                                    [xi, xi * e1 * e2 * e3],
                                    w1,
                                );
                                push(
                                    [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)],
                                    [xi, xi * e1],
                                    w1,
                                );
                                push(
                                    [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)],
                                    [xi, xi * e1 * e2],
                                    w1,
                                );
                            }
                            PairCase::Vertex => {
                                let w = w * xi.powi(3) * e2;
                                let x = [xi, xi * e1];
                                let y = [xi * e2, xi * e2 * e3];
                                push(x, y, w);
                                push(y, x, w);
                            }
                            PairCase::Disjoint => unreachable!(),
                        }
                    }
                }
            }
        }
        QuadratureRule {
            case,
            order,
            points,
            weights,
        }
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ w / |χ_a(x̂) - χ_b(ŷ)|`, without the Jacobian factors.
    pub fn apply(&self, a: [Point2; 3], b: [Point2; 3]) -> f64 {
        let (da, ea) = (sub(a[1], a[0]), sub(a[2], a[1]));
        let (db, eb) = (sub(b[1], b[0]), sub(b[2], b[1]));
        let mut s = 0.0;
        for (p, w) in self.points.iter().zip(&self.weights) {
            let dx = (a[0].x + p[0] * da.0 + p[1] * ea.0) - (b[0].x + p[2] * db.0 + p[3] * eb.0);
            let dy = (a[0].y + p[0] * da.1 + p[1] * ea.1) - (b[0].y + p[2] * db.1 + p[3] * eb.1);
            s += w / (dx * dx + dy * dy).sqrt();
        }
        s
    }
}

fn sub(p: Point2, q: Point2) -> (f64, f64) {
    (p.x - q.x, p.y - q.y)
}
