use std::f64::consts::PI;

use super::analytic::coplanar_pair_integral;
use super::quadrature::{PairCase, QuadratureRule};
use crate::error::{Error, Result};
use crate::mesh::{orient2d, Point2};

/// Quadrature orders for the panel-pair integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadSettings {
    /// Points per dimension for pairs sharing a face, edge or vertex.
    pub singular_order: usize,
    /// Points per dimension for disjoint pairs closer than `far_separation`.
    pub near_order: usize,
    pub far_order: usize,
    /// Separation, in diameters of the larger panel, beyond which a pair is far.
    pub far_separation: f64,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings::with_order(7)
    }
}

impl QuadSettings {
    /// Singular order `p`, near-field `p - 1`, far-field `min(p, 3)`.
    pub fn with_order(p: usize) -> Self {
        QuadSettings {
            singular_order: p,
            near_order: p.saturating_sub(1).max(1),
            far_order: p.min(3),
            far_separation: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.singular_order == 0 || self.near_order == 0 || self.far_order == 0 {
            return Err(Error::InvalidParameter(
                "quadrature order must be >= 1".into(),
            ));
        }
        if !(self.far_separation > 0.0) {
            return Err(Error::InvalidParameter(
                "far-field separation must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Precomputed rules for one set of orders.
#[derive(Clone, Debug)]
pub struct PanelQuadrature {
    pub settings: QuadSettings,
    identical: QuadratureRule,
    edge: QuadratureRule,
    vertex: QuadratureRule,
    near: QuadratureRule,
    far: QuadratureRule,
}

/// How two panels touch, with both vertex lists reordered so that shared
/// vertices come first and in matching order.
#[derive(Clone, Copy, Debug)]
pub struct Adjacency {
    pub case: PairCase,
    pub a: [Point2; 3],
    pub b: [Point2; 3],
}

impl Adjacency {
    /// Classifies a pair from a predicate telling whether vertex `i` of the
    /// first panel coincides with vertex `j` of the second.
    pub fn classify(a: [Point2; 3], b: [Point2; 3], same: impl Fn(usize, usize) -> bool) -> Self {
        let mut shared = Vec::with_capacity(3);
        for i in 0..3 {
            for j in 0..3 {
                if same(i, j) {
                    shared.push((i, j));
                }
            }
        }
        let rest = |used: &[usize]| (0..3).find(|k| !used.contains(k)).expect("three vertices");
        match shared.len() {
            0 => Adjacency {
                case: PairCase::Disjoint,
                a,
                b,
            },
            1 => {
                let (i, j) = shared[0];
                Adjacency {
                    case: PairCase::Vertex,
                    a: [a[i], a[(i + 1) % 3], a[(i + 2) % 3]],
                    b: [b[j], b[(j + 1) % 3], b[(j + 2) % 3]],
                }
            }
            2 => {
                let ((i0, j0), (i1, j1)) = (shared[0], shared[1]);
                Adjacency {
                    case: PairCase::Edge,
                    a: [a[i0], a[i1], a[rest(&[i0, i1])]],
                    b: [b[j0], b[j1], b[rest(&[j0, j1])]],
                }
            }
            _ => Adjacency {
                case: PairCase::Identical,
                a,
                b: a,
            },
        }
    }
}

fn diameter(t: &[Point2; 3]) -> f64 {
    t[0].dist(t[1]).max(t[1].dist(t[2])).max(t[2].dist(t[0]))
}

/// `diam² / area` above which a panel counts as stretched; a right isosceles
/// triangle has 4.
pub const STRETCH_LIMIT: f64 = 6.0;

fn is_stretched(t: &[Point2; 3]) -> bool {
    let d = diameter(t);
    d * d > STRETCH_LIMIT * 0.5 * orient2d(t[0], t[1], t[2]).abs()
}

fn bounding_circle(t: &[Point2; 3]) -> (Point2, f64) {
    let c = Point2::new(
        (t[0].x + t[1].x + t[2].x) / 3.0,
        (t[0].y + t[1].y + t[2].y) / 3.0,
    );
    (c, t.iter().map(|p| p.dist(c)).fold(0.0, f64::max))
}

/// Lower bound for the distance between two panels.
pub fn separation(a: &[Point2; 3], b: &[Point2; 3]) -> f64 {
    let (ca, ra) = bounding_circle(a);
    let (cb, rb) = bounding_circle(b);
    ca.dist(cb) - ra - rb
}

impl PanelQuadrature {
    pub fn new(settings: QuadSettings) -> Result<Self> {
        settings.validate()?;
        Ok(PanelQuadrature {
            settings,
            identical: QuadratureRule::new(PairCase::Identical, settings.singular_order),
            edge: QuadratureRule::new(PairCase::Edge, settings.singular_order),
            vertex: QuadratureRule::new(PairCase::Vertex, settings.singular_order),
            near: QuadratureRule::new(PairCase::Disjoint, settings.near_order),
            far: QuadratureRule::new(PairCase::Disjoint, settings.far_order),
        })
    }

    /// True when a disjoint pair is far enough for the far-field rule.
    pub fn is_far(&self, a: &[Point2; 3], b: &[Point2; 3]) -> bool {
        separation(a, b) >= self.settings.far_separation * diameter(a).max(diameter(b))
    }

    /// `(1/4π) ∫_a ∫_b |x - y|^{-1}` for an already classified pair.
    ///
    /// Touching or near pairs involving a stretched panel are integrated in
    /// closed form, since the tensor rules lose their accuracy there.
    pub fn integrate(&self, adj: &Adjacency) -> f64 {
        let far = adj.case == PairCase::Disjoint && self.is_far(&adj.a, &adj.b);
        if !far && (is_stretched(&adj.a) || is_stretched(&adj.b)) {
            return coplanar_pair_integral(adj.a, adj.b) / (4.0 * PI);
        }
        let rule = match adj.case {
            PairCase::Identical => &self.identical,
            PairCase::Edge => &self.edge,
            PairCase::Vertex => &self.vertex,
            PairCase::Disjoint if far => &self.far,
            PairCase::Disjoint => &self.near,
        };
        let ja = orient2d(adj.a[0], adj.a[1], adj.a[2]).abs();
        let jb = orient2d(adj.b[0], adj.b[1], adj.b[2]).abs();
        ja * jb / (4.0 * PI) * rule.apply(adj.a, adj.b)
    }
}

/// `(1/4π) ∫_{ta} ∫_{tb} |x - y|^{-1} dy dx` for two triangles in the plane.
///
/// Shared vertices are detected from coordinates (relative tolerance 1e-14).
pub fn panel_integral(ta: [Point2; 3], tb: [Point2; 3], settings: QuadSettings) -> Result<f64> {
    for t in [&ta, &tb] {
        let area2 = orient2d(t[0], t[1], t[2]).abs();
        if !(area2 > 0.0) || !t.iter().all(|p| p.is_finite()) {
            return Err(Error::DegenerateTriangle(0));
        }
    }
    let scale = diameter(&ta).max(diameter(&tb));
    let adj = Adjacency::classify(ta, tb, |i, j| ta[i].dist(tb[j]) <= 1e-14 * scale);
    Ok(PanelQuadrature::new(settings)?.integrate(&adj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn classification() {
        let a = [p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)];
        let b = [p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        let adj = Adjacency::classify(a, b, |i, j| a[i] == b[j]);
        assert_eq!(adj.case, PairCase::Edge);
        assert_eq!(adj.a[0], adj.b[0]);
        assert_eq!(adj.a[1], adj.b[1]);
        let c = [p(1.0, 0.0), p(2.0, 0.0), p(1.0, -1.0)];
        let adj = Adjacency::classify(a, c, |i, j| a[i] == c[j]);
        assert_eq!(adj.case, PairCase::Vertex);
        assert_eq!(adj.a[0], p(1.0, 0.0));
        assert_eq!(adj.b[0], p(1.0, 0.0));
    }

    #[test]
    fn degenerate_rejected() {
        let a = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        let b = [p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)];
        assert!(panel_integral(a, b, QuadSettings::default()).is_err());
    }

    #[test]
    fn bad_settings_rejected() {
        let s = QuadSettings {
            singular_order: 0,
            ..QuadSettings::default()
        };
        assert!(PanelQuadrature::new(s).is_err());
    }
}
