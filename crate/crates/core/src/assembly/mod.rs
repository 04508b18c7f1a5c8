//! Galerkin assembly for the single-layer kernel `1 / (4π |x - y|)`.

mod analytic;
mod energy;
mod panel;
mod quadrature;
mod rhs;

pub use analytic::{coplanar_pair_integral, segment_pair};
pub use energy::EnergyForm;
pub use panel::{panel_integral, separation, Adjacency, PanelQuadrature, QuadSettings};
pub use quadrature::{gauss_legendre, PairCase, QuadratureRule, TriangleRule};
pub use rhs::{
    edge_terms, integrate_power_linear, rhs_constant, rhs_power, triangle_potential, Manufactured,
};
