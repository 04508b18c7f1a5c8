//! Coarse/fine Galerkin solves and the two-level error estimators.

mod solve;

pub use solve::{
    conforming_component, solve_conforming, solve_pair, LevelSolution, RhsRecipe, SolvePair,
};

use std::sync::Arc;

use crate::error::Result;
use crate::mesh::Mesh;
use crate::space::{
    clement_interpolate, curl_field, embed_coarse_in_fine, jump_field, project_pwconst, DofSpace,
    PwConstVecField, PwLinear,
};

/// How the edge jump term is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JumpOptions {
    /// Add the L² part of the jump to its tangential derivative.
    pub full_h1: bool,
    /// Count boundary edges, where the jump is the trace against zero.
    pub include_boundary: bool,
    /// Weight by the mean `h_T² = |T|` of the adjacent elements instead of
    /// `|e|²`.
    pub element_width: bool,
}

impl Default for JumpOptions {
    fn default() -> Self {
        JumpOptions {
            full_h1: false,
            include_boundary: true,
            element_width: false,
        }
    }
}

/// Per-edge contributions `|e|² |e| (⟦v⟧')²` (plus the L² part if requested).
/// With `element_width` the factor `|e|²` becomes the mean area of the
/// adjacent elements.
pub fn jump_edge_contributions(v: &PwLinear, opts: JumpOptions) -> Vec<f64> {
    let jumps = jump_field(v);
    v.mesh
        .edges()
        .iter()
        .zip(&jumps.jumps)
        .map(|(e, j)| {
            if e.boundary && !opts.include_boundary {
                return 0.0;
            }
            let l = e.length;
            let weight = if opts.element_width {
                let n = e.adjacent().count() as f64;
                e.adjacent().map(|t| v.mesh.area(t)).sum::<f64>() / n
            } else {
                l * l
            };
            let d = j.tangential_derivative(l);
            let mut c = l * d * d;
            if opts.full_h1 {
                let [a, b] = j.at_ends;
                c += l * (a * a + a * b + b * b) / 3.0;
            }
            weight * c
        })
        .collect()
}

/// `ρ² = Σ_e |e|² ‖⟦v⟧'‖²_{L²(e)}` with per-element parts; every edge
/// counts fully for each adjacent element.
pub fn jump_term(v: &PwLinear, opts: JumpOptions) -> (f64, Vec<f64>) {
    let contrib = jump_edge_contributions(v, opts);
    let mut parts = vec![0.0; v.mesh.n_triangles()];
    for (e, c) in v.mesh.edges().iter().zip(&contrib) {
        for t in e.adjacent() {
            parts[t] += c;
        }
    }
    (contrib.iter().sum(), parts)
}

/// Curl of `Φ̂` minus the parent-inherited curl of `Φ`.
pub fn curl_difference(pair: &SolvePair) -> Result<PwConstVecField> {
    let fine = curl_field(&pair.fine.phi.to_pw_linear())?;
    let coarse = curl_field(&pair.coarse.phi.to_pw_linear())?;
    fine.sub(&embed_coarse_in_fine(&coarse, &pair.fine.mesh, &pair.map)?)
}

pub fn estimator_eta(pair: &SolvePair) -> Result<f64> {
    let d = curl_difference(pair)?;
    Ok(pair.fine.form.energy_inner(&d, &d)?.max(0.0).sqrt())
}

pub fn estimator_eta_tilde(pair: &SolvePair) -> Result<f64> {
    let fine = pair.fine.phi.to_pw_linear();
    let p1 = Arc::new(DofSpace::conforming(Arc::clone(&pair.coarse.mesh)));
    let interp = clement_interpolate(&fine, &p1, &pair.map)?;
    let e = fine.sub(
        &interp
            .to_pw_linear()
            .prolongate(&pair.fine.mesh, &pair.map)?,
    )?;
    let c = curl_field(&e)?;
    Ok(pair.fine.form.energy_inner(&c, &c)?.max(0.0).sqrt())
}

/// `Σ_T h(T) Σ_{c ⊂ T} |c| |f(c)|²` with `h(T) = |T|^{1/2}`, per coarse element.
fn weighted_parts(coarse: &Mesh, f: &PwConstVecField, pair: &SolvePair) -> (f64, Vec<f64>) {
    let h = coarse.mesh_width();
    let parts: Vec<f64> = pair
        .map
        .parent_to_children
        .iter()
        .enumerate()
        .map(|(t, kids)| {
            h[t] * kids
                .iter()
                .map(|&c| {
                    let v = f.values[c];
                    f.mesh.area(c) * (v[0] * v[0] + v[1] * v[1])
                })
                .sum::<f64>()
        })
        .collect();
    (parts.iter().sum(), parts)
}

/// `μ² = ‖h^{1/2} (curl Φ̂ - curl Φ)‖²` with per-coarse-element parts.
pub fn estimator_mu(pair: &SolvePair) -> Result<(f64, Vec<f64>)> {
    let d = curl_difference(pair)?;
    Ok(weighted_parts(&pair.coarse.mesh, &d, pair))
}

/// `μ̃² = ‖h^{1/2} (1 - Π) curl Φ̂‖²` with per-coarse-element parts.
pub fn estimator_mu_tilde(pair: &SolvePair) -> Result<(f64, Vec<f64>)> {
    let fine = curl_field(&pair.fine.phi.to_pw_linear())?;
    let mean = project_pwconst(&fine, &pair.coarse.mesh, &pair.map)?;
    let r = fine.sub(&embed_coarse_in_fine(&mean, &pair.fine.mesh, &pair.map)?)?;
    Ok(weighted_parts(&pair.coarse.mesh, &r, pair))
}

/// `a(Φ - Φ⁰, Φ - Φ⁰)` on the coarse mesh.
pub fn conf_gap(pair: &SolvePair) -> Result<f64> {
    let d = pair
        .coarse
        .phi
        .to_pw_linear()
        .sub(&pair.coarse.phi0.to_pw_linear())?;
    let c = curl_field(&d)?;
    Ok(pair.coarse.form.energy_inner(&c, &c)?.max(0.0))
}

/// Element indicators `ϱ(T)²`: the `μ̃` part of `T` plus the coarse jump
/// contributions of the edges of `T` and the fine jump contributions of the
/// fine edges in the closure of `T`. Edges shared by several coarse elements
/// are split evenly between them, so the indicators sum to `μ̃² + ρ² + ρ̂²`.
pub fn local_indicators(pair: &SolvePair, opts: JumpOptions) -> Result<Vec<f64>> {
    let (_, mut ind) = estimator_mu_tilde(pair)?;
    let coarse = &pair.coarse.mesh;
    let fine = &pair.fine.mesh;
    let rho = jump_edge_contributions(&pair.coarse.phi.to_pw_linear(), opts);
    for (e, c) in coarse.edges().iter().zip(&rho) {
        let n = e.adjacent().count() as f64;
        for t in e.adjacent() {
            ind[t] += c / n;
        }
    }
    let rho_hat = jump_edge_contributions(&pair.fine.phi.to_pw_linear(), opts);
    for (e, c) in fine.edges().iter().zip(&rho_hat) {
        let mut parents: Vec<usize> = e.adjacent().map(|t| pair.map.child_to_parent[t]).collect();
        parents.dedup();
        let n = parents.len() as f64;
        for p in parents {
            ind[p] += c / n;
        }
    }
    Ok(ind)
}

/// All estimator values of one solve pair.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorReport {
    pub n_coarse: usize,
    pub n_fine: usize,
    /// Conforming DOFs on the coarse mesh.
    pub n_conforming: usize,
    pub eta2: f64,
    pub eta_tilde2: f64,
    pub mu2: f64,
    pub mu_tilde2: f64,
    pub rho2: f64,
    pub rho_hat2: f64,
    pub conf_gap2: f64,
    pub indicators: Vec<f64>,
}

pub fn estimate(pair: &SolvePair, opts: JumpOptions) -> Result<EstimatorReport> {
    let eta = estimator_eta(pair)?;
    let eta_tilde = estimator_eta_tilde(pair)?;
    let (mu2, _) = estimator_mu(pair)?;
    let (mu_tilde2, _) = estimator_mu_tilde(pair)?;
    let (rho2, _) = jump_term(&pair.coarse.phi.to_pw_linear(), opts);
    let (rho_hat2, _) = jump_term(&pair.fine.phi.to_pw_linear(), opts);
    Ok(EstimatorReport {
        n_coarse: pair.n_coarse(),
        n_fine: pair.n_fine(),
        n_conforming: pair.coarse.phi0.values.len(),
        eta2: eta * eta,
        eta_tilde2: eta_tilde * eta_tilde,
        mu2,
        mu_tilde2,
        rho2,
        rho_hat2,
        conf_gap2: conf_gap(pair)?,
        indicators: local_indicators(pair, opts)?,
    })
}
