use std::sync::Arc;

use ndarray::Array2;

use crate::assembly::{rhs_constant, rhs_power, EnergyForm, Manufactured, QuadSettings};
use crate::error::{Error, Result};
use crate::linalg::{solve_spd, solve_spd_with};
use crate::mesh::{uniform_refine, Mesh, RefinementMap};
use crate::space::{curl_field, CoefVec, DofSpace, SpaceKind};

/// Load data `f` of the Galerkin problem.
#[derive(Clone, Debug)]
pub enum RhsRecipe {
    /// `f = 1`.
    Constant,
    /// `f = x^α`.
    Power(f64),
    /// `f = W φ` for a known conforming `φ`.
    Manufactured(Arc<Manufactured>),
}

impl RhsRecipe {
    pub fn assemble(&self, form: &EnergyForm, space: &DofSpace) -> Result<Vec<f64>> {
        match self {
            RhsRecipe::Constant => Ok(rhs_constant(space)),
            RhsRecipe::Power(alpha) => rhs_power(space, *alpha),
            RhsRecipe::Manufactured(m) => m.rhs(form, space),
        }
    }
}

/// Galerkin solutions on one mesh.
#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub mesh: Arc<Mesh>,
    pub form: EnergyForm,
    /// Crouzeix-Raviart solution `Φ`.
    pub phi: CoefVec,
    /// Its a-orthogonal projection `Φ⁰` onto the conforming space.
    pub phi0: CoefVec,
}

impl LevelSolution {
    fn solve(form: EnergyForm, recipe: &RhsRecipe) -> Result<Self> {
        let mesh = Arc::clone(&form.mesh);
        let cr = Arc::new(DofSpace::cr(Arc::clone(&mesh)));
        let b = recipe.assemble(&form, &cr)?;
        let apply = |u: &[f64]| {
            let v = cr.coefs(u.to_vec())?.to_pw_linear();
            form.load_from_field(&curl_field(&v)?, &cr)
        };
        let phi = cr.coefs(solve_spd_with(form.stiffness(&cr)?, &b, apply)?)?;
        let p1 = Arc::new(DofSpace::conforming(Arc::clone(&mesh)));
        let a0 = form.stiffness(&p1)?;
        let phi0 = project_with(&a0, &phi, &form, &p1)?;
        Ok(LevelSolution {
            mesh,
            form,
            phi,
            phi0,
        })
    }
}

/// Coarse and uniformly refined meshes with all four Galerkin solutions.
#[derive(Clone, Debug)]
pub struct SolvePair {
    pub coarse: LevelSolution,
    pub fine: LevelSolution,
    pub map: RefinementMap,
}

impl SolvePair {
    pub fn n_coarse(&self) -> usize {
        self.coarse.phi.values.len()
    }

    pub fn n_fine(&self) -> usize {
        self.fine.phi.values.len()
    }
}

/// Refines `coarse` uniformly and solves the Crouzeix-Raviart and conforming
/// problems on both meshes.
///
/// The coarse form is obtained from the fine one by summing children, so both
/// forms agree exactly on coarse functions.
pub fn solve_pair(coarse: Arc<Mesh>, recipe: &RhsRecipe, quad: QuadSettings) -> Result<SolvePair> {
    let (fine, map) = uniform_refine(&coarse);
    let fine_form = EnergyForm::assemble(Arc::new(fine), quad)?;
    let coarse_form = fine_form.coarsen(coarse, &map)?;
    let coarse = LevelSolution::solve(coarse_form, recipe)?;
    let fine = LevelSolution::solve(fine_form, recipe)?;
    Ok(SolvePair { coarse, fine, map })
}

/// `Φ⁰` with `a(Φ⁰, Ψ) = a(Φ, Ψ)` for every conforming `Ψ`.
pub fn conforming_component(
    phi: &CoefVec,
    form: &EnergyForm,
    conforming: &Arc<DofSpace>,
) -> Result<CoefVec> {
    project_with(&form.stiffness(conforming)?, phi, form, conforming)
}

fn project_with(
    a0: &Array2<f64>,
    phi: &CoefVec,
    form: &EnergyForm,
    conforming: &Arc<DofSpace>,
) -> Result<CoefVec> {
    if conforming.kind() != SpaceKind::Conforming {
        return Err(Error::InvalidParameter(
            "projection target must be the conforming space".into(),
        ));
    }
    let b = form.load_from_field(&curl_field(&phi.to_pw_linear())?, conforming)?;
    if b.iter().all(|&x| x == 0.0) {
        return Ok(conforming.zeros());
    }
    conforming.coefs(solve_spd(a0, &b)?)
}

/// Direct conforming Galerkin solution for the given data.
pub fn solve_conforming(form: &EnergyForm, recipe: &RhsRecipe) -> Result<CoefVec> {
    let p1 = Arc::new(DofSpace::conforming(Arc::clone(&form.mesh)));
    let b = recipe.assemble(form, &p1)?;
    p1.coefs(solve_spd(&form.stiffness(&p1)?, &b)?)
}
