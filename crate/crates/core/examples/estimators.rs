use std::sync::Arc;

use crbem::assembly::QuadSettings;
use crbem::estimators::{estimate, solve_pair, JumpOptions, RhsRecipe};
use crbem::mesh::build_initial_square_mesh;

fn main() -> crbem::Result<()> {
    let mut mesh = Arc::new(build_initial_square_mesh());
    for _ in 0..3 {
        let pair = solve_pair(
            Arc::clone(&mesh),
            &RhsRecipe::Constant,
            QuadSettings::default(),
        )?;
        let r = estimate(&pair, JumpOptions::default())?;
        println!(
            "N={:4} eta2={:.3e} eta~2={:.3e} mu2={:.3e} mu~2={:.3e} rho2={:.3e} rho^2={:.3e} gap2={:.3e}",
            r.n_coarse, r.eta2, r.eta_tilde2, r.mu2, r.mu_tilde2, r.rho2, r.rho_hat2, r.conf_gap2
        );
        let sum: f64 = r.indicators.iter().sum();
        println!(
            "      sum of indicators {sum:.6e} = {:.6e}",
            r.mu_tilde2 + r.rho2 + r.rho_hat2
        );
        mesh = Arc::clone(&pair.fine.mesh);
    }
    Ok(())
}
