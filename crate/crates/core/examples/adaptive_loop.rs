use crbem::adaptive::{adaptive_loop, fit_rate, Experiment, ExperimentConfig, Quantity};

fn main() -> crbem::Result<()> {
    let mut config = ExperimentConfig::new(Experiment::AdaptiveSingular);
    config.max_fine_dofs = 2000;
    let history = adaptive_loop(&config)?;
    for rec in &history.levels {
        println!(
            "level {:2}: {:4} elements, N={:4}, marked {:3}, mu~2={:.3e}",
            rec.level, rec.n_elements, rec.report.n_coarse, rec.marked, rec.report.mu_tilde2
        );
    }
    println!(
        "slope of mu~2: {:+.3}",
        fit_rate(&history, Quantity::MuTilde2, 4)?
    );
    Ok(())
}
