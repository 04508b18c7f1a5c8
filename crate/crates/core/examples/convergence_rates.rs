use crbem::adaptive::{fit_rate, run_and_write, Experiment, ExperimentConfig, Quantity};

fn main() -> crbem::Result<()> {
    let dir = std::env::temp_dir();
    let csv = dir.join("uniform-smooth.csv");
    let svg = dir.join("uniform-smooth.svg");
    let mut config = ExperimentConfig::new(Experiment::UniformSmooth);
    config.max_fine_dofs = 3500;
    let history = run_and_write(&config, &csv, Some(&svg))?;
    print!("{}", std::fs::read_to_string(&csv)?);
    for q in [
        Quantity::Eta2,
        Quantity::MuTilde2,
        Quantity::RhoSum2,
        Quantity::ConfGap2,
    ] {
        println!("{:>14}: {:+.3}", q.name(), fit_rate(&history, q, 3)?);
    }
    println!("plot written to {}", svg.display());
    Ok(())
}
