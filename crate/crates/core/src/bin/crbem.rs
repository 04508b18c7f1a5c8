use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crbem::adaptive::{fit_rate, run_and_write, Experiment, ExperimentConfig, Quantity};
use crbem::assembly::QuadSettings;
use crbem::estimators::JumpOptions;

#[derive(Parser)]
#[command(
    name = "crbem",
    version,
    about = "Crouzeix-Raviart BEM experiments on the unit square screen"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its convergence history.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// uniform-exact, uniform-smooth, adaptive-smooth, graded-smooth,
    /// uniform-singular or adaptive-singular
    #[arg(long)]
    experiment: String,
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 12)]
    levels: usize,
    #[arg(long, default_value_t = 8000)]
    max_fine_dofs: usize,
    /// Gauss points per direction for singular panel pairs.
    #[arg(long, default_value_t = 7)]
    quad_order: usize,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    dump_meshes: Option<PathBuf>,
    /// Measure jumps in the full H1 norm instead of the tangential seminorm.
    #[arg(long)]
    full_h1_jumps: bool,
    /// Leave boundary edges out of the jump terms.
    #[arg(long)]
    interior_jumps_only: bool,
    /// Weight jumps by element area instead of squared edge length.
    #[arg(long)]
    element_width_jumps: bool,
    /// Write 0 in the wall_ms column so repeated runs give identical files.
    #[arg(long)]
    no_wall_time: bool,
}

fn run(args: RunArgs) -> crbem::Result<()> {
    let experiment: Experiment = args.experiment.parse()?;
    let config = ExperimentConfig {
        theta: args.theta,
        beta: args.beta,
        max_levels: args.levels,
        max_fine_dofs: args.max_fine_dofs,
        quad: QuadSettings::with_order(args.quad_order),
        jump: JumpOptions {
            full_h1: args.full_h1_jumps,
            include_boundary: !args.interior_jumps_only,
            element_width: args.element_width_jumps,
        },
        record_wall_time: !args.no_wall_time,
        dump_meshes: args.dump_meshes,
        ..ExperimentConfig::new(experiment)
    };
    let history = run_and_write(&config, &args.out_csv, args.out_svg.as_deref())?;
    for rec in &history.levels {
        eprintln!(
            "level {:2}  N={:6}  N_fine={:6}  eta2={:.3e}  mu_tilde2={:.3e}  {:.0} ms",
            rec.level,
            rec.report.n_coarse,
            rec.report.n_fine,
            rec.report.eta2,
            rec.report.mu_tilde2,
            rec.wall_ms
        );
    }
    if history.levels.len() >= 2 {
        for q in [
            Quantity::Eta2,
            Quantity::MuTilde2,
            Quantity::RhoSum2,
            Quantity::ConfGap2,
        ] {
            if let Ok(s) = fit_rate(&history, q, 4) {
                eprintln!("slope {:>14}: {s:+.3}", q.name());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let Command::Run(args) = Cli::parse().command;
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
