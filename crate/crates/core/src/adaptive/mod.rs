//! Experiment driver: uniform, graded and adaptive refinement loops with
//! Dörfler marking, plus rate fitting and CSV/SVG output.

mod history;
mod marking;

pub use history::{
    emit_csv, emit_svg_plot, fit_rate, fit_rate_against, ConvergenceHistory, DofAxis, LevelRecord,
    Quantity, CSV_HEADER, PLOTTED,
};
pub use marking::{doerfler_mark, Marking};

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::assembly::{Manufactured, QuadSettings};
use crate::error::{Error, Result};
use crate::estimators::{estimate, solve_pair, JumpOptions, RhsRecipe};
use crate::mesh::{
    build_initial_square_mesh, graded_square_mesh, mesh_io_write, refine_nvb, uniform_refine, Mesh,
};

/// Exponent of the singular data `f = x^α`.
pub const SINGULAR_EXPONENT: f64 = -0.6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    UniformExact,
    UniformSmooth,
    AdaptiveSmooth,
    GradedSmooth,
    UniformSingular,
    AdaptiveSingular,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::UniformExact,
        Experiment::UniformSmooth,
        Experiment::AdaptiveSmooth,
        Experiment::GradedSmooth,
        Experiment::UniformSingular,
        Experiment::AdaptiveSingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::UniformExact => "uniform-exact",
            Experiment::UniformSmooth => "uniform-smooth",
            Experiment::AdaptiveSmooth => "adaptive-smooth",
            Experiment::GradedSmooth => "graded-smooth",
            Experiment::UniformSingular => "uniform-singular",
            Experiment::AdaptiveSingular => "adaptive-singular",
        }
    }

    pub fn recipe(self) -> Result<RhsRecipe> {
        Ok(match self {
            Experiment::UniformExact => RhsRecipe::Manufactured(Arc::new(
                Manufactured::centre_hat(Arc::new(build_initial_square_mesh()))?,
            )),
            Experiment::UniformSmooth | Experiment::AdaptiveSmooth | Experiment::GradedSmooth => {
                RhsRecipe::Constant
            }
            Experiment::UniformSingular | Experiment::AdaptiveSingular => {
                RhsRecipe::Power(SINGULAR_EXPONENT)
            }
        })
    }

    pub fn is_adaptive(self) -> bool {
        matches!(
            self,
            Experiment::AdaptiveSmooth | Experiment::AdaptiveSingular
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown experiment '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Dörfler parameter of the adaptive presets.
    pub theta: f64,
    /// Grading exponent of the graded preset.
    pub beta: f64,
    pub max_levels: usize,
    /// A level is only computed if its fine mesh has at most this many DOFs.
    pub max_fine_dofs: usize,
    pub quad: QuadSettings,
    pub jump: JumpOptions,
    /// Record wall-clock time per level; when false `wall_ms` is 0 so that
    /// repeated runs give identical output.
    pub record_wall_time: bool,
    /// Reserved; no experiment is randomized.
    pub seed: u64,
    /// Write every coarse mesh to `mesh_XX.txt` in this directory.
    pub dump_meshes: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            theta: 0.5,
            beta: 2.0,
            max_levels: 12,
            max_fine_dofs: 8000,
            quad: QuadSettings::default(),
            jump: JumpOptions::default(),
            record_wall_time: true,
            seed: 0,
            dump_meshes: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in (0, 1), got {}",
                self.theta
            )));
        }
        if !self.beta.is_finite() || self.beta < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be >= 1, got {}",
                self.beta
            )));
        }
        if self.max_levels == 0 {
            return Err(Error::InvalidParameter(
                "at least one level is needed".into(),
            ));
        }
        if self.max_fine_dofs == 0 {
            return Err(Error::InvalidParameter(
                "fine DOF cap must be positive".into(),
            ));
        }
        self.quad.validate()
    }

    fn initial_mesh(&self) -> Result<Mesh> {
        match self.experiment {
            Experiment::GradedSmooth => graded_square_mesh(2, self.beta),
            _ => Ok(build_initial_square_mesh()),
        }
    }
}

/// Runs the estimate-mark-refine loop with Dörfler marking. The experiment
/// must be one of the adaptive presets.
pub fn adaptive_loop(config: &ExperimentConfig) -> Result<ConvergenceHistory> {
    if !config.experiment.is_adaptive() {
        return Err(Error::InvalidParameter(format!(
            "{} is not an adaptive experiment",
            config.experiment
        )));
    }
    run_experiment(config)
}

/// Runs a preset until the level cap or the fine DOF cap is reached.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ConvergenceHistory> {
    config.validate()?;
    let recipe = config.experiment.recipe()?;
    if let Some(dir) = &config.dump_meshes {
        std::fs::create_dir_all(dir)?;
    }
    let mut history = ConvergenceHistory {
        experiment: config.experiment.name().into(),
        levels: Vec::new(),
    };
    let mut mesh = Arc::new(config.initial_mesh()?);
    for level in 0..config.max_levels {
        let start = Instant::now();
        let fine_dofs = uniform_refine(&mesh).0.n_interior_edges();
        if fine_dofs > config.max_fine_dofs {
            if level == 0 {
                return Err(Error::InvalidParameter(format!(
                    "fine DOF cap {} is below the {fine_dofs} DOFs of the first level",
                    config.max_fine_dofs
                )));
            }
            break;
        }
        if let Some(dir) = &config.dump_meshes {
            let file = File::create(dir.join(format!("mesh_{level:02}.txt")))?;
            mesh_io_write(&mesh, BufWriter::new(file))?;
        }
        let step = || -> Result<_> {
            let pair = solve_pair(Arc::clone(&mesh), &recipe, config.quad)?;
            let report = estimate(&pair, config.jump)?;
            let (next, marked) = match config.experiment {
                Experiment::UniformExact
                | Experiment::UniformSmooth
                | Experiment::UniformSingular => (Arc::clone(&pair.fine.mesh), mesh.n_triangles()),
                Experiment::GradedSmooth => (
                    Arc::new(graded_square_mesh(1 << (level + 2), config.beta)?),
                    mesh.n_triangles(),
                ),
                Experiment::AdaptiveSmooth | Experiment::AdaptiveSingular => {
                    let marking = doerfler_mark(&report.indicators, config.theta)?;
                    if marking.converged {
                        (Arc::clone(&mesh), 0)
                    } else {
                        let (refined, _) = refine_nvb(&mesh, &marking.marked)?;
                        (Arc::new(refined), marking.marked.len())
                    }
                }
            };
            Ok((report, next, marked))
        };
        let (report, next, marked) = step().map_err(|e| e.at_level(level))?;
        let wall_ms = if config.record_wall_time {
            start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        history.levels.push(LevelRecord {
            level,
            report,
            wall_ms,
            marked,
            n_elements: mesh.n_triangles(),
        });
        if marked == 0 {
            break;
        }
        mesh = next;
    }
    Ok(history)
}

/// Runs an experiment and writes the CSV and, if requested, the SVG plot.
pub fn run_and_write(
    config: &ExperimentConfig,
    csv: &std::path::Path,
    svg: Option<&std::path::Path>,
) -> Result<ConvergenceHistory> {
    let history = run_experiment(config)?;
    emit_csv(&history, BufWriter::new(File::create(csv)?))?;
    if let Some(svg) = svg {
        emit_svg_plot(&history, BufWriter::new(File::create(svg)?))?;
    }
    Ok(history)
}
