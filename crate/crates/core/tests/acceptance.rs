//! One PASS/FAIL line per acceptance criterion.
//!
//! Experiment runs are cached and serialized: the largest levels hold dense
//! matrices of more than a gigabyte.

mod common;

use std::sync::{Arc, Mutex};

use crbem::adaptive::{fit_rate, ConvergenceHistory, Experiment, ExperimentConfig, Quantity};
use crbem::assembly::{panel_integral, QuadSettings};
use crbem::estimators::{conforming_component, estimator_mu, estimator_mu_tilde, solve_conforming};
use crbem::mesh::{
    build_initial_square_mesh, graded_square_mesh, max_tiling_defect, refine_nvb, Mesh, Point2,
};
use crbem::space::{clement_interpolate, curl_field, embed_coarse_in_fine, jump_field, DofSpace};
use ndarray_linalg::{EigValsh, UPLO};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{fixture_pairs, nvb_fixture, pt, FIXTURE_RECIPES};

const WINDOW: usize = 4;
const RATE_WINDOW: (f64, f64) = (-0.60, -0.40);
const SINGULAR_WINDOW: (f64, f64) = (-0.45, -0.25);
const MIN_UNIFORM_LEVELS: usize = 6;
const SINGULAR_GAP: f64 = 0.05;
const UNIFORM_CAP: usize = 12500;
const ADAPTIVE_CAP: usize = 8000;
const IDENTITY_TOL: f64 = 1e-10;
const G_SELF: f64 = 7.98214469042539260e-2;

static RUNS: Mutex<Vec<((Experiment, u64), Arc<ConvergenceHistory>)>> = Mutex::new(Vec::new());

fn history(experiment: Experiment, beta: f64) -> Arc<ConvergenceHistory> {
    let mut runs = RUNS.lock().unwrap_or_else(|e| e.into_inner());
    let key = (experiment, beta.to_bits());
    if let Some((_, h)) = runs.iter().find(|(k, _)| *k == key) {
        return Arc::clone(h);
    }
    let mut config = ExperimentConfig::new(experiment);
    config.beta = beta;
    config.max_fine_dofs = if experiment.is_adaptive() {
        ADAPTIVE_CAP
    } else {
        UNIFORM_CAP
    };
    let h = Arc::new(crbem::adaptive::run_experiment(&config).expect("experiment runs"));
    runs.push((key, Arc::clone(&h)));
    h
}

fn report(id: u32, name: &str, checks: &[(String, bool)]) {
    let pass = checks.iter().all(|(_, ok)| *ok);
    let detail: Vec<String> = checks
        .iter()
        .map(|(d, ok)| format!("{d}{}", if *ok { "" } else { " [x]" }))
        .collect();
    println!(
        "{} criterion {id} ({name}): {}",
        if pass { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    assert!(pass, "criterion {id} failed");
}

fn within(x: f64, (lo, hi): (f64, f64)) -> bool {
    x >= lo && x <= hi
}

fn slope_checks(
    h: &ConvergenceHistory,
    label: &str,
    quantities: &[Quantity],
) -> Vec<(String, bool)> {
    quantities
        .iter()
        .map(|&q| match fit_rate(h, q, WINDOW) {
            Ok(s) => (
                format!("{label}{} slope {s:+.3}", q.name()),
                within(s, RATE_WINDOW),
            ),
            Err(e) => (format!("{label}{}: {e}", q.name()), false),
        })
        .collect()
}

fn slope(h: &ConvergenceHistory, q: Quantity) -> f64 {
    fit_rate(h, q, WINDOW).unwrap_or(f64::NAN)
}

const SMOOTH_QUANTITIES: [Quantity; 3] = [Quantity::Eta2, Quantity::MuTilde2, Quantity::RhoSum2];

#[test]
fn criterion_1_uniform_exact() {
    let h = history(Experiment::UniformExact, 2.0);
    let mut checks = vec![(
        format!("{} levels (need {MIN_UNIFORM_LEVELS})", h.levels.len()),
        h.levels.len() >= MIN_UNIFORM_LEVELS,
    )];
    checks.extend(slope_checks(&h, "", &[Quantity::ConfGap2, Quantity::Eta2]));
    report(1, "uniform-exact", &checks);
}

#[test]
fn criterion_2_uniform_smooth() {
    let h = history(Experiment::UniformSmooth, 2.0);
    report(
        2,
        "uniform-smooth",
        &slope_checks(&h, "", &SMOOTH_QUANTITIES),
    );
}

#[test]
fn criterion_3_adaptive_smooth() {
    let h = history(Experiment::AdaptiveSmooth, 2.0);
    let mut checks = slope_checks(&h, "", &SMOOTH_QUANTITIES);
    let steepest = SMOOTH_QUANTITIES
        .iter()
        .map(|&q| slope(&h, q))
        .fold(f64::INFINITY, f64::min);
    checks.push((
        format!("steepest {steepest:+.3} not below {}", RATE_WINDOW.0),
        steepest >= RATE_WINDOW.0,
    ));
    report(3, "adaptive-smooth", &checks);
}

#[test]
fn criterion_4_graded_smooth() {
    let mut checks = Vec::new();
    for beta in [2.0, 3.0] {
        let h = history(Experiment::GradedSmooth, beta);
        checks.extend(slope_checks(
            &h,
            &format!("beta {beta} "),
            &SMOOTH_QUANTITIES,
        ));
    }
    report(4, "graded-smooth", &checks);
}

#[test]
fn criterion_5_uniform_singular() {
    let s = slope(
        &history(Experiment::UniformSingular, 2.0),
        Quantity::MuTilde2,
    );
    report(
        5,
        "uniform-singular",
        &[(
            format!("mu_tilde2 slope {s:+.3}"),
            within(s, SINGULAR_WINDOW),
        )],
    );
}

#[test]
fn criterion_6_adaptive_singular() {
    let s = slope(
        &history(Experiment::AdaptiveSingular, 2.0),
        Quantity::MuTilde2,
    );
    let u = slope(
        &history(Experiment::UniformSingular, 2.0),
        Quantity::MuTilde2,
    );
    report(
        6,
        "adaptive-singular",
        &[
            (format!("mu_tilde2 slope {s:+.3}"), within(s, RATE_WINDOW)),
            (
                format!("steeper than uniform {u:+.3} by {:.3}", u - s),
                u - s >= SINGULAR_GAP,
            ),
        ],
    );
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).fold(0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn random_nvb_ok(rng: &mut StdRng) -> bool {
    let mut mesh: Mesh = build_initial_square_mesh();
    for _ in 0..3 {
        let k = rng.random_range(1..=mesh.n_triangles().min(6));
        let marked: Vec<usize> = (0..k)
            .map(|_| rng.random_range(0..mesh.n_triangles()))
            .collect();
        let Ok((fine, map)) = refine_nvb(&mesh, &marked) else {
            return false;
        };
        let rebuilt = Mesh::new(fine.vertices.clone(), fine.triangles.clone()).is_ok();
        if !rebuilt || max_tiling_defect(&mesh, &fine, &map) > 1e-12 {
            return false;
        }
        mesh = fine;
    }
    true
}

#[test]
fn criterion_7_property_suite() {
    let pairs = fixture_pairs();
    let mut orth = 0f64;
    let mut conf = 0f64;
    let mut mu_ok = true;
    let mut spd = true;
    for (pair, recipe) in pairs.iter().zip(FIXTURE_RECIPES) {
        let c = &pair.coarse;
        let curl_phi = curl_field(&c.phi.to_pw_linear()).unwrap();
        let curl_hat = curl_field(&pair.fine.phi.to_pw_linear()).unwrap();
        let a = c.form.energy_inner(&curl_phi, &curl_phi).unwrap();
        let p1 = Arc::new(DofSpace::conforming(Arc::clone(&c.mesh)));
        for i in 0..p1.dof_count() {
            let mut e = vec![0.0; p1.dof_count()];
            e[i] = 1.0;
            let psi = curl_field(&p1.coefs(e).unwrap().to_pw_linear()).unwrap();
            let psi_fine = embed_coarse_in_fine(&psi, &pair.fine.mesh, &pair.map).unwrap();
            let r = pair.fine.form.energy_inner(&curl_hat, &psi_fine).unwrap()
                - c.form.energy_inner(&curl_phi, &psi).unwrap();
            orth = orth.max(r.abs() / a);
        }
        let direct = solve_conforming(&c.form, &recipe()).unwrap();
        let proj = conforming_component(&c.phi, &c.form, &p1).unwrap();
        conf = conf.max(max_rel(&proj.values, &direct.values));
        mu_ok &= estimator_mu_tilde(pair).unwrap().0 <= estimator_mu(pair).unwrap().0;
        for space in [
            DofSpace::cr(Arc::clone(&c.mesh)),
            DofSpace::conforming(Arc::clone(&c.mesh)),
        ] {
            let k = c.form.stiffness(&space).unwrap();
            spd &= k == k.t() && k.eigvalsh(UPLO::Lower).unwrap()[0] > 0.0;
        }
    }

    let coarse = Arc::new(nvb_fixture());
    let (fine, map) = crbem::mesh::uniform_refine(&coarse);
    let p1 = Arc::new(DofSpace::conforming(Arc::clone(&coarse)));
    let values: Vec<f64> = (0..p1.dof_count())
        .map(|i| (0.3 * i as f64).sin())
        .collect();
    let v = p1.coefs(values.clone()).unwrap();
    let back = clement_interpolate(
        &v.to_pw_linear().prolongate(&Arc::new(fine), &map).unwrap(),
        &p1,
        &map,
    )
    .unwrap();
    let clement = values
        .iter()
        .zip(&back.values)
        .fold(0f64, |m, (a, b)| m.max((a - b).abs()));

    let mut jumps = 0f64;
    for mesh in [graded_square_mesh(4, 3.0).unwrap(), nvb_fixture()] {
        let p1 = Arc::new(DofSpace::conforming(Arc::new(mesh)));
        let values = (0..p1.dof_count()).map(|i| (i as f64).cos()).collect();
        for j in jump_field(&p1.coefs(values).unwrap().to_pw_linear()).jumps {
            jumps = jumps.max(j.at_ends[0].abs()).max(j.at_ends[1].abs());
        }
    }

    let t = [pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)];
    let s = QuadSettings::default();
    let self_rel = (panel_integral(t, t, s).unwrap() - G_SELF).abs() / G_SELF;
    let d = 20.0 * 2f64.sqrt();
    let far = t.map(|p| pt(p.x + d, p.y));
    let limit = 0.25 / (4.0 * std::f64::consts::PI * d);
    let far_rel = (panel_integral(t, far, s).unwrap() - limit).abs() / limit;
    let scaled = |f: f64, x: [Point2; 3]| x.map(|p| pt(f * p.x, f * p.y));
    let e = [pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
    let base = panel_integral(t, e, s).unwrap();
    let scaling = [0.5f64, 2.0]
        .iter()
        .map(|&f| {
            (panel_integral(scaled(f, t), scaled(f, e), s).unwrap() - f.powi(3) * base).abs()
                / (f.powi(3) * base)
        })
        .fold(0f64, f64::max);

    let mut rng = StdRng::seed_from_u64(7);
    let nvb = (0..10).filter(|_| random_nvb_ok(&mut rng)).count();

    report(
        7,
        "property suite",
        &[
            (format!("partial orthogonality {orth:.1e}"), orth <= 1e-8),
            (
                format!("conforming component vs direct {conf:.1e}"),
                conf <= 1e-9,
            ),
            ("mu_tilde <= mu".into(), mu_ok),
            (
                format!("Clement reproduction {clement:.1e}"),
                clement <= 1e-10,
            ),
            (format!("conforming jumps {jumps:.1e}"), jumps == 0.0),
            ("stiffness SPD".into(), spd),
            (format!("self entry {self_rel:.1e}"), self_rel <= 1e-6),
            (format!("far field {far_rel:.1e}"), far_rel <= 1e-3),
            (format!("s^3 scaling {scaling:.1e}"), scaling <= 1e-10),
            (format!("NVB {nvb}/10"), nvb == 10),
        ],
    );
}

fn all_runs() -> Vec<(String, Arc<ConvergenceHistory>)> {
    let mut runs = Vec::new();
    for e in Experiment::ALL {
        if e == Experiment::GradedSmooth {
            runs.push((format!("{e} beta 2"), history(e, 2.0)));
            runs.push((format!("{e} beta 3"), history(e, 3.0)));
        } else {
            runs.push((e.to_string(), history(e, 2.0)));
        }
    }
    runs
}

#[test]
fn criterion_8_indicator_identity() {
    let runs = all_runs();
    let checks: Vec<(String, bool)> = runs
        .iter()
        .map(|(name, h)| {
            let worst = h
                .levels
                .iter()
                .map(|rec| {
                    let r = &rec.report;
                    let sum: f64 = r.indicators.iter().sum();
                    let want = r.mu_tilde2 + r.rho2 + r.rho_hat2;
                    (sum - want).abs() / want
                })
                .fold(0f64, f64::max);
            (format!("{name} {worst:.1e}"), worst <= IDENTITY_TOL)
        })
        .collect();
    report(8, "indicator identity", &checks);
}

/// Not a numbered criterion: the estimators stay within a factor 100 of μ̃.
#[test]
fn monitor_estimator_equivalence() {
    let checks: Vec<(String, bool)> = all_runs()
        .iter()
        .map(|(name, h)| {
            let (mut lo, mut hi) = (f64::INFINITY, 0f64);
            for rec in &h.levels {
                let r = &rec.report;
                for x in [r.eta2, r.eta_tilde2, r.mu2] {
                    let ratio = (x / r.mu_tilde2).sqrt();
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                }
            }
            (
                format!("{name} [{lo:.2}, {hi:.2}]"),
                lo >= 0.01 && hi <= 100.0,
            )
        })
        .collect();
    let pass = checks.iter().all(|(_, ok)| *ok);
    let detail: Vec<&str> = checks.iter().map(|(d, _)| d.as_str()).collect();
    println!(
        "{} monitor (estimator ratios to mu_tilde): {}",
        if pass { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    assert!(pass);
}
