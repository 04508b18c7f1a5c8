use std::io::Write;

use crate::error::{Error, Result};
use crate::estimators::EstimatorReport;

/// Estimators and timing of one level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub report: EstimatorReport,
    pub wall_ms: f64,
    /// Number of elements marked for the next refinement.
    pub marked: usize,
    /// Elements of the coarse mesh.
    pub n_elements: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceHistory {
    pub experiment: String,
    pub levels: Vec<LevelRecord>,
}

/// Squared quantities that can be fitted and plotted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Eta2,
    EtaTilde2,
    Mu2,
    MuTilde2,
    Rho2,
    RhoHat2,
    /// `ρ² + ρ̂²`.
    RhoSum2,
    ConfGap2,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Eta2,
        Quantity::EtaTilde2,
        Quantity::Mu2,
        Quantity::MuTilde2,
        Quantity::Rho2,
        Quantity::RhoHat2,
        Quantity::RhoSum2,
        Quantity::ConfGap2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Eta2 => "eta2",
            Quantity::EtaTilde2 => "eta_tilde2",
            Quantity::Mu2 => "mu2",
            Quantity::MuTilde2 => "mu_tilde2",
            Quantity::Rho2 => "rho2",
            Quantity::RhoHat2 => "rho_hat2",
            Quantity::RhoSum2 => "rho2+rho_hat2",
            Quantity::ConfGap2 => "conf_gap2",
        }
    }

    pub fn of(self, r: &EstimatorReport) -> f64 {
        match self {
            Quantity::Eta2 => r.eta2,
            Quantity::EtaTilde2 => r.eta_tilde2,
            Quantity::Mu2 => r.mu2,
            Quantity::MuTilde2 => r.mu_tilde2,
            Quantity::Rho2 => r.rho2,
            Quantity::RhoHat2 => r.rho_hat2,
            Quantity::RhoSum2 => r.rho2 + r.rho_hat2,
            Quantity::ConfGap2 => r.conf_gap2,
        }
    }
}

/// Which DOF count is used as the abscissa of a rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofAxis {
    /// Crouzeix-Raviart DOFs of the coarse mesh.
    Coarse,
    /// Conforming DOFs of the coarse mesh.
    Conforming,
}

/// Least-squares slope of `log q` against `log N` over the last `window`
/// levels.
pub fn fit_rate(history: &ConvergenceHistory, quantity: Quantity, window: usize) -> Result<f64> {
    fit_rate_against(history, quantity, window, DofAxis::Coarse)
}

pub fn fit_rate_against(
    history: &ConvergenceHistory,
    quantity: Quantity,
    window: usize,
    axis: DofAxis,
) -> Result<f64> {
    let n = history.levels.len();
    if window < 2 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "rate fit needs at least 2 levels (window {window}, history {n})"
        )));
    }
    let used = &history.levels[n.saturating_sub(window)..];
    let mut pts = Vec::with_capacity(used.len());
    for rec in used {
        let q = quantity.of(&rec.report);
        let dofs = match axis {
            DofAxis::Coarse => rec.report.n_coarse,
            DofAxis::Conforming => rec.report.n_conforming,
        } as f64;
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::NonPositive {
                quantity: quantity.name().into(),
                level: rec.level,
                value: q,
            });
        }
        if !(dofs > 0.0) {
            return Err(Error::NonPositive {
                quantity: "DOF count".into(),
                level: rec.level,
                value: dofs,
            });
        }
        pts.push((dofs.ln(), q.ln()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "rate fit needs distinct DOF counts".into(),
        ));
    }
    Ok(sxy / sxx)
}

pub const CSV_HEADER: &str =
    "level,N_coarse,N_fine,eta2,eta_tilde2,mu2,mu_tilde2,rho2,rho_hat2,conf_gap2,wall_ms";

pub fn emit_csv<W: Write>(history: &ConvergenceHistory, mut sink: W) -> Result<()> {
    if history.levels.is_empty() {
        return Err(Error::InvalidParameter("empty history".into()));
    }
    writeln!(sink, "{CSV_HEADER}")?;
    for rec in &history.levels {
        let r = &rec.report;
        writeln!(
            sink,
            "{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            rec.level,
            r.n_coarse,
            r.n_fine,
            r.eta2,
            r.eta_tilde2,
            r.mu2,
            r.mu_tilde2,
            r.rho2,
            r.rho_hat2,
            r.conf_gap2,
            rec.wall_ms
        )?;
    }
    Ok(())
}

/// Quantities drawn by [`emit_svg_plot`], with their stroke colours.
pub const PLOTTED: [(Quantity, &str); 4] = [
    (Quantity::Eta2, "#1f77b4"),
    (Quantity::MuTilde2, "#d62728"),
    (Quantity::RhoSum2, "#2ca02c"),
    (Quantity::ConfGap2, "#9467bd"),
];

/// Log-log plot of the squared estimators against the coarse DOF count with a
/// dashed `N^{-1/2}` guide.
pub fn emit_svg_plot<W: Write>(history: &ConvergenceHistory, mut sink: W) -> Result<()> {
    if history.levels.is_empty() {
        return Err(Error::InvalidParameter("empty history".into()));
    }
    let (w, h, left, right, top, bottom) = (640.0, 480.0, 70.0, 170.0, 30.0, 50.0);
    let xs: Vec<f64> = history
        .levels
        .iter()
        .map(|r| (r.report.n_coarse as f64).log10())
        .collect();
    let mut ys = Vec::new();
    for (q, _) in PLOTTED {
        for r in &history.levels {
            let v = q.of(&r.report);
            if v > 0.0 && v.is_finite() {
                ys.push(v.log10());
            }
        }
    }
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = range(&xs);
    let (y0, y1) = range(&ys);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| top + (y1 - y) / (y1 - y0) * (h - top - bottom);

    writeln!(
        sink,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<title>{}</title>
<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>
<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        escape(&history.experiment),
        w - left - right,
        h - top - bottom
    )?;
    writeln!(
        sink,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">log10 N (coarse DOFs)</text>"#,
        left + 0.5 * (w - left - right),
        h - 12.0
    )?;
    writeln!(
        sink,
        r#"<text x="16" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">log10 of squared quantity</text>"#,
        top + 0.5 * (h - top - bottom),
        top + 0.5 * (h - top - bottom)
    )?;
    for (x, anchor, y) in [(x0, "start", y0), (x1, "end", y1)] {
        writeln!(
            sink,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="{anchor}">{x:.2}</text>"#,
            px(x),
            h - bottom + 14.0
        )?;
        writeln!(
            sink,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{y:.2}</text>"#,
            left - 4.0,
            py(y) + 4.0
        )?;
    }

    for (k, (q, colour)) in PLOTTED.iter().enumerate() {
        let pts: Vec<String> = history
            .levels
            .iter()
            .zip(&xs)
            .filter_map(|(r, &x)| {
                let v = q.of(&r.report);
                (v > 0.0 && v.is_finite()).then(|| format!("{:.2},{:.2}", px(x), py(v.log10())))
            })
            .collect();
        writeln!(
            sink,
            r#"<polyline data-quantity="{}" fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            q.name(),
            pts.join(" ")
        )?;
        let ly = top + 16.0 + 18.0 * k as f64;
        writeln!(
            sink,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="1.5"/>
<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            w - right + 10.0,
            w - right + 30.0,
            w - right + 36.0,
            ly + 4.0,
            q.name()
        )?;
    }

    // Guide N^{-1/2} through the first point of the first plotted quantity.
    let anchor = history.levels[0].report.eta2.max(1e-300).log10();
    let gy = |x: f64| anchor - 0.5 * (x - x0);
    writeln!(
        sink,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6 4"/>
<text x="{:.2}" y="{:.2}" font-size="12" fill="gray">N^(-1/2)</text>
</svg>"#,
        px(x0),
        py(gy(x0)),
        px(x1),
        py(gy(x1)),
        w - right + 10.0,
        top + 16.0 + 18.0 * PLOTTED.len() as f64 + 4.0
    )?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(n: usize, q: f64) -> EstimatorReport {
        EstimatorReport {
            n_coarse: n,
            n_fine: 4 * n,
            n_conforming: n / 3,
            eta2: q,
            eta_tilde2: q,
            mu2: q,
            mu_tilde2: q,
            rho2: q,
            rho_hat2: q,
            conf_gap2: q,
            indicators: vec![],
        }
    }

    fn history(f: impl Fn(f64) -> f64) -> ConvergenceHistory {
        ConvergenceHistory {
            experiment: "t".into(),
            levels: [8usize, 40, 176, 736, 3008]
                .iter()
                .enumerate()
                .map(|(level, &n)| LevelRecord {
                    level,
                    report: report(n, f(n as f64)),
                    wall_ms: 0.0,
                    marked: 0,
                    n_elements: 0,
                })
                .collect(),
        }
    }

    #[test]
    fn slopes() {
        let h = history(|n| n.powf(-0.5));
        assert!((fit_rate(&h, Quantity::Eta2, 4).unwrap() + 0.5).abs() < 1e-12);
        let h = history(|_| 3.0);
        assert!(fit_rate(&h, Quantity::Eta2, 4).unwrap().abs() < 1e-12);
        let h = history(|n| 7.5 * n.powf(-0.25));
        assert!((fit_rate(&h, Quantity::MuTilde2, 3).unwrap() + 0.25).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_names_level() {
        let mut h = history(|n| 1.0 / n);
        h.levels[3].report.eta2 = 0.0;
        match fit_rate(&h, Quantity::Eta2, 4) {
            Err(Error::NonPositive { level, .. }) => assert_eq!(level, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let mut h = history(|n| 1.0 / n);
        h.levels.truncate(1);
        let mut out = Vec::new();
        emit_csv(&h, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(emit_csv(&ConvergenceHistory::default(), Vec::new()).is_err());
    }

    #[test]
    fn svg_has_one_polyline_per_quantity() {
        let mut out = Vec::new();
        emit_svg_plot(&history(|n| 1.0 / n), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.matches("<polyline").count(), PLOTTED.len());
    }
}
