use rayon::prelude::*;
use serde_json::json;

use secst_core::information::{channel_capacity, nats_to_bits};
use secst_core::phase_space::{marginal_x, marginal_y, wigner_surface};
use secst_core::state::{build_density_matrix_with, default_n_max};
use secst_core::statistics::{mandel_q, photon_number_distribution};
use secst_core::{ComplexValue, PhaseGrid, SecstError, SecstParams, StateConfig, Warning};

use crate::args::{Axis, CapacityArgs, MarginalArgs, MatrixArgs, QSurfaceArgs, StateArgs, WignerArgs};
use crate::output::{Cell, Failure, Report};

/// Residual trace above which a matrix or distribution is flagged as truncated.
const TRACE_WARN: f64 = 1e-6;

fn params(s: &StateArgs) -> Result<SecstParams, Failure> {
    Ok(SecstParams::new(ComplexValue::new(s.alpha_re, s.alpha_im), s.m, s.nbar)?)
}

fn n_max_for(p: &SecstParams, requested: Option<usize>) -> Result<usize, Failure> {
    match requested {
        Some(0) => Err(Failure::validation("--nmax must be positive")),
        Some(n) => Ok(n),
        None => Ok(default_n_max(p)?),
    }
}

/// `count` evenly spaced points on `[lo, hi]`.
fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn check_axis(name: &str, max: f64, points: usize) -> Result<(), Failure> {
    if !(max.is_finite() && max > 0.0) {
        return Err(Failure::validation(format!("{name} must be positive, got {max}")));
    }
    if points < 2 {
        return Err(Failure::validation(format!("{name} axis needs at least 2 points")));
    }
    Ok(())
}

pub fn matrix(a: &MatrixArgs) -> Result<Report, Failure> {
    let p = params(&a.state)?;
    let n_max = n_max_for(&p, a.nmax)?;
    let rho = build_density_matrix_with(&p, n_max, &StateConfig { trace_tol: 1.0, ..Default::default() })?;
    let mut report = Report::new(&["row", "col", "re", "im"]);
    for n in 0..=n_max {
        for m in 0..=n_max {
            let z = rho.get(n, m);
            report.rows.push(vec![Cell::Index(n), Cell::Index(m), Cell::Real(z.re), Cell::Real(z.im)]);
        }
    }
    report.diagnostic("n_max", n_max);
    report.diagnostic("trace_deficit", rho.trace_deficit());
    report.diagnostic("hermiticity_defect", rho.hermiticity_defect());
    if rho.trace_deficit() > TRACE_WARN {
        report.warnings.push(Warning::Truncation { missing: rho.trace_deficit(), n_max });
    }
    Ok(report)
}

pub fn pnd(a: &MatrixArgs) -> Result<Report, Failure> {
    let p = params(&a.state)?;
    let n_max = n_max_for(&p, a.nmax)?;
    let dist = photon_number_distribution(&p, n_max)?;
    let mut report = Report::new(&["n", "sigma_n"]);
    report.rows = dist.probabilities.iter().enumerate().map(|(n, &s)| vec![Cell::Index(n), Cell::Real(s)]).collect();
    report.diagnostic("n_max", n_max);
    report.diagnostic("total", dist.total());
    report.warnings = dist.warnings;
    Ok(report)
}

pub fn q_surface(a: &QSurfaceArgs) -> Result<Report, Failure> {
    check_axis("--nbar-max", a.nbar_max, a.grid)?;
    check_axis("--alpha-max", a.alpha_max, a.grid)?;
    let nbars = linspace(0.0, a.nbar_max, a.grid);
    let alphas = linspace(0.0, a.alpha_max, a.grid);
    let points: Vec<(f64, f64)> = nbars.iter().flat_map(|&n| alphas.iter().map(move |&al| (n, al))).collect();
    let values: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(nb, al)| {
            let p = SecstParams::new(ComplexValue::new(al, 0.0), a.m, nb)?;
            match mandel_q(&p) {
                Ok(q) => Ok(Some(q)),
                Err(SecstError::Vacuum) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, SecstError>>()?;
    let mut report = Report::new(&["nbar", "alpha_abs", "q"]);
    let mut undefined = 0;
    for (&(nb, al), q) in points.iter().zip(&values) {
        if q.is_none() {
            undefined += 1;
        }
        report.rows.push(vec![Cell::Real(nb), Cell::Real(al), Cell::Real(q.unwrap_or(f64::NAN))]);
    }
    report.diagnostic("undefined_points", undefined);
    Ok(report)
}

pub fn capacity(a: &CapacityArgs) -> Result<Report, Failure> {
    check_axis("--nbar-max", a.nbar_max, a.grid + 1)?;
    if a.m.is_empty() {
        return Err(Failure::validation("--m needs at least one value"));
    }
    if a.nmax == 0 {
        return Err(Failure::validation("--nmax must be positive"));
    }
    let alphas = match a.alpha {
        Some(al) if al.is_finite() && al >= 0.0 => vec![al],
        Some(al) => return Err(Failure::validation(format!("--alpha must be a nonnegative |alpha|, got {al}"))),
        None => {
            check_axis("--alpha-max", a.alpha_max, a.grid)?;
            linspace(0.0, a.alpha_max, a.grid)
        }
    };
    let nbars: Vec<f64> = (1..=a.grid).map(|i| a.nbar_max * i as f64 / a.grid as f64).collect();
    let mut points = Vec::new();
    for &m in &a.m {
        for &nb in &nbars {
            for &al in &alphas {
                points.push((m, nb, al));
            }
        }
    }
    let results = points
        .par_iter()
        .map(|&(m, nb, al)| channel_capacity(&SecstParams::new(ComplexValue::new(al, 0.0), m, nb)?, a.nmax))
        .collect::<Result<Vec<_>, SecstError>>()?;
    let unit = |v: f64| if a.bits { nats_to_bits(v) } else { v };
    let mut report = Report::new(&["nbar", "alpha_abs", "m", "s_act", "s_max", "info"]);
    let mut truncated = 0;
    for (&(m, nb, al), c) in points.iter().zip(&results) {
        report.rows.push(vec![
            Cell::Real(nb),
            Cell::Real(al),
            Cell::Index(m),
            Cell::Real(unit(c.s_act)),
            Cell::Real(unit(c.s_max)),
            Cell::Real(unit(c.info)),
        ]);
        if !c.warnings.is_empty() {
            truncated += 1;
        }
        report.warnings.extend(c.warnings.iter().cloned());
    }
    report.diagnostic("unit", if a.bits { "bits" } else { "nats" });
    report.diagnostic("truncated_points", truncated);
    Ok(report)
}

pub fn wigner(a: &WignerArgs) -> Result<Report, Failure> {
    let p = params(&a.state)?;
    let grid = PhaseGrid::new(a.x_min, a.x_max, a.y_min, a.y_max, a.nx, a.ny)?;
    let s = wigner_surface(&p, &grid)?;
    let mut report = Report::new(&["x", "y", "w"]);
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            report.rows.push(vec![Cell::Real(grid.x(i)), Cell::Real(grid.y(j)), Cell::Real(s.values[(i, j)])]);
        }
    }
    report.diagnostic("integral_estimate", s.integral_estimate);
    report.diagnostic("min_value", s.min_value);
    report.diagnostic("min_location", json!({ "x": s.min_location.x, "y": s.min_location.y }));
    Ok(report)
}

pub fn marginal(a: &MarginalArgs) -> Result<Report, Failure> {
    let p = params(&a.state)?;
    if !(a.min.is_finite() && a.max.is_finite() && a.min < a.max) || a.points < 2 {
        return Err(Failure::validation("marginal range needs min < max and at least 2 points"));
    }
    let coords = linspace(a.min, a.max, a.points);
    let values = coords
        .par_iter()
        .map(|&t| match a.axis {
            Axis::X => marginal_x(&p, t),
            Axis::Y => marginal_y(&p, t),
        })
        .collect::<Result<Vec<_>, SecstError>>()?;
    let mut report = Report::new(&["coord", "value", "closed_form_flag"]);
    let mut fallbacks = 0;
    for (&t, v) in coords.iter().zip(&values) {
        report.rows.push(vec![Cell::Real(t), Cell::Real(v.value), Cell::Flag(v.is_closed_form())]);
        if !v.is_closed_form() {
            fallbacks += 1;
        }
    }
    if let Some(w) = values.iter().flat_map(|v| v.warnings.iter()).next() {
        report.warnings.push(w.clone());
    }
    report.diagnostic("axis", if a.axis == Axis::X { "x" } else { "y" });
    report.diagnostic("numeric_fallback_points", fallbacks);
    Ok(report)
}
