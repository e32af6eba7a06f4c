//! Randomized cross-checks of every closed form against the quadrature oracle.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use secst_core::information::actual_entropy;
use secst_core::oracle::{entropy_numeric, q_numeric, rho_numeric, wigner_numeric, QuadratureSpec};
use secst_core::phase_space::wigner;
use secst_core::state::{build_density_matrix, fock_element, suggest_n_max, MAX_N_MAX};
use secst_core::statistics::mandel_q;
use secst_core::{ComplexValue, PhasePoint, Result, SecstParams};

use crate::args::VerifyArgs;
use crate::output::{Cell, Failure, Report};

const CHECKS: [&str; 4] = ["matrix_vs_quadrature", "wigner_vs_matrix", "q_vs_matrix", "entropy_vs_quadrature"];

/// Elements below this magnitude are not compared relatively.
const ELEMENT_FLOOR: f64 = 1e-12;

fn draw(r: &mut ChaCha8Rng) -> SecstParams {
    let alpha = ComplexValue::from_polar(2.0 * r.gen::<f64>().sqrt(), 2.0 * PI * r.gen::<f64>());
    SecstParams::new(alpha, r.gen_range(0..=3), r.gen_range(0.05..=2.0)).expect("draw inside the envelope")
}

/// Deviation of each check for one parameter set, in `CHECKS` order.
fn deviations(p: &SecstParams, n_max: usize) -> Result<[f64; 4]> {
    let quad = rho_numeric(p, n_max, &QuadratureSpec::default())?;
    let mut matrix = 0.0_f64;
    for n in 0..=n_max {
        for m in 0..=n_max {
            let e = fock_element(p, n, m)?;
            if e.norm() > ELEMENT_FLOOR {
                matrix = matrix.max((e - quad.rho.get(n, m)).norm() / e.norm());
            }
        }
    }

    let full = build_density_matrix(p, suggest_n_max(p, 1e-14)?.min(MAX_N_MAX))?;
    let mut wig = 0.0_f64;
    for i in 0..9 {
        for j in 0..9 {
            let pt = PhasePoint::new(-2.0 + 0.5 * i as f64, -2.0 + 0.5 * j as f64);
            wig = wig.max((wigner(p, pt)? - wigner_numeric(&full, pt).value).abs());
        }
    }

    let q = mandel_q(p)?;
    let q_dev = (q - q_numeric(p, 1e-14)?).abs() / q.abs().max(1.0);

    let (s, _) = actual_entropy(p, n_max)?;
    let s_dev = (s - entropy_numeric(&quad.rho)?.diagonal).abs();
    Ok([matrix, wig, q_dev, s_dev])
}

pub fn verify(a: &VerifyArgs) -> std::result::Result<Report, Failure> {
    if a.cases == 0 {
        return Err(Failure::validation("--cases must be positive"));
    }
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Failure::validation(format!("--tol must be positive, got {}", a.tol)));
    }
    if a.nmax == 0 || a.nmax > MAX_N_MAX {
        return Err(Failure::validation(format!("--nmax must lie in 1..={MAX_N_MAX}")));
    }
    let mut r = ChaCha8Rng::seed_from_u64(a.seed);
    let draws: Vec<SecstParams> = (0..a.cases).map(|_| draw(&mut r)).collect();
    let results = draws.par_iter().map(|p| deviations(p, a.nmax)).collect::<Result<Vec<_>>>()?;

    let mut report = Report::new(&["case", "check", "alpha_re", "alpha_im", "m", "nbar", "deviation", "pass"]);
    for (case, (p, devs)) in draws.iter().zip(&results).enumerate() {
        for (k, &d) in devs.iter().enumerate() {
            let pass = d <= a.tol;
            if !pass {
                report.failures += 1;
            }
            report.rows.push(vec![
                Cell::Index(case),
                Cell::Text(CHECKS[k]),
                Cell::Real(p.alpha().re),
                Cell::Real(p.alpha().im),
                Cell::Index(p.m()),
                Cell::Real(p.n_bar_t()),
                Cell::Real(d),
                Cell::Flag(pass),
            ]);
        }
    }
    report.diagnostic("checks", CHECKS.to_vec());
    for (k, name) in CHECKS.iter().enumerate() {
        let worst = results.iter().map(|d| d[k]).fold(0.0, f64::max);
        report.diagnostic(&format!("max_{name}"), worst);
    }
    report.diagnostic("failed_checks", report.failures);
    Ok(report)
}
