//! Photon-number statistics: moments, Mandel Q, the photon-number
//! distribution, and the sub-Poissonian threshold in `n̄_t`.
//!
//! Throughout, `L_k` abbreviates `L_k(-|α|²)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SecstError, Warning};
use crate::special_fn::{laguerre, ComplexValue};
use crate::state::{fock_element, SecstParams, MAX_N_MAX};

/// Distance from 1 within which Q is reported as Poissonian.
pub const POISSONIAN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QPoint {
    pub n_bar_t: f64,
    pub alpha_abs: f64,
    pub m: usize,
    pub q: f64,
    pub poissonian: bool,
}

/// `(L_m, L_{m+1}, L_{m+2})` at `-|α|²`.
fn laguerre_triple(params: &SecstParams) -> (f64, f64, f64) {
    let x = -params.alpha().norm_sqr();
    let m = params.m();
    let l = |k| laguerre(k, x).expect("m + 2 is within the Laguerre envelope");
    (l(m), l(m + 1), l(m + 2))
}

/// `⟨a†a⟩ = (1+m) L_{m+1}/L_m + n̄ - 1`.
pub fn mean_photon(params: &SecstParams) -> f64 {
    let (l0, l1, _) = laguerre_triple(params);
    let m1 = params.m() as f64 + 1.0;
    (m1 * l1 / l0 + params.n_bar_t() - 1.0).max(0.0)
}

/// `⟨a²a†²⟩ = 2n̄² + (m+1)/L_m [4n̄ L_{m+1} + (m+2) L_{m+2}]`.
pub fn antinormal_second_moment(params: &SecstParams) -> f64 {
    let (l0, l1, l2) = laguerre_triple(params);
    let nb = params.n_bar_t();
    let m = params.m() as f64;
    2.0 * nb * nb + (m + 1.0) / l0 * (4.0 * nb * l1 + (m + 2.0) * l2)
}

/// `⟨(a†a)²⟩` from the antinormal moment.
///
/// `a²a†² = a(a†a + 1)a† = (n̂+1)² + (n̂+1)`, so `⟨n̂²⟩ = ⟨a²a†²⟩ - 3⟨n̂⟩ - 2`.
pub fn number_second_moment(params: &SecstParams) -> f64 {
    antinormal_second_moment(params) - 3.0 * mean_photon(params) - 2.0
}

fn is_vacuum(params: &SecstParams) -> bool {
    params.m() == 0 && params.n_bar_t() == 0.0 && params.alpha().norm_sqr() == 0.0
}

/// Mandel Q from the closed form
/// `Q = [n̄(n̄-1)L_m + (2n̄-1)(m+1)L_{m+1} + (m+1)(m+2)L_{m+2} - (m+1)² L_{m+1}²/L_m]
///      / [(1+m)L_{m+1} + (n̄-1)L_m]`.
pub fn mandel_q(params: &SecstParams) -> Result<f64> {
    if is_vacuum(params) {
        return Err(SecstError::Vacuum);
    }
    let (l0, l1, l2) = laguerre_triple(params);
    let nb = params.n_bar_t();
    let m1 = params.m() as f64 + 1.0;
    let num = nb * (nb - 1.0) * l0 + (2.0 * nb - 1.0) * m1 * l1 + m1 * (m1 + 1.0) * l2 - m1 * m1 * l1 * l1 / l0;
    let den = m1 * l1 + (nb - 1.0) * l0;
    Ok(num / den)
}

/// Mandel Q recombined from the first two moments,
/// `Q = (⟨a²a†²⟩ - ⟨aa†⟩² - ⟨aa†⟩) / (⟨aa†⟩ - 1)`.
pub fn mandel_q_from_moments(params: &SecstParams) -> Result<f64> {
    if is_vacuum(params) {
        return Err(SecstError::Vacuum);
    }
    let anti = antinormal_second_moment(params);
    let aad = mean_photon(params) + 1.0;
    Ok((anti - aad * aad - aad) / (aad - 1.0))
}

pub fn q_point(params: &SecstParams) -> Result<QPoint> {
    let q = mandel_q(params)?;
    Ok(QPoint {
        n_bar_t: params.n_bar_t(),
        alpha_abs: params.alpha().norm(),
        m: params.m(),
        q,
        poissonian: (q - 1.0).abs() <= POISSONIAN_EPS,
    })
}

/// Photon-number probabilities `σ_N`, `N = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub probabilities: Vec<f64>,
    pub warnings: Vec<Warning>,
}

impl Distribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Mass that may be missing before a truncation warning is raised.
pub const DISTRIBUTION_TAIL_TOL: f64 = 1e-6;

/// Diagonal of the closed-form density matrix.
pub fn photon_number_distribution(params: &SecstParams, n_max: usize) -> Result<Distribution> {
    if n_max > MAX_N_MAX {
        return Err(SecstError::Envelope { what: "n_max", value: n_max as f64, max: MAX_N_MAX as f64 });
    }
    let probabilities: Vec<f64> = (0..=n_max)
        .into_par_iter()
        .map(|n| fock_element(params, n, n).map(|z| if z.re >= -1e-12 { z.re.max(0.0) } else { z.re }))
        .collect::<Result<_>>()?;
    let missing = 1.0 - probabilities.iter().sum::<f64>();
    let warnings = if missing > DISTRIBUTION_TAIL_TOL {
        vec![Warning::Truncation { missing, n_max }]
    } else {
        Vec::new()
    };
    Ok(Distribution { probabilities, warnings })
}

/// Root of `Q - 1` in `n̄_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub n_bar_t: f64,
    /// Further sign changes were seen beyond the returned root.
    pub multiple_roots: bool,
}

pub const THRESHOLD_BRACKET: (f64, f64) = (1e-6, 2.0);
const THRESHOLD_SCAN: usize = 400;
const THRESHOLD_TOL: f64 = 1e-10;

/// Smallest `n̄_t` in `[1e-6, 2]` where Q crosses 1, at fixed `|α|` and `m >= 1`.
pub fn sub_poisson_threshold(alpha_abs: f64, m: usize) -> Result<Threshold> {
    threshold_in(alpha_abs, m, THRESHOLD_BRACKET)
}

fn threshold_in(alpha_abs: f64, m: usize, (lo, hi): (f64, f64)) -> Result<Threshold> {
    if m == 0 {
        return Err(SecstError::InvalidParams("sub-Poissonian threshold needs m >= 1".into()));
    }
    let excess = |nb: f64| -> Result<f64> {
        let p = SecstParams::new(ComplexValue::new(alpha_abs, 0.0), m, nb)?;
        Ok(mandel_q(&p)? - 1.0)
    };
    let probes: Vec<f64> = (0..=THRESHOLD_SCAN)
        .map(|i| lo + (hi - lo) * i as f64 / THRESHOLD_SCAN as f64)
        .collect();
    let values: Vec<f64> = probes.par_iter().map(|&nb| excess(nb)).collect::<Result<_>>()?;
    let crossings: Vec<usize> = (0..THRESHOLD_SCAN)
        .filter(|&i| values[i] == 0.0 || values[i].signum() != values[i + 1].signum())
        .collect();
    let Some(&first) = crossings.first() else {
        return Err(SecstError::NoCrossing { lo, hi });
    };
    let (mut a, mut b) = (probes[first], probes[first + 1]);
    let mut fa = values[first];
    if fa == 0.0 {
        return Ok(Threshold { n_bar_t: a, multiple_roots: crossings.len() > 1 });
    }
    while b - a > THRESHOLD_TOL {
        let mid = 0.5 * (a + b);
        let fm = excess(mid)?;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(Threshold { n_bar_t: 0.5 * (a + b), multiple_roots: crossings.len() > 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{moments_numeric, q_numeric};
    use crate::state::build_density_matrix;

    fn params(re: f64, im: f64, m: usize, nb: f64) -> SecstParams {
        SecstParams::new(ComplexValue::new(re, im), m, nb).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn mean_photon_limits() {
        assert!((mean_photon(&params(0.0, 0.0, 0, 0.8)) - 0.8).abs() < 1e-15);
        assert!((mean_photon(&params(0.6, 0.8, 0, 0.0)) - 1.0).abs() < 1e-15);
        let p = params(1.0, 0.0, 2, 0.5);
        let rho = build_density_matrix(&p, 80).unwrap();
        assert!(rel(mean_photon(&p), moments_numeric(&rho).unwrap().mean) < 1e-10);
    }

    #[test]
    fn antinormal_limits() {
        let nb = 0.9;
        let expected = 2.0 * nb * nb + 4.0 * nb + 2.0;
        assert!((antinormal_second_moment(&params(0.0, 0.0, 0, nb)) - expected).abs() < 1e-14);
        let a2: f64 = 1.7;
        let p = params(a2.sqrt(), 0.0, 0, 0.0);
        assert!(rel(antinormal_second_moment(&p), a2 * a2 + 4.0 * a2 + 2.0) < 1e-14);
    }

    // Tr(ρ a²a†²) = Σ (N+1)(N+2) σ_N from the matrix diagonal.
    #[test]
    fn antinormal_matches_matrix_trace() {
        let p = params(0.8, 0.0, 1, 0.3);
        let rho = build_density_matrix(&p, 90).unwrap();
        let trace: f64 = rho.diagonal().iter().enumerate().map(|(n, s)| ((n + 1) * (n + 2)) as f64 * s).sum();
        assert!(rel(antinormal_second_moment(&p), trace) < 1e-10);
    }

    #[test]
    fn number_moment_identity_on_small_matrices() {
        for p in [params(0.5, 0.1, 1, 0.2), params(0.0, 0.0, 2, 0.0), params(1.2, -0.3, 0, 0.4)] {
            let rho = build_density_matrix(&p, 90).unwrap();
            let trace: f64 = rho.diagonal().iter().enumerate().map(|(n, s)| (n * n) as f64 * s).sum();
            assert!((number_second_moment(&p) - trace).abs() < 1e-10 * trace.max(1.0));
        }
    }

    #[test]
    fn q_limits() {
        assert!((mandel_q(&params(0.9, 0.3, 0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!(q_point(&params(0.9, 0.3, 0, 0.0)).unwrap().poissonian);
        for &nb in &[0.2, 1.0, 1.9] {
            let q = mandel_q(&params(0.0, 0.0, 0, nb)).unwrap();
            let oracle = q_numeric(&params(0.0, 0.0, 0, nb), 1e-13).unwrap();
            assert!((q - oracle).abs() < 1e-9 && (q - (nb + 1.0)).abs() < 1e-12);
        }
        let q = mandel_q(&params(0.0, 0.0, 1, 0.414)).unwrap();
        assert!((q - 1.0).abs() < 1e-3);
        assert_eq!(mandel_q(&params(0.0, 0.0, 0, 0.0)), Err(SecstError::Vacuum));
    }

    #[test]
    fn distribution_limits() {
        let nb = 0.6;
        let d = photon_number_distribution(&params(0.0, 0.0, 0, nb), 60).unwrap();
        for (n, s) in d.probabilities.iter().enumerate() {
            assert!((s - nb.powi(n as i32) / (nb + 1.0).powi(n as i32 + 1)).abs() < 1e-15);
        }
        let a2: f64 = 1.5;
        let d = photon_number_distribution(&params(0.0, a2.sqrt(), 0, 0.0), 40).unwrap();
        let mut poisson = (-a2).exp();
        for (n, s) in d.probabilities.iter().enumerate() {
            if n > 0 {
                poisson *= a2 / n as f64;
            }
            assert!((s - poisson).abs() < 1e-14);
        }
        let short = photon_number_distribution(&params(2.0, 0.0, 1, 0.5), 5).unwrap();
        assert!(matches!(short.warnings[0], Warning::Truncation { .. }));
    }

    #[test]
    fn thresholds_from_closed_form() {
        // m = 1, α = 0: n̄² + 2n̄ - 1 = 0;  m = 6: n̄² + 12n̄ - 6 = 0
        let t1 = sub_poisson_threshold(0.0, 1).unwrap();
        assert!((t1.n_bar_t - (2f64.sqrt() - 1.0)).abs() < 1e-8);
        let t6 = sub_poisson_threshold(0.0, 6).unwrap();
        assert!((t6.n_bar_t - (42f64.sqrt() - 6.0)).abs() < 1e-8);
        assert!(!t1.multiple_roots);
        assert!(sub_poisson_threshold(0.0, 0).is_err());
    }

    #[test]
    fn threshold_at_finite_alpha_matches_matrix_scan() {
        let root = sub_poisson_threshold(1.0, 2).unwrap().n_bar_t;
        // Dense scan of matrix-trace Q; bracket the first crossing.
        let steps = 200;
        let mut prev: Option<(f64, f64)> = None;
        let mut bracket = None;
        for i in 0..=steps {
            let nb = 1e-3 + 1.0 * i as f64 / steps as f64;
            let q = q_numeric(&params(1.0, 0.0, 2, nb), 1e-12).unwrap() - 1.0;
            if let Some((pn, pq)) = prev {
                if pq < 0.0 && q >= 0.0 {
                    bracket = Some((pn, nb));
                    break;
                }
            }
            prev = Some((nb, q));
        }
        let (a, b) = bracket.expect("matrix Q crosses 1");
        assert!(root >= a - 1e-9 && root <= b + 1e-9, "{root} not in [{a}, {b}]");
    }

    #[test]
    fn threshold_needs_a_crossing() {
        // Q(n̄) < 1 throughout (0, 0.1] for the single-photon state.
        assert_eq!(threshold_in(0.0, 1, (1e-6, 0.1)), Err(SecstError::NoCrossing { lo: 1e-6, hi: 0.1 }));
    }
}
