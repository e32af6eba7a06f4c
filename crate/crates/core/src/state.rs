//! SECST density matrices in the truncated Fock basis.
//!
//! The state is a photon-added coherent state `C a^{†m}|α⟩⟨α|a^m` smeared by a
//! Gaussian displacement ensemble with variance `n̄_t`. Matrix elements are
//! obtained in closed form from a mixed `2m`-th derivative of
//! `exp(λ² υ υ') H_{M,N}(υ'/(n̄+1), -υ/n̄)` at `υ = α, υ' = α*`, which we expand
//! into a finite sum by the two-variable Leibniz rule:
//!
//! ```text
//! ∂_υ^m ∂_υ'^m [g h] = Σ_{j,k} C(m,j) C(m,k) (∂_υ^j ∂_υ'^k g)(∂_υ^{m-j} ∂_υ'^{m-k} h)
//! ∂_υ^j ∂_υ'^k e^{cυυ'} = e^{cυυ'} Σ_i C(j,i) k!/(k-i)! c^{k+j-i} υ^{k-i} υ'^{j-i}
//! ∂_υ^a ∂_υ'^b H_{M,N}(x, y) = M!/(M-b)! N!/(N-a)! (n̄+1)^{-b} (-1/n̄)^a H_{M-b,N-a}(x, y)
//! ```
//!
//! At the evaluation point every term carries the same sign and the common phase
//! `e^{-iφ(M-N)}` (φ = arg α), so the sum is accumulated as a log-sum-exp of
//! positive magnitudes. Nothing cancels and nothing overflows.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SecstError};
use crate::special_fn::{assoc_laguerre, laguerre, log_binomial, log_factorial, ComplexValue};

/// Largest photon-addition count.
pub const MAX_M: usize = 16;
/// Largest coherent amplitude modulus.
pub const MAX_ALPHA_ABS: f64 = 10.0;
/// Largest Fock truncation index.
pub const MAX_N_MAX: usize = 256;
/// Truncation used in the published capacity figures.
pub const DEFAULT_N_MAX: usize = 70;

/// The triple `(α, m, n̄_t)` that fixes one SECST state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecstParams {
    alpha: ComplexValue,
    m: usize,
    n_bar_t: f64,
}

impl SecstParams {
    pub fn new(alpha: ComplexValue, m: usize, n_bar_t: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(SecstError::InvalidParams(format!("alpha = {alpha} is not finite")));
        }
        if alpha.norm() > MAX_ALPHA_ABS {
            return Err(SecstError::Envelope { what: "|alpha|", value: alpha.norm(), max: MAX_ALPHA_ABS });
        }
        if m > MAX_M {
            return Err(SecstError::Envelope { what: "m", value: m as f64, max: MAX_M as f64 });
        }
        if !n_bar_t.is_finite() || n_bar_t < 0.0 {
            return Err(SecstError::InvalidParams(format!("n_bar_t = {n_bar_t} must be finite and >= 0")));
        }
        Ok(Self { alpha, m, n_bar_t })
    }

    pub fn alpha(&self) -> ComplexValue {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_bar_t(&self) -> f64 {
        self.n_bar_t
    }

    /// `λ_t = sqrt(n̄_t / (1 + n̄_t))`.
    pub fn lambda_t(&self) -> f64 {
        (self.n_bar_t / (1.0 + self.n_bar_t)).sqrt()
    }

    pub(crate) fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// `L_m(-|α|²)`, which is >= 1.
    pub(crate) fn laguerre_norm(&self) -> f64 {
        laguerre(self.m, -self.alpha_sq()).expect("m is within the Laguerre envelope")
    }
}

/// Switches for element evaluation and matrix assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateConfig {
    /// Use `ρ = ρ₀` directly when `n̄_t = 0`.
    pub zero_temperature_branch: bool,
    /// Maximum accepted trace deficit in [`build_density_matrix_with`].
    pub trace_tol: f64,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self { zero_temperature_branch: true, trace_tol: 1e-6 }
    }
}

/// Truncated Fock-basis density matrix, indexed `(N, M)` for `N, M = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    params: Option<SecstParams>,
    trace_deficit: f64,
    hermiticity_defect: f64,
}

impl DensityMatrix {
    /// Wraps a square matrix, averaging each element with its conjugate-transpose
    /// partner. The pre-average mismatch is kept as [`Self::hermiticity_defect`].
    pub fn from_entries(mut entries: DMatrix<Complex64>, params: Option<SecstParams>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(SecstError::InvalidParams(format!(
                "density matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let dim = entries.nrows();
        let mut defect = 0.0_f64;
        for i in 0..dim {
            for j in i..dim {
                let a = entries[(i, j)];
                let b = entries[(j, i)].conj();
                defect = defect.max((a - b).norm());
                let avg = (a + b) * 0.5;
                entries[(i, j)] = avg;
                entries[(j, i)] = avg.conj();
            }
            entries[(i, i)].im = 0.0;
        }
        let trace: f64 = (0..dim).map(|i| entries[(i, i)].re).sum();
        Ok(Self { entries, params, trace_deficit: 1.0 - trace, hermiticity_defect: defect })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[(n, m)]
    }

    pub fn params(&self) -> Option<&SecstParams> {
        self.params.as_ref()
    }

    /// `1 - Tr ρ` over the truncated basis.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    /// Largest `|ρ_{NM} - conj(ρ_{MN})|` before symmetrization.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    /// Real diagonal `⟨N|ρ|N⟩`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.entries.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }
}

/// `C_{α,m} = 1 / (m! L_m(-|α|²))`.
pub fn normalization(params: &SecstParams) -> f64 {
    (-log_factorial(params.m)).exp() / params.laguerre_norm()
}

/// `⟨N|ρ|M⟩` with the default configuration.
pub fn fock_element(params: &SecstParams, n: usize, m: usize) -> Result<ComplexValue> {
    fock_element_with(params, n, m, &StateConfig::default())
}

pub fn fock_element_with(
    params: &SecstParams,
    n: usize,
    m: usize,
    config: &StateConfig,
) -> Result<ComplexValue> {
    if params.n_bar_t == 0.0 {
        if !config.zero_temperature_branch {
            return Err(SecstError::ZeroTemperatureDisabled);
        }
        return Ok(pure_element(params, n, m));
    }
    Ok(thermal_element(params, n, m))
}

#[inline]
fn ln_pow(exponent: usize, ln_base: f64) -> f64 {
    if exponent == 0 {
        0.0
    } else {
        exponent as f64 * ln_base
    }
}

/// Accumulates `ln Σ exp(x_i)` in one pass, rescaling when a larger term arrives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    max: f64,
    scaled: f64,
}

impl LogSum {
    pub(crate) fn new() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    pub(crate) fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub(crate) fn ln(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

// |α| ≠ 0 contributes the phase e^{-iφ(M-N)}; at α = 0 only M = N survives.
fn phase(alpha: ComplexValue, power: i64) -> ComplexValue {
    if power == 0 || alpha.norm_sqr() == 0.0 {
        return ComplexValue::new(1.0, 0.0);
    }
    ComplexValue::from_polar(1.0, alpha.arg() * power as f64)
}

fn thermal_element(params: &SecstParams, big_n: usize, big_m: usize) -> ComplexValue {
    let m = params.m;
    let nb = params.n_bar_t;
    let r2 = params.alpha_sq();
    let ln_r = 0.5 * r2.ln();
    let ln_n = nb.ln();
    let ln_n1 = nb.ln_1p();
    let ln_c = ln_n - ln_n1;

    let mut total = LogSum::new();
    for j in 0..=m {
        let a = m - j;
        if a > big_n {
            continue;
        }
        let q = big_n - a;
        for k in 0..=m {
            let b = m - k;
            if b > big_m {
                continue;
            }
            let p = big_m - b;

            let mut g = LogSum::new();
            for i in 0..=j.min(k) {
                g.add(
                    log_binomial(j, i) + log_factorial(k) - log_factorial(k - i)
                        + ln_pow(k + j - i, ln_c)
                        + ln_pow(k + j - 2 * i, ln_r),
                );
            }

            // |H_{P,Q}(α*/(n̄+1), -α/n̄)|: every term has sign (-1)^Q.
            let mut h = LogSum::new();
            let head = log_factorial(p) + log_factorial(q);
            for l in 0..=p.min(q) {
                h.add(
                    head - log_factorial(l) - log_factorial(q - l) - log_factorial(p - l)
                        + ln_pow(p + q - 2 * l, ln_r)
                        - ln_pow(p - l, ln_n1)
                        - ln_pow(q - l, ln_n),
                );
            }

            let derivs = log_factorial(big_n) - log_factorial(q) - ln_pow(a, ln_n)
                + log_factorial(big_m)
                - log_factorial(p)
                - ln_pow(b, ln_n1);
            total.add(log_binomial(m, j) + log_binomial(m, k) + g.ln() + derivs + h.ln());
        }
    }

    let ln_norm = -log_factorial(m) - params.laguerre_norm().ln();
    let prefactor = -0.5 * (log_factorial(big_m) + log_factorial(big_n)) + ln_pow(big_n, ln_c) + ln_norm
        - ln_n1
        - r2 / (nb + 1.0);
    let magnitude = (total.ln() + prefactor).exp();
    phase(params.alpha, big_n as i64 - big_m as i64) * magnitude
}

// ρ₀ = C a^{†m}|α⟩⟨α|a^m with ⟨N|a^{†m}|α⟩ = sqrt(N!)/(N-m)! α^{N-m} e^{-|α|²/2}.
fn pure_element(params: &SecstParams, big_n: usize, big_m: usize) -> ComplexValue {
    let m = params.m;
    if big_n < m || big_m < m {
        return ComplexValue::new(0.0, 0.0);
    }
    let r2 = params.alpha_sq();
    if r2 == 0.0 && (big_n != m || big_m != m) {
        return ComplexValue::new(0.0, 0.0);
    }
    let ln_r = 0.5 * r2.ln();
    let ln_amp = |n: usize| 0.5 * log_factorial(n) - log_factorial(n - m) + ln_pow(n - m, ln_r) - 0.5 * r2;
    let ln_norm = -log_factorial(m) - params.laguerre_norm().ln();
    let magnitude = (ln_norm + ln_amp(big_n) + ln_amp(big_m)).exp();
    phase(params.alpha, big_n as i64 - big_m as i64) * magnitude
}

/// Coherent state in thermal noise (`m = 0`), `M >= N`:
/// `sqrt(N!/M!) α*^{M-N} n̄^N / (n̄+1)^{M+1} e^{-|α|²/(n̄+1)} L_N^{M-N}[-|α|²/(n̄(n̄+1))]`.
pub fn glauber_lachs_element(alpha: ComplexValue, n_bar_t: f64, n: usize, m: usize) -> Result<ComplexValue> {
    if !(n_bar_t > 0.0 && n_bar_t.is_finite()) {
        return Err(SecstError::InvalidParams(format!(
            "Glauber-Lachs form needs n_bar_t > 0, got {n_bar_t}"
        )));
    }
    if m < n {
        return Err(SecstError::InvalidParams(format!("Glauber-Lachs form needs M >= N, got N={n} M={m}")));
    }
    let r2 = alpha.norm_sqr();
    if r2 == 0.0 && m != n {
        return Ok(ComplexValue::new(0.0, 0.0));
    }
    let lag = assoc_laguerre(n, m - n, -r2 / (n_bar_t * (n_bar_t + 1.0)))?;
    let ln_mag = 0.5 * (log_factorial(n) - log_factorial(m)) + ln_pow(m - n, 0.5 * r2.ln()) + ln_pow(n, n_bar_t.ln())
        - (m as f64 + 1.0) * n_bar_t.ln_1p()
        - r2 / (n_bar_t + 1.0)
        + lag.ln();
    Ok(phase(alpha, n as i64 - m as i64) * ln_mag.exp())
}

/// Number state in thermal noise (`α = 0`): diagonal probability `P_N`.
pub fn number_thermal_pn(m: usize, n_bar_t: f64, n: usize) -> f64 {
    // Each term of the sum reduces to
    // m! N! / (k! (k+N-m)! ((m-k)!)²) n̄^{2k+N-m} (n̄+1)^{-(N+m+1)}.
    let k0 = m.saturating_sub(n);
    let ln_n = n_bar_t.ln();
    let head = log_factorial(m) + log_factorial(n) - (n + m + 1) as f64 * n_bar_t.ln_1p();
    let mut acc = LogSum::new();
    for k in k0..=m {
        let ln_fact = log_factorial(k) + log_factorial(k + n - m) + 2.0 * log_factorial(m - k);
        acc.add(head - ln_fact + ln_pow(2 * k + n - m, ln_n));
    }
    acc.ln().exp()
}

pub fn build_density_matrix(params: &SecstParams, n_max: usize) -> Result<DensityMatrix> {
    build_density_matrix_with(params, n_max, &StateConfig::default())
}

/// Fills every `(N, M)` independently, then symmetrizes.
pub fn build_density_matrix_with(
    params: &SecstParams,
    n_max: usize,
    config: &StateConfig,
) -> Result<DensityMatrix> {
    if n_max > MAX_N_MAX {
        return Err(SecstError::Envelope { what: "n_max", value: n_max as f64, max: MAX_N_MAX as f64 });
    }
    let dim = n_max + 1;
    let rows: Vec<Vec<ComplexValue>> = (0..dim)
        .into_par_iter()
        .map(|n| (0..dim).map(|m| fock_element_with(params, n, m, config)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let entries = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    let rho = DensityMatrix::from_entries(entries, Some(*params))?;
    if rho.trace_deficit > config.trace_tol {
        return Err(SecstError::Truncation { deficit: rho.trace_deficit, tol: config.trace_tol, n_max });
    }
    Ok(rho)
}

/// Smallest `n_max` whose partial diagonal sum exceeds `1 - tail_tol`.
pub fn suggest_n_max(params: &SecstParams, tail_tol: f64) -> Result<usize> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(SecstError::InvalidParams(format!("tail_tol = {tail_tol} must lie in (0, 1)")));
    }
    let target = 1.0 - tail_tol;
    let mut diag: Vec<f64> = Vec::new();
    let mut limit = 16;
    loop {
        let start = diag.len();
        let fresh: Vec<f64> = (start..=limit)
            .into_par_iter()
            .map(|n| fock_element(params, n, n).map(|z| z.re))
            .collect::<Result<_>>()?;
        diag.extend(fresh);
        let mut sum = 0.0;
        for (n, p) in diag.iter().enumerate() {
            sum += p;
            if sum > target {
                return Ok(n);
            }
        }
        if limit == MAX_N_MAX {
            return Err(SecstError::Envelope {
                what: "suggested n_max",
                value: (MAX_N_MAX + 1) as f64,
                max: MAX_N_MAX as f64,
            });
        }
        limit = (limit * 2).min(MAX_N_MAX);
    }
}

/// `max(70, suggest_n_max(params, 1e-8))`.
pub fn default_n_max(params: &SecstParams) -> Result<usize> {
    Ok(DEFAULT_N_MAX.max(suggest_n_max(params, 1e-8)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(re: f64, im: f64, m: usize, nb: f64) -> SecstParams {
        SecstParams::new(ComplexValue::new(re, im), m, nb).unwrap()
    }

    fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn params_envelope() {
        assert!(SecstParams::new(ComplexValue::new(0.0, 0.0), 17, 0.1).is_err());
        assert!(SecstParams::new(ComplexValue::new(10.1, 0.0), 1, 0.1).is_err());
        assert!(SecstParams::new(ComplexValue::new(0.0, 0.0), 1, -0.1).is_err());
        assert!(SecstParams::new(ComplexValue::new(f64::NAN, 0.0), 1, 0.1).is_err());
        let p = params(0.0, 0.0, 0, 3.0);
        assert!((p.lambda_t() - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normalization_cases() {
        assert_eq!(normalization(&params(1.3, -0.4, 0, 0.2)), 1.0);
        assert!((normalization(&params(0.0, 0.0, 3, 0.2)) - 1.0 / 6.0).abs() < 1e-15);
        assert!((normalization(&params(1.0, 0.0, 1, 0.2)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coherent_projector_at_zero_temperature() {
        let alpha = ComplexValue::new(0.6, -0.3);
        let p = SecstParams::new(alpha, 0, 0.0).unwrap();
        for n in 0..8 {
            for m in 0..8 {
                let fact = |k: usize| log_factorial(k).exp();
                let expected = alpha.powu(n as u32) * alpha.conj().powu(m as u32) * (-alpha.norm_sqr()).exp()
                    / (fact(n) * fact(m)).sqrt();
                assert!(rel(fock_element(&p, n, m).unwrap(), expected) < 1e-13);
            }
        }
    }

    #[test]
    fn zero_temperature_branch_can_be_disabled() {
        let p = params(0.5, 0.0, 1, 0.0);
        let cfg = StateConfig { zero_temperature_branch: false, ..Default::default() };
        assert_eq!(fock_element_with(&p, 1, 1, &cfg), Err(SecstError::ZeroTemperatureDisabled));
    }

    #[test]
    fn glauber_lachs_vacuum_alpha() {
        let nb = 0.8;
        for n in 0..10 {
            let d = glauber_lachs_element(ComplexValue::new(0.0, 0.0), nb, n, n).unwrap();
            let expected = nb.powi(n as i32) / (nb + 1.0).powi(n as i32 + 1);
            assert!((d.re - expected).abs() < 1e-15 * expected.max(1e-300) * 10.0);
            assert_eq!(glauber_lachs_element(ComplexValue::new(0.0, 0.0), nb, n, n + 2).unwrap().norm(), 0.0);
        }
        assert!(glauber_lachs_element(ComplexValue::new(1.0, 0.0), 0.0, 0, 0).is_err());
        assert!(glauber_lachs_element(ComplexValue::new(1.0, 0.0), 0.5, 3, 2).is_err());
    }

    #[test]
    fn general_path_collapses_to_glauber_lachs() {
        for &(re, im, nb) in &[(1.0, 0.0, 0.5), (0.3, -1.2, 0.05), (-2.0, 0.7, 1.8)] {
            let p = params(re, im, 0, nb);
            for n in 0..30 {
                for m in n..30 {
                    let a = fock_element(&p, n, m).unwrap();
                    let b = glauber_lachs_element(p.alpha(), nb, n, m).unwrap();
                    if b.norm() > 1e-290 {
                        assert!(rel(a, b) < 1e-12, "N={n} M={m}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn general_path_collapses_to_number_thermal() {
        for &(m, nb) in &[(1, 0.3), (2, 0.7), (5, 1.5)] {
            let p = params(0.0, 0.0, m, nb);
            for n in 0..30 {
                let d = fock_element(&p, n, n).unwrap();
                let pn = number_thermal_pn(m, nb, n);
                assert!(rel(d, ComplexValue::new(pn, 0.0)) < 1e-12);
                assert_eq!(fock_element(&p, n, n + 1).unwrap().norm(), 0.0);
            }
        }
    }

    #[test]
    fn number_thermal_limits() {
        let nb: f64 = 0.45;
        for n in 0..12 {
            let thermal = nb.powi(n as i32) / (nb + 1.0).powi(n as i32 + 1);
            assert!((number_thermal_pn(0, nb, n) - thermal).abs() < 1e-15);
            assert_eq!(number_thermal_pn(1, 0.0, n), if n == 1 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn thermal_matrix_is_diagonal_and_complete() {
        let rho = build_density_matrix(&params(0.0, 0.0, 0, 0.5), 80).unwrap();
        assert!(rho.trace_deficit().abs() <= 1e-10);
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                if i != j {
                    assert_eq!(rho.get(i, j).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn built_matrix_is_hermitian_and_positive() {
        let rho = build_density_matrix(&params(0.2, 0.2, 1, 0.1), 64).unwrap();
        assert!(rho.hermiticity_defect() < 1e-10);
        assert!(rho.eigenvalues()[0] >= -1e-9);
    }

    #[test]
    fn truncation_is_reported() {
        let p = params(3.0, 0.0, 2, 1.0);
        assert!(matches!(build_density_matrix(&p, 5), Err(SecstError::Truncation { .. })));
        assert!(build_density_matrix(&p, 300).is_err());
    }

    #[test]
    fn suggest_n_max_geometric_tail() {
        // (1/3)^{N+1} <= 1e-10 first holds at N = 20.
        let p = params(0.0, 0.0, 0, 0.5);
        let oracle = (0..).find(|&n| (1.0f64 / 3.0).powi(n + 1) < 1e-10).unwrap() as usize;
        assert_eq!(oracle, 20);
        assert_eq!(suggest_n_max(&p, 1e-10).unwrap(), oracle);
        assert_eq!(suggest_n_max(&params(0.0, 0.0, 0, 0.0), 1e-3).unwrap(), 0);
    }

    #[test]
    fn suggest_n_max_matches_diagonal_sum() {
        let p = params(1.0, 0.0, 2, 1.0);
        let got = suggest_n_max(&p, 1e-8).unwrap();
        let diag: Vec<f64> = (0..=got).map(|n| fock_element(&p, n, n).unwrap().re).collect();
        let full: f64 = diag.iter().sum();
        let short: f64 = diag[..got].iter().sum();
        assert!(full > 1.0 - 1e-8 && short <= 1.0 - 1e-8);
        assert!(suggest_n_max(&p, 0.0).is_err());
        assert!(suggest_n_max(&params(10.0, 0.0, 16, 3.0), 1e-10).is_err());
    }

    #[test]
    fn logsum_handles_empty_and_mixed_scales() {
        let mut s = LogSum::new();
        assert_eq!(s.ln(), f64::NEG_INFINITY);
        s.add(f64::NEG_INFINITY);
        s.add(-800.0);
        s.add(10.0);
        s.add(2.0);
        let expected = 10.0 + (1.0 + (-8.0f64).exp()).ln();
        assert!((s.ln() - expected).abs() < 1e-14);
    }
}
