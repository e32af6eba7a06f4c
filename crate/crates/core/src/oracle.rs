//! Brute-force references for every closed form in the crate.
//!
//! [`rho_numeric`] integrates the displaced photon-added coherent state over the
//! Gaussian weight `P(z) = exp(-|z|²/n̄)/n̄` directly. The other routines recompute
//! observables from any [`DensityMatrix`], so they work equally on closed-form and
//! quadrature matrices.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Result, SecstError, Warning};
use crate::phase_space::PhasePoint;
use crate::quadrature::gauss_legendre;
use crate::special_fn::{log_factorial, ComplexValue};
use crate::state::{normalization, DensityMatrix, SecstParams, MAX_N_MAX};

/// Node counts and cutoff for the polar quadrature over the displacement plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Radius beyond which the Gaussian weight is dropped. `None` picks the
    /// radius where it falls below 1e-28.
    pub radius_cutoff: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { radial_nodes: 80, angular_nodes: 256, radius_cutoff: None }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 || self.angular_nodes < 8 {
            return Err(SecstError::InvalidParams(format!(
                "quadrature needs at least 8 nodes per axis, got {}x{}",
                self.radial_nodes, self.angular_nodes
            )));
        }
        if let Some(r) = self.radius_cutoff {
            if !(r > 0.0 && r.is_finite()) {
                return Err(SecstError::InvalidParams(format!("radius cutoff {r} must be positive")));
            }
        }
        Ok(())
    }

    /// Cutoff radius for thermal mean `n_bar_t`.
    pub fn cutoff_for(&self, n_bar_t: f64) -> f64 {
        self.radius_cutoff.unwrap_or_else(|| (n_bar_t * 1e28f64.ln()).sqrt())
    }
}

/// Threshold on the angular-doubling change that raises [`Warning::Convergence`].
pub const ANGULAR_CHANGE_TOL: f64 = 1e-8;

/// Quadrature density matrix with its convergence probe.
#[derive(Debug, Clone)]
pub struct QuadratureRho {
    /// Built from twice the requested angular nodes.
    pub rho: DensityMatrix,
    /// Largest element change between the requested and doubled angular rule.
    pub angular_change: f64,
    pub warnings: Vec<Warning>,
}

/// A scalar oracle value with any diagnostics raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub q: f64,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyPair {
    /// `-Σ σ_N ln σ_N` over the diagonal.
    pub diagonal: f64,
    /// `-Σ λ ln λ` over the eigenvalues.
    pub von_neumann: f64,
    pub warnings: Vec<Warning>,
}

fn truncation_warning(rho: &DensityMatrix, tol: f64) -> Vec<Warning> {
    if rho.trace_deficit() > tol {
        vec![Warning::Truncation { missing: rho.trace_deficit(), n_max: rho.n_max() }]
    } else {
        Vec::new()
    }
}

/// `⟨N| D(z) a^{†m} |α⟩` with `D(z)|α⟩ = e^{(zα* - z*α)/2} |z + α⟩`.
pub fn displaced_pacs_overlap(alpha: ComplexValue, m: usize, z: ComplexValue, n: usize) -> ComplexValue {
    displaced_pacs_overlaps(alpha, m, z, n)[n]
}

/// [`displaced_pacs_overlap`] for `N = 0..=n_max`:
/// `Σ_k C(m,k) (-z*)^{m-k} sqrt(N!/(N-k)!) ⟨N-k|z+α⟩`, times the displacement phase.
pub fn displaced_pacs_overlaps(alpha: ComplexValue, m: usize, z: ComplexValue, n_max: usize) -> Vec<ComplexValue> {
    let beta = z + alpha;
    let mut coherent = Vec::with_capacity(n_max + 1);
    let mut c = ComplexValue::from((-0.5 * beta.norm_sqr()).exp());
    coherent.push(c);
    for j in 1..=n_max {
        c = c * beta / (j as f64).sqrt();
        coherent.push(c);
    }
    let neg_zc = -z.conj();
    let shift = (z * alpha.conj() - z.conj() * alpha) * 0.5;
    let global = shift.exp();
    let binom = |k: usize| (log_factorial(m) - log_factorial(k) - log_factorial(m - k)).exp();

    (0..=n_max)
        .map(|n| {
            let mut acc = ComplexValue::new(0.0, 0.0);
            let mut ladder = 1.0;
            for k in 0..=m.min(n) {
                if k > 0 {
                    ladder *= ((n + 1 - k) as f64).sqrt();
                }
                acc += neg_zc.powu((m - k) as u32) * coherent[n - k] * (binom(k) * ladder);
            }
            acc * global
        })
        .collect()
}

/// Density matrix by polar quadrature of the displacement ensemble.
///
/// Radially Gauss-Legendre in `t = |z|²` (the Jacobian `|z| d|z| = dt/2` is
/// absorbed), angularly the periodic trapezoid. The angular rule is run at
/// twice the requested node count; the interleaved half gives the convergence
/// probe at no extra cost.
pub fn rho_numeric(params: &SecstParams, n_max: usize, spec: &QuadratureSpec) -> Result<QuadratureRho> {
    spec.validate()?;
    if n_max > MAX_N_MAX {
        return Err(SecstError::Envelope { what: "n_max", value: n_max as f64, max: MAX_N_MAX as f64 });
    }
    let dim = n_max + 1;
    let alpha = params.alpha();
    let m = params.m();
    let nb = params.n_bar_t();
    let norm = normalization(params);

    if nb == 0.0 {
        let v = displaced_pacs_overlaps(alpha, m, ComplexValue::new(0.0, 0.0), n_max);
        let entries = DMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj() * norm);
        let rho = DensityMatrix::from_entries(entries, Some(*params))?;
        let warnings = truncation_warning(&rho, 1e-6);
        return Ok(QuadratureRho { rho, angular_change: 0.0, warnings });
    }

    let cutoff_sq = spec.cutoff_for(nb).powi(2);
    let (x, w) = gauss_legendre(spec.radial_nodes);
    let fine = 2 * spec.angular_nodes;

    // One (even, odd) pair of partial sums per radial node; reduced in node order.
    let partials: Vec<(DMatrix<ComplexValue>, DMatrix<ComplexValue>)> = (0..spec.radial_nodes)
        .into_par_iter()
        .map(|i| {
            let t = 0.5 * cutoff_sq * (x[i] + 1.0);
            let radial_w = 0.5 * cutoff_sq * w[i] * (-t / nb).exp() / nb;
            let s = t.sqrt();
            let mut even = DMatrix::<ComplexValue>::zeros(dim, dim);
            let mut odd = DMatrix::<ComplexValue>::zeros(dim, dim);
            for a in 0..fine {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / fine as f64;
                let z = ComplexValue::from_polar(s, theta);
                let v = displaced_pacs_overlaps(alpha, m, z, n_max);
                let target = if a % 2 == 0 { &mut even } else { &mut odd };
                for c in 0..dim {
                    let vc = v[c].conj();
                    for r in 0..=c {
                        target[(r, c)] += v[r] * vc;
                    }
                }
            }
            let scale = ComplexValue::from(radial_w * norm / spec.angular_nodes as f64);
            (even * scale, odd * scale)
        })
        .collect();

    let mut even = DMatrix::<ComplexValue>::zeros(dim, dim);
    let mut odd = DMatrix::<ComplexValue>::zeros(dim, dim);
    for (e, o) in &partials {
        even += e;
        odd += o;
    }
    let mut refined = (&even + &odd) * ComplexValue::from(0.5);
    let mut angular_change = 0.0_f64;
    for c in 0..dim {
        for r in 0..=c {
            angular_change = angular_change.max((refined[(r, c)] - even[(r, c)]).norm());
            refined[(c, r)] = refined[(r, c)].conj();
        }
    }
    let rho = DensityMatrix::from_entries(refined, Some(*params))?;
    let mut warnings = truncation_warning(&rho, 1e-6);
    if angular_change > ANGULAR_CHANGE_TOL {
        warnings.push(Warning::Convergence { max_change: angular_change });
    }
    Ok(QuadratureRho { rho, angular_change, warnings })
}

/// `⟨l|D(β)|k⟩` for `l, k = 0..dim`, from the associated-Laguerre form with
/// log-scaled prefactors.
pub fn displacement_matrix(beta: ComplexValue, dim: usize) -> DMatrix<ComplexValue> {
    let x = beta.norm_sqr();
    let ln_b = 0.5 * x.ln();
    let mut out = DMatrix::zeros(dim, dim);
    if x == 0.0 {
        out.fill_with_identity();
        return out;
    }
    for d in 0..dim {
        // L_j^{(d)}(x) for j = 0..dim-d by forward recurrence.
        let df = d as f64;
        let mut prev = 1.0;
        let mut cur = 1.0 + df - x;
        for j in 0..dim - d {
            let lag = if j == 0 {
                1.0
            } else if j == 1 {
                cur
            } else {
                let jm = (j - 1) as f64;
                let next = ((2.0 * jm + 1.0 + df - x) * cur - (jm + df) * prev) / (jm + 1.0);
                prev = cur;
                cur = next;
                next
            };
            let ln_pre = 0.5 * (log_factorial(j) - log_factorial(j + d))
                + if d == 0 { 0.0 } else { df * ln_b }
                - 0.5 * x;
            let mag = ln_pre.exp() * lag;
            if d == 0 {
                out[(j, j)] = ComplexValue::from(mag);
            } else {
                let phase = beta / beta.norm();
                let below = phase.powu(d as u32) * mag;
                // row j+d, column j: β^d;  row j, column j+d: (-β*)^d
                out[(j + d, j)] = below;
                let above = (-phase.conj()).powu(d as u32) * mag;
                out[(j, j + d)] = above;
            }
        }
    }
    out
}

/// Wigner function from a density matrix as the displaced-parity expectation
/// `(1/π) Tr[ρ D(γ) Π D†(γ)] = (1/π) Σ_{k,l} (-1)^k ρ_{kl} ⟨l|D(2γ)|k⟩`.
pub fn wigner_numeric(rho: &DensityMatrix, p: PhasePoint) -> Estimate {
    let dim = rho.dim();
    let disp = displacement_matrix(p.gamma() * 2.0, dim);
    let entries = rho.entries();
    let mut acc = ComplexValue::new(0.0, 0.0);
    for k in 0..dim {
        let mut col = ComplexValue::new(0.0, 0.0);
        for l in 0..dim {
            col += entries[(k, l)] * disp[(l, k)];
        }
        acc += if k % 2 == 0 { col } else { -col };
    }
    Estimate { value: acc.re / std::f64::consts::PI, warnings: truncation_warning(rho, 1e-8) }
}

/// Mean photon number and Mandel Q from the diagonal.
pub fn moments_numeric(rho: &DensityMatrix) -> Result<Moments> {
    let (mut n1, mut n2) = (0.0, 0.0);
    for (n, p) in rho.diagonal().into_iter().enumerate() {
        let nf = n as f64;
        n1 += nf * p;
        n2 += nf * nf * p;
    }
    if n1 <= 0.0 {
        return Err(SecstError::Vacuum);
    }
    Ok(Moments { mean: n1, q: n2 / n1 - n1, warnings: truncation_warning(rho, 1e-6) })
}

/// Matrix-trace Q for `params`, sized by the tail tolerance.
pub fn q_numeric(params: &SecstParams, tail_tol: f64) -> Result<f64> {
    let n_max = crate::state::suggest_n_max(params, tail_tol)?;
    let rho = crate::state::build_density_matrix_with(
        params,
        n_max.max(1),
        &crate::state::StateConfig { trace_tol: 1.0, ..Default::default() },
    )?;
    Ok(moments_numeric(&rho)?.q)
}

fn entropy_of(p: impl IntoIterator<Item = f64>) -> f64 {
    -p.into_iter().filter(|&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
}

/// Diagonal (phase-averaged) and von Neumann entropies in nats.
pub fn entropy_numeric(rho: &DensityMatrix) -> Result<EntropyPair> {
    let eig = rho.eigenvalues();
    if let Some(&low) = eig.first() {
        if low < -1e-9 {
            return Err(SecstError::Eigen(format!("eigenvalue {low:.3e} below -1e-9; matrix is not a state")));
        }
    }
    if eig.iter().any(|v| !v.is_finite()) {
        return Err(SecstError::Eigen("non-finite eigenvalue".into()));
    }
    Ok(EntropyPair {
        diagonal: entropy_of(rho.diagonal()),
        von_neumann: entropy_of(eig.into_iter().map(|v| v.max(0.0))),
        warnings: truncation_warning(rho, 1e-6),
    })
}
