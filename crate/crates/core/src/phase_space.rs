//! Wigner function and quadrature marginals of the SECST.
//!
//! The closed form is evaluated in the expanded grouping
//!
//! ```text
//! W(γ) = exp(-2|α-γ|²/(2n̄+1)) / (π (2n̄+1) L_m(-|α|²)) · Σ_k C(m,k)/k! · u^{m-k} v^k
//! u = λ²A₁² = (2n̄-1)/(2n̄+1),   v = λ²|A₂|² = |(2n̄-1)α + 2γ|² / (2n̄+1)²
//! ```
//!
//! which contains only nonnegative powers of `A₁²`, so the removable
//! singularity at `A₁² = 0` (n̄ = 1/2) never appears, and which stays regular at
//! `n̄ = 0`. Every factor is real; no complex intermediate has to cancel.
//!
//! With this normalization `∫∫ W dx dy = 1/2`. Integrated quantities (surface
//! integral, marginals) are taken against [`PHASE_MEASURE`]` · dx dy`, which
//! makes them probability densities.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SecstError, Warning};
use crate::quadrature::integrate_doubling;
use crate::special_fn::{hermite, laguerre, log_binomial, log_factorial, ComplexValue};
use crate::state::SecstParams;

/// Phase-space point `γ = x + iy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn gamma(&self) -> ComplexValue {
        ComplexValue::new(self.x, self.y)
    }
}

/// Density of the phase-space measure relative to `dx dy`.
pub const PHASE_MEASURE: f64 = 2.0;

/// Largest number of grid samples accepted.
pub const MAX_GRID_POINTS: usize = 4_000_000;

/// Rectangular sampling of the γ-plane, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let grid = Self { x_min, x_max, y_min, y_max, nx, ny };
        grid.validate()?;
        Ok(grid)
    }

    /// Square grid `[-half, half]²` with `n` points per side.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(SecstError::InvalidParams(format!("degenerate phase grid {self:?}")));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(SecstError::InvalidParams("phase grid needs at least 2 points per axis".into()));
        }
        if self.nx.saturating_mul(self.ny) > MAX_GRID_POINTS {
            return Err(SecstError::Envelope {
                what: "grid points",
                value: (self.nx as f64) * (self.ny as f64),
                max: MAX_GRID_POINTS as f64,
            });
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * j as f64 / (self.ny - 1) as f64
    }
}

/// Wigner values on a grid. `values[(i, j)]` sits at `(grid.x(i), grid.y(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSurface {
    pub grid: PhaseGrid,
    pub values: DMatrix<f64>,
    /// Two-dimensional trapezoid rule over the grid, against [`PHASE_MEASURE`]` · dx dy`.
    pub integral_estimate: f64,
    pub min_value: f64,
    pub min_location: PhasePoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceConfig {
    /// Evaluate `n̄ = 0` from the limit forms instead of rejecting it.
    pub zero_temperature_branch: bool,
    /// Half-width of the band around `n̄ = 1/2` where the marginals switch to
    /// numeric integration.
    pub marginal_singular_band: f64,
    /// Absolute tolerance of the numeric marginal.
    pub marginal_abs_tol: f64,
}

impl Default for PhaseSpaceConfig {
    fn default() -> Self {
        Self { zero_temperature_branch: true, marginal_singular_band: 1e-4, marginal_abs_tol: 1e-8 }
    }
}

/// How a marginal value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalMethod {
    ClosedForm,
    /// Numeric integration of the Wigner function over the conjugate quadrature.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalValue {
    pub value: f64,
    pub method: MarginalMethod,
    pub warnings: Vec<Warning>,
}

impl MarginalValue {
    pub fn is_closed_form(&self) -> bool {
        self.method == MarginalMethod::ClosedForm
    }
}

pub fn wigner(params: &SecstParams, p: PhasePoint) -> Result<f64> {
    wigner_with(params, p, &PhaseSpaceConfig::default())
}

pub fn wigner_with(params: &SecstParams, p: PhasePoint, config: &PhaseSpaceConfig) -> Result<f64> {
    let nb = params.n_bar_t();
    let m = params.m();
    let alpha = params.alpha();
    let gamma = p.gamma();
    if nb == 0.0 {
        if !config.zero_temperature_branch {
            return Err(SecstError::ZeroTemperatureDisabled);
        }
        if m == 0 {
            return Ok((-2.0 * (alpha - gamma).norm_sqr()).exp() / PI);
        }
        if alpha.norm_sqr() == 0.0 {
            // number state |m⟩
            let r2 = gamma.norm_sqr();
            let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
            return Ok(sign * (-2.0 * r2).exp() * laguerre(m, 4.0 * r2)? / PI);
        }
    }
    let width = 2.0 * nb + 1.0;
    let u = (2.0 * nb - 1.0) / width;
    let v = ((alpha * (2.0 * nb - 1.0) + gamma * 2.0).norm_sqr()) / (width * width);
    let poly = grouped_laguerre(m, u, v);
    let gauss = (-2.0 * (alpha - gamma).norm_sqr() / width).exp();
    Ok(gauss * poly / (PI * width * params.laguerre_norm()))
}

// Σ_k C(m,k)/k! u^{m-k} v^k, i.e. u^m L_m(-v/u) without dividing by u.
fn grouped_laguerre(m: usize, u: f64, v: f64) -> f64 {
    (0..=m)
        .map(|k| (log_binomial(m, k) - log_factorial(k)).exp() * u.powi((m - k) as i32) * v.powi(k as i32))
        .sum()
}

/// Wigner function at `α = 0`:
/// `[(2n̄+1)n̄ - 1]^m / (π (2n̄+1)^{m+1} (n̄+1)^m) e^{-2|γ|²/(2n̄+1)} L_m(-ξ)` with
/// `ξ = 4|γ|²(n̄+1) / ((2n̄+1)[(2n̄+1)n̄ - 1])`.
///
/// Undefined where `(2n̄+1)n̄ = 1`; use [`wigner`] there.
pub fn wigner_special_alpha0(m: usize, n_bar_t: f64, p: PhasePoint) -> Result<f64> {
    if !(n_bar_t > 0.0 && n_bar_t.is_finite()) {
        return Err(SecstError::InvalidParams(format!("n_bar_t = {n_bar_t} must be positive")));
    }
    let width = 2.0 * n_bar_t + 1.0;
    let a1 = width * n_bar_t - 1.0;
    if a1 == 0.0 {
        return Err(SecstError::Singular("(2 n_bar_t + 1) n_bar_t = 1: xi diverges".into()));
    }
    let r2 = p.gamma().norm_sqr();
    let xi = 4.0 * r2 * (n_bar_t + 1.0) / (width * a1);
    let pre = a1.powi(m as i32) / (PI * width.powi(m as i32 + 1) * (n_bar_t + 1.0).powi(m as i32));
    Ok(pre * (-2.0 * r2 / width).exp() * laguerre(m, -xi)?)
}

/// Evaluates [`wigner`] on every grid point (rows in parallel).
pub fn wigner_surface(params: &SecstParams, grid: &PhaseGrid) -> Result<WignerSurface> {
    grid.validate()?;
    let rows: Vec<Vec<f64>> = (0..grid.nx)
        .into_par_iter()
        .map(|i| (0..grid.ny).map(|j| wigner(params, PhasePoint::new(grid.x(i), grid.y(j)))).collect())
        .collect::<Result<_>>()?;
    let values = DMatrix::from_fn(grid.nx, grid.ny, |i, j| rows[i][j]);

    let hx = (grid.x_max - grid.x_min) / (grid.nx - 1) as f64;
    let hy = (grid.y_max - grid.y_min) / (grid.ny - 1) as f64;
    let edge = |k: usize, n: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
    let mut integral = 0.0;
    let mut min_value = f64::INFINITY;
    let mut min_at = (0, 0);
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let w = values[(i, j)];
            integral += edge(i, grid.nx) * edge(j, grid.ny) * w;
            if w < min_value {
                min_value = w;
                min_at = (i, j);
            }
        }
    }
    Ok(WignerSurface {
        grid: *grid,
        values,
        integral_estimate: PHASE_MEASURE * integral * hx * hy,
        min_value,
        min_location: PhasePoint::new(grid.x(min_at.0), grid.y(min_at.1)),
    })
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

pub fn marginal_x(params: &SecstParams, x: f64) -> Result<MarginalValue> {
    marginal_with(params, x, Axis::X, &PhaseSpaceConfig::default())
}

pub fn marginal_y(params: &SecstParams, y: f64) -> Result<MarginalValue> {
    marginal_with(params, y, Axis::Y, &PhaseSpaceConfig::default())
}

pub fn marginal_x_with(params: &SecstParams, x: f64, config: &PhaseSpaceConfig) -> Result<MarginalValue> {
    marginal_with(params, x, Axis::X, config)
}

pub fn marginal_y_with(params: &SecstParams, y: f64, config: &PhaseSpaceConfig) -> Result<MarginalValue> {
    marginal_with(params, y, Axis::Y, config)
}

fn marginal_with(params: &SecstParams, coord: f64, axis: Axis, config: &PhaseSpaceConfig) -> Result<MarginalValue> {
    let nb = params.n_bar_t();
    if nb == 0.0 && !config.zero_temperature_branch {
        return Err(SecstError::ZeroTemperatureDisabled);
    }
    if nb > 0.0 && (2.0 * nb - 1.0).abs() > config.marginal_singular_band {
        return Ok(MarginalValue {
            value: marginal_closed_form(params, coord, axis)?,
            method: MarginalMethod::ClosedForm,
            warnings: Vec::new(),
        });
    }
    let reason = if nb == 0.0 {
        "marginal at n_bar_t = 0".to_string()
    } else {
        format!("|2 n_bar_t - 1| = {:.3e} inside the singular band", (2.0 * nb - 1.0).abs())
    };
    let value = marginal_numeric(params, coord, axis, config.marginal_abs_tol)?;
    Ok(MarginalValue { value, method: MarginalMethod::Numeric, warnings: vec![Warning::NumericFallback { reason }] })
}

/// Hermite-sum marginal,
/// `2 m!/(L_m (2n̄+1)^m sqrt(2π(2n̄+1))) e^{-2(q-x)²/(2n̄+1)} Σ_k 2^{2k-m} n̄^k/(k! ((m-k)!)²) |H_{m-k}(E)|²`.
///
/// The `(λ²A₁²)^m / (2n̄-1)^m` prefactor is folded into `(2n̄+1)^{-m}`.
fn marginal_closed_form(params: &SecstParams, coord: f64, axis: Axis) -> Result<f64> {
    let nb = params.n_bar_t();
    let m = params.m();
    let alpha = params.alpha();
    let width = 2.0 * nb + 1.0;
    let scale = (2.0 * width).sqrt();
    let shifted = alpha * (2.0 * nb - 1.0);
    let (centre, e) = match axis {
        Axis::X => (alpha.re, (shifted + ComplexValue::new(2.0 * coord, 2.0 * alpha.im)) / scale),
        Axis::Y => (
            alpha.im,
            ComplexValue::i() * (shifted + ComplexValue::new(2.0 * alpha.re, 2.0 * coord)) / scale,
        ),
    };
    let mut sum = 0.0;
    for k in 0..=m {
        let h = hermite(m - k, e)?.norm_sqr();
        let ln_coef = (2.0 * k as f64 - m as f64) * std::f64::consts::LN_2
            - log_factorial(k)
            - 2.0 * log_factorial(m - k);
        let nk = if k == 0 { 1.0 } else { nb.powi(k as i32) };
        sum += ln_coef.exp() * nk * h;
    }
    let pre = log_factorial(m).exp() / (params.laguerre_norm() * width.powi(m as i32) * (2.0 * PI * width).sqrt());
    Ok(PHASE_MEASURE * pre * (-2.0 * (centre - coord).powi(2) / width).exp() * sum)
}

/// `2 ∫ W dy` (x-marginal) or `2 ∫ W dx` (y-marginal) by panel-doubling Gauss-Legendre.
fn marginal_numeric(params: &SecstParams, coord: f64, axis: Axis, abs_tol: f64) -> Result<f64> {
    let alpha = params.alpha();
    let width = 2.0 * params.n_bar_t() + 1.0;
    // Gaussian factor is below e^{-128} outside this half-width.
    let half = 8.0 * width.sqrt() + 2.0;
    let (centre, point): (f64, Box<dyn Fn(f64) -> PhasePoint>) = match axis {
        Axis::X => (alpha.im, Box::new(move |t| PhasePoint::new(coord, t))),
        Axis::Y => (alpha.re, Box::new(move |t| PhasePoint::new(t, coord))),
    };
    let err = std::cell::RefCell::new(None);
    let integral = integrate_doubling(
        |t| match wigner(params, point(t)) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        centre - half,
        centre + half,
        abs_tol / PHASE_MEASURE,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(PHASE_MEASURE * integral.value)
}
