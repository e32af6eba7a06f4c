//! Entropies and the maximum transmitted information `I = S_max - S_act`.
//! All entropies are in nats.

use serde::Serialize;

use crate::error::{Result, SecstError, Warning};
use crate::state::SecstParams;
use crate::statistics::{mean_photon, photon_number_distribution};
use crate::special_fn::laguerre;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub s_act: f64,
    pub s_max: f64,
    pub info: f64,
    pub n_max_used: usize,
    pub warnings: Vec<Warning>,
}

/// Truncation noise below this is clipped from `info`.
pub const INFO_CLIP: f64 = 1e-9;

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

/// Bose-Einstein entropy `ln(1+n̄) + n̄ ln((n̄+1)/n̄)`, zero at `n̄ = 0`.
pub fn thermal_entropy(n_bar: f64) -> f64 {
    if n_bar <= 0.0 {
        return 0.0;
    }
    n_bar.ln_1p() + n_bar * (n_bar.ln_1p() - n_bar.ln())
}

/// Diagonal entropy `-Σ σ_N ln σ_N` with `0 ln 0 = 0`.
pub fn actual_entropy(params: &SecstParams, n_max: usize) -> Result<(f64, Vec<Warning>)> {
    let dist = photon_number_distribution(params, n_max)?;
    let s = -dist.probabilities.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>();
    Ok((s, dist.warnings))
}

/// Entropy of the thermal state carrying the same mean photon number.
pub fn max_entropy(params: &SecstParams) -> Result<f64> {
    let mean = mean_photon(params);
    if mean <= 0.0 {
        return Err(SecstError::Vacuum);
    }
    Ok(thermal_entropy(mean))
}

/// The same quantity written out in Laguerre form,
/// `ln(u + n̄) + (u + n̄ - 1) ln[((1+m)L_{m+1} + n̄ L_m) / ((1+m)L_{m+1} + (n̄-1)L_m)]`
/// with `u = (1+m) L_{m+1}/L_m`.
pub fn max_entropy_explicit(params: &SecstParams) -> Result<f64> {
    let x = -params.alpha().norm_sqr();
    let m = params.m();
    let nb = params.n_bar_t();
    let l0 = laguerre(m, x)?;
    let l1 = laguerre(m + 1, x)?;
    let m1 = m as f64 + 1.0;
    let u = m1 * l1 / l0;
    let den = m1 * l1 + (nb - 1.0) * l0;
    if den <= 0.0 {
        return Err(SecstError::Vacuum);
    }
    Ok((u + nb).ln() + (u + nb - 1.0) * ((m1 * l1 + nb * l0) / den).ln())
}

pub fn channel_capacity(params: &SecstParams, n_max: usize) -> Result<CapacityResult> {
    let (s_act, warnings) = actual_entropy(params, n_max)?;
    let s_max = max_entropy(params)?;
    let mut info = s_max - s_act;
    if info < 0.0 && info > -INFO_CLIP {
        info = 0.0;
    }
    Ok(CapacityResult { s_act, s_max, info, n_max_used: n_max, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{entropy_numeric, rho_numeric, QuadratureSpec};
    use crate::special_fn::ComplexValue;
    use crate::state::DEFAULT_N_MAX;

    fn params(re: f64, m: usize, nb: f64) -> SecstParams {
        SecstParams::new(ComplexValue::new(re, 0.0), m, nb).unwrap()
    }

    #[test]
    fn thermal_entropy_values() {
        assert_eq!(thermal_entropy(0.0), 0.0);
        assert!((thermal_entropy(1.0) - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((thermal_entropy(0.5) - (1.5f64.ln() + 0.5 * 3f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn actual_entropy_limits() {
        let (s, w) = actual_entropy(&params(0.0, 3, 0.0), 20).unwrap();
        assert_eq!(s, 0.0);
        assert!(w.is_empty());
        for &nb in &[0.1, 0.5, 1.0] {
            let (s, _) = actual_entropy(&params(0.0, 0, nb), 200).unwrap();
            assert!((s - thermal_entropy(nb)).abs() < 1e-8);
        }
    }

    #[test]
    fn actual_entropy_matches_quadrature_diagonal() {
        let p = params(1.0, 1, 0.5);
        let (s, _) = actual_entropy(&p, DEFAULT_N_MAX).unwrap();
        let q = rho_numeric(&p, DEFAULT_N_MAX, &QuadratureSpec::default()).unwrap();
        let e = entropy_numeric(&q.rho).unwrap();
        assert!((s - e.diagonal).abs() < 1e-7);
    }

    #[test]
    fn max_entropy_cases() {
        let nb = 0.7;
        assert!((max_entropy(&params(0.0, 0, nb)).unwrap() - thermal_entropy(nb)).abs() < 1e-15);
        assert!((max_entropy(&params(1.0, 0, 0.0)).unwrap() - thermal_entropy(1.0)).abs() < 1e-15);
        let p = params(1.0, 2, 0.5);
        let a = max_entropy(&p).unwrap();
        let b = max_entropy_explicit(&p).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
        assert_eq!(max_entropy(&params(0.0, 0, 0.0)), Err(SecstError::Vacuum));
    }

    #[test]
    fn pure_coherent_capacity() {
        let c = channel_capacity(&params(1.0, 0, 0.0), DEFAULT_N_MAX).unwrap();
        // Diagonal entropy of a coherent state is the Poisson entropy, not zero.
        assert!(c.s_act > 0.0);
        assert!((c.s_max - thermal_entropy(1.0)).abs() < 1e-15);
        assert!((c.info - (c.s_max - c.s_act)).abs() < 1e-15);
    }

    #[test]
    fn capacity_increases_with_m() {
        let infos: Vec<f64> = (0..3).map(|m| channel_capacity(&params(1.0, m, 0.5), 70).unwrap().info).collect();
        assert!(infos[0] < infos[1] && infos[1] < infos[2], "{infos:?}");
    }

    #[test]
    fn capacity_matches_oracle_entropies() {
        let p = params(0.5, 1, 1.0);
        let c = channel_capacity(&p, 70).unwrap();
        let q = rho_numeric(&p, 70, &QuadratureSpec::default()).unwrap();
        let e = entropy_numeric(&q.rho).unwrap();
        assert!((c.info - (c.s_max - e.diagonal)).abs() < 1e-7);
        assert!(c.info >= -INFO_CLIP);
    }

    #[test]
    fn bits() {
        assert!((nats_to_bits(2f64.ln()) - 1.0).abs() < 1e-15);
    }
}
