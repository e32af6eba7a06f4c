//! Polynomial special functions: Laguerre, associated Laguerre, physicists'
//! Hermite at complex argument, and the two-variable Hermite polynomial
//! `H_{m,n}(x, y)`.
//!
//! Every function here is pure. Factorial ratios go through [`log_factorial`]
//! so that coefficients stay finite for all indices in the envelope.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Result, SecstError};

/// Complex scalar used for coherent amplitudes and polynomial arguments.
pub type ComplexValue = Complex64;

/// Largest polynomial order accepted by [`laguerre`], [`hermite`] and [`hermite2`].
pub const MAX_ORDER: usize = 64;

/// Largest degree/order accepted by [`assoc_laguerre`]. It is evaluated at
/// Fock indices, so it shares the density-matrix envelope.
pub const MAX_ASSOC_ORDER: usize = 256;

const LN_FACTORIAL_TABLE_LEN: usize = 171;

fn ln_factorial_table() -> &'static [f64; LN_FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; LN_FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; LN_FACTORIAL_TABLE_LEN];
        let mut fact = 1.0_f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            fact *= n as f64;
            *slot = fact.ln();
        }
        table
    })
}

/// `ln(n!)`. Tabulated from the floating-point factorial up to 170, Stirling
/// series beyond (where the truncated series is below double rounding).
pub fn log_factorial(n: usize) -> f64 {
    if n < LN_FACTORIAL_TABLE_LEN {
        return ln_factorial_table()[n];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn log_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

fn check_order(what: &'static str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(SecstError::Envelope { what, value: value as f64, max: max as f64 });
    }
    Ok(())
}

/// Laguerre polynomial `L_m(x)` by the three-term recurrence.
pub fn laguerre(m: usize, x: f64) -> Result<f64> {
    check_order("laguerre order", m, MAX_ORDER)?;
    Ok(laguerre_recurrence(m, 0, x))
}

/// Associated Laguerre polynomial `L_n^k(x)`.
pub fn assoc_laguerre(n: usize, k: usize, x: f64) -> Result<f64> {
    check_order("associated Laguerre degree", n, MAX_ASSOC_ORDER)?;
    check_order("associated Laguerre order", k, MAX_ASSOC_ORDER)?;
    Ok(laguerre_recurrence(n, k, x))
}

// (j+1) L_{j+1}^k = (2j+1+k-x) L_j^k - (j+k) L_{j-1}^k
fn laguerre_recurrence(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * cur - (jf + k) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^k(z)` at complex argument from the explicit finite series.
/// Used for the `H_{m,n}` / Laguerre bridge; the real-line code uses the recurrence.
#[cfg(test)]
pub(crate) fn assoc_laguerre_series_complex(n: usize, k: usize, z: ComplexValue) -> ComplexValue {
    let mut acc = ComplexValue::new(0.0, 0.0);
    let mut zj = ComplexValue::new(1.0, 0.0);
    for j in 0..=n {
        let coef = (log_binomial(n + k, n - j) - log_factorial(j)).exp();
        let term = zj * coef;
        acc += if j % 2 == 0 { term } else { -term };
        zj *= z;
    }
    acc
}

/// Physicists' Hermite polynomial `H_n(z)` at complex argument via
/// `H_{n+1} = 2 z H_n - 2 n H_{n-1}`.
pub fn hermite(n: usize, z: ComplexValue) -> Result<ComplexValue> {
    check_order("Hermite order", n, MAX_ORDER)?;
    let mut prev = ComplexValue::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = z * 2.0;
    for j in 1..n {
        let next = z * cur * 2.0 - prev * (2.0 * j as f64);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Two-variable Hermite polynomial
/// `H_{m,n}(x, y) = sum_l m! n! (-1)^l x^{m-l} y^{n-l} / (l! (m-l)! (n-l)!)`.
pub fn hermite2(m: usize, n: usize, x: ComplexValue, y: ComplexValue) -> Result<ComplexValue> {
    check_order("two-variable Hermite first index", m, MAX_ORDER)?;
    check_order("two-variable Hermite second index", n, MAX_ORDER)?;
    if n == 0 {
        return Ok(x.powu(m as u32));
    }
    if m == 0 {
        return Ok(y.powu(n as u32));
    }
    let head = log_factorial(m) + log_factorial(n);
    let mut acc = ComplexValue::new(0.0, 0.0);
    for l in 0..=m.min(n) {
        let coef = (head - log_factorial(l) - log_factorial(m - l) - log_factorial(n - l)).exp();
        let term = x.powu((m - l) as u32) * y.powu((n - l) as u32) * coef;
        acc += if l % 2 == 0 { term } else { -term };
    }
    Ok(acc)
}
