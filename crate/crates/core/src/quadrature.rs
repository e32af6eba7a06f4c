//! Gauss-Legendre rules and a panel-doubling integrator built on them.

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`integrate_doubling`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// `|I(2P) - I(P)|` at the final panel count.
    pub last_change: f64,
    pub panels: usize,
}

const RULE_NODES: usize = 20;

/// Composite 20-point Gauss-Legendre on `[a, b]`, doubling the panel count
/// until successive estimates differ by at most `abs_tol`.
pub fn integrate_doubling<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Integral {
    let (nodes, weights) = gauss_legendre(RULE_NODES);
    let composite = |panels: usize| -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let mid = a + h * (p as f64 + 0.5);
                nodes.iter().zip(&weights).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
            })
            .sum()
    };
    let mut panels = 4;
    let mut prev = composite(panels);
    loop {
        let next = composite(panels * 2);
        let change = (next - prev).abs();
        panels *= 2;
        if change <= abs_tol || panels >= 1 << 14 {
            return Integral { value: next, last_change: change, panels };
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 20, 80] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let (x, w) = gauss_legendre(7);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..7 {
            assert!((x[i] + x[6 - i]).abs() < 1e-15);
            assert!((w[i] - w[6 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn doubling_integrates_gaussian() {
        let r = integrate_doubling(|x| (-x * x).exp(), -10.0, 10.0, 1e-13);
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(r.last_change <= 1e-13);
    }
}
