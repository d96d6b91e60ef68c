//! Gauss–Legendre rules and Legendre expansions.
//!
//! Expansion coefficients are obtained from samples at the rule's own nodes.
//! Because the n-point rule integrates degree 2n-1 exactly, the discrete
//! projection below coincides with the solution of the n-by-n interpolation
//! system at the nodes, computed stably in O(n^2).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{PanelError, Result};

/// Nodes and weights of an n-point Gauss–Legendre rule on `[-1,1]`.
#[derive(Debug, Clone)]
pub struct GlRule {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Maximum supported rule size.
pub const MAX_ORDER: usize = 64;

fn compute_rule(n: usize) -> GlRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pn(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_pn(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    GlRule { n, nodes, weights }
}

/// P_n(x) and its derivative by the three-term recurrence.
fn legendre_pn(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// n-point Gauss–Legendre nodes and weights on `[-1,1]`.
///
/// Rules are cached; the returned `Arc` is cheap to clone.
pub fn gauss_legendre(n: usize) -> Result<Arc<GlRule>> {
    if n < 1 || n > MAX_ORDER {
        return Err(PanelError::OrderOutOfRange(n));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GlRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    Ok(map.entry(n).or_insert_with(|| Arc::new(compute_rule(n))).clone())
}

/// Legendre coefficients of the degree n-1 interpolant of samples taken at
/// the n-point Gauss–Legendre nodes. Full length n.
pub fn fit_full(rule: &GlRule, samples: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(samples.len(), rule.n);
    let n = rule.n;
    let mut coef = vec![Complex64::new(0.0, 0.0); n];
    // Accumulate sum_j w_j P_k(t_j) f_j for all k in one sweep per node.
    let mut p = vec![0.0; n];
    for j in 0..n {
        let x = rule.nodes[j];
        p[0] = 1.0;
        if n > 1 {
            p[1] = x;
        }
        for k in 2..n {
            p[k] = ((2 * k - 1) as f64 * x * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
        }
        let wf = samples[j] * rule.weights[j];
        for k in 0..n {
            coef[k] += wf * p[k];
        }
    }
    for (k, c) in coef.iter_mut().enumerate() {
        *c *= (2 * k + 1) as f64 / 2.0;
    }
    coef
}

/// Real-sample variant of [`fit_full`].
pub fn fit_full_real(rule: &GlRule, samples: &[f64]) -> Vec<f64> {
    let cx: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    fit_full(rule, &cx).into_iter().map(|c| c.re).collect()
}

/// Interpolatory Legendre coefficients truncated to `min(n, 16)` terms,
/// as cached on panels for root-finding.
pub fn legendre_fit(rule: &GlRule, samples: &[Complex64]) -> Vec<Complex64> {
    let mut coef = fit_full(rule, samples);
    coef.truncate(rule.n.min(16));
    coef
}

/// Evaluate a Legendre expansion at a complex argument.
pub fn eval_poly_complex(coef: &[Complex64], t: Complex64) -> Complex64 {
    eval_poly_complex_deriv(coef, t).0
}

/// Evaluate a Legendre expansion and its derivative at a complex argument.
///
/// Uses the three-term recurrence for P_k and P'_{k+1} = P'_{k-1} + (2k+1) P_k,
/// both of which continue to complex arguments.
pub fn eval_poly_complex_deriv(coef: &[Complex64], t: Complex64) -> (Complex64, Complex64) {
    let n = coef.len();
    let zero = Complex64::new(0.0, 0.0);
    if n == 0 {
        return (zero, zero);
    }
    let mut val = coef[0];
    let mut der = zero;
    if n == 1 {
        return (val, der);
    }
    let mut pkm1 = Complex64::new(1.0, 0.0); // P_0
    let mut pk = t; // P_1
    let mut dkm1 = zero; // P_0'
    let mut dk = Complex64::new(1.0, 0.0); // P_1'
    val += coef[1] * pk;
    der += coef[1] * dk;
    for k in 1..n - 1 {
        let kf = k as f64;
        let pk1 = ((2.0 * kf + 1.0) * t * pk - kf * pkm1) / (kf + 1.0);
        let dk1 = dkm1 + (2.0 * kf + 1.0) * pk;
        pkm1 = pk;
        pk = pk1;
        dkm1 = dk;
        dk = dk1;
        val += coef[k + 1] * pk;
        der += coef[k + 1] * dk;
    }
    (val, der)
}

/// Real-argument evaluation of a real Legendre expansion.
pub fn eval_poly_real(coef: &[f64], t: f64) -> f64 {
    let cx: Vec<Complex64> = coef.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    eval_poly_complex(&cx, Complex64::new(t, 0.0)).re
}

/// Coefficients of the derivative of a Legendre expansion.
///
/// With input sum c_k P_k (k = 0..n-1), the derivative is sum b_j P_j with
/// b_j = (2j+1)(c_{j+1} + c_{j+3} + ...), accumulated backwards.
pub fn deriv_coeffs(coef: &[Complex64]) -> Vec<Complex64> {
    let n = coef.len();
    if n <= 1 {
        return vec![];
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut b = vec![zero; n - 1];
    let mut s1 = zero; // running sum for parity j+1
    let mut s2 = zero; // running sum for parity j+2
    for j in (0..n - 1).rev() {
        let sj = coef[j + 1] + s2;
        b[j] = sj * (2 * j + 1) as f64;
        s2 = s1;
        s1 = sj;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rule_edge_orders() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert_eq!(r1.weights, vec![2.0]);
        let r2 = gauss_legendre(2).unwrap();
        assert_abs_diff_eq!(r2.nodes[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r2.weights[0], 1.0, epsilon = 1e-15);
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(65).is_err());
    }

    #[test]
    fn rule_16_moments() {
        let r = gauss_legendre(16).unwrap();
        let sum: f64 = r.weights.iter().sum();
        assert_abs_diff_eq!(sum, 2.0, epsilon = 1e-15);
        // nodes symmetric about zero
        for j in 0..16 {
            assert_abs_diff_eq!(r.nodes[j], -r.nodes[15 - j], epsilon = 1e-15);
        }
        // integrates t^30 against the exact moment 2/31
        let m30: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(&t, &w)| w * t.powi(30))
            .sum();
        assert_abs_diff_eq!(m30, 2.0 / 31.0, epsilon = 1e-14);
    }

    #[test]
    fn rule_exactness_up_to_2n_minus_1() {
        for n in [3usize, 8, 16, 32, 64] {
            let r = gauss_legendre(n).unwrap();
            for k in 0..2 * n {
                let q: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(&t, &w)| w * t.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert!(
                    (q - exact).abs() <= 1e-14 * (1.0 + exact.abs()),
                    "n={n} k={k}: {q} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn fit_reproduces_low_order_polys() {
        let r = gauss_legendre(8).unwrap();
        let t_samples: Vec<Complex64> =
            r.nodes.iter().map(|&t| Complex64::new(t, 0.0)).collect();
        let c = legendre_fit(&r, &t_samples);
        assert_abs_diff_eq!(c[1].re, 1.0, epsilon = 1e-14);
        for (k, ck) in c.iter().enumerate() {
            if k != 1 {
                assert!(ck.norm() < 1e-14);
            }
        }
        let ones: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); 8];
        let c = legendre_fit(&r, &ones);
        assert_abs_diff_eq!(c[0].re, 1.0, epsilon = 1e-14);
        assert!(c[1..].iter().all(|ck| ck.norm() < 1e-14));
    }

    #[test]
    fn fit_exponential_off_node_accuracy() {
        let r = gauss_legendre(16).unwrap();
        let samples: Vec<Complex64> =
            r.nodes.iter().map(|&t| Complex64::new(t.exp(), 0.0)).collect();
        let c = legendre_fit(&r, &samples);
        for i in 0..101 {
            let t = -1.0 + 0.02 * i as f64;
            let v = eval_poly_complex(&c, Complex64::new(t, 0.0));
            assert!((v.re - t.exp()).abs() < 1e-13, "t={t}");
            assert!(v.im.abs() < 1e-13);
        }
    }

    #[test]
    fn eval_complex_matches_known_values() {
        let i = Complex64::new(0.0, 1.0);
        // coefficients [0,1] -> P_1(t) = t
        let c = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!((eval_poly_complex(&c, i) - i).norm() < 1e-15);
        // coefficients [0,0,1] -> P_2(i) = (3 i^2 - 1)/2 = -2
        let c = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!((eval_poly_complex(&c, i) - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_complex_continuation_of_parabola_fit() {
        // gamma(t) = t + 0.6 i t^2 fitted from node samples, continued off axis
        let r = gauss_legendre(16).unwrap();
        let k = 0.6;
        let g = |t: Complex64| t + Complex64::new(0.0, k) * t * t;
        let samples: Vec<Complex64> =
            r.nodes.iter().map(|&t| g(Complex64::new(t, 0.0))).collect();
        let c = legendre_fit(&r, &samples);
        let t = Complex64::new(0.2, 0.1);
        assert!((eval_poly_complex(&c, t) - g(t)).norm() < 1e-13);
    }

    #[test]
    fn eval_real_agrees_with_complex_on_axis() {
        let coef = vec![0.3, -0.2, 0.7, 0.05, -0.4];
        let cx: Vec<Complex64> = coef.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        for i in 0..41 {
            let t = -1.0 + 0.05 * i as f64;
            let a = eval_poly_real(&coef, t);
            let b = eval_poly_complex(&cx, Complex64::new(t, 0.0));
            assert!((a - b.re).abs() <= 1e-15 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn derivative_coefficients() {
        // d/dt of P_3 is (15 t^2 - 3)/2 = 5 P_2 + ... check numerically.
        let coef = vec![
            Complex64::new(0.1, 0.0),
            Complex64::new(-0.4, 0.0),
            Complex64::new(0.25, 0.0),
            Complex64::new(0.9, 0.0),
            Complex64::new(-0.3, 0.0),
        ];
        let dc = deriv_coeffs(&coef);
        for i in 0..21 {
            let t = Complex64::new(-1.0 + 0.1 * i as f64, 0.0);
            let (_, d_rec) = eval_poly_complex_deriv(&coef, t);
            let d_coef = eval_poly_complex(&dc, t);
            assert!((d_rec - d_coef).norm() < 1e-13);
        }
    }
}
