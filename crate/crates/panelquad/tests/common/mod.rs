//! Shared oracle for the acceptance suite: plain adaptive bisection
//! quadrature, independent of the recurrence/weight machinery it checks.

use num_complex::Complex64;
use panelquad::geometry::gauss_legendre;

type C64 = Complex64;

const ORACLE_ORDER: usize = 25;

fn gl_sum_c<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let rule = gauss_legendre(ORACLE_ORDER).unwrap();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = C64::new(0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += f(mid + half * t) * (w * half);
    }
    acc
}

fn adapt_c<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, rel: f64, depth: u32) -> C64 {
    let mid = 0.5 * (a + b);
    let whole = gl_sum_c(f, a, b);
    let halves = gl_sum_c(f, a, mid) + gl_sum_c(f, mid, b);
    if depth > 2 && (whole - halves).norm() <= rel * halves.norm() {
        return halves;
    }
    if depth >= 60 {
        return halves;
    }
    adapt_c(f, a, mid, rel, depth + 1) + adapt_c(f, mid, b, rel, depth + 1)
}

/// Adaptive quadrature of a complex integrand over `[a,b]`.
pub fn integrate_complex<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, rel: f64) -> C64 {
    adapt_c(&f, a, b, rel, 0)
}

/// Adaptive quadrature of a real integrand over `[a,b]`.
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    adapt_c(&|t| C64::new(f(t), 0.0), a, b, rel, 0).re
}

/// Log-spaced values between `lo` and `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Linearly spaced values between `lo` and `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
