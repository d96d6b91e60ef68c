// temporary profiling probe for the acceptance oracle
use num_complex::Complex64 as C64;
use panelquad::geometry::gauss_legendre;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

static NEVAL: AtomicU64 = AtomicU64::new(0);

fn gl_sum_c<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let rule = gauss_legendre(25).unwrap();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = C64::new(0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        NEVAL.fetch_add(1, Ordering::Relaxed);
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

fn main() {
    for (tr, ti, k, m) in [
        (0.5f64, 1e-8f64, 15i32, 5i32),
        (-0.051, 1e-8, 14, 5),
        (1.001, 1e-8, 15, 3),
        (0.5, 1e-6, 15, 1),
    ] {
        NEVAL.store(0, Ordering::Relaxed);
        let t0 = Instant::now();
        let v = adapt_c(
            &|t: f64| {
                let d2 = (t - tr) * (t - tr) + ti * ti;
                C64::new(t.powi(k) * d2.powf(-0.5 * m as f64), 0.0)
            },
            -1.0,
            1.0,
            1e-14,
            0,
        );
        println!(
            "3D tr={tr} ti={ti} k={k} m={m}: v={:.6e} evals={} time={:?}",
            v.re,
            NEVAL.load(Ordering::Relaxed),
            t0.elapsed()
        );
    }
    for (re, im, k) in [(0.5f64, 1e-6f64, 15i32), (-0.051, 1e-6, 14)] {
        NEVAL.store(0, Ordering::Relaxed);
        let z = C64::new(re, im);
        let t0 = Instant::now();
        let v = adapt_c(
            &|t: f64| {
                let tc = C64::new(t, 0.0);
                tc.powi(k) * (tc - z).ln()
            },
            -1.0,
            1.0,
            1e-14,
            0,
        );
        println!(
            "2D log z={z} k={k}: v={:.6e} evals={} time={:?}",
            v.re,
            NEVAL.load(Ordering::Relaxed),
            t0.elapsed()
        );
    }
}
