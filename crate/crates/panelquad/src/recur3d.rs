//! Integrals of real monomials against inverse-distance kernels on the
//! standard interval:
//!
//! `P_k^m(t0) = int_{-1}^{1} t^{k-1} / |t - t0|^m dt`, m = 1, 3, 5,
//!
//! for a conjugate root pair `{t0, conj(t0)}`. Upward recurrences are exact
//! modulo the starting values, which suffer cancellation near the real
//! axis; there the affected logarithm/antiderivative is evaluated from a
//! truncated Taylor series instead (11 terms for m = 1 inside the rhombus
//! `4|ti| < 1 - |tr|`, 30 terms for m = 3 and 50 terms for m = 5 inside
//! cones extending from the endpoints).

use std::sync::LazyLock;

use num_complex::Complex64;

use crate::error::{PanelError, Result};

type C64 = Complex64;

/// Derived quantities of a root pair `tr +- i ti`.
#[derive(Debug, Clone, Copy)]
pub struct RootPairGeom {
    pub tr: f64,
    pub ti: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Distance to the left parameter endpoint, `|1 + t0|`.
    pub u1: f64,
    /// Distance to the right parameter endpoint, `|1 - t0|`.
    pub u2: f64,
}

impl RootPairGeom {
    pub fn new(t0: C64) -> Result<Self> {
        let tr = t0.re;
        let ti = t0.im.abs();
        if ti == 0.0 && tr.abs() <= 1.0 {
            return Err(PanelError::SingularityOnInterval);
        }
        Ok(RootPairGeom {
            tr,
            ti,
            b: -2.0 * tr,
            c: tr * tr + ti * ti,
            d: ti * ti,
            u1: ((1.0 + tr) * (1.0 + tr) + ti * ti).sqrt(),
            u2: ((1.0 - tr) * (1.0 - tr) + ti * ti).sqrt(),
        })
    }
}

/// Central binomial ratios r_n = (2n)! / (n!)^2 / 4^n, r_{n+1} = r_n (2n+1)/(2n+2).
fn central_ratios(len: usize) -> Vec<f64> {
    let mut r = vec![1.0; len];
    for n in 0..len - 1 {
        r[n + 1] = r[n] * (2.0 * n as f64 + 1.0) / (2.0 * n as f64 + 2.0);
    }
    r
}

/// Series coefficients of `-(1-|tr|) + sqrt((1-|tr|)^2 + ti^2)` in powers
/// of `(ti/(1-|tr|))^2`, n = 1..=11.
static S1_COEF: LazyLock<[f64; 12]> = LazyLock::new(|| {
    let r = central_ratios(12);
    let mut a = [0.0; 12];
    for n in 1..12 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        a[n] = sign * r[n] / (1.0 - 2.0 * n as f64);
    }
    a
});

/// Series coefficients of the antiderivative of `(s^2 + ti^2)^{-3/2}`,
/// in powers of `(ti/s)^2` (30 terms).
static S3_COEF: LazyLock<[f64; 30]> = LazyLock::new(|| {
    let r = central_ratios(31);
    let mut a = [0.0; 30];
    for (n, an) in a.iter_mut().enumerate() {
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        *an = sign * r[n + 1];
    }
    a
});

/// Series coefficients of the antiderivative of `(s^2 + ti^2)^{-5/2}`,
/// in powers of `(ti/s)^2` (50 terms).
static S5_COEF: LazyLock<[f64; 50]> = LazyLock::new(|| {
    let r = central_ratios(50);
    let mut a = [0.0; 50];
    for (n, an) in a.iter_mut().enumerate() {
        let nf = n as f64;
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        *an = sign * (2.0 * nf + 1.0) * (2.0 * nf + 3.0) / (6.0 * (nf + 2.0)) * r[n];
    }
    a
});

/// `S1 = -(1-|tr|) + sqrt((1-|tr|)^2 + ti^2)` by series, valid in the
/// rhombus `4 ti < 1 - |tr|`.
fn s1_series(one_minus_ta: f64, ti: f64) -> f64 {
    let x2 = (ti / one_minus_ta) * (ti / one_minus_ta);
    let mut acc = 0.0;
    let mut xp = 1.0;
    for n in 1..12 {
        xp *= x2;
        acc += S1_COEF[n] * xp;
    }
    one_minus_ta * acc
}

fn s3_tilde(s: f64, ti: f64) -> f64 {
    let x2 = (ti / s) * (ti / s);
    let mut acc = 0.0;
    let mut xp = 1.0;
    for c in S3_COEF.iter() {
        acc += c * xp;
        xp *= x2;
    }
    s.abs() / (s * s * s) * acc
}

fn s5_tilde(s: f64, ti: f64) -> f64 {
    let x2 = (ti / s) * (ti / s);
    let mut acc = 0.0;
    let mut xp = 1.0;
    for c in S5_COEF.iter() {
        acc += c * xp;
        xp *= x2;
    }
    s.abs() / (s * s * s * s * s) * acc
}

/// Cone from the endpoints where the closed forms for m = 3, 5 cancel:
/// `|ti| / (|tr| - 1) < limit` with `|tr| > 1` (the real-axis case ti = 0
/// is included; the closed forms divide by ti^2 there).
fn in_cone(g: &RootPairGeom, limit: f64) -> bool {
    let ta = g.tr.abs();
    ta > 1.0 && g.ti < limit * (ta - 1.0)
}

/// `P_k^1` for k = 1..=n.
pub fn pvec_m1(t0: C64, n: usize) -> Result<Vec<f64>> {
    let g = RootPairGeom::new(t0)?;
    let ta = g.tr.abs();
    let ti = g.ti;
    // first value from the left-half-plane substitution tr -> -|tr|
    let first = (1.0 + ta + ((1.0 + ta) * (1.0 + ta) + ti * ti).sqrt()).ln();
    let second = if 4.0 * ti < 1.0 - ta {
        s1_series(1.0 - ta, ti).ln()
    } else {
        (-1.0 + ta + ((ta - 1.0) * (ta - 1.0) + ti * ti).sqrt()).ln()
    };
    let mut p = Vec::with_capacity(n);
    p.push(first - second);
    if n >= 2 {
        p.push(g.u2 - g.u1 - 0.5 * g.b * p[0]);
    }
    for i in 2..n {
        // p[i] = P_{i+1}, recurrence index k = i
        let k = i as f64;
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 }; // (-1)^{k-1}
        let val = (g.u2 - sign * g.u1 + (1.0 - 2.0 * k) * 0.5 * g.b * p[i - 1]
            - (k - 1.0) * g.c * p[i - 2])
            / k;
        p.push(val);
    }
    Ok(p)
}

/// `P_k^3` for k = 1..=n, given the `P^1` vector.
pub fn pvec_m3(t0: C64, n: usize, p1: &[f64]) -> Result<Vec<f64>> {
    assert!(p1.len() + 2 >= n, "P^1 must cover k <= n-2");
    let g = RootPairGeom::new(t0)?;
    let mut p = Vec::with_capacity(n);
    let first = if in_cone(&g, 0.6) {
        s3_tilde(1.0 - g.tr, g.ti) - s3_tilde(-1.0 - g.tr, g.ti)
    } else {
        0.5 / g.d * ((g.b + 2.0) / g.u2 - (g.b - 2.0) / g.u1)
    };
    p.push(first);
    if n >= 2 {
        p.push(1.0 / g.u1 - 1.0 / g.u2 - 0.5 * g.b * p[0]);
    }
    for i in 2..n {
        p.push(p1[i - 2] - g.b * p[i - 1] - g.c * p[i - 2]);
    }
    Ok(p)
}

/// `P_k^5` for k = 1..=n, given the `P^3` vector.
pub fn pvec_m5(t0: C64, n: usize, p3: &[f64]) -> Result<Vec<f64>> {
    assert!(p3.len() + 2 >= n, "P^3 must cover k <= n-2");
    assert!(!p3.is_empty());
    let g = RootPairGeom::new(t0)?;
    let u13 = g.u1 * g.u1 * g.u1;
    let u23 = g.u2 * g.u2 * g.u2;
    let mut p = Vec::with_capacity(n);
    let first = if in_cone(&g, 0.7) {
        s5_tilde(1.0 - g.tr, g.ti) - s5_tilde(-1.0 - g.tr, g.ti)
    } else {
        1.0 / (3.0 * g.d)
            * (0.5 * (g.b + 2.0) / u23 - 0.5 * (g.b - 2.0) / u13 + 2.0 * p3[0])
    };
    p.push(first);
    if n >= 2 {
        p.push(1.0 / (3.0 * u13) - 1.0 / (3.0 * u23) - 0.5 * g.b * p[0]);
    }
    for i in 2..n {
        p.push(p3[i - 2] - g.b * p[i - 1] - g.c * p[i - 2]);
    }
    Ok(p)
}

/// The three P-vectors for one root pair.
#[derive(Debug, Clone)]
pub struct PVectors {
    pub p1: Vec<f64>,
    pub p3: Vec<f64>,
    pub p5: Vec<f64>,
}

pub fn pvectors(t0: C64, n: usize) -> Result<PVectors> {
    let p1 = pvec_m1(t0, n)?;
    let p3 = pvec_m3(t0, n, &p1)?;
    let p5 = pvec_m5(t0, n, &p3)?;
    Ok(PVectors { p1, p3, p5 })
}
