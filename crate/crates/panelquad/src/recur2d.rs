//! Exact integrals of complex monomials against Cauchy-type kernels on the
//! standard panel, by upward recurrence.
//!
//! With the panel transformed to connect -1 and +1, the values
//!
//! `p_k^m(z) = int tau^{k-1} / (tau - z)^m dtau` and
//! `q_k(z)   = int tau^{k-1} log(tau - z) dtau`
//!
//! are path independent up to a winding contribution in `p_1^1`, which is
//! an integer multiple of `2 pi i` determined by whether the target lies in
//! the region bounded by the panel and its chord.

use num_complex::Complex64;

use crate::error::{PanelError, Result};
use crate::geometry::{endpoint_frame, eval_poly_complex, Panel2};

type C64 = Complex64;

const TAU: f64 = std::f64::consts::TAU;

fn check_off_interval(z: C64) -> Result<()> {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return Err(PanelError::SingularityOnInterval);
    }
    Ok(())
}

/// Principal log with the imaginary part canonicalized: a negative zero
/// produced by subtraction would otherwise flip the branch for real
/// arguments left of the origin.
fn ln_principal(w: C64) -> C64 {
    let w = if w.im == 0.0 { C64::new(w.re, 0.0) } else { w };
    w.ln()
}

/// Cauchy-kernel integrals `p_k^1(z)`, k = 1..=n, with the supplied winding
/// number (0 for the flat panel of the singularity swap).
pub fn p_m1(z: C64, n: usize, winding: i32) -> Result<Vec<C64>> {
    check_off_interval(z)?;
    let one = C64::new(1.0, 0.0);
    let mut p = Vec::with_capacity(n);
    let mut p11 = ln_principal(one - z) - ln_principal(-one - z);
    p11 += C64::new(0.0, TAU * winding as f64);
    p.push(p11);
    for i in 1..n {
        let s = if i % 2 == 1 { 2.0 / i as f64 } else { 0.0 };
        let prev = p[i - 1];
        p.push(z * prev + s);
    }
    Ok(p)
}

/// Power-kernel integrals `p_k^m(z)` for `m >= 2` from the vector for
/// `m - 1`.
pub fn p_m(z: C64, m: u32, lower: &[C64]) -> Result<Vec<C64>> {
    assert!(m >= 2);
    check_off_interval(z)?;
    let n = lower.len();
    let one = C64::new(1.0, 0.0);
    let e = 1 - m as i32;
    let mut p = Vec::with_capacity(n);
    p.push(((one - z).powi(e) - (-one - z).powi(e)) / e as f64);
    for i in 1..n {
        let prev = p[i - 1];
        p.push(z * prev + lower[i - 1]);
    }
    Ok(p)
}

/// Log-kernel integrals `q_k(z)`, k = 1..=n, from a `p^1` vector of length
/// at least n+1 computed with the same winding number.
pub fn q_log(z: C64, n: usize, p1: &[C64]) -> Result<Vec<C64>> {
    check_off_interval(z)?;
    assert!(p1.len() >= n + 1, "q_k needs p^1 up to k = n+1");
    let one = C64::new(1.0, 0.0);
    let la = ln_principal(one - z);
    let lb = ln_principal(-one - z);
    let mut q = Vec::with_capacity(n);
    for i in 0..n {
        let k = (i + 1) as f64;
        let sign = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
        q.push((la - lb * sign - p1[i + 1]) / k);
    }
    Ok(q)
}

/// Monomial integral bundle at one singularity location.
#[derive(Debug, Clone)]
pub struct MonomialIntegrals2D {
    pub z: C64,
    pub winding: i32,
    /// `p^1` of length n+1 (one extra entry for the log formula).
    pub p1: Vec<C64>,
}

impl MonomialIntegrals2D {
    pub fn new(z: C64, n: usize, winding: i32) -> Result<Self> {
        Ok(MonomialIntegrals2D {
            z,
            winding,
            p1: p_m1(z, n + 1, winding)?,
        })
    }

    pub fn n(&self) -> usize {
        self.p1.len() - 1
    }

    /// `p_k^m` for k = 1..=n.
    pub fn power(&self, m: u32) -> Result<Vec<C64>> {
        let n = self.n();
        let mut cur: Vec<C64> = self.p1[..n].to_vec();
        for mm in 2..=m {
            cur = p_m(self.z, mm, &cur)?;
        }
        Ok(cur)
    }

    /// `q_k` for k = 1..=n.
    pub fn log(&self) -> Result<Vec<C64>> {
        q_log(self.z, self.n(), &self.p1)
    }
}

/// Winding number of the target with respect to the closed loop formed by
/// the panel traversed forwards and its chord traversed backwards, after
/// mapping the chord endpoints to -1 and +1.
///
/// The total argument increment is accumulated over recursively refined
/// sub-segments so that every accepted step subtends less than pi/2.
/// Targets exactly on the chord are treated as limits from above.
pub fn winding_number(panel: &Panel2, zeta: C64) -> Result<i32> {
    let frame = endpoint_frame(panel)?;
    let mut zt = frame.map(zeta);
    if zt.im == 0.0 && zt.re.abs() < 1.0 {
        zt.im = 1e-200;
    }
    let curve = |s: f64| frame.map(eval_poly_complex(&panel.coef_tau, C64::new(s, 0.0)));
    let chord = |s: f64| C64::new(-s, 0.0); // +1 -> -1 as s goes -1 -> 1
    let mut total = 0.0;
    total += arg_increment(&curve, -1.0, 1.0, zt, 0)?;
    total += arg_increment(&chord, -1.0, 1.0, zt, 0)?;
    let nf = total / TAU;
    let n = nf.round();
    if (nf - n).abs() > 0.1 {
        return Err(PanelError::WindingUndefined);
    }
    Ok(n as i32)
}

fn arg_increment<F: Fn(f64) -> C64>(
    path: &F,
    a: f64,
    b: f64,
    z: C64,
    depth: u32,
) -> Result<f64> {
    let za = path(a) - z;
    let zb = path(b) - z;
    if za.norm() == 0.0 || zb.norm() == 0.0 {
        return Err(PanelError::WindingUndefined);
    }
    let dtheta = (zb / za).arg();
    if dtheta.abs() < std::f64::consts::FRAC_PI_2 && depth >= 3 {
        return Ok(dtheta);
    }
    if depth >= 52 {
        return Err(PanelError::WindingUndefined);
    }
    let mid = 0.5 * (a + b);
    Ok(arg_increment(path, a, mid, z, depth + 1)? + arg_increment(path, mid, b, z, depth + 1)?)
}
