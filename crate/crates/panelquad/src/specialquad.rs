//! Target-specific quadrature weight vectors: direct, Helsing–Ojala and
//! singularity-swap, assembled through transposed Vandermonde solves, plus
//! the per-target evaluation pipeline that classifies and dispatches.
//!
//! Weight vectors act on the samples of the density as it appears in the
//! contour form of the kernel (see [`crate::kernels`]); all geometric
//! factors, including the parameter Jacobian, are folded into the weights.
//! For a kernel split term the approximation is
//! `I ~= sum_j lambda_j f_j`, so the transposed system `A^T lambda = p`
//! against the exact monomial integrals `p` makes the rule exact for
//! polynomial (swapped) integrands.

use num_complex::Complex64;

use crate::config::{QuadConfig, Scheme};
use crate::error::{PanelError, Result};
use crate::geometry::vec3::{self, V3};
use crate::geometry::{
    endpoint_frame, upsample_panel2, upsample_panel3, Panel2, Panel3,
};
use crate::kernels::{
    eval_term_direct, KernelSplit2D, NodeCtx, Sing2D, SlenderBodySplit,
};
use crate::recur2d::{winding_number, MonomialIntegrals2D};
use crate::recur3d::pvectors;
use crate::refquad::{barycentric_interp, barycentric_interp_real};
use crate::rootfind::{classify_target_2d, classify_target_3d, Preimage, TargetClassKind};

type C64 = Complex64;

// ------------------------------------------------------------ Vandermonde

/// Numeric scalar usable in the Björck–Pereyra recurrences.
pub trait BpScalar:
    Copy
    + Default
    + PartialEq
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
}
impl BpScalar for f64 {}
impl BpScalar for C64 {}

fn check_distinct<T: BpScalar>(nodes: &[T]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(PanelError::RepeatedNodes);
            }
        }
    }
    Ok(())
}

/// Solve the interpolation system `A c = f`, `A_ij = nodes_i^{j-1}`,
/// by the Björck–Pereyra divided-difference recurrences in O(n^2).
pub fn solve_interp<T: BpScalar>(nodes: &[T], rhs: &[T]) -> Vec<T> {
    debug_assert_eq!(nodes.len(), rhs.len());
    let n = nodes.len();
    let mut f = rhs.to_vec();
    for k in 0..n {
        for i in ((k + 1)..n).rev() {
            f[i] = (f[i] - f[i - 1]) / (nodes[i] - nodes[i - k - 1]);
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k..n - 1 {
            f[i] = f[i] - nodes[k] * f[i + 1];
        }
    }
    f
}

/// Solve the transposed (moment) system `A^T lambda = p`.
pub fn solve_adjoint<T: BpScalar>(nodes: &[T], rhs: &[T]) -> Vec<T> {
    debug_assert_eq!(nodes.len(), rhs.len());
    let n = nodes.len();
    let mut b = rhs.to_vec();
    for k in 0..n.saturating_sub(1) {
        for i in ((k + 1)..n).rev() {
            b[i] = b[i] - nodes[k] * b[i - 1];
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in (k + 1)..n {
            b[i] = b[i] / (nodes[i] - nodes[i - k - 1]);
        }
        for i in k..n - 1 {
            b[i] = b[i] - b[i + 1];
        }
    }
    b
}

/// Checked front-end for the two solves ("transposed" picks the adjoint
/// system used for weight vectors).
pub fn vandermonde_solve<T: BpScalar>(
    nodes: &[T],
    rhs: &[T],
    transposed: bool,
) -> Result<Vec<T>> {
    if nodes.len() != rhs.len() {
        return Err(PanelError::Config(
            "vandermonde_solve: dimension mismatch".into(),
        ));
    }
    check_distinct(nodes)?;
    Ok(if transposed {
        solve_adjoint(nodes, rhs)
    } else {
        solve_interp(nodes, rhs)
    })
}

// ------------------------------------------------------------- weights 2D

/// Scheme that produced a weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeTag {
    Direct,
    HelsingOjala,
    SingularitySwap,
}

/// Target-specific weights for one 2D kernel type, acting on contour-form
/// density samples at the panel nodes.
#[derive(Debug, Clone)]
pub struct WeightVector2 {
    pub values: Vec<C64>,
    pub kernel: Sing2D,
    pub scheme: SchemeTag,
}

impl WeightVector2 {
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn apply(&self, samples: &[C64]) -> C64 {
        self.values
            .iter()
            .zip(samples)
            .map(|(l, f)| l * f)
            .fold(C64::new(0.0, 0.0), |a, b| a + b)
    }
}

/// Target-specific weights for one 3D kernel power, acting on the smooth
/// vector numerator samples.
#[derive(Debug, Clone)]
pub struct WeightVector3 {
    pub values: Vec<f64>,
    pub m: u32,
    pub scheme: SchemeTag,
}

impl WeightVector3 {
    pub fn apply(&self, samples: &[V3]) -> V3 {
        let mut acc = [0.0; 3];
        for (l, s) in self.values.iter().zip(samples) {
            for c in 0..3 {
                acc[c] += l * s[c];
            }
        }
        acc
    }
}

/// Plain product-rule weights in contour form,
/// `lambda_j = w_j gamma'_j K(tau_j - zeta)`.
pub fn direct_weights_2d(panel: &Panel2, zeta: C64, kernel: Sing2D) -> Result<WeightVector2> {
    let mut values = Vec::with_capacity(panel.n());
    for j in 0..panel.n() {
        let d = panel.tau[j] - zeta;
        if d.norm() == 0.0 {
            return Err(PanelError::TargetOnCurve);
        }
        let k = match kernel {
            Sing2D::Log => d.ln(),
            Sing2D::Pow(m) => d.powi(-(m as i32)),
        };
        values.push(panel.rule.weights[j] * panel.dtau[j] * k);
    }
    Ok(WeightVector2 {
        values,
        kernel,
        scheme: SchemeTag::Direct,
    })
}

/// Plain product-rule weights for the real arc-length form,
/// `lambda_j = w_j |g'_j| K(x, y_j)` for a user-supplied kernel.
pub fn direct_weights_arc<K: Fn(usize) -> f64>(
    weights: &[f64],
    speed: &[f64],
    kernel: K,
) -> Vec<f64> {
    weights
        .iter()
        .zip(speed)
        .enumerate()
        .map(|(j, (&w, &s))| w * s * kernel(j))
        .collect()
}

/// Helsing–Ojala complex interpolatory weights: transform the panel to
/// connect -1 and +1, compute exact monomial integrals there with the
/// winding-number branch correction, solve the transposed Vandermonde
/// system at the transformed nodes, and map the result back
/// (`I_m = s0^{1-m} I~_m`; the log kernel picks up the additive total
/// charge term `w_j gamma'_j log s0`).
pub fn ho_weights_2d(panel: &Panel2, zeta: C64, kernel: Sing2D) -> Result<WeightVector2> {
    let n = panel.n();
    let frame = endpoint_frame(panel)?;
    let mut zt = frame.map(zeta);
    if zt.im == 0.0 && zt.re.abs() < 1.0 {
        zt.im = 1e-200; // chord point: take the limit from above
    }
    if (zt - C64::new(1.0, 0.0)).norm() < 1e-15 || (zt + C64::new(1.0, 0.0)).norm() < 1e-15 {
        return Err(PanelError::TargetOnCurve);
    }
    let winding = winding_number(panel, zeta)?;
    let tnodes: Vec<C64> = panel.tau.iter().map(|&t| frame.map(t)).collect();
    check_distinct(&tnodes)?;
    let mi = MonomialIntegrals2D::new(zt, n, winding)?;
    let log_s0 = frame.s0.ln();
    let values = match kernel {
        Sing2D::Pow(m) => {
            let p = mi.power(m)?;
            let lam = solve_adjoint(&tnodes, &p);
            let scale = frame.s0.powi(1 - m as i32);
            lam.into_iter().map(|l| l * scale).collect()
        }
        Sing2D::Log => {
            let q = mi.log()?;
            let lam = solve_adjoint(&tnodes, &q);
            lam.into_iter()
                .enumerate()
                .map(|(j, l)| {
                    l * frame.s0 + panel.rule.weights[j] * panel.dtau[j] * log_s0
                })
                .collect()
        }
    };
    Ok(WeightVector2 {
        values,
        kernel,
        scheme: SchemeTag::HelsingOjala,
    })
}

/// Singularity-swap weights: monomial integrals on `[-1,1]` at the target
/// preimage, the transposed real-node Vandermonde solve, and per-node
/// corrections that turn weights for the swapped smooth integrand into
/// weights on the density samples.
pub fn ssq_weights_2d(
    panel: &Panel2,
    zeta: C64,
    pre: &Preimage,
    kernel: Sing2D,
) -> Result<WeightVector2> {
    let t0 = pre.t0;
    if t0.im == 0.0 && t0.re.abs() <= 1.0 {
        return Err(PanelError::TargetOnCurve);
    }
    let n = panel.n();
    let nodes: Vec<C64> = panel.rule.nodes.iter().map(|&t| C64::new(t, 0.0)).collect();
    // the flat panel encloses no area with its chord, so the winding is 0
    let mi = MonomialIntegrals2D::new(t0, n, 0)?;
    let values = match kernel {
        Sing2D::Pow(m) => {
            let p = mi.power(m)?;
            let mu = solve_adjoint(&nodes, &p);
            (0..n)
                .map(|j| {
                    let q = panel.tau[j] - zeta;
                    let ratio = (nodes[j] - t0) / q;
                    mu[j] * ratio.powi(m as i32) * panel.dtau[j]
                })
                .collect()
        }
        Sing2D::Log => {
            let q = mi.log()?;
            let mu = solve_adjoint(&nodes, &q);
            // log of the smooth ratio Q(t)/(t - t0), unwrapped along the
            // nodes so the sampled branch is continuous
            let mut logr = Vec::with_capacity(n);
            let mut prev = C64::new(0.0, 0.0);
            for j in 0..n {
                let r = (panel.tau[j] - zeta) / (nodes[j] - t0);
                let lr = if j == 0 {
                    r.ln()
                } else {
                    let step = (r / prev).ln();
                    logr[j - 1] + step
                };
                logr.push(lr);
                prev = r;
            }
            (0..n)
                .map(|j| (mu[j] + panel.rule.weights[j] * logr[j]) * panel.dtau[j])
                .collect()
        }
    };
    Ok(WeightVector2 {
        values,
        kernel,
        scheme: SchemeTag::SingularitySwap,
    })
}

// ------------------------------------------------------------- weights 3D

/// Direct product-rule weights for `1/|R|^m` against smooth numerator
/// samples: `lambda_j = w_j |g'_j| / R_j^m`.
pub fn direct_weights_3d(panel: &Panel3, x: V3, m: u32) -> Result<WeightVector3> {
    let mut values = Vec::with_capacity(panel.n());
    for j in 0..panel.n() {
        let r = vec3::norm(vec3::sub(x, panel.y[j]));
        if r == 0.0 {
            return Err(PanelError::TargetOnCurve);
        }
        values.push(panel.rule.weights[j] * panel.speed[j] * r.powi(-(m as i32)));
    }
    Ok(WeightVector3 {
        values,
        m,
        scheme: SchemeTag::Direct,
    })
}

/// Singularity-swap weights for `1/|R|^m`:
/// `lambda_j = mu_j |g'_j| (|t_j - t0|^2 / R(t_j)^2)^{m/2}` with `mu`
/// solving the transposed Vandermonde system against the `P_k^m` vector.
pub fn ssq_weights_3d(panel: &Panel3, x: V3, pre: &Preimage, m: u32) -> Result<WeightVector3> {
    let t0 = pre.t0;
    let n = panel.n();
    let pv = pvectors(t0, n)?;
    let p = match m {
        1 => &pv.p1,
        3 => &pv.p3,
        5 => &pv.p5,
        _ => {
            return Err(PanelError::Config(format!(
                "3D kernel power m = {m} not supported (m in {{1,3,5}})"
            )))
        }
    };
    let mu = solve_adjoint(&panel.rule.nodes, p);
    let values = (0..n)
        .map(|j| {
            let tj = panel.rule.nodes[j];
            let dt2 = (tj - t0.re) * (tj - t0.re) + t0.im * t0.im;
            let r2 = vec3::norm_sq(vec3::sub(x, panel.y[j]));
            mu[j] * panel.speed[j] * (dt2 / r2).powf(0.5 * m as f64)
        })
        .collect();
    Ok(WeightVector3 {
        values,
        m,
        scheme: SchemeTag::SingularitySwap,
    })
}

/// All three slender-body weight vectors at one target.
pub fn ssq_weights_slender(
    panel: &Panel3,
    x: V3,
    pre: &Preimage,
) -> Result<[WeightVector3; 3]> {
    Ok([
        ssq_weights_3d(panel, x, pre, 1)?,
        ssq_weights_3d(panel, x, pre, 3)?,
        ssq_weights_3d(panel, x, pre, 5)?,
    ])
}

// ---------------------------------------------------------------- pipeline

/// Counters describing one evaluation sweep.
#[derive(Debug, Default, Clone)]
pub struct EvalCounters {
    /// Root searches that failed to converge (target fell back to direct).
    pub rootfind_failures: u64,
    /// Times the Schwarz-preimage criterion selected the companion solver.
    pub companion_triggers: u64,
    /// Panels handled with special weights.
    pub n_special: u64,
    /// Panels handled by the upsampled direct rule.
    pub n_near_direct: u64,
    /// Kernel/numerator evaluations on near panels.
    pub n_kernel_evals: u64,
    /// Time spent finding roots and building weight vectors.
    pub t_weights: std::time::Duration,
    /// Time spent on near-panel kernel/numerator evaluation.
    pub t_eval: std::time::Duration,
}

impl EvalCounters {
    pub fn merge(&mut self, o: &EvalCounters) {
        self.rootfind_failures += o.rootfind_failures;
        self.companion_triggers += o.companion_triggers;
        self.n_special += o.n_special;
        self.n_near_direct += o.n_near_direct;
        self.n_kernel_evals += o.n_kernel_evals;
        self.t_weights += o.t_weights;
        self.t_eval += o.t_eval;
    }
}

fn eval_panel_direct_2d(
    panel: &Panel2,
    density: &[C64],
    split: &KernelSplit2D,
    zeta: C64,
) -> C64 {
    split
        .terms
        .iter()
        .map(|t| {
            eval_term_direct(
                t,
                &panel.rule.weights,
                &panel.tau,
                &panel.dtau,
                &panel.speed,
                density,
                zeta,
            )
        })
        .fold(C64::new(0.0, 0.0), |a, b| a + b)
}

/// Evaluate a 2D layer potential at one target over a set of panels with
/// per-panel target classification. Returns the reduced physical value.
///
/// Root-find failures degrade to the direct rule and are counted, never
/// fatal; a target numerically on the curve is an error.
pub fn near_eval_2d(
    panels: &[Panel2],
    density: &[Vec<C64>],
    split: &KernelSplit2D,
    zeta: C64,
    scheme: Scheme,
    cfg: &QuadConfig,
    mut counters: Option<&mut EvalCounters>,
) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for (panel, dens) in panels.iter().zip(density) {
        if scheme == Scheme::Direct {
            total += eval_panel_direct_2d(panel, dens, split, zeta);
            continue;
        }
        let class = classify_target_2d(panel, zeta, cfg);
        if let Some(c) = counters.as_deref_mut() {
            if class.companion_trigger {
                c.companion_triggers += 1;
            }
            if class.preimage.map(|p| !p.converged).unwrap_or(false) {
                c.rootfind_failures += 1;
            }
        }
        match class.kind {
            TargetClassKind::Far => {
                total += eval_panel_direct_2d(panel, dens, split, zeta);
            }
            TargetClassKind::NearDirectUpsampled => {
                let m = 2 * panel.n();
                let up = upsample_panel2(panel, m)?;
                let fup = barycentric_interp(&panel.rule.nodes, dens, &up.rule.nodes);
                total += eval_panel_direct_2d(&up, &fup, split, zeta);
                if let Some(c) = counters.as_deref_mut() {
                    c.n_near_direct += 1;
                    c.n_kernel_evals += m as u64;
                }
            }
            TargetClassKind::Special => {
                let pre = class.preimage.expect("special implies preimage");
                let m = cfg.n_special_2d();
                let (p, f);
                if m > panel.n() {
                    p = upsample_panel2(panel, m)?;
                    f = barycentric_interp(&panel.rule.nodes, dens, &p.rule.nodes);
                } else {
                    p = panel.clone();
                    f = dens.clone();
                }
                if let Some(c) = counters.as_deref_mut() {
                    c.n_special += 1;
                    c.n_kernel_evals += m as u64;
                }
                for term in &split.terms {
                    let w = match scheme {
                        Scheme::HelsingOjala => ho_weights_2d(&p, zeta, term.sing)?,
                        Scheme::SingularitySwap => ssq_weights_2d(&p, zeta, &pre, term.sing)?,
                        Scheme::Direct => unreachable!(),
                    };
                    let samples: Vec<C64> = (0..p.n())
                        .map(|j| {
                            (term.sample)(&NodeCtx {
                                tau: p.tau[j],
                                dtau: p.dtau[j],
                                speed: p.speed[j],
                                zeta,
                                density: f[j],
                            })
                        })
                        .collect();
                    total += term.finish(w.apply(&samples));
                }
            }
        }
    }
    Ok(split.reduce(total))
}

fn eval_panel_direct_3d(panel: &Panel3, force: &[V3], split: &SlenderBodySplit, x: V3) -> V3 {
    let mut u = [0.0; 3];
    for j in 0..panel.n() {
        let r = vec3::sub(x, panel.y[j]);
        let k = split.direct_kernel(r, force[j]);
        let w = panel.rule.weights[j] * panel.speed[j];
        for c in 0..3 {
            u[c] += w * k[c];
        }
    }
    u
}

/// Evaluate the slender-body field at one target over a set of panels.
/// Special targets are handled with data upsampled to `cfg.n_upsample_3d`
/// nodes, which is required for full accuracy in 3D.
pub fn near_eval_3d(
    panels: &[Panel3],
    force: &[Vec<V3>],
    split: &SlenderBodySplit,
    x: V3,
    scheme: Scheme,
    cfg: &QuadConfig,
    mut counters: Option<&mut EvalCounters>,
) -> Result<V3> {
    let mut u = [0.0; 3];
    for (panel, f) in panels.iter().zip(force) {
        if scheme == Scheme::Direct {
            let v = eval_panel_direct_3d(panel, f, split, x);
            for c in 0..3 {
                u[c] += v[c];
            }
            continue;
        }
        let tw = std::time::Instant::now();
        let class = classify_target_3d(panel, x, cfg);
        if let Some(c) = counters.as_deref_mut() {
            c.t_weights += tw.elapsed();
            if class.preimage.map(|p| !p.converged).unwrap_or(false) {
                c.rootfind_failures += 1;
            }
        }
        let v = match class.kind {
            TargetClassKind::Far => eval_panel_direct_3d(panel, f, split, x),
            TargetClassKind::NearDirectUpsampled => {
                let m = cfg.n_upsample_3d;
                let up = upsample_panel3(panel, m)?;
                let fup = upsample_force(panel, f, &up);
                let te = std::time::Instant::now();
                let v = eval_panel_direct_3d(&up, &fup, split, x);
                if let Some(c) = counters.as_deref_mut() {
                    c.n_near_direct += 1;
                    c.n_kernel_evals += m as u64;
                    c.t_eval += te.elapsed();
                }
                v
            }
            TargetClassKind::Special => {
                let pre = class.preimage.expect("special implies preimage");
                let m = cfg.n_upsample_3d.max(panel.n());
                let up = upsample_panel3(panel, m)?;
                let fup = upsample_force(panel, f, &up);
                let tw = std::time::Instant::now();
                let weights = [
                    ssq_weights_3d(&up, x, &pre, 1)?,
                    ssq_weights_3d(&up, x, &pre, 3)?,
                    ssq_weights_3d(&up, x, &pre, 5)?,
                ];
                if let Some(c) = counters.as_deref_mut() {
                    c.t_weights += tw.elapsed();
                    c.n_special += 1;
                    c.n_kernel_evals += m as u64;
                }
                let te = std::time::Instant::now();
                let mut v = [0.0; 3];
                for (term, w) in split.terms().iter().zip(&weights) {
                    for j in 0..up.n() {
                        let s = split.sample(term.m, x, up.y[j], fup[j]);
                        for c in 0..3 {
                            v[c] += term.scale * w.values[j] * s[c];
                        }
                    }
                }
                if let Some(c) = counters.as_deref_mut() {
                    c.t_eval += te.elapsed();
                }
                v
            }
        };
        for c in 0..3 {
            u[c] += v[c];
        }
    }
    Ok(u)
}

fn upsample_force(panel: &Panel3, f: &[V3], up: &Panel3) -> Vec<V3> {
    let m = up.n();
    let mut out = vec![[0.0; 3]; m];
    for c in 0..3 {
        let fc: Vec<f64> = f.iter().map(|v| v[c]).collect();
        let fi = barycentric_interp_real(&panel.rule.nodes, &fc, &up.rule.nodes);
        for j in 0..m {
            out[j][c] = fi[j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::UpsampleMode;
    use crate::geometry::gauss_legendre;
    use crate::geometry::{build_panel2, build_panel3, Curve2, Line2, Line3, Parabola};
    use crate::kernels::laplace_dlp_2d;
    use crate::recur2d::p_m1;
    use crate::rootfind::newton_preimage_2d;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bp_trivial_and_polynomial() {
        // single node: lambda = rhs
        let lam = solve_adjoint(&[0.3], &[2.5]);
        assert_eq!(lam, vec![2.5]);
        // interpolation of t^2 samples at GL(4) gives e_3
        let rule = gauss_legendre(4).unwrap();
        let f: Vec<f64> = rule.nodes.iter().map(|&t| t * t).collect();
        let c = solve_interp(&rule.nodes, &f);
        for (k, ck) in c.iter().enumerate() {
            let expect = if k == 2 { 1.0 } else { 0.0 };
            assert!((ck - expect).abs() < 1e-13, "c[{k}] = {ck}");
        }
    }

    #[test]
    fn bp_residuals_at_n16() {
        let rule = gauss_legendre(16).unwrap();
        // smooth right-hand side
        let f: Vec<f64> = rule.nodes.iter().map(|&t| (2.0 + t).sin()).collect();
        let c = solve_interp(&rule.nodes, &f);
        // residual ||Ac - f|| / ||f||
        let mut rmax: f64 = 0.0;
        let mut fmax: f64 = 0.0;
        for (j, &t) in rule.nodes.iter().enumerate() {
            let mut acc = 0.0;
            let mut tp = 1.0;
            for ck in &c {
                acc += ck * tp;
                tp *= t;
            }
            rmax = rmax.max((acc - f[j]).abs());
            fmax = fmax.max(f[j].abs());
        }
        assert!(rmax / fmax < 1e-13, "relative residual {}", rmax / fmax);

        // adjoint consistency: lambda^T f == c^T p for the same system
        let p: Vec<f64> = (0..16)
            .map(|k| if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 })
            .collect();
        let lam = solve_adjoint(&rule.nodes, &p);
        let lhs: f64 = lam.iter().zip(&f).map(|(l, x)| l * x).sum();
        let rhs: f64 = c.iter().zip(&p).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs()));
    }

    #[test]
    fn vandermonde_solve_rejects_repeated_nodes() {
        assert!(vandermonde_solve(&[0.1, 0.1, 0.5], &[1.0, 2.0, 3.0], true).is_err());
    }

    #[test]
    fn direct_weights_sum_rules() {
        // constant kernel on a straight panel: weights sum to the chord
        let p = build_panel2(&Line2, -1.0, 1.0, 16).unwrap();
        let w = direct_weights_2d(&p, C64::new(0.0, 3.0), Sing2D::Pow(1)).unwrap();
        // multiply back by the kernel inverse to recover plain contour rule
        let total: C64 = (0..16)
            .map(|j| w.values[j] * (p.tau[j] - C64::new(0.0, 3.0)))
            .sum();
        assert!((total - C64::new(2.0, 0.0)).norm() < 1e-13);
        // arc-length form on a half circle: weights sum to pi
        let pc = build_panel2(&crate::geometry::Circle2, 0.0, std::f64::consts::PI, 16).unwrap();
        let wa = direct_weights_arc(&pc.rule.weights, &pc.speed, |_| 1.0);
        let s: f64 = wa.iter().sum();
        assert_abs_diff_eq!(s, std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn ssq_flat_panel_reproduces_monomial_integrals() {
        // on the straight panel the swap is exact: weights integrate t^{k-1}
        let p = build_panel2(&Line2, -1.0, 1.0, 16).unwrap();
        let cfg = QuadConfig::new(16, 1e-12, UpsampleMode::None);
        let zeta = C64::new(0.3, 0.2);
        let pre = newton_preimage_2d(&p, zeta, &cfg);
        assert!(pre.converged);
        let w = ssq_weights_2d(&p, zeta, &pre, Sing2D::Pow(1)).unwrap();
        let pk = p_m1(zeta, 16, 0).unwrap();
        for k in 0..16 {
            let samples: Vec<C64> = p
                .rule
                .nodes
                .iter()
                .map(|&t| C64::new(t.powi(k as i32), 0.0))
                .collect();
            let got = w.apply(&samples);
            assert!(
                (got - pk[k]).norm() <= 1e-12 * (1.0 + pk[k].norm()),
                "k={k}: {got} vs {}",
                pk[k]
            );
        }
    }

    #[test]
    fn ho_equals_ssq_on_flat_panel() {
        let p = build_panel2(&Line2, -1.0, 1.0, 16).unwrap();
        let cfg = QuadConfig::new(16, 1e-12, UpsampleMode::None);
        let zeta = C64::new(-0.2, 0.15);
        let pre = newton_preimage_2d(&p, zeta, &cfg);
        let dens: Vec<C64> = p
            .rule
            .nodes
            .iter()
            .map(|&t| C64::new((1.5 * t).cos(), 0.0))
            .collect();
        for kernel in [Sing2D::Pow(1), Sing2D::Pow(2), Sing2D::Log] {
            let who = ho_weights_2d(&p, zeta, kernel).unwrap();
            let wssq = ssq_weights_2d(&p, zeta, &pre, kernel).unwrap();
            let a = who.apply(&dens);
            let b = wssq.apply(&dens);
            assert!(
                (a - b).norm() <= 1e-12 * (1.0 + a.norm()),
                "{kernel:?}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn ho_frame_invariance() {
        // rotated and scaled straight panel equals the canonical result
        struct Rot;
        impl crate::geometry::Curve2 for Rot {
            fn eval(&self, t: f64) -> C64 {
                C64::new(0.4, 1.1) * t + C64::new(0.3, -0.2)
            }
            fn deriv(&self, _t: f64) -> C64 {
                C64::new(0.4, 1.1)
            }
            fn domain(&self) -> (f64, f64) {
                (-1.0, 1.0)
            }
        }
        let p = build_panel2(&Rot, -1.0, 1.0, 16).unwrap();
        let frame = endpoint_frame(&p).unwrap();
        let zeta = Rot.eval(0.3) + C64::new(-0.8, 0.4); // far: plain quadrature is converged
        let dens: Vec<C64> = p
            .rule
            .nodes
            .iter()
            .map(|&t| C64::new(t * t, 0.2 * t))
            .collect();
        // canonical computation on the transformed flat panel
        let flat = build_panel2(&Line2, -1.0, 1.0, 16).unwrap();
        let zt = frame.map(zeta);
        // independent contour quadrature for the (branch-free) power
        // kernels; the density is the polynomial interpolant of the samples
        let coef = crate::geometry::legendre_fit(&p.rule, &dens);
        let fine = gauss_legendre(64).unwrap();
        let quad_oracle = |m: i32| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            for (&t, &w) in fine.nodes.iter().zip(&fine.weights) {
                let d = Rot.eval(t) - zeta;
                let fv = crate::geometry::eval_poly_complex(&coef, C64::new(t, 0.0));
                acc += fv * d.powi(-m) * Rot.deriv(t) * w;
            }
            acc
        };
        for (kernel, m) in [(Sing2D::Pow(1), 1i32), (Sing2D::Pow(2), 2), (Sing2D::Log, 0)] {
            let w = ho_weights_2d(&p, zeta, kernel).unwrap();
            let got = w.apply(&dens);
            let wflat = ho_weights_2d(&flat, zt, kernel).unwrap();
            let tilde = wflat.apply(&dens);
            let expect = match kernel {
                Sing2D::Pow(_) => frame.s0.powi(1 - m) * tilde,
                Sing2D::Log => {
                    let charge: C64 = (0..16)
                        .map(|j| p.rule.weights[j] * p.dtau[j] * dens[j])
                        .sum();
                    frame.s0 * tilde + frame.s0.ln() * charge
                }
            };
            assert!(
                (got - expect).norm() <= 1e-13 * (1.0 + expect.norm()),
                "{kernel:?}: {got} vs {expect}"
            );
            if let Sing2D::Pow(_) = kernel {
                let oracle = quad_oracle(m);
                assert!(
                    (got - oracle).norm() <= 1e-11 * (1.0 + oracle.norm()),
                    "{kernel:?} vs quadrature oracle: {got} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn ho_log_charge_term_physical_value() {
        // Single layer potential on a rotated straight panel: the physical
        // value -Im int rho conj(nu) log(tau-z) dtau is branch-immune and
        // pins down the complex charge coefficient in the back-transform.
        struct Rot;
        impl crate::geometry::Curve2 for Rot {
            fn eval(&self, t: f64) -> C64 {
                C64::new(0.4, 1.1) * t + C64::new(0.3, -0.2)
            }
            fn deriv(&self, _t: f64) -> C64 {
                C64::new(0.4, 1.1)
            }
            fn domain(&self) -> (f64, f64) {
                (-1.0, 1.0)
            }
        }
        let p = build_panel2(&Rot, -1.0, 1.0, 16).unwrap();
        let zeta = Rot.eval(0.3) + C64::new(-0.9, 0.35);
        let rho = |t: f64| t * t + 0.3;
        let nu = C64::new(0.0, 1.0) * p.dtau[0] / p.speed[0];
        let dens: Vec<C64> = p
            .rule
            .nodes
            .iter()
            .map(|&t| rho(t) * nu.conj())
            .collect();
        let w = ho_weights_2d(&p, zeta, Sing2D::Log).unwrap();
        let got = -w.apply(&dens).im;
        let fine = gauss_legendre(64).unwrap();
        let mut oracle = 0.0;
        for (&t, &wt) in fine.nodes.iter().zip(&fine.weights) {
            let d = (Rot.eval(t) - zeta).norm();
            oracle += wt * Rot.deriv(t).norm() * rho(t) * d.ln();
        }
        assert!(
            (got - oracle).abs() <= 1e-11 * (1.0 + oracle.abs()),
            "{got} vs {oracle}"
        );
    }

    #[test]
    fn ssq_3d_flat_line_unit_density() {
        // straight 3D line, unit density, m = 1: lambda^T 1 = P_1^1(t0)
        let p = build_panel3(&Line3, -1.0, 1.0, 16).unwrap();
        let cfg = QuadConfig::new(16, 1e-8, UpsampleMode::None);
        let x = [0.3, 0.2, 0.0];
        let pre = crate::rootfind::root_3d(&p, x, &cfg);
        assert!(pre.converged);
        let w = ssq_weights_3d(&p, x, &pre, 1).unwrap();
        let total: f64 = w.values.iter().sum();
        let pv = pvectors(pre.t0, 1).unwrap();
        assert!((total - pv.p1[0]).abs() < 1e-13 * (1.0 + pv.p1[0].abs()));
    }

    #[test]
    fn near_eval_2d_far_targets_match_direct_sum() {
        let panels = vec![build_panel2(&Parabola { k: 0.3 }, -1.0, 1.0, 16).unwrap()];
        let dens: Vec<Vec<C64>> = panels
            .iter()
            .map(|p| p.tau.iter().map(|t| C64::new(t.re * t.im, 0.0)).collect())
            .collect();
        let split = laplace_dlp_2d();
        let cfg = QuadConfig::new(16, 1e-8, UpsampleMode::None);
        let zeta = C64::new(0.1, 5.0);
        let a = near_eval_2d(
            &panels,
            &dens,
            &split,
            zeta,
            Scheme::SingularitySwap,
            &cfg,
            None,
        )
        .unwrap();
        let b = near_eval_2d(&panels, &dens, &split, zeta, Scheme::Direct, &cfg, None).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn scheme_continuity_across_classification_boundary() {
        // at targets with rho(t0) = rho_eps +- 1e-3 both the direct and the
        // special branch are accurate, so the two values nearly coincide
        let p = vec![build_panel2(&Parabola { k: 0.25 }, -1.0, 1.0, 16).unwrap()];
        let dens: Vec<Vec<C64>> = p
            .iter()
            .map(|q| q.tau.iter().map(|t| C64::new(t.re * t.im, 0.0)).collect())
            .collect();
        let split = laplace_dlp_2d();
        let tol = 1e-8;
        let cfg = QuadConfig::new(16, tol, UpsampleMode::None).with_rho_eps(1.8);
        // bisect for the height where rho(t0) crosses rho_eps
        let mut lo = 1e-3;
        let mut hi = 1.5;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let pre = newton_preimage_2d(&p[0], C64::new(0.3, mid), &cfg);
            if pre.rho < cfg.rho_eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        for dy in [-1e-3, 1e-3] {
            let z = C64::new(0.3, lo + dy);
            let udir =
                near_eval_2d(&p, &dens, &split, z, Scheme::Direct, &cfg, None).unwrap();
            let pre = newton_preimage_2d(&p[0], z, &cfg);
            let w = ssq_weights_2d(&p[0], z, &pre, Sing2D::Pow(1)).unwrap();
            let uswap = split.reduce(w.apply(&dens[0]));
            let diff = (udir - uswap).norm();
            assert!(
                diff <= 10.0 * tol * (1.0 + udir.norm()),
                "branch mismatch {diff} at rho boundary ({udir} vs {uswap})"
            );
        }
    }
}
