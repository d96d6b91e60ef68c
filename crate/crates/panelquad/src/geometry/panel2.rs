//! 2D panels over complex-valued parameterizations.

use std::sync::Arc;

use num_complex::Complex64;

use super::legendre::{self, GlRule};
use crate::error::{PanelError, Result};
use crate::refquad::barycentric_interp;

/// A smooth regular curve in the plane, identified with the complex plane.
pub trait Curve2: Sync {
    /// Position at parameter `t`.
    fn eval(&self, t: f64) -> Complex64;
    /// Derivative with respect to `t`.
    fn deriv(&self, t: f64) -> Complex64;
    /// Parameter domain.
    fn domain(&self) -> (f64, f64);
    /// Whether the domain is periodic (closed curve).
    fn closed(&self) -> bool {
        false
    }
}

/// One panel of a composite discretization of a 2D curve.
///
/// All derivative quantities are taken with respect to the standard
/// parameter `sigma` on `[-1,1]`; the map to the parent curve parameter is
/// `t = (a+b)/2 + sigma (b-a)/2`.
#[derive(Debug, Clone)]
pub struct Panel2 {
    pub a: f64,
    pub b: f64,
    pub rule: Arc<GlRule>,
    /// Complex positions at the nodes.
    pub tau: Vec<Complex64>,
    /// d tau / d sigma at the nodes.
    pub dtau: Vec<Complex64>,
    /// Speeds |d tau / d sigma|.
    pub speed: Vec<f64>,
    /// Legendre coefficients of the node positions, truncated to 16 terms.
    pub coef_tau: Vec<Complex64>,
    /// Legendre coefficients of the node derivatives, truncated to 16 terms.
    pub coef_dtau: Vec<Complex64>,
    /// Arc length, from the panel's own quadrature of the speed.
    pub h: f64,
    /// Complex endpoint images gamma(a), gamma(b).
    pub end_a: Complex64,
    pub end_b: Complex64,
    /// Nearest root of the derivative expansion (Schwarz singularity
    /// preimage), when the Newton search converged.
    pub schwarz: Option<Complex64>,
}

impl Panel2 {
    pub fn n(&self) -> usize {
        self.rule.n
    }

    /// Smallest distance from `zeta` to the panel nodes.
    pub fn min_node_dist(&self, zeta: Complex64) -> f64 {
        self.tau
            .iter()
            .map(|&tj| (tj - zeta).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn fit_coeffs(&mut self) {
        self.coef_tau = legendre::legendre_fit(&self.rule, &self.tau);
        self.coef_dtau = legendre::legendre_fit(&self.rule, &self.dtau);
    }
}

/// Build a panel over `[a,b]` of the given curve with `n` nodes.
pub fn build_panel2(curve: &dyn Curve2, a: f64, b: f64, n: usize) -> Result<Panel2> {
    if !(a < b) {
        return Err(PanelError::DegenerateInterval(a, b));
    }
    let rule = legendre::gauss_legendre(n)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut tau = Vec::with_capacity(n);
    let mut dtau = Vec::with_capacity(n);
    for &s in &rule.nodes {
        let t = mid + half * s;
        tau.push(curve.eval(t));
        dtau.push(curve.deriv(t) * half);
    }
    let speed: Vec<f64> = dtau.iter().map(|d| d.norm()).collect();
    let h = rule
        .weights
        .iter()
        .zip(&speed)
        .map(|(&w, &s)| w * s)
        .sum();
    let mut panel = Panel2 {
        a,
        b,
        rule,
        tau,
        dtau,
        speed,
        coef_tau: vec![],
        coef_dtau: vec![],
        h,
        end_a: curve.eval(a),
        end_b: curve.eval(b),
        schwarz: None,
    };
    panel.fit_coeffs();
    panel.schwarz = schwarz_preimage(&panel);
    Ok(panel)
}

/// Affine frame mapping a panel's complex endpoints to -1 and +1.
#[derive(Debug, Clone, Copy)]
pub struct ComplexPanelFrame {
    /// Scale: half the endpoint difference.
    pub s0: Complex64,
    /// Origin: the endpoint midpoint.
    pub tau0: Complex64,
}

impl ComplexPanelFrame {
    pub fn map(&self, tau: Complex64) -> Complex64 {
        (tau - self.tau0) / self.s0
    }
}

/// Frame for a panel; errors if the endpoints coincide.
pub fn endpoint_frame(panel: &Panel2) -> Result<ComplexPanelFrame> {
    let s0 = 0.5 * (panel.end_b - panel.end_a);
    let tau0 = 0.5 * (panel.end_b + panel.end_a);
    let scale = panel.end_a.norm().max(panel.end_b.norm()).max(1e-300);
    if s0.norm() <= 1e-15 * scale {
        return Err(PanelError::CoincidentEndpoints);
    }
    Ok(ComplexPanelFrame { s0, tau0 })
}

/// Newton search for the nearest root of the panel's derivative expansion,
/// started at the interval center. `None` when the search does not
/// converge (e.g. straight panels, where the derivative has no root).
pub fn schwarz_preimage(panel: &Panel2) -> Option<Complex64> {
    let coef = &panel.coef_dtau;
    if coef.len() < 2 {
        return None;
    }
    let mut t = Complex64::new(0.0, 0.0);
    let scale: f64 = coef.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for _ in 0..20 {
        let (v, d) = legendre::eval_poly_complex_deriv(coef, t);
        if d.norm() < 1e-14 * scale {
            return None;
        }
        let dt = v / d;
        t -= dt;
        if dt.norm() < 1e-13 * (1.0 + t.norm()) {
            let (v, _) = legendre::eval_poly_complex_deriv(coef, t);
            if v.norm() <= 1e-10 * scale {
                return Some(t);
            }
            return None;
        }
    }
    None
}

/// New panel with `m >= n` nodes; geometry and derivative are interpolated
/// componentwise from the existing node data by barycentric Lagrange
/// interpolation (never recomputed from the curve).
pub fn upsample_panel2(panel: &Panel2, m: usize) -> Result<Panel2> {
    let n = panel.n();
    assert!(m >= n, "upsampling requires m >= n");
    if m == n {
        return Ok(panel.clone());
    }
    let rule = legendre::gauss_legendre(m)?;
    let tau = barycentric_interp(&panel.rule.nodes, &panel.tau, &rule.nodes);
    let dtau = barycentric_interp(&panel.rule.nodes, &panel.dtau, &rule.nodes);
    let speed: Vec<f64> = dtau.iter().map(|d| d.norm()).collect();
    let h = rule
        .weights
        .iter()
        .zip(&speed)
        .map(|(&w, &s)| w * s)
        .sum();
    let mut up = Panel2 {
        a: panel.a,
        b: panel.b,
        rule,
        tau,
        dtau,
        speed,
        coef_tau: vec![],
        coef_dtau: vec![],
        h,
        end_a: panel.end_a,
        end_b: panel.end_b,
        schwarz: panel.schwarz,
    };
    up.fit_coeffs();
    Ok(up)
}
