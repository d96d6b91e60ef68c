//! 3D panels over vector-valued parameterizations.

use std::sync::Arc;

use super::legendre::{self, GlRule};
use super::vec3::{self, V3};
use crate::error::{PanelError, Result};
use crate::refquad::barycentric_interp_real;

/// A smooth regular space curve.
pub trait Curve3: Sync {
    fn eval(&self, t: f64) -> V3;
    fn deriv(&self, t: f64) -> V3;
    fn domain(&self) -> (f64, f64);
    fn closed(&self) -> bool {
        false
    }
}

/// One panel of a composite discretization of a space curve. Derivatives
/// are with respect to the standard parameter on `[-1,1]`.
#[derive(Debug, Clone)]
pub struct Panel3 {
    pub a: f64,
    pub b: f64,
    pub rule: Arc<GlRule>,
    /// Positions at the nodes.
    pub y: Vec<V3>,
    /// d y / d sigma at the nodes.
    pub dy: Vec<V3>,
    /// Speeds |d y / d sigma|.
    pub speed: Vec<f64>,
    /// Per-coordinate Legendre coefficients of the positions, truncated to
    /// 16 terms; the root finder works on these.
    pub coef: [Vec<f64>; 3],
    /// Arc length.
    pub h: f64,
}

impl Panel3 {
    pub fn n(&self) -> usize {
        self.rule.n
    }

    pub fn min_node_dist(&self, x: V3) -> f64 {
        self.y
            .iter()
            .map(|&yj| vec3::norm(vec3::sub(yj, x)))
            .fold(f64::INFINITY, f64::min)
    }

    fn fit_coeffs(&mut self) {
        for c in 0..3 {
            let samples: Vec<f64> = self.y.iter().map(|p| p[c]).collect();
            let mut full = legendre::fit_full_real(&self.rule, &samples);
            full.truncate(self.rule.n.min(16));
            self.coef[c] = full;
        }
    }
}

pub fn build_panel3(curve: &dyn Curve3, a: f64, b: f64, n: usize) -> Result<Panel3> {
    if !(a < b) {
        return Err(PanelError::DegenerateInterval(a, b));
    }
    let rule = legendre::gauss_legendre(n)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut y = Vec::with_capacity(n);
    let mut dy = Vec::with_capacity(n);
    for &s in &rule.nodes {
        let t = mid + half * s;
        y.push(curve.eval(t));
        dy.push(vec3::scale(curve.deriv(t), half));
    }
    let speed: Vec<f64> = dy.iter().map(|&d| vec3::norm(d)).collect();
    let h = rule
        .weights
        .iter()
        .zip(&speed)
        .map(|(&w, &s)| w * s)
        .sum();
    let mut panel = Panel3 {
        a,
        b,
        rule,
        y,
        dy,
        speed,
        coef: [vec![], vec![], vec![]],
        h,
    };
    panel.fit_coeffs();
    Ok(panel)
}

/// New panel with `m >= n` nodes, componentwise barycentric interpolation
/// of positions and derivatives from the existing node data.
pub fn upsample_panel3(panel: &Panel3, m: usize) -> Result<Panel3> {
    let n = panel.n();
    assert!(m >= n, "upsampling requires m >= n");
    if m == n {
        return Ok(panel.clone());
    }
    let rule = legendre::gauss_legendre(m)?;
    let mut y = vec![[0.0; 3]; m];
    let mut dy = vec![[0.0; 3]; m];
    for c in 0..3 {
        let ys: Vec<f64> = panel.y.iter().map(|p| p[c]).collect();
        let dys: Vec<f64> = panel.dy.iter().map(|p| p[c]).collect();
        let yi = barycentric_interp_real(&panel.rule.nodes, &ys, &rule.nodes);
        let dyi = barycentric_interp_real(&panel.rule.nodes, &dys, &rule.nodes);
        for j in 0..m {
            y[j][c] = yi[j];
            dy[j][c] = dyi[j];
        }
    }
    let speed: Vec<f64> = dy.iter().map(|&d| vec3::norm(d)).collect();
    let h = rule
        .weights
        .iter()
        .zip(&speed)
        .map(|(&w, &s)| w * s)
        .sum();
    let mut up = Panel3 {
        a: panel.a,
        b: panel.b,
        rule,
        y,
        dy,
        speed,
        coef: [vec![], vec![], vec![]],
        h,
    };
    up.fit_coeffs();
    Ok(up)
}
