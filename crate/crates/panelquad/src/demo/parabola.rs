//! Error grid for the Laplace double layer on a single parabolic panel,
//! comparing direct, Helsing–Ojala and singularity-swap quadrature against
//! a per-target adaptive reference.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{QuadConfig, Scheme, UpsampleMode};
use crate::demo::output::{ErrorGrid, GridPoint};
use crate::error::Result;
use crate::geometry::{build_panel2, Curve2, Parabola};
use crate::kernels::laplace_dlp_2d;
use crate::refquad::{adaptive_eval_2d, AdaptiveStats};
use crate::specialquad::near_eval_2d;

type C64 = Complex64;

#[derive(Debug, Clone)]
pub struct ParabolaConfig {
    pub k: f64,
    pub n: usize,
    pub scheme: Scheme,
    pub mode: UpsampleMode,
    pub tol: f64,
    pub grid_w: usize,
    pub grid_h: usize,
}

impl Default for ParabolaConfig {
    fn default() -> Self {
        ParabolaConfig {
            k: 0.25,
            n: 16,
            scheme: Scheme::SingularitySwap,
            mode: UpsampleMode::None,
            tol: 1e-8,
            grid_w: 120,
            grid_h: 100,
        }
    }
}

pub struct ParabolaResult {
    pub grid: ErrorGrid,
    /// Distance from each grid point to the panel, aligned with the grid.
    pub dist: Vec<f64>,
}

impl ParabolaResult {
    /// Largest error over points farther than `min_dist` from the panel.
    pub fn max_err_outside(&self, min_dist: f64) -> f64 {
        self.grid
            .points
            .iter()
            .zip(&self.dist)
            .filter(|(p, &d)| d >= min_dist && p.e_rel.is_finite())
            .map(|(p, _)| p.e_rel)
            .fold(0.0, f64::max)
    }
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Direct => "direct",
        Scheme::HelsingOjala => "ho",
        Scheme::SingularitySwap => "ssq",
    }
}

fn mode_name(m: UpsampleMode) -> &'static str {
    match m {
        UpsampleMode::None => "none",
        UpsampleMode::Upsample => "upsample",
        UpsampleMode::UpsampleWithUpsampledDirect => "upsample-direct",
    }
}

/// Evaluate the error grid. Grid points that land on the panel itself get
/// a NaN error entry and are excluded from maxima.
pub fn run(cfg: &ParabolaConfig) -> Result<ParabolaResult> {
    let curve = Parabola { k: cfg.k };
    let panel = build_panel2(&curve, -1.0, 1.0, cfg.n)?;
    let density: Vec<C64> = panel
        .tau
        .iter()
        .map(|t| C64::new(t.re * t.im, 0.0))
        .collect();
    let panels = vec![panel];
    let densities = vec![density];
    let split = laplace_dlp_2d();
    let qcfg = QuadConfig::new(cfg.n, cfg.tol, cfg.mode);

    let (x0, x1) = (-1.4, 1.4);
    let (y0, y1) = (-0.8, 1.2);
    let mut coords = Vec::with_capacity(cfg.grid_w * cfg.grid_h);
    for jy in 0..cfg.grid_h {
        for jx in 0..cfg.grid_w {
            let x = x0 + (x1 - x0) * jx as f64 / (cfg.grid_w - 1) as f64;
            let y = y0 + (y1 - y0) * jy as f64 / (cfg.grid_h - 1) as f64;
            coords.push(C64::new(x, y));
        }
    }

    let rows: Vec<(f64, f64, f64)> = coords
        .par_iter()
        .map(|&zeta| {
            let uref = {
                let mut stats = AdaptiveStats::default();
                adaptive_eval_2d(&panels, &densities, &split, zeta, 48, &mut stats)
            };
            let u = near_eval_2d(
                &panels,
                &densities,
                &split,
                zeta,
                cfg.scheme,
                &qcfg,
                None,
            );
            let dist = curve_distance(&curve, zeta);
            match (u, uref) {
                (Ok(u), Ok(ur)) => (u.re, ur.re, dist),
                _ => (f64::NAN, f64::NAN, dist),
            }
        })
        .collect();

    let umax = rows
        .iter()
        .map(|r| r.1.abs())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let mut points = Vec::with_capacity(rows.len());
    let mut dist = Vec::with_capacity(rows.len());
    for (c, (u, ur, d)) in coords.iter().zip(&rows) {
        let e = (u - ur).abs() / umax;
        points.push(GridPoint {
            x: c.re,
            y: c.im,
            z: None,
            e_rel: e,
        });
        dist.push(*d);
    }
    Ok(ParabolaResult {
        grid: ErrorGrid {
            scheme: scheme_name(cfg.scheme).into(),
            n: cfg.n,
            mode: mode_name(cfg.mode).into(),
            rho_eps: qcfg.rho_eps,
            curve: format!("parabola k={}", cfg.k),
            points,
        },
        dist,
    })
}

/// Distance from a point to the panel by dense parameter sampling.
fn curve_distance(curve: &dyn Curve2, zeta: C64) -> f64 {
    let (a, b) = curve.domain();
    let m = 8000;
    let mut dmin = f64::INFINITY;
    for i in 0..=m {
        let t = a + (b - a) * i as f64 / m as f64;
        dmin = dmin.min((curve.eval(t) - zeta).norm());
    }
    dmin
}
