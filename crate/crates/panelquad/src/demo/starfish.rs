//! Interior Laplace Dirichlet problem on a starfish domain: Nystrom solve
//! of the second-kind double-layer equation, then evaluation of the
//! potential on interior grids against the known exact solution.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{QuadConfig, Scheme, UpsampleMode};
use crate::demo::output::{ErrorGrid, GridPoint};
use crate::error::{PanelError, Result};
use crate::geometry::legendre::deriv_coeffs;
use crate::geometry::{adaptive_panelize_2d, eval_poly_complex, Panel2, Starfish};
use crate::kernels::laplace_dlp_2d;
use crate::linalg::lu_solve;
use crate::specialquad::near_eval_2d;

type C64 = Complex64;

const TWO_PI: f64 = std::f64::consts::TAU;

/// Which evaluation grid to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// Uniform grid over the interior of the domain.
    Global,
    /// Parameter-space rectangle hugging the boundary; points are images
    /// of `a + i b` under the analytically continued map. `log_grade`
    /// spaces the b values geometrically down to `bmin`.
    Near { bmin: f64, log_grade: bool },
}

#[derive(Debug, Clone)]
pub struct StarfishConfig {
    pub eps_panel: f64,
    pub scheme: Scheme,
    pub mode: UpsampleMode,
    pub rho_eps: f64,
    pub tol: f64,
    pub grid_w: usize,
    pub grid_h: usize,
    pub grid: GridKind,
}

impl Default for StarfishConfig {
    fn default() -> Self {
        StarfishConfig {
            eps_panel: 1e-6,
            scheme: Scheme::SingularitySwap,
            mode: UpsampleMode::Upsample,
            rho_eps: 1.8,
            tol: 1e-8,
            grid_w: 100,
            grid_h: 100,
            grid: GridKind::Global,
        }
    }
}

/// Exact solution: a point-source potential with singularity outside.
pub fn u_exact(zeta: C64) -> f64 {
    (C64::new(3.0, 3.0) - zeta).norm().ln()
}

/// Smooth on-curve limit of the double-layer kernel times the speed, from
/// the panel's derivative expansions.
fn diagonal_limits(panel: &Panel2) -> Vec<f64> {
    let dd = deriv_coeffs(&panel.coef_dtau);
    panel
        .rule
        .nodes
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let d2 = eval_poly_complex(&dd, C64::new(t, 0.0));
            let d1 = panel.dtau[j];
            -(d2 * d1.conj()).im / (2.0 * d1.norm_sqr())
        })
        .collect()
}

/// Solve the Nystrom system `(-1/2) rho + D rho = u_e` for the density at
/// all panel nodes. The operator is the 1/(2 pi)-normalized double layer
/// with inward normal (the Appendix identities produce that orientation
/// for a counterclockwise curve).
pub fn solve_density(panels: &[Panel2]) -> Result<Vec<Vec<f64>>> {
    let n = panels.iter().map(|p| p.n()).sum::<usize>();
    let mut a = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    let taus: Vec<C64> = panels.iter().flat_map(|p| p.tau.iter().cloned()).collect();
    let mut col = 0;
    for panel in panels {
        let diag = diagonal_limits(panel);
        for j in 0..panel.n() {
            let w = panel.rule.weights[j] / TWO_PI;
            for (i, &ti) in taus.iter().enumerate() {
                let gj = col + j;
                let kij = if i == gj {
                    diag[j]
                } else {
                    -(panel.dtau[j] / (panel.tau[j] - ti)).im
                };
                a[i * n + gj] = w * kij;
            }
            a[(col + j) * n + col + j] += -0.5;
        }
        col += panel.n();
    }
    for (i, &ti) in taus.iter().enumerate() {
        rhs[i] = u_exact(ti);
    }
    lu_solve(&mut a, n, &mut rhs).map_err(|_| PanelError::SingularSystem)?;
    let mut out = Vec::with_capacity(panels.len());
    let mut off = 0;
    for p in panels {
        out.push(rhs[off..off + p.n()].to_vec());
        off += p.n();
    }
    Ok(out)
}

pub struct StarfishResult {
    pub grid: ErrorGrid,
    pub panels: usize,
    pub max_err: f64,
}

pub fn run(cfg: &StarfishConfig) -> Result<StarfishResult> {
    let curve = Starfish;
    let panels = adaptive_panelize_2d(&curve, cfg.eps_panel, 16)?;
    let density = solve_density(&panels)?;
    let dens_cpx: Vec<Vec<C64>> = density
        .iter()
        .map(|d| d.iter().map(|&r| C64::new(r, 0.0)).collect())
        .collect();
    let split = laplace_dlp_2d();
    let qcfg = QuadConfig::new(16, cfg.tol, cfg.mode).with_rho_eps(cfg.rho_eps);

    let targets: Vec<C64> = match cfg.grid {
        GridKind::Global => {
            let mut pts = Vec::new();
            for jy in 0..cfg.grid_h {
                for jx in 0..cfg.grid_w {
                    let x = -1.4 + 2.8 * jx as f64 / (cfg.grid_w - 1) as f64;
                    let y = -1.4 + 2.8 * jy as f64 / (cfg.grid_h - 1) as f64;
                    let z = C64::new(x, y);
                    if curve.contains(z) {
                        pts.push(z);
                    }
                }
            }
            pts
        }
        GridKind::Near { bmin, log_grade } => {
            let (a0, a1) = (1.66 * std::f64::consts::PI, 1.76 * std::f64::consts::PI);
            let bmax = 0.15;
            let mut pts = Vec::new();
            for jy in 0..cfg.grid_h {
                let b = if log_grade {
                    bmin * (bmax / bmin).powf(jy as f64 / (cfg.grid_h - 1) as f64)
                } else {
                    bmin + (bmax - bmin) * jy as f64 / (cfg.grid_h - 1) as f64
                };
                for jx in 0..cfg.grid_w {
                    let av = a0 + (a1 - a0) * jx as f64 / (cfg.grid_w - 1) as f64;
                    pts.push(curve.eval_complex(C64::new(av, b)));
                }
            }
            pts
        }
    };

    let values: Vec<(f64, f64)> = targets
        .par_iter()
        .map(|&z| {
            let u = near_eval_2d(
                &panels, &dens_cpx, &split, z, cfg.scheme, &qcfg, None,
            )
            .map(|v| v.re / TWO_PI)
            .unwrap_or(f64::NAN);
            (u, u_exact(z))
        })
        .collect();
    let umax = values.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let points: Vec<GridPoint> = targets
        .iter()
        .zip(&values)
        .map(|(z, &(u, ue))| GridPoint {
            x: z.re,
            y: z.im,
            z: None,
            e_rel: (u - ue).abs() / umax,
        })
        .collect();
    let grid = ErrorGrid {
        scheme: match cfg.scheme {
            Scheme::Direct => "direct",
            Scheme::HelsingOjala => "ho",
            Scheme::SingularitySwap => "ssq",
        }
        .into(),
        n: 16,
        mode: match cfg.mode {
            UpsampleMode::None => "none",
            UpsampleMode::Upsample => "upsample",
            UpsampleMode::UpsampleWithUpsampledDirect => "upsample-direct",
        }
        .into(),
        rho_eps: cfg.rho_eps,
        curve: "starfish".into(),
        points,
    };
    let max_err = grid.max_err();
    Ok(StarfishResult {
        grid,
        panels: panels.len(),
        max_err,
    })
}
