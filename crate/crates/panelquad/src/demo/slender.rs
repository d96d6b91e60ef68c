//! Slender-body Stokes field around a closed random-Fourier filament:
//! accuracy against an independent reference discretization, plus the
//! kernel-evaluation/time comparison between per-target adaptive
//! refinement and singularity-swap weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{QuadConfig, Scheme, UpsampleMode};
use crate::demo::output::{BenchRecord, ErrorGrid, GridPoint};
use crate::error::Result;
use crate::geometry::vec3::{self, V3};
use crate::geometry::{adaptive_panelize_3d, Curve3, Panel3, Squiggle3};
use crate::kernels::SlenderBodySplit;
use crate::refquad::{adaptive_eval_3d, AdaptiveStats};
use crate::specialquad::{near_eval_3d, EvalCounters};

#[derive(Debug, Clone)]
pub struct SlenderConfig {
    pub eps_panel: f64,
    pub eps_fiber: f64,
    pub d_list: Vec<f64>,
    pub targets: usize,
    pub seed: u64,
    pub rho_eps: f64,
    /// Also evaluate the field on a planar slice grid.
    pub slice: bool,
    pub grid_w: usize,
    pub grid_h: usize,
}

impl Default for SlenderConfig {
    fn default() -> Self {
        SlenderConfig {
            eps_panel: 1e-10,
            eps_fiber: 1e-3,
            d_list: vec![1e-2, 1e-4],
            targets: 1000,
            seed: 0,
            rho_eps: 3.0,
            slice: false,
            grid_w: 100,
            grid_h: 100,
        }
    }
}

pub struct SlenderResult {
    pub bench: Vec<BenchRecord>,
    /// `(d, N_eval ratio adaptive/SSQ)` per distance.
    pub ratios: Vec<(f64, f64)>,
    pub slice: Option<ErrorGrid>,
    pub panels: usize,
    pub ref_panels: usize,
}

/// Random points at exact distance `d` from the curve: a random curve
/// point plus a random direction in its normal plane.
pub fn targets_at_distance(curve: &Squiggle3, d: f64, count: usize, seed: u64) -> Vec<V3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let t: f64 = rng.gen();
        let y = curve.eval(t);
        let tan = curve.deriv(t);
        let that = vec3::scale(tan, 1.0 / vec3::norm(tan));
        // helper axis least aligned with the tangent
        let mut e = [0.0; 3];
        let amin = (0..3)
            .min_by(|&a, &b| that[a].abs().partial_cmp(&that[b].abs()).unwrap())
            .unwrap();
        e[amin] = 1.0;
        let mut n1 = vec3::sub(e, vec3::scale(that, vec3::dot(e, that)));
        n1 = vec3::scale(n1, 1.0 / vec3::norm(n1));
        let n2 = vec3::cross(that, n1);
        let phi: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        out.push(vec3::add(
            y,
            vec3::add(
                vec3::scale(n1, d * phi.cos()),
                vec3::scale(n2, d * phi.sin()),
            ),
        ));
    }
    out
}

fn force_samples(panels: &[Panel3]) -> Vec<Vec<V3>> {
    panels.iter().map(|p| p.y.clone()).collect()
}

pub fn run(cfg: &SlenderConfig) -> Result<SlenderResult> {
    let curve = Squiggle3;
    let panels = adaptive_panelize_3d(&curve, cfg.eps_panel, 16)?;
    let force = force_samples(&panels);
    // reference grid deliberately different: n = 18, tighter tolerance
    let ref_panels = adaptive_panelize_3d(&curve, 5e-14, 18)?;
    let ref_force = force_samples(&ref_panels);
    let split = SlenderBodySplit::new(cfg.eps_fiber);
    let qcfg = QuadConfig::new(16, 1e-14, UpsampleMode::Upsample).with_rho_eps(cfg.rho_eps);

    let mut bench = Vec::new();
    let mut ratios = Vec::new();
    for &d in &cfg.d_list {
        let targets = targets_at_distance(&curve, d, cfg.targets, cfg.seed);
        let reference: Vec<V3> = targets
            .par_iter()
            .map(|&x| {
                let mut st = AdaptiveStats::default();
                adaptive_eval_3d(&ref_panels, &ref_force, &split, x, 48, &mut st)
                    .expect("reference evaluation")
            })
            .collect();
        let unorm = reference
            .iter()
            .map(|u| vec3::norm(*u))
            .fold(0.0, f64::max);

        // SSQ sweep
        let (ssq_vals, ssq_counters): (Vec<V3>, EvalCounters) = {
            let results: Vec<(V3, EvalCounters)> = targets
                .par_iter()
                .map(|&x| {
                    let mut c = EvalCounters::default();
                    let u = near_eval_3d(
                        &panels,
                        &force,
                        &split,
                        x,
                        Scheme::SingularitySwap,
                        &qcfg,
                        Some(&mut c),
                    )
                    .expect("ssq evaluation");
                    (u, c)
                })
                .collect();
            let mut all = EvalCounters::default();
            let mut vals = Vec::with_capacity(results.len());
            for (u, c) in results {
                all.merge(&c);
                vals.push(u);
            }
            (vals, all)
        };
        let ssq_err = ssq_vals
            .iter()
            .zip(&reference)
            .map(|(a, b)| vec3::norm(vec3::sub(*a, *b)) / unorm)
            .fold(0.0, f64::max);

        // adaptive sweep on the same discretization
        let (ada_vals, ada_stats): (Vec<V3>, AdaptiveStats) = {
            let results: Vec<(V3, AdaptiveStats)> = targets
                .par_iter()
                .map(|&x| {
                    let mut st = AdaptiveStats::default();
                    let u = adaptive_eval_3d(&panels, &force, &split, x, 48, &mut st)
                        .expect("adaptive evaluation");
                    (u, st)
                })
                .collect();
            let mut all = AdaptiveStats::default();
            let mut vals = Vec::with_capacity(results.len());
            for (u, st) in results {
                all.merge(&st);
                vals.push(u);
            }
            (vals, all)
        };
        let ada_err = ada_vals
            .iter()
            .zip(&reference)
            .map(|(a, b)| vec3::norm(vec3::sub(*a, *b)) / unorm)
            .fold(0.0, f64::max);

        bench.push(BenchRecord {
            d,
            eps_panel: cfg.eps_panel,
            scheme: "ssq".into(),
            n_eval: ssq_counters.n_kernel_evals,
            t_eval_s: ssq_counters.t_eval.as_secs_f64(),
            t_weights_s: ssq_counters.t_weights.as_secs_f64(),
            max_rel_err: ssq_err,
            targets: cfg.targets,
            seed: cfg.seed,
        });
        bench.push(BenchRecord {
            d,
            eps_panel: cfg.eps_panel,
            scheme: "adaptive".into(),
            n_eval: ada_stats.n_eval,
            t_eval_s: ada_stats.t_eval.as_secs_f64(),
            t_weights_s: ada_stats.t_interp.as_secs_f64(),
            max_rel_err: ada_err,
            targets: cfg.targets,
            seed: cfg.seed,
        });
        ratios.push((
            d,
            ada_stats.n_eval as f64 / ssq_counters.n_kernel_evals.max(1) as f64,
        ));
    }

    let slice = if cfg.slice {
        Some(slice_grid(cfg, &panels, &force, &ref_panels, &ref_force, &split, &qcfg)?)
    } else {
        None
    };

    Ok(SlenderResult {
        bench,
        ratios,
        slice,
        panels: panels.len(),
        ref_panels: ref_panels.len(),
    })
}

fn slice_grid(
    cfg: &SlenderConfig,
    panels: &[Panel3],
    force: &[Vec<V3>],
    ref_panels: &[Panel3],
    ref_force: &[Vec<V3>],
    split: &SlenderBodySplit,
    qcfg: &QuadConfig,
) -> Result<ErrorGrid> {
    let y_plane = 0.25;
    let mut coords = Vec::new();
    for jz in 0..cfg.grid_h {
        for jx in 0..cfg.grid_w {
            let x = -1.4 + 2.8 * jx as f64 / (cfg.grid_w - 1) as f64;
            let z = -1.4 + 2.8 * jz as f64 / (cfg.grid_h - 1) as f64;
            coords.push([x, y_plane, z]);
        }
    }
    let vals: Vec<(V3, V3)> = coords
        .par_iter()
        .map(|&x| {
            let mut st = AdaptiveStats::default();
            let ur = adaptive_eval_3d(ref_panels, ref_force, split, x, 48, &mut st)
                .unwrap_or([f64::NAN; 3]);
            let u = near_eval_3d(
                panels,
                force,
                split,
                x,
                Scheme::SingularitySwap,
                qcfg,
                None,
            )
            .unwrap_or([f64::NAN; 3]);
            (u, ur)
        })
        .collect();
    let unorm = vals
        .iter()
        .map(|(_, ur)| vec3::norm(*ur))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let points = coords
        .iter()
        .zip(&vals)
        .map(|(c, (u, ur))| GridPoint {
            x: c[0],
            y: c[1],
            z: Some(c[2]),
            e_rel: vec3::norm(vec3::sub(*u, *ur)) / unorm,
        })
        .collect();
    Ok(ErrorGrid {
        scheme: "ssq".into(),
        n: 16,
        mode: "upsample".into(),
        rho_eps: qcfg.rho_eps,
        curve: "squiggle".into(),
        points,
    })
}

/// Serial weight-computation throughput (targets per second) at n = 16:
/// root search plus the three transposed Vandermonde solves per target.
pub fn weight_throughput(n_targets: usize) -> f64 {
    let curve = Squiggle3;
    let panels = adaptive_panelize_3d(&curve, 1e-10, 16).expect("panelize");
    let panel = &panels[panels.len() / 2];
    let tmid = 0.5 * (panel.a + panel.b);
    let cfg = QuadConfig::new(16, 1e-14, UpsampleMode::None).with_rho_eps(3.0);
    let targets = {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut v = Vec::with_capacity(n_targets);
        for _ in 0..n_targets {
            let y = curve.eval(tmid);
            let tan = curve.deriv(tmid);
            let that = vec3::scale(tan, 1.0 / vec3::norm(tan));
            let mut e = [1.0, 0.0, 0.0];
            e = vec3::sub(e, vec3::scale(that, vec3::dot(e, that)));
            e = vec3::scale(e, 1.0 / vec3::norm(e));
            let d: f64 = 10f64.powf(rng.gen_range(-6.0..-2.0));
            v.push(vec3::add(y, vec3::scale(e, d)));
        }
        v
    };
    let start = std::time::Instant::now();
    let mut sink = 0.0;
    for &x in &targets {
        let pre = crate::rootfind::root_3d(panel, x, &cfg);
        let w = crate::specialquad::ssq_weights_slender(panel, x, &pre).expect("weights");
        sink += w[0].values[0] + w[1].values[1] + w[2].values[2];
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(sink.is_finite());
    n_targets as f64 / dt
}
