//! Per-target adaptive-refinement reference quadrature.
//!
//! Panels too close to the target (minimum node distance below the panel
//! arc length) are bisected; child panels inherit their data by barycentric
//! Lagrange interpolation from the parent, never from the original curve.
//! Once every panel passes the distance criterion the field is evaluated
//! with the plain product rule. This is the accuracy oracle and the
//! efficiency baseline the special quadratures are measured against.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::error::{PanelError, Result};
use crate::geometry::vec3::{self, V3};
use crate::geometry::{gauss_legendre, Panel2, Panel3};
use crate::kernels::{KernelSplit2D, NodeCtx, Sing2D, SlenderBodySplit};

type C64 = Complex64;

/// Work counters for adaptive evaluation.
#[derive(Debug, Default, Clone)]
pub struct AdaptiveStats {
    /// Kernel evaluations on panels that required subdivision.
    pub n_eval: u64,
    /// Kernel evaluations on panels that passed the criterion untouched.
    pub n_eval_far: u64,
    /// Barycentric interpolation applications (one component vector each).
    pub n_interp: u64,
    /// Deepest subdivision level reached.
    pub max_depth: u32,
    /// Time spent evaluating kernels on subdivided panels.
    pub t_eval: Duration,
    /// Time spent interpolating to child panels.
    pub t_interp: Duration,
}

impl AdaptiveStats {
    pub fn merge(&mut self, other: &AdaptiveStats) {
        self.n_eval += other.n_eval;
        self.n_eval_far += other.n_eval_far;
        self.n_interp += other.n_interp;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.t_eval += other.t_eval;
        self.t_interp += other.t_interp;
    }
}

/// Weights `w_i = 1 / prod_{k != i} (t_i - t_k)` of the second barycentric
/// form.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for i in 0..n {
        for k in 0..n {
            if k != i {
                w[i] /= nodes[i] - nodes[k];
            }
        }
    }
    w
}

fn bary_eval<T>(nodes: &[f64], w: &[f64], samples: &[T], x: f64) -> T
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let mut num = T::default();
    let mut den = 0.0;
    for i in 0..nodes.len() {
        let d = x - nodes[i];
        if d == 0.0 {
            return samples[i];
        }
        let c = w[i] / d;
        num = num + samples[i] * c;
        den += c;
    }
    num * (1.0 / den)
}

/// Second-form barycentric Lagrange interpolation of complex samples from
/// `parent_nodes` to `child_nodes`. Exact for polynomials of degree below
/// the parent node count.
pub fn barycentric_interp(
    parent_nodes: &[f64],
    samples: &[C64],
    child_nodes: &[f64],
) -> Vec<C64> {
    assert_eq!(parent_nodes.len(), samples.len());
    let w = barycentric_weights(parent_nodes);
    child_nodes
        .iter()
        .map(|&x| bary_eval(parent_nodes, &w, samples, x))
        .collect()
}

/// Real-sample variant of [`barycentric_interp`].
pub fn barycentric_interp_real(
    parent_nodes: &[f64],
    samples: &[f64],
    child_nodes: &[f64],
) -> Vec<f64> {
    assert_eq!(parent_nodes.len(), samples.len());
    let w = barycentric_weights(parent_nodes);
    child_nodes
        .iter()
        .map(|&x| bary_eval(parent_nodes, &w, samples, x))
        .collect()
}

/// Interpolation matrices from an n-node parent to its two half-interval
/// children (child nodes expressed in parent coordinates).
struct SplitMat {
    n: usize,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl SplitMat {
    fn apply<T>(mat: &[f64], n: usize, samples: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        (0..n)
            .map(|j| {
                let row = &mat[j * n..(j + 1) * n];
                let mut acc = T::default();
                for (i, &m) in row.iter().enumerate() {
                    acc = acc + samples[i] * m;
                }
                acc
            })
            .collect()
    }
}

fn split_matrices(n: usize) -> Arc<SplitMat> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SplitMat>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| {
            let rule = gauss_legendre(n).expect("order checked by caller");
            let w = barycentric_weights(&rule.nodes);
            let mut left = vec![0.0; n * n];
            let mut right = vec![0.0; n * n];
            for j in 0..n {
                let xl = -0.5 + 0.5 * rule.nodes[j];
                let xr = 0.5 + 0.5 * rule.nodes[j];
                for i in 0..n {
                    // cardinal function values l_i(x)
                    let ei: Vec<f64> = (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
                    left[j * n + i] = bary_eval(&rule.nodes, &w, &ei, xl);
                    right[j * n + i] = bary_eval(&rule.nodes, &w, &ei, xr);
                }
            }
            Arc::new(SplitMat { n, left, right })
        })
        .clone()
}

// ---------------------------------------------------------------- 3D case

struct Chunk3 {
    y: Vec<V3>,
    speed: Vec<f64>,
    f: Vec<V3>,
    h: f64,
    depth: u32,
}

fn chunk3_from_panel(panel: &Panel3, f: &[V3]) -> Chunk3 {
    Chunk3 {
        y: panel.y.clone(),
        speed: panel.speed.clone(),
        f: f.to_vec(),
        h: panel.h,
        depth: 0,
    }
}

fn min_dist3(y: &[V3], x: V3) -> f64 {
    y.iter()
        .map(|&p| vec3::norm(vec3::sub(p, x)))
        .fold(f64::INFINITY, f64::min)
}

fn split_chunk3(
    chunk: &Chunk3,
    mats: &SplitMat,
    weights: &[f64],
    stats: &mut AdaptiveStats,
) -> (Chunk3, Chunk3) {
    let t0 = Instant::now();
    let n = mats.n;
    let make = |mat: &[f64], stats: &mut AdaptiveStats| -> Chunk3 {
        let mut y = vec![[0.0; 3]; n];
        let mut f = vec![[0.0; 3]; n];
        for c in 0..3 {
            let yc: Vec<f64> = chunk.y.iter().map(|p| p[c]).collect();
            let fc: Vec<f64> = chunk.f.iter().map(|p| p[c]).collect();
            let yi = SplitMat::apply(mat, n, &yc);
            let fi = SplitMat::apply(mat, n, &fc);
            for j in 0..n {
                y[j][c] = yi[j];
                f[j][c] = fi[j];
            }
            stats.n_interp += 2;
        }
        // speed per child standard parameter: halve the parent-scale value
        let sp = SplitMat::apply(mat, n, &chunk.speed);
        stats.n_interp += 1;
        let speed: Vec<f64> = sp.iter().map(|&s| 0.5 * s).collect();
        let h = weights.iter().zip(&speed).map(|(&w, &s)| w * s).sum();
        Chunk3 {
            y,
            speed,
            f,
            h,
            depth: chunk.depth + 1,
        }
    };
    let l = make(&mats.left, stats);
    let r = make(&mats.right, stats);
    stats.t_interp += t0.elapsed();
    (l, r)
}

fn eval_chunk3(
    chunk: &Chunk3,
    weights: &[f64],
    split: &SlenderBodySplit,
    x: V3,
) -> V3 {
    let mut u = [0.0; 3];
    for j in 0..chunk.y.len() {
        let r = vec3::sub(x, chunk.y[j]);
        let k = split.direct_kernel(r, chunk.f[j]);
        let wj = weights[j] * chunk.speed[j];
        for c in 0..3 {
            u[c] += wj * k[c];
        }
    }
    u
}

/// Slender-body field at `x` by per-target adaptive refinement.
///
/// `force` holds the density samples at each panel's nodes. The criterion
/// uses the minimum distance over a child panel's own nodes.
pub fn adaptive_eval_3d(
    panels: &[Panel3],
    force: &[Vec<V3>],
    split: &SlenderBodySplit,
    x: V3,
    depth_cap: u32,
    stats: &mut AdaptiveStats,
) -> Result<V3> {
    adaptive_eval_3d_impl(panels, force, split, x, depth_cap, stats, false)
}

fn adaptive_eval_3d_impl(
    panels: &[Panel3],
    force: &[Vec<V3>],
    split: &SlenderBodySplit,
    x: V3,
    depth_cap: u32,
    stats: &mut AdaptiveStats,
    refined_criterion: bool,
) -> Result<V3> {
    let mut u = [0.0; 3];
    for (panel, f) in panels.iter().zip(force) {
        let n = panel.n();
        let mats = split_matrices(n);
        let weights = &panel.rule.weights;
        let refine_nodes: Vec<f64> = if refined_criterion {
            (0..4 * n)
                .map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / (4 * n) as f64)
                .collect()
        } else {
            vec![]
        };
        let crit_dist = |c: &Chunk3| -> f64 {
            if refined_criterion {
                let w = barycentric_weights(&panel.rule.nodes);
                let mut dmin = f64::INFINITY;
                for &t in &refine_nodes {
                    let mut p = [0.0; 3];
                    for cc in 0..3 {
                        let yc: Vec<f64> = c.y.iter().map(|q| q[cc]).collect();
                        p[cc] = bary_eval(&panel.rule.nodes, &w, &yc, t);
                    }
                    dmin = dmin.min(vec3::norm(vec3::sub(p, x)));
                }
                dmin
            } else {
                min_dist3(&c.y, x)
            }
        };

        let root = chunk3_from_panel(panel, f);
        let root_far = crit_dist(&root) >= root.h;
        let mut stack = vec![root];
        while let Some(chunk) = stack.pop() {
            if crit_dist(&chunk) >= chunk.h {
                let t0 = Instant::now();
                let v = eval_chunk3(&chunk, weights, split, x);
                for c in 0..3 {
                    u[c] += v[c];
                }
                if root_far {
                    stats.n_eval_far += n as u64;
                } else {
                    stats.n_eval += n as u64;
                    stats.t_eval += t0.elapsed();
                }
                continue;
            }
            if chunk.depth >= depth_cap {
                return Err(PanelError::DepthExceeded(depth_cap));
            }
            stats.max_depth = stats.max_depth.max(chunk.depth + 1);
            let (l, r) = split_chunk3(&chunk, &mats, weights, stats);
            stack.push(l);
            stack.push(r);
        }
    }
    Ok(u)
}

// ---------------------------------------------------------------- 2D case

struct Chunk2 {
    tau: Vec<C64>,
    dtau: Vec<C64>,
    f: Vec<C64>,
    h: f64,
    depth: u32,
}

/// 2D layer potential at `zeta` by per-target adaptive refinement of the
/// given kernel split; used as the reference oracle for the 2D error grids.
pub fn adaptive_eval_2d(
    panels: &[Panel2],
    density: &[Vec<C64>],
    split: &KernelSplit2D,
    zeta: C64,
    depth_cap: u32,
    stats: &mut AdaptiveStats,
) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for (panel, f) in panels.iter().zip(density) {
        let n = panel.n();
        let mats = split_matrices(n);
        let weights = &panel.rule.weights;
        let mut stack = vec![Chunk2 {
            tau: panel.tau.clone(),
            dtau: panel.dtau.clone(),
            f: f.clone(),
            h: panel.h,
            depth: 0,
        }];
        while let Some(chunk) = stack.pop() {
            let dmin = chunk
                .tau
                .iter()
                .map(|&t| (t - zeta).norm())
                .fold(f64::INFINITY, f64::min);
            if dmin >= chunk.h {
                stats.n_eval += n as u64;
                for term in &split.terms {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..n {
                        let speed = chunk.dtau[j].norm();
                        let ctx = NodeCtx {
                            tau: chunk.tau[j],
                            dtau: chunk.dtau[j],
                            speed,
                            zeta,
                            density: chunk.f[j],
                        };
                        let fj = (term.sample)(&ctx);
                        let d = chunk.tau[j] - zeta;
                        let kern = match term.sing {
                            Sing2D::Log => d.ln(),
                            Sing2D::Pow(m) => d.powi(-(m as i32)),
                        };
                        acc += chunk.dtau[j] * fj * kern * weights[j];
                    }
                    total += term.finish(acc);
                }
                continue;
            }
            if chunk.depth >= depth_cap {
                return Err(PanelError::DepthExceeded(depth_cap));
            }
            stats.max_depth = stats.max_depth.max(chunk.depth + 1);
            for mat in [&mats.left, &mats.right] {
                let tau = SplitMat::apply(mat, n, &chunk.tau);
                let dtau: Vec<C64> = SplitMat::apply(mat, n, &chunk.dtau)
                    .into_iter()
                    .map(|d| d * 0.5)
                    .collect();
                let f = SplitMat::apply(mat, n, &chunk.f);
                stats.n_interp += 3;
                let h = weights
                    .iter()
                    .zip(&dtau)
                    .map(|(&w, d)| w * d.norm())
                    .sum();
                stack.push(Chunk2 {
                    tau,
                    dtau,
                    f,
                    h,
                    depth: chunk.depth + 1,
                });
            }
        }
    }
    Ok(split.reduce(total))
}
