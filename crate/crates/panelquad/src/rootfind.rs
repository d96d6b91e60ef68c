//! Locating the complex parameter preimage of a target point: the nearest
//! root of the displacement polynomial (2D) or of the squared-distance
//! polynomial (3D), plus the distance/radius classification that decides
//! which quadrature a target needs.

use num_complex::Complex64;

use crate::config::{QuadConfig, UpsampleMode};
use crate::error::Result;
use crate::geometry::vec3::V3;
use crate::geometry::{
    bernstein_radius, endpoint_frame, eval_poly_complex_deriv, Panel2, Panel3,
};
use crate::geometry::legendre::eval_poly_complex;
use crate::specialquad::solve_interp;

type C64 = Complex64;

/// How a preimage was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Newton,
    Muller,
    Companion,
    None,
}

/// A complex preimage root with convergence diagnostics. In 3D the root is
/// normalized to the upper half plane and stands for the conjugate pair.
#[derive(Debug, Clone, Copy)]
pub struct Preimage {
    pub t0: C64,
    pub converged: bool,
    pub iterations: u32,
    pub method: RootMethod,
    /// Bernstein radius of the root.
    pub rho: f64,
}

impl Preimage {
    fn failed(t: C64, iterations: u32) -> Self {
        Preimage {
            t0: t,
            converged: false,
            iterations,
            method: RootMethod::None,
            rho: bernstein_radius(t),
        }
    }
}

/// Newton iteration on the displacement polynomial
/// `Q(t) = P[gamma](t) - zeta`, started from the affine image of the
/// target under the endpoint frame.
pub fn newton_preimage_2d(panel: &Panel2, zeta: C64, cfg: &QuadConfig) -> Preimage {
    let frame = match endpoint_frame(panel) {
        Ok(f) => f,
        Err(_) => return Preimage::failed(C64::new(0.0, 0.0), 0),
    };
    let scale = frame.s0.norm();
    let mut t = frame.map(zeta);
    let coef = &panel.coef_tau;
    let mut it = 0;
    while it < cfg.newton_cap as u32 {
        it += 1;
        let (v, d) = eval_poly_complex_deriv(coef, t);
        let q = v - zeta;
        if d.norm() < 1e-300 {
            t += C64::new(1e-8, 1e-8);
            continue;
        }
        let dt = q / d;
        t -= dt;
        if dt.norm() < 1e-13 * (1.0 + t.norm()) || q.norm() < 1e-14 * scale {
            let resid = (eval_poly_complex(coef, t) - zeta).norm();
            return Preimage {
                t0: t,
                converged: resid <= 1e-12 * scale.max(1e-300),
                iterations: it,
                method: RootMethod::Newton,
                rho: bernstein_radius(t),
            };
        }
    }
    Preimage::failed(t, it)
}

/// All roots of a polynomial in monomial form (constant coefficient first)
/// via the companion-matrix eigenvalues. Coefficients negligible relative
/// to the largest are trimmed from the leading end.
pub fn all_roots_companion(coeffs: &[C64]) -> Result<Vec<C64>> {
    let maxn = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut c: Vec<C64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() <= 1e-14 * maxn {
        c.pop();
    }
    crate::linalg::companion_roots(&c)
}

/// Monomial coefficients of a Legendre expansion, obtained by sampling at
/// Chebyshev points and refitting through the Vandermonde solve.
pub fn legendre_to_monomial(coef: &[C64]) -> Vec<C64> {
    let n = coef.len();
    if n == 0 {
        return vec![];
    }
    let nodes: Vec<f64> = (0..n)
        .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())
        .collect();
    let samples: Vec<C64> = nodes
        .iter()
        .map(|&x| eval_poly_complex(coef, C64::new(x, 0.0)))
        .collect();
    let cnodes: Vec<C64> = nodes.iter().map(|&x| C64::new(x, 0.0)).collect();
    solve_interp(&cnodes, &samples)
}

/// All roots of a Legendre-form polynomial: companion eigenvalues of the
/// monomial conversion, each polished by a couple of Newton steps on the
/// original expansion to recover the digits lost in conversion.
pub fn all_roots_legendre(coef: &[C64]) -> Result<Vec<C64>> {
    let mono = legendre_to_monomial(coef);
    let mut roots = all_roots_companion(&mono)?;
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let (v, d) = eval_poly_complex_deriv(coef, *r);
            if d.norm() > 1e-300 {
                *r -= v / d;
            }
        }
    }
    Ok(roots)
}

/// Companion-based 2D preimage: all roots of the displacement polynomial,
/// keeping the one nearest to `[-1,1]` in the Bernstein metric.
pub fn companion_preimage_2d(panel: &Panel2, zeta: C64) -> Preimage {
    let mut coef = panel.coef_tau.clone();
    coef[0] -= zeta;
    let scale = endpoint_frame(panel).map(|f| f.s0.norm()).unwrap_or(1.0);
    match all_roots_legendre(&coef) {
        Ok(roots) if !roots.is_empty() => {
            let t0 = roots
                .into_iter()
                .min_by(|a, b| {
                    bernstein_radius(*a)
                        .partial_cmp(&bernstein_radius(*b))
                        .unwrap()
                })
                .unwrap();
            let resid = (eval_poly_complex(&panel.coef_tau, t0) - zeta).norm();
            Preimage {
                t0,
                converged: resid <= 1e-12 * scale.max(1e-300),
                iterations: 0,
                method: RootMethod::Companion,
                rho: bernstein_radius(t0),
            }
        }
        _ => Preimage::failed(C64::new(0.0, 0.0), 0),
    }
}

/// The squared-distance polynomial and its derivative at a complex
/// parameter, from the panel's per-coordinate expansions. The three
/// Legendre evaluations share one recurrence sweep.
fn r2_eval(panel: &Panel3, x: V3, t: C64) -> (C64, C64) {
    let n = panel.coef.iter().map(|c| c.len()).max().unwrap_or(0);
    let zero = C64::new(0.0, 0.0);
    let mut val = [zero; 3];
    let mut der = [zero; 3];
    let mut pkm1 = C64::new(1.0, 0.0);
    let mut pk = t;
    let mut dkm1 = zero;
    let mut dk = C64::new(1.0, 0.0);
    for c in 0..3 {
        if let Some(&c0) = panel.coef[c].first() {
            val[c] += c0;
        }
        if let Some(&c1) = panel.coef[c].get(1) {
            val[c] += c1 * t;
            der[c] += C64::new(c1, 0.0);
        }
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let pk1 = ((2.0 * kf + 1.0) * t * pk - kf * pkm1) / (kf + 1.0);
        let dk1 = dkm1 + (2.0 * kf + 1.0) * pk;
        pkm1 = pk;
        pk = pk1;
        dkm1 = dk;
        dk = dk1;
        for c in 0..3 {
            if let Some(&ck) = panel.coef[c].get(k + 1) {
                val[c] += pk * ck;
                der[c] += dk * ck;
            }
        }
    }
    let mut v = zero;
    let mut d = zero;
    for c in 0..3 {
        let diff = val[c] - x[c];
        v += diff * diff;
        d += 2.0 * der[c] * diff;
    }
    (v, d)
}

/// Value of the squared-distance polynomial at a complex parameter; the
/// residual `|R~(t0)^2|` of a converged root is bounded by
/// `1e-12 h^2`.
pub fn r2_polynomial(panel: &Panel3, x: V3, t: C64) -> C64 {
    r2_eval(panel, x, t).0
}

/// Full-degree Legendre coefficients of the squared-distance polynomial,
/// used to cross-check the iterative root finder against companion roots.
pub fn r2_legendre_coeffs(panel: &Panel3, x: V3) -> Vec<C64> {
    let n = 2 * panel.coef[0].len().max(panel.n().min(16));
    let rule = crate::geometry::gauss_legendre(n.clamp(8, 64)).unwrap();
    let samples: Vec<C64> = rule
        .nodes
        .iter()
        .map(|&t| r2_eval(panel, x, C64::new(t, 0.0)).0)
        .collect();
    crate::geometry::legendre::fit_full(&rule, &samples)
}

/// Initial guess for the 3D root: a linear map in the plane through the
/// target and the two nearest nodes; exact when the panel is a straight
/// line. The upper-half-plane point of the two candidates is taken.
fn initial_guess_3d(panel: &Panel3, x: V3) -> C64 {
    use crate::geometry::vec3::{dot, norm, sub};
    let n = panel.n();
    let mut jmin = 0;
    let mut best = f64::INFINITY;
    for (j, &yj) in panel.y.iter().enumerate() {
        let d = norm(sub(x, yj));
        if d < best {
            best = d;
            jmin = j;
        }
    }
    let k = if jmin == 0 {
        1
    } else if jmin == n - 1 {
        n - 2
    } else if norm(sub(x, panel.y[jmin - 1])) < norm(sub(x, panel.y[jmin + 1])) {
        jmin - 1
    } else {
        jmin + 1
    };
    let tj = panel.rule.nodes[jmin];
    let tk = panel.rule.nodes[k];
    let gj = panel.y[jmin];
    let gk = panel.y[k];
    let chord = sub(gk, gj);
    let c2 = dot(chord, chord);
    let alpha = dot(sub(x, gj), chord) / c2;
    let re = tj + alpha * (tk - tj);
    let rad = norm(sub(x, gj)) / c2.sqrt() * (tk - tj).abs();
    let im2 = rad * rad - (re - tj) * (re - tj);
    C64::new(re, im2.max(0.0).sqrt())
}

/// Nearest root pair of the squared-distance polynomial: Newton first,
/// Muller's method if Newton stalls (the pair merges into a double root on
/// the real axis, which degrades Newton to linear convergence nearby).
pub fn root_3d(panel: &Panel3, x: V3, cfg: &QuadConfig) -> Preimage {
    let resid_tol = 1e-14 * panel.h * panel.h;
    let accept_tol = 1e-12 * panel.h * panel.h;
    let t_init = initial_guess_3d(panel, x);
    let mut t = t_init;
    let mut it = 0;
    while it < cfg.newton_cap as u32 {
        it += 1;
        let (v, d) = r2_eval(panel, x, t);
        if d.norm() < 1e-300 {
            t += C64::new(1e-8, 1e-8);
            continue;
        }
        let dt = v / d;
        t -= dt;
        if dt.norm() < 1e-13 * (1.0 + t.norm()) || v.norm() < resid_tol {
            let t0 = normalize_upper(t);
            let resid = r2_eval(panel, x, t0).0.norm();
            if resid <= accept_tol {
                return Preimage {
                    t0,
                    converged: true,
                    iterations: it,
                    method: RootMethod::Newton,
                    rho: bernstein_radius(t0),
                };
            }
            break;
        }
    }
    // Muller from three seeds bracketing the near-axis double-root geometry
    let seeds = [
        t_init,
        t_init + C64::new(0.0, 0.05),
        t_init - C64::new(0.0, 0.05),
    ];
    if let Some((t0, mit)) = muller(|t| r2_eval(panel, x, t).0, seeds, 20, resid_tol) {
        let t0 = normalize_upper(t0);
        let resid = r2_eval(panel, x, t0).0.norm();
        if resid <= accept_tol {
            return Preimage {
                t0,
                converged: true,
                iterations: it + mit,
                method: RootMethod::Muller,
                rho: bernstein_radius(t0),
            };
        }
    }
    Preimage::failed(normalize_upper(t), it)
}

fn normalize_upper(t: C64) -> C64 {
    if t.im < 0.0 {
        t.conj()
    } else {
        t
    }
}

/// Muller's method for an analytic scalar function.
fn muller<F: Fn(C64) -> C64>(
    f: F,
    seeds: [C64; 3],
    cap: u32,
    resid_tol: f64,
) -> Option<(C64, u32)> {
    let mut x0 = seeds[1];
    let mut x1 = seeds[2];
    let mut x2 = seeds[0];
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for it in 1..=cap {
        let q_den = x1 - x0;
        if q_den.norm() == 0.0 {
            return None;
        }
        let q = (x2 - x1) / q_den;
        let a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
        let b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
        let c = (1.0 + q) * f2;
        let disc = (b * b - 4.0 * a * c).sqrt();
        let den1 = b + disc;
        let den2 = b - disc;
        let den = if den1.norm() >= den2.norm() { den1 } else { den2 };
        if den.norm() == 0.0 {
            return None;
        }
        let x3 = x2 - (x2 - x1) * 2.0 * c / den;
        let f3 = f(x3);
        if (x3 - x2).norm() < 1e-13 * (1.0 + x3.norm()) || f3.norm() < resid_tol {
            return Some((x3, it));
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
    }
    None
}

/// Target classification with respect to one panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetClassKind {
    /// Far enough for the plain rule on the existing nodes.
    Far,
    /// Intermediate band handled by an upsampled direct rule.
    NearDirectUpsampled,
    /// Needs special (HO or SSQ) weights.
    Special,
}

#[derive(Debug, Clone, Copy)]
pub struct TargetClass {
    pub kind: TargetClassKind,
    pub preimage: Option<Preimage>,
    /// True when the companion fallback criterion
    /// `rho(t_schwarz) <= 1.1 rho_eps` fired.
    pub companion_trigger: bool,
}

fn classify_from_preimage(p: Preimage, cfg: &QuadConfig, trigger: bool) -> TargetClass {
    if !p.converged {
        return TargetClass {
            kind: TargetClassKind::Far,
            preimage: Some(p),
            companion_trigger: trigger,
        };
    }
    let kind = if p.rho >= cfg.rho_eps {
        TargetClassKind::Far
    } else if cfg.mode == UpsampleMode::UpsampleWithUpsampledDirect
        && p.rho >= cfg.rho_eps.sqrt()
    {
        TargetClassKind::NearDirectUpsampled
    } else {
        TargetClassKind::Special
    };
    TargetClass {
        kind,
        preimage: Some(p),
        companion_trigger: trigger,
    }
}

/// Classify a 2D target: cheap node-distance cutoff, then the Bernstein
/// radius of the preimage against the critical radius.
pub fn classify_target_2d(panel: &Panel2, zeta: C64, cfg: &QuadConfig) -> TargetClass {
    if panel.min_node_dist(zeta) >= cfg.distance_multiplier * panel.h {
        return TargetClass {
            kind: TargetClassKind::Far,
            preimage: None,
            companion_trigger: false,
        };
    }
    let mut trigger = false;
    let p = if cfg.companion_fallback {
        if let Some(ts) = panel.schwarz {
            if bernstein_radius(ts) <= 1.1 * cfg.rho_eps {
                trigger = true;
            }
        }
        if trigger {
            companion_preimage_2d(panel, zeta)
        } else {
            newton_preimage_2d(panel, zeta, cfg)
        }
    } else {
        newton_preimage_2d(panel, zeta, cfg)
    };
    classify_from_preimage(p, cfg, trigger)
}

/// Classify a 3D target.
pub fn classify_target_3d(panel: &Panel3, x: V3, cfg: &QuadConfig) -> TargetClass {
    if panel.min_node_dist(x) >= cfg.distance_multiplier * panel.h {
        return TargetClass {
            kind: TargetClassKind::Far,
            preimage: None,
            companion_trigger: false,
        };
    }
    let p = root_3d(panel, x, cfg);
    classify_from_preimage(p, cfg, false)
}
