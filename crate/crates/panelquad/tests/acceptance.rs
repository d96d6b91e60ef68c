//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).

mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use panelquad::config::{QuadConfig, Scheme, UpsampleMode};
use panelquad::demo::{parabola, slender, starfish};
use panelquad::geometry::vec3::{self, V3};
use panelquad::geometry::{
    adaptive_panelize_3d, bernstein_radius, build_panel2, build_panel3, Curve3, Line2, Line3,
    Squiggle3,
};
use panelquad::kernels::Sing2D;
use panelquad::recur2d::{p_m, p_m1, q_log};
use panelquad::recur3d::pvectors;
use panelquad::rootfind::{
    all_roots_legendre, classify_target_3d, newton_preimage_2d, r2_legendre_coeffs,
    r2_polynomial, root_3d, TargetClassKind,
};
use panelquad::specialquad::{ssq_weights_2d, ssq_weights_3d};

use common::{integrate_complex, integrate_real, linspace, logspace};

type C64 = Complex64;

fn report(criterion: &str, pass: bool, detail: String) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

/// Criterion 1: 2D p/q and 3D P monomial-integral recurrences agree with
/// adaptive quadrature over a log-spaced grid of 1600 singularity
/// locations, k <= 16 (rel. 1e-12; one digit relaxed inside the 3D series
/// cones).
#[test]
fn criterion_1_recurrence_oracles() {
    let nk = 16;
    // ---- 2D sweep
    let res = linspace(-1.5, 1.5, 40);
    let ims = logspace(1e-6, 1.0, 40);
    let mut worst2d: f64 = 0.0;
    for &re in &res {
        for &im in &ims {
            let z = C64::new(re, im);
            let p1 = p_m1(z, nk + 1, 0).unwrap();
            let p2 = p_m(z, 2, &p1[..nk]).unwrap();
            let q = q_log(z, nk, &p1).unwrap();
            for k in 0..nk {
                let kk = k as i32;
                let o1 = integrate_complex(|t| C64::new(t, 0.0).powi(kk) / (C64::new(t, 0.0) - z), -1.0, 1.0, 1e-14);
                let o2 = integrate_complex(
                    |t| {
                        let d = C64::new(t, 0.0) - z;
                        C64::new(t, 0.0).powi(kk) / (d * d)
                    },
                    -1.0,
                    1.0,
                    1e-14,
                );
                let oq = integrate_complex(
                    |t| C64::new(t, 0.0).powi(kk) * (C64::new(t, 0.0) - z).ln(),
                    -1.0,
                    1.0,
                    1e-14,
                );
                for (got, want) in [(p1[k], o1), (p2[k], o2), (q[k], oq)] {
                    let err = (got - want).norm() / (1.0 + want.norm());
                    worst2d = worst2d.max(err);
                }
            }
        }
    }
    let pass2d = worst2d <= 1e-12;

    // ---- 3D sweep
    let trs = linspace(-2.0, 2.0, 40);
    let tis = logspace(1e-8, 1.0, 40);
    let mut worst_in: f64 = 0.0;
    let mut worst_out: f64 = 0.0;
    for &tr in &trs {
        for &ti in &tis {
            let t0 = C64::new(tr, ti);
            let pv = pvectors(t0, nk).unwrap();
            let ta = tr.abs();
            let in_series = (4.0 * ti < 1.0 - ta) || (ta > 1.0 && ti < 0.7 * (ta - 1.0));
            for k in 0..nk {
                let kk = k as i32;
                for (m, got) in [(1i32, pv.p1[k]), (3, pv.p3[k]), (5, pv.p5[k])] {
                    let want = integrate_real(
                        |t| {
                            let d2 = (t - tr) * (t - tr) + ti * ti;
                            t.powi(kk) * d2.powf(-0.5 * m as f64)
                        },
                        -1.0,
                        1.0,
                        1e-14,
                    );
                    let err = (got - want).abs() / (1.0 + want.abs());
                    if in_series {
                        worst_in = worst_in.max(err);
                    } else {
                        worst_out = worst_out.max(err);
                    }
                }
            }
        }
    }
    let pass3d = worst_in <= 1e-10 && worst_out <= 1e-12;
    report(
        "1 (recurrence oracle suite)",
        pass2d && pass3d,
        format!(
            "2D worst {:.2e} (tol 1e-12); 3D worst {:.2e} in cones (tol 1e-10), {:.2e} outside (tol 1e-12)",
            worst2d, worst_in, worst_out
        ),
    );
}

/// Criterion 2: on a straight panel the SSQ weight vectors integrate
/// monomial densities t^{k-1}, k <= n, exactly (rel. 1e-12) against all
/// implemented kernels.
#[test]
fn criterion_2_flat_panel_exactness() {
    let n = 16;
    let cfg = QuadConfig::new(n, 1e-12, UpsampleMode::None);
    let mut worst: f64 = 0.0;

    // 2D kernels: log, 1/(t-t0), 1/(t-t0)^2
    let panel = build_panel2(&Line2, -1.0, 1.0, n).unwrap();
    for &zeta in &[C64::new(0.3, 0.2), C64::new(-0.6, 0.04), C64::new(0.0, 0.01)] {
        let pre = newton_preimage_2d(&panel, zeta, &cfg);
        assert!(pre.converged);
        for kernel in [Sing2D::Log, Sing2D::Pow(1), Sing2D::Pow(2)] {
            let w = ssq_weights_2d(&panel, zeta, &pre, kernel).unwrap();
            for k in 0..n {
                let kk = k as i32;
                let samples: Vec<C64> = panel
                    .rule
                    .nodes
                    .iter()
                    .map(|&t| C64::new(t.powi(kk), 0.0))
                    .collect();
                let got = w.apply(&samples);
                let want = integrate_complex(
                    |t| {
                        let tc = C64::new(t, 0.0);
                        let d = tc - zeta;
                        let kv = match kernel {
                            Sing2D::Log => d.ln(),
                            Sing2D::Pow(m) => d.powi(-(m as i32)),
                        };
                        tc.powi(kk) * kv
                    },
                    -1.0,
                    1.0,
                    1e-14,
                );
                worst = worst.max((got - want).norm() / (1.0 + want.norm()));
            }
        }
    }

    // 3D kernels: 1/|t-t0|^m, m = 1, 3, 5
    let panel3 = build_panel3(&Line3, -1.0, 1.0, n).unwrap();
    for &x in &[[0.3, 0.2, 0.0], [-0.5, 0.03, 0.04], [0.9, 0.0, 0.01]] {
        let pre = root_3d(&panel3, x, &cfg);
        assert!(pre.converged);
        let (tr, ti) = (pre.t0.re, pre.t0.im);
        for m in [1u32, 3, 5] {
            let w = ssq_weights_3d(&panel3, x, &pre, m).unwrap();
            for k in 0..n {
                let kk = k as i32;
                let got: f64 = w
                    .values
                    .iter()
                    .zip(&panel3.rule.nodes)
                    .map(|(&l, &t)| l * t.powi(kk))
                    .sum();
                let want = integrate_real(
                    |t| {
                        let d2 = (t - tr) * (t - tr) + ti * ti;
                        t.powi(kk) * d2.powf(-0.5 * m as f64)
                    },
                    -1.0,
                    1.0,
                    1e-14,
                );
                worst = worst.max((got - want).abs() / (1.0 + want.abs()));
            }
        }
    }
    report(
        "2 (flat-panel exactness)",
        worst <= 1e-12,
        format!("worst monomial integration error {worst:.2e} (tol 1e-12)"),
    );
}

/// Criterion 3: parabola comparison. k=0.25, n=16, no upsampling: HO floors
/// at >= 1e-6 while SSQ stays <= 1e-8 on the same grid; k=0.4 with data
/// upsampled to 32 nodes: SSQ <= 1e-10 outside a 1e-3 band around the
/// panel. Reference: per-target adaptive quadrature.
#[test]
fn criterion_3_parabola_comparison() {
    let base = parabola::ParabolaConfig {
        k: 0.25,
        n: 16,
        scheme: Scheme::HelsingOjala,
        mode: UpsampleMode::None,
        tol: 1e-10,
        grid_w: 200,
        grid_h: 160,
    };
    let ho = parabola::run(&base).unwrap();
    let ssq = parabola::run(&parabola::ParabolaConfig {
        scheme: Scheme::SingularitySwap,
        ..base.clone()
    })
    .unwrap();
    let up = parabola::run(&parabola::ParabolaConfig {
        k: 0.4,
        scheme: Scheme::SingularitySwap,
        mode: UpsampleMode::Upsample,
        tol: 1e-12,
        ..base.clone()
    })
    .unwrap();
    let ho_max = ho.grid.max_err();
    let ssq_max = ssq.grid.max_err();
    let up_max = up.max_err_outside(1e-3);
    let pass = ho_max >= 1e-6 && ssq_max <= 1e-8 && up_max <= 1e-10;
    report(
        "3 (parabola comparison)",
        pass,
        format!(
            "k=0.25 n=16: HO {ho_max:.2e} (>= 1e-6), SSQ {ssq_max:.2e} (<= 1e-8); \
             k=0.4 upsampled SSQ outside 1e-3 band: {up_max:.2e} (<= 1e-10)"
        ),
    );
}

/// Criterion 4: starfish boundary value problem. Coarse discretization
/// reaches the full 6 digits on the interior grid; fine discretization
/// reaches 1e-11 on the near grid (distance 1e-3) and 1e-10 on the extreme
/// grid (distance 1e-8).
#[test]
fn criterion_4_starfish_bvp() {
    let coarse = starfish::run(&starfish::StarfishConfig {
        eps_panel: 1e-6,
        scheme: Scheme::SingularitySwap,
        mode: UpsampleMode::Upsample,
        rho_eps: 1.8,
        tol: 1e-8,
        grid_w: 100,
        grid_h: 100,
        grid: starfish::GridKind::Global,
    })
    .unwrap();
    let fine_cfg = starfish::StarfishConfig {
        eps_panel: 1e-14,
        scheme: Scheme::SingularitySwap,
        mode: UpsampleMode::Upsample,
        rho_eps: 3.0,
        tol: 1e-15,
        grid_w: 120,
        grid_h: 120,
        grid: starfish::GridKind::Near {
            bmin: 1e-3,
            log_grade: false,
        },
        ..Default::default()
    };
    let near = starfish::run(&fine_cfg).unwrap();
    let extreme = starfish::run(&starfish::StarfishConfig {
        grid: starfish::GridKind::Near {
            bmin: 1e-8,
            log_grade: true,
        },
        ..fine_cfg.clone()
    })
    .unwrap();
    let pass = coarse.max_err <= 1e-5 && near.max_err <= 1e-11 && extreme.max_err <= 1e-10;
    report(
        "4 (starfish BVP)",
        pass,
        format!(
            "coarse ({} panels) {:.2e} (<= 1e-5); fine ({} panels) near {:.2e} (<= 1e-11), \
             extreme {:.2e} (<= 1e-10)",
            coarse.panels, coarse.max_err, near.panels, near.max_err, extreme.max_err
        ),
    );
}

/// Criteria 5 and 6: slender-body accuracy and efficiency against the
/// adaptive baseline at d = 1e-2 and 1e-4.
#[test]
fn criteria_5_6_slender_body() {
    let res = slender::run(&slender::SlenderConfig {
        eps_panel: 1e-10,
        eps_fiber: 1e-3,
        d_list: vec![1e-2, 1e-4],
        targets: 600,
        seed: 1,
        rho_eps: 3.0,
        slice: false,
        grid_w: 2,
        grid_h: 2,
    })
    .unwrap();
    let ssq_err = |d: f64| {
        res.bench
            .iter()
            .find(|r| r.scheme == "ssq" && r.d == d)
            .map(|r| r.max_rel_err)
            .unwrap()
    };
    let e2 = ssq_err(1e-2);
    let e4 = ssq_err(1e-4);
    let pass5 = e2 <= 1e-11 && e4 <= 1e-6;
    report(
        "5 (slender-body accuracy)",
        pass5,
        format!("d=1e-2: {e2:.2e} (<= 1e-11); d=1e-4: {e4:.2e} (<= 1e-6)"),
    );
    let r2 = res.ratios.iter().find(|r| r.0 == 1e-2).unwrap().1;
    let r4 = res.ratios.iter().find(|r| r.0 == 1e-4).unwrap().1;
    let pass6 = r2 >= 3.0 && r4 >= 4.0;
    report(
        "6 (slender-body efficiency)",
        pass6,
        format!("N_eval ratio adaptive/SSQ: {r2:.2} at d=1e-2 (>= 3), {r4:.2} at d=1e-4 (>= 4)"),
    );
}

/// Criterion 7: root-finder robustness over 1e4 random near targets on the
/// squiggle discretization: at least 99.9% converge; converged residuals
/// below 1e-12 of the panel scale; no target classified Far whose true
/// Bernstein radius (companion ground truth) is below 0.9 rho_eps.
#[test]
fn criterion_7_rootfinder_robustness() {
    let curve = Squiggle3;
    let panels = adaptive_panelize_3d(&curve, 1e-10, 16).unwrap();
    let cfg = QuadConfig::new(16, 1e-14, UpsampleMode::Upsample).with_rho_eps(3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n_targets = 10_000;
    let mut converged = 0u64;
    let mut resid_bad = 0u64;
    let mut misclassified = 0u64;
    let mut checked_far = 0u64;
    for _ in 0..n_targets {
        let t: f64 = rng.gen();
        let d = 10f64.powf(rng.gen_range(-6.0..-1.0));
        let y = curve.eval(t);
        let tan = {
            let g = Squiggle3.deriv(t);
            vec3::scale(g, 1.0 / vec3::norm(g))
        };
        let mut e = [0.0, 0.0, 1.0];
        e = vec3::sub(e, vec3::scale(tan, vec3::dot(e, tan)));
        let phi: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        let n1 = vec3::scale(e, 1.0 / vec3::norm(e));
        let n2 = vec3::cross(tan, n1);
        let x = vec3::add(
            y,
            vec3::add(
                vec3::scale(n1, d * phi.cos()),
                vec3::scale(n2, d * phi.sin()),
            ),
        );
        // nearest panel
        let panel = panels
            .iter()
            .min_by(|a, b| {
                a.min_node_dist(x)
                    .partial_cmp(&b.min_node_dist(x))
                    .unwrap()
            })
            .unwrap();
        let pre = root_3d(panel, x, &cfg);
        if pre.converged {
            converged += 1;
            let resid = r2_polynomial(panel, x, pre.t0).norm();
            if resid > 1e-12 * panel.h * panel.h {
                resid_bad += 1;
            }
        }
        // classification vs companion ground truth
        let class = classify_target_3d(panel, x, &cfg);
        if class.kind == TargetClassKind::Far {
            checked_far += 1;
            let coef = r2_legendre_coeffs(panel, x);
            if let Ok(roots) = all_roots_legendre(&coef) {
                let rho_true = roots
                    .iter()
                    .map(|&r| bernstein_radius(r))
                    .fold(f64::INFINITY, f64::min);
                if rho_true < 0.9 * cfg.rho_eps {
                    misclassified += 1;
                }
            }
        }
    }
    let frac = converged as f64 / n_targets as f64;
    let pass = frac >= 0.999 && resid_bad == 0 && misclassified == 0;
    report(
        "7 (root-finder robustness)",
        pass,
        format!(
            "{:.3}% converged (>= 99.9%), {resid_bad} residuals above 1e-12 scale, \
             {misclassified}/{checked_far} Far targets misclassified",
            100.0 * frac
        ),
    );
}

/// Criterion 8: weight-computation throughput (order-of-magnitude sanity;
/// a shortfall warns but never fails).
#[test]
fn criterion_8_throughput() {
    let rate = slender::weight_throughput(30_000);
    let ok = rate >= 1e5;
    println!(
        "criterion 8 (throughput sanity): {} — {rate:.3e} targets/second at n=16 {}",
        if ok { "PASS" } else { "WARN" },
        if ok {
            "(>= 1e5)"
        } else {
            "(below 1e5; reported as warning, not a failure)"
        }
    );
}
