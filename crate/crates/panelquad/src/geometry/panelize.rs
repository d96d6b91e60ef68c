//! Adaptive panelization by recursive bisection.
//!
//! A panel is deemed resolved when the last two Legendre coefficients of
//! its derivative (2D) or of its speed function (3D) are small relative to
//! the largest coefficient. Neighboring parameter intervals are kept within
//! a factor-2 length ratio (level restriction), cyclically for closed
//! curves.

use num_complex::Complex64;

use super::legendre::{self};
use super::panel2::{build_panel2, Curve2, Panel2};
use super::panel3::{build_panel3, Curve3, Panel3};
use crate::error::{PanelError, Result};

const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    depth: u32,
}

fn refine<F>(domain: (f64, f64), resolved: &mut F, closed: bool) -> Result<Vec<Interval>>
where
    F: FnMut(f64, f64) -> bool,
{
    let mut out: Vec<Interval> = Vec::new();
    let mut stack = vec![Interval {
        a: domain.0,
        b: domain.1,
        depth: 0,
    }];
    // Depth-first, left child first, so `out` stays ordered after reverse.
    while let Some(iv) = stack.pop() {
        if resolved(iv.a, iv.b) {
            out.push(iv);
            continue;
        }
        if iv.depth >= MAX_DEPTH {
            return Err(PanelError::DepthExceeded(MAX_DEPTH));
        }
        let mid = 0.5 * (iv.a + iv.b);
        stack.push(Interval {
            a: mid,
            b: iv.b,
            depth: iv.depth + 1,
        });
        stack.push(Interval {
            a: iv.a,
            b: mid,
            depth: iv.depth + 1,
        });
    }
    out.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());

    // Level restriction: all intervals are binary fractions of the domain,
    // so a neighbor length ratio <= 2 is exactly a depth difference <= 1.
    loop {
        let m = out.len();
        let mut split_idx: Option<usize> = None;
        for i in 0..m {
            let j = (i + 1) % m;
            if j == 0 && !closed {
                break;
            }
            let (di, dj) = (out[i].depth, out[j].depth);
            if di + 1 < dj {
                split_idx = Some(i);
                break;
            }
            if dj + 1 < di {
                split_idx = Some(j);
                break;
            }
        }
        match split_idx {
            None => break,
            Some(i) => {
                let iv = out[i];
                let mid = 0.5 * (iv.a + iv.b);
                out[i] = Interval {
                    a: iv.a,
                    b: mid,
                    depth: iv.depth + 1,
                };
                out.insert(
                    i + 1,
                    Interval {
                        a: mid,
                        b: iv.b,
                        depth: iv.depth + 1,
                    },
                );
            }
        }
    }
    Ok(out)
}

fn tail_resolved(coef_mags: &[f64], eps: f64) -> bool {
    let n = coef_mags.len();
    let max = coef_mags.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return true;
    }
    coef_mags[n - 1].max(coef_mags[n - 2]) < eps * max
}

/// Panelize a 2D curve until the Legendre coefficients of the derivative
/// decay below `eps_panel` on every panel.
pub fn adaptive_panelize_2d(curve: &dyn Curve2, eps_panel: f64, n: usize) -> Result<Vec<Panel2>> {
    let rule = legendre::gauss_legendre(n)?;
    let mut resolved = |a: f64, b: f64| {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let samples: Vec<Complex64> = rule
            .nodes
            .iter()
            .map(|&s| curve.deriv(mid + half * s) * half)
            .collect();
        let coef = legendre::fit_full(&rule, &samples);
        let mags: Vec<f64> = coef.iter().map(|c| c.norm()).collect();
        tail_resolved(&mags, eps_panel)
    };
    let intervals = refine(curve.domain(), &mut resolved, curve.closed())?;
    intervals
        .iter()
        .map(|iv| build_panel2(curve, iv.a, iv.b, n))
        .collect()
}

/// Panelize a space curve on the speed-function criterion.
pub fn adaptive_panelize_3d(curve: &dyn Curve3, eps_panel: f64, n: usize) -> Result<Vec<Panel3>> {
    let rule = legendre::gauss_legendre(n)?;
    let mut resolved = |a: f64, b: f64| {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let samples: Vec<f64> = rule
            .nodes
            .iter()
            .map(|&s| {
                let d = curve.deriv(mid + half * s);
                half * super::vec3::norm(d)
            })
            .collect();
        let coef = legendre::fit_full_real(&rule, &samples);
        let mags: Vec<f64> = coef.iter().map(|c| c.abs()).collect();
        tail_resolved(&mags, eps_panel)
    };
    let intervals = refine(curve.domain(), &mut resolved, curve.closed())?;
    intervals
        .iter()
        .map(|iv| build_panel3(curve, iv.a, iv.b, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curves::{Line2, Squiggle3, Starfish};

    #[test]
    fn straight_line_single_panel() {
        let panels = adaptive_panelize_2d(&Line2, 1e-14, 16).unwrap();
        assert_eq!(panels.len(), 1);
    }

    #[test]
    fn starfish_panel_counts() {
        let coarse = adaptive_panelize_2d(&Starfish, 1e-6, 16).unwrap();
        assert_eq!(coarse.len(), 8, "coarse starfish discretization");
        let fine = adaptive_panelize_2d(&Starfish, 1e-14, 16).unwrap();
        assert!(
            (24..=40).contains(&fine.len()),
            "fine starfish discretization gave {} panels",
            fine.len()
        );
    }

    #[test]
    fn panelization_covers_domain_and_is_level_restricted() {
        for eps in [1e-6, 1e-10, 1e-14] {
            let panels = adaptive_panelize_2d(&Starfish, eps, 16).unwrap();
            let m = panels.len();
            for i in 0..m {
                let j = (i + 1) % m;
                if j != 0 {
                    assert!((panels[i].b - panels[j].a).abs() < 1e-14);
                }
                let li = panels[i].b - panels[i].a;
                let lj = panels[j].b - panels[j].a;
                let ratio = (li / lj).max(lj / li);
                assert!(ratio < 2.0 + 1e-12, "eps={eps}: neighbor ratio {ratio}");
            }
            let total: f64 = panels.iter().map(|p| p.b - p.a).sum();
            assert!((total - std::f64::consts::TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn squiggle_panelization() {
        let panels = adaptive_panelize_3d(&Squiggle3, 1e-6, 16).unwrap();
        assert!(panels.len() > 10);
        let total: f64 = panels.iter().map(|p| p.b - p.a).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let finer = adaptive_panelize_3d(&Squiggle3, 1e-10, 16).unwrap();
        assert!(finer.len() > panels.len());
    }
}
