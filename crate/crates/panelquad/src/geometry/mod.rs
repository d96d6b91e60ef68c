//! Curves, panels and the Bernstein-radius machinery.
//!
//! A panel stores Gauss–Legendre nodes on a parameter sub-interval together
//! with the mapped geometry, derivatives with respect to the *standard*
//! parameter on `[-1,1]`, and truncated Legendre expansions of the map used
//! by the root finder.

pub mod curves;
pub mod legendre;
pub mod panel2;
pub mod panel3;
pub mod panelize;
pub mod vec3;

pub use curves::{Circle2, Line2, Line3, Parabola, Squiggle3, Starfish};
pub use legendre::{
    eval_poly_complex, eval_poly_complex_deriv, gauss_legendre, legendre_fit, GlRule,
};
pub use panel2::{
    build_panel2, endpoint_frame, schwarz_preimage, upsample_panel2, ComplexPanelFrame, Curve2,
    Panel2,
};
pub use panel3::{build_panel3, upsample_panel3, Curve3, Panel3};
pub use panelize::{adaptive_panelize_2d, adaptive_panelize_3d};

use num_complex::Complex64;

/// Bernstein radius `rho(t) = |t ± sqrt(t^2-1)|` with the sign chosen so
/// that `rho >= 1`. Points on `[-1,1]` return 1.
pub fn bernstein_radius(t: Complex64) -> f64 {
    if t.im == 0.0 && t.re.abs() <= 1.0 {
        return 1.0;
    }
    let w = (t * t - Complex64::new(1.0, 0.0)).sqrt();
    (t + w).norm().max((t - w).norm())
}

/// Critical Bernstein radius `rho_eps = eps^(-1/2n)` beyond which the
/// direct rule reaches relative error `eps`.
pub fn rho_crit(eps: f64, n: usize) -> f64 {
    eps.powf(-1.0 / (2.0 * n as f64))
}
