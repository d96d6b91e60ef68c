//! Panel-based quadrature for nearly singular line integrals in 2D and 3D.
//!
//! A smooth curve is split into panels carrying Gauss–Legendre nodes. For
//! targets far from a panel the plain product rule is accurate; for nearby
//! targets this crate builds target-specific quadrature weights by
//! interpolatory methods:
//!
//! - **Direct**: the plain Gauss–Legendre product rule.
//! - **Helsing–Ojala (HO)**: complex monomial interpolation on the panel
//!   image, with exact monomial integrals from recurrences (2D only).
//! - **Singularity swap (SSQ)**: the target singularity is replaced by its
//!   complex parameter-plane preimage, found by Newton iteration, so that
//!   the monomial integrals are taken on the standard interval `[-1,1]`.
//!   This keeps the convergence rate high on curved panels and extends the
//!   approach to line integrals in 3D.
//!
//! An adaptive-refinement reference quadrature ([`refquad`]) serves as
//! accuracy oracle and efficiency baseline.
//!
//! The `examples/` directory contains one runnable program per capability
//! (panelization, 2D error grids, a Laplace boundary value problem, the 3D
//! slender-body field and its benchmark). The thin `panelquad` binary
//! exposes the same drivers as subcommands.

pub mod config;
pub mod demo;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod recur2d;
pub mod recur3d;
pub mod refquad;
pub mod rootfind;
pub mod specialquad;

pub use config::{QuadConfig, Scheme, UpsampleMode};
pub use error::PanelError;

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
