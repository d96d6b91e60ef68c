//! Runtime configuration for the near-evaluation pipeline.

/// How panel data is upsampled before building special quadrature weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpsampleMode {
    /// Build special weights on the panel's own nodes.
    None,
    /// Upsample geometry and density to `2n` nodes for special targets.
    Upsample,
    /// Like `Upsample`, but targets in the band `sqrt(rho_eps) <= rho <
    /// rho_eps` use an upsampled *direct* rule instead of special weights.
    UpsampleWithUpsampledDirect,
}

/// Which special quadrature to apply to targets that need one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Plain product rule everywhere (no special treatment).
    Direct,
    /// Helsing–Ojala complex interpolatory quadrature (2D only).
    HelsingOjala,
    /// Singularity swap quadrature.
    SingularitySwap,
}

/// Parameters of the target classification and weight construction.
#[derive(Debug, Clone)]
pub struct QuadConfig {
    /// Base node count per panel.
    pub n: usize,
    pub mode: UpsampleMode,
    /// Requested tolerance; sets the critical Bernstein radius.
    pub tol: f64,
    /// Critical Bernstein radius `rho_eps = tol^(-1/2n)`.
    pub rho_eps: f64,
    /// Near-candidate cutoff is `distance_multiplier * h` (panel arc length).
    pub distance_multiplier: f64,
    /// Newton iteration cap before declaring non-convergence (2D) or
    /// switching to Muller's method (3D).
    pub newton_cap: usize,
    /// Enable the companion-matrix root finder when the panel's Schwarz
    /// preimage is close to the critical Bernstein radius.
    pub companion_fallback: bool,
    /// Node count used for special targets in 3D. Upsampling to 32 is
    /// required there for full accuracy.
    pub n_upsample_3d: usize,
}

impl QuadConfig {
    pub fn new(n: usize, tol: f64, mode: UpsampleMode) -> Self {
        QuadConfig {
            n,
            mode,
            tol,
            rho_eps: crate::geometry::rho_crit(tol, n),
            distance_multiplier: 1.0,
            newton_cap: 20,
            companion_fallback: false,
            n_upsample_3d: 32,
        }
    }

    /// Critical radius supplied directly (the experiments pick round values
    /// like 1.8 or 3 rather than the exact `tol^(-1/2n)`).
    pub fn with_rho_eps(mut self, rho_eps: f64) -> Self {
        self.rho_eps = rho_eps;
        self
    }

    /// Node count for special-target weights in 2D under the current mode.
    pub fn n_special_2d(&self) -> usize {
        match self.mode {
            UpsampleMode::None => self.n,
            _ => 2 * self.n,
        }
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig::new(16, 1e-8, UpsampleMode::Upsample)
    }
}
