//! Physical kernels and their singularity-split forms.
//!
//! 2D kernels are written as contour integrals of log and power-law type,
//! `int f(tau) log(tau - zeta) dtau` and `int f(tau)/(tau - zeta)^m dtau`,
//! where `f` carries the density together with any smooth geometric factors
//! (unit normals, conjugates). Each split term owns a closure producing the
//! per-node samples of `f`, so the weight builders stay kernel-agnostic.
//!
//! The 3D slender-body kernel (Stokeslet plus doublet correction) splits
//! into terms of `1/|R|^m` type with smooth vector numerators, for
//! m = 1, 3, 5.

use num_complex::Complex64;

use crate::geometry::vec3::{self, V3};

type C64 = Complex64;

/// Singularity type of a 2D split term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sing2D {
    Log,
    Pow(u32),
}

/// Per-node context handed to term sample closures.
pub struct NodeCtx {
    pub tau: C64,
    pub dtau: C64,
    pub speed: f64,
    pub zeta: C64,
    pub density: C64,
}

impl NodeCtx {
    /// Unit normal `nu = i gamma' / |gamma'|`.
    pub fn normal(&self) -> C64 {
        C64::new(0.0, 1.0) * self.dtau / self.speed
    }
}

type SampleFn = Box<dyn Fn(&NodeCtx) -> C64 + Sync + Send>;

/// One term of a 2D kernel split: a contour integral of the given
/// singularity type whose density samples come from `sample`, with the
/// result optionally conjugated and then scaled.
pub struct Term2D {
    pub sing: Sing2D,
    pub scale: C64,
    pub conj_result: bool,
    pub sample: SampleFn,
}

impl Term2D {
    pub fn finish(&self, integral: C64) -> C64 {
        let v = if self.conj_result { integral.conj() } else { integral };
        self.scale * v
    }
}

/// Final map from the complex term sum to the physical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduce {
    /// Keep the complex sum (vector-valued kernels).
    Sum,
    /// Take minus the imaginary part (scalar potentials).
    NegImag,
}

/// A decomposition of a physical kernel into log/power-law contour terms.
pub struct KernelSplit2D {
    pub name: &'static str,
    pub terms: Vec<Term2D>,
    pub reduce: Reduce,
}

impl KernelSplit2D {
    pub fn reduce(&self, term_sum: C64) -> C64 {
        match self.reduce {
            Reduce::Sum => term_sum,
            Reduce::NegImag => C64::new(-term_sum.im, 0.0),
        }
    }
}

/// Laplace double layer potential, `u = -Im int rho dtau / (tau - zeta)`.
pub fn laplace_dlp_2d() -> KernelSplit2D {
    KernelSplit2D {
        name: "laplace-dlp",
        terms: vec![Term2D {
            sing: Sing2D::Pow(1),
            scale: C64::new(1.0, 0.0),
            conj_result: false,
            sample: Box::new(|c| c.density),
        }],
        reduce: Reduce::NegImag,
    }
}

/// Laplace single layer potential,
/// `int rho log|y-x| ds = -Im int rho conj(nu) log(tau - z) dtau`.
pub fn laplace_slp_log_2d() -> KernelSplit2D {
    KernelSplit2D {
        name: "laplace-slp",
        terms: vec![Term2D {
            sing: Sing2D::Log,
            scale: C64::new(1.0, 0.0),
            conj_result: false,
            sample: Box::new(|c| c.density * c.normal().conj()),
        }],
        reduce: Reduce::NegImag,
    }
}

/// Gradient-type kernel `int rho (y-x)/|y-x|^2 ds`, returned as a complex
/// number representing the plane vector:
/// `conj( int rho conj(nu) i dtau / (tau - z) )`.
pub fn cauchy_gradient_2d() -> KernelSplit2D {
    KernelSplit2D {
        name: "cauchy-gradient",
        terms: vec![Term2D {
            sing: Sing2D::Pow(1),
            scale: C64::new(1.0, 0.0),
            conj_result: true,
            sample: Box::new(|c| c.density * c.normal().conj() * C64::new(0.0, 1.0)),
        }],
        reduce: Reduce::Sum,
    }
}

/// Hypersingular `|R|^4` kernel with vector density f (as a complex number):
/// `int (f.(y-x)) (y-x) ((y-x).n) / |y-x|^4 ds`, in the three-term complex
/// form with m = 2 and m = 1 parts.
pub fn hypersingular_r4_2d() -> KernelSplit2D {
    let quarter_over_i = C64::new(0.0, -0.25); // 1/(4i)
    KernelSplit2D {
        name: "hypersingular-r4",
        terms: vec![
            Term2D {
                sing: Sing2D::Pow(2),
                scale: quarter_over_i,
                conj_result: true,
                sample: Box::new(|c| (c.tau.conj() - c.zeta.conj()) * c.density),
            },
            Term2D {
                sing: Sing2D::Pow(1),
                scale: quarter_over_i,
                conj_result: true,
                sample: Box::new(|c| {
                    let nc = c.normal().conj();
                    c.density.conj() + c.density * nc * nc
                }),
            },
            Term2D {
                sing: Sing2D::Pow(1),
                scale: -quarter_over_i,
                conj_result: false,
                sample: Box::new(|c| c.density),
            },
        ],
        reduce: Reduce::Sum,
    }
}

/// Direct product-rule evaluation of one split term over a set of nodes.
///
/// `I_t ~= sum_j w_j dtau_j sample_j K(tau_j - zeta)`.
pub fn eval_term_direct(
    term: &Term2D,
    weights: &[f64],
    tau: &[C64],
    dtau: &[C64],
    speed: &[f64],
    density: &[C64],
    zeta: C64,
) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..tau.len() {
        let ctx = NodeCtx {
            tau: tau[j],
            dtau: dtau[j],
            speed: speed[j],
            zeta,
            density: density[j],
        };
        let fj = (term.sample)(&ctx);
        let d = tau[j] - zeta;
        let kern = match term.sing {
            Sing2D::Log => d.ln(),
            Sing2D::Pow(m) => d.powi(-(m as i32)),
        };
        acc += dtau[j] * fj * kern * weights[j];
    }
    term.finish(acc)
}

/// Direct product-rule evaluation of a whole split.
pub fn eval_split_direct(
    split: &KernelSplit2D,
    weights: &[f64],
    tau: &[C64],
    dtau: &[C64],
    speed: &[f64],
    density: &[C64],
    zeta: C64,
) -> C64 {
    let sum = split
        .terms
        .iter()
        .map(|t| eval_term_direct(t, weights, tau, dtau, speed, density, zeta))
        .fold(C64::new(0.0, 0.0), |a, b| a + b);
    split.reduce(sum)
}

/// Stokeslet tensor `S(R) = I/|R| + R R^T / |R|^3`.
pub fn stokeslet(r: V3) -> [[f64; 3]; 3] {
    let nr = vec3::norm(r);
    let nr3 = nr * nr * nr;
    let mut s = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            s[i][j] = r[i] * r[j] / nr3;
        }
        s[i][i] += 1.0 / nr;
    }
    s
}

/// Doublet tensor `D(R) = I/|R|^3 - 3 R R^T / |R|^5 = (1/2) Laplacian S`.
pub fn doublet(r: V3) -> [[f64; 3]; 3] {
    let nr = vec3::norm(r);
    let nr3 = nr * nr * nr;
    let nr5 = nr3 * nr * nr;
    let mut d = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            d[i][j] = -3.0 * r[i] * r[j] / nr5;
        }
        d[i][i] += 1.0 / nr3;
    }
    d
}

fn matvec(m: &[[f64; 3]; 3], v: V3) -> V3 {
    [
        vec3::dot(m[0], v),
        vec3::dot(m[1], v),
        vec3::dot(m[2], v),
    ]
}

/// Slender-body kernel split: `u = I_1 + I_3 + I_5` with
/// `I_1 = int f/|R|`, `I_3 = int (R R^T + eps^2 I/2) f / |R|^3`,
/// `I_5 = -(3 eps^2/2) int R R^T f / |R|^5`, where `R = x - y`.
#[derive(Debug, Clone, Copy)]
pub struct SlenderBodySplit {
    /// Fiber radius.
    pub eps: f64,
}

/// One term of the slender-body split.
#[derive(Debug, Clone, Copy)]
pub struct Term3D {
    pub m: u32,
    pub scale: f64,
}

impl SlenderBodySplit {
    pub fn new(eps: f64) -> Self {
        assert!(eps > 0.0, "fiber radius must be positive");
        SlenderBodySplit { eps }
    }

    pub fn terms(&self) -> [Term3D; 3] {
        [
            Term3D { m: 1, scale: 1.0 },
            Term3D { m: 3, scale: 1.0 },
            Term3D {
                m: 5,
                scale: -1.5 * self.eps * self.eps,
            },
        ]
    }

    /// Smooth numerator samples of the term with power `m`, at source `y`
    /// with density `f`, for target `x`.
    pub fn sample(&self, m: u32, x: V3, y: V3, f: V3) -> V3 {
        let r = vec3::sub(x, y);
        match m {
            1 => f,
            3 => vec3::add(
                vec3::scale(r, vec3::dot(r, f)),
                vec3::scale(f, 0.5 * self.eps * self.eps),
            ),
            5 => vec3::scale(r, vec3::dot(r, f)),
            _ => unreachable!("slender-body split has m in {{1,3,5}}"),
        }
    }

    /// Pointwise kernel `(S + (eps^2/2) D) f`.
    pub fn direct_kernel(&self, r: V3, f: V3) -> V3 {
        let s = stokeslet(r);
        let d = doublet(r);
        let sf = matvec(&s, f);
        let df = matvec(&d, f);
        vec3::add(sf, vec3::scale(df, 0.5 * self.eps * self.eps))
    }

    /// Split sum evaluated pointwise (identical to `direct_kernel` up to
    /// round-off; kept separate so the identity can be tested).
    pub fn split_kernel(&self, r: V3, f: V3) -> V3 {
        let nr = vec3::norm(r);
        let mut u = [0.0; 3];
        for t in self.terms() {
            let num = self.sample_from_r(t.m, r, f);
            let inv = nr.powi(-(t.m as i32));
            for c in 0..3 {
                u[c] += t.scale * num[c] * inv;
            }
        }
        u
    }

    fn sample_from_r(&self, m: u32, r: V3, f: V3) -> V3 {
        match m {
            1 => f,
            3 => vec3::add(
                vec3::scale(r, vec3::dot(r, f)),
                vec3::scale(f, 0.5 * self.eps * self.eps),
            ),
            5 => vec3::scale(r, vec3::dot(r, f)),
            _ => unreachable!(),
        }
    }
}
