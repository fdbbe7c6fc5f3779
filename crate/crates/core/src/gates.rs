//! Coherence created by two-qubit unitaries acting on incoherent inputs.
//!
//! An incoherent two-qubit input is `diag(delta)` in the computational basis
//! with `delta` sorted ascending (see [`DiagonalSpectrum`]). The closed-form
//! optima for the one-side local, two-side local and Cartan-kernel families
//! are all computed as entropy differences `S(rho_I*) - S(delta)`, where
//! `rho_I*` is the optimal dephased output.
//!
//! The polynomial form of these optima that is often quoted carries the
//! trailing term as `-sum delta_i log2 delta_i`; the values here carry
//! `+sum delta_i log2 delta_i`. See the README section
//! "Sign of the entropy term in closed-form optima" for the details.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{coherence_from_populations, conjugated_diagonal, MeasureReport, ReportArg};
use crate::optim::{multi_start, OptimizerConfig, SearchBox};
use crate::param::{product_search_box, product_unitary, unitary_from_params, PhasePlacement};
use crate::qmat::{kron, max_abs_diff, shannon_entropy, CMatrix, CVector, DensityMatrix, PureState, SubsystemShape, UnitaryMatrix, ONE, ZERO};

const SPECTRUM_TOL: f64 = 1e-12;
const WEYL_TOL: f64 = 1e-12;

/// Populations of an incoherent two-qubit state, stored ascending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalSpectrum {
    delta: [f64; 4],
    reordered: bool,
}

impl DiagonalSpectrum {
    /// Validates and sorts. Entries in `[-1e-12, 0)` are clipped to zero.
    pub fn new(values: [f64; 4]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < -SPECTRUM_TOL) {
            return Err(Error::InvalidSpectrum(format!("negative or non-finite entry in {values:?}")));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > SPECTRUM_TOL {
            return Err(Error::InvalidSpectrum(format!("entries sum to {total}")));
        }
        let mut delta = values.map(|v| v.max(0.0));
        let reordered = delta.windows(2).any(|w| w[0] > w[1]);
        delta.sort_by(f64::total_cmp);
        Ok(Self { delta, reordered })
    }

    /// Four comma-separated reals.
    pub fn parse(text: &str) -> Result<Self> {
        let values: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidSpectrum(format!("{text:?}: {e}")))?;
        let values: [f64; 4] = values
            .try_into()
            .map_err(|v: Vec<f64>| Error::InvalidSpectrum(format!("expected 4 entries, got {}", v.len())))?;
        Self::new(values)
    }

    /// Uniform sample from the probability simplex.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let raw: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
        let total: f64 = raw.iter().sum();
        let mut delta = raw.map(|x| x / total);
        delta.sort_by(f64::total_cmp);
        Self { delta, reordered: false }
    }

    pub fn delta(&self) -> [f64; 4] {
        self.delta
    }

    /// True when the input had to be sorted.
    pub fn reordered(&self) -> bool {
        self.reordered
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.delta)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let diag = CVector::from_iterator(4, self.delta.iter().map(|&x| ONE * x));
        DensityMatrix::from_parts(SubsystemShape::qubits(2).expect("two qubits"), CMatrix::from_diagonal(&diag))
    }
}

/// Nonlocal parameters `(c1, c2, c3)` of a two-qubit gate, inside the Weyl
/// chamber `0 <= |c3| <= c2 <= c1 <= pi/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartanVector {
    c: [f64; 3],
}

impl CartanVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let c = [c1, c2, c3];
        let inside = c.iter().all(|x| x.is_finite())
            && c3.abs() <= c2 + WEYL_TOL
            && c2 <= c1 + WEYL_TOL
            && c1 <= FRAC_PI_4 + WEYL_TOL;
        if !inside {
            return Err(Error::OutsideWeylChamber(c));
        }
        Ok(Self { c })
    }

    /// Three comma-separated reals.
    pub fn parse(text: &str) -> Result<Self> {
        let values: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("{text:?}: {e}")))?;
        match values[..] {
            [c1, c2, c3] => Self::new(c1, c2, c3),
            _ => Err(Error::InvalidArgument(format!("expected 3 entries, got {}", values.len()))),
        }
    }

    /// Random point of the chamber (not uniform in volume).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let c1 = rng.random::<f64>() * FRAC_PI_4;
        let c2 = rng.random::<f64>() * c1;
        let c3 = (2.0 * rng.random::<f64>() - 1.0) * c2;
        Self { c: [c1, c2, c3] }
    }

    /// Surjective smooth map from `R^3` onto the chamber, used by the kernel
    /// search: `c1 = pi/4 sin^2 x1`, `c2 = c1 sin^2 x2`, `c3 = c2 (2 sin^2 x3 - 1)`.
    pub fn from_unconstrained(x: &[f64]) -> Self {
        let s = |t: f64| t.sin().powi(2);
        let c1 = FRAC_PI_4 * s(x[0]);
        let c2 = c1 * s(x[1]);
        let c3 = c2 * (2.0 * s(x[2]) - 1.0);
        Self { c: [c1, c2, c3] }
    }

    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    /// Eigenphases `lambda_k` of the kernel on the magic basis columns.
    pub fn magic_phases(&self) -> [f64; 4] {
        let [c1, c2, c3] = self.c;
        [c1 - c2 + c3, -c1 + c2 + c3, -c1 - c2 - c3, c1 + c2 - c3]
    }
}

fn cx(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

/// `(1/sqrt 2) [[1, 1], [-1, 1]]`, sending `|0>` to `|->` and `|1>` to `|+>`.
pub fn hadamard_like() -> UnitaryMatrix {
    let h = FRAC_1_SQRT_2;
    UnitaryMatrix::from_parts(CMatrix::from_row_slice(2, 2, &[cx(h, 0.0), cx(h, 0.0), cx(-h, 0.0), cx(h, 0.0)]))
}

/// Columns `Phi+`, `-i Phi-`, `Psi-`, `-i Psi+`, with `Phi+- = (|00> +- |11>)/sqrt 2`
/// and `Psi+- = (|01> +- |10>)/sqrt 2`.
pub fn magic_basis() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let entries = [
        cx(h, 0.0),  cx(0.0, -h), ZERO,        ZERO,
        ZERO,        ZERO,        cx(h, 0.0),  cx(0.0, -h),
        ZERO,        ZERO,        cx(-h, 0.0), cx(0.0, -h),
        cx(h, 0.0),  cx(0.0, h),  ZERO,        ZERO,
    ];
    CMatrix::from_row_slice(4, 4, &entries)
}

/// `exp(-i sum_j c_j sigma_j (x) sigma_j)` written out in the computational basis.
pub fn cartan_kernel(c: &CartanVector) -> UnitaryMatrix {
    let [c1, c2, c3] = c.c;
    let (sm, cm) = (c1 - c2).sin_cos();
    let (sp, cp) = (c1 + c2).sin_cos();
    let em = cx(0.0, -c3).exp();
    let ep = cx(0.0, c3).exp();
    let mi = cx(0.0, -1.0);
    #[rustfmt::skip]
    let entries = [
        em * cm,      ZERO,         ZERO,         mi * em * sm,
        ZERO,         ep * cp,      mi * ep * sp, ZERO,
        ZERO,         mi * ep * sp, ep * cp,      ZERO,
        mi * em * sm, ZERO,         ZERO,         em * cm,
    ];
    UnitaryMatrix::from_parts(CMatrix::from_row_slice(4, 4, &entries))
}

/// `C(U delta U^dag)` for an incoherent input, from the diagonal alone.
fn created_coherence(delta: &DiagonalSpectrum, u: &CMatrix) -> f64 {
    let rho = delta.to_density();
    coherence_from_populations(&conjugated_diagonal(rho.data(), u), delta.entropy())
}

fn entropy_gain(target: [f64; 4], delta: &DiagonalSpectrum) -> f64 {
    (shannon_entropy(&target) - delta.entropy()).max(0.0)
}

/// Best coherence from `U_A (x) I` on `diag(delta)`, reached by the
/// Hadamard-like gate on the first qubit.
pub fn copt_one_side(delta: &DiagonalSpectrum) -> f64 {
    let [d1, d2, d3, d4] = delta.delta;
    let a = (d1 + d3) / 2.0;
    let b = (d2 + d4) / 2.0;
    entropy_gain([a, b, a, b], delta)
}

/// Best coherence from `U_A (x) U_B`: `2 - S(delta)`.
pub fn copt_two_side(delta: &DiagonalSpectrum) -> f64 {
    entropy_gain([0.25; 4], delta)
}

/// Best coherence from a Cartan kernel, reached at `c = (pi/4, 0, 0)`.
pub fn copt_kernel(delta: &DiagonalSpectrum) -> f64 {
    let [d1, d2, d3, d4] = delta.delta;
    let a = (d1 + d4) / 2.0;
    let b = (d2 + d3) / 2.0;
    entropy_gain([a, b, b, a], delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingReport {
    pub c1opt: f64,
    pub c3opt: f64,
    pub c2opt: f64,
    /// `0 <= c1opt <= c3opt + 1e-9 <= c2opt + 2e-9`.
    pub holds: bool,
}

pub fn copt_ordering(delta: &DiagonalSpectrum) -> OrderingReport {
    let c1opt = copt_one_side(delta);
    let c3opt = copt_kernel(delta);
    let c2opt = copt_two_side(delta);
    let holds = c1opt >= 0.0 && c3opt >= 0.0 && c2opt >= 0.0 && c1opt <= c3opt + 1e-9 && c3opt <= c2opt + 1e-9;
    OrderingReport { c1opt, c3opt, c2opt, holds }
}

/// Unitary family searched by [`copt_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoptFamily {
    /// `U_A (x) I`
    OneSide,
    /// `U_A (x) U_B`
    TwoSide,
    /// Cartan kernels
    Kernel,
    /// all of `U(4)`
    FullU4,
}

impl FromStr for CoptFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one_side" => Ok(Self::OneSide),
            "two_side" => Ok(Self::TwoSide),
            "kernel" => Ok(Self::Kernel),
            "full_u4" => Ok(Self::FullU4),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

impl fmt::Display for CoptFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OneSide => "one_side",
            Self::TwoSide => "two_side",
            Self::Kernel => "kernel",
            Self::FullU4 => "full_u4",
        })
    }
}

const FULL_U4_RESTARTS: usize = 64;

/// Unitary of `family` for search parameters `x`.
pub fn family_unitary(family: CoptFamily, x: &[f64]) -> CMatrix {
    match family {
        CoptFamily::OneSide => kron(&unitary_from_params(2, x, PhasePlacement::Right), &CMatrix::identity(2, 2)),
        CoptFamily::TwoSide => product_unitary(&[2, 2], x, PhasePlacement::Right),
        CoptFamily::Kernel => cartan_kernel(&CartanVector::from_unconstrained(x)).data().clone(),
        CoptFamily::FullU4 => unitary_from_params(4, x, PhasePlacement::Right),
    }
}

fn family_domain(family: CoptFamily) -> SearchBox {
    match family {
        CoptFamily::OneSide => product_search_box(&[2]),
        CoptFamily::TwoSide => product_search_box(&[2, 2]),
        CoptFamily::Kernel => SearchBox::uniform(3, 0.0, PI, 0.3),
        CoptFamily::FullU4 => product_search_box(&[4]),
    }
}

/// Maximum of `C(U delta U^dag)` over `family` by multi-start search.
///
/// `arg` holds the search parameters, except for `Kernel` where it holds the
/// optimal `(c1, c2, c3)`. `FullU4` uses at least 64 restarts.
pub fn copt_numeric(delta: &DiagonalSpectrum, family: CoptFamily, config: &OptimizerConfig) -> MeasureReport {
    let domain = family_domain(family);
    let config = match family {
        CoptFamily::FullU4 => config.clone().with_restarts(config.restarts.max(FULL_U4_RESTARTS)),
        _ => config.clone(),
    };
    let objective = |x: &[f64]| -created_coherence(delta, &family_unitary(family, x));
    let run = multi_start(&objective, &domain, &[vec![0.0; domain.dim()]], &config);
    let arg = match family {
        CoptFamily::Kernel => CartanVector::from_unconstrained(&run.best.x).c.to_vec(),
        _ => run.best.x.clone(),
    };
    MeasureReport {
        value: (-run.best.value).max(0.0),
        arg: Some(ReportArg::Params(arg)),
        restarts: run.restarts,
        iterations: run.total_iterations,
        final_step: run.best.final_step,
        converged: run.best.converged,
        seed: config.seed,
    }
}

/// Uniform superposition of `d` basis states, `C = log2 d`.
pub fn maximally_coherent_state(d: usize) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let amp = ONE / (d as f64).sqrt();
    PureState::new(SubsystemShape::single(d)?, CVector::from_element(d, amp))
}

/// Images of `|00>, |01>, |10>, |11>` under the kernel at `(pi/4, 0, 0)`:
/// `(|00> - i|11>)/sqrt 2`, `(|01> - i|10>)/sqrt 2`, `(|10> - i|01>)/sqrt 2`,
/// `(|11> - i|00>)/sqrt 2`, as columns.
pub fn kernel_images() -> CMatrix {
    let h = cx(FRAC_1_SQRT_2, 0.0);
    let m = cx(0.0, -FRAC_1_SQRT_2);
    #[rustfmt::skip]
    let entries = [
        h,    ZERO, ZERO, m,
        ZERO, h,    m,    ZERO,
        ZERO, m,    h,    ZERO,
        m,    ZERO, ZERO, h,
    ];
    CMatrix::from_row_slice(4, 4, &entries)
}

/// Whether the kernel at `(pi/4, 0, 0)` sends `diag(delta)` to the state that
/// is diagonal, with weights `delta`, in the basis of [`kernel_images`].
pub fn bell_diagonal_image_check(delta: &DiagonalSpectrum) -> bool {
    let c = CartanVector::new(FRAC_PI_4, 0.0, 0.0).expect("inside chamber");
    let u = cartan_kernel(&c);
    let rho = delta.to_density();
    let out = u.data() * rho.data() * u.data().adjoint();
    let w = kernel_images();
    let in_images = w.adjoint() * out * &w;
    max_abs_diff(&in_images, rho.data()) <= 1e-10
}

/// Inputs over which [`coherent_power`] maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerMode {
    /// `max_delta C(U delta U^dag)` over incoherent `delta`
    IncoherentInputs,
    /// `max_rho [C(U rho U^dag) - C(rho)]`
    AllInputs,
}

impl FromStr for PowerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "incoherent_inputs" => Ok(Self::IncoherentInputs),
            "all_inputs" => Ok(Self::AllInputs),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

/// Simplex point `x_i^2 / sum x^2`; the origin maps to the uniform point.
fn simplex_point(x: &[f64]) -> Vec<f64> {
    let total: f64 = x.iter().map(|v| v * v).sum();
    if total <= 0.0 {
        return vec![1.0 / x.len() as f64; x.len()];
    }
    x.iter().map(|v| v * v / total).collect()
}

/// Diagonal of `U diag(p) U^dag`.
fn mixed_populations(abs2: &CMatrix, p: &[f64]) -> Vec<f64> {
    (0..abs2.nrows())
        .map(|i| (0..p.len()).map(|j| abs2[(i, j)].re * p[j]).sum())
        .collect()
}

fn abs2(u: &CMatrix) -> CMatrix {
    u.map(|z| cx(z.norm_sqr(), 0.0))
}

/// Coherent power of a gate in the computational basis.
///
/// For `IncoherentInputs` the `arg` is the optimal input population vector.
/// For `AllInputs` it is the raw parameter vector: `d^2 - 1` parameters of the
/// input eigenbasis `V` followed by `d` parameters whose normalized squares
/// are the eigenvalues.
pub fn coherent_power(u: &UnitaryMatrix, mode: PowerMode, config: &OptimizerConfig) -> MeasureReport {
    let d = u.dim();
    let u_abs2 = abs2(u.data());
    match mode {
        PowerMode::IncoherentInputs => {
            let gain = |p: &[f64]| shannon_entropy(&mixed_populations(&u_abs2, p)) - shannon_entropy(p);
            let mut vertex_best = (f64::NEG_INFINITY, vec![]);
            for j in 0..d {
                let mut p = vec![0.0; d];
                p[j] = 1.0;
                let g = gain(&p);
                if g > vertex_best.0 {
                    vertex_best = (g, p);
                }
            }
            let objective = |x: &[f64]| -gain(&simplex_point(x));
            let domain = SearchBox::uniform(d, -1.0, 1.0, 0.3);
            let run = multi_start(&objective, &domain, &[], config);
            let searched = -run.best.value;
            let (value, arg, converged) = if vertex_best.0 >= searched {
                (vertex_best.0, vertex_best.1, true)
            } else {
                (searched, simplex_point(&run.best.x), run.best.converged)
            };
            MeasureReport {
                value: value.max(0.0),
                arg: Some(ReportArg::Params(arg)),
                restarts: run.restarts,
                iterations: run.total_iterations,
                final_step: run.best.final_step,
                converged,
                seed: config.seed,
            }
        }
        PowerMode::AllInputs => {
            let nv = d * d - 1;
            let gain = |x: &[f64]| {
                let v = unitary_from_params(d, &x[..nv], PhasePlacement::Left);
                let p = simplex_point(&x[nv..]);
                let before = mixed_populations(&abs2(&v), &p);
                let after = mixed_populations(&abs2(&(u.data() * &v)), &p);
                shannon_entropy(&after) - shannon_entropy(&before)
            };
            let mut domain = product_search_box(&[d]);
            domain.lower.extend(std::iter::repeat_n(-1.0, d));
            domain.upper.extend(std::iter::repeat_n(1.0, d));
            let fixed: Vec<Vec<f64>> = (0..d)
                .map(|j| {
                    let mut x = vec![0.0; nv + d];
                    x[nv + j] = 1.0;
                    x
                })
                .collect();
            let objective = |x: &[f64]| -gain(x);
            let run = multi_start(&objective, &domain, &fixed, config);
            MeasureReport {
                value: (-run.best.value).max(0.0),
                arg: Some(ReportArg::Params(run.best.x.clone())),
                restarts: run.restarts,
                iterations: run.total_iterations,
                final_step: run.best.final_step,
                converged: run.best.converged,
                seed: config.seed,
            }
        }
    }
}
