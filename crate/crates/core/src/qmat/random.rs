use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector, DensityMatrix, PureState, SubsystemShape, UnitaryMatrix};
use crate::error::{Error, Result};

/// Deterministic generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // column-major fill so the stream order matches the storage order
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// `G G^dag / Tr(G G^dag)` with `G` a `dim x rank` Ginibre matrix.
pub fn random_state<R: Rng + ?Sized>(
    shape: SubsystemShape,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let d = shape.dim();
    if rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} must lie in 1..={d}"
        )));
    }
    let g = ginibre(d, rank, rng);
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m.unscale_mut(tr);
    // exact hermitian symmetry, trace fixed to 1
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(DensityMatrix::from_parts(shape, m))
}

/// Uniformly random pure state (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(shape: SubsystemShape, rng: &mut R) -> Result<PureState> {
    let d = shape.dim();
    let v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
    PureState::normalized(shape, v)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        if n == 0.0 {
            return Err(Error::Construction("singular Ginibre sample".into()));
        }
        let phase = rjj / n;
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q)
}
