//! Dense complex linear algebra for multi-qudit operators.
//!
//! Operators are `nalgebra` dynamic matrices of `Complex64`. A
//! [`SubsystemShape`] attaches local dimensions and labels to an operator; the
//! basis index of a product ket is row-major in the label order, so for two
//! qubits the computational basis is `{|00>, |01>, |10>, |11>}`.

mod interchange;
mod random;

pub use interchange::{KrausDocument, MatrixDocument};
pub use random::{complex_gaussian, rng_from_seed, random_pure_state, random_state, random_unitary};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::LocalBasisAssignment;
use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Local dimensions and names of the subsystems an operator acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemShape {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemShape {
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if dims.is_empty() {
            return Err(Error::InvalidShape("no subsystems".into()));
        }
        if dims.len() != labels.len() {
            return Err(Error::InvalidShape(format!(
                "{} dims but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidShape(format!("subsystem {pos} has dimension 0")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidShape(format!("duplicate label `{l}`")));
            }
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidShape("total dimension overflows".into()))?;
        Ok(Self { dims, labels })
    }

    /// Labels `A`, `B`, `C`, ... for the given dimensions.
    pub fn with_default_labels(dims: Vec<usize>) -> Result<Self> {
        let labels = (0..dims.len()).map(default_label).collect::<Vec<_>>();
        Self::new(dims, labels)
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::with_default_labels(vec![dim])
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::with_default_labels(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn concat(&self, other: &SubsystemShape) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Self::new(dims, labels)
    }

    /// Shape restricted to the given subsystem positions (kept in original order).
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let mut positions = positions.to_vec();
        positions.sort_unstable();
        positions.dedup();
        let dims = positions.iter().map(|&p| self.dims[p]).collect();
        let labels = positions.iter().map(|&p| self.labels[p].clone()).collect::<Vec<_>>();
        Self::new(dims, labels)
    }

    /// Row-major strides: `index = sum_i digit_i * stride_i`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Decompose a global basis index into per-subsystem digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = index % self.dims[i];
            index /= self.dims[i];
        }
        out
    }
}

fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("S{i}")
    }
}

/// Hermitian, unit-trace, positive semidefinite operator on labelled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    shape: SubsystemShape,
    data: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity before accepting `data`.
    pub fn new(shape: SubsystemShape, data: CMatrix) -> Result<Self> {
        check_square(&data)?;
        if data.nrows() != shape.dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.dim(),
                actual: data.nrows(),
            });
        }
        let herm = hermiticity_error(&data);
        if herm > tol::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidTrace(tr.re));
        }
        let (evals, _) = eig_hermitian(&data)?;
        let min = evals.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol::PSD {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { shape, data })
    }

    /// Builds the matrix without validation. Callers guarantee the invariants.
    pub(crate) fn from_parts(shape: SubsystemShape, data: CMatrix) -> Self {
        debug_assert_eq!(shape.dim(), data.nrows());
        Self { shape, data }
    }

    /// Incoherent state with the given diagonal populations.
    pub fn from_diagonal(shape: SubsystemShape, populations: &[f64]) -> Result<Self> {
        if populations.len() != shape.dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.dim(),
                actual: populations.len(),
            });
        }
        let data = CMatrix::from_diagonal(&DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| Complex64::new(p, 0.0)),
        ));
        Self::new(shape, data)
    }

    pub fn maximally_mixed(shape: SubsystemShape) -> Self {
        let d = shape.dim();
        let data = CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
        Self { shape, data }
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Same matrix under new labels/dims with the same total dimension.
    pub fn relabel(&self, shape: SubsystemShape) -> Result<Self> {
        if shape.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: shape.dim(),
            });
        }
        Ok(Self {
            shape,
            data: self.data.clone(),
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)].re).collect()
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Kronecker product with concatenated subsystem shape.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            shape: self.shape.concat(&other.shape)?,
            data: kron(&self.data, &other.data),
        })
    }

    /// True when every off-diagonal entry has magnitude at most `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.data[(i, j)].norm() <= tol))
    }

    /// Elementwise max |self - other|.
    pub fn max_distance(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }
}

/// Normalized state vector on labelled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    shape: SubsystemShape,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(shape: SubsystemShape, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != shape.dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.dim(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm first.
    pub fn normalized(shape: SubsystemShape, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(shape, amplitudes.unscale(norm))
    }

    /// Computational basis ket `|index>`.
    pub fn basis(shape: SubsystemShape, index: usize) -> Result<Self> {
        let d = shape.dim();
        if index >= d {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {d}")));
        }
        let mut v = CVector::zeros(d);
        v[index] = ONE;
        Self::new(shape, v)
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix {
        let data = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_parts(self.shape.clone(), data)
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let a = &self.amplitudes;
        let b = &other.amplitudes;
        let mut v = CVector::zeros(a.len() * b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                v[i * b.len() + j] = a[i] * b[j];
            }
        }
        Ok(Self {
            shape: self.shape.concat(&other.shape)?,
            amplitudes: v,
        })
    }
}

/// Unitary matrix, optionally remembering a product factorisation `U1 x ... x UN`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    data: CMatrix,
    factors: Option<Vec<CMatrix>>,
}

impl UnitaryMatrix {
    pub fn new(data: CMatrix) -> Result<Self> {
        check_square(&data)?;
        let err = unitarity_error(&data);
        if err > tol::UNITARY {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self { data, factors: None })
    }

    /// Product unitary `factors[0] x factors[1] x ...`; each factor is validated.
    pub fn from_factors(factors: Vec<CMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("no factors".into()));
        }
        for f in &factors {
            check_square(f)?;
            let err = unitarity_error(f);
            if err > tol::UNITARY {
                return Err(Error::NotUnitary(err));
            }
        }
        let data = kron_all(&factors);
        Ok(Self {
            data,
            factors: Some(factors),
        })
    }

    pub(crate) fn from_parts(data: CMatrix) -> Self {
        Self { data, factors: None }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: CMatrix::identity(dim, dim),
            factors: None,
        }
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn factors(&self) -> Option<&[CMatrix]> {
        self.factors.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            factors: self
                .factors
                .as_ref()
                .map(|fs| fs.iter().map(|f| f.adjoint()).collect()),
        }
    }

    pub fn tensor(&self, other: &UnitaryMatrix) -> Self {
        let factors = match (&self.factors, &other.factors) {
            (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).cloned().collect()),
            _ => None,
        };
        Self {
            data: kron(&self.data, &other.data),
            factors,
        }
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.amplitudes.len(),
            });
        }
        PureState::normalized(psi.shape.clone(), &self.data * &psi.amplitudes)
    }
}

pub(crate) fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut err = 0.0f64;
    for i in 0..n {
        for j in i..n {
            err = err.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    err
}

pub fn unitarity_error(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    max_abs_diff(&prod, &CMatrix::identity(m.nrows(), m.ncols()))
}

/// Kronecker product `a x b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all(ms: &[CMatrix]) -> CMatrix {
    let mut it = ms.iter();
    let first = it.next().cloned().unwrap_or_else(|| CMatrix::identity(1, 1));
    it.fold(first, |acc, m| kron(&acc, m))
}

/// Reduced state after tracing out `traced` subsystems.
pub fn partial_trace(rho: &DensityMatrix, traced: &[&str]) -> Result<DensityMatrix> {
    let shape = rho.shape();
    let mut traced_pos = Vec::with_capacity(traced.len());
    for label in traced {
        let p = shape.position(label)?;
        if !traced_pos.contains(&p) {
            traced_pos.push(p);
        }
    }
    if traced_pos.len() == shape.len() {
        return Err(Error::TraceAll);
    }
    let keep_pos: Vec<usize> = (0..shape.len()).filter(|p| !traced_pos.contains(p)).collect();
    traced_pos.sort_unstable();
    Ok(reduce(rho, &keep_pos, &traced_pos))
}

/// Reduced state on the listed labels, in the original label order.
pub fn marginal(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    let shape = rho.shape();
    let mut keep_pos = Vec::with_capacity(keep.len());
    for label in keep {
        keep_pos.push(shape.position(label)?);
    }
    keep_pos.sort_unstable();
    keep_pos.dedup();
    if keep_pos.is_empty() {
        return Err(Error::TraceAll);
    }
    let traced_pos: Vec<usize> = (0..shape.len()).filter(|p| !keep_pos.contains(p)).collect();
    Ok(reduce(rho, &keep_pos, &traced_pos))
}

fn reduce(rho: &DensityMatrix, keep_pos: &[usize], traced_pos: &[usize]) -> DensityMatrix {
    let shape = rho.shape();
    let strides = shape.strides();
    let kept_shape = shape.restrict(keep_pos).expect("restriction of a valid shape");
    if traced_pos.is_empty() {
        return DensityMatrix::from_parts(kept_shape, rho.data().clone());
    }
    let keep_dims: Vec<usize> = keep_pos.iter().map(|&p| shape.dims()[p]).collect();
    let trace_dims: Vec<usize> = traced_pos.iter().map(|&p| shape.dims()[p]).collect();
    let offsets = |positions: &[usize], dims: &[usize]| -> Vec<usize> {
        let n: usize = dims.iter().product();
        (0..n)
            .map(|mut idx| {
                let mut off = 0;
                for k in (0..dims.len()).rev() {
                    off += (idx % dims[k]) * strides[positions[k]];
                    idx /= dims[k];
                }
                off
            })
            .collect()
    };
    let keep_off = offsets(keep_pos, &keep_dims);
    let trace_off = offsets(traced_pos, &trace_dims);
    let n = keep_off.len();
    let data = rho.data();
    let mut out = CMatrix::zeros(n, n);
    for (a, &ka) in keep_off.iter().enumerate() {
        for (b, &kb) in keep_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &trace_off {
                acc += data[(ka + t, kb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    DensityMatrix::from_parts(kept_shape, out)
}

/// Completely dephased state `sum_k <B_k|rho|B_k> |B_k><B_k|`, expressed in the
/// computational frame.
pub fn dephase(rho: &DensityMatrix, basis: &LocalBasisAssignment) -> Result<DensityMatrix> {
    basis.check_shape(rho.shape())?;
    match basis.full_matrix() {
        None => {
            let d = rho.dim();
            let mut out = CMatrix::zeros(d, d);
            for i in 0..d {
                out[(i, i)] = Complex64::new(rho.data()[(i, i)].re, 0.0);
            }
            Ok(DensityMatrix::from_parts(rho.shape().clone(), out))
        }
        Some(w) => {
            let probs = populations_in(rho.data(), &w);
            let diag = CMatrix::from_diagonal(&DVector::from_iterator(
                probs.len(),
                probs.iter().map(|&p| Complex64::new(p, 0.0)),
            ));
            let out = &w * diag * w.adjoint();
            Ok(DensityMatrix::from_parts(rho.shape().clone(), out))
        }
    }
}

/// Diagonal of `w^dag m w` (real parts).
pub(crate) fn populations_in(m: &CMatrix, w: &CMatrix) -> Vec<f64> {
    let mw = m * w;
    (0..w.ncols())
        .map(|k| {
            let mut acc = ZERO;
            for i in 0..w.nrows() {
                acc += w[(i, k)].conj() * mw[(i, k)];
            }
            acc.re
        })
        .collect()
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
pub fn eig_hermitian(m: &CMatrix) -> Result<(DVector<f64>, UnitaryMatrix)> {
    check_square(m)?;
    let herm = hermiticity_error(m);
    if herm > tol::HERMITIAN {
        return Err(Error::NotHermitian(herm));
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, UnitaryMatrix::from_parts(vectors)))
}

/// Eigenvalues clipped into `[0, 1]` for entropy evaluation.
pub fn spectrum(rho: &DensityMatrix) -> Vec<f64> {
    let (values, _) = eig_hermitian(rho.data()).expect("density matrices are Hermitian");
    values.iter().map(|&v| v.clamp(0.0, 1.0)).collect()
}

/// Shannon entropy in bits of a probability vector, `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&spectrum(rho))
}

/// Quantum relative entropy `S(rho||sigma)` in bits; `+inf` when the support
/// of `rho` is not contained in the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let (sigma_vals, sigma_vecs) = eig_hermitian(sigma.data())?;
    let weights = populations_in(rho.data(), sigma_vecs.data());
    let mut cross = 0.0;
    for (&s, &w) in sigma_vals.iter().zip(weights.iter()) {
        if s <= tol::SUPPORT {
            if w > tol::SUPPORT {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += w * s.log2();
    }
    let value = -entropy(rho) - cross;
    Ok(value.max(0.0))
}

/// `U rho U^dag`.
pub fn conjugate(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: u.dim(),
        });
    }
    let out = u.data() * rho.data() * u.data().adjoint();
    Ok(DensityMatrix::from_parts(rho.shape().clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus() -> DensityMatrix {
        let h = 0.5;
        DensityMatrix::new(
            SubsystemShape::single(2).unwrap(),
            dmatrix![c(h), c(h); c(h), c(h)],
        )
        .unwrap()
    }

    fn diag(p: &[f64], labels: &[&str]) -> DensityMatrix {
        let dims = vec![2; labels.len()];
        DensityMatrix::from_diagonal(SubsystemShape::new(dims, labels.to_vec()).unwrap(), p).unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4, 4));
    }

    #[test]
    fn tensor_orders_left_label_most_significant() {
        let a = diag(&[1.0, 0.0], &["A"]);
        let b = diag(&[0.0, 1.0], &["B"]);
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.diagonal(), vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(ab.shape().labels(), &["A".to_string(), "B".to_string()]);
    }

    #[test]
    fn tensor_plus_with_zero() {
        let zero = diag(&[1.0, 0.0], &["B"]);
        let m = plus().tensor(&zero).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if [0, 2].contains(&i) && [0, 2].contains(&j) { 0.5 } else { 0.0 };
                assert_eq!(m.data()[(i, j)], c(expect));
            }
        }
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        assert!(plus().tensor(&plus()).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = plus();
        let b = diag(&[0.3, 0.7], &["B"]);
        let ab = a.tensor(&b).unwrap();
        let back = partial_trace(&ab, &["B"]).unwrap();
        assert!(back.max_distance(&a) < 1e-12);
        let other = partial_trace(&ab, &["A"]).unwrap();
        assert!(other.max_distance(&b) < 1e-12);
    }

    #[test]
    fn partial_trace_of_ghz_and_bell() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::zeros(8);
        v[0] = c(s);
        v[7] = c(s);
        let ghz = PureState::new(SubsystemShape::qubits(3).unwrap(), v).unwrap().to_density();
        let ab = partial_trace(&ghz, &["C"]).unwrap();
        let expect = CMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), ZERO, ZERO, c(0.5)]));
        assert!(max_abs_diff(ab.data(), &expect) < 1e-15);

        let mut v = CVector::zeros(4);
        v[0] = c(s);
        v[3] = c(s);
        let bell = PureState::new(SubsystemShape::qubits(2).unwrap(), v).unwrap().to_density();
        let a = partial_trace(&bell, &["B"]).unwrap();
        assert!(max_abs_diff(a.data(), &(CMatrix::identity(2, 2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let ab = plus().tensor(&diag(&[1.0, 0.0], &["B"])).unwrap();
        assert!(matches!(partial_trace(&ab, &["Z"]), Err(Error::UnknownLabel(_))));
        assert!(matches!(partial_trace(&ab, &["A", "B"]), Err(Error::TraceAll)));
    }

    #[test]
    fn partial_trace_middle_subsystem_uneven_dims() {
        let mut rng = rng_from_seed(11);
        let a = random_state(SubsystemShape::new(vec![2], vec!["A"]).unwrap(), 2, &mut rng).unwrap();
        let b = random_state(SubsystemShape::new(vec![3], vec!["B"]).unwrap(), 3, &mut rng).unwrap();
        let cc = random_state(SubsystemShape::new(vec![2], vec!["C"]).unwrap(), 1, &mut rng).unwrap();
        let abc = a.tensor(&b).unwrap().tensor(&cc).unwrap();
        let ac = partial_trace(&abc, &["B"]).unwrap();
        let expect = a.tensor(&cc).unwrap();
        assert!(ac.max_distance(&expect) < 1e-12);
        assert_eq!(ac.shape().dims(), &[2, 2]);
    }

    #[test]
    fn dephase_examples() {
        let d = diag(&[0.2, 0.8], &["A"]);
        let out = dephase(&d, &LocalBasisAssignment::Computational).unwrap();
        assert!(out.max_distance(&d) < 1e-15);

        let out = dephase(&plus(), &LocalBasisAssignment::Computational).unwrap();
        assert!(max_abs_diff(out.data(), &(CMatrix::identity(2, 2) * c(0.5))) < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pm = dmatrix![c(s), c(s); c(s), c(-s)];
        let basis = LocalBasisAssignment::product(vec![pm]).unwrap();
        let out = dephase(&plus(), &basis).unwrap();
        assert!(out.max_distance(&plus()) < 1e-15);
    }

    #[test]
    fn dephase_rejects_mismatched_basis() {
        let basis = LocalBasisAssignment::product(vec![CMatrix::identity(3, 3)]).unwrap();
        assert!(dephase(&plus(), &basis).is_err());
    }

    #[test]
    fn eig_examples() {
        let (v, _) = eig_hermitian(&dmatrix![c(0.3), ZERO; ZERO, c(0.7)]).unwrap();
        assert!((v[0] - 0.3).abs() < 1e-15 && (v[1] - 0.7).abs() < 1e-15);

        let (v, _) = eig_hermitian(plus().data()).unwrap();
        assert!(v[0].abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);

        let m = dmatrix![c(0.5), c(0.5); c(0.5), c(0.5)];
        let (_, u) = eig_hermitian(&m).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // first eigenvector is |->, second is |+>, each up to a phase
        let minus = CVector::from_vec(vec![c(s), c(-s)]);
        let plus_v = CVector::from_vec(vec![c(s), c(s)]);
        assert!((u.data().column(0).dotc(&minus).norm() - 1.0).abs() < 1e-12);
        assert!((u.data().column(1).dotc(&plus_v).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = dmatrix![c(1.0), c(1.0); ZERO, c(1.0)];
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = rng_from_seed(3);
        for d in 2..=8 {
            let rho = random_state(SubsystemShape::single(d).unwrap(), d, &mut rng).unwrap();
            let (vals, vecs) = eig_hermitian(rho.data()).unwrap();
            let lam = CMatrix::from_diagonal(&vals.map(|x| Complex64::new(x, 0.0)));
            let back = vecs.data() * lam * vecs.data().adjoint();
            assert!(max_abs_diff(&back, rho.data()) < 1e-9);
            assert!(vals.as_slice().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn entropy_examples() {
        assert!(entropy(&plus()).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(SubsystemShape::qubits(2).unwrap());
        assert!((entropy(&mixed) - 2.0).abs() < 1e-12);
        let half = diag(&[0.5, 0.5, 0.0, 0.0], &["A", "B"]);
        assert!((entropy(&half) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let p = plus();
        assert!(relative_entropy(&p, &p).unwrap().abs() < 1e-9);
        let mixed = DensityMatrix::maximally_mixed(SubsystemShape::single(2).unwrap());
        assert!((relative_entropy(&p, &mixed).unwrap() - 1.0).abs() < 1e-12);
        let zero = diag(&[1.0, 0.0], &["A"]);
        let one = diag(&[0.0, 1.0], &["A"]);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        let three = DensityMatrix::maximally_mixed(SubsystemShape::single(3).unwrap());
        assert!(relative_entropy(&p, &three).is_err());
    }

    #[test]
    fn conjugate_identity_is_noop() {
        let rho = plus();
        let out = conjugate(&rho, &UnitaryMatrix::identity(2)).unwrap();
        assert!(out.max_distance(&rho) < 1e-15);
        assert!(conjugate(&rho, &UnitaryMatrix::identity(4)).is_err());
    }

    #[test]
    fn density_validation_errors() {
        let shape = SubsystemShape::single(2).unwrap();
        let bad_trace = dmatrix![c(1.0), ZERO; ZERO, c(1.0)];
        assert!(matches!(DensityMatrix::new(shape.clone(), bad_trace), Err(Error::InvalidTrace(_))));
        let not_psd = dmatrix![c(1.5), ZERO; ZERO, c(-0.5)];
        assert!(matches!(DensityMatrix::new(shape.clone(), not_psd), Err(Error::NotPsd(_))));
        let not_herm = dmatrix![c(0.5), c(0.1); ZERO, c(0.5)];
        assert!(matches!(DensityMatrix::new(shape.clone(), not_herm), Err(Error::NotHermitian(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(DensityMatrix::new(shape, rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn shape_validation() {
        assert!(SubsystemShape::new(vec![2, 2], vec!["A", "A"]).is_err());
        assert!(SubsystemShape::new(vec![2, 0], vec!["A", "B"]).is_err());
        assert!(SubsystemShape::new(vec![2], vec!["A", "B"]).is_err());
        let s = SubsystemShape::new(vec![2, 3, 2], vec!["A", "B", "C"]).unwrap();
        assert_eq!(s.dim(), 12);
        assert_eq!(s.strides(), vec![6, 2, 1]);
        assert_eq!(s.digits(11), vec![1, 2, 1]);
    }
}
