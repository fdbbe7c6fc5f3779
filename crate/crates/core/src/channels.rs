//! Incoherent operations.
//!
//! A Kraus operator `K` maps every incoherent (diagonal) state to an
//! incoherent state iff each of its columns holds at most one nonzero entry.
//! For an `s x t` operator that leaves `s^t` possible placements of the
//! nonzero entries; [`StructureMask`] names one placement.
//!
//! The validator accepts rectangular operators. Channel application needs
//! square operators matching the state dimension.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::basis::LocalBasisAssignment;
use crate::error::{Error, Result};
use crate::measures::coherence_rel_entropy;
use crate::qmat::{
    complex_gaussian, max_abs_diff, random_state, CMatrix, DensityMatrix, KrausDocument,
    MatrixDocument, SubsystemShape, ZERO,
};
use crate::tol;

/// Whether a Kraus set has been checked against the column-structure rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    Yes,
    No,
    Unchecked,
}

/// Complete set of equally shaped Kraus operators, `sum_n K_n^dag K_n = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
    certification: Certification,
}

impl KrausSet {
    /// Checks shapes and completeness; the set starts out `Unchecked`.
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
        let shape = first.shape();
        if let Some(bad) = operators.iter().find(|k| k.shape() != shape) {
            return Err(Error::InvalidShape(format!(
                "Kraus operators disagree in shape: {:?} vs {:?}",
                shape,
                bad.shape()
            )));
        }
        let err = completeness_error(&operators);
        if err > tol::KRAUS_COMPLETENESS {
            return Err(Error::IncompleteKraus(err));
        }
        Ok(Self {
            operators,
            certification: Certification::Unchecked,
        })
    }

    /// [`KrausSet::new`] followed by [`KrausSet::certify`].
    pub fn certified(operators: Vec<CMatrix>) -> Result<Self> {
        let mut set = Self::new(operators)?;
        set.certify();
        Ok(set)
    }

    /// Runs the column check on every operator and records the outcome.
    pub fn certify(&mut self) -> Certification {
        let ok = self
            .operators
            .iter()
            .all(|k| is_incoherent_kraus(k, tol::KRAUS_NONZERO).incoherent);
        self.certification = if ok { Certification::Yes } else { Certification::No };
        self.certification
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    pub fn is_certified_incoherent(&self) -> bool {
        self.certification == Certification::Yes
    }

    /// `(rows, cols)` shared by all operators.
    pub fn operator_shape(&self) -> (usize, usize) {
        self.operators[0].shape()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Loads and certifies; any flag stored in the document is ignored.
    pub fn from_document(doc: &KrausDocument) -> Result<Self> {
        Self::certified(doc.to_matrices()?)
    }

    pub fn to_document(&self) -> KrausDocument {
        KrausDocument {
            operators: self
                .operators
                .iter()
                .map(|k| MatrixDocument::from_matrix(k, None))
                .collect(),
            certified_incoherent: match self.certification {
                Certification::Yes => Some(true),
                Certification::No => Some(false),
                Certification::Unchecked => None,
            },
        }
    }
}

/// Max elementwise `|sum_n K_n^dag K_n - I|`.
pub fn completeness_error(operators: &[CMatrix]) -> f64 {
    let t = operators[0].ncols();
    let mut sum = CMatrix::zeros(t, t);
    for k in operators {
        sum += k.adjoint() * k;
    }
    max_abs_diff(&sum, &CMatrix::identity(t, t))
}

/// Result of the column scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IncoherenceCheck {
    pub incoherent: bool,
    /// First column with two or more entries above tolerance.
    pub offending_column: Option<usize>,
}

/// True iff every column of `k` has at most one entry with magnitude > `tol`.
pub fn is_incoherent_kraus(k: &CMatrix, tol: f64) -> IncoherenceCheck {
    for j in 0..k.ncols() {
        let nonzero = k.column(j).iter().filter(|z| z.norm() > tol).count();
        if nonzero > 1 {
            return IncoherenceCheck {
                incoherent: false,
                offending_column: Some(j),
            };
        }
    }
    IncoherenceCheck {
        incoherent: true,
        offending_column: None,
    }
}

/// A basis state `|column><column|` that `K` maps to a coherent output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceWitness {
    pub column: usize,
    /// Output entry `(row_a, row_b)` with `row_a != row_b`.
    pub rows: (usize, usize),
    pub off_diagonal: f64,
}

/// Constructs the witness for a rejected operator: the input `|j><j|` for the
/// offending column `j` produces the output entry `k_aj conj(k_bj)`, taken at
/// the pair of rows where it is largest.
pub fn coherence_witness(k: &CMatrix, tol: f64) -> Option<CoherenceWitness> {
    let j = is_incoherent_kraus(k, tol).offending_column?;
    let col = k.column(j);
    let mut best: Option<CoherenceWitness> = None;
    for a in 0..col.len() {
        for b in 0..col.len() {
            if a == b {
                continue;
            }
            let mag = (col[a] * col[b].conj()).norm();
            if best.is_none_or(|w| mag > w.off_diagonal) {
                best = Some(CoherenceWitness {
                    column: j,
                    rows: (a, b),
                    off_diagonal: mag,
                });
            }
        }
    }
    best
}

/// `K diag(populations) K^dag`, for any rectangular `K`.
pub fn map_diagonal(k: &CMatrix, populations: &[f64]) -> CMatrix {
    assert_eq!(k.ncols(), populations.len());
    let mut scaled = k.clone();
    for (j, &p) in populations.iter().enumerate() {
        scaled.column_mut(j).scale_mut(p);
    }
    scaled * k.adjoint()
}

/// Placement of the single permitted nonzero entry in each column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StructureMask {
    rows: Vec<usize>,
}

impl StructureMask {
    pub fn new(rows: Vec<usize>, s: usize) -> Result<Self> {
        if let Some(&r) = rows.iter().find(|&&r| r >= s) {
            return Err(Error::InvalidArgument(format!("row {r} out of range for {s} rows")));
        }
        Ok(Self { rows })
    }

    /// `rows()[j]` is the row of the nonzero entry in column `j`.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn columns(&self) -> usize {
        self.rows.len()
    }

    /// A matrix with this structure and the given column values.
    pub fn fill(&self, s: usize, values: &[num_complex::Complex64]) -> CMatrix {
        assert_eq!(values.len(), self.rows.len());
        let mut m = CMatrix::zeros(s, self.rows.len());
        for (j, (&r, &v)) in self.rows.iter().zip(values).enumerate() {
            m[(r, j)] = v;
        }
        m
    }
}

const STRUCTURE_COUNT_CAP: u64 = 1 << 62;
const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Number of column structures of an `s x t` incoherent Kraus operator, `s^t`.
pub fn structure_count(s: usize, t: usize) -> Result<u64> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidArgument("s and t must be positive".into()));
    }
    let exp = u32::try_from(t).map_err(|_| Error::BudgetExceeded(format!("{s}^{t}")))?;
    (s as u64)
        .checked_pow(exp)
        .filter(|&n| n <= STRUCTURE_COUNT_CAP)
        .ok_or_else(|| Error::BudgetExceeded(format!("{s}^{t} exceeds 2^62")))
}

/// Every structure of an `s x t` operator in lexicographic order of
/// `(r_0, r_1, ...)`.
pub fn enumerate_structures(s: usize, t: usize) -> Result<StructureIter> {
    let count = structure_count(s, t)?;
    if count > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{count} structures exceed the enumeration budget of {ENUMERATION_BUDGET}"
        )));
    }
    Ok(StructureIter {
        s,
        next: Some(vec![0; t]),
    })
}

#[derive(Debug, Clone)]
pub struct StructureIter {
    s: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for StructureIter {
    type Item = StructureMask;

    fn next(&mut self) -> Option<StructureMask> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        while pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.s {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(StructureMask { rows: current })
    }
}

fn check_channel_shape(rho: &DensityMatrix, ks: &KrausSet) -> Result<()> {
    let (s, t) = ks.operator_shape();
    if s != t {
        return Err(Error::NotSquare { rows: s, cols: t });
    }
    if t != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: t,
        });
    }
    Ok(())
}

fn sandwich(k: &CMatrix, rho: &CMatrix) -> CMatrix {
    let out = k * rho * k.adjoint();
    (&out + out.adjoint()) * num_complex::Complex64::new(0.5, 0.0)
}

/// Non-selective map `sum_n K_n rho K_n^dag`.
pub fn apply_channel(rho: &DensityMatrix, ks: &KrausSet) -> Result<DensityMatrix> {
    check_channel_shape(rho, ks)?;
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in ks.operators() {
        out += sandwich(k, rho.data());
    }
    Ok(DensityMatrix::from_parts(rho.shape().clone(), out))
}

/// One branch of a selective map. `state` is `None` for null outcomes
/// (`probability <= 1e-12`).
#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveOutcome {
    pub probability: f64,
    pub state: Option<DensityMatrix>,
}

/// Selective map: `p_n = Tr[K_n rho K_n^dag]`, `rho_n = K_n rho K_n^dag / p_n`.
pub fn apply_selective(rho: &DensityMatrix, ks: &KrausSet) -> Result<Vec<SelectiveOutcome>> {
    check_channel_shape(rho, ks)?;
    Ok(ks
        .operators()
        .iter()
        .map(|k| {
            let unnormalized = sandwich(k, rho.data());
            let p = unnormalized.trace().re;
            let state = (p > tol::NULL_OUTCOME).then(|| {
                DensityMatrix::from_parts(rho.shape().clone(), unnormalized.unscale(p))
            });
            SelectiveOutcome {
                probability: p.max(0.0),
                state,
            }
        })
        .collect())
}

const KRAUS_RETRIES: usize = 8;

/// Random complete incoherent Kraus set on a `dim`-dimensional system.
///
/// Each operator gets a random permutation structure filled with complex
/// Gaussians; columns are then rescaled jointly so that
/// `sum_n |[K_n]_{r_j, j}|^2 = 1`, which makes the set exactly complete.
pub fn random_incoherent_kraus_set<R: Rng + ?Sized>(
    dim: usize,
    n_ops: usize,
    rng: &mut R,
) -> Result<KrausSet> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if n_ops < dim {
        return Err(Error::InvalidArgument(format!(
            "need at least {dim} operators, got {n_ops}"
        )));
    }
    for _ in 0..KRAUS_RETRIES {
        let mut ops: Vec<CMatrix> = (0..n_ops)
            .map(|_| {
                let mut perm: Vec<usize> = (0..dim).collect();
                for i in (1..dim).rev() {
                    let j = rng.random_range(0..=i);
                    perm.swap(i, j);
                }
                let values: Vec<_> = (0..dim).map(|_| complex_gaussian(rng)).collect();
                StructureMask { rows: perm }.fill(dim, &values)
            })
            .collect();
        let weights: Vec<f64> = (0..dim)
            .map(|j| ops.iter().map(|k| k.column(j).norm_squared()).sum())
            .collect();
        if weights.iter().any(|&w| !(w > 1e-300) || !w.is_finite()) {
            continue;
        }
        for k in &mut ops {
            for (j, &w) in weights.iter().enumerate() {
                k.column_mut(j).unscale_mut(w.sqrt());
            }
        }
        let set = KrausSet::certified(ops)?;
        if set.is_certified_incoherent() {
            return Ok(set);
        }
    }
    Err(Error::Construction(format!(
        "no incoherent Kraus set after {KRAUS_RETRIES} attempts"
    )))
}

/// Random `s x t` matrix with a random column structure and Gaussian values.
pub fn random_structured_matrix<R: Rng + ?Sized>(s: usize, t: usize, rng: &mut R) -> CMatrix {
    let rows = (0..t).map(|_| rng.random_range(0..s)).collect();
    let values: Vec<_> = (0..t).map(|_| complex_gaussian(rng)).collect();
    StructureMask { rows }.fill(s, &values)
}

/// Coherence bookkeeping for the resource-theory conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub coherence: f64,
    /// Whether `rho` is diagonal within 1e-9.
    pub incoherent_input: bool,
    /// `C(rho) = 0` exactly when `rho` is diagonal (within 1e-9).
    pub c1_holds: bool,
    /// `C(rho) - C(Phi(rho))`.
    pub c2a_gap: f64,
    /// `C(rho) - sum_n p_n C(rho_n)`.
    pub c2b_gap: f64,
    /// `sum_n p_n C(sigma_n) - C(sum_n p_n sigma_n)` for a supplied ensemble.
    pub c3_gap: Option<f64>,
}

pub const MONOTONICITY_TOL: f64 = 1e-8;
const C1_TOL: f64 = 1e-9;

impl MonotonicityReport {
    /// Every recorded gap is above `-1e-8` and C1 holds.
    pub fn all_hold(&self) -> bool {
        self.c1_holds
            && self.c2a_gap >= -MONOTONICITY_TOL
            && self.c2b_gap >= -MONOTONICITY_TOL
            && self.c3_gap.is_none_or(|g| g >= -MONOTONICITY_TOL)
    }
}

/// Evaluates C1, C2a, C2b and (given an ensemble) C3 for the relative entropy
/// of coherence in the computational basis. Refuses uncertified sets.
pub fn monotonicity_suite(
    rho: &DensityMatrix,
    ks: &KrausSet,
    ensemble: Option<&[(f64, DensityMatrix)]>,
) -> Result<MonotonicityReport> {
    if !ks.is_certified_incoherent() {
        return Err(Error::UncertifiedKraus);
    }
    let comp = LocalBasisAssignment::Computational;
    let c = coherence_rel_entropy(rho, &comp)?;
    let incoherent_input = rho.is_diagonal(C1_TOL);
    let c1_holds = (c <= C1_TOL) == incoherent_input;
    let c2a_gap = c - coherence_rel_entropy(&apply_channel(rho, ks)?, &comp)?;
    let mut averaged = 0.0;
    for outcome in apply_selective(rho, ks)? {
        if let Some(state) = &outcome.state {
            averaged += outcome.probability * coherence_rel_entropy(state, &comp)?;
        }
    }
    let c3_gap = ensemble.map(convexity_gap).transpose()?;
    Ok(MonotonicityReport {
        coherence: c,
        incoherent_input,
        c1_holds,
        c2a_gap,
        c2b_gap: c - averaged,
        c3_gap,
    })
}

/// `sum_n p_n C(sigma_n) - C(sum_n p_n sigma_n)`; weights must sum to 1.
pub fn convexity_gap(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    let (_, first) = ensemble
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > 1e-12 || ensemble.iter().any(|(p, _)| *p < 0.0) {
        return Err(Error::InvalidArgument(format!("ensemble weights sum to {total}")));
    }
    let comp = LocalBasisAssignment::Computational;
    let d = first.dim();
    let mut mix = CMatrix::from_element(d, d, ZERO);
    let mut averaged = 0.0;
    for (p, state) in ensemble {
        if state.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: state.dim(),
            });
        }
        mix += state.data() * num_complex::Complex64::new(*p, 0.0);
        averaged += p * coherence_rel_entropy(state, &comp)?;
    }
    let mixed = DensityMatrix::from_parts(first.shape().clone(), mix);
    Ok(averaged - coherence_rel_entropy(&mixed, &comp)?)
}

/// Default convexity harness: `n` random rank-2 two-qubit states with
/// flat-Dirichlet weights.
pub fn random_ensemble<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<(f64, DensityMatrix)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ensemble size must be positive".into()));
    }
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| Ok((w / total, random_state(SubsystemShape::qubits(2)?, 2, rng)?)))
        .collect()
}
