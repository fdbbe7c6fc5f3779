//! Coherence and correlation measures.
//!
//! - relative entropy of coherence `C(rho) = S(dephase(rho)) - S(rho)`;
//! - l1 coherence (sum of off-diagonal magnitudes);
//! - basis-free coherence, the minimum of `C(U rho U^dag)` over product
//!   unitaries `U = U_1 x ... x U_N`;
//! - relative-entropy discord, the minimum over product orthonormal bases of
//!   the measurement entropy `H(p) - S(rho)` with `p_k = <B(k)|rho|B(k)>`.
//!
//! The last two coincide mathematically. They are computed along separate
//! paths (conjugation of `rho` versus direct evaluation of product kets, with
//! different unitary parameterisations) so that each can check the other.

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::basis::LocalBasisAssignment;
use crate::error::{Error, Result};
use crate::optim::{multi_start, OptimizerConfig};
use crate::param::{product_factors, product_param_count, product_search_box, PhasePlacement};
use crate::qmat::{
    dephase, eig_hermitian, entropy, kron_all, marginal, shannon_entropy, CMatrix,
    CVector, DensityMatrix, PureState, ZERO,
};
use crate::tol;

/// Optimum location reported alongside a value.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportArg {
    Params(Vec<f64>),
    Basis(LocalBasisAssignment),
}

impl Serialize for ReportArg {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Params(p) => p.serialize(serializer),
            Self::Basis(b) => b.to_document().serialize(serializer),
        }
    }
}

/// A computed value plus optimizer metadata.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct MeasureReport {
    pub value: f64,
    pub arg: Option<ReportArg>,
    pub restarts: usize,
    pub iterations: usize,
    pub final_step: f64,
    pub converged: bool,
    pub seed: u64,
}

impl MeasureReport {
    /// A closed-form or exact value with no optimizer involved.
    pub fn exact(value: f64, arg: Option<ReportArg>, seed: u64) -> Self {
        Self {
            value,
            arg,
            restarts: 0,
            iterations: 0,
            final_step: 0.0,
            converged: true,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Relative entropy of coherence in `basis`, in bits.
pub fn coherence_rel_entropy(rho: &DensityMatrix, basis: &LocalBasisAssignment) -> Result<f64> {
    let dephased = dephase(rho, basis)?;
    Ok((entropy(&dephased) - entropy(rho)).max(0.0))
}

/// `C` from populations in the frame and a precomputed `S(rho)`.
pub(crate) fn coherence_from_populations(populations: &[f64], state_entropy: f64) -> f64 {
    (shannon_entropy(populations) - state_entropy).max(0.0)
}

/// Relative entropy of coherence in the computational basis.
pub fn coherence(rho: &DensityMatrix) -> f64 {
    coherence_from_populations(&rho.diagonal(), entropy(rho))
}

/// Sum of off-diagonal magnitudes of `rho` written in `basis`.
pub fn coherence_l1(rho: &DensityMatrix, basis: &LocalBasisAssignment) -> Result<f64> {
    basis.check_shape(rho.shape())?;
    let m = match basis.full_matrix() {
        None => rho.data().clone(),
        Some(w) => w.adjoint() * rho.data() * &w,
    };
    let d = m.nrows();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)].norm();
            }
        }
    }
    Ok(sum)
}

/// Diagonal of `U rho U^dag` without forming the full product.
pub(crate) fn conjugated_diagonal(rho: &CMatrix, u: &CMatrix) -> Vec<f64> {
    let t = u * rho;
    (0..u.nrows())
        .map(|i| {
            let mut acc = ZERO;
            for k in 0..u.ncols() {
                acc += t[(i, k)] * u[(i, k)].conj();
            }
            acc.re
        })
        .collect()
}

/// Minimum of `C(U rho U^dag)` over product unitaries.
///
/// The reported `arg` is the optimal [`LocalBasisAssignment`] (factor columns
/// `U_i^dag e_k`), so `coherence_rel_entropy(rho, arg)` reproduces `value`.
/// The first restart starts at the identity, which guarantees
/// `value <= C(rho, computational)`.
pub fn basis_free_coherence(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureReport> {
    let dims = rho.shape().dims().to_vec();
    let s_rho = entropy(rho);
    if dims.len() == 1 {
        // a single factor can always be rotated into the eigenbasis
        let (_, vecs) = eig_hermitian(rho.data())?;
        let basis = LocalBasisAssignment::Product(vec![vecs.data().clone()]);
        let value = coherence_rel_entropy(rho, &basis)?;
        return Ok(MeasureReport::exact(value, Some(ReportArg::Basis(basis)), config.seed));
    }
    let data = rho.data().clone();
    let objective = |p: &[f64]| {
        let factors = product_factors(&dims, p, PhasePlacement::Right);
        let u = kron_all(&factors);
        coherence_from_populations(&conjugated_diagonal(&data, &u), s_rho)
    };
    let domain = product_search_box(&dims);
    let identity = vec![0.0; product_param_count(&dims)];
    let run = multi_start(&objective, &domain, &[identity], config);
    let factors = product_factors(&dims, &run.best.x, PhasePlacement::Right);
    let basis = LocalBasisAssignment::Product(factors.iter().map(|u| u.adjoint()).collect());
    Ok(MeasureReport {
        value: run.best.value.max(0.0),
        arg: Some(ReportArg::Basis(basis)),
        restarts: run.restarts,
        iterations: run.total_iterations,
        final_step: run.best.final_step,
        converged: run.best.converged,
        seed: config.seed,
    })
}

/// Measurement populations `<B(k)|rho|B(k)>` for the product basis whose local
/// kets are the columns of `factors`, built ket by ket.
pub(crate) fn product_basis_populations(rho: &CMatrix, factors: &[CMatrix]) -> Vec<f64> {
    let dims: Vec<usize> = factors.iter().map(|f| f.nrows()).collect();
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for _ in 0..total {
        let mut ket = CVector::from_element(1, crate::qmat::ONE);
        for (f, &k) in factors.iter().zip(&digits) {
            let col = f.column(k);
            let mut next = CVector::zeros(ket.len() * col.len());
            for (i, a) in ket.iter().enumerate() {
                for (j, b) in col.iter().enumerate() {
                    next[i * col.len() + j] = a * b;
                }
            }
            ket = next;
        }
        out.push((ket.adjoint() * rho * &ket)[(0, 0)].re);
        for pos in (0..dims.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < dims[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    out
}

/// Relative-entropy discord: minimum over product orthonormal bases of
/// `H({<B(k)|rho|B(k)>}) - S(rho)`.
///
/// The reported `arg` is the optimal basis.
pub fn discord_rel_entropy(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureReport> {
    let dims = rho.shape().dims().to_vec();
    let s_rho = entropy(rho);
    let data = rho.data().clone();
    let objective = |p: &[f64]| {
        let factors = product_factors(&dims, p, PhasePlacement::Left);
        shannon_entropy(&product_basis_populations(&data, &factors)) - s_rho
    };
    let domain = product_search_box(&dims);
    let identity = vec![0.0; product_param_count(&dims)];
    let run = multi_start(&objective, &domain, &[identity], config);
    let factors = product_factors(&dims, &run.best.x, PhasePlacement::Left);
    Ok(MeasureReport {
        value: run.best.value.max(0.0),
        arg: Some(ReportArg::Basis(LocalBasisAssignment::Product(factors))),
        restarts: run.restarts,
        iterations: run.total_iterations,
        final_step: run.best.final_step,
        converged: run.best.converged,
        seed: config.seed,
    })
}

/// Entanglement entropy of a pure state across `block | rest`.
pub fn entanglement_pure(psi: &PureState, block: &[&str]) -> Result<f64> {
    entanglement_of_pure_density(&psi.to_density(), block)
}

/// As [`entanglement_pure`], for a density matrix that must be pure.
pub fn entanglement_of_pure_density(rho: &DensityMatrix, block: &[&str]) -> Result<f64> {
    let purity = rho.purity();
    if purity < 1.0 - tol::PURITY {
        return Err(Error::NotPure(purity));
    }
    if block.is_empty() || block.len() >= rho.shape().len() {
        return Err(Error::InvalidArgument(
            "bipartition needs a nonempty proper subset of labels".into(),
        ));
    }
    Ok(entropy(&marginal(rho, block)?))
}

/// Coherence, discord and (for pure bipartite states) entanglement.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct HierarchyReport {
    pub coherence: f64,
    pub discord: MeasureReport,
    pub entanglement: Option<f64>,
    /// `C >= D - 1e-6` and, when `E` is present, `D >= E - 1e-6`.
    pub ordering_holds: bool,
}

pub const HIERARCHY_TOL: f64 = 1e-6;

pub fn hierarchy_check(
    rho: &DensityMatrix,
    basis: &LocalBasisAssignment,
    config: &OptimizerConfig,
) -> Result<HierarchyReport> {
    if rho.shape().len() < 2 {
        return Err(Error::InvalidArgument("hierarchy needs a multipartite state".into()));
    }
    let c = coherence_rel_entropy(rho, basis)?;
    let d = discord_rel_entropy(rho, config)?;
    let e = if rho.shape().len() == 2 && rho.purity() >= 1.0 - tol::PURITY {
        let first = rho.shape().labels()[0].clone();
        Some(entanglement_of_pure_density(rho, &[first.as_str()])?)
    } else {
        None
    };
    let ordering_holds =
        c >= d.value - HIERARCHY_TOL && e.is_none_or(|e| d.value >= e - HIERARCHY_TOL);
    Ok(HierarchyReport {
        coherence: c,
        discord: d,
        entanglement: e,
        ordering_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{
        conjugate, populations_in, random_pure_state, random_state, random_unitary, rng_from_seed, SubsystemShape,
        UnitaryMatrix,
    };
    use nalgebra::dmatrix;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell() -> DensityMatrix {
        let mut v = CVector::zeros(4);
        v[0] = c(FRAC_1_SQRT_2);
        v[3] = c(FRAC_1_SQRT_2);
        PureState::new(SubsystemShape::qubits(2).unwrap(), v).unwrap().to_density()
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::new(SubsystemShape::single(2).unwrap(), dmatrix![c(0.5), c(0.5); c(0.5), c(0.5)]).unwrap()
    }

    fn quick() -> OptimizerConfig {
        OptimizerConfig::default().with_restarts(8).with_seed(3)
    }

    #[test]
    fn coherence_examples() {
        let comp = LocalBasisAssignment::Computational;
        assert!((coherence_rel_entropy(&plus(), &comp).unwrap() - 1.0).abs() < 1e-12);
        let d = DensityMatrix::from_diagonal(SubsystemShape::qubits(2).unwrap(), &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(coherence_rel_entropy(&d, &comp).unwrap().abs() < 1e-12);
        // |Phi+> in the computational basis keeps two populations
        assert!((coherence_rel_entropy(&bell(), &comp).unwrap() - 1.0).abs() < 1e-12);
        // ... and spreads over four in the X x Z frame
        let s = FRAC_1_SQRT_2;
        let x = dmatrix![c(s), c(s); c(s), c(-s)];
        let xz = LocalBasisAssignment::product(vec![x, CMatrix::identity(2, 2)]).unwrap();
        assert!((coherence_rel_entropy(&bell(), &xz).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_zero_iff_diagonal() {
        let mut rng = rng_from_seed(21);
        for _ in 0..20 {
            let rho = random_state(SubsystemShape::qubits(2).unwrap(), 3, &mut rng).unwrap();
            let comp = LocalBasisAssignment::Computational;
            let cval = coherence_rel_entropy(&rho, &comp).unwrap();
            let deph = dephase(&rho, &comp).unwrap();
            assert_eq!(cval <= 1e-9, deph.max_distance(&rho) <= 1e-9);
            assert!(cval > 1e-9);
        }
    }

    #[test]
    fn l1_examples() {
        let comp = LocalBasisAssignment::Computational;
        let d = DensityMatrix::from_diagonal(SubsystemShape::single(3).unwrap(), &[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(coherence_l1(&d, &comp).unwrap(), 0.0);
        assert!((coherence_l1(&plus(), &comp).unwrap() - 1.0).abs() < 1e-15);
        for dim in [2usize, 3, 5, 8] {
            let v = CVector::from_element(dim, c(1.0 / (dim as f64).sqrt()));
            let rho = PureState::new(SubsystemShape::single(dim).unwrap(), v).unwrap().to_density();
            assert!((coherence_l1(&rho, &comp).unwrap() - (dim as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_free_examples() {
        let d = DensityMatrix::from_diagonal(SubsystemShape::qubits(2).unwrap(), &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(basis_free_coherence(&d, &quick()).unwrap().value < 1e-12);

        let r = basis_free_coherence(&bell(), &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4, "{}", r.value);

        let mut rng = rng_from_seed(5);
        for _ in 0..5 {
            let q = random_state(SubsystemShape::single(2).unwrap(), 2, &mut rng).unwrap();
            assert!(basis_free_coherence(&q, &quick()).unwrap().value < 1e-9);
        }
    }

    #[test]
    fn report_arg_reproduces_value() {
        let mut rng = rng_from_seed(6);
        let rho = random_state(SubsystemShape::qubits(2).unwrap(), 4, &mut rng).unwrap();
        for r in [basis_free_coherence(&rho, &quick()).unwrap(), discord_rel_entropy(&rho, &quick()).unwrap()] {
            let Some(ReportArg::Basis(b)) = &r.arg else { panic!("missing basis") };
            let again = coherence_rel_entropy(&rho, b).unwrap();
            assert!((again - r.value).abs() < 1e-8, "{again} vs {}", r.value);
            assert!(r.value <= coherence_rel_entropy(&rho, &LocalBasisAssignment::Computational).unwrap() + 1e-9);
        }
    }

    #[test]
    fn discord_examples() {
        let cc = DensityMatrix::from_diagonal(SubsystemShape::qubits(2).unwrap(), &[0.4, 0.1, 0.2, 0.3]).unwrap();
        assert!(discord_rel_entropy(&cc, &quick()).unwrap().value < 1e-12);
        let r = discord_rel_entropy(&bell(), &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn discord_of_rotated_classical_state_is_zero() {
        let mut rng = rng_from_seed(17);
        let cc = DensityMatrix::from_diagonal(SubsystemShape::qubits(2).unwrap(), &[0.4, 0.1, 0.2, 0.3]).unwrap();
        let v = random_unitary(2, &mut rng).unwrap().tensor(&random_unitary(2, &mut rng).unwrap());
        let rotated = conjugate(&cc, &v).unwrap();
        assert!(coherence(&rotated) > 0.1);
        assert!(discord_rel_entropy(&rotated, &quick()).unwrap().value < 1e-7);
        assert!(basis_free_coherence(&rotated, &quick()).unwrap().value < 1e-7);
    }

    #[test]
    fn product_basis_populations_match_conjugation() {
        let mut rng = rng_from_seed(2);
        let rho = random_state(SubsystemShape::new(vec![2, 3], vec!["A", "B"]).unwrap(), 6, &mut rng).unwrap();
        let a = random_unitary(2, &mut rng).unwrap().data().clone();
        let b = random_unitary(3, &mut rng).unwrap().data().clone();
        let direct = product_basis_populations(rho.data(), &[a.clone(), b.clone()]);
        let w = crate::qmat::kron(&a, &b);
        let via = populations_in(rho.data(), &w);
        for (x, y) in direct.iter().zip(&via) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn entanglement_examples() {
        let prod = PureState::basis(SubsystemShape::qubits(2).unwrap(), 1).unwrap();
        assert!(entanglement_pure(&prod, &["A"]).unwrap().abs() < 1e-12);
        let mut v = CVector::zeros(4);
        v[0] = c(FRAC_1_SQRT_2);
        v[3] = c(FRAC_1_SQRT_2);
        let b = PureState::new(SubsystemShape::qubits(2).unwrap(), v).unwrap();
        assert!((entanglement_pure(&b, &["A"]).unwrap() - 1.0).abs() < 1e-12);

        let a2: f64 = 0.3;
        let mut v = CVector::zeros(8);
        v[0] = c(a2.sqrt());
        v[7] = c((1.0 - a2).sqrt());
        let ghz = PureState::new(SubsystemShape::qubits(3).unwrap(), v).unwrap();
        let h = -a2 * a2.log2() - (1.0 - a2) * (1.0 - a2).log2();
        assert!((entanglement_pure(&ghz, &["A"]).unwrap() - h).abs() < 1e-12);
        assert!((entanglement_pure(&ghz, &["B", "C"]).unwrap() - h).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(SubsystemShape::qubits(2).unwrap());
        assert!(matches!(entanglement_of_pure_density(&mixed, &["A"]), Err(Error::NotPure(_))));
    }

    #[test]
    fn hierarchy_examples() {
        let comp = LocalBasisAssignment::Computational;
        let h = hierarchy_check(&bell(), &comp, &quick()).unwrap();
        assert!((h.coherence - 1.0).abs() < 1e-12);
        assert!((h.discord.value - 1.0).abs() < 1e-4);
        assert!((h.entanglement.unwrap() - 1.0).abs() < 1e-12);
        assert!(h.ordering_holds);

        let d = DensityMatrix::from_diagonal(SubsystemShape::qubits(2).unwrap(), &[0.25, 0.25, 0.5, 0.0]).unwrap();
        let h = hierarchy_check(&d, &comp, &quick()).unwrap();
        assert!(h.coherence.abs() < 1e-12 && h.discord.value < 1e-9 && h.entanglement.is_none());
    }

    #[test]
    fn pure_discord_equals_entanglement() {
        let mut rng = rng_from_seed(44);
        for _ in 0..3 {
            let psi = random_pure_state(SubsystemShape::qubits(2).unwrap(), &mut rng).unwrap();
            let e = entanglement_pure(&psi, &["A"]).unwrap();
            let d = discord_rel_entropy(&psi.to_density(), &quick()).unwrap().value;
            assert!((d - e).abs() < 1e-4, "{d} vs {e}");
        }
    }

    #[test]
    fn basis_free_is_local_unitary_invariant() {
        let mut rng = rng_from_seed(8);
        let rho = random_state(SubsystemShape::qubits(2).unwrap(), 2, &mut rng).unwrap();
        let v = UnitaryMatrix::from_factors(vec![
            random_unitary(2, &mut rng).unwrap().data().clone(),
            random_unitary(2, &mut rng).unwrap().data().clone(),
        ])
        .unwrap();
        let a = basis_free_coherence(&rho, &quick()).unwrap().value;
        let b = basis_free_coherence(&conjugate(&rho, &v).unwrap(), &quick()).unwrap().value;
        assert!((a - b).abs() < 2e-4, "{a} vs {b}");
    }
}
