//! Additivity of coherence over a tripartite split.
//!
//! For `rho_ABC` the additivity gap is `C(rho_ABC) - C(rho_AB) - C(rho_AC)`,
//! all evaluated in the same product basis (restricted to the surviving
//! labels for the marginals). The first subsystem always plays the role of
//! `A`.
//!
//! The gap splits as `-gap = D1 + D2 + D3` with
//!
//! - `D1 = S(A) + S(ABC) - S(AB) - S(AC)`, never positive (strong subadditivity);
//! - `D2`, the same combination for the dephased states with the sign
//!   reversed, never negative;
//! - `D3 = S(A_dephased) - S(A)`, never negative.
//!
//! So a state with `D1 = 0` and `D2 + D3 > 0` has a negative gap.
//! [`ssa_saturating_state`] builds such states from block data.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::LocalBasisAssignment;
use crate::error::{Error, Result};
use crate::measures::coherence_rel_entropy;
use crate::qmat::{
    dephase, entropy, marginal, random_pure_state, CMatrix, CVector, DensityMatrix, MatrixDocument, PureState,
    SubsystemShape, ZERO,
};

/// A density matrix with exactly three subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteState {
    rho: DensityMatrix,
}

impl TripartiteState {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        if rho.shape().len() != 3 {
            return Err(Error::InvalidShape(format!(
                "expected three subsystems, got {}",
                rho.shape().len()
            )));
        }
        Ok(Self { rho })
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn into_density(self) -> DensityMatrix {
        self.rho
    }

    fn labels(&self) -> [&str; 3] {
        let l = self.rho.shape().labels();
        [&l[0], &l[1], &l[2]]
    }
}

/// Coherences of a tripartite state and its two `A`-containing marginals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub c_abc: f64,
    pub c_ab: f64,
    pub c_ac: f64,
    /// `c_abc - c_ab - c_ac`
    pub gap: f64,
}

impl AdditivityReport {
    fn from_parts(c_abc: f64, c_ab: f64, c_ac: f64) -> Self {
        Self {
            c_abc,
            c_ab,
            c_ac,
            gap: c_abc - c_ab - c_ac,
        }
    }
}

/// `-x log2 x` with `0 log 0 = 0`.
fn h(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

fn three_qubits() -> SubsystemShape {
    SubsystemShape::qubits(3).expect("three qubits")
}

/// `alpha|000> + beta|111>` with `beta = sqrt(1 - |alpha|^2)`, and the
/// analytic report `C_ABC = h(|alpha|^2) + h(|beta|^2)`, `C_AB = C_AC = 0`.
pub fn ghz_family(alpha: num_complex::Complex64) -> Result<(PureState, AdditivityReport)> {
    let a2 = alpha.norm_sqr();
    if !(a2 <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!("|alpha|^2 = {a2} exceeds 1")));
    }
    let b2 = (1.0 - a2).max(0.0);
    let mut amps = CVector::zeros(8);
    amps[0] = alpha;
    amps[7] = num_complex::Complex64::new(b2.sqrt(), 0.0);
    let psi = PureState::normalized(three_qubits(), amps)?;
    Ok((psi, AdditivityReport::from_parts(h(a2) + h(b2), 0.0, 0.0)))
}

/// `alpha|001> + beta|010> + gamma|100>` and its analytic report.
pub fn w_family(
    alpha: num_complex::Complex64,
    beta: num_complex::Complex64,
    gamma: num_complex::Complex64,
) -> Result<(PureState, AdditivityReport)> {
    let (a2, b2, g2) = (alpha.norm_sqr(), beta.norm_sqr(), gamma.norm_sqr());
    let norm = a2 + b2 + g2;
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    let mut amps = CVector::zeros(8);
    amps[1] = alpha;
    amps[2] = beta;
    amps[4] = gamma;
    let psi = PureState::new(three_qubits(), amps)?;
    // C(rho_XY) = H(populations) - h2 of the traced-out party's weight
    let pair = |x: f64, y: f64| {
        let s = x + y;
        if s > 0.0 {
            s * (h(x / s) + h(y / s))
        } else {
            0.0
        }
    };
    let report = AdditivityReport::from_parts(h(a2) + h(b2) + h(g2), pair(b2, g2), pair(a2, g2));
    Ok((psi, report))
}

/// Additivity gap in `basis` (restricted to each marginal's labels).
pub fn additivity_gap(rho: &TripartiteState, basis: &LocalBasisAssignment) -> Result<AdditivityReport> {
    let [a, b, c] = rho.labels();
    let shape = rho.rho.shape();
    let coherence_of = |keep: &[&str]| -> Result<f64> {
        let m = marginal(&rho.rho, keep)?;
        coherence_rel_entropy(&m, &basis.restrict_to_labels(shape, keep)?)
    };
    Ok(AdditivityReport::from_parts(
        coherence_rel_entropy(&rho.rho, basis)?,
        coherence_of(&[a, b])?,
        coherence_of(&[a, c])?,
    ))
}

/// The three entropy combinations whose sum is `-gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaReport {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// `delta1 + delta2 + delta3 + gap`, zero up to rounding.
    pub residual: f64,
}

pub const DELTA_TOL: f64 = 1e-9;

impl DeltaReport {
    /// `delta1 <= 1e-9`, `delta2 >= -1e-9`, `delta3 >= -1e-9`.
    pub fn sign_contract_holds(&self) -> bool {
        self.delta1 <= DELTA_TOL && self.delta2 >= -DELTA_TOL && self.delta3 >= -DELTA_TOL
    }
}

pub fn delta_decomposition(rho: &TripartiteState, basis: &LocalBasisAssignment) -> Result<DeltaReport> {
    let [a, b, c] = rho.labels();
    let shape = rho.rho.shape();
    let parts: [&[&str]; 4] = [&[a], &[a, b], &[a, c], &[a, b, c]];
    let mut s = [0.0; 4];
    let mut s_dephased = [0.0; 4];
    for (k, keep) in parts.iter().enumerate() {
        let m = marginal(&rho.rho, keep)?;
        s[k] = entropy(&m);
        s_dephased[k] = entropy(&dephase(&m, &basis.restrict_to_labels(shape, keep)?)?);
    }
    let [s_a, s_ab, s_ac, s_abc] = s;
    let [i_a, i_ab, i_ac, i_abc] = s_dephased;
    let delta1 = s_a + s_abc - s_ab - s_ac;
    let delta2 = i_ab + i_ac - i_abc - i_a;
    let delta3 = i_a - s_a;
    let gap = additivity_gap(rho, basis)?.gap;
    Ok(DeltaReport {
        delta1,
        delta2,
        delta3,
        residual: delta1 + delta2 + delta3 + gap,
    })
}

/// One summand `q rho_{A^L B} (x) rho_{A^R C}` of a block state.
#[derive(Debug, Clone, PartialEq)]
pub struct SsaBlock {
    pub weight: f64,
    /// State on `A^L (x) B`, `A^L` most significant.
    pub left: CMatrix,
    /// State on `A^R (x) C`, `A^R` most significant.
    pub right: CMatrix,
    /// `(dim A^L, dim A^R)`
    pub split: (usize, usize),
}

/// Direct sum of product blocks over a split of `H_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SsaBlockSpec {
    blocks: Vec<SsaBlock>,
    dims: [usize; 3],
}

impl SsaBlockSpec {
    /// Validates weights, the block states and the dimension bookkeeping.
    pub fn new(blocks: Vec<SsaBlock>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidArgument("no blocks".into()))?;
        let total: f64 = blocks.iter().map(|b| b.weight).sum();
        if (total - 1.0).abs() > 1e-12 || blocks.iter().any(|b| !(b.weight >= 0.0)) {
            return Err(Error::InvalidArgument(format!("block weights sum to {total}")));
        }
        let split_dim = |m: &CMatrix, a: usize, what: &str| -> Result<usize> {
            if m.nrows() != m.ncols() {
                return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
            }
            if a == 0 || m.nrows() % a != 0 {
                return Err(Error::InvalidShape(format!(
                    "{what} dimension {} is not a multiple of {a}",
                    m.nrows()
                )));
            }
            DensityMatrix::new(SubsystemShape::single(m.nrows())?, m.clone())?;
            Ok(m.nrows() / a)
        };
        let d_b = split_dim(&first.left, first.split.0, "left")?;
        let d_c = split_dim(&first.right, first.split.1, "right")?;
        let mut d_a = 0;
        for block in &blocks {
            let (l, r) = block.split;
            let b = split_dim(&block.left, l, "left")?;
            let c = split_dim(&block.right, r, "right")?;
            if b != d_b || c != d_c {
                return Err(Error::DimensionMismatch {
                    expected: d_b * d_c,
                    actual: b * c,
                });
            }
            d_a += l * r;
        }
        Ok(Self {
            blocks,
            dims: [d_a, d_b, d_c],
        })
    }

    pub fn blocks(&self) -> &[SsaBlock] {
        &self.blocks
    }

    /// `(d_A, d_B, d_C)` of the assembled state.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: SsaSpecDocument = serde_json::from_str(text)?;
        doc.to_spec()
    }

    pub fn to_document(&self) -> SsaSpecDocument {
        SsaSpecDocument {
            blocks: self
                .blocks
                .iter()
                .map(|b| SsaBlockDocument {
                    weight: b.weight,
                    split: [b.split.0, b.split.1],
                    left: MatrixDocument::from_matrix(&b.left, None),
                    right: MatrixDocument::from_matrix(&b.right, None),
                })
                .collect(),
        }
    }
}

/// JSON form of [`SsaBlockSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsaSpecDocument {
    pub blocks: Vec<SsaBlockDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsaBlockDocument {
    pub weight: f64,
    pub split: [usize; 2],
    pub left: MatrixDocument,
    pub right: MatrixDocument,
}

impl SsaSpecDocument {
    pub fn to_spec(&self) -> Result<SsaBlockSpec> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                Ok(SsaBlock {
                    weight: b.weight,
                    left: b.left.to_matrix()?,
                    right: b.right.to_matrix()?,
                    split: (b.split[0], b.split[1]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SsaBlockSpec::new(blocks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Assembles `sum_j q_j rho_{A_j^L B} (x) rho_{A_j^R C}`, block `j` taking the
/// consecutive `A` indices `offset_j + l * a_j^R + r`.
pub fn ssa_saturating_state(spec: &SsaBlockSpec) -> Result<TripartiteState> {
    let [d_a, d_b, d_c] = spec.dims;
    let d = d_a * d_b * d_c;
    let index = |a: usize, b: usize, c: usize| (a * d_b + b) * d_c + c;
    let mut out = CMatrix::from_element(d, d, ZERO);
    let mut offset = 0;
    for block in &spec.blocks {
        let (nl, nr) = block.split;
        for (l, b, l2, b2) in quad(nl, d_b) {
            let left = block.left[(l * d_b + b, l2 * d_b + b2)] * block.weight;
            if left == ZERO {
                continue;
            }
            for (r, c, r2, c2) in quad(nr, d_c) {
                let right = block.right[(r * d_c + c, r2 * d_c + c2)];
                let row = index(offset + l * nr + r, b, c);
                let col = index(offset + l2 * nr + r2, b2, c2);
                out[(row, col)] += left * right;
            }
        }
        offset += nl * nr;
    }
    let shape = SubsystemShape::new(vec![d_a, d_b, d_c], vec!["A", "B", "C"])?;
    TripartiteState::new(DensityMatrix::new(shape, out)?)
}

fn quad(n: usize, m: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..m).flat_map(move |j| (0..n).flat_map(move |k| (0..m).map(move |l| (i, j, k, l))))
    })
}

/// State families scanned by [`counterexample_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// single-block SSA-saturating states with random pure factors on
    /// `A^L B` and `A^R C`, the split alternating between `(2, 1)` and `(1, 2)`
    SsaSaturating,
    /// GHZ family on an even `|alpha|^2` sweep
    Ghz,
    /// W family with random amplitudes
    W,
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ssa" | "ssa_saturating" => Ok(Self::SsaSaturating),
            "ghz" => Ok(Self::Ghz),
            "w" => Ok(Self::W),
            _ => Err(Error::InvalidArgument(format!("unknown generator {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub samples: usize,
    pub generator: Generator,
    pub basis: LocalBasisAssignment,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(generator: Generator, samples: usize) -> Self {
        Self {
            samples,
            generator,
            basis: LocalBasisAssignment::Computational,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub sample: usize,
    pub state: TripartiteState,
    pub report: AdditivityReport,
}

/// Gap below which a state counts as a violation.
pub const VIOLATION_THRESHOLD: f64 = -1e-6;

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn generate(generator: Generator, samples: usize, seed: u64, index: usize) -> Result<TripartiteState> {
    let mut rng = sample_rng(seed, index);
    match generator {
        Generator::SsaSaturating => {
            let split = if index % 2 == 0 { (2, 1) } else { (1, 2) };
            let left = random_pure_state(SubsystemShape::single(2 * split.0)?, &mut rng)?;
            let right = random_pure_state(SubsystemShape::single(2 * split.1)?, &mut rng)?;
            let spec = SsaBlockSpec::new(vec![SsaBlock {
                weight: 1.0,
                left: left.to_density().into_data(),
                right: right.to_density().into_data(),
                split,
            }])?;
            ssa_saturating_state(&spec)
        }
        Generator::Ghz => {
            let a2 = if samples > 1 {
                index as f64 / (samples - 1) as f64
            } else {
                0.5
            };
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            let (psi, _) = ghz_family(num_complex::Complex64::from_polar(a2.sqrt(), phase))?;
            TripartiteState::new(psi.to_density())
        }
        Generator::W => {
            let amps: Vec<num_complex::Complex64> =
                (0..3).map(|_| crate::qmat::complex_gaussian(&mut rng)).collect();
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let (psi, _) = w_family(amps[0] / norm, amps[1] / norm, amps[2] / norm)?;
            TripartiteState::new(psi.to_density())
        }
    }
}

/// States from `config.generator` whose gap is below `-1e-6`, ordered by
/// sample index. Sample `i` draws from its own stream of `config.seed`.
pub fn counterexample_search(config: &SearchConfig) -> Result<Vec<Counterexample>> {
    if config.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let found: Vec<Option<Counterexample>> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let state = generate(config.generator, config.samples, config.seed, i)?;
            let report = additivity_gap(&state, &config.basis)?;
            Ok((report.gap < VIOLATION_THRESHOLD).then_some(Counterexample {
                sample: i,
                state,
                report,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{random_state, rng_from_seed};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn plus() -> CMatrix {
        CMatrix::from_element(2, 2, c(0.5))
    }

    fn numeric(psi: &PureState) -> AdditivityReport {
        let t = TripartiteState::new(psi.to_density()).unwrap();
        additivity_gap(&t, &LocalBasisAssignment::Computational).unwrap()
    }

    fn close(a: &AdditivityReport, b: &AdditivityReport, tol: f64) -> bool {
        (a.c_abc - b.c_abc).abs() < tol && (a.c_ab - b.c_ab).abs() < tol && (a.c_ac - b.c_ac).abs() < tol
    }

    #[test]
    fn ghz_examples() {
        let (psi, r) = ghz_family(c(FRAC_1_SQRT_2)).unwrap();
        assert!((r.c_abc - 1.0).abs() < 1e-15 && r.gap == r.c_abc);
        assert!(close(&numeric(&psi), &r, 1e-10));
        let (psi, r) = ghz_family(c(1.0)).unwrap();
        assert_eq!(r.c_abc, 0.0);
        assert!(close(&numeric(&psi), &r, 1e-10));
        let (psi, r) = ghz_family(Complex64::from_polar(0.6, 1.1)).unwrap();
        assert!(close(&numeric(&psi), &r, 1e-10));
        assert!(ghz_family(c(1.5)).is_err());
    }

    #[test]
    fn w_examples() {
        let s = 1.0 / 3f64.sqrt();
        let (psi, r) = w_family(c(s), c(s), c(s)).unwrap();
        assert!((r.c_abc - 3f64.log2()).abs() < 1e-12);
        assert!((r.c_ab - 2.0 / 3.0).abs() < 1e-12 && (r.c_ac - 2.0 / 3.0).abs() < 1e-12);
        assert!(close(&numeric(&psi), &r, 1e-10));

        let (psi, r) = w_family(c(0.6), Complex64::new(0.0, 0.8), ZERO).unwrap();
        assert!(r.c_ac.abs() < 1e-15);
        assert!(close(&numeric(&psi), &r, 1e-10));

        let (_, r) = w_family(ZERO, c(0.6), c(0.8)).unwrap();
        assert!(r.gap.abs() < 1e-10);
        assert!(w_family(c(1.0), c(1.0), ZERO).is_err());
    }

    #[test]
    fn additivity_examples() {
        let ppp = DensityMatrix::new(three_qubits(), crate::qmat::kron_all(&[plus(), plus(), plus()])).unwrap();
        let t = TripartiteState::new(ppp).unwrap();
        let r = additivity_gap(&t, &LocalBasisAssignment::Computational).unwrap();
        assert!((r.c_abc - 3.0).abs() < 1e-10 && (r.c_ab - 2.0).abs() < 1e-10 && (r.gap + 1.0).abs() < 1e-10);

        let mut rng = rng_from_seed(3);
        let pops: Vec<f64> = {
            let raw: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|x| x / s).collect()
        };
        let diag = TripartiteState::new(DensityMatrix::from_diagonal(three_qubits(), &pops).unwrap()).unwrap();
        assert!(additivity_gap(&diag, &LocalBasisAssignment::Computational).unwrap().gap.abs() < 1e-12);
        assert!(TripartiteState::new(DensityMatrix::maximally_mixed(SubsystemShape::qubits(2).unwrap())).is_err());
    }

    #[test]
    fn delta_examples() {
        let (psi, _) = ghz_family(c(FRAC_1_SQRT_2)).unwrap();
        let t = TripartiteState::new(psi.to_density()).unwrap();
        let d = delta_decomposition(&t, &LocalBasisAssignment::Computational).unwrap();
        assert!((d.delta1 + 1.0).abs() < 1e-10);
        assert!(d.residual.abs() < 1e-9 && d.sign_contract_holds());

        let mut rng = rng_from_seed(4);
        let shape = SubsystemShape::with_default_labels(vec![2, 2, 3]).unwrap();
        for rank in 1..=4 {
            let rho = random_state(shape.clone(), rank, &mut rng).unwrap();
            let parts = [marginal(&rho, &["A"]).unwrap(), marginal(&rho, &["B"]).unwrap(), marginal(&rho, &["C"]).unwrap()];
            let product = parts[0].tensor(&parts[1]).unwrap().tensor(&parts[2]).unwrap();
            let d = delta_decomposition(&TripartiteState::new(product).unwrap(), &LocalBasisAssignment::Computational).unwrap();
            assert!(d.delta1.abs() < 1e-9);
            let d = delta_decomposition(&TripartiteState::new(rho).unwrap(), &LocalBasisAssignment::Computational).unwrap();
            assert!(d.residual.abs() < 1e-9 && d.sign_contract_holds());
        }
    }

    #[test]
    fn ssa_blocks() {
        // |+><+| on A^L B = 2x2 with trivial A^R and C
        let pp = crate::qmat::kron(&plus(), &plus());
        let spec = SsaBlockSpec::new(vec![SsaBlock { weight: 1.0, left: pp, right: plus(), split: (2, 1) }]).unwrap();
        assert_eq!(spec.dims(), [2, 2, 2]);
        let t = ssa_saturating_state(&spec).unwrap();
        let comp = LocalBasisAssignment::Computational;
        let d = delta_decomposition(&t, &comp).unwrap();
        assert!(d.delta1.abs() < 1e-8);
        let r = additivity_gap(&t, &comp).unwrap();
        assert!((r.gap + 1.0).abs() < 1e-10);
        assert!(d.delta2 + d.delta3 > 0.0);

        let mut rng = rng_from_seed(9);
        let rs = |n: usize, rng: &mut ChaCha8Rng| random_state(SubsystemShape::single(n).unwrap(), n, rng).unwrap().into_data();
        let spec = SsaBlockSpec::new(vec![
            SsaBlock { weight: 0.5, left: rs(2, &mut rng), right: rs(4, &mut rng), split: (1, 2) },
            SsaBlock { weight: 0.5, left: rs(4, &mut rng), right: rs(2, &mut rng), split: (2, 1) },
        ])
        .unwrap();
        assert_eq!(spec.dims(), [4, 2, 2]);
        let t = ssa_saturating_state(&spec).unwrap();
        assert!(delta_decomposition(&t, &comp).unwrap().delta1.abs() < 1e-8);

        let round = SsaBlockSpec::parse(&spec.to_document().to_json()).unwrap();
        assert_eq!(round, spec);
    }

    #[test]
    fn ssa_spec_rejections() {
        let bad_weight = SsaBlock { weight: 0.7, left: plus(), right: plus(), split: (1, 1) };
        assert!(SsaBlockSpec::new(vec![bad_weight]).is_err());
        let bad_split = SsaBlock { weight: 1.0, left: plus(), right: plus(), split: (3, 1) };
        assert!(SsaBlockSpec::new(vec![bad_split]).is_err());
        let a = SsaBlock { weight: 0.5, left: plus(), right: plus(), split: (1, 1) };
        let b = SsaBlock { weight: 0.5, left: CMatrix::identity(4, 4) * c(0.25), right: plus(), split: (1, 1) };
        assert!(SsaBlockSpec::new(vec![a, b]).is_err());
    }

    #[test]
    fn search_outcomes() {
        let found = counterexample_search(&SearchConfig::new(Generator::SsaSaturating, 20)).unwrap();
        assert!(!found.is_empty());
        for ce in &found {
            let r = additivity_gap(&ce.state, &LocalBasisAssignment::Computational).unwrap();
            assert!(r.gap < VIOLATION_THRESHOLD);
        }
        assert!(counterexample_search(&SearchConfig::new(Generator::Ghz, 21)).unwrap().is_empty());
        assert!(counterexample_search(&SearchConfig::new(Generator::W, 50)).unwrap().is_empty());
        let again = counterexample_search(&SearchConfig::new(Generator::SsaSaturating, 20)).unwrap();
        assert_eq!(found, again);
    }
}
