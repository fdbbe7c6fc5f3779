//! Verb implementations.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;

use qcoherence::basis::BasisDocument;
use qcoherence::channels::{
    apply_channel, apply_selective, coherence_witness, completeness_error, is_incoherent_kraus, KrausSet,
};
use qcoherence::gates::{
    cartan_kernel, copt_kernel, copt_numeric, copt_one_side, copt_ordering, copt_two_side, coherent_power,
    hadamard_like, magic_basis, CartanVector, CoptFamily, DiagonalSpectrum, PowerMode,
};
use qcoherence::measures::{
    basis_free_coherence, coherence, coherence_l1, coherence_rel_entropy, discord_rel_entropy, hierarchy_check,
};
use qcoherence::multiparty::{
    additivity_gap, counterexample_search, delta_decomposition, ghz_family, w_family, Generator, SearchConfig,
    TripartiteState,
};
use qcoherence::qmat::{kron, rng_from_seed, unitarity_error, KrausDocument, MatrixDocument};
use qcoherence::{CMatrix, DensityMatrix, Error, LocalBasisAssignment, OptimizerConfig, SubsystemShape};

use crate::output::{Report, Settings, Table};
use crate::{Command, CoptChoice, GeneratorChoice, ModeChoice, SweepKind};

const SWEEP_BUDGET: usize = 1_000_000;

#[derive(Debug)]
pub enum CliError {
    Missing(PathBuf, std::io::Error),
    Malformed(PathBuf, Error),
    Invalid(Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Missing(p, e) => write!(f, "cannot read {}: {e}", p.display()),
            Self::Malformed(p, e) => write!(f, "malformed input in {}: {e}", p.display()),
            Self::Invalid(e) => write!(f, "invalid input: {e}"),
            Self::Io(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Invalid(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Missing(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn classify(path: &Path, e: Error) -> CliError {
    match e {
        Error::Json(_) | Error::Format(_) => CliError::Malformed(path.to_path_buf(), e),
        other => CliError::Invalid(other),
    }
}

fn load_density(path: &Path) -> CliResult<DensityMatrix> {
    let text = read(path)?;
    MatrixDocument::parse(&text)
        .and_then(|d| d.to_density())
        .map_err(|e| classify(path, e))
}

fn load_basis(path: Option<&PathBuf>, rho: &DensityMatrix) -> CliResult<LocalBasisAssignment> {
    let basis = match path {
        None => LocalBasisAssignment::Computational,
        Some(p) => {
            let text = read(p)?;
            let doc: BasisDocument = serde_json::from_str(&text).map_err(|e| classify(p, e.into()))?;
            LocalBasisAssignment::from_document(&doc).map_err(|e| classify(p, e))?
        }
    };
    basis.check_shape(rho.shape())?;
    Ok(basis)
}

fn load_tripartite(path: &Path) -> CliResult<TripartiteState> {
    Ok(TripartiteState::new(load_density(path)?)?)
}

fn optimizer(settings: &Settings) -> OptimizerConfig {
    let mut cfg = OptimizerConfig::default().with_seed(settings.seed).with_restarts(settings.restarts);
    cfg.max_iterations = settings.max_iterations;
    cfg.step_tolerance = settings.step_tolerance;
    cfg
}

/// `re` or `re,im`.
fn parse_complex(text: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| CliError::Invalid(Error::InvalidArgument(format!("{text:?}: {e}"))))
    };
    match parts[..] {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Invalid(Error::InvalidArgument(format!(
            "expected `re` or `re,im`, got {text:?}"
        )))),
    }
}

fn grid(points: usize) -> CliResult<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidArgument("a grid needs at least 2 points".into()).into());
    }
    Ok((0..points).map(|i| i as f64 / (points - 1) as f64).collect())
}

fn check_budget(points: usize) -> CliResult<()> {
    if points > SWEEP_BUDGET {
        return Err(Error::BudgetExceeded(format!("{points} grid points exceed {SWEEP_BUDGET}")).into());
    }
    Ok(())
}

pub fn run(command: &Command, settings: &Settings) -> CliResult<Report> {
    let cfg = optimizer(settings);
    match command {
        Command::Coherence { state, basis, l1 } => {
            let rho = load_density(state)?;
            let basis = load_basis(basis.as_ref(), &rho)?;
            let mut r = if *l1 {
                let mut r = Report::new("coherence", "C_l1(rho) = sum over i != j of |rho_ij| in the given basis");
                r.set("value", coherence_l1(&rho, &basis)?);
                r
            } else {
                let mut r = Report::new("coherence", "C(rho) = S(rho dephased in the given basis) - S(rho)");
                r.set("value", coherence_rel_entropy(&rho, &basis)?);
                r
            };
            r.set("measure", if *l1 { "l1" } else { "relative_entropy" });
            Ok(r)
        }
        Command::Discord { state } => {
            let rho = load_density(state)?;
            let mut r = Report::new("discord", "D(rho) = min over product bases B of H(<B_k|rho|B_k>) - S(rho)");
            r.measure("discord", &discord_rel_entropy(&rho, &cfg)?);
            Ok(r)
        }
        Command::BasisFree { state } => {
            let rho = load_density(state)?;
            let mut r = Report::new("basis-free", "C_bf(rho) = min over product unitaries U of C(U rho U^dag)");
            r.measure("basis_free", &basis_free_coherence(&rho, &cfg)?);
            Ok(r)
        }
        Command::Hierarchy { state, basis } => {
            let rho = load_density(state)?;
            let basis = load_basis(basis.as_ref(), &rho)?;
            let h = hierarchy_check(&rho, &basis, &cfg)?;
            let mut r = Report::new("hierarchy", "C(rho) >= D(rho) >= E(rho), E for pure bipartite states only");
            r.unconverged |= !h.discord.converged;
            r.set("coherence", h.coherence)
                .set("discord", &h.discord)
                .set("entanglement", h.entanglement)
                .set("ordering_holds", h.ordering_holds);
            Ok(r)
        }
        Command::ValidateKraus { file } => validate_kraus(file),
        Command::Channel { state, kraus, selective, out } => {
            let rho = load_density(state)?;
            let text = read(kraus)?;
            let doc = KrausDocument::parse(&text).map_err(|e| classify(kraus, e))?;
            let ks = KrausSet::from_document(&doc).map_err(|e| classify(kraus, e))?;
            let comp = LocalBasisAssignment::Computational;
            let mut r = Report::new("channel", "Phi(rho) = sum_n K_n rho K_n^dag; branch n has p_n = Tr[K_n rho K_n^dag]");
            r.set("certified_incoherent", ks.is_certified_incoherent())
                .set("coherence_in", coherence_rel_entropy(&rho, &comp)?);
            let output = apply_channel(&rho, &ks)?;
            r.set("coherence_out", coherence_rel_entropy(&output, &comp)?)
                .set("state", MatrixDocument::from_density(&output));
            if *selective {
                let branches = apply_selective(&rho, &ks)?
                    .into_iter()
                    .map(|o| {
                        let c = o.state.as_ref().map(coherence);
                        json!({ "probability": o.probability, "coherence": c, "null": o.state.is_none() })
                    })
                    .collect::<Vec<_>>();
                r.set("branches", branches);
            }
            if let Some(p) = out {
                write(p, &MatrixDocument::from_density(&output).to_json())?;
            }
            Ok(r)
        }
        Command::Copt { delta, family, numeric } => copt(delta, *family, *numeric, &cfg),
        Command::Cartan { c, out } => {
            let c = CartanVector::parse(c)?;
            let u = cartan_kernel(&c);
            let m = magic_basis();
            let d = m.adjoint() * u.data() * &m;
            let mut off = 0.0f64;
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        off = off.max(d[(i, j)].norm());
                    }
                }
            }
            let doc = MatrixDocument::from_matrix(u.data(), Some(&SubsystemShape::qubits(2)?));
            let mut r = Report::new("cartan", "U_d(c) = exp(-i sum_j c_j sigma_j (x) sigma_j)");
            r.set("c", c.c())
                .set("matrix", &doc)
                .set("magic_phases", c.magic_phases())
                .set("magic_offdiagonal", off)
                .set("unitarity_error", unitarity_error(u.data()));
            if let Some(p) = out {
                write(p, &doc.to_json())?;
            }
            Ok(r)
        }
        Command::Power { gate, cartan, hh, mode } => {
            let u = if let Some(p) = gate {
                let text = read(p)?;
                MatrixDocument::parse(&text).and_then(|d| d.to_unitary()).map_err(|e| classify(p, e))?
            } else if let Some(c) = cartan {
                cartan_kernel(&CartanVector::parse(c)?)
            } else if *hh {
                let h = hadamard_like();
                h.tensor(&h)
            } else {
                return Err(Error::InvalidArgument("one of --gate, --cartan or --hh is required".into()).into());
            };
            let (mode, formula) = match mode {
                ModeChoice::IncoherentInputs => {
                    (PowerMode::IncoherentInputs, "CP(U) = max over incoherent delta of C(U delta U^dag)")
                }
                ModeChoice::AllInputs => (PowerMode::AllInputs, "CP(U) = max over rho of C(U rho U^dag) - C(rho)"),
            };
            let mut r = Report::new("power", formula);
            r.measure("power", &coherent_power(&u, mode, &cfg));
            Ok(r)
        }
        Command::Additivity { state, basis } => {
            let t = load_tripartite(state)?;
            let basis = load_basis(basis.as_ref(), t.density())?;
            let mut r = Report::new("additivity", "gap = C(rho_ABC) - C(rho_AB) - C(rho_AC)");
            r.set("additivity", additivity_gap(&t, &basis)?);
            Ok(r)
        }
        Command::Delta { state, basis } => {
            let t = load_tripartite(state)?;
            let basis = load_basis(basis.as_ref(), t.density())?;
            let d = delta_decomposition(&t, &basis)?;
            let mut r = Report::new("delta", "D1 + D2 + D3 = C(rho_AB) + C(rho_AC) - C(rho_ABC)");
            r.set("delta", d).set("sign_contract_holds", d.sign_contract_holds());
            Ok(r)
        }
        Command::Search { generator, samples } => {
            let generator = match generator {
                GeneratorChoice::Ssa => Generator::SsaSaturating,
                GeneratorChoice::Ghz => Generator::Ghz,
                GeneratorChoice::W => Generator::W,
            };
            let mut config = SearchConfig::new(generator, *samples);
            config.seed = settings.seed;
            let found = counterexample_search(&config)?;
            let mut r = Report::new("search", "states with C(rho_ABC) - C(rho_AB) - C(rho_AC) < -1e-6");
            let entries: Vec<_> = found
                .iter()
                .map(|ce| {
                    json!({
                        "sample": ce.sample,
                        "additivity": ce.report,
                        "state": MatrixDocument::from_density(ce.state.density()),
                    })
                })
                .collect();
            r.set("samples", samples).set("found", found.len()).set("counterexamples", entries);
            Ok(r)
        }
        Command::Ghz { alpha } => {
            let (psi, analytic) = ghz_family(parse_complex(alpha)?)?;
            let numeric = additivity_gap(&TripartiteState::new(psi.to_density())?, &LocalBasisAssignment::Computational)?;
            let mut r = Report::new("ghz", "alpha|000> + beta|111>: C_ABC = h(|alpha|^2) + h(|beta|^2), C_AB = C_AC = 0");
            r.set("analytic", analytic)
                .set("numeric", numeric)
                .set("state", MatrixDocument::from_density(&psi.to_density()));
            Ok(r)
        }
        Command::W { alpha, beta, gamma } => {
            let (psi, analytic) = w_family(parse_complex(alpha)?, parse_complex(beta)?, parse_complex(gamma)?)?;
            let numeric = additivity_gap(&TripartiteState::new(psi.to_density())?, &LocalBasisAssignment::Computational)?;
            let mut r = Report::new("w", "alpha|001> + beta|010> + gamma|100>, gap = C_ABC - C_AB - C_AC");
            r.set("analytic", analytic)
                .set("numeric", numeric)
                .set("state", MatrixDocument::from_density(&psi.to_density()));
            Ok(r)
        }
        Command::Sweep { kind, points, delta } => sweep(*kind, *points, delta, settings),
    }
}

fn validate_kraus(file: &Path) -> CliResult<Report> {
    let text = read(file)?;
    let ops = KrausDocument::parse(&text)
        .and_then(|d| d.to_matrices())
        .map_err(|e| classify(file, e))?;
    if ops.is_empty() {
        return Err(Error::InvalidArgument("empty Kraus set".into()).into());
    }
    let shape = ops[0].shape();
    if ops.iter().any(|k| k.shape() != shape) {
        return Err(Error::InvalidShape("Kraus operators disagree in shape".into()).into());
    }
    let mut offending = Vec::new();
    for (n, k) in ops.iter().enumerate() {
        let check = is_incoherent_kraus(k, qcoherence::tol::KRAUS_NONZERO);
        if let Some(col) = check.offending_column {
            let w = coherence_witness(k, qcoherence::tol::KRAUS_NONZERO);
            eprintln!("operator {n}: column {col} has more than one nonzero entry");
            offending.push(json!({ "operator": n, "column": col, "witness": w }));
        }
    }
    let err = completeness_error(&ops);
    let complete = err <= qcoherence::tol::KRAUS_COMPLETENESS;
    if !complete {
        eprintln!("operators are not complete: max |sum K^dag K - I| = {err:e}");
    }
    let mut r = Report::new(
        "validate-kraus",
        "each column of each K_n has at most one nonzero entry, and sum_n K_n^dag K_n = I",
    );
    r.set("operators", ops.len())
        .set("shape", [shape.0, shape.1])
        .set("completeness_error", err)
        .set("complete", complete)
        .set("incoherent", offending.is_empty())
        .set("offending", offending.clone());
    r.rejected = !complete || !offending.is_empty();
    Ok(r)
}

fn copt(delta: &str, family: CoptChoice, numeric: bool, cfg: &OptimizerConfig) -> CliResult<Report> {
    let d = DiagonalSpectrum::parse(delta)?;
    if d.reordered() {
        eprintln!("note: spectrum sorted ascending to {:?}", d.delta());
    }
    let (name, closed, formula): (CoptFamily, Option<fn(&DiagonalSpectrum) -> f64>, &'static str) = match family {
        CoptChoice::Ordering => {
            let o = copt_ordering(&d);
            let mut r = Report::new("copt", "one-side <= kernel <= two-side optimal created coherence");
            r.set("delta", d.delta())
                .set("reordered", d.reordered())
                .set("c1opt", o.c1opt)
                .set("c3opt", o.c3opt)
                .set("c2opt", o.c2opt)
                .set("ordering_holds", o.holds);
            return Ok(r);
        }
        CoptChoice::OneSide => (
            CoptFamily::OneSide,
            Some(copt_one_side),
            "max over U_A (x) I of C(U delta U^dag) = S(rho_I*) - S(delta)",
        ),
        CoptChoice::TwoSide => (
            CoptFamily::TwoSide,
            Some(copt_two_side),
            "max over U_A (x) U_B of C(U delta U^dag) = 2 - S(delta)",
        ),
        CoptChoice::Kernel => (
            CoptFamily::Kernel,
            Some(copt_kernel),
            "max over Cartan kernels of C(U delta U^dag) = S(rho_I*) - S(delta)",
        ),
        CoptChoice::FullU4 => (CoptFamily::FullU4, None, "max over U(4) of C(U delta U^dag)"),
    };
    let mut r = Report::new("copt", formula);
    r.set("delta", d.delta()).set("reordered", d.reordered()).set("family", name.to_string());
    if let Some(f) = closed {
        r.set("value", f(&d));
    }
    if numeric || closed.is_none() {
        let rep = copt_numeric(&d, name, cfg);
        if closed.is_none() {
            r.set("value", rep.value);
        }
        r.measure("numeric", &rep);
    }
    Ok(r)
}

fn sweep(kind: SweepKind, points: usize, delta: &str, settings: &Settings) -> CliResult<Report> {
    let comp = LocalBasisAssignment::Computational;
    let (formula, columns, rows): (&'static str, Vec<&str>, Vec<Vec<f64>>) = match kind {
        SweepKind::Ghz => {
            check_budget(points)?;
            let mut rows = Vec::with_capacity(points);
            for x in grid(points)? {
                let (psi, analytic) = ghz_family(Complex64::new(x.sqrt(), 0.0))?;
                let n = additivity_gap(&TripartiteState::new(psi.to_density())?, &comp)?;
                rows.push(vec![x, n.c_abc, n.c_ab, n.c_ac, n.gap, analytic.c_abc]);
            }
            (
                "GHZ family over |alpha|^2",
                vec!["alpha2", "c_abc", "c_ab", "c_ac", "gap", "c_abc_analytic"],
                rows,
            )
        }
        SweepKind::OneSide => {
            check_budget(points)?;
            let d = DiagonalSpectrum::parse(delta)?;
            let rho = d.to_density();
            let mut rows = Vec::with_capacity(points);
            for x in grid(points)? {
                let (a, b) = (x.sqrt(), (1.0 - x).max(0.0).sqrt());
                let ua = CMatrix::from_row_slice(2, 2, &[a, b, -b, a].map(|v| Complex64::new(v, 0.0)));
                let u = kron(&ua, &CMatrix::identity(2, 2));
                let out = DensityMatrix::new(rho.shape().clone(), &u * rho.data() * u.adjoint())?;
                rows.push(vec![x, coherence(&out)]);
            }
            ("F(|a|^2) = C((U_A (x) I) delta (U_A (x) I)^dag) with |U_A[0,0]|^2 = |a|^2", vec!["a2", "coherence"], rows)
        }
        SweepKind::W => {
            check_budget(points.saturating_mul(points))?;
            let g = grid(points)?;
            let mut rows = Vec::new();
            for &x in &g {
                for &y in &g {
                    let z = 1.0 - x - y;
                    if z < -1e-12 {
                        continue;
                    }
                    let z = z.max(0.0);
                    let amp = |v: f64| Complex64::new(v.sqrt(), 0.0);
                    let norm = (x + y + z).sqrt();
                    let (psi, _) = w_family(amp(x) / norm, amp(y) / norm, amp(z) / norm)?;
                    let n = additivity_gap(&TripartiteState::new(psi.to_density())?, &comp)?;
                    rows.push(vec![x, y, z, n.c_abc, n.c_ab, n.c_ac, n.gap, -n.gap]);
                }
            }
            (
                "W family over the simplex; excess = C_AB + C_AC - C_ABC",
                vec!["alpha2", "beta2", "gamma2", "c_abc", "c_ab", "c_ac", "gap", "excess"],
                rows,
            )
        }
        SweepKind::Ordering => {
            check_budget(points)?;
            let mut rng = rng_from_seed(settings.seed);
            let rows = (0..points)
                .map(|_| {
                    let d = DiagonalSpectrum::random(&mut rng);
                    let o = copt_ordering(&d);
                    let [a, b, c, e] = d.delta();
                    vec![a, b, c, e, o.c1opt, o.c3opt, o.c2opt]
                })
                .collect();
            (
                "closed-form optima for random spectra",
                vec!["d1", "d2", "d3", "d4", "c1opt", "c3opt", "c2opt"],
                rows,
            )
        }
    };
    let mut r = Report::new("sweep", formula);
    r.set("points", rows.len());
    r.table = Some(Table {
        columns: columns.into_iter().map(String::from).collect(),
        rows,
    });
    Ok(r)
}
