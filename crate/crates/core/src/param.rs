//! Smooth parameterisation of unitary groups by two-level rotations.
//!
//! A `d`-dimensional unitary (modulo a global phase) is a product of
//! `d(d-1)/2` two-level rotations `G_pq(theta, phi)` and `d-1` diagonal phases,
//! `d^2 - 1` real parameters in total. Parameters for one factor are laid out as
//! `[theta_1, phi_1, theta_2, phi_2, ..., alpha_1, ..., alpha_{d-1}]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::optim::SearchBox;
use crate::qmat::{kron_all, CMatrix};

/// Which side of the rotation product the diagonal phases sit on.
///
/// `Left` gives `U = D * G` with rotations in lexicographic pair order, `Right`
/// gives `U = G' * D` with rotations in reverse order. Both cover the whole
/// group. `Right` is the useful choice when only `diag(U rho U^dag)` matters
/// (left phases would be invisible there); `Left` when only the columns of `U`
/// up to phase matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasePlacement {
    Left,
    Right,
}

pub fn param_count(dim: usize) -> usize {
    dim * dim - 1
}

pub fn product_param_count(dims: &[usize]) -> usize {
    dims.iter().map(|&d| param_count(d)).sum()
}

fn pairs(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
    for p in 0..dim {
        for q in p + 1..dim {
            out.push((p, q));
        }
    }
    out
}

/// Left-multiply `m` in place by the two-level rotation on rows `p`, `q`.
fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, theta: f64, phi: f64) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    for j in 0..m.ncols() {
        let a = m[(p, j)];
        let b = m[(q, j)];
        m[(p, j)] = a * c - e.conj() * s * b;
        m[(q, j)] = e * s * a + b * c;
    }
}

/// The unitary for one factor.
pub fn unitary_from_params(dim: usize, params: &[f64], placement: PhasePlacement) -> CMatrix {
    assert_eq!(params.len(), param_count(dim), "wrong parameter count for dimension {dim}");
    let pairs = pairs(dim);
    let n_rot = pairs.len();
    let phases = &params[2 * n_rot..];
    let mut m = CMatrix::identity(dim, dim);
    match placement {
        PhasePlacement::Left => {
            // build D * G_1 * G_2 * ... by left-multiplying from the rightmost factor
            for (k, &(p, q)) in pairs.iter().enumerate().rev() {
                rotate_rows(&mut m, p, q, params[2 * k], params[2 * k + 1]);
            }
            for (i, &a) in phases.iter().enumerate() {
                let e = Complex64::from_polar(1.0, a);
                for j in 0..dim {
                    m[(i + 1, j)] *= e;
                }
            }
        }
        PhasePlacement::Right => {
            // G_n * ... * G_1 * D
            for (i, &a) in phases.iter().enumerate() {
                m[(i + 1, i + 1)] = Complex64::from_polar(1.0, a);
            }
            for (k, &(p, q)) in pairs.iter().enumerate() {
                rotate_rows(&mut m, p, q, params[2 * k], params[2 * k + 1]);
            }
        }
    }
    m
}

/// Per-subsystem unitaries for a product parameter vector.
pub fn product_factors(dims: &[usize], params: &[f64], placement: PhasePlacement) -> Vec<CMatrix> {
    assert_eq!(params.len(), product_param_count(dims));
    let mut offset = 0;
    dims.iter()
        .map(|&d| {
            let n = param_count(d);
            let u = unitary_from_params(d, &params[offset..offset + n], placement);
            offset += n;
            u
        })
        .collect()
}

pub fn product_unitary(dims: &[usize], params: &[f64], placement: PhasePlacement) -> CMatrix {
    kron_all(&product_factors(dims, params, placement))
}

/// Start box for product parameters: angles in `[0, pi]`, phases in `[0, 2 pi]`.
pub fn product_search_box(dims: &[usize]) -> SearchBox {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &d in dims {
        let n_rot = d * (d - 1) / 2;
        for _ in 0..n_rot {
            lower.extend([0.0, 0.0]);
            upper.extend([PI, 2.0 * PI]);
        }
        for _ in 0..d.saturating_sub(1) {
            lower.push(0.0);
            upper.push(2.0 * PI);
        }
    }
    SearchBox {
        lower,
        upper,
        initial_step: 0.3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::{multi_start, OptimizerConfig};
    use crate::qmat::{random_unitary, rng_from_seed, unitarity_error};
    use rand::Rng;

    #[test]
    fn counts() {
        assert_eq!(param_count(2), 3);
        assert_eq!(param_count(4), 15);
        assert_eq!(product_param_count(&[2, 3]), 11);
    }

    #[test]
    fn zero_params_give_identity() {
        for placement in [PhasePlacement::Left, PhasePlacement::Right] {
            let u = unitary_from_params(3, &vec![0.0; 8], placement);
            assert!((u - CMatrix::identity(3, 3)).norm() < 1e-15);
        }
    }

    #[test]
    fn always_unitary() {
        let mut rng = rng_from_seed(8);
        for d in 1..=5 {
            for placement in [PhasePlacement::Left, PhasePlacement::Right] {
                let p: Vec<f64> = (0..param_count(d)).map(|_| rng.random::<f64>() * 7.0 - 3.5).collect();
                let u = unitary_from_params(d, &p, placement);
                assert!(unitarity_error(&u) < 1e-13);
            }
        }
    }

    fn phase_free_distance(a: &CMatrix, b: &CMatrix) -> f64 {
        let d = a.nrows() as f64;
        1.0 - (a.adjoint() * b).trace().norm() / d
    }

    // empirical surjectivity: random targets are reachable up to a global phase
    #[test]
    fn reaches_random_targets() {
        let mut rng = rng_from_seed(12);
        for placement in [PhasePlacement::Left, PhasePlacement::Right] {
            for d in [2, 3] {
                let target = random_unitary(d, &mut rng).unwrap();
                let f = |p: &[f64]| phase_free_distance(&unitary_from_params(d, p, placement), target.data());
                let domain = product_search_box(&[d]);
                let cfg = OptimizerConfig::default().with_seed(1).with_restarts(16);
                let r = multi_start(&f, &domain, &[], &cfg);
                assert!(r.best.value < 1e-10, "d={d} {placement:?} distance {}", r.best.value);
            }
        }
    }
}
