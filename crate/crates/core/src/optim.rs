//! Multi-start derivative-free minimisation.
//!
//! Each restart runs Nelder–Mead (adaptive coefficients) from its own starting
//! point; restarts are independent and seeded from `(seed, restart index)`, so
//! the reduction is identical whether they run serially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Budget and seed for the multi-start optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub seed: u64,
    /// Run restarts on the rayon pool. Results do not depend on this flag.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

fn default_parallel() -> bool {
    true
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            step_tolerance: 1e-8,
            seed: 0,
            parallel: true,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }
}

/// Outcome of one local descent.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Simplex diameter (max-norm distance of any vertex to the best) at exit.
    pub final_step: f64,
    pub converged: bool,
}

/// Nelder–Mead with the dimension-adaptive coefficients of Gao and Han.
///
/// Stops when the simplex diameter drops below `step_tolerance` or after
/// `max_iterations` iterations.
pub fn nelder_mead<F>(
    f: &F,
    x0: &[f64],
    initial_step: f64,
    max_iterations: usize,
    step_tolerance: f64,
) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    if n == 0 {
        return LocalMinimum {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            final_step: 0.0,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = if n > 1 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let diameter = |simplex: &[Vec<f64>]| -> f64 {
        let best = &simplex[0];
        simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };

    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        for (k, o) in order.iter_mut().enumerate() {
            *o = k;
        }
        if diameter(&simplex) < step_tolerance {
            converged = true;
            break;
        }
        if iterations >= max_iterations {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(alpha);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = along(alpha * gamma);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let p = along(alpha * rho);
            let fp = eval(&p);
            (p, fp)
        } else {
            let p = along(-rho);
            let fp = eval(&p);
            (p, fp)
        };
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + sigma * (*x - b);
            }
            values[i] = eval(&simplex[i]);
        }
    }

    LocalMinimum {
        x: simplex[0].clone(),
        value: values[0],
        iterations,
        final_step: diameter(&simplex),
        converged,
    }
}

/// Nelder–Mead followed by fresh-simplex restarts at the incumbent until a
/// round no longer improves the value. All rounds share `max_iterations`.
pub fn polished_descent<F>(
    f: &F,
    x0: &[f64],
    initial_step: f64,
    max_iterations: usize,
    step_tolerance: f64,
) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    const ROUNDS: usize = 4;
    let mut best = nelder_mead(f, x0, initial_step, max_iterations, step_tolerance);
    let mut used = best.iterations;
    let mut step = initial_step * 0.1;
    for _ in 1..ROUNDS {
        if used >= max_iterations {
            break;
        }
        let next = nelder_mead(f, &best.x, step, max_iterations - used, step_tolerance);
        used += next.iterations;
        let improved = next.value < best.value - 1e-14 * best.value.abs().max(1.0);
        if next.value <= best.value {
            best = LocalMinimum { iterations: used, ..next };
        } else {
            best.iterations = used;
        }
        if !improved {
            break;
        }
        step *= 0.1;
    }
    best.iterations = used;
    best
}

/// Result of a multi-start run.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartResult {
    pub best: LocalMinimum,
    pub best_restart: usize,
    pub restarts: usize,
    pub total_iterations: usize,
}

/// Search domain for [`multi_start`]: random starts are drawn uniformly from
/// `[lower, upper]` per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl SearchBox {
    pub fn uniform(dim: usize, lower: f64, upper: f64, initial_step: f64) -> Self {
        Self {
            lower: vec![lower; dim],
            upper: vec![upper; dim],
            initial_step,
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
            .collect()
    }
}

/// Starting point for restart `index`: the fixed starts first, then seeded
/// uniform samples from the box.
pub fn restart_point(domain: &SearchBox, fixed_starts: &[Vec<f64>], seed: u64, index: usize) -> Vec<f64> {
    if let Some(p) = fixed_starts.get(index) {
        return p.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    domain.sample(&mut rng)
}

/// Minimise `f` from `config.restarts` starting points and keep the best.
///
/// Ties are broken by the lowest restart index.
pub fn multi_start<F>(
    f: &F,
    domain: &SearchBox,
    fixed_starts: &[Vec<f64>],
    config: &OptimizerConfig,
) -> MultiStartResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    let restarts = config.restarts.max(1);
    let run = |i: usize| {
        let x0 = restart_point(domain, fixed_starts, config.seed, i);
        polished_descent(
            f,
            &x0,
            domain.initial_step,
            config.max_iterations,
            config.step_tolerance,
        )
    };
    let results: Vec<LocalMinimum> = if config.parallel {
        (0..restarts).into_par_iter().map(run).collect()
    } else {
        (0..restarts).map(run).collect()
    };
    let total_iterations = results.iter().map(|r| r.iterations).sum();
    let mut best_restart = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value < results[best_restart].value {
            best_restart = i;
        }
    }
    MultiStartResult {
        best: results[best_restart].clone(),
        best_restart,
        restarts,
        total_iterations,
    }
}
