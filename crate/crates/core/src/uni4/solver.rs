//! Random walk on the unitary group towards a target bistochastic matrix.
//!
//! Each step proposes `V = exp(−iαH)` with `H` drawn from the GUE and keeps
//! `V·U` only if it moves the image closer to the target. After
//! `stall_limit` consecutive rejections the angle `α` is halved. A run ends
//! below `eps`, below `alpha_min` or after `max_steps`; failed runs restart
//! from a fresh Haar-random point.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{sample_gue, sample_haar_unitary, stream_rng};
use crate::error::{Error, Result};
use crate::matcore::{BistochasticMatrix, ComplexMatrix, RealMatrix, Tolerances, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha0: f64,
    pub alpha_min: f64,
    pub stall_limit: usize,
    pub eps: f64,
    pub restarts: usize,
    pub max_steps: usize,
    pub seed: u64,
    /// Keep the accepted distances of every run.
    pub record_path: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::from_tolerances(&Tolerances::default(), 0)
    }
}

impl SolverConfig {
    pub fn from_tolerances(t: &Tolerances, seed: u64) -> Self {
        Self {
            alpha0: t.alpha0,
            alpha_min: t.alpha_min,
            stall_limit: t.stall_limit,
            eps: t.eps_solver,
            restarts: t.restarts,
            max_steps: 2_000_000,
            seed,
            record_path: false,
        }
    }

    /// Published parameters, including the coarse `α_min = 1e−4`.
    pub fn paper() -> Self {
        Self::from_tolerances(&Tolerances::paper(), 0)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        Tolerances {
            tol_b: crate::matcore::TOL_B,
            tol_u: crate::matcore::TOL_U,
            eps_solver: self.eps,
            alpha0: self.alpha0,
            alpha_min: self.alpha_min,
            stall_limit: self.stall_limit,
            restarts: self.restarts,
        }
        .validate()?;
        if self.max_steps < 1000 {
            return Err(Error::InvalidTolerances(format!(
                "max_steps must be at least 1000, got {}",
                self.max_steps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverVerdict {
    Unistochastic,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartTrace {
    pub index: usize,
    pub initial_d: f64,
    pub final_d: f64,
    pub steps: usize,
    pub accepted: usize,
    pub final_alpha: f64,
    /// Accepted distances in order, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub d_min: f64,
    pub best_unitary: UnitaryMatrix,
    pub verdict: SolverVerdict,
    /// Runs in restart order, up to and including the first success.
    pub restarts: Vec<RestartTrace>,
    pub wall_seconds: f64,
}

impl SolverReport {
    pub fn best_image(&self) -> BistochasticMatrix {
        self.best_unitary.image()
    }
}

// Changes in D below this floor are roundoff; counting them as progress
// would keep resetting the stall counter at a minimum.
const NOISE_ABS: f64 = 1e-14;
const NOISE_REL: f64 = 1e-12;

#[inline]
fn image_distance(u: &ComplexMatrix, b: &RealMatrix) -> f64 {
    u.iter()
        .zip(b.iter())
        .map(|(z, v)| {
            let d = z.norm_sqr() - v;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// `exp(−iαH)` for Hermitian `H` through its eigendecomposition.
pub(crate) fn unitary_step(h: ComplexMatrix, alpha: f64) -> ComplexMatrix {
    let eig = h.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -alpha * l));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, p) in phases.iter().enumerate() {
        scaled.column_mut(j).apply(|z| *z *= *p);
    }
    scaled * v.adjoint()
}

fn run_once(b: &RealMatrix, cfg: &SolverConfig, index: usize) -> (RestartTrace, ComplexMatrix) {
    let n = b.nrows();
    let mut rng = stream_rng(cfg.seed, index as u64);
    let mut u = sample_haar_unitary(n, &mut rng).into_matrix();
    let mut d = image_distance(&u, b);
    let initial_d = d;
    let mut alpha = cfg.alpha0;
    let (mut stall, mut steps, mut accepted) = (0, 0, 0);
    let mut path = cfg.record_path.then(|| vec![d]);
    while d >= cfg.eps && alpha >= cfg.alpha_min && steps < cfg.max_steps {
        let v = unitary_step(sample_gue(n, &mut rng), alpha);
        let next = v * &u;
        let dn = image_distance(&next, b);
        steps += 1;
        if dn < d - NOISE_ABS - NOISE_REL * d {
            u = next;
            d = dn;
            stall = 0;
            accepted += 1;
            if let Some(p) = path.as_mut() {
                p.push(d);
            }
        } else {
            stall += 1;
            if stall >= cfg.stall_limit {
                alpha *= 0.5;
                stall = 0;
            }
        }
    }
    let trace = RestartTrace {
        index,
        initial_d,
        final_d: d,
        steps,
        accepted,
        final_alpha: alpha,
        path,
    };
    (trace, u)
}

/// Searches for a unitary whose image is within `eps` of `b`.
///
/// Runs are processed in batches of the rayon pool size; the report holds
/// every run up to the first success in restart order, so the result does
/// not depend on the number of threads.
pub fn search_unistochastic(b: &BistochasticMatrix, cfg: &SolverConfig) -> Result<SolverReport> {
    cfg.validate()?;
    let start = Instant::now();
    let target = b.as_matrix();
    let batch = rayon::current_num_threads().max(1);
    let mut traces = Vec::new();
    let mut best: Option<(f64, ComplexMatrix)> = None;
    let mut next = 0;
    'outer: while next < cfg.restarts {
        let end = (next + batch).min(cfg.restarts);
        let results: Vec<(RestartTrace, ComplexMatrix)> =
            (next..end).into_par_iter().map(|i| run_once(target, cfg, i)).collect();
        for (trace, u) in results {
            let d = trace.final_d;
            let success = d < cfg.eps;
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, u));
            }
            traces.push(trace);
            if success {
                break 'outer;
            }
        }
        next = end;
    }
    let (d_min, u) = best.expect("at least one restart");
    let verdict = if d_min < cfg.eps {
        SolverVerdict::Unistochastic
    } else {
        SolverVerdict::Inconclusive
    };
    Ok(SolverReport {
        d_min,
        best_unitary: UnitaryMatrix::from_trusted(u),
        verdict,
        restarts: traces,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}
