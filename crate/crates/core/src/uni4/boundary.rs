//! Exact decision for matrices with a zero entry.
//!
//! Gauge the column holding the zero to be real. Orthogonality of that
//! column with each of two others is a polygon with at most three sides, so
//! its angles are fixed up to a rotation and a mirror image. The remaining
//! relation between those two columns is then a polygon with one side of
//! known length and free sides from the rows where the gauged column
//! vanishes. At most four branch combinations need checking; the last
//! column is the orthogonal complement.

use num_complex::Complex64;
use serde::Serialize;

use super::orthogonal_complement;
use crate::error::{Error, Result};
use crate::matcore::{distance, BistochasticMatrix, ComplexMatrix, UnitaryMatrix};
use crate::uni3::close_polygon;

/// Closure tolerance for the polygon conditions.
pub const BOUNDARY_TOL: f64 = 1e-9;
const ZERO_ENTRY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum BoundaryReason {
    /// A witness unitary was assembled and checked.
    Witness,
    /// The columns `(a, b)` cannot be made orthogonal.
    ChainLinksFail { columns: (usize, usize) },
    /// No branch closes the last orthogonality relation; `gap` is the
    /// smallest polygon excess over all branches.
    OrthogonalityFail { gap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryVerdict {
    pub unistochastic: bool,
    pub reason: BoundaryReason,
    /// Column gauged real, and the zero found in it.
    pub pivot: (usize, usize),
    pub branches_tried: usize,
    #[serde(skip)]
    pub witness: Option<UnitaryMatrix>,
}

/// Excess of the longest side over the sum of the others.
fn polygon_gap(lengths: &[f64]) -> f64 {
    let total: f64 = lengths.iter().sum();
    let longest = lengths.iter().copied().fold(0.0, f64::max);
    2.0 * longest - total
}

/// Decides unistochasticity of a 3×3 or 4×4 matrix with a zero entry.
pub fn boundary_check4(b: &BistochasticMatrix) -> Result<BoundaryVerdict> {
    let n = b.dim();
    if !(3..=4).contains(&n) {
        return Err(Error::UnsupportedDimension {
            n,
            context: "the zero-entry test covers N = 3 and N = 4",
        });
    }
    let zeros = b.zero_entries(ZERO_ENTRY);
    let &(zr, a) = zeros.first().ok_or(Error::NoZeroEntry)?;
    let r = b.as_matrix().map(|v| if v <= ZERO_ENTRY { 0.0 } else { v.sqrt() });
    let others: Vec<usize> = (0..n).filter(|&j| j != a).collect();
    let (cb, cc) = (others[0], others[1]);

    // Orthogonality of column a with column j: rows where both are nonzero.
    let sides = |j: usize| -> Vec<usize> { (0..n).filter(|&i| r[(i, a)] * r[(i, j)] > 0.0).collect() };
    let rows_ab = sides(cb);
    let rows_ac = sides(cc);
    let lengths = |rows: &[usize], j: usize| -> Vec<f64> { rows.iter().map(|&i| r[(i, a)] * r[(i, j)]).collect() };
    let branches = |rows: &[usize], j: usize| -> Option<Vec<Vec<f64>>> {
        let l = lengths(rows, j);
        let mut out = vec![close_polygon(&l, 1, BOUNDARY_TOL)?];
        if l.len() == 3 {
            out.push(close_polygon(&l, -1, BOUNDARY_TOL)?);
        }
        Some(out)
    };
    let verdict_fail = |reason, tried| BoundaryVerdict {
        unistochastic: false,
        reason,
        pivot: (a, zr),
        branches_tried: tried,
        witness: None,
    };
    let Some(beta_branches) = branches(&rows_ab, cb) else {
        return Ok(verdict_fail(BoundaryReason::ChainLinksFail { columns: (a, cb) }, 0));
    };
    let Some(gamma_branches) = branches(&rows_ac, cc) else {
        return Ok(verdict_fail(BoundaryReason::ChainLinksFail { columns: (a, cc) }, 0));
    };

    let free_rows: Vec<usize> = (0..n)
        .filter(|&i| r[(i, a)] == 0.0 && r[(i, cb)] * r[(i, cc)] > 0.0)
        .collect();
    let free_lengths: Vec<f64> = free_rows.iter().map(|&i| r[(i, cb)] * r[(i, cc)]).collect();
    let mut tried = 0;
    let mut best_gap = f64::INFINITY;
    for beta_angles in &beta_branches {
        for gamma_angles in &gamma_branches {
            tried += 1;
            let mut beta = vec![0.0; n];
            let mut gamma = vec![0.0; n];
            for (k, &i) in rows_ab.iter().enumerate() {
                beta[i] = beta_angles[k];
            }
            for (k, &i) in rows_ac.iter().enumerate() {
                gamma[i] = gamma_angles[k];
            }
            // conj(U_ib)·U_ic summed over rows where the gauged column is nonzero.
            let fixed: Complex64 = (0..n)
                .filter(|&i| r[(i, a)] > 0.0)
                .map(|i| Complex64::from_polar(r[(i, cb)] * r[(i, cc)], gamma[i] - beta[i]))
                .sum();
            let mut segments = vec![fixed.norm()];
            segments.extend_from_slice(&free_lengths);
            let Some(angles) = close_polygon(&segments, 1, BOUNDARY_TOL) else {
                best_gap = best_gap.min(polygon_gap(&segments));
                continue;
            };
            let rot = if fixed.norm() > BOUNDARY_TOL {
                fixed.arg() - angles[0]
            } else {
                0.0
            };
            for (k, &i) in free_rows.iter().enumerate() {
                gamma[i] = angles[k + 1] + rot;
            }
            if let Some(u) = assemble(b, &r, a, cb, cc, &beta, &gamma) {
                return Ok(BoundaryVerdict {
                    unistochastic: true,
                    reason: BoundaryReason::Witness,
                    pivot: (a, zr),
                    branches_tried: tried,
                    witness: Some(u),
                });
            }
            best_gap = best_gap.min(0.0);
        }
    }
    Ok(verdict_fail(BoundaryReason::OrthogonalityFail { gap: best_gap }, tried))
}

fn assemble(
    b: &BistochasticMatrix,
    r: &nalgebra::DMatrix<f64>,
    a: usize,
    cb: usize,
    cc: usize,
    beta: &[f64],
    gamma: &[f64],
) -> Option<UnitaryMatrix> {
    let n = b.dim();
    let mut u = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        u[(i, a)] = Complex64::new(r[(i, a)], 0.0);
        u[(i, cb)] = Complex64::from_polar(r[(i, cb)], beta[i]);
        u[(i, cc)] = Complex64::from_polar(r[(i, cc)], gamma[i]);
    }
    if n == 4 {
        let d = (0..4).find(|j| ![a, cb, cc].contains(j)).expect("one column left");
        let v = orthogonal_complement(&u, &[a, cb, cc]);
        u.set_column(d, &v);
    }
    let w = UnitaryMatrix::with_tolerance(u, 10.0 * BOUNDARY_TOL).ok()?;
    let err = distance(&w.as_matrix().map(|z| z.norm_sqr()), b.as_matrix()).ok()?;
    (err < 10.0 * BOUNDARY_TOL).then_some(w)
}
