//! First-order image of the unitary group near a fixed `U₀`.
//!
//! For Hermitian `h`, `d/dt |e^{iht}U₀|²` at `t = 0` has entries
//! `2 Re(conj(U₀)_{ij} (ihU₀)_{ij})`. The map is linear in `h`; its rank in
//! the tangent space of the polytope tells whether the unistochastic set is
//! locally full-dimensional around the image of `U₀`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{inner, tangent_basis, ComplexMatrix, RealMatrix, UnitaryMatrix};
use crate::polytope::Hyperplane;

const RANK_TOL: f64 = 1e-8;
const ANNIHILATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentReport {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Orthonormal under the entrywise inner product.
    #[serde(skip)]
    pub image_basis: Vec<RealMatrix>,
}

fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut h = ComplexMatrix::zeros(n, n);
        h[(k, k)] = Complex64::new(1.0, 0.0);
        out.push(h);
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut re = ComplexMatrix::zeros(n, n);
            re[(j, k)] = Complex64::new(s, 0.0);
            re[(k, j)] = Complex64::new(s, 0.0);
            out.push(re);
            let mut im = ComplexMatrix::zeros(n, n);
            im[(j, k)] = Complex64::new(0.0, s);
            im[(k, j)] = Complex64::new(0.0, -s);
            out.push(im);
        }
    }
    out
}

/// Derivative of the image along `h`.
fn image_derivative(u: &ComplexMatrix, h: &ComplexMatrix) -> RealMatrix {
    let du = h * u * Complex64::i();
    RealMatrix::from_fn(u.nrows(), u.ncols(), |i, j| 2.0 * (u[(i, j)].conj() * du[(i, j)]).re)
}

pub fn tangent_rank(u0: &UnitaryMatrix) -> Result<TangentReport> {
    let n = u0.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            n,
            context: "the tangent map needs N ≥ 2",
        });
    }
    let u = u0.as_matrix();
    let basis = tangent_basis(n);
    let herm = hermitian_basis(n);
    let map = DMatrix::from_fn(basis.len(), herm.len(), |_, _| 0.0);
    let mut map = map;
    for (c, h) in herm.iter().enumerate() {
        let d = image_derivative(u, h);
        for (r, e) in basis.iter().enumerate() {
            map[(r, c)] = inner(&d, e);
        }
    }
    let svd = map.svd(true, false);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = if smax < 1e-12 {
        0
    } else {
        singular_values.iter().filter(|&&s| s > RANK_TOL * smax).count()
    };
    let left = svd.u.expect("left singular vectors requested");
    let image_basis = order[..rank]
        .iter()
        .map(|&k| {
            let col = left.column(k);
            basis
                .iter()
                .zip(col.iter())
                .fold(RealMatrix::zeros(n, n), |acc, (e, c)| acc + e * *c)
        })
        .collect();
    Ok(TangentReport {
        rank,
        singular_values,
        image_basis,
    })
}

/// 1-based labels of the hyperplane normals orthogonal to the whole image.
pub fn annihilating_normals(report: &TangentReport) -> Result<Vec<usize>> {
    if let Some(e) = report.image_basis.first() {
        if e.nrows() != 4 {
            return Err(Error::UnsupportedDimension {
                n: e.nrows(),
                context: "hyperplanes are defined for N = 4",
            });
        }
    }
    let mut out = Vec::new();
    for m in 1..=9 {
        let normal = Hyperplane::new(m)?.normal;
        if report
            .image_basis
            .iter()
            .all(|e| inner(e, &normal).abs() < ANNIHILATION_TOL)
        {
            out.push(m);
        }
    }
    Ok(out)
}
