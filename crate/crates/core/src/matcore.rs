//! Matrix foundation: bistochastic, unitary and permutation matrices, the
//! Hilbert-Schmidt distance, entropy, dephasing and named constructors.
//!
//! Dimensions are runtime data. Everything here is immutable after
//! construction and freely shareable between threads.

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::{DMatrix, Scalar};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Entry and marginal tolerance for bistochastic validation.
pub const TOL_B: f64 = 1e-12;
/// Maximum allowed `‖U·U† − I‖_max` for a unitary.
pub const TOL_U: f64 = 1e-10;

/// Step-size floor used by the published random-walk procedure.
pub const PAPER_ALPHA_MIN: f64 = 1e-4;
/// Step-size floor used by default. The walk stalls at a distance of the
/// order of the current step, so the floor has to sit well below `eps`.
pub const DEFAULT_ALPHA_MIN: f64 = 1e-9;

/// Numerical tolerances and random-walk parameters shared across modules.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub tol_b: f64,
    pub tol_u: f64,
    pub eps_solver: f64,
    pub alpha0: f64,
    pub alpha_min: f64,
    pub stall_limit: usize,
    pub restarts: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            alpha_min: DEFAULT_ALPHA_MIN,
            ..Self::paper()
        }
    }
}

impl Tolerances {
    /// The values quoted for the original random-walk experiments.
    pub fn paper() -> Self {
        Self {
            tol_b: TOL_B,
            tol_u: TOL_U,
            eps_solver: 1e-6,
            alpha0: 0.1,
            alpha_min: PAPER_ALPHA_MIN,
            stall_limit: 100,
            restarts: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let reals = [
            ("tol_b", self.tol_b),
            ("tol_u", self.tol_u),
            ("eps_solver", self.eps_solver),
            ("alpha0", self.alpha0),
            ("alpha_min", self.alpha_min),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerances(format!("{name} must be positive, got {v}")));
            }
        }
        if self.stall_limit == 0 || self.restarts == 0 {
            return Err(Error::InvalidTolerances(
                "stall_limit and restarts must be positive".into(),
            ));
        }
        if self.alpha_min >= self.alpha0 {
            return Err(Error::InvalidTolerances(format!(
                "alpha_min ({}) must be below alpha0 ({})",
                self.alpha_min, self.alpha0
            )));
        }
        Ok(())
    }
}

fn check_square<T: Scalar>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// A validated doubly stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BistochasticMatrix {
    data: RealMatrix,
}

impl BistochasticMatrix {
    pub fn new(data: RealMatrix) -> Result<Self> {
        Self::with_tolerance(data, TOL_B)
    }

    /// Validates with an explicit tolerance. Entries in `[-tol, 0)` are
    /// clamped to zero.
    pub fn with_tolerance(mut data: RealMatrix, tol: f64) -> Result<Self> {
        let n = check_square(&data)?;
        if n == 0 {
            return Err(Error::NotBistochastic("empty matrix".into()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        for ((i, j), v) in data.iter().enumerate().map(|(k, v)| ((k % n, k / n), v)) {
            if *v < -tol {
                return Err(Error::NotBistochastic(format!("entry ({i}, {j}) = {v:e} is negative")));
            }
        }
        for i in 0..n {
            let s: f64 = data.row(i).sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::NotBistochastic(format!("row {i} sums to {s}")));
            }
            let s: f64 = data.column(i).sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::NotBistochastic(format!("column {i} sums to {s}")));
            }
        }
        data.apply(|v| {
            if *v < 0.0 {
                *v = 0.0
            }
        });
        Ok(Self { data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(RealMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// The flat matrix with all entries `1/n`, the centre of the polytope.
    pub fn van_der_waerden(n: usize) -> Self {
        Self {
            data: RealMatrix::from_element(n, n, 1.0 / n as f64),
        }
    }

    /// `[[c², s²], [s², c²]]` with `c = cos θ`, `s = sin θ`.
    pub fn two_by_two(theta: f64) -> Self {
        let c2 = theta.cos().powi(2);
        let s2 = theta.sin().powi(2);
        Self {
            data: RealMatrix::from_row_slice(2, 2, &[c2, s2, s2, c2]),
        }
    }

    pub(crate) fn from_trusted(data: RealMatrix) -> Self {
        debug_assert!(data.nrows() == data.ncols());
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Entries below `tol` are reported as zeros.
    pub fn zero_entries(&self, tol: f64) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.data[(i, j)] <= tol {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Row `i` of the result is row `rows[i]` of `self`, column `j` is
    /// column `cols[j]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        Ok(Self {
            data: permute_matrix(&self.data, rows, cols)?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
        }
    }

    /// Convex combination `Σ w_k M_k`; weights must be nonnegative and sum to 1.
    pub fn convex_combination(weights: &[f64], points: &[BistochasticMatrix]) -> Result<Self> {
        if weights.len() != points.len() || points.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| *w < -TOL_B) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterOutOfRange(
                "weights must be nonnegative and sum to 1".into(),
            ));
        }
        let n = points[0].dim();
        let mut acc = RealMatrix::zeros(n, n);
        for (w, p) in weights.iter().zip(points) {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            acc += p.as_matrix() * *w;
        }
        Self::with_tolerance(acc, 1e-11)
    }
}

/// A complex matrix whose unitarity residual was checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    data: ComplexMatrix,
    residual: f64,
}

/// `‖U·U† − I‖_max`.
pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let prod = m * m.adjoint();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

impl UnitaryMatrix {
    pub fn new(data: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(data, TOL_U)
    }

    pub fn with_tolerance(data: ComplexMatrix, tol: f64) -> Result<Self> {
        check_square(&data)?;
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        let residual = unitarity_residual(&data);
        if residual > tol {
            return Err(Error::NotUnitary {
                residual,
                tolerance: tol,
            });
        }
        Ok(Self { data, residual })
    }

    pub fn from_real(data: &RealMatrix) -> Result<Self> {
        Self::new(data.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: ComplexMatrix::identity(n, n),
            residual: 0.0,
        }
    }

    /// `U_jk = q^{jk} / √n` with `q = exp(2πi/n)`.
    pub fn fourier(n: usize) -> Self {
        let scale = 1.0 / (n as f64).sqrt();
        let data = ComplexMatrix::from_fn(n, n, |j, k| {
            let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
            Complex64::from_polar(scale, angle)
        });
        let residual = unitarity_residual(&data);
        Self { data, residual }
    }

    /// The one-parameter family of 4×4 complex Hadamard matrices
    /// `½[[1,1,1,1],[1,e^{iφ},−1,−e^{iφ}],[1,−1,1,−1],[1,−e^{iφ},−1,e^{iφ}]]`.
    pub fn hadamard_family(phi: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let e = Complex64::from_polar(1.0, phi);
        let rows = [
            [one, one, one, one],
            [one, e, -one, -e],
            [one, -one, one, -one],
            [one, -e, -one, e],
        ];
        let data = ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j] * 0.5);
        let residual = unitarity_residual(&data);
        Self { data, residual }
    }

    /// The real orthogonal `[[c, s], [s, −c]]`, a witness for [`BistochasticMatrix::two_by_two`].
    pub fn orthogonal_two_by_two(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let data = RealMatrix::from_row_slice(2, 2, &[c, s, s, -c]).map(|v| Complex64::new(v, 0.0));
        let residual = unitarity_residual(&data);
        Self { data, residual }
    }

    pub(crate) fn from_trusted(data: ComplexMatrix) -> Self {
        let residual = unitarity_residual(&data);
        Self { data, residual }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            residual: self.residual,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.map(|z| z.conj()),
            residual: self.residual,
        }
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self::from_trusted(&self.data * &other.data))
    }

    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        Ok(Self {
            data: permute_matrix(&self.data, rows, cols)?,
            residual: self.residual,
        })
    }

    /// `B_ij = |U_ij|²`.
    pub fn image(&self) -> BistochasticMatrix {
        unistochastic_image(self)
    }

    /// Rephases rows and columns so that row 0 and column 0 are real and
    /// positive. Refuses when one of those entries vanishes.
    pub fn dephase(&self) -> Result<Self> {
        dephase(self)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }
}

/// The bistochastic image `B_ij = |U_ij|²` of a unitary.
pub fn unistochastic_image(u: &UnitaryMatrix) -> BistochasticMatrix {
    let data = u.as_matrix().map(|z| z.norm_sqr());
    // Marginals deviate from 1 by at most the unitarity residual.
    BistochasticMatrix::with_tolerance(data, TOL_U.max(4.0 * u.residual()))
        .expect("image of a validated unitary is bistochastic")
}

/// `D(A, B) = √Tr((A−B)(A−B)ᵀ)`.
pub fn distance(a: &RealMatrix, b: &RealMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Distance to the van der Waerden matrix. Equals `√(Σ B_ij² − 1)`; summed
/// as `Σ (B_ij − 1/N)²` to keep precision near the centre.
pub fn distance_to_center(b: &BistochasticMatrix) -> f64 {
    let c = 1.0 / b.dim() as f64;
    b.as_matrix().iter().map(|v| (v - c) * (v - c)).sum::<f64>().sqrt()
}

/// Inner product `Tr(A·Bᵀ)` matching [`distance`].
pub fn inner(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Row entropy averaged over rows, `−(1/N) Σ B_ij ln B_ij` with `0·ln 0 = 0`.
pub fn entropy(b: &BistochasticMatrix) -> f64 {
    entropy_of_entries(b.as_matrix().as_slice(), b.dim())
}

pub(crate) fn entropy_of_entries(entries: &[f64], n: usize) -> f64 {
    let s: f64 = entries.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum();
    (-s / n as f64).max(0.0)
}

/// See [`UnitaryMatrix::dephase`].
pub fn dephase(u: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    let n = u.dim();
    let mut m = u.as_matrix().clone();
    for j in 0..n {
        let z = m[(0, j)];
        if z.norm() < TOL_U {
            return Err(Error::ZeroPivot { row: 0, col: j });
        }
        let phase = z.conj() / z.norm();
        m.column_mut(j).apply(|w| *w *= phase);
    }
    for i in 1..n {
        let z = m[(i, 0)];
        if z.norm() < TOL_U {
            return Err(Error::ZeroPivot { row: i, col: 0 });
        }
        let phase = z.conj() / z.norm();
        m.row_mut(i).apply(|w| *w *= phase);
    }
    Ok(UnitaryMatrix::from_trusted(m))
}

/// Elementwise product of two equally shaped matrices.
pub fn hadamard_product<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>>
where
    T: Scalar + Copy + Mul<Output = T>,
{
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(a.zip_map(b, |x, y| x * y))
}

/// Kronecker product: block `(i, j)` of the result is `A_ij · B`.
pub fn tensor_product<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T>
where
    T: Scalar + Copy + Mul<Output = T>,
{
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n
        && p.iter().all(|&k| {
            if k >= n || seen[k] {
                false
            } else {
                seen[k] = true;
                true
            }
        })
}

pub(crate) fn permute_matrix<T: Scalar>(m: &DMatrix<T>, rows: &[usize], cols: &[usize]) -> Result<DMatrix<T>> {
    let n = check_square(m)?;
    if !is_permutation(rows, n) || !is_permutation(cols, n) {
        return Err(Error::ParameterOutOfRange(format!(
            "row/column orders must be permutations of 0..{n}"
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| m[(rows[i], cols[j])].clone()))
}

/// Permutation order used for N = 4 throughout the crate. It coincides with
/// the lexicographic order of the permutation words.
pub const CORNER_ORDER_N4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// A permutation matrix stored as its word: row `i` has its 1 in column `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationMatrix {
    perm: Vec<usize>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The `index`-th permutation word of `0..n` in lexicographic order.
fn lexicographic_word(n: usize, mut index: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut word = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k);
        word.push(pool.remove(index / f));
        index %= f;
    }
    word
}

impl PermutationMatrix {
    pub fn from_word(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if !is_permutation(&perm, n) {
            return Err(Error::ParameterOutOfRange(format!("{perm:?} is not a permutation")));
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// Corner `index` of the polytope: the fixed table for N = 4,
    /// lexicographic order of the words otherwise.
    pub fn by_index(n: usize, index: usize) -> Result<Self> {
        let bound = factorial(n);
        if index >= bound {
            return Err(Error::IndexOutOfRange { index, bound });
        }
        if n == 4 {
            return Ok(Self {
                perm: CORNER_ORDER_N4[index].to_vec(),
            });
        }
        Ok(Self {
            perm: lexicographic_word(n, index),
        })
    }

    /// All `n!` corners in index order.
    pub fn all(n: usize) -> Vec<Self> {
        (0..factorial(n))
            .map(|k| Self::by_index(n, k).expect("index in range"))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.perm
    }

    pub fn index(&self) -> usize {
        let n = self.dim();
        let mut pool: Vec<usize> = (0..n).collect();
        let mut idx = 0;
        for (k, v) in self.perm.iter().enumerate() {
            let pos = pool.iter().position(|p| p == v).expect("valid permutation");
            idx += pos * factorial(n - 1 - k);
            pool.remove(pos);
        }
        idx
    }

    pub fn to_matrix(&self) -> RealMatrix {
        let n = self.dim();
        RealMatrix::from_fn(n, n, |i, j| if self.perm[i] == j { 1.0 } else { 0.0 })
    }

    pub fn to_bistochastic(&self) -> BistochasticMatrix {
        BistochasticMatrix::from_trusted(self.to_matrix())
    }

    pub fn to_unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix::from_trusted(self.to_matrix().map(|v| Complex64::new(v, 0.0)))
    }

    /// Number of rows in which the two permutations differ.
    pub fn hamming(&self, other: &Self) -> usize {
        self.perm.iter().zip(&other.perm).filter(|(a, b)| a != b).count()
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            perm: self.perm.iter().map(|&k| other.perm[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.dim()];
        for (i, &k) in self.perm.iter().enumerate() {
            inv[k] = i;
        }
        Self { perm: inv }
    }
}

/// Orthonormal basis (under [`inner`]) of the `(n−1)²`-dimensional space of
/// real matrices with vanishing row and column sums, the tangent space of
/// the polytope.
pub fn tangent_basis(n: usize) -> Vec<RealMatrix> {
    let mut basis: Vec<RealMatrix> = Vec::with_capacity((n - 1) * (n - 1));
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let mut x = RealMatrix::zeros(n, n);
            x[(i, j)] = 1.0;
            x[(i, n - 1)] = -1.0;
            x[(n - 1, j)] = -1.0;
            x[(n - 1, n - 1)] = 1.0;
            for b in &basis {
                let c = inner(&x, b);
                x -= b * c;
            }
            let norm = inner(&x, &x).sqrt();
            basis.push(x / norm);
        }
    }
    basis
}
