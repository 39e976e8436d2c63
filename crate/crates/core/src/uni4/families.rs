//! Structured unistochastic families in four dimensions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{
    permute_matrix, tensor_product, BistochasticMatrix, ComplexMatrix, PermutationMatrix, RealMatrix, UnitaryMatrix,
};
use crate::polytope::TETRAHEDRA;
use crate::uni3::reconstruct3;

const PATTERN_TOL: f64 = 1e-9;

fn build(kind: &str, rows: [[f64; 4]; 4]) -> Result<BistochasticMatrix> {
    if rows.iter().flatten().any(|v| !(-1e-15..=1.0 + 1e-15).contains(v)) {
        return Err(Error::ParameterOutOfRange(format!(
            "family {kind}: parameters give entries outside [0, 1]"
        )));
    }
    let m = RealMatrix::from_fn(4, 4, |i, j| rows[i][j].clamp(0.0, 1.0));
    BistochasticMatrix::new(m)
}

/// Five-parameter pattern `[[a,b,c,d],[b,a,d,c],[e,f,g,h],[f,e,h,g]]`; the
/// remaining entries follow from the unit sums.
pub fn auberson_a(a: f64, b: f64, c: f64, e: f64, g: f64) -> Result<BistochasticMatrix> {
    let d = 1.0 - a - b - c;
    let f = 1.0 - a - b - e;
    let h = a + b - g;
    build("A", [[a, b, c, d], [b, a, d, c], [e, f, g, h], [f, e, h, g]])
}

/// Four-angle pattern built from products of squared sines and cosines.
pub fn auberson_b(t1: f64, t2: f64, t3: f64, t4: f64) -> Result<BistochasticMatrix> {
    let (s1, c1) = sq(t1);
    let (s2, c2) = sq(t2);
    let (s3, c3) = sq(t3);
    let (s4, c4) = sq(t4);
    build(
        "B",
        [
            [s1 * s2, c1 * s2, c3 * c2, s3 * c2],
            [s1 * c2, c1 * c2, c3 * s2, s3 * s2],
            [c1 * c4, s1 * c4, s3 * s4, c3 * s4],
            [c1 * s4, s1 * s4, s3 * c4, c3 * c4],
        ],
    )
}

fn sq(t: f64) -> (f64, f64) {
    let (s, c) = t.sin_cos();
    (s * s, c * c)
}

/// Rows `[x, x, ½−x, ½−x]` with `x ∈ [0, ½]` and the four `x` summing to one.
pub fn auberson_c(a: f64, b: f64, c: f64, d: f64) -> Result<BistochasticMatrix> {
    let x = [a, b, c, d];
    if x.iter().any(|v| !(0.0..=0.5).contains(v)) || (a + b + c + d - 1.0).abs() > 1e-12 {
        return Err(Error::ParameterOutOfRange(format!(
            "family C needs entries in [0, 1/2] summing to 1, got {x:?}"
        )));
    }
    build("C", x.map(|v| [v, v, 0.5 - v, 0.5 - v]))
}

/// True if some row and column reordering of `b` fits the generator that
/// `fit` rebuilds from the matrix's own entries.
fn in_family(b: &BistochasticMatrix, fit: impl Fn(&RealMatrix) -> Option<BistochasticMatrix>) -> bool {
    if b.dim() != 4 {
        return false;
    }
    let perms = PermutationMatrix::all(4);
    perms.iter().any(|r| {
        perms.iter().any(|c| {
            let m = permute_matrix(b.as_matrix(), r.word(), c.word()).expect("valid permutation");
            fit(&m).is_some_and(|g| (g.as_matrix() - &m).amax() < PATTERN_TOL)
        })
    })
}

pub fn in_family_a(b: &BistochasticMatrix) -> bool {
    in_family(b, |m| {
        auberson_a(m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(2, 0)], m[(2, 2)]).ok()
    })
}

pub fn in_family_b(b: &BistochasticMatrix) -> bool {
    in_family(b, |m| {
        let angle = |s2: f64| s2.clamp(0.0, 1.0).sqrt().asin();
        let t1 = angle(m[(0, 0)] + m[(1, 0)]);
        let t2 = angle(m[(0, 0)] + m[(0, 1)]);
        let t3 = angle(m[(0, 3)] + m[(1, 3)]);
        let t4 = angle(m[(3, 0)] + m[(3, 1)]);
        auberson_b(t1, t2, t3, t4).ok()
    })
}

pub fn in_family_c(b: &BistochasticMatrix) -> bool {
    in_family(b, |m| auberson_c(m[(0, 0)], m[(1, 0)], m[(2, 0)], m[(3, 0)]).ok())
}

/// `B_K ⊗ B_M` with the witnesses `U_K`, `U_M`.
///
/// `(U_K ⊗ I)·D·(I ⊗ U_M)` with `D` diagonal is a witness for every choice
/// of the phases in `D`; those with both indices nonzero are not removable
/// by rephasing, leaving `(K−1)(M−1)` free parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorFamily {
    pub u_k: UnitaryMatrix,
    pub u_m: UnitaryMatrix,
}

impl TensorFamily {
    pub fn free_phase_count(&self) -> usize {
        (self.u_k.dim() - 1) * (self.u_m.dim() - 1)
    }

    pub fn image(&self) -> BistochasticMatrix {
        BistochasticMatrix::from_trusted(tensor_product(
            self.u_k.image().as_matrix(),
            self.u_m.image().as_matrix(),
        ))
    }

    /// Witness for the phases `θ_{cb}`, `c = 1..K−1`, `b = 1..M−1`, listed
    /// with `b` varying fastest.
    pub fn witness(&self, theta: &[f64]) -> Result<UnitaryMatrix> {
        let (k, m) = (self.u_k.dim(), self.u_m.dim());
        if theta.len() != self.free_phase_count() {
            return Err(Error::DimensionMismatch {
                expected: self.free_phase_count(),
                found: theta.len(),
            });
        }
        let uk = self.u_k.as_matrix();
        let um = self.u_m.as_matrix();
        let phase = |c: usize, b: usize| {
            if c == 0 || b == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, theta[(c - 1) * (m - 1) + b - 1])
            }
        };
        let w = ComplexMatrix::from_fn(k * m, k * m, |row, col| {
            let (a, b) = (row / m, row % m);
            let (c, d) = (col / m, col % m);
            uk[(a, c)] * phase(c, b) * um[(b, d)]
        });
        UnitaryMatrix::new(w)
    }
}

pub fn tensor_unistochastic(u_k: UnitaryMatrix, u_m: UnitaryMatrix) -> TensorFamily {
    TensorFamily { u_k, u_m }
}

/// As [`tensor_unistochastic`] from the factors' images; each factor must
/// have N ≤ 3 so that its witness can be reconstructed exactly.
pub fn tensor_from_bistochastic(b_k: &BistochasticMatrix, b_m: &BistochasticMatrix) -> Result<TensorFamily> {
    let witness = |b: &BistochasticMatrix| match b.dim() {
        1 => Ok(UnitaryMatrix::identity(1)),
        _ => reconstruct3(b),
    };
    Ok(TensorFamily {
        u_k: witness(b_k)?,
        u_m: witness(b_m)?,
    })
}

/// Real orthogonal witness for `Σ p_i P_{c_i}` over the corners `c_i` of
/// tetrahedron `k` (1-based), listed in table order.
pub fn tetrahedron_witness(k: usize, p: [f64; 4]) -> Result<UnitaryMatrix> {
    if !(1..=6).contains(&k) {
        return Err(Error::IndexOutOfRange { index: k, bound: 7 });
    }
    if p.iter().any(|v| *v < 0.0) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::ParameterOutOfRange(format!(
            "weights must lie on the simplex, got {p:?}"
        )));
    }
    // T_k = T_1·P_g, so weight p_i goes to the T_1 corner t with P_t·P_g = P_{c_i}.
    let corners = TETRAHEDRA[k - 1];
    let g = PermutationMatrix::by_index(4, corners[0])?;
    let g_inv = g.inverse();
    let mut q = [0.0; 4];
    for (i, &c) in corners.iter().enumerate() {
        let t = PermutationMatrix::by_index(4, c)?.compose(&g_inv).index();
        let slot = TETRAHEDRA[0]
            .iter()
            .position(|&x| x == t)
            .expect("tetrahedra are cosets");
        q[slot] = p[i];
    }
    let [a, b, c, d] = q.map(f64::sqrt);
    #[rustfmt::skip]
    let o1 = RealMatrix::from_row_slice(4, 4, &[
        a, b, c, d,
        b, -a, -d, c,
        c, d, -a, -b,
        d, -c, b, -a,
    ]);
    UnitaryMatrix::from_real(&(o1 * g.to_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::distance;

    #[test]
    fn tetrahedron_images() {
        let p = [0.1, 0.2, 0.3, 0.4];
        for k in 1..=6 {
            let u = tetrahedron_witness(k, p).unwrap();
            assert!(u.residual() < 1e-12);
            let pts: Vec<_> = TETRAHEDRA[k - 1]
                .iter()
                .map(|&c| PermutationMatrix::by_index(4, c).unwrap().to_bistochastic())
                .collect();
            let want = BistochasticMatrix::convex_combination(&p, &pts).unwrap();
            assert!(
                distance(u.image().as_matrix(), want.as_matrix()).unwrap() < 1e-12,
                "k = {k}"
            );
        }
    }

    #[test]
    fn flat_weights_give_a_real_hadamard() {
        let u = tetrahedron_witness(1, [0.25; 4]).unwrap();
        assert!(u.as_matrix().iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
    }

    #[test]
    fn family_c_centre() {
        let b = auberson_c(0.25, 0.25, 0.25, 0.25).unwrap();
        assert!((b.as_matrix().map(|v| v - 0.25)).amax() < 1e-15);
        assert!(auberson_c(0.6, 0.2, 0.1, 0.1).is_err());
    }

    #[test]
    fn membership() {
        let a = auberson_a(0.1, 0.2, 0.3, 0.25, 0.15).unwrap();
        assert!(in_family_a(&a));
        let b = auberson_b(0.3, 0.7, 1.1, 0.2).unwrap();
        assert!(in_family_b(&b));
        let c = auberson_c(0.1, 0.4, 0.3, 0.2).unwrap();
        assert!(in_family_c(&c));
        let shuffled = c.permuted(&[2, 0, 3, 1], &[3, 1, 0, 2]).unwrap();
        assert!(in_family_c(&shuffled));
        let generic = BistochasticMatrix::convex_combination(
            &[0.3, 0.25, 0.2, 0.15, 0.1],
            &[0, 5, 9, 14, 22].map(|i| PermutationMatrix::by_index(4, i).unwrap().to_bistochastic()),
        )
        .unwrap();
        assert!(!in_family_a(&generic) && !in_family_b(&generic) && !in_family_c(&generic));
    }

    #[test]
    fn degenerate_b_is_a_tensor_product() {
        let (x, y) = (0.4, 1.2);
        let t =
            tensor_from_bistochastic(&BistochasticMatrix::two_by_two(x), &BistochasticMatrix::two_by_two(y)).unwrap();
        let b = auberson_b(x, y, x, y).unwrap();
        assert!(in_family_b(&t.image()));
        assert!(in_family_a(&t.image()));
        let perms = PermutationMatrix::all(4);
        let matched = perms.iter().any(|r| {
            perms.iter().any(|c| {
                let m = permute_matrix(t.image().as_matrix(), r.word(), c.word()).unwrap();
                (m - b.as_matrix()).amax() < 1e-12
            })
        });
        assert!(matched);
    }

    #[test]
    fn tensor_witnesses() {
        let t = tensor_unistochastic(UnitaryMatrix::fourier(3), UnitaryMatrix::fourier(2));
        assert_eq!(t.free_phase_count(), 2);
        for theta in [[0.0, 0.0], [0.4, -1.3], [2.0, 3.0]] {
            let w = t.witness(&theta).unwrap();
            assert!(w.residual() < 1e-12);
            assert!(distance(w.image().as_matrix(), t.image().as_matrix()).unwrap() < 1e-12);
        }
        assert!(t.witness(&[0.0]).is_err());
    }
}
