//! Exact unistochasticity for N = 2 and N = 3.
//!
//! For N = 3 orthogonality of two columns is the closure of a triangle whose
//! sides are the link lengths `L_k = √(B_ka B_kb)`, so the decision reduces
//! to triangle inequalities and the phases follow from the law of cosines.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    distance_to_center, tangent_basis, BistochasticMatrix, ComplexMatrix, PermutationMatrix, RealMatrix, UnitaryMatrix,
};

/// Saturation tolerance separating boundary from interior.
pub const SATURATION_TOL: f64 = 1e-10;

/// Radius of the largest unistochastic ball around the flat 3×3 matrix.
pub fn ball_radius() -> f64 {
    2f64.sqrt() / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict3 {
    Interior,
    Boundary,
    Outside,
}

impl Verdict3 {
    pub fn is_unistochastic(self) -> bool {
        self != Verdict3::Outside
    }

    fn from_slack(slack: f64) -> Self {
        if slack > SATURATION_TOL {
            Verdict3::Interior
        } else if slack >= -SATURATION_TOL {
            Verdict3::Boundary
        } else {
            Verdict3::Outside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainLinks {
    pub l: [f64; 3],
    /// Smallest triangle-inequality margin; negative when the triangle cannot close.
    pub slack: f64,
}

impl ChainLinks {
    pub fn from_lengths(l: [f64; 3]) -> Self {
        let slack = (l[1] + l[2] - l[0]).min(l[0] + l[2] - l[1]).min(l[0] + l[1] - l[2]);
        Self { l, slack }
    }

    /// Area of the triangle with these sides, zero when it cannot close.
    pub fn area(&self) -> f64 {
        triangle_area(self.l)
    }
}

/// Heron's formula in the cancellation-free ordering.
fn triangle_area(l: [f64; 3]) -> f64 {
    let mut s = l;
    s.sort_by(|a, b| b.total_cmp(a));
    let [a, b, c] = s;
    let q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if q <= 0.0 {
        0.0
    } else {
        0.25 * q.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decision3 {
    pub verdict: Verdict3,
    pub links: ChainLinks,
}

fn require_dim(b: &BistochasticMatrix, n: usize, context: &'static str) -> Result<()> {
    if b.dim() != n {
        return Err(Error::UnsupportedDimension { n: b.dim(), context });
    }
    Ok(())
}

/// Link lengths for the column pair `(a, b)`.
pub fn chain_links(b: &BistochasticMatrix, cols: (usize, usize)) -> Result<ChainLinks> {
    require_dim(b, 3, "chain links are defined for N = 3")?;
    let (a, c) = cols;
    if a >= 3 || c >= 3 || a == c {
        return Err(Error::ParameterOutOfRange(format!(
            "column pair ({a}, {c}) must be two distinct columns of 0..3"
        )));
    }
    let m = b.as_matrix();
    let l = [0, 1, 2].map(|k| (m[(k, a)] * m[(k, c)]).sqrt());
    Ok(ChainLinks::from_lengths(l))
}

/// Chain-links verdict on columns 0 and 1.
pub fn decide3(b: &BistochasticMatrix) -> Result<Decision3> {
    decide3_pair(b, (0, 1))
}

pub fn decide3_pair(b: &BistochasticMatrix, cols: (usize, usize)) -> Result<Decision3> {
    let links = chain_links(b, cols)?;
    Ok(Decision3 {
        verdict: Verdict3::from_slack(links.slack),
        links,
    })
}

/// Slack of the chain links on columns 0 and 1 for a row-major 3×3 array.
#[inline]
pub(crate) fn slack_of_entries(e: &[f64; 9]) -> f64 {
    let l0 = (e[0] * e[1]).sqrt();
    let l1 = (e[3] * e[4]).sqrt();
    let l2 = (e[6] * e[7]).sqrt();
    (l1 + l2 - l0).min(l0 + l2 - l1).min(l0 + l1 - l2)
}

/// Angles `θ_k` with `Σ l_k e^{iθ_k} = 0`, the first nonzero segment at
/// angle 0. `branch = −1` mirrors the solution. Returns `None` when the
/// polygon cannot close within `tol`.
pub(crate) fn close_polygon(lengths: &[f64], branch: i8, tol: f64) -> Option<Vec<f64>> {
    let mut angles = vec![0.0; lengths.len()];
    let active: Vec<usize> = (0..lengths.len()).filter(|&k| lengths[k] > tol).collect();
    let total: f64 = active.iter().map(|&k| lengths[k]).sum();
    let longest = active.iter().map(|&k| lengths[k]).fold(0.0, f64::max);
    if 2.0 * longest > total + tol {
        return None;
    }
    match active.len() {
        0 => {}
        1 => return None,
        2 => angles[active[1]] = PI,
        _ => {
            let sub: Vec<f64> = active.iter().map(|&k| lengths[k]).collect();
            let sub_angles = close_active(&sub, branch);
            for (k, th) in active.iter().zip(sub_angles) {
                angles[*k] = th;
            }
        }
    }
    Some(angles)
}

/// Closing angles for three or more strictly positive, feasible lengths.
fn close_active(l: &[f64], branch: i8) -> Vec<f64> {
    let sign = if branch < 0 { -1.0 } else { 1.0 };
    if l.len() == 3 {
        let cos1 = ((l[2] * l[2] - l[0] * l[0] - l[1] * l[1]) / (2.0 * l[0] * l[1])).clamp(-1.0, 1.0);
        let th1 = sign * cos1.acos();
        let rest = -(Complex64::new(l[0], 0.0) + Complex64::from_polar(l[1], th1));
        return vec![0.0, th1, rest.arg()];
    }
    // Merge the first two segments into one of length r, chosen so that the
    // shorter polygon stays closable, then split it back.
    let tail = &l[2..];
    let tail_sum: f64 = tail.iter().sum();
    let tail_max = tail.iter().copied().fold(0.0, f64::max);
    let lo = (l[0] - l[1]).abs().max(2.0 * tail_max - tail_sum).max(0.0);
    let hi = (l[0] + l[1]).min(tail_sum);
    let r = 0.5 * (lo + hi.max(lo));
    let mut reduced = vec![r];
    reduced.extend_from_slice(tail);
    let reduced_angles = if r > 0.0 {
        close_active(&reduced, branch)
    } else {
        let mut a = vec![0.0];
        a.extend(close_polygon(tail, branch, 0.0).unwrap_or_else(|| vec![0.0; tail.len()]));
        a
    };
    let th_r = reduced_angles[0];
    let (th0, th1) = if r > 0.0 {
        let split = close_active(&[l[0], l[1], r], branch);
        // l0 e^{iα} + l1 e^{iβ} + r e^{iγ} = 0, so the pair sums to r e^{i(γ+π)}.
        let shift = th_r - (split[2] + PI);
        (split[0] + shift, split[1] + shift)
    } else {
        (0.0, PI)
    };
    let mut out = vec![th0, th1];
    out.extend_from_slice(&reduced_angles[1..]);
    let base = out[0];
    out.iter().map(|a| a - base).collect()
}

fn wrap(angle: f64) -> f64 {
    angle.rem_euclid(2.0 * PI)
}

/// Phases and area of the triangle built on columns 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleSolution {
    pub phi11: f64,
    pub phi21: f64,
    pub branch: i8,
    pub area: f64,
}

/// Phases of the dephased witness, both in `[0, 2π)`.
pub fn triangle_solution(b: &BistochasticMatrix, branch: i8) -> Result<TriangleSolution> {
    let u = reconstruct3_branch(b, branch)?;
    let m = u.as_matrix();
    Ok(TriangleSolution {
        phi11: wrap(m[(1, 1)].arg()),
        phi21: wrap(m[(2, 1)].arg()),
        branch: if branch < 0 { -1 } else { 1 },
        area: chain_links(b, (0, 1))?.area(),
    })
}

/// A dephased unitary whose image is `b`. Supports N = 2 and N = 3.
pub fn reconstruct3(b: &BistochasticMatrix) -> Result<UnitaryMatrix> {
    reconstruct3_branch(b, 1)
}

/// As [`reconstruct3`]; `branch = −1` selects the complex-conjugate witness.
pub fn reconstruct3_branch(b: &BistochasticMatrix, branch: i8) -> Result<UnitaryMatrix> {
    match b.dim() {
        2 => return Ok(reconstruct2(b)),
        3 => {}
        n => {
            return Err(Error::UnsupportedDimension {
                n,
                context: "exact reconstruction covers N = 2 and N = 3",
            })
        }
    }
    let d = decide3(b)?;
    if d.verdict == Verdict3::Outside {
        return Err(Error::NotUnistochastic);
    }
    let m = b.as_matrix();
    let r = m.map(f64::sqrt);
    let angles = close_polygon(&d.links.l, branch, SATURATION_TOL).ok_or(Error::NotUnistochastic)?;
    let shift = angles[0];
    let c0 = Vector3::from_fn(|k, _| Complex64::new(r[(k, 0)], 0.0));
    let c1 = Vector3::from_fn(|k, _| Complex64::from_polar(r[(k, 1)], angles[k] - shift));
    let mut c2 = c0.cross(&c1).map(|z| z.conj());
    if c2[0].norm() > 0.0 {
        let phase = c2[0].conj() / c2[0].norm();
        c2 *= phase;
    }
    let u = ComplexMatrix::from_fn(3, 3, |i, j| match j {
        0 => c0[i],
        1 => c1[i],
        _ => c2[i],
    });
    UnitaryMatrix::new(u)
}

/// Every 2×2 bistochastic matrix is orthostochastic: `[[c, s], [s, −c]]`.
fn reconstruct2(b: &BistochasticMatrix) -> UnitaryMatrix {
    let c = b.get(0, 0).sqrt();
    let s = b.get(0, 1).sqrt();
    let m = RealMatrix::from_row_slice(2, 2, &[c, s, s, -c]);
    UnitaryMatrix::from_real(&m).expect("2x2 reflection is orthogonal")
}

/// Unitarity triangle areas: column pairs (0,1), (0,2), (1,2), then the same row pairs.
pub fn unitarity_triangle_areas(b: &BistochasticMatrix) -> Result<[f64; 6]> {
    if !decide3(b)?.verdict.is_unistochastic() {
        return Err(Error::NotUnistochastic);
    }
    let t = b.transpose();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut out = [0.0; 6];
    for (k, p) in pairs.iter().enumerate() {
        out[k] = chain_links(b, *p)?.area();
        out[k + 3] = chain_links(&t, *p)?.area();
    }
    Ok(out)
}

/// Point `Δ₁(p) = p₀P₀ + p₃P₃ + p₄P₄` of the first equilateral triangle.
pub fn delta1(p: [f64; 3]) -> Result<BistochasticMatrix> {
    triangle_point([0, 3, 4], p)
}

/// Point `Δ₂(p) = p₁P₁ + p₂P₂ + p₅P₅` of the second equilateral triangle.
pub fn delta2(p: [f64; 3]) -> Result<BistochasticMatrix> {
    triangle_point([1, 2, 5], p)
}

fn triangle_point(corners: [usize; 3], p: [f64; 3]) -> Result<BistochasticMatrix> {
    let pts: Vec<BistochasticMatrix> = corners
        .iter()
        .map(|&k| PermutationMatrix::by_index(3, k).map(|c| c.to_bistochastic()))
        .collect::<Result<_>>()?;
    BistochasticMatrix::convex_combination(&p, &pts)
}

/// Orthonormal coordinates of the Δ₁ plane: `e_x` points at `P₀`, `e_y`
/// from `P₄` towards `P₃`.
pub fn delta1_axes() -> (RealMatrix, RealMatrix) {
    let star = RealMatrix::from_element(3, 3, 1.0 / 3.0);
    let p = |k| PermutationMatrix::by_index(3, k).unwrap().to_matrix();
    let ex = (p(0) - star) / 2f64.sqrt();
    let ey = (p(3) - p(4)) / 6f64.sqrt();
    (ex, ey)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionPoint {
    pub p0: f64,
    pub p3: f64,
    pub p4: f64,
    pub x: f64,
    pub y: f64,
}

/// Largest `s` keeping `B⋆ + s·dir` nonnegative.
fn max_step(dir: &RealMatrix) -> f64 {
    let n = dir.nrows() as f64;
    dir.iter()
        .filter(|v| **v < -1e-15)
        .map(|v| (1.0 / n) / -v)
        .fold(f64::INFINITY, f64::min)
}

fn slack_along(dir: &RealMatrix, s: f64) -> f64 {
    let m = RealMatrix::from_element(3, 3, 1.0 / 3.0) + dir * s;
    let e: [f64; 9] = std::array::from_fn(|k| m[(k / 3, k % 3)].max(0.0));
    slack_of_entries(&e)
}

/// Distance from the centre to the edge of the unistochastic set along a
/// unit direction of the 3×3 tangent space, by bisection to `tol`.
pub fn boundary_distance(dir: &RealMatrix, tol: f64) -> f64 {
    let s_max = max_step(dir);
    if slack_along(dir, s_max) >= 0.0 {
        return s_max;
    }
    let (mut lo, mut hi) = (0.0, s_max);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if slack_along(dir, mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Boundary of the unistochastic set in the Δ₁ plane, traced by radial
/// bisection at `resolution` equally spaced angles.
pub fn hypocycloid_section(resolution: usize) -> Result<Vec<SectionPoint>> {
    if resolution < 3 {
        return Err(Error::ParameterOutOfRange(format!(
            "resolution must be at least 3, got {resolution}"
        )));
    }
    let (ex, ey) = delta1_axes();
    let out = (0..resolution)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / resolution as f64;
            let dir = &ex * th.cos() + &ey * th.sin();
            let s = boundary_distance(&dir, 1e-12);
            let m = RealMatrix::from_element(3, 3, 1.0 / 3.0) + dir * s;
            SectionPoint {
                p0: m[(0, 0)],
                p3: m[(0, 1)],
                p4: m[(0, 2)],
                x: s * th.cos(),
                y: s * th.sin(),
            }
        })
        .collect();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallReport {
    pub samples: usize,
    pub radius: f64,
    pub failures: usize,
    pub rejected: usize,
    /// Distance from the centre to the closest boundary point found.
    pub boundary_distance: f64,
    /// Verdict just beyond the ball along the same direction.
    pub beyond_verdict: Verdict3,
}

/// Samples the ball of radius `√2/3 − 1e−6` uniformly in the 4-dimensional
/// affine hull and counts points the chain links reject; also locates the
/// boundary along the direction of closest approach.
pub fn ball_radius_check<R: Rng + ?Sized>(samples: usize, rng: &mut R) -> BallReport {
    let basis = tangent_basis(3);
    let radius = ball_radius() - 1e-6;
    let star = RealMatrix::from_element(3, 3, 1.0 / 3.0);
    let (mut failures, mut rejected) = (0, 0);
    for _ in 0..samples {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rho = radius * rng.random::<f64>().powf(0.25);
        let mut m = star.clone();
        for (c, e) in g.iter().zip(&basis) {
            m += e * (rho * c / norm);
        }
        match BistochasticMatrix::new(m) {
            Ok(b) => {
                if decide3(&b).map(|d| d.verdict) == Ok(Verdict3::Outside) {
                    failures += 1;
                }
            }
            Err(_) => rejected += 1,
        }
    }
    // The closest boundary point lies towards the midpoint of the edge opposite P₀.
    let (ex, _) = delta1_axes();
    let dir = -ex;
    let boundary = boundary_distance(&dir, 1e-13);
    let beyond = BistochasticMatrix::new(star + &dir * (ball_radius() + 0.01))
        .and_then(|b| decide3(&b))
        .map(|d| d.verdict)
        .unwrap_or(Verdict3::Outside);
    BallReport {
        samples,
        radius,
        failures,
        rejected,
        boundary_distance: boundary,
        beyond_verdict: beyond,
    }
}

/// Distance to the centre of a 3×3 matrix, convenience for reports.
pub fn center_distance(b: &BistochasticMatrix) -> f64 {
    distance_to_center(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::unistochastic_image;
    use approx::assert_abs_diff_eq;

    fn m3(v: [f64; 9]) -> BistochasticMatrix {
        BistochasticMatrix::new(RealMatrix::from_row_slice(3, 3, &v)).unwrap()
    }

    #[test]
    fn flat_matrix_is_interior() {
        let d = decide3(&BistochasticMatrix::van_der_waerden(3)).unwrap();
        assert_eq!(d.verdict, Verdict3::Interior);
        for l in d.links.l {
            assert_abs_diff_eq!(l, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn long_edge_midpoint_is_outside() {
        let b = delta1([0.5, 0.5, 0.0]).unwrap();
        let d = decide3(&b).unwrap();
        assert_eq!(d.verdict, Verdict3::Outside);
        assert_abs_diff_eq!(d.links.l[0], 0.5, epsilon = 1e-15);
        assert_eq!(d.links.l[1], 0.0);
        assert_eq!(d.links.l[2], 0.0);
    }

    #[test]
    fn saturated_links_are_boundary() {
        let b = m3([0.0, 0.5, 0.5, 0.5, 0.25, 0.25, 0.5, 0.25, 0.25]);
        let d = decide3(&b).unwrap();
        assert_eq!(d.verdict, Verdict3::Boundary);
        assert_eq!(d.links.l[0], 0.0);
        assert_abs_diff_eq!(d.links.l[1], 0.125f64.sqrt(), epsilon = 1e-15);
        let u = reconstruct3(&b).unwrap();
        assert!(u.is_real(1e-15));
        assert_eq!(unitarity_triangle_areas(&b).unwrap(), [0.0; 6]);
    }

    #[test]
    fn flat_matrix_reconstructs_to_fourier() {
        let b = BistochasticMatrix::van_der_waerden(3);
        let s = triangle_solution(&b, 1).unwrap();
        assert_abs_diff_eq!(s.phi11, 2.0 * PI / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.phi21, 4.0 * PI / 3.0, epsilon = 1e-14);
        let u = reconstruct3(&b).unwrap();
        let f = UnitaryMatrix::fourier(3);
        assert!((u.as_matrix() - f.as_matrix()).map(|z| z.norm()).max() < 1e-14);
    }

    #[test]
    fn conjugate_branch() {
        let b = delta1([0.5, 0.3, 0.2]).unwrap();
        let up = reconstruct3_branch(&b, 1).unwrap();
        let um = reconstruct3_branch(&b, -1).unwrap();
        assert!((um.as_matrix() - up.conj().as_matrix()).map(|z| z.norm()).max() < 1e-13);
        for u in [up, um] {
            assert!((u.image().as_matrix() - b.as_matrix()).amax() < 1e-13);
        }
    }

    #[test]
    fn two_by_two_is_orthostochastic() {
        for th in [0.0, 0.2, 0.9, PI / 2.0] {
            let b = BistochasticMatrix::two_by_two(th);
            let u = reconstruct3(&b).unwrap();
            assert!(u.is_real(0.0));
            assert!((u.image().as_matrix() - b.as_matrix()).amax() < 1e-15);
        }
    }

    #[test]
    fn flat_matrix_areas() {
        let a = unitarity_triangle_areas(&BistochasticMatrix::van_der_waerden(3)).unwrap();
        for v in a {
            assert_abs_diff_eq!(v, 3f64.sqrt() / 36.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn outside_refuses_reconstruction() {
        let b = delta1([0.5, 0.5, 0.0]).unwrap();
        assert_eq!(reconstruct3(&b), Err(Error::NotUnistochastic));
        assert_eq!(unitarity_triangle_areas(&b), Err(Error::NotUnistochastic));
    }

    #[test]
    fn corners_reconstruct() {
        for p in PermutationMatrix::all(3) {
            let b = p.to_bistochastic();
            assert_eq!(decide3(&b).unwrap().verdict, Verdict3::Boundary);
            let u = reconstruct3(&b).unwrap();
            assert!((u.image().as_matrix() - b.as_matrix()).amax() < 1e-15);
        }
    }

    #[test]
    fn polygon_closure_with_four_segments() {
        for l in [[1.0, 2.0, 2.5, 3.0], [1.0, 1.0, 1.0, 3.0], [0.1, 0.2, 0.3, 0.35]] {
            let a = close_polygon(&l, 1, 1e-12).unwrap();
            let s: Complex64 = l.iter().zip(&a).map(|(r, t)| Complex64::from_polar(*r, *t)).sum();
            assert!(s.norm() < 1e-12, "{l:?} {s}");
        }
        assert!(close_polygon(&[1.0, 1.0, 1.0, 3.5], 1, 1e-12).is_none());
        assert!(close_polygon(&[1.0, 0.0, 0.0], 1, 1e-12).is_none());
        assert_eq!(close_polygon(&[0.0, 0.0, 0.0], 1, 1e-12), Some(vec![0.0; 3]));
    }

    #[test]
    fn vertex_rays_reach_the_corners() {
        let pts = hypocycloid_section(3).unwrap();
        assert_abs_diff_eq!(pts[0].p0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].x, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn section_matches_deltoid_equation() {
        let a = ball_radius();
        for p in hypocycloid_section(90).unwrap() {
            let (x, y) = (p.x, p.y);
            let r2 = x * x + y * y;
            let lhs = r2 * r2 + 18.0 * a * a * r2 - 27.0 * a.powi(4);
            let rhs = 8.0 * a * (x.powi(3) - 3.0 * x * y * y);
            assert!((lhs - rhs).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn section_is_symmetric_under_rotation() {
        let pts = hypocycloid_section(12).unwrap();
        for k in 0..12 {
            let q = pts[(k + 4) % 12];
            let p = pts[k];
            assert_abs_diff_eq!(q.p0, p.p4, epsilon = 1e-10);
            assert_abs_diff_eq!(q.p3, p.p0, epsilon = 1e-10);
            assert_abs_diff_eq!(q.p4, p.p3, epsilon = 1e-10);
        }
    }

    #[test]
    fn facet_unistochastic_set_is_thin() {
        // In the facet B₀₀ = 0 the links reduce to L₁ = L₂, one equation.
        let b = |x: f64| {
            let y = 0.3;
            m3([0.0, 0.5, 0.5, x, y, 1.0 - x - y, 1.0 - x, 0.5 - y, x + y - 0.5])
        };
        let signs: Vec<Verdict3> = [0.3, 0.45, 0.6]
            .iter()
            .map(|&x| decide3(&b(x)).unwrap().verdict)
            .collect();
        assert_eq!(signs, vec![Verdict3::Outside, Verdict3::Outside, Verdict3::Outside]);
        // L₁ = L₂ ⇔ 0.3x = 0.2(1−x) ⇔ x = 0.4.
        assert_eq!(decide3(&b(0.4)).unwrap().verdict, Verdict3::Boundary);
    }

    #[test]
    fn image_of_haar_sample_has_equal_areas() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let u = crate::ensembles::sample_haar_unitary(3, &mut rng);
            let b = unistochastic_image(&u);
            let a = unitarity_triangle_areas(&b).unwrap();
            let spread = a.iter().fold(0.0f64, |m, v| m.max(*v)) - a.iter().fold(1.0f64, |m, v| m.min(*v));
            assert!(spread < 1e-10);
        }
    }
}
