//! Combinatorics and metric geometry of the 3×3 and 4×4 Birkhoff polytopes.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::ensembles::{minor_accepted, EstimateReport, Moments, Sharding};
use crate::error::{Error, Result};
use crate::matcore::{distance, inner, permute_matrix, BistochasticMatrix, PermutationMatrix, RealMatrix};
use crate::uni3::{delta1, delta2};

/// Corner indices of the six regular tetrahedra T₁..T₆.
pub const TETRAHEDRA: [[usize; 4]; 6] = [
    [0, 7, 16, 23],
    [1, 6, 17, 22],
    [2, 10, 13, 21],
    [3, 11, 12, 20],
    [4, 8, 15, 19],
    [5, 9, 14, 18],
];

/// Hyperplanes Π₁..Π₉ incident to each tetrahedron, as printed in the
/// reference table. Compared against the computed incidence.
pub const INCIDENCE_TABLE: [[bool; 9]; 6] = {
    const X: bool = true;
    const O: bool = false;
    [
        [O, X, X, X, O, X, X, X, O],
        [O, X, X, X, X, O, X, O, X],
        [X, O, X, O, X, X, X, X, O],
        [X, X, O, O, X, X, X, O, X],
        [X, O, X, X, X, O, O, X, X],
        [X, X, O, X, O, X, O, X, X],
    ]
};

const ON_PLANE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeTag {
    #[serde(rename = "4U")]
    FourU,
    #[serde(rename = "6")]
    Six,
    #[serde(rename = "8")]
    Eight,
    #[serde(rename = "8U")]
    EightU,
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeTag::FourU => "4U",
            EdgeTag::Six => "6",
            EdgeTag::Eight => "8",
            EdgeTag::EightU => "8U",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Angle {
    Acute,
    Right,
    Obtuse,
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Angle::Acute => "acute",
            Angle::Right => "right",
            Angle::Obtuse => "obtuse",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeClass {
    pub length_sq: u32,
    pub unistochastic: bool,
    pub angle_at_center: Angle,
    pub tag: EdgeTag,
}

impl EdgeClass {
    pub fn from_tag(tag: EdgeTag) -> Self {
        let (length_sq, unistochastic, angle_at_center) = match tag {
            EdgeTag::FourU => (4, true, Angle::Acute),
            EdgeTag::Six => (6, false, Angle::Right),
            EdgeTag::Eight => (8, false, Angle::Obtuse),
            EdgeTag::EightU => (8, true, Angle::Obtuse),
        };
        Self {
            length_sq,
            unistochastic,
            angle_at_center,
            tag,
        }
    }
}

/// Index `k` (0-based) of the tetrahedron holding corner `c`.
pub fn tetrahedron_of(c: usize) -> Option<usize> {
    TETRAHEDRA.iter().position(|t| t.contains(&c))
}

/// Class of the segment between corners `i` and `j` of the 4×4 polytope.
pub fn classify_edge(i: usize, j: usize) -> Result<EdgeClass> {
    for k in [i, j] {
        if k >= 24 {
            return Err(Error::IndexOutOfRange { index: k, bound: 24 });
        }
    }
    if i == j {
        return Err(Error::ParameterOutOfRange("an edge needs two distinct corners".into()));
    }
    let p = PermutationMatrix::by_index(4, i)?;
    let q = PermutationMatrix::by_index(4, j)?;
    let d2 = distance(&p.to_matrix(), &q.to_matrix())?.powi(2).round() as u32;
    let tag = match d2 {
        4 => EdgeTag::FourU,
        6 => EdgeTag::Six,
        8 if tetrahedron_of(i) == tetrahedron_of(j) => EdgeTag::EightU,
        8 => EdgeTag::Eight,
        _ => unreachable!("distinct 4x4 permutations differ in 2, 3 or 4 rows"),
    };
    let class = EdgeClass::from_tag(tag);
    // The angle follows from ⟨P−B⋆, Q−B⋆⟩ = 3 − (rows where they differ).
    debug_assert_eq!(
        class.angle_at_center,
        match 3 - p.hamming(&q) as i32 {
            1 => Angle::Acute,
            0 => Angle::Right,
            _ => Angle::Obtuse,
        }
    );
    Ok(class)
}

/// Number of corner pairs per edge class, in the order 4U, 6, 8, 8U.
pub fn edge_histogram() -> [(EdgeClass, usize); 4] {
    let mut counts: HashMap<EdgeTag, usize> = HashMap::new();
    for i in 0..24 {
        for j in i + 1..24 {
            let c = classify_edge(i, j).expect("valid corner pair");
            *counts.entry(c.tag).or_default() += 1;
        }
    }
    [EdgeTag::FourU, EdgeTag::Six, EdgeTag::Eight, EdgeTag::EightU]
        .map(|t| (EdgeClass::from_tag(t), counts.get(&t).copied().unwrap_or(0)))
}

/// One of the nine hyperplanes through the centre of the 4×4 polytope:
/// the entries in rows `{0, r}` and columns `{0, c}` sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperplane {
    /// 1-based label.
    pub m: usize,
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    #[serde(serialize_with = "serialize_matrix")]
    pub normal: RealMatrix,
}

fn serialize_matrix<S: serde::Serializer>(m: &RealMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for row in m.row_iter() {
        let r: Vec<f64> = row.iter().copied().collect();
        seq.serialize_element(&r)?;
    }
    seq.end()
}

impl Hyperplane {
    /// `m` in 1..=9; columns vary slowest.
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=9).contains(&m) {
            return Err(Error::IndexOutOfRange { index: m, bound: 10 });
        }
        let r = (m - 1) % 3 + 1;
        let c = (m - 1) / 3 + 1;
        let sign = |k: usize, other: usize| if k == 0 || k == other { 1.0 } else { -1.0 };
        let normal = RealMatrix::from_fn(4, 4, |i, j| 0.25 * sign(i, r) * sign(j, c));
        Ok(Self {
            m,
            rows: [0, r],
            cols: [0, c],
            normal,
        })
    }

    pub fn block_sum(&self, b: &RealMatrix) -> f64 {
        let mut s = 0.0;
        for &i in &self.rows {
            for &j in &self.cols {
                s += b[(i, j)];
            }
        }
        s
    }

    /// `⟨B − B⋆, n⟩`, which equals `block_sum(B) − 1` on the polytope.
    pub fn offset(&self, b: &RealMatrix) -> f64 {
        let centered = b.map(|v| v - 0.25);
        inner(&centered, &self.normal)
    }
}

/// Precomputed structure of the 4×4 polytope.
#[derive(Debug, Clone, Serialize)]
pub struct PolytopeAtlas4 {
    pub corners: Vec<Vec<usize>>,
    /// 1-based corner labels are the indices into `corners`.
    pub tetrahedra: [[usize; 4]; 6],
    pub hyperplanes: Vec<Hyperplane>,
    pub incidence: [[bool; 9]; 6],
}

impl PolytopeAtlas4 {
    pub fn build() -> Self {
        let corners = PermutationMatrix::all(4);
        let hyperplanes: Vec<Hyperplane> = (1..=9).map(|m| Hyperplane::new(m).unwrap()).collect();
        let mut incidence = [[false; 9]; 6];
        for (k, t) in TETRAHEDRA.iter().enumerate() {
            for (m, h) in hyperplanes.iter().enumerate() {
                incidence[k][m] = t
                    .iter()
                    .all(|&c| (h.block_sum(&corners[c].to_matrix()) - 1.0).abs() < ON_PLANE_TOL);
            }
        }
        Self {
            corners: corners.iter().map(|p| p.word().to_vec()).collect(),
            tetrahedra: TETRAHEDRA,
            hyperplanes,
            incidence,
        }
    }

    pub fn corner_matrix(&self, k: usize) -> RealMatrix {
        PermutationMatrix::from_word(self.corners[k].clone())
            .expect("atlas corners are permutations")
            .to_matrix()
    }

    /// 1-based labels of the hyperplanes containing tetrahedron `k` (0-based).
    pub fn incident_planes(&self, k: usize) -> Vec<usize> {
        (0..9).filter(|&m| self.incidence[k][m]).map(|m| m + 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub side_lengths_sq: [f64; 6],
    pub max_side_violation: f64,
    pub max_inner_product: f64,
    pub grid_points: usize,
}

impl Theorem1Report {
    pub fn max_violation(&self) -> f64 {
        self.max_side_violation.max(self.max_inner_product)
    }
}

fn simplex_grid(steps: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for a in 0..=steps {
        for b in 0..=steps - a {
            let c = steps - a - b;
            let s = steps as f64;
            out.push([a as f64 / s, b as f64 / s, c as f64 / s]);
        }
    }
    out
}

/// Checks that the 3×3 polytope contains two equilateral triangles of side
/// `√6` in orthogonal planes through the centre.
pub fn verify_theorem1(steps: usize) -> Theorem1Report {
    let p: Vec<RealMatrix> = PermutationMatrix::all(3).iter().map(|c| c.to_matrix()).collect();
    let sides = [(0, 3), (0, 4), (3, 4), (1, 2), (1, 5), (2, 5)];
    let side_lengths_sq = sides.map(|(a, b)| distance(&p[a], &p[b]).unwrap().powi(2));
    let max_side_violation = side_lengths_sq.iter().map(|d| (d - 6.0).abs()).fold(0.0, f64::max);
    let star = RealMatrix::from_element(3, 3, 1.0 / 3.0);
    let grid = simplex_grid(steps.max(1));
    let mut worst = 0.0_f64;
    for a in &grid {
        let d1 = delta1(*a).expect("grid weights are convex").into_matrix() - &star;
        for b in &grid {
            let d2 = delta2(*b).expect("grid weights are convex").into_matrix() - &star;
            worst = worst.max(inner(&d1, &d2).abs());
        }
    }
    Theorem1Report {
        side_lengths_sq,
        max_side_violation,
        max_inner_product: worst,
        grid_points: grid.len() * grid.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    /// Largest `|⟨n_i, n_j⟩ − δ_ij|`.
    pub normal_orthonormality: f64,
    /// Largest block-sum violation over vertices of incident tetrahedra.
    pub incidence_violation: f64,
    /// Largest disagreement between block-sum and normal encodings.
    pub encoding_mismatch: f64,
    pub incidence_matches_table: bool,
    /// Largest distance from a normal to the affine hull of a tetrahedron
    /// that should contain it.
    pub normal_containment: f64,
    pub planes_per_tetrahedron: Vec<usize>,
    pub tetrahedra_per_plane: Vec<usize>,
    pub planes_per_corner: Vec<usize>,
}

impl Theorem2Report {
    pub fn max_residual(&self) -> f64 {
        self.normal_orthonormality
            .max(self.incidence_violation)
            .max(self.encoding_mismatch)
            .max(self.normal_containment)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() < tol
            && self.incidence_matches_table
            && self.planes_per_tetrahedron.iter().all(|&c| c == 6)
            && self.tetrahedra_per_plane.iter().all(|&c| c == 4)
            && self.planes_per_corner.iter().all(|&c| c == 6)
    }
}

/// Residual of projecting `v` onto the span of `basis` (Gram-Schmidt).
fn span_residual(v: &RealMatrix, basis: &[RealMatrix]) -> f64 {
    let mut ortho: Vec<RealMatrix> = Vec::new();
    for b in basis {
        let mut x = b.clone();
        for o in &ortho {
            let c = inner(&x, o);
            x -= o * c;
        }
        let norm = inner(&x, &x).sqrt();
        if norm > 1e-12 {
            ortho.push(x / norm);
        }
    }
    let mut r = v.clone();
    for o in &ortho {
        let c = inner(&r, o);
        r -= o * c;
    }
    inner(&r, &r).sqrt()
}

pub fn verify_theorem2(atlas: &PolytopeAtlas4) -> Theorem2Report {
    let hs = &atlas.hyperplanes;
    let mut normal_orthonormality = 0.0_f64;
    for (i, a) in hs.iter().enumerate() {
        for (j, b) in hs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            normal_orthonormality = normal_orthonormality.max((inner(&a.normal, &b.normal) - target).abs());
        }
    }
    let corners: Vec<RealMatrix> = (0..24).map(|k| atlas.corner_matrix(k)).collect();
    let mut encoding_mismatch = 0.0_f64;
    let mut planes_per_corner = vec![0; 24];
    for (c, p) in corners.iter().enumerate() {
        for h in hs {
            encoding_mismatch = encoding_mismatch.max((h.block_sum(p) - 1.0 - h.offset(p)).abs());
            if h.offset(p).abs() < ON_PLANE_TOL {
                planes_per_corner[c] += 1;
            }
        }
    }
    let star = RealMatrix::from_element(4, 4, 0.25);
    let mut incidence_violation = 0.0_f64;
    let mut normal_containment = 0.0_f64;
    for (k, t) in atlas.tetrahedra.iter().enumerate() {
        let spanning: Vec<RealMatrix> = t.iter().map(|&c| &corners[c] - &star).collect();
        for (m, h) in hs.iter().enumerate() {
            if atlas.incidence[k][m] {
                for &c in t {
                    incidence_violation = incidence_violation.max(h.offset(&corners[c]).abs());
                }
            } else {
                normal_containment = normal_containment.max(span_residual(&h.normal, &spanning));
            }
        }
    }
    Theorem2Report {
        normal_orthonormality,
        incidence_violation,
        encoding_mismatch,
        incidence_matches_table: atlas.incidence == INCIDENCE_TABLE,
        normal_containment,
        planes_per_tetrahedron: atlas
            .incidence
            .iter()
            .map(|r| r.iter().filter(|b| **b).count())
            .collect(),
        tetrahedra_per_plane: (0..9)
            .map(|m| atlas.incidence.iter().filter(|r| r[m]).count())
            .collect(),
        planes_per_corner,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RayKind {
    I,
    II,
    III,
}

impl std::str::FromStr for RayKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(RayKind::I),
            "II" | "2" => Ok(RayKind::II),
            "III" | "3" => Ok(RayKind::III),
            _ => Err(format!("unknown ray kind {s:?} (I, II, III)")),
        }
    }
}

impl RayKind {
    /// `V₁ = Σ n_m`, `V₂ = V₁ − 2n₉`, `V₃ = V₁ − 2n₅ − 2n₉`.
    pub fn direction(self) -> RealMatrix {
        #[rustfmt::skip]
        let v: [f64; 16] = match self {
            RayKind::I => [
                9., -3., -3., -3.,
                -3., 1., 1., 1.,
                -3., 1., 1., 1.,
                -3., 1., 1., 1.,
            ],
            RayKind::II => [
                7., -1., -1., -5.,
                -1., -1., -1., 3.,
                -1., -1., -1., 3.,
                -5., 3., 3., -1.,
            ],
            RayKind::III => [
                5., 1., -3., -3.,
                1., -3., 1., 1.,
                -3., 1., -3., 5.,
                -3., 1., 5., -3.,
            ],
        };
        RealMatrix::from_row_slice(4, 4, &v) / 4.0
    }

    /// Coefficients of the direction in the normal basis.
    pub fn normal_coefficients(self) -> [f64; 9] {
        let mut c = [1.0; 9];
        match self {
            RayKind::I => {}
            RayKind::II => c[8] = -1.0,
            RayKind::III => {
                c[4] = -1.0;
                c[8] = -1.0;
            }
        }
        c
    }
}

/// Interval of `t` for which `B⋆ + t·V` is nonnegative.
pub fn admissible_interval(v: &RealMatrix) -> (f64, f64) {
    let base = 1.0 / v.nrows() as f64;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for &x in v.iter() {
        if x > 0.0 {
            lo = lo.max(-base / x);
        } else if x < 0.0 {
            hi = hi.min(base / -x);
        }
    }
    (lo, hi)
}

/// `B⋆ + t·V` along the canonical direction of `kind`.
pub fn central_ray(kind: RayKind, t: f64) -> Result<BistochasticMatrix> {
    ray_point(&kind.direction(), t)
}

/// As [`central_ray`] with the direction's rows and columns reordered.
pub fn central_ray_permuted(kind: RayKind, t: f64, rows: &[usize], cols: &[usize]) -> Result<BistochasticMatrix> {
    ray_point(&permute_matrix(&kind.direction(), rows, cols)?, t)
}

fn ray_point(v: &RealMatrix, t: f64) -> Result<BistochasticMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let (lo, hi) = admissible_interval(v);
    let m = RealMatrix::from_element(4, 4, 0.25) + v * t;
    BistochasticMatrix::new(m).map_err(|_| Error::OutOfPolytope { t, lo, hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OctantType {
    pub kind: RayKind,
    pub positive: bool,
}

impl fmt::Display for OctantType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            RayKind::I => "I",
            RayKind::II => "II",
            RayKind::III => "III",
        };
        write!(f, "{k}{}", if self.positive { "+" } else { "-" })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperoctant {
    /// Sign of `⟨B − B⋆, n_m⟩`; 0 means on the plane.
    pub signs: [i8; 9],
    /// `None` when the point lies on a hyperplane.
    pub octant: Option<OctantType>,
}

/// Maps each of the 2⁹ sign patterns to the orbit of `±V₁, ±V₂, ±V₃` under
/// row and column permutations that contains it.
pub struct OctantClassifier {
    table: HashMap<[i8; 9], OctantType>,
}

impl Default for OctantClassifier {
    fn default() -> Self {
        Self::new()
    }
}

impl OctantClassifier {
    pub fn new() -> Self {
        let hs: Vec<Hyperplane> = (1..=9).map(|m| Hyperplane::new(m).unwrap()).collect();
        let perms = PermutationMatrix::all(4);
        let mut table = HashMap::new();
        for kind in [RayKind::I, RayKind::II, RayKind::III] {
            let v = kind.direction();
            for p in &perms {
                for q in &perms {
                    let w = permute_matrix(&v, p.word(), q.word()).expect("valid permutation");
                    for positive in [true, false] {
                        let s = if positive { 1.0 } else { -1.0 };
                        let signs = hs.map_signs(&(&w * s));
                        table.entry(signs).or_insert(OctantType { kind, positive });
                    }
                }
            }
        }
        Self { table }
    }

    pub fn classify(&self, b: &RealMatrix) -> Hyperoctant {
        let hs: Vec<Hyperplane> = (1..=9).map(|m| Hyperplane::new(m).unwrap()).collect();
        let centered = b.map(|v| v - 0.25);
        let signs = hs.map_signs(&centered);
        let octant = if signs.contains(&0) {
            None
        } else {
            self.table.get(&signs).copied()
        };
        Hyperoctant { signs, octant }
    }

    /// Number of sign patterns in each octant type.
    pub fn orbit_sizes(&self) -> HashMap<OctantType, usize> {
        let mut out = HashMap::new();
        for t in self.table.values() {
            *out.entry(*t).or_default() += 1;
        }
        out
    }

    pub fn patterns(&self) -> usize {
        self.table.len()
    }
}

trait SignMap {
    fn map_signs(&self, centered: &RealMatrix) -> [i8; 9];
}

impl SignMap for Vec<Hyperplane> {
    fn map_signs(&self, centered: &RealMatrix) -> [i8; 9] {
        std::array::from_fn(|m| {
            let x = inner(centered, &self[m].normal);
            if x > ON_PLANE_TOL {
                1
            } else if x < -ON_PLANE_TOL {
                -1
            } else {
                0
            }
        })
    }
}

/// Signs and type of the hyperoctant containing a 4×4 bistochastic matrix.
pub fn hyperoctant_of(b: &BistochasticMatrix) -> Result<Hyperoctant> {
    if b.dim() != 4 {
        return Err(Error::UnsupportedDimension {
            n: b.dim(),
            context: "hyperoctants are defined for N = 4",
        });
    }
    Ok(OctantClassifier::new().classify(b.as_matrix()))
}

/// Gram determinant of the linear map sending the minor `(x, y, z, t)` to
/// the full 3×3 matrix, under the Frobenius metric.
pub fn minor_embedding_gram_det() -> f64 {
    // Columns: d/dx, d/dy, d/dz, d/dt of the completed 3x3 entries, row-major.
    #[rustfmt::skip]
    let j = DMatrix::from_row_slice(9, 4, &[
        1., 0., 0., 0.,
        0., 1., 0., 0.,
        -1., -1., 0., 0.,
        0., 0., 1., 0.,
        0., 0., 0., 1.,
        0., 0., -1., -1.,
        -1., 0., -1., 0.,
        0., -1., 0., -1.,
        1., 1., 1., 1.,
    ]);
    (j.transpose() * j).determinant()
}

/// Indicator moments of the minor test over `count` cube points.
pub fn b3_cube_moments<R: rand::Rng + ?Sized>(count: u64, rng: &mut R) -> Moments {
    let mut m = Moments::default();
    for _ in 0..count {
        let (x, y, z, t) = (rng.random(), rng.random(), rng.random(), rng.random());
        m.push(if minor_accepted(x, y, z, t) { 1.0 } else { 0.0 });
    }
    m.trials = m.count;
    m
}

/// Volume of the 3×3 polytope: accepted fraction of the minor cube times
/// the Jacobian of the minor embedding.
pub fn b3_volume_estimate(samples: u64, sharding: Sharding) -> EstimateReport {
    let jac = minor_embedding_gram_det().sqrt();
    let raw = sharding.run(samples, b3_cube_moments).report();
    EstimateReport {
        acceptance: Some(raw.mean),
        ..raw.scaled(jac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tetrahedron_edges() {
        assert_eq!(classify_edge(0, 7).unwrap().tag, EdgeTag::EightU);
        let c = classify_edge(0, 6).unwrap();
        assert_eq!((c.length_sq, c.tag), (4, EdgeTag::FourU));
        assert!(classify_edge(0, 24).is_err());
        assert!(classify_edge(3, 3).is_err());
    }

    #[test]
    fn histogram() {
        let h = edge_histogram();
        let counts: Vec<usize> = h.iter().map(|(_, n)| *n).collect();
        assert_eq!(counts, vec![72, 96, 72, 36]);
    }

    #[test]
    fn first_normal() {
        #[rustfmt::skip]
        let n1 = RealMatrix::from_row_slice(4, 4, &[
            1., 1., -1., -1.,
            1., 1., -1., -1.,
            -1., -1., 1., 1.,
            -1., -1., 1., 1.,
        ]) / 4.0;
        assert_eq!(Hyperplane::new(1).unwrap().normal, n1);
        assert_eq!(Hyperplane::new(1).unwrap().rows, [0, 1]);
        assert_eq!(Hyperplane::new(5).unwrap().rows, [0, 2]);
        assert_eq!(Hyperplane::new(5).unwrap().cols, [0, 2]);
        assert!(Hyperplane::new(0).is_err());
    }

    #[test]
    fn incidence_of_first_tetrahedron() {
        let atlas = PolytopeAtlas4::build();
        assert_eq!(atlas.incident_planes(0), vec![2, 3, 4, 6, 7, 8]);
        assert_eq!(atlas.incidence, INCIDENCE_TABLE);
    }

    #[test]
    fn rays_are_normal_sums() {
        let hs: Vec<Hyperplane> = (1..=9).map(|m| Hyperplane::new(m).unwrap()).collect();
        for kind in [RayKind::I, RayKind::II, RayKind::III] {
            let mut sum = RealMatrix::zeros(4, 4);
            for (c, h) in kind.normal_coefficients().iter().zip(&hs) {
                sum += &h.normal * *c;
            }
            assert!((sum - kind.direction()).amax() < 1e-15);
        }
    }

    #[test]
    fn first_ray_interval_and_ends() {
        let (lo, hi) = admissible_interval(&RayKind::I.direction());
        assert_eq!((lo, hi), (-1.0 / 9.0, 1.0 / 3.0));
        let top = central_ray(RayKind::I, 1.0 / 3.0).unwrap();
        assert_eq!(top.get(0, 0), 1.0);
        for i in 1..4 {
            for j in 1..4 {
                assert_abs_diff_eq!(top.get(i, j), 1.0 / 3.0, epsilon = 1e-15);
            }
        }
        let facet = central_ray(RayKind::I, -1.0 / 9.0).unwrap();
        assert_eq!(facet.zero_entries(1e-15), vec![(0, 0)]);
        assert_eq!(
            central_ray(RayKind::I, 0.0).unwrap(),
            BistochasticMatrix::van_der_waerden(4)
        );
        assert!(matches!(
            central_ray(RayKind::I, 0.34),
            Err(Error::OutOfPolytope { .. })
        ));
    }

    #[test]
    fn octant_of_first_ray() {
        let cls = OctantClassifier::new();
        assert_eq!(cls.patterns(), 512);
        let star = BistochasticMatrix::van_der_waerden(4);
        assert_eq!(cls.classify(star.as_matrix()).signs, [0; 9]);
        let up = central_ray(RayKind::I, 0.01).unwrap();
        let o = cls.classify(up.as_matrix());
        assert_eq!(o.signs, [1; 9]);
        assert_eq!(o.octant.unwrap().to_string(), "I+");
        let down = central_ray(RayKind::I, -0.01).unwrap();
        assert_eq!(cls.classify(down.as_matrix()).octant.unwrap().to_string(), "I-");
        let sizes = cls.orbit_sizes();
        assert_eq!(
            sizes[&OctantType {
                kind: RayKind::I,
                positive: true
            }],
            16
        );
        assert_eq!(
            sizes[&OctantType {
                kind: RayKind::I,
                positive: false
            }],
            16
        );
    }

    #[test]
    fn minor_embedding_jacobian() {
        assert_abs_diff_eq!(minor_embedding_gram_det(), 81.0, epsilon = 1e-10);
    }

    #[test]
    fn theorem_one_small_grid() {
        let r = verify_theorem1(4);
        assert!(r.max_violation() < 1e-12);
        assert_eq!(r.grid_points, 225);
    }

    #[test]
    fn theorem_two() {
        let r = verify_theorem2(&PolytopeAtlas4::build());
        assert!(r.holds(1e-12), "{r:?}");
    }
}
