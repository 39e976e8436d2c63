//! Phases along the central ray `B⋆ + t·V₁`.
//!
//! With the fourth column moved to the end, the first three columns of the
//! dephased unitary have moduli `√(1−3t)/2` in row 0 and `√(1+t)/2`
//! elsewhere. Their orthogonality reduces to three sums of unimodular
//! numbers, each equal to `−L` with `L = (1−3t)/(1+t)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::orthogonal_complement;
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, UnitaryMatrix};
use crate::polytope::{admissible_interval, RayKind};

/// `L(t) = (1 − 3t)/(1 + t)`.
pub fn ray_l(t: f64) -> f64 {
    (1.0 - 3.0 * t) / (1.0 + t)
}

/// Phase triples of the reduced system
/// `Σ e^{iφ_j} = Σ e^{iψ_j} = Σ e^{i(φ_j+ψ_j)} = −L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseTriple {
    pub phi: [f64; 3],
    pub psi: [f64; 3],
}

/// Moduli of the three residuals.
pub fn phase_system_residuals(s: &PhaseTriple, l: f64) -> [f64; 3] {
    let sum = |f: &dyn Fn(usize) -> f64| -> f64 {
        let z: Complex64 = (0..3).map(|j| Complex64::from_polar(1.0, f(j))).sum();
        (z + l).norm()
    };
    [sum(&|j| s.phi[j]), sum(&|j| s.psi[j]), sum(&|j| s.phi[j] + s.psi[j])]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseSolutionSet {
    /// No real solution.
    Empty,
    /// A single solution up to relabelling `j` and conjugation.
    Isolated { solution: PhaseTriple, proven_unique: bool },
    /// `L = 0`: two free phases.
    FamilyL0,
    /// `L = 1`: one free phase.
    FamilyL1,
}

impl PhaseSolutionSet {
    /// Member of the `L = 0` family.
    pub fn member_l0(phi: f64, psi: f64) -> PhaseTriple {
        let w = 2.0 * PI / 3.0;
        PhaseTriple {
            phi: [phi, phi + w, phi + 2.0 * w],
            psi: [psi, psi + w, psi + 2.0 * w],
        }
    }

    /// Member of the `L = 1` family.
    pub fn member_l1(phi: f64) -> PhaseTriple {
        PhaseTriple {
            phi: [phi, PI, phi + PI],
            psi: [PI - phi, PI, -phi],
        }
    }

    /// A representative solution, if any.
    pub fn representative(&self) -> Option<PhaseTriple> {
        match self {
            PhaseSolutionSet::Empty => None,
            PhaseSolutionSet::Isolated { solution, .. } => Some(*solution),
            PhaseSolutionSet::FamilyL0 => Some(Self::member_l0(0.0, 0.0)),
            PhaseSolutionSet::FamilyL1 => Some(Self::member_l1(0.0)),
        }
    }
}

fn isolated(phi: f64) -> PhaseTriple {
    PhaseTriple {
        phi: [0.0, phi, -phi],
        psi: [-phi, 0.0, phi],
    }
}

/// Classifies the solutions of the reduced phase system for a given `L`.
///
/// Beyond `0 ≤ L ≤ 1` the same closed form still solves the system for
/// `−3 ≤ L < 0`; it is returned without a uniqueness claim.
pub fn solve_phase_system(l: f64) -> PhaseSolutionSet {
    const EDGE: f64 = 1e-14;
    if !l.is_finite() || !(-3.0 - EDGE..=1.0 + EDGE).contains(&l) {
        return PhaseSolutionSet::Empty;
    }
    if l.abs() <= EDGE {
        return PhaseSolutionSet::FamilyL0;
    }
    if (l - 1.0).abs() <= EDGE {
        return PhaseSolutionSet::FamilyL1;
    }
    let phi = (-(l + 1.0) / 2.0).clamp(-1.0, 1.0).acos();
    PhaseSolutionSet::Isolated {
        solution: isolated(phi),
        proven_unique: l > 0.0 && l < 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayPhaseSolution {
    pub t: f64,
    pub l: f64,
    pub phi: f64,
    /// `φ_{jk}` for rows `j = 1..3` and columns `k = 1, 2` of the dephased
    /// three-column block.
    pub phases: [[f64; 2]; 3],
}

/// Closed-form phases for `B⋆ + t·V₁`, `0 ≤ t ≤ 1/3`.
pub fn ray_phases(t: f64) -> Result<RayPhaseSolution> {
    let (lo, hi) = admissible_interval(&RayKind::I.direction());
    if !(t >= lo - 1e-15 && t <= hi + 1e-15) {
        return Err(Error::OutOfPolytope { t, lo, hi });
    }
    let l = ray_l(t);
    if l > 1.0 {
        return Err(Error::Infeasible { l });
    }
    let phi = (-(l + 1.0) / 2.0).clamp(-1.0, 1.0).acos();
    Ok(RayPhaseSolution {
        t,
        l,
        phi,
        phases: [[0.0, phi], [phi, 0.0], [-phi, -phi]],
    })
}

/// Unitary whose image is `B⋆ + t·V₁`.
pub fn ray_unitary(t: f64) -> Result<UnitaryMatrix> {
    let sol = ray_phases(t)?;
    let top = ((1.0 - 3.0 * t).max(0.0)).sqrt() / 2.0;
    let rest = (1.0 + t).sqrt() / 2.0;
    let mut u = ComplexMatrix::zeros(4, 4);
    for k in 0..3 {
        u[(0, k)] = Complex64::new(top, 0.0);
    }
    for j in 1..4 {
        u[(j, 0)] = Complex64::new(rest, 0.0);
        for k in 1..3 {
            u[(j, k)] = Complex64::from_polar(rest, sol.phases[j - 1][k - 1]);
        }
    }
    let v = orthogonal_complement(&u, &[0, 1, 2]);
    u.set_column(3, &v);
    // The free column carries the large entry of row 0; put it first.
    let w = ComplexMatrix::from_fn(4, 4, |i, j| u[(i, (j + 3) % 4)]);
    UnitaryMatrix::with_tolerance(w, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::distance;
    use crate::polytope::central_ray;

    #[test]
    fn l_at_the_ends() {
        assert!((ray_l(1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(ray_l(0.0), 1.0);
        assert!((ray_l(-1.0 / 9.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn image_matches_the_ray() {
        for k in 0..=12 {
            let t = k as f64 / 36.0;
            let u = ray_unitary(t).unwrap();
            assert!(u.residual() < 1e-12);
            let b = central_ray(RayKind::I, t).unwrap();
            assert!(
                distance(u.image().as_matrix(), b.as_matrix()).unwrap() < 1e-12,
                "t = {t}"
            );
        }
    }

    #[test]
    fn third_point_cosine() {
        let s = ray_phases(1.0 / 3.0).unwrap();
        assert!((s.phi.cos() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn tends_to_real_hadamard() {
        let u = ray_unitary(1e-12).unwrap();
        assert!(u.is_real(1e-5));
        assert!(u.as_matrix().iter().all(|z| (z.norm() - 0.5).abs() < 1e-5));
    }

    #[test]
    fn infeasible_below_zero() {
        assert!(matches!(ray_phases(-1.0 / 9.0), Err(Error::Infeasible { .. })));
        assert!(matches!(ray_phases(0.5), Err(Error::OutOfPolytope { .. })));
    }

    #[test]
    fn solution_classes() {
        assert_eq!(solve_phase_system(2.0), PhaseSolutionSet::Empty);
        assert_eq!(solve_phase_system(-3.5), PhaseSolutionSet::Empty);
        assert_eq!(solve_phase_system(0.0), PhaseSolutionSet::FamilyL0);
        assert_eq!(solve_phase_system(1.0), PhaseSolutionSet::FamilyL1);
        let PhaseSolutionSet::Isolated {
            solution,
            proven_unique,
        } = solve_phase_system(0.5)
        else {
            panic!()
        };
        assert!(proven_unique);
        assert!((solution.phi[1].cos() + 0.75).abs() < 1e-15);
        assert!(phase_system_residuals(&solution, 0.5).iter().all(|r| *r < 1e-12));
        let r = phase_system_residuals(&PhaseSolutionSet::member_l0(0.3, 1.1), 0.0);
        assert!(r.iter().all(|r| *r < 1e-12));
        let r = phase_system_residuals(&PhaseSolutionSet::member_l1(0.7), 1.0);
        assert!(r.iter().all(|r| *r < 1e-12));
    }
}
