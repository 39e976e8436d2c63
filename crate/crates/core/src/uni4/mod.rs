//! N = 4: stochastic search, exact boundary test, the analytic central ray,
//! structured families and the tangent map.

mod boundary;
mod families;
mod ray;
mod solver;
mod tangent;

pub use boundary::{boundary_check4, BoundaryReason, BoundaryVerdict, BOUNDARY_TOL};
pub use families::{
    auberson_a, auberson_b, auberson_c, in_family_a, in_family_b, in_family_c, tensor_from_bistochastic,
    tensor_unistochastic, tetrahedron_witness, TensorFamily,
};
pub use ray::{
    phase_system_residuals, ray_l, ray_phases, ray_unitary, solve_phase_system, PhaseSolutionSet, PhaseTriple,
    RayPhaseSolution,
};
pub use solver::{search_unistochastic, RestartTrace, SolverConfig, SolverReport, SolverVerdict};
pub use tangent::{annihilating_normals, tangent_rank, TangentReport};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::matcore::ComplexMatrix;

/// Unit vector orthogonal to the given orthonormal columns, taken from the
/// standard basis vector with the largest residual.
pub(crate) fn orthogonal_complement(m: &ComplexMatrix, known: &[usize]) -> DVector<Complex64> {
    let n = m.nrows();
    let mut best = DVector::zeros(n);
    let mut best_norm = -1.0;
    for k in 0..n {
        let mut v = DVector::<Complex64>::zeros(n);
        v[k] = Complex64::new(1.0, 0.0);
        // Two passes of Gram-Schmidt keep the result orthogonal to roundoff.
        for _ in 0..2 {
            for &j in known {
                let c = m.column(j);
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        if norm > best_norm {
            best_norm = norm;
            best = v / Complex64::new(norm, 0.0);
        }
    }
    best
}
