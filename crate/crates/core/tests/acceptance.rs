//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::Instant;

use birkhoff::ensembles::{
    estimate_entropy, estimate_volume_ratio_u3, sample_flat_b3, sample_haar_unitary, stream_rng, Ensemble, Sharding,
};
use birkhoff::matcore::{distance, unitarity_residual, PermutationMatrix, UnitaryMatrix};
use birkhoff::polytope::{
    admissible_interval, b3_volume_estimate, central_ray, edge_histogram, verify_theorem1, verify_theorem2, EdgeTag,
    PolytopeAtlas4, RayKind, INCIDENCE_TABLE,
};
use birkhoff::uni3::{ball_radius, ball_radius_check, decide3, reconstruct3};
use birkhoff::uni4::{
    annihilating_normals, phase_system_residuals, ray_unitary, search_unistochastic, solve_phase_system, tangent_rank,
    PhaseSolutionSet, SolverConfig, SolverVerdict,
};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn volume_ratio() -> Outcome {
    let full = estimate_volume_ratio_u3(10_000_000, Sharding::new(1));
    let smoke = estimate_volume_ratio_u3(1_000_000, Sharding::new(2));
    check(
        (full.mean - 0.7520).abs() <= 0.002 && (smoke.mean - 0.7520).abs() <= 0.005,
        format!(
            "ratio {:.5} ± {:.5} at 1e7, {:.5} at 1e6 (target 0.7520)",
            full.mean, full.stderr, smoke.mean
        ),
    )
}

fn entropy_averages() -> Outcome {
    let b = estimate_entropy(Ensemble::FlatB3, 1_000_000, Sharding::new(3));
    let u = estimate_entropy(Ensemble::FlatU3, 1_000_000, Sharding::new(4));
    let h = estimate_entropy(Ensemble::HaarU3, 100_000, Sharding::new(5));
    check(
        (b.mean - 0.883).abs() <= 0.003 && (u.mean - 0.908).abs() <= 0.003 && (h.mean - 5.0 / 6.0).abs() <= 0.003,
        format!("S_B {:.5}, S_U {:.5}, S_Haar {:.5}", b.mean, u.mean, h.mean),
    )
}

fn b3_volume() -> Outcome {
    let v = b3_volume_estimate(10_000_000, Sharding::new(6));
    check(
        (v.mean / 1.125 - 1.0).abs() < 0.01,
        format!("volume {:.5} ± {:.5} (target 9/8)", v.mean, v.stderr),
    )
}

fn geometry() -> Outcome {
    let hist: Vec<(EdgeTag, usize)> = edge_histogram().iter().map(|(c, n)| (c.tag, *n)).collect();
    let counts: Vec<usize> = hist.iter().map(|(_, n)| *n).collect();
    let atlas = PolytopeAtlas4::build();
    let t1 = verify_theorem1(20);
    let t2 = verify_theorem2(&atlas);
    let (lo, hi) = admissible_interval(&RayKind::I.direction());
    let ok = counts == [72, 96, 72, 36]
        && atlas.incidence == INCIDENCE_TABLE
        && t1.max_violation() < 1e-12
        && t2.holds(1e-12)
        && (lo + 1.0 / 9.0).abs() < 1e-16
        && (hi - 1.0 / 3.0).abs() < 1e-16;
    check(
        ok,
        format!(
            "edges {counts:?}, incidence table {}, residuals {:.1e}/{:.1e}, interval [{lo:.6}, {hi:.6}]",
            atlas.incidence == INCIDENCE_TABLE,
            t1.max_violation(),
            t2.max_residual()
        ),
    )
}

fn n3_oracle() -> Outcome {
    let mut rng = stream_rng(7, 0);
    let cfg = SolverConfig::default().with_seed(70).with_restarts(3);
    let (mut compared, mut buffered, mut disagree, mut worst_rt) = (0, 0, 0, 0.0_f64);
    for i in 0..1000 {
        let b = sample_flat_b3(&mut rng);
        let d = decide3(&b).map_err(|e| e.to_string())?;
        if d.verdict.is_unistochastic() {
            let u = reconstruct3(&b).map_err(|e| e.to_string())?;
            let rt = distance(u.image().as_matrix(), b.as_matrix()).unwrap();
            worst_rt = worst_rt.max(rt).max(u.residual());
        }
        if d.links.slack.abs() < 1e-4 {
            buffered += 1;
            continue;
        }
        let r = search_unistochastic(&b, &cfg.with_seed(70 + i)).map_err(|e| e.to_string())?;
        compared += 1;
        if d.verdict.is_unistochastic() != (r.d_min < 1e-6) {
            disagree += 1;
        }
    }
    check(
        disagree == 0 && worst_rt < 1e-10,
        format!("{compared} compared, {buffered} in the buffer, {disagree} disagreements, round trip {worst_rt:.1e}"),
    )
}

fn ball() -> Outcome {
    let mut rng = stream_rng(8, 0);
    let r = ball_radius_check(100_000, &mut rng);
    check(
        r.failures == 0
            && r.rejected == 0
            && (r.boundary_distance - ball_radius()).abs() < 1e-6
            && !r.beyond_verdict.is_unistochastic(),
        format!(
            "{} samples, {} failures, boundary at {:.9} (√2/3 = {:.9})",
            r.samples,
            r.failures,
            r.boundary_distance,
            ball_radius()
        ),
    )
}

fn appendix_c() -> Outcome {
    let mut worst = 0.0_f64;
    let mut extra = 0;
    for k in 1..=20 {
        let l = k as f64 / 21.0;
        let PhaseSolutionSet::Isolated {
            solution,
            proven_unique: true,
        } = solve_phase_system(l)
        else {
            return Err(format!("L = {l}: no isolated solution"));
        };
        worst = worst.max(phase_system_residuals(&solution, l).into_iter().fold(0.0, f64::max));
        let roots = common::grid_roots(l, 0.5, 1e-10);
        if roots.is_empty() {
            return Err(format!("L = {l}: grid oracle found nothing"));
        }
        extra += roots
            .iter()
            .filter(|r| !common::equivalent((r.phi, r.psi), (solution.phi, solution.psi), 1e-6))
            .count();
    }
    let beyond = [1.2, 1.5, 2.0];
    let beyond_min = beyond
        .iter()
        .map(|&l| common::grid_min_residual(l))
        .fold(f64::INFINITY, f64::min);
    let beyond_roots: usize = beyond.iter().map(|&l| common::grid_roots(l, 0.5, 1e-8).len()).sum();
    let empty = beyond.iter().all(|&l| solve_phase_system(l) == PhaseSolutionSet::Empty);
    let mut rng = stream_rng(9, 0);
    let mut fam = 0.0_f64;
    for _ in 0..10 {
        let (a, b, c): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let tau = std::f64::consts::TAU;
        let s0 = PhaseSolutionSet::member_l0(a * tau, b * tau);
        let s1 = PhaseSolutionSet::member_l1(c * tau);
        fam = fam
            .max(phase_system_residuals(&s0, 0.0).into_iter().fold(0.0, f64::max))
            .max(phase_system_residuals(&s1, 1.0).into_iter().fold(0.0, f64::max));
    }
    check(
        worst < 1e-12 && extra == 0 && beyond_roots == 0 && empty && fam < 1e-12,
        format!(
            "closed form {worst:.1e}, inequivalent grid roots {extra}, L>1 roots {beyond_roots} (min grid residual {beyond_min:.3}), families {fam:.1e}"
        ),
    )
}

fn theorem4() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, t) in [0.01, 0.02, 0.05].into_iter().enumerate() {
        let minus = central_ray(RayKind::I, -t).map_err(|e| e.to_string())?;
        let mut d_min = f64::INFINITY;
        for seed in 0..4u64 {
            let cfg = SolverConfig::default()
                .with_seed(1000 * (k as u64 + 1) + seed)
                .with_restarts(25);
            let r = search_unistochastic(&minus, &cfg).map_err(|e| e.to_string())?;
            d_min = d_min.min(r.d_min);
        }
        let u = ray_unitary(t).map_err(|e| e.to_string())?;
        let plus = central_ray(RayKind::I, t).map_err(|e| e.to_string())?;
        let err = distance(u.image().as_matrix(), plus.as_matrix())
            .unwrap()
            .max(u.residual());
        ok &= d_min > 1e-3 && err < 1e-12;
        parts.push(format!("t={t}: d_min(−) {d_min:.4}, witness(+) {err:.1e}"));
    }
    check(ok, parts.join("; "))
}

fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let q = g.qr().q();
    UnitaryMatrix::from_real(&q).expect("QR factor is orthogonal")
}

fn tangent_ranks() -> Outcome {
    let mut rng = stream_rng(10, 0);
    let haar_full = (0..100)
        .filter(|_| tangent_rank(&sample_haar_unitary(4, &mut rng)).map(|r| r.rank) == Ok(9))
        .count();
    let orth_max = (0..100)
        .map(|_| tangent_rank(&random_orthogonal(4, &mut rng)).unwrap().rank)
        .max()
        .unwrap();
    let perm_max = PermutationMatrix::all(4)
        .iter()
        .map(|p| tangent_rank(&p.to_unitary()).unwrap().rank)
        .max()
        .unwrap();
    let mut planes = Vec::new();
    for phi in [0.1, 1.0, 2.5] {
        let r = tangent_rank(&UnitaryMatrix::hadamard_family(phi)).map_err(|e| e.to_string())?;
        planes.push(annihilating_normals(&r).map_err(|e| e.to_string())?);
    }
    check(
        haar_full == 100 && orth_max <= 6 && perm_max == 0 && planes.iter().all(|p| p.len() == 1),
        format!("Haar rank 9 in {haar_full}/100, orthogonal max {orth_max}, permutations max {perm_max}, H(φ) planes {planes:?}"),
    )
}

fn solver_calibration() -> Outcome {
    let mut rng = stream_rng(11, 0);
    let mut times = Vec::new();
    let mut worst = 0.0_f64;
    let mut failures = 0;
    for i in 0..100 {
        let u = sample_haar_unitary(4, &mut rng);
        debug_assert!(unitarity_residual(u.as_matrix()) < 1e-12);
        let b = u.image();
        let start = Instant::now();
        let r = search_unistochastic(&b, &SolverConfig::default().with_seed(500 + i)).map_err(|e| e.to_string())?;
        times.push(start.elapsed().as_secs_f64());
        if r.verdict != SolverVerdict::Unistochastic {
            failures += 1;
        }
        worst = worst.max(r.d_min);
    }
    times.sort_by(f64::total_cmp);
    let median = 0.5 * (times[49] + times[50]);
    check(
        failures == 0 && worst < 1e-6 && median < 5.0,
        format!("{failures} failures, worst d_min {worst:.1e}, median {median:.3} s"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("volume ratio of the unistochastic set", volume_ratio),
        ("entropy averages", entropy_averages),
        ("volume of the 3x3 polytope", b3_volume),
        ("polytope geometry", geometry),
        ("exact test against the solver", n3_oracle),
        ("ball around the centre", ball),
        ("phase system on the central ray", appendix_c),
        ("no unistochastic points just below the centre", theorem4),
        ("tangent map ranks", tangent_ranks),
        ("solver calibration", solver_calibration),
    ];
    // BIRKHOFF_CRITERIA=1,4 restricts the run to those criteria.
    let only: Option<Vec<usize>> = std::env::var("BIRKHOFF_CRITERIA")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(k + 1))) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1} s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1} s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
