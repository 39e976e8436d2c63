use std::f64::consts::PI;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use birkhoff::ensembles::{
    estimate_entropy, estimate_volume_ratio_u3, sample_flat_b3, sample_haar_unitary, stream_rng, Ensemble,
    EstimateReport, Sharding,
};
use birkhoff::io::{complex_to_json, complex_to_text, parse_matrix, real_to_json, real_to_text};
use birkhoff::matcore::{
    distance_to_center, BistochasticMatrix, PermutationMatrix, RealMatrix, UnitaryMatrix, PAPER_ALPHA_MIN,
};
use birkhoff::polytope::{
    admissible_interval, b3_volume_estimate, central_ray, edge_histogram, hyperoctant_of, verify_theorem1,
    verify_theorem2, Hyperplane, OctantClassifier, PolytopeAtlas4, RayKind, TETRAHEDRA,
};
use birkhoff::uni3::{boundary_distance, decide3, delta1, delta2, hypocycloid_section, reconstruct3};
use birkhoff::uni4::{
    annihilating_normals, auberson_a, auberson_b, auberson_c, boundary_check4, ray_l, ray_unitary,
    search_unistochastic, tangent_rank, tetrahedron_witness, BoundaryReason, SolverConfig, SolverVerdict,
};
use birkhoff::Error;
use serde_json::{json, Value};

use crate::table::{Format, Table};
use crate::{
    AtlasView, Cli, Command, ExperimentKind, GenerateCmd, GeometryCmd, Plane, SolverArgs, EXIT_COMPUTE,
    EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_NOT_UNISTOCHASTIC, EXIT_OK,
};

/// An error together with the exit code it maps to.
pub struct Failure {
    pub error: anyhow::Error,
    pub code: u8,
}

impl Failure {
    fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            error: error.into(),
            code: EXIT_INPUT,
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NotUnistochastic | Error::Infeasible { .. } | Error::ZeroPivot { .. } | Error::NoZeroEntry => {
            EXIT_COMPUTE
        }
        _ => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: error_code(&e),
            error: e.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Self {
            error,
            code: EXIT_COMPUTE,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            error: e.into(),
            code: EXIT_COMPUTE,
        }
    }
}

type Outcome = Result<u8, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Check {
            file,
            n,
            witness,
            solver,
        } => check(f, file, *n, witness.as_deref(), solver),
        Command::Geometry { what } => geometry(f, what),
        Command::Atlas { view } => atlas(f, *view),
        Command::Ray {
            kind,
            t,
            steps,
            solve,
            solver,
        } => ray(f, *kind, *t, *steps, *solve, solver),
        Command::CrossSection { plane, resolution } => cross_section(f, *plane, *resolution),
        Command::Experiment {
            kind,
            samples,
            ensemble,
            shards,
            out,
            seed,
        } => experiment(f, *kind, *samples, *ensemble, *shards, out.as_deref(), seed.seed),
        Command::TangentRank {
            file,
            hadamard,
            haar,
            permutation,
            seed,
        } => tangent(f, file.as_deref(), *hadamard, *haar, *permutation, seed.seed),
        Command::Generate { what } => generate(f, what),
    }
}

fn emit(table: &Table, format: Format, record: bool) -> Outcome {
    table.write(io::stdout().lock(), format, record)?;
    Ok(EXIT_OK)
}

fn read_input(file: &Path) -> Result<String, Failure> {
    if file == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
        Ok(s)
    } else {
        fs::read_to_string(file)
            .with_context(|| format!("cannot read {}", file.display()))
            .map_err(Failure::input)
    }
}

fn solver_config(args: &SolverArgs) -> Result<SolverConfig, Failure> {
    let cfg = SolverConfig {
        alpha_min: if args.paper_alpha {
            PAPER_ALPHA_MIN
        } else {
            args.alpha_min
        },
        eps: args.eps,
        restarts: args.restarts,
        max_steps: args.max_steps,
        seed: args.seed.seed,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn matrix_text(u: &UnitaryMatrix) -> String {
    if u.is_real(0.0) {
        real_to_text(&u.as_matrix().map(|z| z.re))
    } else {
        complex_to_text(u.as_matrix())
    }
}

fn matrix_json(u: &UnitaryMatrix) -> Value {
    if u.is_real(0.0) {
        real_to_json(&u.as_matrix().map(|z| z.re))
    } else {
        complex_to_json(u.as_matrix())
    }
}

fn sidecar(file: &Path, format: Format) -> Option<PathBuf> {
    if file == Path::new("-") {
        return None;
    }
    let stem = file.file_stem()?.to_string_lossy();
    let ext = match format {
        Format::Csv => "txt",
        Format::Json => "json",
    };
    Some(file.with_file_name(format!("{stem}.witness.{ext}")))
}

fn write_witness(path: &Path, u: &UnitaryMatrix) -> Result<(), Failure> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&matrix_json(u)).map_err(anyhow::Error::from)?
        )
    } else {
        matrix_text(u)
    };
    fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

struct CheckResult {
    method: &'static str,
    verdict: &'static str,
    d_min: Option<f64>,
    detail: String,
    witness: Option<UnitaryMatrix>,
    code: u8,
}

fn found(method: &'static str, detail: String, u: UnitaryMatrix, d_min: Option<f64>) -> CheckResult {
    CheckResult {
        method,
        verdict: "unistochastic",
        d_min,
        detail,
        witness: Some(u),
        code: EXIT_OK,
    }
}

fn not_found(method: &'static str, detail: String) -> CheckResult {
    CheckResult {
        method,
        verdict: "not unistochastic",
        d_min: None,
        detail,
        witness: None,
        code: EXIT_NOT_UNISTOCHASTIC,
    }
}

fn decide(b: &BistochasticMatrix, args: &SolverArgs) -> Result<CheckResult, Failure> {
    match b.dim() {
        1 => return Ok(found("trivial", String::new(), UnitaryMatrix::identity(1), None)),
        2 => return Ok(found("orthostochastic", String::new(), reconstruct3(b)?, None)),
        3 => {
            let d = decide3(b)?;
            let detail = format!("slack={:e}", d.links.slack);
            return Ok(if d.verdict.is_unistochastic() {
                found("chain_links", detail, reconstruct3(b)?, None)
            } else {
                not_found("chain_links", detail)
            });
        }
        _ => {}
    }
    match boundary_check4(b) {
        Ok(v) => {
            let detail = match v.reason {
                BoundaryReason::Witness => format!("pivot={:?} branches={}", v.pivot, v.branches_tried),
                BoundaryReason::ChainLinksFail { columns } => format!("chain links fail on columns {columns:?}"),
                BoundaryReason::OrthogonalityFail { gap } => {
                    format!("orthogonality gap {gap:e} after {} branches", v.branches_tried)
                }
            };
            return Ok(match v.witness {
                Some(u) if v.unistochastic => found("zero_entry", detail, u, None),
                _ => not_found("zero_entry", detail),
            });
        }
        Err(Error::NoZeroEntry | Error::UnsupportedDimension { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    let cfg = solver_config(args)?;
    let r = search_unistochastic(b, &cfg)?;
    let detail = format!("runs={} seed={}", r.restarts.len(), cfg.seed);
    Ok(match r.verdict {
        SolverVerdict::Unistochastic => found("search", detail, r.best_unitary, Some(r.d_min)),
        SolverVerdict::Inconclusive => CheckResult {
            method: "search",
            verdict: "inconclusive",
            d_min: Some(r.d_min),
            detail,
            witness: None,
            code: EXIT_INCONCLUSIVE,
        },
    })
}

fn check(format: Format, file: &Path, n: Option<usize>, witness: Option<&Path>, args: &SolverArgs) -> Outcome {
    let text = read_input(file)?;
    let m = parse_matrix(&text)?.into_real()?;
    if let Some(n) = n {
        if m.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.nrows(),
            }
            .into());
        }
    }
    let b = BistochasticMatrix::new(m)?;
    let r = decide(&b, args)?;
    let mut written = None;
    if let Some(u) = &r.witness {
        if let Some(path) = witness.map(Path::to_path_buf).or_else(|| sidecar(file, format)) {
            write_witness(&path, u)?;
            written = Some(path.display().to_string());
        }
    }
    let mut t = Table::new(&["n", "method", "verdict", "d_min", "detail", "witness"]);
    t.push(vec![
        json!(b.dim()),
        json!(r.method),
        json!(r.verdict),
        json!(r.d_min),
        json!(r.detail),
        json!(written),
    ]);
    emit(&t, format, true)?;
    Ok(r.code)
}

fn geometry(format: Format, what: &GeometryCmd) -> Outcome {
    match what {
        GeometryCmd::Edges { n } => {
            if *n != 4 {
                return Err(Failure::input(anyhow!(
                    "edge classes are tabulated for N = 4 only, got {n}"
                )));
            }
            let mut t = Table::new(&["tag", "length_sq", "unistochastic", "angle", "count"]);
            for (class, count) in edge_histogram() {
                t.push(vec![
                    json!(class.tag.to_string()),
                    json!(class.length_sq),
                    json!(class.unistochastic),
                    json!(class.angle_at_center.to_string()),
                    json!(count),
                ]);
            }
            emit(&t, format, false)
        }
        GeometryCmd::Planes => {
            let atlas = PolytopeAtlas4::build();
            let mut t = Table::new(&["m", "rows", "cols", "normal", "tetrahedra"]);
            for h in &atlas.hyperplanes {
                let tets: Vec<usize> = (0..6).filter(|&k| atlas.incidence[k][h.m - 1]).map(|k| k + 1).collect();
                let normal: Vec<f64> = h.normal.transpose().iter().copied().collect();
                t.push(vec![
                    json!(h.m),
                    json!(h.rows),
                    json!(h.cols),
                    json!(normal),
                    json!(tets),
                ]);
            }
            emit(&t, format, false)
        }
        GeometryCmd::Theorems { steps } => {
            let t1 = verify_theorem1(*steps);
            let t2 = verify_theorem2(&PolytopeAtlas4::build());
            let mut t = Table::new(&["statement", "quantity", "value"]);
            let mut row = |s: &str, q: &str, v: Value| t.push(vec![json!(s), json!(q), v]);
            row("triangles", "max_side_violation", json!(t1.max_side_violation));
            row("triangles", "max_inner_product", json!(t1.max_inner_product));
            row("triangles", "grid_points", json!(t1.grid_points));
            row("tetrahedra", "normal_orthonormality", json!(t2.normal_orthonormality));
            row("tetrahedra", "incidence_violation", json!(t2.incidence_violation));
            row("tetrahedra", "encoding_mismatch", json!(t2.encoding_mismatch));
            row("tetrahedra", "normal_containment", json!(t2.normal_containment));
            row(
                "tetrahedra",
                "incidence_matches_table",
                json!(t2.incidence_matches_table),
            );
            row("tetrahedra", "holds", json!(t2.holds(1e-12)));
            emit(&t, format, false)
        }
        GeometryCmd::Octants => {
            let c = OctantClassifier::new();
            let mut sizes: Vec<_> = c.orbit_sizes().into_iter().collect();
            sizes.sort_by_key(|(o, _)| (o.kind as u8, !o.positive));
            let mut t = Table::new(&["octant", "patterns"]);
            for (o, count) in sizes {
                t.push(vec![json!(o.to_string()), json!(count)]);
            }
            t.push(vec![json!("total"), json!(c.patterns())]);
            emit(&t, format, false)
        }
        GeometryCmd::Interval { kind } => {
            let (lo, hi) = admissible_interval(&kind.direction());
            let mut t = Table::new(&["kind", "lo", "hi"]);
            t.push(vec![json!(format!("{kind:?}")), json!(lo), json!(hi)]);
            emit(&t, format, true)
        }
    }
}

fn atlas(format: Format, view: AtlasView) -> Outcome {
    let atlas = PolytopeAtlas4::build();
    match view {
        AtlasView::Tetrahedra => {
            let mut t = Table::new(&["k", "corners", "words", "planes"]);
            for (k, tet) in atlas.tetrahedra.iter().enumerate() {
                let words: Vec<String> = tet.iter().map(|&c| word(&atlas.corners[c])).collect();
                t.push(vec![
                    json!(k + 1),
                    json!(tet),
                    json!(words),
                    json!(atlas.incident_planes(k)),
                ]);
            }
            emit(&t, format, false)
        }
        AtlasView::Corners => {
            let mut t = Table::new(&["index", "word", "tetrahedron", "planes"]);
            for (c, w) in atlas.corners.iter().enumerate() {
                let k = atlas.tetrahedra.iter().position(|tet| tet.contains(&c));
                let planes: Vec<usize> = (1..=9)
                    .filter(|&m| {
                        let h = Hyperplane::new(m).expect("labels 1..9");
                        (h.block_sum(&atlas.corner_matrix(c)) - 1.0).abs() < 1e-12
                    })
                    .collect();
                t.push(vec![json!(c), json!(word(w)), json!(k.map(|k| k + 1)), json!(planes)]);
            }
            emit(&t, format, false)
        }
    }
}

fn word(w: &[usize]) -> String {
    w.iter().map(|d| d.to_string()).collect()
}

fn ray(format: Format, kind: RayKind, t: Option<f64>, steps: usize, solve: bool, args: &SolverArgs) -> Outcome {
    let (lo, hi) = admissible_interval(&kind.direction());
    let ts: Vec<f64> = match t {
        Some(t) => vec![t],
        None => {
            if steps < 2 {
                return Err(Failure::input(anyhow!("--steps must be at least 2, got {steps}")));
            }
            (0..steps)
                .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
                .collect()
        }
    };
    let cfg = if solve { Some(solver_config(args)?) } else { None };
    let mut table = Table::new(&[
        "kind",
        "t",
        "octant",
        "center_distance",
        "l",
        "closed_form",
        "zero_entry",
        "d_min",
        "search",
    ]);
    for t in ts {
        let b = central_ray(kind, t)?;
        let octant = hyperoctant_of(&b)?.octant.map(|o| o.to_string());
        let (l, closed) = match kind {
            RayKind::I => {
                let closed = match ray_unitary(t) {
                    Ok(_) => json!("unistochastic"),
                    Err(Error::Infeasible { .. }) => json!("no solution"),
                    Err(e) => return Err(e.into()),
                };
                (json!(ray_l(t)), closed)
            }
            _ => (Value::Null, Value::Null),
        };
        let zero = match boundary_check4(&b) {
            Ok(v) => json!(v.unistochastic),
            Err(Error::NoZeroEntry) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        let (d_min, search) = match &cfg {
            Some(cfg) => {
                let r = search_unistochastic(&b, cfg)?;
                let v = match r.verdict {
                    SolverVerdict::Unistochastic => "unistochastic",
                    SolverVerdict::Inconclusive => "inconclusive",
                };
                (json!(r.d_min), json!(v))
            }
            None => (Value::Null, Value::Null),
        };
        table.push(vec![
            json!(format!("{kind:?}")),
            json!(t),
            json!(octant),
            json!(distance_to_center(&b)),
            l,
            closed,
            zero,
            d_min,
            search,
        ]);
    }
    emit(&table, format, false)
}

fn cross_section(format: Format, plane: Plane, resolution: usize) -> Outcome {
    let mut t;
    match plane {
        Plane::Delta1 => {
            t = Table::new(&["p0", "p3", "p4", "x", "y"]);
            for p in hypocycloid_section(resolution)? {
                t.push(vec![json!(p.p0), json!(p.p3), json!(p.p4), json!(p.x), json!(p.y)]);
            }
        }
        Plane::Delta2 => {
            if resolution < 3 {
                return Err(Failure::input(anyhow!(
                    "resolution must be at least 3, got {resolution}"
                )));
            }
            // Axes towards P₁ and from P₅ towards P₂; row 0 of a point holds
            // its weights on P₁, P₂, P₅.
            let star = RealMatrix::from_element(3, 3, 1.0 / 3.0);
            let p = |k| PermutationMatrix::by_index(3, k).expect("index < 6").to_matrix();
            let ex = (p(1) - &star) / 2f64.sqrt();
            let ey = (p(2) - p(5)) / 6f64.sqrt();
            t = Table::new(&["p1", "p2", "p5", "x", "y"]);
            for k in 0..resolution {
                let th = 2.0 * PI * k as f64 / resolution as f64;
                let dir = &ex * th.cos() + &ey * th.sin();
                let s = boundary_distance(&dir, 1e-12);
                let m = &star + dir * s;
                t.push(vec![
                    json!(m[(0, 0)]),
                    json!(m[(0, 1)]),
                    json!(m[(0, 2)]),
                    json!(s * th.cos()),
                    json!(s * th.sin()),
                ]);
            }
        }
    }
    emit(&t, format, false)
}

const MIN_SAMPLES: u64 = 10_000;

#[allow(clippy::too_many_arguments)]
fn experiment(
    format: Format,
    kind: ExperimentKind,
    samples: u64,
    ensemble: Ensemble,
    shards: u64,
    out: Option<&Path>,
    seed: u64,
) -> Outcome {
    if samples < MIN_SAMPLES {
        return Err(Failure::input(anyhow!(
            "--samples must be at least {MIN_SAMPLES}, got {samples}"
        )));
    }
    if shards == 0 {
        return Err(Failure::input(anyhow!("--shards must be positive")));
    }
    let sharding = Sharding { seed, shards };
    let start = Instant::now();
    let (name, ens, r): (&str, Option<Ensemble>, EstimateReport) = match kind {
        ExperimentKind::Volume => ("volume", None, estimate_volume_ratio_u3(samples, sharding)),
        ExperimentKind::Entropy => ("entropy", Some(ensemble), estimate_entropy(ensemble, samples, sharding)),
        ExperimentKind::B3Volume => ("b3-volume", None, b3_volume_estimate(samples, sharding)),
    };
    let wall = start.elapsed().as_secs_f64();
    let mut t = Table::new(&[
        "experiment",
        "ensemble",
        "mean",
        "stderr",
        "count",
        "acceptance",
        "seed",
        "shards",
        "wall_seconds",
    ]);
    t.push(vec![
        json!(name),
        json!(ens),
        json!(r.mean),
        json!(r.stderr),
        json!(r.count),
        json!(r.acceptance),
        json!(seed),
        json!(shards),
        json!(wall),
    ]);
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&t.to_json_record()).map_err(anyhow::Error::from)?;
        fs::write(path, format!("{body}\n")).with_context(|| format!("cannot write {}", path.display()))?;
    }
    emit(&t, format, true)
}

fn tangent(
    format: Format,
    file: Option<&Path>,
    hadamard: Option<f64>,
    haar: Option<usize>,
    permutation: Option<usize>,
    seed: u64,
) -> Outcome {
    let chosen = [
        file.is_some(),
        hadamard.is_some(),
        haar.is_some(),
        permutation.is_some(),
    ];
    if chosen.iter().filter(|c| **c).count() != 1 {
        return Err(Failure::input(anyhow!(
            "give exactly one of FILE, --hadamard, --haar or --permutation"
        )));
    }
    let (source, u) = if let Some(file) = file {
        let m = parse_matrix(&read_input(file)?)?.into_complex();
        (file.display().to_string(), UnitaryMatrix::new(m)?)
    } else if let Some(phi) = hadamard {
        (format!("hadamard({phi})"), UnitaryMatrix::hadamard_family(phi))
    } else if let Some(n) = haar {
        if n == 0 {
            return Err(Failure::input(anyhow!("--haar needs n >= 1")));
        }
        (format!("haar({n})"), sample_haar_unitary(n, &mut stream_rng(seed, 0)))
    } else {
        let k = permutation.expect("one source is set");
        (
            format!("permutation({k})"),
            PermutationMatrix::by_index(4, k)?.to_unitary(),
        )
    };
    let r = tangent_rank(&u)?;
    let normals = if u.dim() == 4 {
        json!(annihilating_normals(&r)?)
    } else {
        Value::Null
    };
    let mut t = Table::new(&["source", "n", "rank", "singular_values", "annihilating_normals"]);
    t.push(vec![
        json!(source),
        json!(u.dim()),
        json!(r.rank),
        json!(r.singular_values),
        normals,
    ]);
    emit(&t, format, true)
}

fn write_matrix(format: Format, body: Matrix) -> Outcome {
    let mut out = io::stdout().lock();
    match (format, body) {
        (Format::Csv, Matrix::Real(m)) => out.write_all(real_to_text(&m).as_bytes())?,
        (Format::Csv, Matrix::Unitary(u)) => out.write_all(matrix_text(&u).as_bytes())?,
        (Format::Json, body) => {
            let v = match body {
                Matrix::Real(m) => real_to_json(&m),
                Matrix::Unitary(u) => matrix_json(&u),
            };
            serde_json::to_writer_pretty(&mut out, &v).map_err(anyhow::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

enum Matrix {
    Real(RealMatrix),
    Unitary(UnitaryMatrix),
}

fn bist(b: BistochasticMatrix) -> Matrix {
    Matrix::Real(b.into_matrix())
}

fn values<const K: usize>(name: &str, v: &[f64]) -> Result<[f64; K], Failure> {
    v.try_into()
        .map_err(|_| Failure::input(anyhow!("{name} takes {K} comma separated values, got {}", v.len())))
}

fn generate(format: Format, what: &GenerateCmd) -> Outcome {
    let m = match what {
        GenerateCmd::VanDerWaerden { n } => {
            if *n == 0 {
                return Err(Failure::input(anyhow!("n must be at least 1")));
            }
            bist(BistochasticMatrix::van_der_waerden(*n))
        }
        GenerateCmd::Fourier { n } => {
            if *n == 0 {
                return Err(Failure::input(anyhow!("n must be at least 1")));
            }
            Matrix::Unitary(UnitaryMatrix::fourier(*n))
        }
        GenerateCmd::Hadamard { phi } => Matrix::Unitary(UnitaryMatrix::hadamard_family(*phi)),
        GenerateCmd::Permutation { n, index } => bist(PermutationMatrix::by_index(*n, *index)?.to_bistochastic()),
        GenerateCmd::CentralRay { kind, t } => bist(central_ray(*kind, *t)?),
        GenerateCmd::Delta1 { p } => bist(delta1(values("--p", p)?)?),
        GenerateCmd::Delta2 { p } => bist(delta2(values("--p", p)?)?),
        GenerateCmd::Tetrahedron { k, p, witness } => {
            let p: [f64; 4] = values("--p", p)?;
            let u = tetrahedron_witness(*k, p)?;
            if *witness {
                Matrix::Unitary(u)
            } else {
                let corners: Vec<BistochasticMatrix> = TETRAHEDRA[k - 1]
                    .iter()
                    .map(|&c| PermutationMatrix::by_index(4, c).map(|q| q.to_bistochastic()))
                    .collect::<Result<_, _>>()?;
                bist(BistochasticMatrix::convex_combination(&p, &corners)?)
            }
        }
        GenerateCmd::FamilyA { params } => {
            let [a, b, c, e, g] = values("--params", params)?;
            bist(auberson_a(a, b, c, e, g)?)
        }
        GenerateCmd::FamilyB { params } => {
            let [a, b, c, d] = values("--params", params)?;
            bist(auberson_b(a, b, c, d)?)
        }
        GenerateCmd::FamilyC { params } => {
            let [a, b, c, d] = values("--params", params)?;
            bist(auberson_c(a, b, c, d)?)
        }
        GenerateCmd::Haar { n, image, seed } => {
            if *n == 0 {
                return Err(Failure::input(anyhow!("n must be at least 1")));
            }
            let u = sample_haar_unitary(*n, &mut stream_rng(seed.seed, 0));
            if *image {
                bist(u.image())
            } else {
                Matrix::Unitary(u)
            }
        }
        GenerateCmd::FlatB3 { seed } => bist(sample_flat_b3(&mut stream_rng(seed.seed, 0))),
    };
    write_matrix(format, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_and_compute_errors_get_their_codes() {
        assert_eq!(error_code(&Error::NotBistochastic("row 0".into())), EXIT_INPUT);
        assert_eq!(error_code(&Error::Parse("x".into())), EXIT_INPUT);
        assert_eq!(
            error_code(&Error::OutOfPolytope {
                t: 1.0,
                lo: 0.0,
                hi: 0.5
            }),
            EXIT_INPUT
        );
        assert_eq!(error_code(&Error::NotUnistochastic), EXIT_COMPUTE);
        assert_eq!(error_code(&Error::ZeroPivot { row: 0, col: 0 }), EXIT_COMPUTE);
    }

    #[test]
    fn sidecar_sits_next_to_the_input() {
        let p = sidecar(Path::new("/tmp/m.txt"), Format::Csv).unwrap();
        assert_eq!(p, Path::new("/tmp/m.witness.txt"));
        assert_eq!(
            sidecar(Path::new("a/b.json"), Format::Json).unwrap(),
            Path::new("a/b.witness.json")
        );
        assert!(sidecar(Path::new("-"), Format::Csv).is_none());
    }
}
