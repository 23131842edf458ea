//! The five verbs. Each returns its artifacts and pass/fail checks; the
//! manifest is appended last so it can hash everything else.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use rhsolve::boundary::{DataSpec, Expr};
use rhsolve::dirichlet::{route_registry, solve_direct, solve_gehring, ExtensionRoute};
use rhsolve::jordan::{
    harmonic_measure, map_registry, poisson_indicator_measure, solve_jordan, transport_problem, transported_arcs,
    ConformalMap, DataCoordinate, DomainData,
};
use rhsolve::rh::{null_generators, numerical_rank, singular_values, solve_family, RHProblem, SolverConfig};
use rhsolve::series::HolomorphicFn;
use rhsolve::spectral::{BoundaryTrace, CircleGrid};
use rhsolve::verify::{
    boundary_residual, boundary_residual_of, nonincreasing_within, nt_limit, ConvergenceReport, ProjectedReal,
    ResidualRow,
};

use crate::error::{exit, CliError, CliResult};
use crate::output::{Artifact, LongCsv};
use crate::problem::{Metric, ProblemFile, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Verb {
    Solve,
    Dirichlet,
    Nullspace,
    Hmeasure,
    Map,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Solve => "solve",
            Verb::Dirichlet => "dirichlet",
            Verb::Nullspace => "nullspace",
            Verb::Hmeasure => "hmeasure",
            Verb::Map => "map",
        }
    }
}

/// Command-line overrides applied on top of the problem file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub n: Option<usize>,
    pub route: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub verb: Verb,
    pub problem: ProblemFile,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            exit::VERIFICATION
        }
    }
}

/// Tolerances fixed in the library rather than the problem file.
fn fixed_tolerances() -> Value {
    json!({
        "unimodular": rhsolve::boundary::UNIMODULAR_TOL,
        "eval_radius_limit": rhsolve::series::EVAL_RADIUS_LIMIT,
        "stolz_min_gap": rhsolve::verify::MIN_GAP,
        "stolz_increment_slack": rhsolve::verify::INCREMENT_SLACK,
        "inverse_map_newton_tolerance": rhsolve::jordan::NEWTON_TOL,
        "inverse_map_newton_iterations": rhsolve::jordan::NEWTON_MAX,
        "inverse_map_continuation_steps": rhsolve::jordan::CONTINUATION_STEPS,
        "inverse_map_closure_slack": rhsolve::jordan::CLOSURE_SLACK,
    })
}

pub fn run(verb: Verb, mut problem: ProblemFile, opts: &RunOptions) -> CliResult<Outcome> {
    if let Some(n) = opts.n {
        problem.n = n;
    }
    if let Some(route) = &opts.route {
        problem.route = route.clone();
    }
    problem.validate()?;
    let ctx = Context::new(&problem, opts.seed)?;
    let (checks, mut artifacts) = match verb {
        Verb::Solve => ctx.solve()?,
        Verb::Dirichlet => ctx.dirichlet()?,
        Verb::Nullspace => ctx.nullspace()?,
        Verb::Hmeasure => ctx.hmeasure()?,
        Verb::Map => ctx.map_dump()?,
    };
    let hashes: Vec<Value> = artifacts
        .iter()
        .map(|a| json!({"file": a.file, "sha256": a.sha256()}))
        .collect();
    let passed = checks.iter().all(|c| c.pass);
    let manifest = json!({
        "tool": "rhsolve",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": crate::problem::SCHEMA_VERSION,
        "command": verb.as_str(),
        "problem": &problem,
        "problem_sha256": Artifact { file: String::new(), bytes: problem.to_json().into_bytes() }.sha256(),
        "seed": opts.seed,
        "fixed_tolerances": fixed_tolerances(),
        "checks": &checks,
        "passed": passed,
        "artifacts": hashes,
    });
    artifacts.push(Artifact::json(format!("{}.manifest.json", problem.stem()), &manifest));
    Ok(Outcome {
        verb,
        problem,
        checks,
        artifacts,
    })
}

struct Context<'p> {
    p: &'p ProblemFile,
    seed: u64,
    map: Box<dyn ConformalMap>,
    grid: CircleGrid,
    lambda: DataSpec,
    phi: DataSpec,
}

type Produced = (Vec<Check>, Vec<Artifact>);

fn schema_on_param(e: rhsolve::Error) -> CliError {
    match e {
        rhsolve::Error::NonConvergence { .. } | rhsolve::Error::Overflow { .. } => CliError::Solver(e),
        other => CliError::schema(other.to_string()),
    }
}

impl<'p> Context<'p> {
    fn new(p: &'p ProblemFile, seed: u64) -> CliResult<Self> {
        let map = map_registry()
            .build(&p.domain.kind, &p.domain.params)
            .map_err(schema_on_param)?;
        let (lambda, phi) = p.data_specs()?;
        Ok(Self {
            p,
            seed,
            map,
            grid: CircleGrid::new(p.n)?,
            lambda,
            phi,
        })
    }

    fn file(&self, suffix: &str) -> String {
        format!("{}.{suffix}", self.p.stem())
    }

    fn route(&self) -> CliResult<Box<dyn ExtensionRoute>> {
        route_registry()
            .build(&self.p.route, &Value::Null)
            .map_err(schema_on_param)
    }

    fn domain_data(&self, lambda: &DataSpec, phi: &DataSpec) -> CliResult<DomainData> {
        Ok(DomainData::compile(
            lambda,
            phi,
            self.p.data_coordinate,
            self.p.declared_jumps.clone(),
            self.map.as_ref(),
        )?)
    }

    /// Data coordinate of the boundary point `e^{i theta}`.
    fn coordinate(&self, theta: f64) -> f64 {
        match self.p.data_coordinate {
            DataCoordinate::DiskAngle => theta,
            DataCoordinate::ArcLength => self.map.arc_length_of_angle(theta),
        }
    }

    fn nt_reports(&self, f: &dyn HolomorphicFn, vertices: &[f64]) -> CliResult<Vec<ConvergenceReport>> {
        let v = &self.p.verify;
        vertices
            .iter()
            .map(|&vertex| Ok(nt_limit(f, vertex, &v.apertures, &v.offsets, &v.gaps, v.nt_tolerance)?))
            .collect()
    }

    fn solve(&self) -> CliResult<Produced> {
        let v = &self.p.verify;
        let data = self.domain_data(&self.lambda, &self.phi)?;
        let cfg: SolverConfig = self.p.solver.into();
        let route = self.route()?;
        let sol = solve_jordan(&data, self.map.as_ref(), self.grid, route.as_ref(), &cfg)?;
        let problem = &sol.problem;
        let rows = boundary_residual(&sol.disk, problem, &v.radii, v.exclusion_radius)?;
        let mut checks = residual_checks("residual", &rows, &v.thresholds);
        let nt = self.nt_reports(&sol.disk.f, &v.vertices)?;
        if v.thresholds.nt_converged {
            let failed = nt.iter().filter(|r| !r.converged()).count();
            checks.push(Check::at_most(
                "nt: vertices without a principal value",
                failed as f64,
                0.0,
            ));
        }

        let mut artifacts = vec![Artifact::json(
            self.file("solution.json"),
            &json!({
                "name": self.p.name,
                "n": self.p.n,
                "route": route.name(),
                "domain": self.map.name(),
                "f": sol.disk.f.base.coeffs(),
                "a": sol.disk.a.coeffs(),
                "b": sol.disk.b.coeffs(),
            }),
        )];
        artifacts.push(self.traces(problem, &sol.disk)?);
        artifacts.push(residual_csv(self.file("residual.csv"), &[("", &rows)]));
        if !nt.is_empty() {
            artifacts.push(Artifact::json(self.file("nt.json"), &nt));
        }
        if v.sample_points > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let mut csv = LongCsv::new();
            for j in 0..v.sample_points {
                let w = Complex64::from_polar(0.95 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>());
                let z = self.map.from_disk(w)?;
                let fz = sol.value(z)?;
                let x = j as f64;
                csv.push("z_re", x, z.re);
                csv.push("z_im", x, z.im);
                csv.push("f_re", x, fz.re);
                csv.push("f_im", x, fz.im);
            }
            artifacts.push(csv.finish(self.file("samples.csv")));
        }
        Ok((checks, artifacts))
    }

    fn traces(&self, problem: &RHProblem, sol: &rhsolve::rh::RHSolution) -> CliResult<Artifact> {
        let mut csv = LongCsv::new();
        let angles: Vec<f64> = self.grid.angles().collect();
        let real = |t: &BoundaryTrace| t.values().iter().map(|v| v.re).collect::<Vec<_>>();
        for (name, vals) in [
            ("alpha", real(&sol.alpha)),
            ("beta", real(&sol.beta)),
            ("b_boundary", real(&sol.b_boundary)),
            ("phi", real(&problem.phi)),
            ("lambda_re", problem.lambda.values().iter().map(|v| v.re).collect()),
            ("lambda_im", problem.lambda.values().iter().map(|v| v.im).collect()),
        ] {
            csv.extend(name, angles.iter().copied().zip(vals));
        }
        for &r in &self.p.verify.radii {
            let vals = sol.f.eval_on_circle(r, self.grid.n())?;
            let rec = vals.iter().zip(problem.lambda.values()).map(|(f, l)| (l.conj() * f).re);
            csv.extend(&format!("recovered@r={r}"), angles.iter().copied().zip(rec));
        }
        Ok(csv.finish(self.file("traces.csv")))
    }

    fn dirichlet(&self) -> CliResult<Produced> {
        let v = &self.p.verify;
        let one = DataSpec::Expr(Expr::constant(1.0, 0.0));
        let problem = transport_problem(&self.domain_data(&one, &self.phi)?, self.map.as_ref(), self.grid)?;
        let direct = solve_direct(&problem.phi)?;
        let gehring = solve_gehring(&problem.phi)?;
        let angles: Vec<f64> = self.grid.angles().collect();
        let mut csv = LongCsv::new();
        csv.extend(
            "phi",
            angles.iter().copied().zip(problem.phi.values().iter().map(|v| v.re)),
        );
        let mut worst = 0.0f64;
        for &r in &v.radii {
            let a = direct.circle_values(r, self.grid.n())?;
            let b = gehring.circle_values(r, self.grid.n())?;
            let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            worst = d.iter().fold(worst, |m, x| m.max(x.abs()));
            csv.extend(&format!("direct@r={r}"), angles.iter().copied().zip(a));
            csv.extend(&format!("gehring@r={r}"), angles.iter().copied().zip(b));
            csv.extend(&format!("difference@r={r}"), angles.iter().copied().zip(d));
        }
        let rows = boundary_residual_of(
            &direct.re_part,
            &problem,
            &v.radii,
            &problem.declared_jumps,
            v.exclusion_radius,
        )?;
        let mut checks = residual_checks("residual", &rows, &v.thresholds);
        if let Some(t) = v.thresholds.route_difference {
            checks.push(Check::at_most("route difference (direct vs gehring)", worst, t));
        }
        let artifacts = vec![
            Artifact::json(
                self.file("dirichlet.json"),
                &json!({
                    "name": self.p.name,
                    "n": self.p.n,
                    "direct": direct.re_part.coeffs(),
                    "gehring": gehring.re_part.coeffs(),
                    "max_route_difference": worst,
                }),
            ),
            csv.finish(self.file("traces.csv")),
            residual_csv(self.file("residual.csv"), &[("", &rows)]),
        ];
        Ok((checks, artifacts))
    }

    fn nullspace(&self) -> CliResult<Produced> {
        let v = &self.p.verify;
        let ns = self
            .p
            .nullspace
            .as_ref()
            .ok_or_else(|| CliError::schema("the nullspace command needs a 'nullspace' section"))?;
        let k = ns.anchors.len();
        let family = null_generators(k, &ns.anchors).map_err(schema_on_param)?;
        let gram = family.gram_matrix(ns.gram_radius, ns.gram_samples)?;
        let sv = singular_values(&gram);
        let rank = numerical_rank(&sv, ns.rank_tolerance);
        let mut checks = vec![Check {
            name: "gram numerical rank".into(),
            value: rank as f64,
            threshold: k as f64,
            pass: rank == k,
        }];

        let data = self.domain_data(&self.lambda, &self.phi)?;
        let problem = transport_problem(&data, self.map.as_ref(), self.grid)?;
        let zero_phi = BoundaryTrace::from_real(self.grid, vec![0.0; self.grid.n()])?;
        let homogeneous = RHProblem::new(problem.lambda.clone(), zero_phi, problem.declared_jumps.clone())?;
        let cfg: SolverConfig = self.p.solver.into();
        let route = self.route()?;
        let mut centers = problem.declared_jumps.clone();
        centers.extend(&ns.anchors);
        let excl = v.exclusion_radius.max(ns.anchor_exclusion);

        let mut tables: Vec<(String, Vec<ResidualRow>)> = Vec::new();
        let mut nt_summary = Vec::new();
        let reference = &ns.coefficient_sets[0];
        for (s, coeffs) in ns.coefficient_sets.iter().enumerate() {
            let sol = solve_family(&problem, coeffs, &family, route.as_ref(), &cfg)?;
            let rows = boundary_residual_of(&sol.f, &problem, &v.radii, &centers, excl)?;
            checks.extend(residual_checks(&format!("set {s}"), &rows, &v.thresholds));
            tables.push((format!("set{s}"), rows));
            if s == 0 {
                continue;
            }
            let delta: Vec<f64> = coeffs.iter().zip(reference).map(|(a, b)| a - b).collect();
            let diff = solve_family(&homogeneous, &delta, &family, route.as_ref(), &cfg)?;
            let rows = boundary_residual_of(&diff.f, &homogeneous, &v.radii, &centers, excl)?;
            checks.extend(residual_checks(&format!("difference {s}"), &rows, &v.thresholds));
            tables.push((format!("difference{s}"), rows));
            let mut worst = 0.0f64;
            for &vertex in &ns.probe_vertices {
                let lambda = data.lambda.eval(self.coordinate(vertex));
                let proj = ProjectedReal { f: &diff.f, lambda };
                let rep = nt_limit(&proj, vertex, &v.apertures, &v.offsets, &v.gaps, v.nt_tolerance)?;
                let est = rep.paths.iter().map(|p| p.estimate.norm()).fold(0.0, f64::max);
                worst = worst.max(est);
                nt_summary.push(json!({
                    "set": s,
                    "vertex": vertex,
                    "max_estimate": est,
                    "agreement": rep.agreement,
                    "principal_value": rep.principal_value,
                }));
            }
            if let Some(t) = ns.difference_nt_max {
                checks.push(Check::at_most(format!("difference {s}: nt limit at probes"), worst, t));
            }
        }

        let mut gram_csv = LongCsv::new();
        gram_csv.extend("singular_value", sv.iter().enumerate().map(|(i, s)| (i as f64, *s)));
        for i in 0..k {
            gram_csv.extend(&format!("re[{i}]"), (0..k).map(|j| (j as f64, gram[(i, j)].re)));
            gram_csv.extend(&format!("im[{i}]"), (0..k).map(|j| (j as f64, gram[(i, j)].im)));
        }
        let table_refs: Vec<(&str, &Vec<ResidualRow>)> = tables.iter().map(|(n, r)| (n.as_str(), r)).collect();
        let artifacts = vec![
            Artifact::json(
                self.file("nullspace.json"),
                &json!({
                    "anchors": ns.anchors,
                    "coefficient_sets": ns.coefficient_sets,
                    "singular_values": sv,
                    "rank": rank,
                    "residuals": tables.iter().map(|(n, r)| json!({"series": n, "rows": r})).collect::<Vec<_>>(),
                    "difference_probes": nt_summary,
                }),
            ),
            gram_csv.finish(self.file("gram.csv")),
            residual_csv(self.file("residual.csv"), &table_refs),
        ];
        Ok((checks, artifacts))
    }

    fn hmeasure(&self) -> CliResult<Produced> {
        let hm = self
            .p
            .hmeasure
            .as_ref()
            .ok_or_else(|| CliError::schema("the hmeasure command needs an 'hmeasure' section"))?;
        let z0 = Complex64::new(hm.z0[0], hm.z0[1]);
        let value = harmonic_measure(&hm.arcs, z0, self.map.as_ref()).map_err(schema_on_param)?;
        let w0 = self.map.to_disk(z0)?;
        let circle = transported_arcs(&hm.arcs, self.map.as_ref());
        let oracle = poisson_indicator_measure(&circle, w0, hm.oracle_panels)?;
        let checks = vec![Check::at_most(
            "harmonic measure vs Poisson quadrature",
            (value - oracle).abs(),
            hm.oracle_tolerance,
        )];
        let artifacts = vec![Artifact::json(
            self.file("hmeasure.json"),
            &json!({
                "domain": self.map.name(),
                "z0": z0,
                "w0": w0,
                "arcs": hm.arcs,
                "disk_arcs": circle,
                "value": value,
                "oracle": oracle,
                "difference": (value - oracle).abs(),
            }),
        )];
        Ok((checks, artifacts))
    }

    fn map_dump(&self) -> CliResult<Produced> {
        let spec = self.p.map_check.clone().unwrap_or_default();
        let corr = self.map.correspondence();
        let boundary = self.map.boundary();
        let mut csv = LongCsv::new();
        let angles: Vec<f64> = (0..corr.len()).map(|j| corr.angle(j)).collect();
        csv.extend(
            "arc_length",
            angles.iter().copied().zip(corr.arc_lengths().iter().copied()),
        );
        csv.extend(
            "boundary_re",
            angles.iter().copied().zip(boundary.points().iter().map(|p| p.re)),
        );
        csv.extend(
            "boundary_im",
            angles.iter().copied().zip(boundary.points().iter().map(|p| p.im)),
        );

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut worst = 0.0f64;
        for _ in 0..spec.samples {
            let w = Complex64::from_polar(spec.max_radius * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>());
            let back = self.map.to_disk(self.map.from_disk(w)?)?;
            worst = worst.max((back - w).norm());
        }
        let checks = vec![
            Check::at_most(
                "round trip |to_disk(from_disk(w)) - w|",
                worst,
                spec.round_trip_tolerance,
            ),
            Check {
                name: "correspondence strictly monotone".into(),
                value: corr.is_strictly_monotone() as u8 as f64,
                threshold: 1.0,
                pass: corr.is_strictly_monotone(),
            },
        ];
        let diagnostics: serde_json::Map<String, Value> = self
            .map
            .diagnostics()
            .into_iter()
            .map(|(k, v)| (k.to_owned(), json!(v)))
            .collect();
        let artifacts = vec![
            Artifact::json(
                self.file("map.json"),
                &json!({
                    "name": self.map.name(),
                    "kind": self.map.kind(),
                    "total_length": self.map.total_length(),
                    "table_size": corr.len(),
                    "diagnostics": diagnostics,
                    "round_trip_max": worst,
                }),
            ),
            csv.finish(self.file("correspondence.csv")),
        ];
        Ok((checks, artifacts))
    }
}

fn residual_checks(prefix: &str, rows: &[ResidualRow], t: &Thresholds) -> Vec<Check> {
    let mut out = Vec::new();
    let last = rows.last().expect("at least one radius");
    if let Some(x) = t.max_linf {
        let worst = rows.iter().map(|r| r.linf).fold(0.0, f64::max);
        out.push(Check::at_most(format!("{prefix}: Linf at every radius"), worst, x));
    }
    if let Some(x) = t.final_linf {
        out.push(Check::at_most(
            format!("{prefix}: Linf at r = {}", last.r),
            last.linf,
            x,
        ));
    }
    if let Some(x) = t.final_l1 {
        out.push(Check::at_most(format!("{prefix}: L1 at r = {}", last.r), last.l1, x));
    }
    if let Some(m) = t.monotone {
        let seq: Vec<f64> = rows
            .iter()
            .map(|r| match m.metric {
                Metric::L1 => r.l1,
                Metric::Linf => r.linf,
            })
            .collect();
        let worst_ratio = seq.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        let pass = if m.strict {
            seq.windows(2).all(|w| w[1] < w[0])
        } else {
            nonincreasing_within(&seq, m.slack)
        };
        let metric = match m.metric {
            Metric::L1 => "L1",
            Metric::Linf => "Linf",
        };
        out.push(Check {
            name: format!("{prefix}: {metric} monotone in r (largest step ratio)"),
            value: worst_ratio,
            threshold: if m.strict { 1.0 } else { 1.0 + m.slack },
            pass,
        });
    }
    out
}

fn residual_csv(file: String, tables: &[(&str, &Vec<ResidualRow>)]) -> Artifact {
    let mut csv = LongCsv::new();
    for (name, rows) in tables {
        let key = |s: &str| {
            if name.is_empty() {
                s.to_owned()
            } else {
                format!("{name}:{s}")
            }
        };
        csv.extend(&key("l1"), rows.iter().map(|r| (r.r, r.l1)));
        csv.extend(&key("linf"), rows.iter().map(|r| (r.r, r.linf)));
        csv.extend(&key("admitted"), rows.iter().map(|r| (r.r, r.admitted as f64)));
    }
    csv.finish(file)
}
