//! The `toricnk` command-line driver.
//!
//! Every numeric flag can also come from a `key=value` config file given by
//! `--config`; flags win over the file, and the file wins over the defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use toric_nk::export::{fmt_f64, to_csv, to_json, Cell, Meta};
use toric_nk::potential::star_residual;
use toric_nk::radial::{
    admissible_grid, check_bounds, decay_identity_check, integrate_with, sweep, Direction, IntegrateOptions,
    RadialError, RadialState, Termination,
};
use toric_nk::region::{BoundaryOptions, Region};
use toric_nk::sampling::{self, uniform_in_ball};
use toric_nk::search::{build_system, lemma_identity_checks, newton_search, NEWTON_TOL};
use toric_nk::{parse_poly, phi0, Poly3};

const SQRT3: f64 = 1.7320508075688772;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RadialDirection {
    Forward,
    Backward,
}

#[derive(Debug, Parser)]
#[command(name = "toricnk", version, about = "Exact and numeric checks for toric nearly Kähler potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact residual of the equation for a potential.
    Verify,
    /// Sample the ball and compare the two descriptions of the regular region.
    Region,
    /// Compare the j^2 spectrum with its predicted value at random regular points.
    Spectrum,
    /// Locate singular torus orbits.
    SingularOrbits,
    /// Boundary point cloud of the region along rays from the origin.
    Surface,
    /// Integrate a single radial trajectory.
    Radial,
    /// Integrate a grid of admissible radial starts.
    Sweep,
    /// Newton search over polynomial ansätze of a given degree.
    Search,
    /// Exact identity suite for the degree classification.
    Lemmas,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Potential as polynomial text or a path to a file containing it.
    #[arg(long, global = true)]
    pub phi: Option<String>,
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xp0: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub direction: Option<RadialDirection>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    #[arg(long, global = true)]
    pub seeds: Option<usize>,
    #[arg(long, global = true)]
    pub directions: Option<usize>,
    /// Sample count for region, spectrum and lemmas.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Grid side for sweep.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// `key=value` file supplying defaults for the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub command_line: String,
    pub phi_source: Option<String>,
    pub degree: u32,
    pub starts: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
    pub t0: f64,
    pub x0: f64,
    pub xp0: f64,
    pub direction: RadialDirection,
    pub radius: Option<f64>,
    pub seeds: usize,
    pub directions: usize,
    pub samples: Option<usize>,
    pub grid: usize,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Parses a `key=value` file; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key=value", n + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

const CONFIG_KEYS: &[&str] = &[
    "phi",
    "degree",
    "starts",
    "seed",
    "tol",
    "out",
    "format",
    "jobs",
    "t0",
    "x0",
    "xp0",
    "direction",
    "radius",
    "seeds",
    "directions",
    "samples",
    "grid",
];

struct Layer<'a>(&'a BTreeMap<String, String>);

impl Layer<'_> {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| usage(format!("config: invalid value for {key}: {v}"))))
            .transpose()
    }

    fn get_enum<T: ValueEnum>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.0
            .get(key)
            .map(|v| T::from_str(v, true).map_err(|_| usage(format!("config: invalid value for {key}: {v}"))))
            .transpose()
    }
}

impl RunConfig {
    pub fn resolve(cli: Cli, command_line: String) -> Result<Self, CliError> {
        let file = match &cli.opts.config {
            Some(p) => parse_config(&read_file(p)?)?,
            None => BTreeMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(usage(format!("config: unknown key {k}")));
        }
        let c = Layer(&file);
        let o = cli.opts;
        let cfg = RunConfig {
            command: cli.command,
            command_line,
            phi_source: o.phi.or(c.get("phi")?),
            degree: o.degree.or(c.get("degree")?).unwrap_or(3),
            starts: o.starts.or(c.get("starts")?).unwrap_or(100),
            seed: o.seed.or(c.get("seed")?).unwrap_or(1),
            tol: o.tol.or(c.get("tol")?),
            out: o.out.or(c.get("out")?),
            format: o.format.or(c.get_enum("format")?).unwrap_or(Format::Json),
            jobs: o.jobs.or(c.get("jobs")?),
            t0: o.t0.or(c.get("t0")?).unwrap_or(1.0),
            x0: o.x0.or(c.get("x0")?).unwrap_or(5.0),
            xp0: o.xp0.or(c.get("xp0")?).unwrap_or(2.0),
            direction: o.direction.or(c.get_enum("direction")?).unwrap_or(RadialDirection::Forward),
            radius: o.radius.or(c.get("radius")?),
            seeds: o.seeds.or(c.get("seeds")?).unwrap_or(256),
            directions: o.directions.or(c.get("directions")?).unwrap_or(2000),
            samples: o.samples.or(c.get("samples")?),
            grid: o.grid.or(c.get("grid")?).unwrap_or(20),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage("--tol must be positive"));
            }
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(usage("--radius must be positive"));
            }
        }
        if self.jobs == Some(0) {
            return Err(usage("--jobs must be at least 1"));
        }
        if self.grid == 0 || self.directions == 0 || self.seeds == 0 || self.samples == Some(0) {
            return Err(usage("counts must be at least 1"));
        }
        if !(self.t0 > 0.0) {
            return Err(usage("--t0 must be positive"));
        }
        Ok(())
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn phi(&self) -> Result<Poly3, CliError> {
        let Some(src) = &self.phi_source else { return Ok(phi0()) };
        let path = Path::new(src);
        let text = if path.is_file() { read_file(path)? } else { src.clone() };
        parse_poly(text.trim()).map_err(|e| usage(format!("malformed polynomial: {e}")))
    }

    fn meta(&self) -> Meta {
        Meta::new(self.command_line.clone())
    }
}

/// A rendered result: the document to write and a line for the terminal.
struct Report {
    document: String,
    summary: String,
    failure: Option<String>,
}

fn render<T: Serialize>(cfg: &RunConfig, meta: &Meta, body: &T, columns: &[&str], rows: Vec<Vec<Cell>>) -> String {
    match cfg.format {
        Format::Json => to_json(meta, body),
        Format::Csv => to_csv(meta, columns, &rows),
    }
}

fn p3(p: [f64; 3]) -> [Cell; 3] {
    p.map(Cell::Float)
}

fn verify(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Body {
        phi: String,
        residual: String,
        is_solution: bool,
    }
    let phi = cfg.phi()?;
    let r = star_residual(&phi);
    let ok = r.is_zero();
    let body = Body { phi: phi.to_string(), residual: r.to_string(), is_solution: ok };
    let rows = vec![vec![Cell::Text(body.phi.clone()), Cell::Text(body.residual.clone()), ok.into()]];
    let document = render(cfg, &cfg.meta(), &body, &["phi", "residual", "is_solution"], rows);
    Ok(if ok {
        Report { document, summary: "residual: 0 (exact)".into(), failure: None }
    } else {
        Report { document, summary: format!("residual: {r}"), failure: Some("nonzero residual".into()) }
    })
}

fn region(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Point {
        mu: [f64; 3],
        in_u0: bool,
        in_u0_hat: bool,
    }
    #[derive(Serialize)]
    struct Body {
        samples: usize,
        radius: f64,
        in_u0_hat: usize,
        in_u0: usize,
        counterexamples: usize,
        points: Vec<Point>,
    }
    let reg = Region::new(&cfg.phi()?);
    let n = cfg.samples.unwrap_or(10_000);
    let radius = cfg.radius.unwrap_or(SQRT3);
    let mut rng = sampling::rng(cfg.seed);
    let points: Vec<Point> = (0..n)
        .map(|_| {
            let mu = uniform_in_ball(&mut rng, radius);
            Point { mu, in_u0: reg.in_u0(mu), in_u0_hat: reg.in_u0_hat(mu) }
        })
        .collect();
    let hat = points.iter().filter(|p| p.in_u0_hat).count();
    let u0 = points.iter().filter(|p| p.in_u0).count();
    let bad = points.iter().filter(|p| p.in_u0_hat && !p.in_u0).count();
    let rows = points
        .iter()
        .map(|p| {
            let mut r = p3(p.mu).to_vec();
            r.extend([p.in_u0.into(), p.in_u0_hat.into()]);
            r
        })
        .collect();
    let body = Body { samples: n, radius, in_u0_hat: hat, in_u0: u0, counterexamples: bad, points };
    let meta = cfg.meta().with_seed(cfg.seed).with_tolerance("pd", toric_nk::region::PD_TOL);
    let document = render(cfg, &meta, &body, &["mu1", "mu2", "mu3", "in_u0", "in_u0_hat"], rows);
    let summary = format!("{n} samples: {hat} in U0-hat, {u0} in U0, {bad} counterexamples");
    let failure = (bad > 0).then(|| format!("{bad} points in U0-hat but not in U0"));
    Ok(Report { document, summary, failure })
}

fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Row {
        mu: [f64; 3],
        eigs: [f64; 3],
        predicted: f64,
        mismatch: f64,
    }
    #[derive(Serialize)]
    struct Body {
        points: usize,
        max_mismatch: f64,
        rows: Vec<Row>,
    }
    let reg = Region::new(&cfg.phi()?);
    let n = cfg.samples.unwrap_or(100);
    let tol = cfg.tol_or(1e-9);
    let radius = cfg.radius.unwrap_or(SQRT3);
    let mut rng = sampling::rng(cfg.seed);
    let mut rows = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while rows.len() < n {
        attempts += 1;
        if attempts > 1000 * n {
            return Err(CliError::Math(format!("found only {} regular points in {} draws", rows.len(), attempts - 1)));
        }
        let mu = uniform_in_ball(&mut rng, radius);
        if let Ok(s) = reg.j_squared_spectrum(mu) {
            rows.push(Row { mu, eigs: s.eigs, predicted: s.predicted, mismatch: s.mismatch() });
        }
    }
    let worst = rows.iter().map(|r| r.mismatch).fold(0.0, f64::max);
    let csv_rows = rows
        .iter()
        .map(|r| {
            let mut c = p3(r.mu).to_vec();
            c.extend(p3(r.eigs));
            c.extend([r.predicted.into(), r.mismatch.into()]);
            c
        })
        .collect();
    let body = Body { points: n, max_mismatch: worst, rows };
    let meta = cfg.meta().with_seed(cfg.seed).with_tolerance("spectrum", tol);
    let cols = ["mu1", "mu2", "mu3", "eig1", "eig2", "eig3", "predicted", "mismatch"];
    let document = render(cfg, &meta, &body, &cols, csv_rows);
    let summary = format!("{n} points, max mismatch {worst:.3e}");
    let failure = (worst >= tol).then(|| format!("max mismatch {worst:.3e} exceeds {tol:.1e}"));
    Ok(Report { document, summary, failure })
}

fn singular_orbits(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Body {
        count: usize,
        orbits: Vec<toric_nk::region::SingularOrbit>,
    }
    let reg = Region::new(&cfg.phi()?);
    let radius = cfg.radius.unwrap_or(4.0);
    let orbits = reg.find_singular_orbits(radius, cfg.seeds);
    let rows = orbits
        .iter()
        .map(|o| {
            let mut c = p3(o.point).to_vec();
            c.extend(p3(o.collapse_direction));
            c.extend([o.eps2.into(), o.cvv.into()]);
            c
        })
        .collect();
    let body = Body { count: orbits.len(), orbits };
    let meta = cfg
        .meta()
        .with_tolerance("newton", toric_nk::region::ORBIT_NEWTON_TOL)
        .with_tolerance("dedup_distance", toric_nk::region::ORBIT_DEDUP_DIST);
    let cols = ["mu1", "mu2", "mu3", "dir1", "dir2", "dir3", "eps2", "cvv"];
    let document = render(cfg, &meta, &body, &cols, rows);
    Ok(Report { document, summary: format!("{} singular orbits", body.count), failure: None })
}

fn surface(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Body {
        points: Vec<toric_nk::region::BoundaryPoint>,
    }
    let reg = Region::new(&cfg.phi()?);
    let mut opts = BoundaryOptions { directions: cfg.directions, ..Default::default() };
    if let Some(r) = cfg.radius {
        opts.max_radius = r;
    }
    if let Some(t) = cfg.tol {
        opts.bisection_tol = t;
    }
    let points = reg.boundary_surface(&opts).map_err(|e| CliError::Math(e.to_string()))?;
    let rows = points
        .iter()
        .map(|p| {
            let mut c = p3(p.direction).to_vec();
            c.push(p.radius.into());
            c.extend(p3(p.point));
            c.push(p.monotone.into());
            c
        })
        .collect();
    let monotone = points.iter().filter(|p| p.monotone).count();
    let meta = cfg.meta().with_tolerance("bisection", opts.bisection_tol).with_tolerance("max_radius", opts.max_radius);
    let cols = ["u1", "u2", "u3", "radius", "mu1", "mu2", "mu3", "monotone"];
    let n = points.len();
    let document = render(cfg, &meta, &Body { points }, &cols, rows);
    Ok(Report { document, summary: format!("{n} boundary points, {monotone} monotone rays"), failure: None })
}

fn radial(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Body {
        start: RadialState,
        direction: Direction,
        termination: Termination,
        t_minus: f64,
        t_plus: f64,
        end: RadialState,
        end_eps2: f64,
        decay_identity_error: f64,
        bounds: toric_nk::radial::BoundsReport,
        states: Vec<RadialState>,
    }
    let tol = cfg.tol_or(1e-10);
    let start = RadialState::new(cfg.t0, cfg.x0, cfg.xp0);
    let direction = match cfg.direction {
        RadialDirection::Forward => Direction::Forward,
        RadialDirection::Backward => Direction::Backward,
    };
    let opts = IntegrateOptions { tol, ..Default::default() };
    let traj = integrate_with(start, direction, &opts).map_err(|e| match e {
        RadialError::Inadmissible(_) => usage(e.to_string()),
        _ => CliError::Math(e.to_string()),
    })?;
    let decay = decay_identity_check(&traj);
    let bounds = check_bounds(&traj);
    let rows = traj.states.iter().map(|s| vec![s.t.into(), s.x.into(), s.xp.into(), s.eps2().into()]).collect();
    let body = Body {
        start,
        direction,
        termination: traj.termination,
        t_minus: traj.t_minus,
        t_plus: traj.t_plus,
        end: traj.end,
        end_eps2: traj.end.eps2(),
        decay_identity_error: decay,
        bounds,
        states: traj.states,
    };
    let meta = cfg.meta().with_tolerance("integration", tol).with_tolerance("t_floor", opts.t_floor);
    let document = render(cfg, &meta, &body, &["t", "x", "xp", "eps2"], rows);
    let summary = format!(
        "{}: t in [{}, {}], eps2(end) = {:.3e}, decay error {decay:.3e}",
        body.termination.as_str(),
        fmt_f64(body.t_minus),
        fmt_f64(body.t_plus),
        body.end_eps2
    );
    Ok(Report { document, summary, failure: None })
}

fn sweep_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Body {
        t0: f64,
        grid: usize,
        eps2_zero: usize,
        rows: Vec<toric_nk::radial::SweepRow>,
    }
    let tol = cfg.tol_or(1e-10);
    let rows = sweep(&admissible_grid(cfg.t0, cfg.grid), tol);
    let hits = rows.iter().filter(|r| r.termination == Some(Termination::Eps2Zero)).count();
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.t0.into(),
                r.x0.into(),
                r.xp0.into(),
                r.t_plus.map_or(Cell::Text(String::new()), Cell::Float),
                Cell::Text(r.termination.map_or("", |t| t.as_str()).to_string()),
                Cell::Text(r.error.clone().unwrap_or_default().replace(',', ";")),
            ]
        })
        .collect();
    let total = rows.len();
    let body = Body { t0: cfg.t0, grid: cfg.grid, eps2_zero: hits, rows };
    let meta = cfg.meta().with_tolerance("integration", tol);
    let cols = ["t0", "x0", "xp0", "t_plus", "termination", "error"];
    let document = render(cfg, &meta, &body, &cols, csv_rows);
    Ok(Report { document, summary: format!("{hits}/{total} EPS2_ZERO"), failure: None })
}

fn search(cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = build_system(cfg.degree).map_err(|e| usage(e.to_string()))?;
    let res = newton_search(&sys, cfg.starts, cfg.seed);
    let unknowns = res.unknowns;
    let rows = res
        .converged
        .iter()
        .map(|h| {
            let kind = serde_json::to_value(h.classified_as).expect("classification")["kind"]
                .as_str()
                .unwrap_or_default()
                .to_string();
            let mut c =
                vec![h.residual_norm.into(), Cell::Text(kind), h.lambda.map_or(Cell::Text(String::new()), Cell::Float)];
            c.extend(h.coeffs.iter().map(|&x| Cell::Float(x)));
            c
        })
        .collect();
    let names: Vec<String> = (0..unknowns).map(|i| format!("c{i}")).collect();
    let mut cols = vec!["residual_norm", "classified_as", "lambda"];
    cols.extend(names.iter().map(String::as_str));
    let meta = cfg
        .meta()
        .with_seed(cfg.seed)
        .with_tolerance("newton", NEWTON_TOL)
        .with_tolerance("part_zero", toric_nk::search::PART_ZERO_TOL)
        .with_tolerance("lambda_sq", toric_nk::search::LAMBDA_SQ_TOL);
    let document = render(cfg, &meta, &res, &cols, rows);
    let mut summary = format!("degree {}: {} converged of {} starts", res.degree, res.converged.len(), res.starts);
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for h in &res.converged {
        *kinds.entry(format!("{:?}", h.classified_as)).or_default() += 1;
    }
    for (k, n) in kinds {
        let _ = write!(summary, "; {k}: {n}");
    }
    Ok(Report { document, summary, failure: None })
}

fn lemmas(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.samples.unwrap_or(1000);
    let report = lemma_identity_checks(n, cfg.seed);
    let value = serde_json::to_value(&report).expect("report");
    let rows = value
        .as_object()
        .expect("object")
        .iter()
        .map(|(k, v)| vec![Cell::Text(k.clone()), Cell::Text(v.to_string().replace(',', ";"))])
        .collect();
    let meta = cfg.meta().with_seed(cfg.seed);
    let document = render(cfg, &meta, &report, &["check", "value"], rows);
    let ok = report.passed();
    let summary = format!(
        "{} quadratics, {} identity failures, {} expansion failures: {}",
        report.quadratics_checked,
        report.quadratic_identity_failures,
        report.expansion_failures,
        if ok { "all passed" } else { "FAILED" }
    );
    Ok(Report { document, summary, failure: (!ok).then(|| "lemma identity suite failed".to_string()) })
}

fn dispatch(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Verify => verify(cfg),
        Command::Region => region(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::SingularOrbits => singular_orbits(cfg),
        Command::Surface => surface(cfg),
        Command::Radial => radial(cfg),
        Command::Sweep => sweep_cmd(cfg),
        Command::Search => search(cfg),
        Command::Lemmas => lemmas(cfg),
    }
}

/// Runs a resolved configuration; returns the exit code.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match cfg.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(cfg)),
            Err(e) => Err(usage(format!("cannot start {j} workers: {e}"))),
        },
        None => dispatch(cfg),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &report.document) {
                let _ = writeln!(stderr, "error: {}", CliError::Io { path: path.clone(), source });
                return 2;
            }
            let _ = writeln!(stdout, "{}", report.summary);
        }
        None if cfg.command == Command::Verify => {
            let _ = writeln!(stdout, "{}", report.summary);
        }
        None => {
            let _ = write!(stdout, "{}", report.document);
        }
    }
    match report.failure {
        Some(f) => {
            let _ = writeln!(stderr, "failure: {f}");
            1
        }
        None => 0,
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let command_line =
        std::iter::once("toricnk").chain(args.iter().skip(1).map(String::as_str)).collect::<Vec<_>>().join(" ");
    match RunConfig::resolve(cli, command_line) {
        Ok(cfg) => run(&cfg, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
