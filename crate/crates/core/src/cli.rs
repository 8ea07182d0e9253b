//! Command-line front end. Data goes to stdout (or `--out`), diagnostics to
//! stderr. The first output line is a `#` header echoing the version and
//! the parsed configuration.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundParams};
use crate::census::{self, CensusMode, CensusQuery, CensusResult, Reduction};
use crate::error::{precondition, Error, Result};
use crate::maxarc::{self, ArcCertificateJson, MaxArcOptions};
use crate::plane::{PlaneKind, PlaneModel};
use crate::pointset::PointSet;
use crate::randlab::{
    self, ArcMode, ConstructConfig, ConstructionCertificate, ExperimentConfig, RandomModel,
    ScanConfig, ScanRow,
};
use crate::sets::{self, PointSetRecord};
use crate::VERSION;

/// Relative `--out` paths are resolved against this directory when set.
pub const OUT_DIR_ENV: &str = "ARCLAB_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "arclab",
    version,
    about = "Arcs in finite planes: census, max-arc search, bounds and random experiments"
)]
pub struct Cli {
    /// Worker threads (output does not depend on it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Zero the timing column so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Count k-arcs exactly.
    Census(CensusArgs),
    /// Largest arc inside a point set.
    Maxarc(MaxarcArgs),
    /// Collinear tuple statistics of a point set.
    Tuples(TuplesArgs),
    /// Supersaturation chain on random large sets.
    Supersat(SupersatArgs),
    /// Table of trivial, small-k and large-k bounds.
    Bounds(BoundsArgs),
    /// Container-step parameter conditions.
    ContainerCheck(ContainerArgs),
    /// p-random subsets: moments and arc sizes.
    RandomArc(RandomArcArgs),
    /// Build a set without collinear l-tuples and certify it.
    Construct(ConstructArgs),
    /// Number of dimension-3 MDS codes from the projective arc count.
    Mds(MdsArgs),
    /// Threshold scan over q and p = q^-e.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: usize,
    /// Also count every size up to this one.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, default_value = "affine")]
    pub kind: PlaneKind,
    /// Search-node cap; exceeding it exits with code 3.
    #[arg(long, default_value_t = census::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Remove the node cap.
    #[arg(long)]
    pub exact: bool,
    /// Count extensions of a fixed frame and scale by the group order.
    #[arg(long)]
    pub frame: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct PointSource {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value = "affine")]
    pub kind: PlaneKind,
    /// Point set file (text or JSON).
    #[arg(long, conflicts_with_all = ["ids", "full", "random"])]
    pub points: Option<PathBuf>,
    /// Comma-separated point ids.
    #[arg(long, value_delimiter = ',')]
    pub ids: Option<Vec<usize>>,
    /// Every point of the plane.
    #[arg(long)]
    pub full: bool,
    /// p-random subset with this inclusion probability.
    #[arg(long)]
    pub random: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct MaxarcArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: PointSource,
    /// Subsample-and-prune instead of the exact search.
    #[arg(long)]
    pub greedy: bool,
    #[arg(long, default_value_t = maxarc::DEFAULT_ARC_BUDGET)]
    pub budget: u64,
    /// Re-check a certificate file instead of computing.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct TuplesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: PointSource,
    #[arg(long, default_value_t = 3)]
    pub l: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct SupersatArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub q: u64,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<u64>,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Fill the census columns where an exact count is feasible.
    #[arg(long)]
    pub census: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct ContainerArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = bounds::DEFAULT_SUPERSAT_C)]
    pub c: f64,
    /// Also print brute-force codegrees of the collinearity hypergraph for this q.
    #[arg(long)]
    pub codegrees: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct RandomArcArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, conflicts_with = "p_exp", required_unless_present = "p_exp")]
    pub p: Option<f64>,
    /// Use p = q^-e.
    #[arg(long)]
    pub p_exp: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "exact")]
    pub arc_mode: ArcMode,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 4)]
    pub l: u32,
    /// Print only the aggregate line, not one line per trial.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstructArgs {
    #[arg(long, required_unless_present = "verify")]
    pub q: Option<u32>,
    #[arg(long, default_value_t = 4)]
    pub l: u32,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = randlab::DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: u32,
    /// Re-check a certificate file instead of computing.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct MdsArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u64,
    /// Projective arc count; counted exactly when omitted.
    #[arg(long)]
    pub b: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub qs: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_exps: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value = "exact")]
    pub arc_mode: ArcMode,
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(precondition(format!("cannot start {n} workers: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(Outcome { data, code }) => {
            let written = match &cli.out {
                Some(path) => {
                    let path = resolve_out(path);
                    std::fs::write(&path, &data).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => out.write_all(data.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_IO;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::AttemptsExhausted(_) => EXIT_BUDGET,
        _ => EXIT_PRECONDITION,
    }
}

fn resolve_out(path: &std::path::Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

struct Outcome {
    data: String,
    code: i32,
}

fn header(cli: &Cli) -> String {
    format!(
        "# arclab {VERSION} {}\n",
        serde_json::to_string(cli).expect("config serializes")
    )
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let mut data = header(cli);
    let mut code = EXIT_OK;
    match &cli.command {
        Command::Census(a) => census_cmd(a, cli.no_timing, &mut data)?,
        Command::Maxarc(a) => code = maxarc_cmd(a, &mut data)?,
        Command::Tuples(a) => tuples_cmd(a, &mut data)?,
        Command::Supersat(a) => supersat_cmd(a, &mut data)?,
        Command::Bounds(a) => bounds_cmd(a, &mut data)?,
        Command::ContainerCheck(a) => container_cmd(a, &mut data)?,
        Command::RandomArc(a) => random_arc_cmd(a, &mut data)?,
        Command::Construct(a) => code = construct_cmd(a, &mut data)?,
        Command::Mds(a) => mds_cmd(a, &mut data)?,
        Command::Scan(a) => scan_cmd(a, &mut data)?,
    }
    Ok(Outcome { data, code })
}

fn census_cmd(a: &CensusArgs, no_timing: bool, data: &mut String) -> Result<()> {
    let model = PlaneModel::from_order(a.q, a.kind)?;
    let mode = if a.exact {
        CensusMode::Exact
    } else {
        CensusMode::Capped(a.budget)
    };
    let reduction = if a.frame {
        Reduction::Frame
    } else {
        Reduction::None
    };
    let k_max = a.k_max.unwrap_or(a.k);
    if k_max < a.k {
        return Err(precondition("--k-max is below --k"));
    }
    let mut rows: Vec<CensusResult> = Vec::new();
    for k in a.k..=k_max {
        rows.push(census::count_arcs_exact(
            &CensusQuery::new(&model, k).mode(mode).reduction(reduction),
        )?);
    }
    match a.format {
        Format::Csv => {
            data.push_str(CensusResult::CSV_HEADER);
            data.push('\n');
            for r in &rows {
                data.push_str(&r.csv_row(!no_timing));
                data.push('\n');
            }
        }
        Format::Json => {
            for r in &rows {
                data.push_str(&serde_json::to_string(r).expect("serializes"));
                data.push('\n');
            }
        }
    }
    Ok(())
}

fn load_points(src: &PointSource) -> Result<(PlaneModel, PointSet)> {
    let model = PlaneModel::from_order(src.q, src.kind)?;
    let set = if let Some(path) = &src.points {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let body = strip_comments(&text);
        let record = if body.trim_start().starts_with('{') {
            PointSetRecord::from_json(&body)?
        } else {
            PointSetRecord::from_text(&body)?
        };
        if record.q as u64 != src.q || record.kind != src.kind {
            return Err(precondition(format!(
                "point file is for q={} {}, not q={} {}",
                record.q, record.kind, src.q, src.kind
            )));
        }
        record.to_pointset()?
    } else if let Some(ids) = &src.ids {
        PointSet::from_ids(model.num_points(), ids.iter().copied())?
    } else if src.full {
        model.full_set()
    } else if let Some(p) = src.random {
        if src.kind != PlaneKind::Affine {
            return Err(precondition("random sets are drawn in the affine plane"));
        }
        RandomModel::new(src.q as u32, p, src.seed)?.sample(&model, 0)
    } else {
        return Err(precondition(
            "give one of --points, --ids, --full or --random",
        ));
    };
    Ok((model, set))
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn read_artifact(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map(|t| strip_comments(&t))
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn maxarc_cmd(a: &MaxarcArgs, data: &mut String) -> Result<i32> {
    if let Some(path) = &a.verify {
        let cert = ArcCertificateJson::from_json(&read_artifact(path)?)?;
        cert.verify()?;
        writeln!(
            data,
            "{}",
            json!({"verified": true, "arc_size": cert.arc_size})
        )
        .unwrap();
        return Ok(EXIT_OK);
    }
    let (model, set) = load_points(&a.source)?;
    let cert = if a.greedy {
        let r = maxarc::greedy_arc(&model, &set, a.source.seed)?;
        if let Some(floor) = r.floor {
            log::info!("subsample floor {floor:.4}, best {}", r.certificate.size);
        }
        r.certificate
    } else {
        maxarc::max_arc_exact_with(
            &model,
            &set,
            MaxArcOptions {
                node_budget: a.budget,
                ..Default::default()
            },
        )?
    };
    writeln!(data, "{}", cert.to_json()).unwrap();
    Ok(if !a.greedy && !cert.optimal {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn tuples_cmd(a: &TuplesArgs, data: &mut String) -> Result<()> {
    let (model, set) = load_points(&a.source)?;
    let hist = sets::line_histogram(&model, &set);
    let tuples = sets::count_collinear_tuples(&model, &set, a.l)?;
    let histogram: serde_json::Map<String, serde_json::Value> = hist
        .summary
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let cover = sets::coverage(&model, &set);
    let row = json!({
        "q": model.q(),
        "kind": model.kind(),
        "size": set.len(),
        "l": a.l,
        "tuples": tuples.to_string(),
        "triples": hist.tuples(3).to_string(),
        "incidences": hist.total(),
        "max_line": hist.max_line(),
        "histogram": histogram,
        "covered": cover.len(),
        "is_arc": sets::is_arc(&model, &set),
    });
    writeln!(data, "{row}").unwrap();
    Ok(())
}

fn supersat_cmd(a: &SupersatArgs, data: &mut String) -> Result<()> {
    let model = PlaneModel::from_order(a.q, PlaneKind::Affine)?;
    let n = model.num_points();
    let lo = 4 * a.q as usize;
    if lo > n {
        return Err(precondition(format!(
            "4q = {lo} exceeds the {n} points of the plane"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::new();
    for trial in 0..a.trials {
        let size = rng.gen_range(lo..=n);
        let set = random_subset(&mut rng, n, size);
        let r = sets::supersaturation_report(&model, &set)?;
        rows.push((trial, r));
    }
    let min_ratio = rows.iter().map(|(_, r)| r.ratio.clone()).min();
    match a.format {
        Format::Csv => {
            data.push_str("trial,size,triples,ratio,rich_lines,rich_half,chain\n");
            for (t, r) in &rows {
                writeln!(
                    data,
                    "{t},{},{},{:.6},{},{},{}",
                    r.size,
                    r.triples,
                    r.ratio_f64,
                    r.rich_lines,
                    r.step("rich_half").is_some_and(|s| s.holds),
                    r.all_hold()
                )
                .unwrap();
            }
        }
        Format::Json => {
            let summary = json!({
                "q": a.q,
                "trials": a.trials,
                "min_ratio": min_ratio.map(|r| r.to_string()),
                "all_chains_hold": rows.iter().all(|(_, r)| r.all_hold()),
            });
            writeln!(data, "{summary}").unwrap();
        }
    }
    Ok(())
}

/// Uniform `size`-subset of `0..n` by a partial Fisher-Yates shuffle.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, size: usize) -> PointSet {
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    PointSet::from_ids(n, ids[..size].iter().copied()).expect("ids in range")
}

/// Largest plane order for which `bounds --census` attempts a count.
const BOUNDS_CENSUS_MAX_Q: u64 = 32;

fn bounds_cmd(a: &BoundsArgs, data: &mut String) -> Result<()> {
    let model = if a.census {
        if a.q > BOUNDS_CENSUS_MAX_Q {
            return Err(precondition(format!(
                "census columns need q <= {BOUNDS_CENSUS_MAX_Q}"
            )));
        }
        Some(PlaneModel::from_order(a.q, PlaneKind::Affine)?)
    } else {
        crate::gf::prime_power(a.q)
            .ok_or_else(|| precondition(format!("{} is not a prime power", a.q)))?;
        None
    };
    let mut rows = Vec::new();
    for &k in &a.k {
        if k > a.q * a.q {
            return Err(precondition(format!("k = {k} exceeds q^2")));
        }
        let t = if k > 1 {
            (k as f64).ln() / (a.q as f64).ln()
        } else {
            0.0
        };
        let (tlo, thi) = bounds::trivial_bounds(a.q, k);
        let small = bounds::smallt_bounds(a.q, k, a.delta).ok();
        let large = if t + bounds::EXPONENT_TOL >= 0.5 + a.delta {
            bounds::larget_bound(a.q, t, a.delta).ok()
        } else {
            None
        };
        let census = match &model {
            Some(m) => Some(census::count_arcs_exact(
                &CensusQuery::new(m, k as usize)
                    .mode(CensusMode::Exact)
                    .reduction(Reduction::Frame),
            )?),
            None => None,
        };
        rows.push(json!({
            "q": a.q,
            "k": k,
            "t": format!("{t:.6}"),
            "delta": a.delta,
            "trivial_lo": tlo.to_string(),
            "trivial_hi": thi.to_string(),
            "product_lo": small.as_ref().map(|s| s.product_lo.to_string()),
            "product_hi": small.as_ref().map(|s| s.product_hi.to_string()),
            "exp_lo": small.as_ref().map(|s| format!("{:.6e}", s.exp_lo())),
            "exp_hi": small.as_ref().map(|s| format!("{:.6e}", s.exp_hi())),
            "larget": large.as_ref().map(|l| l.bound.to_string()),
            "census": census.as_ref().map(|c| c.count.to_string()),
            "probability": census.as_ref().map(|c| c.probability.to_string()),
            "trivial_ok": census.as_ref().map(|c| bounds::within_trivial(a.q, k, &c.count)),
            "sandwich_ok": census.as_ref().filter(|_| small.is_some()).map(|c| bounds::within_products(a.q, k, &c.probability)),
            "source": if census.is_some() { "formula+census" } else { "formula" },
        }));
    }
    const COLS: [&str; 16] = [
        "q",
        "k",
        "t",
        "delta",
        "trivial_lo",
        "trivial_hi",
        "product_lo",
        "product_hi",
        "exp_lo",
        "exp_hi",
        "larget",
        "census",
        "probability",
        "trivial_ok",
        "sandwich_ok",
        "source",
    ];
    match a.format {
        Format::Csv => {
            data.push_str(&COLS.join(","));
            data.push('\n');
            for row in &rows {
                let cells: Vec<String> = COLS
                    .iter()
                    .map(|c| match &row[*c] {
                        serde_json::Value::Null => "-".to_string(),
                        serde_json::Value::String(s) => s.clone(),
                        v => v.to_string(),
                    })
                    .collect();
                data.push_str(&cells.join(","));
                data.push('\n');
            }
        }
        Format::Json => {
            for row in &rows {
                writeln!(data, "{row}").unwrap();
            }
        }
    }
    Ok(())
}

fn container_cmd(a: &ContainerArgs, data: &mut String) -> Result<()> {
    let check = bounds::container_condition(BoundParams::new(a.q, a.t, a.s, a.delta).with_c(a.c));
    writeln!(
        data,
        "{}",
        serde_json::to_string(&check).expect("serializes")
    )
    .unwrap();
    if let Some(q) = a.codegrees {
        let model = PlaneModel::from_order(q, PlaneKind::Affine)?;
        let cg = bounds::codegrees(&model);
        writeln!(
            data,
            "{}",
            json!({"q": q, "codegrees": cg, "delta2_formula": q - 2})
        )
        .unwrap();
    }
    Ok(())
}

fn probability(q: u32, p: Option<f64>, p_exp: Option<f64>) -> Result<f64> {
    match (p, p_exp) {
        (Some(p), _) => Ok(p),
        (None, Some(e)) => Ok((q as f64).powf(-e)),
        (None, None) => Err(precondition("give --p or --p-exp")),
    }
}

fn random_arc_cmd(a: &RandomArcArgs, data: &mut String) -> Result<()> {
    let mut cfg = ExperimentConfig::new(a.q, probability(a.q, a.p, a.p_exp)?, a.trials, a.seed)
        .arc_mode(a.arc_mode);
    cfg.delta = a.delta;
    cfg.tuple_order = a.l;
    let report = randlab::random_arc_experiment(&cfg)?;
    if !report.all_moments_within() {
        log::warn!("a moment check fell outside its tolerance");
    }
    if !a.summary {
        data.push_str(&report.trials_jsonl());
    }
    writeln!(data, "{}", report.aggregate_json()).unwrap();
    Ok(())
}

fn construct_cmd(a: &ConstructArgs, data: &mut String) -> Result<i32> {
    if let Some(path) = &a.verify {
        let cert = ConstructionCertificate::from_json(&read_artifact(path)?)?;
        let v = randlab::verify_certificate(&cert)?;
        writeln!(data, "{}", json!({"verified": v.passed(), "checks": v})).unwrap();
        return Ok(if v.passed() {
            EXIT_OK
        } else {
            EXIT_PRECONDITION
        });
    }
    let q = a.q.ok_or_else(|| precondition("--q is required"))?;
    let cfg = ConstructConfig {
        q,
        l: a.l,
        delta: a.delta,
        seed: a.seed,
        max_attempts: a.max_attempts,
    };
    let cert = randlab::construct_no_l_tuples(&cfg)?;
    writeln!(data, "{}", cert.to_json()).unwrap();
    Ok(EXIT_OK)
}

fn mds_cmd(a: &MdsArgs, data: &mut String) -> Result<()> {
    let (b, source) = match &a.b {
        Some(s) => (
            s.parse::<BigUint>()
                .map_err(|e| Error::Parse(format!("--b {s:?}: {e}")))?,
            "given",
        ),
        None => {
            let r = census::count_arcs_projective(
                a.q,
                a.n as usize,
                CensusMode::Exact,
                Reduction::Frame,
            )?;
            (r.count, "census")
        }
    };
    let count = bounds::mds_count(a.q, a.n, &b)?;
    writeln!(
        data,
        "{}",
        json!({"q": a.q, "n": a.n, "b": b.to_string(), "b_source": source, "mds_count": count.to_string()})
    )
    .unwrap();
    Ok(())
}

fn scan_cmd(a: &ScanArgs, data: &mut String) -> Result<()> {
    let rows = randlab::threshold_scan(&ScanConfig {
        qs: a.qs.clone(),
        p_exponents: a.p_exps.clone(),
        trials: a.trials,
        seed: a.seed,
        delta: a.delta,
        arc_mode: a.arc_mode,
    })?;
    data.push_str(ScanRow::CSV_HEADER);
    data.push('\n');
    for r in rows {
        data.push_str(&r.csv_row());
        data.push('\n');
    }
    Ok(())
}
