//! The `ergodist` command line.
//!
//! Every command prints one JSON document on stdout; diagnostics go to
//! stderr. Exit status is 0 on success, 1 on usage, input or model errors,
//! and 2 when the request is infeasible.

pub mod io;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::changepoint::{
    list_changepoints, multi_changepoint_known_k, multi_changepoint_known_r, single_changepoint,
};
use crate::classify::three_sample;
use crate::cluster::cluster_offline;
use crate::distance::{default_level, default_words, distance, Truncation};
use crate::error::{Error, Result};
use crate::hyptest::{
    asymmetric_test, calibrate_gamma_with, uniform_test, CalibrationTable, Hypothesis,
    DEFAULT_MC_RUNS,
};
use crate::sample::Sample;
use io::AlphabetChoice;

pub const TOOL: &str = "ergodist";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const IMPOSSIBLE: &str = "\
ergodist has no test of whether two samples come from the same process.
For stationary ergodic sources no procedure can tell \"same\" from \"different\"
with vanishing error, even asymptotically: any candidate test can be fooled by
a process built to look like the other one for arbitrarily long stretches.
See \"Why there is no same/different test\" in the README. Use `classify` when a
reference sample of each candidate process is available, or `test` against an
explicit set of models.";

#[derive(Parser)]
#[command(
    name = "ergodist",
    version,
    about = "Distributional distance between stationary ergodic time series, and the \
             classification, clustering, change-point and testing procedures built on it"
)]
struct Cli {
    /// Maximum number of worker threads (default: one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from a process model (i.i.d., Markov, hidden Markov,
    /// irrational-rotation or diagonal switch/reset chain)
    Simulate(SimulateArgs),
    /// Empirical distributional distance d̂(X, Y): the w_k-weighted sum over
    /// word lengths (or window lengths and dyadic cell levels) of the total
    /// variation between the two samples' pattern frequencies
    Distance(DistanceArgs),
    /// Three-sample problem: is Z generated like X or like Y? Answers the one
    /// nearer to Z in d̂ (ties: X)
    Classify(ClassifyArgs),
    /// Group samples by generating process when the number of groups is known:
    /// farthest-point centers, then nearest-center assignment
    Cluster(ClusterArgs),
    /// Locate changes of distribution inside one sample
    Changepoint(ChangepointArgs),
    /// Test a sample against explicit model sets: goodness of fit or a
    /// level-alpha test of H0 (radius calibrated by simulation), or the
    /// nearer-hypothesis test between H0 and H1
    Test(TestArgs),
}

#[derive(Args)]
struct TruncArgs {
    /// Longest word length for discrete samples [default: ceil(log2 n)]
    #[arg(long, conflicts_with_all = ["mmax", "lmax", "exact_tail"])]
    kmax: Option<usize>,
    /// Longest window length for real samples [default: ceil(log2 n)]
    #[arg(long)]
    mmax: Option<usize>,
    /// Finest dyadic level for real samples [default: occupancy rule, at most 52]
    #[arg(long)]
    lmax: Option<u32>,
    /// Sum every dyadic level exactly (real samples); --lmax then caps the levels
    #[arg(long)]
    exact_tail: bool,
}

impl TruncArgs {
    fn explicit(&self) -> bool {
        self.kmax.is_some() || self.mmax.is_some() || self.lmax.is_some() || self.exact_tail
    }

    /// The requested truncation, filling unset bounds with defaults for `samples`.
    fn resolve(&self, samples: &[&Sample]) -> Result<Truncation> {
        let n = samples.iter().map(|s| s.len()).max().unwrap_or(1);
        let default_len = default_words(n).max_len();
        let real: Vec<&[f64]> = samples.iter().filter_map(|s| s.values()).collect();
        let t = if real.is_empty() {
            if self.mmax.is_some() || self.lmax.is_some() || self.exact_tail {
                return Err(Error::InvalidTruncation(
                    "--mmax, --lmax and --exact-tail apply to real samples; use --kmax".into(),
                ));
            }
            Truncation::words(self.kmax.unwrap_or(default_len))
        } else {
            if self.kmax.is_some() {
                return Err(Error::InvalidTruncation(
                    "--kmax applies to discrete samples; use --mmax/--lmax or --exact-tail".into(),
                ));
            }
            let m_max = self.mmax.unwrap_or(default_len);
            if self.exact_tail {
                Truncation::ExactTail { m_max, l_max: self.lmax }
            } else {
                let l_max = match self.lmax {
                    Some(l) => l,
                    None => default_level(&real, default_len),
                };
                Truncation::cells(m_max, l_max)
            }
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Args)]
struct AlphabetArgs {
    /// How to read the input values
    #[arg(long, value_enum, default_value = "auto")]
    alphabet: AlphabetChoice,
}

#[derive(Args)]
struct SimulateArgs {
    /// Model file (JSON)
    #[arg(long)]
    model: PathBuf,
    /// Sample length
    #[arg(long)]
    length: usize,
    #[arg(long, env = "SI_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the sample here, one value per line, instead of into the JSON output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    x: PathBuf,
    y: PathBuf,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[command(flatten)]
    trunc: TruncArgs,
    /// Also report d̂ on the first n1, n2, ... values of both samples
    #[arg(long, value_delimiter = ',')]
    curve: Vec<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    x: PathBuf,
    y: PathBuf,
    z: PathBuf,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[command(flatten)]
    trunc: TruncArgs,
}

#[derive(Args)]
struct ClusterArgs {
    /// Number of clusters (it cannot be estimated consistently, so it is required)
    #[arg(long)]
    k: usize,
    #[arg(required = true, num_args = 1..)]
    files: Vec<PathBuf>,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[command(flatten)]
    trunc: TruncArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["single", "k", "list", "r"])))]
struct ChangepointArgs {
    z: PathBuf,
    /// One change point: the split in [ceil(alpha n), floor(beta n)] maximizing
    /// d̂ between the two parts
    #[arg(long, requires_all = ["alpha", "beta"])]
    single: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// K change points, given a lower bound lambda on the segment lengths as a
    /// fraction of n
    #[arg(long, requires = "lambda")]
    k: Option<usize>,
    /// Ranked candidate list whose first K entries estimate the first K change
    /// points for every K
    #[arg(long, requires = "lambda")]
    list: bool,
    /// Change points when the segments come from R distinct processes: cut at
    /// every candidate, cluster the pieces, merge neighbours
    #[arg(long, requires = "lambda")]
    r: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[command(flatten)]
    trunc: TruncArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("null").required(true).args(["gof", "h0"])))]
struct TestArgs {
    x: PathBuf,
    /// Goodness of fit: H0 is this single model
    #[arg(long, conflicts_with_all = ["h0", "h1"])]
    gof: Option<PathBuf>,
    /// H0 model files (comma separated; each holds a model or an array of models)
    #[arg(long, value_delimiter = ',')]
    h0: Vec<PathBuf>,
    /// H1 model files; with --h0, runs the nearer-hypothesis test
    #[arg(long, value_delimiter = ',', requires = "h0")]
    h1: Vec<PathBuf>,
    /// Level of the test of H0
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Simulated samples per H0 model for calibrating the acceptance radius
    #[arg(long, conflicts_with = "cal_table")]
    calibrate: Option<usize>,
    #[arg(long, env = "SI_SEED", default_value_t = 0)]
    seed: u64,
    /// Use a stored calibration table
    #[arg(long)]
    cal_table: Option<PathBuf>,
    /// Where computed calibration tables are kept and looked up
    #[arg(long, env = "SI_CACHE_DIR", default_value = ".ergodist-cache")]
    cache_dir: PathBuf,
    /// Longest word length [default: ceil(log2 n)]
    #[arg(long)]
    kmax: Option<usize>,
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let first_word = args.iter().skip(1).find(|a| !a.to_string_lossy().starts_with('-'));
    if let Some(w) = first_word {
        let w = w.to_string_lossy();
        if ["same-different", "homogeneity", "discriminate"].contains(&w.as_ref()) {
            let _ = writeln!(err, "{IMPOSSIBLE}");
            return 1;
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let mut notes: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &mut notes));
    let _ = err.write_all(&notes);
    match result {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("json output");
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Infeasible(_) => 2,
                _ => 1,
            }
        }
    }
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!(TOOL));
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn merge(mut m: Map<String, Value>, body: impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(body).expect("serializable") {
        Value::Object(b) => m.extend(b),
        other => {
            m.insert("result".into(), other);
        }
    }
    m
}

fn paths(ps: &[PathBuf]) -> Value {
    json!(ps.iter().map(|p| p.display().to_string()).collect::<Vec<_>>())
}

fn dispatch(command: Command, err: &mut dyn Write) -> Result<Value> {
    match command {
        Command::Simulate(a) => simulate(a, err),
        Command::Distance(a) => distance_cmd(a, err),
        Command::Classify(a) => classify_cmd(a, err),
        Command::Cluster(a) => cluster_cmd(a, err),
        Command::Changepoint(a) => changepoint_cmd(a, err),
        Command::Test(a) => test_cmd(a, err),
    }
    .map(Value::Object)
}

fn simulate(a: SimulateArgs, err: &mut dyn Write) -> Result<Map<String, Value>> {
    let models = io::load_models(&[&a.model])?;
    let [model] = models.as_slice() else {
        return Err(Error::InvalidArgument(format!(
            "{}: simulate needs exactly one model, found {}",
            a.model.display(),
            models.len()
        )));
    };
    let x = model.sample(a.length, a.seed)?;
    let mut m = header("simulate");
    m.insert("model".into(), serde_json::to_value(model).expect("model"));
    m.insert("length".into(), json!(a.length));
    m.insert("seed".into(), json!(a.seed));
    match &a.out {
        Some(p) => {
            fs::write(p, io::format_csv(&x)).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            m.insert("out".into(), json!(p.display().to_string()));
            let _ = writeln!(err, "wrote {} symbols to {}", a.length, p.display());
        }
        None => {
            m.insert("sample".into(), json!(x.symbols().expect("models emit symbols")));
        }
    }
    Ok(m)
}

fn distance_cmd(a: DistanceArgs, err: &mut dyn Write) -> Result<Map<String, Value>> {
    let s = io::load_samples(&[&a.x, &a.y], a.alphabet.alphabet)?;
    let (x, y) = (&s[0], &s[1]);
    let t = a.trunc.resolve(&[x, y])?;
    let est = distance(x, y, &t)?;
    let _ = writeln!(err, "d̂ = {:.6}", est.value);
    let mut m = header("distance");
    m.insert("inputs".into(), paths(&[a.x, a.y]));
    m.insert("alphabet".into(), json!(x.alphabet()));
    let mut m = merge(m, &est);
    if !a.curve.is_empty() {
        let limit = x.len().min(y.len());
        let mut points = Vec::new();
        for &n in &a.curve {
            if n == 0 || n > limit {
                return Err(Error::InvalidArgument(format!(
                    "--curve length {n} must lie in 1..={limit}"
                )));
            }
            let (px, py) = (x.slice(0, n)?, y.slice(0, n)?);
            let tn = if a.trunc.explicit() { t } else { a.trunc.resolve(&[&px, &py])? };
            let e = distance(&px, &py, &tn)?;
            points.push(merge(Map::from_iter([("n".to_string(), json!(n))]), json!({
                "value": e.value,
                "truncation": tn,
            })));
        }
        m.insert("curve".into(), json!(points));
    }
    Ok(m)
}

fn classify_cmd(a: ClassifyArgs, err: &mut dyn Write) -> Result<Map<String, Value>> {
    let s = io::load_samples(&[&a.x, &a.y, &a.z], a.alphabet.alphabet)?;
    let t = a.trunc.resolve(&[&s[0], &s[1], &s[2]])?;
    let r = three_sample(&s[0], &s[1], &s[2], &t)?;
    let _ = writeln!(
        err,
        "d̂(x,z) = {:.6}, d̂(y,z) = {:.6}: z is classified as {:?}",
        r.d_xz.value, r.d_yz.value, r.label
    );
    let mut m = header("classify");
    m.insert("inputs".into(), paths(&[a.x, a.y, a.z]));
    m.insert("truncation".into(), json!(t));
    Ok(merge(m, &r))
}

fn cluster_cmd(a: ClusterArgs, err: &mut dyn Write) -> Result<Map<String, Value>> {
    let s = io::load_samples(&a.files, a.alphabet.alphabet)?;
    let refs: Vec<&Sample> = s.iter().collect();
    let t = a.trunc.resolve(&refs)?;
    let c = cluster_offline(&s, a.k, &t)?;
    let name = |i: usize| a.files[i].display().to_string();
    let groups: Vec<Vec<String>> = c.clusters().iter().map(|g| g.iter().map(|&i| name(i)).collect()).collect();
    for (i, g) in groups.iter().enumerate() {
        let _ = writeln!(err, "cluster {i}: {}", g.join(" "));
    }
    let mut m = header("cluster");
    m.insert("inputs".into(), paths(&a.files));
    m.insert("k".into(), json!(a.k));
    m.insert("truncation".into(), json!(t));
    m.insert("assignment".into(), json!(c.assignment));
    m.insert("centers".into(), json!(c.centers.iter().map(|&i| name(i)).collect::<Vec<_>>()));
    m.insert("clusters".into(), json!(groups));
    m.insert("distance_evaluations".into(), json!(c.distance_evaluations));
    Ok(m)
}

fn changepoint_cmd(a: ChangepointArgs, err: &mut dyn Write) -> Result<Map<String, Value>> {
    let z = io::load_samples(&[&a.z], a.alphabet.alphabet)?.pop().unwrap();
    let t = a.trunc.resolve(&[&z])?;
    let mut m = header("changepoint");
    m.insert("input".into(), json!(a.z.display().to_string()));
    m.insert("n".into(), json!(z.len()));
    let lambda = a.lambda.unwrap_or(0.0);
    if a.single {
        let (alpha, beta) = (a.alpha.unwrap(), a.beta.unwrap());
        let e = single_changepoint(&z, alpha, beta, &t)?;
        let _ = writeln!(err, "change point at theta = {:.6} (split {})", e.thetas[0], e.splits[0]);
        m.insert("method".into(), json!("single"));
        m.insert("alpha".into(), json!(alpha));
        m.insert("beta".into(), json!(beta));
        m.insert("scan_rule".into(), json!("ceil(alpha n) <= t <= floor(beta n)"));
        Ok(merge(m, &e))
    } else if let Some(k) = a.k {
        let e = multi_changepoint_known_k(&z, k, lambda, &t)?;
        let _ = writeln!(err, "change points at {:?}", e.thetas);
        m.insert("method".into(), json!("known_k"));
        m.insert("k".into(), json!(k));
        m.insert("lambda".into(), json!(lambda));
        Ok(merge(m, &e))
    } else if a.list {
        let list = list_changepoints(&z, lambda, &t)?;
        let _ = writeln!(err, "{} ranked candidates", list.len());
        m.insert("method".into(), json!("list"));
        m.insert("lambda".into(), json!(lambda));
        m.insert("truncation".into(), json!(t));
        m.insert("candidates".into(), json!(list));
        Ok(m)
    } else {
        let r = a.r.expect("mode group");
        let (kappa, e) = multi_changepoint_known_r(&z, r, lambda, &t)?;
        let _ = writeln!(err, "{kappa} change points at {:?}", e.thetas);
        m.insert("method".into(), json!("known_r"));
        m.insert("r".into(), json!(r));
        m.insert("lambda".into(), json!(lambda));
        m.insert("kappa_hat".into(), json!(kappa));
        Ok(merge(m, &e))
    }
}

fn cache_file(dir: &Path, h: &Hypothesis, n: usize, theta: f64, runs: usize, seed: u64, t: &Truncation) -> PathBuf {
    dir.join(format!(
        "gamma-{}-n{n}-theta{theta}-runs{runs}-seed{seed}-k{}.json",
        &h.hash()[..16],
        t.max_len()
    ))
}

fn test_cmd(a: TestArgs, err: &mut dyn Write) -> Result<Map<String, Value>> {
    let (h0, kind) = match &a.gof {
        Some(p) => (Hypothesis::new("H0", io::load_models(&[p])?)?, "goodness_of_fit"),
        None if a.h1.is_empty() => (Hypothesis::new("H0", io::load_models(&a.h0)?)?, "asymmetric"),
        None => (Hypothesis::new("H0", io::load_models(&a.h0)?)?, "uniform"),
    };
    let x = io::load_samples(&[&a.x], AlphabetChoice::Discrete)?.pop().unwrap();
    let size = h0.alphabet_size();
    let x = x.widen(size).map_err(|_| {
        Error::AlphabetMismatch(format!(
            "{} uses symbols beyond the hypothesis alphabet of size {size}",
            a.x.display()
        ))
    })?;
    let n = x.len();
    let t = Truncation::words(a.kmax.unwrap_or(default_words(n).max_len()));
    t.validate()?;

    let mut m = header("test");
    m.insert("input".into(), json!(a.x.display().to_string()));
    m.insert("test".into(), json!(kind));
    m.insert("h0_hash".into(), json!(h0.hash()));

    if kind == "uniform" {
        let h1 = Hypothesis::new("H1", io::load_models(&a.h1)?)?;
        let v = uniform_test(&x, &h0, &h1, &t)?;
        let _ = writeln!(
            err,
            "d̂(x,H0) = {:.6}, d̂(x,H1) = {:.6}: {}",
            v.statistic,
            v.threshold,
            if v.decision == 0 { "H0" } else { "H1" }
        );
        m.insert("h1_hash".into(), json!(h1.hash()));
        return Ok(merge(m, &v));
    }

    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("--alpha must lie in (0, 1), got {}", a.alpha)));
    }
    let theta = 1.0 - a.alpha;
    let (cal, source, path) = match &a.cal_table {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let cal: CalibrationTable = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: line {}: {e}", p.display(), e.line())))?;
            if cal.truncation != t {
                return Err(Error::CalibrationMismatch(format!(
                    "table uses k_max = {}, test uses {}",
                    cal.truncation.max_len(),
                    t.max_len()
                )));
            }
            (cal, "file", p.clone())
        }
        None => {
            let runs = a.calibrate.unwrap_or(DEFAULT_MC_RUNS);
            let path = cache_file(&a.cache_dir, &h0, n, theta, runs, a.seed, &t);
            let cached = fs::read_to_string(&path)
                .ok()
                .and_then(|s| serde_json::from_str::<CalibrationTable>(&s).ok())
                .filter(|c| c.check(&h0, n, theta).is_ok() && c.truncation == t);
            match cached {
                Some(c) => (c, "cache", path),
                None => {
                    let _ = writeln!(err, "calibrating with {runs} runs per model");
                    let cal = calibrate_gamma_with(&h0, n, theta, runs, a.seed, &t)?;
                    let stored = fs::create_dir_all(&a.cache_dir).and_then(|_| {
                        fs::write(&path, serde_json::to_string_pretty(&cal).expect("table"))
                    });
                    if let Err(e) = stored {
                        let _ = writeln!(err, "warning: cannot cache calibration table: {e}");
                    }
                    (cal, "computed", path)
                }
            }
        }
    };
    let v = asymmetric_test(&x, &h0, a.alpha, &cal)?;
    let _ = writeln!(
        err,
        "d̂(x,H0) = {:.6}, gamma = {:.6}: {}",
        v.statistic,
        v.threshold,
        if v.decision == 0 { "accept H0" } else { "reject H0" }
    );
    m.insert("alpha".into(), json!(a.alpha));
    m.insert(
        "calibration".into(),
        json!({
            "source": source,
            "path": path.display().to_string(),
            "theta": cal.theta,
            "gamma": cal.gamma,
            "mc_runs": cal.mc_runs,
            "seed": cal.seed,
        }),
    );
    Ok(merge(m, &v))
}
