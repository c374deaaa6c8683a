use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcroots::arith::{enumerate_roots, CongruenceFilter, Discriminant, Root};
use qcroots::compare::{run_compare, CompareConfig};
use qcroots::correspondence::{address_to_root, geodesic_position};
use qcroots::density::DensityProfile;
use qcroots::qfield::ClassGroupData;
use qcroots::stats::{
    counting_statistics, gap_distribution, pair_correlation, weyl_sum, CountWindow, Histogram, PointSequence,
    Sampling,
};
use qcroots::Error;

mod output;

use output::{print_json, write_csv, BinSpec, RunConfig};

#[derive(Parser)]
#[command(name = "qcroots", version, about = "Roots of quadratic congruences and their fine-scale statistics")]
struct Cli {
    /// Size of the worker pool; defaults to one thread per core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Level {
    /// Keep only roots with m ≡ 0 (mod n).
    #[arg(long, default_value_t = 1)]
    n: u64,
    /// Required residue of mu modulo n.
    #[arg(long, default_value_t = 0)]
    nu: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List the roots mu of mu² ≡ D (mod m) for m ≤ M.
    Roots {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "M")]
        max_m: u64,
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Narrow class group data as JSON.
    Classgroup {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map roots to geodesic positions and back, counting failed round trips.
    CorrespondCheck {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        /// Check every root with m ≤ M.
        #[arg(long = "M", required_unless_present = "input")]
        max_m: Option<u64>,
        /// Read roots from a CSV with columns m,mu instead.
        #[arg(long, conflicts_with = "max_m")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limiting pair-correlation density on a grid of v.
    PaircorrTheory {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[command(flatten)]
        level: Level,
        #[arg(long = "Q", default_value_t = 1000.0)]
        q_cutoff: f64,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        vmin: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        vmax: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Exit with status 3 when a tail bound exceeds this value.
        #[arg(long)]
        max_tail: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of scaled differences of the first N normalised roots.
    PaircorrEmpirical {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        points: usize,
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        bins: Bins,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of scaled cyclic gaps of the first N normalised roots.
    Gaps {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        points: usize,
        #[command(flatten)]
        level: Level,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 5.0)]
        hi: f64,
        #[arg(long, default_value_t = 0.05)]
        width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution of the number of points in a randomly placed window.
    Counting {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        points: usize,
        #[command(flatten)]
        level: Level,
        /// The window is x + [lo, hi)/N.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, value_enum, default_value_t = SamplingArg::Uniform)]
        sampling: SamplingArg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exponential sums over all roots with m ≤ M.
    Weyl {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "M")]
        max_m: u64,
        /// Frequencies, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
        h: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical pair correlation of the first N roots against the theory.
    Compare {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N", default_value_t = 1_000_000)]
        points: usize,
        #[command(flatten)]
        level: Level,
        #[arg(long = "Q", default_value_t = 1000.0)]
        q_cutoff: f64,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        vmin: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        vmax: f64,
        #[arg(long, default_value_t = 0.1)]
        width: f64,
        /// Midpoints per bin when averaging the theoretical density.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0.05)]
        max_error: f64,
        #[arg(long, default_value_t = 0.02)]
        mean_error: f64,
        #[arg(long, default_value_t = 0.005)]
        max_tail: f64,
        /// Write the comparison without enforcing the tolerances.
        #[arg(long)]
        no_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Bins {
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    vmin: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    vmax: f64,
    #[arg(long, default_value_t = 0.05)]
    width: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplingArg {
    Uniform,
    Palm,
}

/// How a run ended, mapped onto the exit status.
enum Failure {
    Validation(String),
    Tolerance(serde_json::Value),
    Budget(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Tolerance(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Internal(_) => 1,
        }
    }

    fn report(&self) -> serde_json::Value {
        let (kind, detail) = match self {
            Failure::Validation(m) => ("validation", serde_json::Value::from(m.as_str())),
            Failure::Tolerance(v) => ("tolerance", v.clone()),
            Failure::Budget(m) => ("budget", serde_json::Value::from(m.as_str())),
            Failure::Internal(m) => ("internal", serde_json::Value::from(m.as_str())),
        };
        serde_json::json!({ "error": kind, "exit_code": self.code(), "detail": detail })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidDiscriminant { .. }
            | Error::NotRealQuadratic(_)
            | Error::InvalidFilter { .. }
            | Error::Domain(_)
            | Error::EmptySequence
            | Error::ModulusOutOfRange { .. } => Failure::Validation(msg),
            Error::Budget { .. } | Error::Overflow(_) | Error::NoFilteredRoot { .. } => Failure::Budget(msg),
            Error::Quadrature { .. } => Failure::Tolerance(serde_json::Value::from(msg)),
            Error::NoClassMatch(_) => Failure::Internal(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("{}", Failure::Internal(e.to_string()).report());
            return ExitCode::from(1);
        }
    }
    match run(cli.command, cli.threads) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.report());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command, threads: Option<usize>) -> Outcome {
    match command {
        Command::Roots { d, max_m, level, out } => {
            let config = RunConfig { subcommand: "roots", d, max_m: Some(max_m), out, threads, ..level.into() };
            roots(&config)
        }
        Command::Classgroup { d, out } => classgroup(d, out.as_deref()),
        Command::CorrespondCheck { d, max_m, input, out } => {
            let config = RunConfig { subcommand: "correspond-check", d, max_m, out, threads, ..Default::default() };
            correspond_check(&config, input.as_deref())
        }
        Command::PaircorrTheory { d, level, q_cutoff, vmin, vmax, step, max_tail, out } => {
            let config = RunConfig {
                subcommand: "paircorr-theory",
                d,
                q_cutoff: Some(q_cutoff),
                bins: Some(BinSpec { lo: vmin, hi: vmax, width: step }),
                out,
                threads,
                ..level.into()
            };
            paircorr_theory(&config, max_tail)
        }
        Command::PaircorrEmpirical { d, points, level, bins, out } => {
            let config = RunConfig {
                subcommand: "paircorr-empirical",
                d,
                points: Some(points),
                bins: Some(BinSpec { lo: bins.vmin, hi: bins.vmax, width: bins.width }),
                out,
                threads,
                ..level.into()
            };
            paircorr_empirical(&config)
        }
        Command::Gaps { d, points, level, lo, hi, width, out } => {
            let config = RunConfig {
                subcommand: "gaps",
                d,
                points: Some(points),
                bins: Some(BinSpec { lo, hi, width }),
                out,
                threads,
                ..level.into()
            };
            gaps(&config)
        }
        Command::Counting { d, points, level, lo, hi, sampling, samples, seed, out } => {
            let config = RunConfig {
                subcommand: "counting",
                d,
                points: Some(points),
                seed: Some(seed),
                out,
                threads,
                ..level.into()
            };
            counting(&config, CountWindow::new(lo, hi)?, sampling, samples)
        }
        Command::Weyl { d, max_m, h, out } => {
            let config = RunConfig { subcommand: "weyl", d, max_m: Some(max_m), out, threads, ..Default::default() };
            weyl(&config, &h)
        }
        Command::Compare {
            d,
            points,
            level,
            q_cutoff,
            vmin,
            vmax,
            width,
            samples,
            max_error,
            mean_error,
            max_tail,
            no_check,
            out,
        } => {
            let config = RunConfig {
                subcommand: "compare",
                d,
                points: Some(points),
                q_cutoff: Some(q_cutoff),
                bins: Some(BinSpec { lo: vmin, hi: vmax, width }),
                out,
                threads,
                ..level.into()
            };
            let limits = (!no_check).then_some(Tolerances { max_error, mean_error, max_tail });
            compare(&config, samples, limits)
        }
    }
}

impl From<Level> for RunConfig {
    fn from(level: Level) -> Self {
        RunConfig { n: level.n, nu: level.nu, ..Default::default() }
    }
}

fn discriminant_and_filter(config: &RunConfig) -> Result<(Discriminant, CongruenceFilter), Failure> {
    let d = Discriminant::new(config.d)?;
    let filter = CongruenceFilter::new(config.n, config.nu).validate(d)?;
    Ok((d, filter))
}

fn first_n(config: &RunConfig) -> Result<PointSequence, Failure> {
    let (d, filter) = discriminant_and_filter(config)?;
    let points = config.points.unwrap_or(0);
    if points < 2 {
        return Err(Failure::Validation("--N must be at least 2".into()));
    }
    Ok(PointSequence::first_n(d, points, filter)?)
}

#[derive(Serialize)]
struct Counted {
    count: usize,
}

fn roots(config: &RunConfig) -> Outcome {
    let (d, filter) = discriminant_and_filter(config)?;
    let roots = enumerate_roots(d, config.max_m.unwrap_or(0), filter)?;
    write_csv(config, &roots, &["m", "mu"], &Counted { count: roots.len() })?;
    Ok(())
}

#[derive(Serialize)]
struct Eps {
    x: i128,
    y: i128,
}

#[derive(Serialize)]
struct ClassJson {
    l: usize,
    form: [i128; 3],
    #[serde(rename = "M_l")]
    m_l: [[i128; 2]; 2],
    endpoints: [String; 2],
}

#[derive(Serialize)]
struct ClassGroupJson {
    #[serde(rename = "D")]
    d: i64,
    h_plus: usize,
    eps0: Eps,
    classes: Vec<ClassJson>,
}

fn classgroup(d: i64, out: Option<&Path>) -> Outcome {
    let cg = ClassGroupData::new(Discriminant::new(d)?)?;
    let (x, y, _) = cg.eps0.parts();
    let json = ClassGroupJson {
        d,
        h_plus: cg.h_plus,
        eps0: Eps { x, y },
        classes: cg
            .classes
            .iter()
            .map(|c| ClassJson {
                l: c.index,
                form: c.form.coeffs(),
                m_l: c.stabilizer.rows(),
                endpoints: c.endpoints.map(|e| e.to_string()),
            })
            .collect(),
    };
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            serde_json::to_writer_pretty(&mut f, &json).map_err(std::io::Error::from)?;
            std::io::Write::write_all(&mut f, b"\n")?;
        }
        None => print_json(&json)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct PositionRow {
    m: u64,
    mu: u64,
    l: usize,
    t: f64,
}

#[derive(Serialize)]
struct CheckSummary {
    checked: usize,
    roundtrip_failures: usize,
}

fn read_roots(path: &Path, d: i64) -> Result<Vec<Root>, Failure> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut roots = Vec::new();
    for rec in rdr.deserialize() {
        let root: Root = rec?;
        let (m, mu) = (root.m as i128, root.mu as i128);
        if m == 0 || mu >= m || (mu * mu - d as i128).rem_euclid(m) != 0 {
            return Err(Failure::Validation(format!("({}, {}) is not a root for D = {d}", root.m, root.mu)));
        }
        roots.push(root);
    }
    Ok(roots)
}

fn correspond_check(config: &RunConfig, input: Option<&Path>) -> Outcome {
    let d = Discriminant::new(config.d)?;
    let cg = ClassGroupData::new(d)?;
    let roots = match input {
        Some(path) => read_roots(path, config.d)?,
        None => enumerate_roots(d, config.max_m.unwrap_or(0), CongruenceFilter::TRIVIAL)?,
    };
    let mut rows = Vec::with_capacity(roots.len());
    let mut failures = 0;
    for &root in &roots {
        match geodesic_position(root, &cg) {
            Ok((l, t, addr)) if address_to_root(l, &addr.gamma, &cg) == Some(root) => {
                rows.push(PositionRow { m: root.m, mu: root.mu, l, t })
            }
            _ => failures += 1,
        }
    }
    let summary = CheckSummary { checked: roots.len(), roundtrip_failures: failures };
    if config.out.is_some() {
        write_csv(config, &rows, &["m", "mu", "l", "t"], &summary)?;
    }
    print_json(&summary)?;
    if failures > 0 {
        return Err(Failure::Tolerance(serde_json::json!({ "roundtrip_failures": failures })));
    }
    Ok(())
}

#[derive(Serialize)]
struct TheoryRow {
    v: f64,
    w: f64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct TheoryMeta {
    #[serde(rename = "D")]
    d: i64,
    n: u64,
    nu: u64,
    #[serde(rename = "Q")]
    q: f64,
    kappa: f64,
    h_plus: usize,
    eps0: String,
    coset_count: usize,
    normalization_choice: qcroots::density::NormalizationReport,
}

fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(step > 0.0 && lo <= hi) {
        return Err(Failure::Validation("the grid needs vmin <= vmax and step > 0".into()));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

fn paircorr_theory(config: &RunConfig, max_tail: Option<f64>) -> Outcome {
    let (d, filter) = discriminant_and_filter(config)?;
    let cg = ClassGroupData::new(d)?;
    let bins = config.bins.as_ref().expect("theory runs carry a grid");
    let profile = DensityProfile::build(&cg, filter, config.q_cutoff.unwrap_or(1000.0))?;
    let rows: Vec<TheoryRow> = grid(bins.lo, bins.hi, bins.width)?
        .into_iter()
        .map(|v| {
            let w = profile.w(v);
            TheoryRow { v, w: w.value, tail_bound: w.tail_bound }
        })
        .collect();
    let meta = TheoryMeta {
        d: config.d,
        n: profile.n,
        nu: profile.nu,
        q: profile.q_cutoff,
        kappa: profile.kappa,
        h_plus: profile.h_plus,
        eps0: profile.eps0.to_string(),
        coset_count: profile.coset_count(),
        normalization_choice: profile.normalization.clone(),
    };
    write_csv(config, &rows, &["v", "w", "tail_bound"], &meta)?;
    let worst = rows.iter().map(|r| r.tail_bound).fold(0.0, f64::max);
    match max_tail {
        Some(limit) if worst > limit => {
            Err(Failure::Tolerance(serde_json::json!({ "max_tail_bound": worst, "limit": limit })))
        }
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct BinRow {
    lo: f64,
    hi: f64,
    count: u64,
    density: f64,
}

#[derive(Serialize)]
struct SequenceMeta {
    #[serde(rename = "N")]
    points: usize,
    #[serde(rename = "M")]
    max_m: u64,
    bins: usize,
}

fn bin_rows(h: &Histogram, scale: f64) -> Vec<BinRow> {
    let density = h.density(scale);
    (0..h.bins())
        .map(|i| {
            let (lo, hi) = h.edges(i);
            BinRow { lo, hi, count: h.counts()[i], density: density[i] }
        })
        .collect()
}

fn histogram(config: &RunConfig) -> Result<Histogram, Failure> {
    let b = config.bins.as_ref().expect("histogram runs carry bins");
    Ok(Histogram::with_width(b.lo, b.hi, b.width)?)
}

fn paircorr_empirical(config: &RunConfig) -> Outcome {
    let seq = first_n(config)?;
    let h = pair_correlation(&seq, &histogram(config)?)?;
    let meta = SequenceMeta { points: seq.len(), max_m: seq.max_m, bins: h.bins() };
    write_csv(config, &bin_rows(&h, seq.len() as f64), &["v_lo", "v_hi", "count", "density"], &meta)?;
    Ok(())
}

#[derive(Serialize)]
struct GapMeta {
    #[serde(flatten)]
    sequence: SequenceMeta,
    sum: f64,
    mean: f64,
    underflow: u64,
    overflow: u64,
}

fn gaps(config: &RunConfig) -> Outcome {
    let seq = first_n(config)?;
    let g = gap_distribution(&seq, &histogram(config)?)?;
    let meta = GapMeta {
        sequence: SequenceMeta { points: seq.len(), max_m: seq.max_m, bins: g.histogram.bins() },
        sum: g.sum,
        mean: g.mean,
        underflow: g.histogram.underflow(),
        overflow: g.histogram.overflow(),
    };
    let rows = bin_rows(&g.histogram, seq.len() as f64);
    write_csv(config, &rows, &["s_lo", "s_hi", "count", "density"], &meta)?;
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    k: usize,
    probability: f64,
}

#[derive(Serialize)]
struct CountMeta {
    #[serde(flatten)]
    sequence: SequenceMeta,
    window: CountWindow,
    sampling: Sampling,
    samples: usize,
    moments: [f64; 4],
}

fn counting(config: &RunConfig, window: CountWindow, sampling: SamplingArg, samples: usize) -> Outcome {
    let seq = first_n(config)?;
    let sampling = match sampling {
        SamplingArg::Uniform => Sampling::Uniform,
        SamplingArg::Palm => Sampling::Palm,
    };
    let stats = counting_statistics(&seq, window, sampling, samples, config.seed.unwrap_or(0))?;
    let rows: Vec<CountRow> =
        stats.probabilities.iter().enumerate().map(|(k, &probability)| CountRow { k, probability }).collect();
    let meta = CountMeta {
        sequence: SequenceMeta { points: seq.len(), max_m: seq.max_m, bins: rows.len() },
        window,
        sampling,
        samples,
        moments: stats.moments,
    };
    write_csv(config, &rows, &["k", "probability"], &meta)?;
    Ok(())
}

#[derive(Serialize)]
struct WeylRow {
    h: i64,
    re: f64,
    im: f64,
    count: u64,
    relative: f64,
}

fn weyl(config: &RunConfig, hs: &[i64]) -> Outcome {
    let d = Discriminant::new(config.d)?;
    let max_m = config.max_m.unwrap_or(0);
    let rows = hs
        .iter()
        .map(|&h| {
            let s = weyl_sum(d, max_m, h)?;
            Ok(WeylRow { h, re: s.re, im: s.im, count: s.count, relative: s.norm() / s.count.max(1) as f64 })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_csv(config, &rows, &["h", "re", "im", "count", "relative"], &Counted { count: rows.len() })?;
    Ok(())
}

struct Tolerances {
    max_error: f64,
    mean_error: f64,
    max_tail: f64,
}

#[derive(Serialize)]
struct CompareMeta<'a> {
    report: &'a qcroots::compare::CompareReport,
    checked: bool,
}

fn compare(config: &RunConfig, samples: usize, limits: Option<Tolerances>) -> Outcome {
    let bins = config.bins.as_ref().expect("compare runs carry bins");
    let cc = CompareConfig {
        d: config.d,
        n: config.n,
        nu: config.nu,
        points: config.points.unwrap_or(0),
        lo: bins.lo,
        hi: bins.hi,
        width: bins.width,
        q_cutoff: config.q_cutoff.unwrap_or(1000.0),
        samples,
    };
    if cc.points < 2 {
        return Err(Failure::Validation("--N must be at least 2".into()));
    }
    let report = run_compare(&cc)?;
    let meta = CompareMeta { report: &report, checked: limits.is_some() };
    write_csv(config, &report.rows, &["v_lo", "v_hi", "empirical", "theory", "tail_bound"], &meta)?;
    if let Some(t) = limits {
        if report.max_error > t.max_error || report.mean_error > t.mean_error || report.max_tail_bound > t.max_tail {
            return Err(Failure::Tolerance(serde_json::json!({
                "max_error": report.max_error,
                "mean_error": report.mean_error,
                "max_tail_bound": report.max_tail_bound,
                "limits": { "max_error": t.max_error, "mean_error": t.mean_error, "max_tail": t.max_tail },
            })));
        }
    }
    Ok(())
}
