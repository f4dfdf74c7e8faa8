//! `infoperiod` command-line interface.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 when some documents failed
//! (the rest are still written; failures go to stderr and `errors.txt`).

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{
    compare_groups, detect_corpus, document_seed, partition_corpus, period_unit_comparison,
    write_comparison_csv, write_histograms_csv, write_reports_csv, CorpusDetection, DetectionResult,
    DetectorConfig, DocFailure,
};
use crate::acf_filter::FilterConfig;
use crate::data::{parse_corpus, read_corpus, write_corpus, write_jsonl, CorpusPartition, Portion, SurprisalDocument};
use crate::harmonic::{build_design_matrix, evaluate_mse_by_partition, fit_hr, portion_docs, HrDesign, Scaler};
use crate::hints::{HintAnalysis, HintConfig};
use crate::plot::{Chart, RefLine, Series, SeriesKind};
use crate::spectrum::{Backend, SpectrumPlan};
use crate::synth::{generate, SynthSpec};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "infoperiod", version, about = "Detect periodicity in per-token surprisal sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect hints and validated periods for every document of a corpus.
    Detect(DetectArgs),
    /// Generate a synthetic corpus with planted periods.
    Synth(SynthArgs),
    /// Fit harmonic-regression models and write coefficient / MSE tables.
    Hr(HrArgs),
    /// Compare detection outcomes of two corpora.
    Compare(CompareArgs),
    /// Draw a periodogram, ACF or period histogram as SVG (+ CSV).
    Plot(PlotArgs),
}

fn parse_confidence(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("confidence must lie in (0, 1), got {v}"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct DetectionFlags {
    /// Confidence level of the permutation threshold.
    #[arg(long, default_value_t = 0.90, value_parser = parse_confidence)]
    pub confidence: f64,
    /// Number of random permutations.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub permutations: u64,
    /// Base seed; per-document seeds are derived from it and the doc id.
    #[arg(long, env = "APS_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Backend::LombScargle)]
    pub backend: Backend,
    /// Documents shorter than this are classified `none`.
    #[arg(long, default_value_t = crate::analytics::DEFAULT_MIN_LENGTH as u64, value_parser = clap::value_parser!(u64).range(4..))]
    pub min_length: u64,
    /// Minimum normalised slope-angle difference of an ACF hill.
    #[arg(long, default_value_t = 0.01)]
    pub delta_theta: f64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl DetectionFlags {
    pub fn config(&self) -> DetectorConfig {
        DetectorConfig {
            hints: HintConfig {
                permutations: self.permutations as usize,
                confidence: self.confidence,
                seed: self.seed,
                backend: self.backend,
            },
            filter: FilterConfig {
                delta_theta: self.delta_theta,
            },
            min_length: self.min_length as usize,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Corpus JSONL file.
    pub input: PathBuf,
    #[command(flatten)]
    pub flags: DetectionFlags,
    /// Directory for results.jsonl, report.{json,csv}, histogram.csv.
    #[arg(long, default_value = "infoperiod-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 100)]
    pub docs: usize,
    #[arg(long, default_value_t = 500)]
    pub length: usize,
    /// Planted period in tokens (repeatable).
    #[arg(long = "period")]
    pub periods: Vec<f64>,
    /// Amplitude per period, or one shared amplitude (repeatable).
    #[arg(long = "amp", default_values_t = vec![1.0])]
    pub amplitudes: Vec<f64>,
    #[arg(long, default_value_t = 0.3)]
    pub sigma: f64,
    /// Fraction of documents that carry the planted signal.
    #[arg(long, default_value_t = 0.3)]
    pub fraction: f64,
    #[arg(long, env = "APS_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Mean surprisal level.
    #[arg(long, default_value_t = 5.0)]
    pub mean: f64,
    /// Annotate sentence boundaries every N tokens.
    #[arg(long)]
    pub unit_length: Option<usize>,
    /// Inflate the noise of aperiodic documents to the periodic ones' variance.
    #[arg(long)]
    pub match_variance: bool,
    /// Fixed phase (radians) for the planted components; random when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub phase: Option<f64>,
    /// Output corpus; the manifest goes to `<stem>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PortionArg {
    #[value(name = "P2", alias = "p2")]
    P2,
    #[value(name = "P1", alias = "p1")]
    P1,
    #[value(name = "sigma", alias = "Sigma")]
    Sigma,
    #[value(name = "sigma-p1", alias = "Sigma-P1")]
    SigmaMinusP1,
}

impl From<PortionArg> for Portion {
    fn from(p: PortionArg) -> Self {
        match p {
            PortionArg::P2 => Portion::P2,
            PortionArg::P1 => Portion::P1,
            PortionArg::Sigma => Portion::Sigma,
            PortionArg::SigmaMinusP1 => Portion::SigmaMinusP1,
        }
    }
}

#[derive(Debug, Args)]
pub struct HrArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Detection results JSONL (required for aps scalers and portions other than sigma).
    #[arg(long)]
    pub results: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Scaler::ApsPeriod)]
    pub scaler: Scaler,
    /// Number of harmonics.
    #[arg(long = "K", default_value_t = crate::harmonic::DEFAULT_HARMONICS, value_parser = parse_positive)]
    pub harmonics: usize,
    #[arg(long, value_enum, default_value_t = PortionArg::Sigma)]
    pub portion: PortionArg,
    /// Keep only the n harmonics with the largest amplitude.
    #[arg(long)]
    pub top: Option<usize>,
    /// Coefficient table (CSV).
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the MSE-by-portion table here.
    #[arg(long)]
    pub mse_out: Option<PathBuf>,
    /// Scalers for the MSE table (a baseline-only column is always added).
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Scaler::Edu, Scaler::Sentence, Scaler::Document])]
    pub mse_scalers: Vec<Scaler>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First group (corpus JSONL, or results JSONL with --from-results).
    pub a: PathBuf,
    /// Second group.
    pub b: PathBuf,
    /// Inputs are detection results rather than corpora.
    #[arg(long)]
    pub from_results: bool,
    /// Labels of the two groups.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = vec!["human".to_string(), "generated".to_string()])]
    pub labels: Vec<String>,
    #[command(flatten)]
    pub flags: DetectionFlags,
    #[arg(long, default_value = "infoperiod-compare")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Periodogram,
    Acf,
    Histogram,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub results: Option<PathBuf>,
    /// Document id (periodogram and acf plots).
    #[arg(long)]
    pub doc: Option<String>,
    /// Confidence levels drawn as threshold lines on periodograms.
    #[arg(long, value_parser = parse_confidence, value_delimiter = ',', default_values_t = vec![0.5, 0.9, 0.99])]
    pub levels: Vec<f64>,
    #[command(flatten)]
    pub flags: DetectionFlags,
    /// SVG output; the data goes to the same path with a .csv extension.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Detect(a) => with_jobs(a.flags.jobs, || cmd_detect(&a)),
        Command::Synth(a) => cmd_synth(&a),
        Command::Hr(a) => with_jobs(a.jobs, || cmd_hr(&a)),
        Command::Compare(a) => with_jobs(a.flags.jobs, || cmd_compare(&a)),
        Command::Plot(a) => with_jobs(a.flags.jobs, || cmd_plot(&a)),
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(f),
        None => f(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w)?;
    finish(w, path)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))
    })
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<DetectionResult>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| Error::Parse { line: i + 1, source })?);
    }
    Ok(out)
}

fn report_failures(failures: &[DocFailure], dir: &Path) -> Result<i32> {
    if failures.is_empty() {
        return Ok(EXIT_OK);
    }
    let path = dir.join("errors.txt");
    write_with(&path, |w| {
        for f in failures {
            eprintln!("document {:?}: {}", f.doc_id, f.error);
            writeln!(w, "{}\t{}", f.doc_id, f.error).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    })?;
    Ok(EXIT_PARTIAL)
}

fn cmd_detect(args: &DetectArgs) -> Result<i32> {
    let cfg = args.flags.config();
    cfg.validate()?;
    let docs = parse_corpus(&args.input)?;
    let CorpusDetection { results, failures } = detect_corpus(&docs, &cfg)?;
    let docs: Vec<SurprisalDocument> = docs.into_iter().filter(|d| d.validate().is_ok()).collect();
    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_with(&dir.join("results.jsonl"), |w| write_jsonl(&results, w))?;
    if !results.is_empty() {
        let (_, report) = partition_corpus(&results)?;
        let report = report.with_unit_means(&docs);
        write_json(&dir.join("report.json"), &report)?;
        let label = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("corpus");
        write_with(&dir.join("report.csv"), |w| write_reports_csv(&[(label, &report)], w))?;
        write_with(&dir.join("histogram.csv"), |w| {
            write_histograms_csv(&[("count", &report.period_histogram)], w)
        })?;
        if docs.iter().any(|d| !d.units.is_empty()) {
            write_json(&dir.join("units.json"), &period_unit_comparison(&results, &docs)?)?;
        }
    }
    report_failures(&failures, dir)
}

pub fn manifest_path(corpus: &Path) -> PathBuf {
    let stem = corpus.file_stem().and_then(|s| s.to_str()).unwrap_or("corpus");
    corpus.with_file_name(format!("{stem}.manifest.json"))
}

fn cmd_synth(args: &SynthArgs) -> Result<i32> {
    let spec = SynthSpec {
        n_docs: args.docs,
        length: args.length,
        periods: args.periods.clone(),
        amplitudes: args.amplitudes.clone(),
        noise_sigma: args.sigma,
        seed: args.seed,
        fraction_periodic: args.fraction,
        mean: args.mean,
        unit_length: args.unit_length,
        match_variance: args.match_variance,
        phase: args.phase,
    };
    let (docs, manifest) = generate(&spec)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    write_corpus(&docs, &args.out)?;
    manifest.write(manifest_path(&args.out))?;
    Ok(EXIT_OK)
}

fn partition_for(docs: &[SurprisalDocument], results: &[DetectionResult]) -> Result<CorpusPartition> {
    if results.is_empty() {
        let all: std::collections::BTreeSet<String> = docs.iter().map(|d| d.doc_id.clone()).collect();
        return CorpusPartition::new(all, Default::default(), Default::default());
    }
    Ok(partition_corpus(results)?.0)
}

fn cmd_hr(args: &HrArgs) -> Result<i32> {
    let docs = read_corpus(&args.corpus)?;
    let needs_results = matches!(args.scaler, Scaler::ApsHint | Scaler::ApsPeriod)
        || args.portion != PortionArg::Sigma
        || args.mse_out.is_some();
    let results = match &args.results {
        Some(p) => read_results(p)?,
        None if needs_results => {
            return Err(Error::Config(
                "missing detection results (--results) for aps scalers / partition portions".into(),
            ))
        }
        None => Vec::new(),
    };
    let partition = partition_for(&docs, &results)?;
    let portion = Portion::from(args.portion);
    let subset = portion_docs(&docs, &partition, portion);
    let design = HrDesign::new(args.scaler, args.harmonics);
    let fit = fit_hr(&build_design_matrix(&subset, &results, &design)?)?;
    write_with(&args.out, |w| fit.write_csv(args.top, &format!("portion={portion}"), w))?;
    if let Some(mse_path) = &args.mse_out {
        let mut designs = vec![HrDesign::baseline_only()];
        designs.extend(args.mse_scalers.iter().map(|&s| HrDesign::new(s, args.harmonics)));
        let table = evaluate_mse_by_partition(&docs, &results, &partition, &designs);
        write_with(mse_path, |w| table.write_csv(w))?;
    }
    Ok(EXIT_OK)
}

fn detect_or_load(path: &Path, from_results: bool, cfg: &DetectorConfig) -> Result<CorpusDetection> {
    if from_results {
        Ok(CorpusDetection {
            results: read_results(path)?,
            failures: Vec::new(),
        })
    } else {
        detect_corpus(&parse_corpus(path)?, cfg)
    }
}

fn cmd_compare(args: &CompareArgs) -> Result<i32> {
    let cfg = args.flags.config();
    cfg.validate()?;
    let a = detect_or_load(&args.a, args.from_results, &cfg)?;
    let b = detect_or_load(&args.b, args.from_results, &cfg)?;
    let cmp = compare_groups(&a.results, &b.results)?;
    let (la, lb) = (args.labels[0].as_str(), args.labels[1].as_str());
    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_with(&dir.join("comparison.csv"), |w| write_comparison_csv(&cmp, (la, lb), w))?;
    write_json(&dir.join("comparison.json"), &cmp)?;
    write_with(&dir.join("histogram.csv"), |w| {
        write_histograms_csv(&[(la, &cmp.histogram_a), (lb, &cmp.histogram_b)], w)
    })?;
    let bars = |label: &str, h: &crate::analytics::Histogram| {
        let pts = h.counts.iter().enumerate().map(|(i, &c)| (i as f64 * h.bin_width, c as f64)).collect();
        Series::new(label, SeriesKind::Bars { width: h.bin_width }, pts)
    };
    let chart = Chart {
        title: format!("Detected periods: {la} vs {lb}"),
        x_label: "period (tokens)".into(),
        y_label: "count".into(),
        series: vec![bars(la, &cmp.histogram_a), bars(lb, &cmp.histogram_b)],
        vlines: vec![RefLine {
            value: crate::analytics::LONG_PERIOD_TOKENS,
            label: "long-period band".into(),
        }],
        ..Default::default()
    };
    write_chart(&chart, &dir.join("histogram.svg"))?;
    let mut failures = a.failures;
    failures.extend(b.failures);
    report_failures(&failures, dir)
}

/// Writes `chart` as SVG and its data as `series,x,y` CSV next to it.
pub fn write_chart(chart: &Chart, svg_path: &Path) -> Result<()> {
    write_with(svg_path, |w| w.write_all(chart.to_svg().as_bytes()).map_err(|e| Error::io(svg_path, e)))?;
    write_with(&svg_path.with_extension("csv"), |w| write_chart_csv(chart, w))
}

pub fn write_chart_csv(chart: &Chart, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["series", "x", "y"])?;
    for s in &chart.series {
        for &(x, y) in &s.points {
            w.write_record([s.name.clone(), format!("{x}"), format!("{y}")])?;
        }
    }
    for l in &chart.hlines {
        w.write_record([l.label.clone(), String::new(), format!("{}", l.value)])?;
    }
    for l in &chart.vlines {
        w.write_record([l.label.clone(), format!("{}", l.value), String::new()])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

fn find_doc<'a>(docs: &'a [SurprisalDocument], id: Option<&str>) -> Result<&'a SurprisalDocument> {
    let id = id.ok_or_else(|| Error::Config("--doc is required for this plot".into()))?;
    docs.iter()
        .find(|d| d.doc_id == id)
        .ok_or_else(|| Error::Config(format!("document {id:?} not found")))
}

fn cmd_plot(args: &PlotArgs) -> Result<i32> {
    let mut cfg = args.flags.config();
    cfg.validate()?;
    let chart = match args.kind {
        PlotKind::Periodogram | PlotKind::Acf => {
            let corpus = args
                .corpus
                .as_ref()
                .ok_or_else(|| Error::Config("--corpus is required for this plot".into()))?;
            let docs = read_corpus(corpus)?;
            let doc = find_doc(&docs, args.doc.as_deref())?;
            // Same per-document seed as `detect`.
            cfg.hints.seed = document_seed(cfg.hints.seed, &doc.doc_id);
            if args.kind == PlotKind::Periodogram {
                periodogram_chart(doc, &cfg, &args.levels)?
            } else {
                acf_chart(doc, &cfg)?
            }
        }
        PlotKind::Histogram => {
            let path = args
                .results
                .as_ref()
                .ok_or_else(|| Error::Config("--results is required for the histogram plot".into()))?;
            let results = read_results(path)?;
            let (_, mut report) = partition_corpus(&results)?;
            if let Some(c) = &args.corpus {
                report = report.with_unit_means(&read_corpus(c)?);
            }
            let h = &report.period_histogram;
            Chart {
                title: "Distribution of detected periods".into(),
                x_label: "period (tokens)".into(),
                y_label: "count".into(),
                series: vec![Series::new(
                    "periods",
                    SeriesKind::Bars { width: h.bin_width },
                    h.counts.iter().enumerate().map(|(i, &c)| (i as f64 * h.bin_width, c as f64)).collect(),
                )],
                vlines: report
                    .unit_mean_lengths
                    .iter()
                    .map(|(k, &m)| RefLine {
                        value: m,
                        label: format!("mean {k}"),
                    })
                    .collect(),
                ..Default::default()
            }
        }
    };
    write_chart(&chart, &args.out)?;
    Ok(EXIT_OK)
}

fn periodogram_chart(doc: &SurprisalDocument, cfg: &DetectorConfig, levels: &[f64]) -> Result<Chart> {
    let analysis = HintAnalysis::run(&doc.values, &cfg.hints)?;
    let p = &analysis.periodogram;
    let hints = analysis.hints(cfg.hints.confidence);
    Ok(Chart {
        title: format!("Periodogram of {} ({})", doc.doc_id, cfg.hints.backend),
        x_label: "frequency (cycles per token)".into(),
        y_label: "power".into(),
        series: vec![
            Series::new("power", SeriesKind::Line, p.frequencies().zip(p.powers.iter().copied()).collect()),
            Series::new(
                format!("hints @ CL {}", cfg.hints.confidence),
                SeriesKind::Markers,
                hints.iter().map(|h| (h.frequency, h.power)).collect(),
            ),
        ],
        hlines: levels
            .iter()
            .map(|&cl| RefLine {
                value: analysis.null.threshold(cl),
                label: format!("threshold CL {cl}"),
            })
            .collect(),
        ..Default::default()
    })
}

fn acf_chart(doc: &SurprisalDocument, cfg: &DetectorConfig) -> Result<Chart> {
    let plan = SpectrumPlan::new(doc.values.len());
    let acf = plan.acf(&doc.values)?;
    let hints = HintAnalysis::run_with_plan(&plan, &doc.values, &cfg.hints)?.hints(cfg.hints.confidence);
    let filtered = crate::acf_filter::filter_with_acf(&acf, &hints, &cfg.filter)?;
    let at = |lag: usize| acf.values.get(lag).copied().unwrap_or(0.0);
    let half = acf.values.len() / 2;
    Ok(Chart {
        title: format!("Circular ACF of {}", doc.doc_id),
        x_label: "lag (tokens)".into(),
        y_label: "ACF".into(),
        series: vec![
            Series::new(
                "acf",
                SeriesKind::Line,
                acf.values[..=half].iter().enumerate().map(|(t, &v)| (t as f64, v)).collect(),
            ),
            Series::new(
                "hints",
                SeriesKind::Markers,
                hints
                    .iter()
                    .map(|h| {
                        let lag = h.period.round() as usize;
                        (lag as f64, at(lag))
                    })
                    .collect(),
            ),
            Series::new(
                "periods",
                SeriesKind::Markers,
                filtered
                    .periods
                    .iter()
                    .map(|p| (p.refined_period as f64, at(p.refined_period)))
                    .collect(),
            ),
        ],
        ..Default::default()
    })
}
