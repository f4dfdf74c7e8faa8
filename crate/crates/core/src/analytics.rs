//! Corpus-level detection, partitioning and summary reports.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acf_filter::{filter_with_acf, FilterConfig, RejectedHint, ValidatedPeriod};
use crate::data::{CorpusPartition, SurprisalDocument, UnitKind};
use crate::hints::{HintAnalysis, HintConfig, PeriodHint};
use crate::spectrum::{Backend, SpectrumPlan};
use crate::{Error, Result};

pub const DEFAULT_MIN_LENGTH: usize = 32;
pub const HISTOGRAM_BIN_WIDTH: f64 = 10.0;
/// Lower edge of the long-period band highlighted in group comparisons.
pub const LONG_PERIOD_TOKENS: f64 = 50.0;
/// Threshold for the "periods longer than 100 tokens" statistic.
pub const VERY_LONG_PERIOD_TOKENS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub hints: HintConfig,
    pub filter: FilterConfig,
    pub min_length: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            hints: HintConfig::default(),
            filter: FilterConfig::default(),
            min_length: DEFAULT_MIN_LENGTH,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        self.hints.validate()?;
        if self.min_length < crate::spectrum::MIN_PERIODOGRAM_LEN {
            return Err(Error::Config(format!(
                "min_length must be at least {}",
                crate::spectrum::MIN_PERIODOGRAM_LEN
            )));
        }
        if self.filter.delta_theta.is_nan() || self.filter.delta_theta < 0.0 {
            return Err(Error::Config("delta_theta must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    None,
    HintOnly,
    Periodic,
}

/// Settings a result was produced with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub seed: u64,
    pub confidence: f64,
    pub permutations: usize,
    pub backend: Backend,
    pub delta_theta: f64,
    pub min_length: usize,
}

impl From<&DetectorConfig> for ConfigSnapshot {
    fn from(cfg: &DetectorConfig) -> Self {
        Self {
            seed: cfg.hints.seed,
            confidence: cfg.hints.confidence,
            permutations: cfg.hints.permutations,
            backend: cfg.hints.backend,
            delta_theta: cfg.filter.delta_theta,
            min_length: cfg.min_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub doc_id: String,
    pub n: usize,
    pub classification: Classification,
    pub hints: Vec<PeriodHint>,
    pub periods: Vec<ValidatedPeriod>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<RejectedHint>,
    pub config: ConfigSnapshot,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl DetectionResult {
    fn classify(hints: &[PeriodHint], periods: &[ValidatedPeriod]) -> Classification {
        if !periods.is_empty() {
            Classification::Periodic
        } else if !hints.is_empty() {
            Classification::HintOnly
        } else {
            Classification::None
        }
    }

    /// The classification agrees with the hint and period lists.
    pub fn is_consistent(&self) -> bool {
        self.classification == Self::classify(&self.hints, &self.periods)
            && (self.periods.is_empty() || !self.hints.is_empty())
    }

    pub fn largest_hint(&self) -> Option<f64> {
        self.hints.iter().map(|h| h.period).reduce(f64::max)
    }

    pub fn largest_period(&self) -> Option<usize> {
        self.periods.iter().map(|p| p.refined_period).max()
    }
}

/// Runs hint extraction then ACF filtering on one document.
pub fn detect_document(doc: &SurprisalDocument, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    doc.validate()?;
    let x = &doc.values;
    let snapshot = ConfigSnapshot::from(cfg);
    if x.len() < cfg.min_length {
        return Ok(DetectionResult {
            doc_id: doc.doc_id.clone(),
            n: x.len(),
            classification: Classification::None,
            hints: Vec::new(),
            periods: Vec::new(),
            rejected: Vec::new(),
            config: snapshot,
            diagnostics: vec![format!("too_short: {} < min_length {}", x.len(), cfg.min_length)],
        });
    }
    let plan = SpectrumPlan::new(x.len());
    let analysis = HintAnalysis::run_with_plan(&plan, x, &cfg.hints)?;
    let hints = analysis.hints(cfg.hints.confidence);
    let filtered = if hints.is_empty() {
        Default::default()
    } else {
        filter_with_acf(&plan.acf(x)?, &hints, &cfg.filter)?
    };
    let diagnostics = filtered
        .rejected
        .iter()
        .filter_map(|r| match r.rejection {
            crate::acf_filter::Rejection::WindowTooShort { window } => Some(format!(
                "hint k={} dropped: window [{}, {}] too short",
                r.hint.k, window.start, window.end
            )),
            _ => None,
        })
        .collect();
    Ok(DetectionResult {
        doc_id: doc.doc_id.clone(),
        n: x.len(),
        classification: DetectionResult::classify(&hints, &filtered.periods),
        hints,
        periods: filtered.periods,
        rejected: filtered.rejected,
        config: snapshot,
        diagnostics,
    })
}

/// Per-document seed derived from a corpus seed and the document id, so a
/// document's result does not depend on its position in the corpus.
pub fn document_seed(base: u64, doc_id: &str) -> u64 {
    // FNV-1a over the id, then a splitmix64 finaliser.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in doc_id.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = (base ^ h).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocFailure {
    pub doc_id: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusDetection {
    /// Successful results in input order.
    pub results: Vec<DetectionResult>,
    pub failures: Vec<DocFailure>,
}

/// Detects every document in parallel with per-document seeds from
/// [`document_seed`]. One failing document never aborts the run.
pub fn detect_corpus(docs: &[SurprisalDocument], cfg: &DetectorConfig) -> Result<CorpusDetection> {
    cfg.validate()?;
    let outcomes: Vec<_> = docs
        .par_iter()
        .map(|doc| {
            let mut doc_cfg = *cfg;
            doc_cfg.hints.seed = document_seed(cfg.hints.seed, &doc.doc_id);
            detect_document(doc, &doc_cfg).map_err(|e| DocFailure {
                doc_id: doc.doc_id.clone(),
                error: e.to_string(),
            })
        })
        .collect();
    let mut out = CorpusDetection::default();
    for o in outcomes {
        match o {
            Ok(r) => out.results.push(r),
            Err(f) => out.failures.push(f),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
        };
        Some(Self {
            count: m,
            mean: sorted.iter().sum::<f64>() / m as f64,
            median,
        })
    }
}

/// Fixed-width bins `[i·w, (i+1)·w)` starting at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Bins covering `0 ..= max_value`.
    pub fn empty(bin_width: f64, max_value: f64) -> Self {
        let bins = if max_value > 0.0 {
            (max_value / bin_width).floor() as usize + 1
        } else {
            0
        };
        Self {
            bin_width,
            counts: vec![0; bins],
        }
    }

    pub fn of(values: &[f64], bin_width: f64, max_value: f64) -> Self {
        let mut h = Self::empty(bin_width, max_value);
        for &v in values {
            h.add(v);
        }
        h
    }

    pub fn add(&mut self, v: f64) {
        let i = (v / self.bin_width).floor() as usize;
        if i >= self.counts.len() {
            self.counts.resize(i + 1, 0);
        }
        self.counts[i] += 1;
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.counts.len()).map(|i| i as f64 * self.bin_width).collect()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Counts, ratios and length statistics of one detected corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub sigma: usize,
    pub p1: usize,
    pub p2: usize,
    /// `|P1| / |Sigma|`.
    pub p1_ratio: Option<f64>,
    /// `|P2| / |P1|`, undefined when P1 is empty.
    pub p2_of_p1_ratio: Option<f64>,
    /// `|P2| / |Sigma|`.
    pub p2_ratio: Option<f64>,
    /// Pooled over every hint of every P1 document.
    pub hint_lengths: Option<Summary>,
    /// Pooled over every validated period of every P2 document.
    pub period_lengths: Option<Summary>,
    pub period_histogram: Histogram,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unit_mean_lengths: BTreeMap<UnitKind, f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl CorpusReport {
    /// Builds the ratio part of a report from counts alone.
    pub fn from_counts(sigma: usize, p1: usize, p2: usize) -> Result<Self> {
        if p2 > p1 || p1 > sigma {
            return Err(Error::Config(format!(
                "counts must satisfy P2 <= P1 <= Sigma, got {p2} / {p1} / {sigma}"
            )));
        }
        Ok(Self {
            sigma,
            p1,
            p2,
            p1_ratio: ratio(p1, sigma),
            p2_of_p1_ratio: ratio(p2, p1),
            p2_ratio: ratio(p2, sigma),
            hint_lengths: None,
            period_lengths: None,
            period_histogram: Histogram::empty(HISTOGRAM_BIN_WIDTH, 0.0),
            unit_mean_lengths: BTreeMap::new(),
        })
    }

    /// Adds mean unit lengths (pooled over all units of each kind) from the
    /// annotated documents.
    pub fn with_unit_means(mut self, docs: &[SurprisalDocument]) -> Self {
        self.unit_mean_lengths = unit_mean_lengths(docs);
        self
    }
}

fn all_hint_periods<'a>(results: impl IntoIterator<Item = &'a DetectionResult>) -> Vec<f64> {
    results
        .into_iter()
        .flat_map(|r| r.hints.iter().map(|h| h.period))
        .collect()
}

fn all_refined_periods<'a>(results: impl IntoIterator<Item = &'a DetectionResult>) -> Vec<f64> {
    results
        .into_iter()
        .flat_map(|r| r.periods.iter().map(|p| p.refined_period as f64))
        .collect()
}

/// Splits results into Sigma / P1 / P2 and summarises them.
pub fn partition_corpus(results: &[DetectionResult]) -> Result<(CorpusPartition, CorpusReport)> {
    if results.is_empty() {
        return Err(Error::Empty("no detection results to partition".into()));
    }
    let mut sigma = BTreeSet::new();
    let mut p1 = BTreeSet::new();
    let mut p2 = BTreeSet::new();
    for r in results {
        if !r.is_consistent() {
            return Err(Error::Config(format!(
                "result for {:?} has inconsistent classification",
                r.doc_id
            )));
        }
        sigma.insert(r.doc_id.clone());
        if !r.hints.is_empty() {
            p1.insert(r.doc_id.clone());
        }
        if !r.periods.is_empty() {
            p2.insert(r.doc_id.clone());
        }
    }
    if sigma.len() != results.len() {
        return Err(Error::Config("duplicate doc_id in detection results".into()));
    }
    let partition = CorpusPartition::new(sigma, p1, p2)?;
    let hint_periods = all_hint_periods(results);
    let periods = all_refined_periods(results);
    let max_period = periods.iter().copied().fold(0.0, f64::max);
    let report = CorpusReport {
        hint_lengths: Summary::of(&hint_periods),
        period_lengths: Summary::of(&periods),
        period_histogram: Histogram::of(&periods, HISTOGRAM_BIN_WIDTH, max_period),
        ..CorpusReport::from_counts(partition.sigma.len(), partition.p1.len(), partition.p2.len())?
    };
    Ok((partition, report))
}

fn unit_mean_lengths(docs: &[SurprisalDocument]) -> BTreeMap<UnitKind, f64> {
    let mut sums: BTreeMap<UnitKind, (usize, usize)> = BTreeMap::new();
    for doc in docs {
        for kind in doc.units.keys() {
            if let Some(lengths) = doc.unit_lengths(*kind) {
                let e = sums.entry(*kind).or_default();
                e.0 += lengths.iter().sum::<usize>();
                e.1 += lengths.len();
            }
        }
    }
    sums.into_iter()
        .filter(|(_, (_, count))| *count > 0)
        .map(|(k, (total, count))| (k, total as f64 / count as f64))
        .collect()
}

/// Period lengths set against the mean lengths of annotated structural units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitComparison {
    pub period_count: usize,
    pub period_histogram: Histogram,
    pub unit_mean_lengths: BTreeMap<UnitKind, f64>,
    /// Fraction of periods strictly longer than each unit's mean length.
    pub fraction_exceeding_unit_mean: BTreeMap<UnitKind, f64>,
    /// Fraction of periods strictly longer than 100 tokens.
    pub fraction_exceeding_100: f64,
}

pub fn period_unit_comparison(
    results: &[DetectionResult],
    docs: &[SurprisalDocument],
) -> Result<UnitComparison> {
    let unit_mean_lengths = unit_mean_lengths(docs);
    if unit_mean_lengths.is_empty() {
        return Err(Error::Empty(
            "no document carries unit annotations; omit the unit comparison report".into(),
        ));
    }
    let periods = all_refined_periods(results);
    let fraction = |limit: f64| {
        if periods.is_empty() {
            0.0
        } else {
            periods.iter().filter(|&&p| p > limit).count() as f64 / periods.len() as f64
        }
    };
    let max_period = periods.iter().copied().fold(0.0, f64::max);
    Ok(UnitComparison {
        period_count: periods.len(),
        period_histogram: Histogram::of(&periods, HISTOGRAM_BIN_WIDTH, max_period),
        fraction_exceeding_unit_mean: unit_mean_lengths
            .iter()
            .map(|(k, &m)| (*k, fraction(m)))
            .collect(),
        fraction_exceeding_100: fraction(VERY_LONG_PERIOD_TOKENS),
        unit_mean_lengths,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDeltas {
    pub p1_ratio: Option<f64>,
    pub p2_of_p1_ratio: Option<f64>,
    pub p2_ratio: Option<f64>,
}

/// Two detected groups (e.g. human-written and generated text) side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub a: CorpusReport,
    pub b: CorpusReport,
    /// `b - a` for each ratio.
    pub deltas: RatioDeltas,
    /// Both groups binned on common edges.
    pub histogram_a: Histogram,
    pub histogram_b: Histogram,
    /// Periods longer than [`LONG_PERIOD_TOKENS`].
    pub long_periods_a: usize,
    pub long_periods_b: usize,
}

pub fn compare_groups(a: &[DetectionResult], b: &[DetectionResult]) -> Result<GroupComparison> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("both groups must contain results".into()));
    }
    let (_, report_a) = partition_corpus(a)?;
    let (_, report_b) = partition_corpus(b)?;
    let periods_a = all_refined_periods(a);
    let periods_b = all_refined_periods(b);
    let max_period = periods_a.iter().chain(&periods_b).copied().fold(0.0, f64::max);
    let delta = |x: Option<f64>, y: Option<f64>| x.zip(y).map(|(x, y)| y - x);
    let long = |ps: &[f64]| ps.iter().filter(|&&p| p > LONG_PERIOD_TOKENS).count();
    Ok(GroupComparison {
        deltas: RatioDeltas {
            p1_ratio: delta(report_a.p1_ratio, report_b.p1_ratio),
            p2_of_p1_ratio: delta(report_a.p2_of_p1_ratio, report_b.p2_of_p1_ratio),
            p2_ratio: delta(report_a.p2_ratio, report_b.p2_ratio),
        },
        histogram_a: Histogram::of(&periods_a, HISTOGRAM_BIN_WIDTH, max_period),
        histogram_b: Histogram::of(&periods_b, HISTOGRAM_BIN_WIDTH, max_period),
        long_periods_a: long(&periods_a),
        long_periods_b: long(&periods_b),
        a: report_a,
        b: report_b,
    })
}

// CSV output. Column orders are fixed and documented in the README.

pub const REPORT_COLUMNS: [&str; 13] = [
    "corpus",
    "sigma",
    "p1",
    "p2",
    "p1_over_sigma",
    "p2_over_p1",
    "p2_over_sigma",
    "hint_count",
    "hint_mean",
    "hint_median",
    "period_count",
    "period_mean",
    "period_median",
];

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

fn report_row(label: &str, r: &CorpusReport) -> Vec<String> {
    let summary = |s: &Option<Summary>| match s {
        Some(s) => [s.count.to_string(), format!("{:.6}", s.mean), format!("{:.6}", s.median)],
        None => ["0".to_string(), "NA".to_string(), "NA".to_string()],
    };
    let mut row = vec![
        label.to_string(),
        r.sigma.to_string(),
        r.p1.to_string(),
        r.p2.to_string(),
        fmt_opt(r.p1_ratio),
        fmt_opt(r.p2_of_p1_ratio),
        fmt_opt(r.p2_ratio),
    ];
    row.extend(summary(&r.hint_lengths));
    row.extend(summary(&r.period_lengths));
    row
}

/// Writes one row per labelled report.
pub fn write_reports_csv(reports: &[(&str, &CorpusReport)], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS)?;
    for (label, r) in reports {
        w.write_record(report_row(label, r))?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Table of both groups plus a `delta` row (`b - a`) for the ratio columns.
pub fn write_comparison_csv(
    cmp: &GroupComparison,
    labels: (&str, &str),
    out: impl Write,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS)?;
    w.write_record(report_row(labels.0, &cmp.a))?;
    w.write_record(report_row(labels.1, &cmp.b))?;
    let mut delta = vec!["delta".to_string(), String::new(), String::new(), String::new()];
    delta.push(fmt_opt(cmp.deltas.p1_ratio));
    delta.push(fmt_opt(cmp.deltas.p2_of_p1_ratio));
    delta.push(fmt_opt(cmp.deltas.p2_ratio));
    delta.resize(REPORT_COLUMNS.len(), String::new());
    w.write_record(delta)?;
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// `bin_start,bin_end,<label>...` with one count column per histogram; all
/// histograms must share the bin width.
pub fn write_histograms_csv(hists: &[(&str, &Histogram)], out: impl Write) -> Result<()> {
    let bins = hists.iter().map(|(_, h)| h.counts.len()).max().unwrap_or(0);
    let width = hists.first().map_or(HISTOGRAM_BIN_WIDTH, |(_, h)| h.bin_width);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["bin_start".to_string(), "bin_end".to_string()];
    header.extend(hists.iter().map(|(l, _)| l.to_string()));
    w.write_record(&header)?;
    for i in 0..bins {
        let mut row = vec![format!("{}", i as f64 * width), format!("{}", (i + 1) as f64 * width)];
        row.extend(hists.iter().map(|(_, h)| h.counts.get(i).copied().unwrap_or(0).to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
