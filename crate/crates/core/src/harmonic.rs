//! Harmonic regression of token surprisal.
//!
//! Surprisal is regressed on a small baseline plus `K` sine/cosine pairs at
//! harmonics of a scaling length `U_t`:
//!
//! ```text
//! s_t ~ baseline + Σ_k β1k sin(2πk t / U_t) + β2k cos(2πk t / U_t)
//! ```
//!
//! `U_t` is either the length of the structural unit containing the token
//! (`t` then counts from the unit start) or the largest hint / validated
//! period of the document (`t` counts from the document start). The
//! amplitude of harmonic `k` is `A_k = sqrt(β1k² + β2k²)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::analytics::{fmt_opt, DetectionResult};
use crate::data::{CorpusPartition, Portion, SurprisalDocument, UnitKind};
use crate::{Error, Result};

pub const DEFAULT_HARMONICS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scaler {
    Edu,
    Sentence,
    Paragraph,
    Document,
    #[value(name = "aps_hint", alias = "aps-hint")]
    ApsHint,
    #[value(name = "aps_period", alias = "aps-period")]
    ApsPeriod,
}

impl Scaler {
    pub fn as_str(self) -> &'static str {
        match self {
            Scaler::Edu => "edu",
            Scaler::Sentence => "sentence",
            Scaler::Paragraph => "paragraph",
            Scaler::Document => "document",
            Scaler::ApsHint => "aps_hint",
            Scaler::ApsPeriod => "aps_period",
        }
    }

    fn unit_kind(self) -> Option<UnitKind> {
        match self {
            Scaler::Edu => Some(UnitKind::Edu),
            Scaler::Sentence => Some(UnitKind::Sentence),
            Scaler::Paragraph => Some(UnitKind::Paragraph),
            Scaler::Document => Some(UnitKind::Document),
            Scaler::ApsHint | Scaler::ApsPeriod => None,
        }
    }
}

impl fmt::Display for Scaler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselinePredictor {
    Intercept,
    /// `t / U_t`, clipped to `[0, 1]`.
    RelativePosition,
    /// `ln(1 + t)`.
    LogPosition,
}

impl BaselinePredictor {
    pub const STANDARD: [BaselinePredictor; 3] = [
        BaselinePredictor::Intercept,
        BaselinePredictor::RelativePosition,
        BaselinePredictor::LogPosition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselinePredictor::Intercept => "intercept",
            BaselinePredictor::RelativePosition => "relative_position",
            BaselinePredictor::LogPosition => "log1p_position",
        }
    }

    fn value(self, t: f64, u: f64) -> f64 {
        match self {
            BaselinePredictor::Intercept => 1.0,
            BaselinePredictor::RelativePosition => (t / u).clamp(0.0, 1.0),
            BaselinePredictor::LogPosition => t.ln_1p(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HrDesign {
    pub scaler: Scaler,
    /// Number of harmonics `K`; zero gives the baseline-only model.
    pub harmonics: usize,
    pub baseline: Vec<BaselinePredictor>,
}

impl HrDesign {
    pub fn new(scaler: Scaler, harmonics: usize) -> Self {
        Self {
            scaler,
            harmonics,
            baseline: BaselinePredictor::STANDARD.to_vec(),
        }
    }

    /// Baseline predictors only, positions measured within the document.
    pub fn baseline_only() -> Self {
        Self::new(Scaler::Document, 0)
    }

    pub fn is_baseline_only(&self) -> bool {
        self.harmonics == 0
    }

    pub fn label(&self) -> String {
        if self.is_baseline_only() {
            "baseline".to_string()
        } else {
            self.scaler.to_string()
        }
    }
}

/// Tokens `start .. end` of one document share the scaling length `u`;
/// positions inside are `t = i - start`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Scope {
    start: usize,
    end: usize,
    u: f64,
}

fn scopes(doc: &SurprisalDocument, result: Option<&DetectionResult>, scaler: Scaler) -> Result<Vec<Scope>> {
    let unresolvable = |reason: &str| Error::Unresolvable {
        scaler: scaler.to_string(),
        doc_id: doc.doc_id.clone(),
        reason: reason.to_string(),
    };
    let n = doc.values.len();
    if let Some(kind) = scaler.unit_kind() {
        let spans = doc
            .unit_spans(kind)
            .ok_or_else(|| unresolvable("document has no annotation of this unit kind"))?;
        return Ok(spans
            .into_iter()
            .map(|(start, end)| Scope {
                start,
                end,
                u: (end - start) as f64,
            })
            .collect());
    }
    let result = result.ok_or_else(|| unresolvable("no detection result for document"))?;
    let u = match scaler {
        Scaler::ApsHint => result.largest_hint(),
        _ => result.largest_period().map(|p| p as f64),
    }
    .ok_or_else(|| unresolvable("document has no hints/periods"))?;
    Ok(vec![Scope { start: 0, end: n, u }])
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub columns: Vec<String>,
    pub design: HrDesign,
    pub warnings: Vec<String>,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.y.len()
    }
}

/// Stacks every token of `docs` into one regression problem.
pub fn build_design_matrix(
    docs: &[SurprisalDocument],
    results: &[DetectionResult],
    design: &HrDesign,
) -> Result<DesignMatrix> {
    if docs.is_empty() {
        return Err(Error::Empty("no documents for the design matrix".into()));
    }
    let by_id: HashMap<&str, &DetectionResult> = results.iter().map(|r| (r.doc_id.as_str(), r)).collect();
    let k_max = design.harmonics;
    let mut columns: Vec<String> = design.baseline.iter().map(|b| b.name().to_string()).collect();
    for k in 1..=k_max {
        columns.push(format!("sin_{k}"));
        columns.push(format!("cos_{k}"));
    }
    let p = columns.len();
    let rows: usize = docs.iter().map(|d| d.values.len()).sum();
    let mut data = Vec::with_capacity(rows * p);
    let mut y = Vec::with_capacity(rows);
    let mut min_u = f64::INFINITY;
    for doc in docs {
        for scope in scopes(doc, by_id.get(doc.doc_id.as_str()).copied(), design.scaler)? {
            min_u = min_u.min(scope.u);
            for i in scope.start..scope.end {
                let t = (i - scope.start) as f64;
                data.extend(design.baseline.iter().map(|b| b.value(t, scope.u)));
                for k in 1..=k_max {
                    let angle = 2.0 * PI * k as f64 * t / scope.u;
                    let (s, c) = angle.sin_cos();
                    data.push(s);
                    data.push(c);
                }
                y.push(doc.values[i]);
            }
        }
    }
    let mut warnings = Vec::new();
    if k_max > 0 && (2 * k_max) as f64 >= min_u {
        let msg = format!("2K = {} >= shortest scaling length {min_u}; harmonics alias", 2 * k_max);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(DesignMatrix {
        x: DMatrix::from_row_slice(y.len(), p, &data),
        y: DVector::from_vec(y),
        columns,
        design: design.clone(),
        warnings,
    })
}

/// Ordinary least squares estimates with classical standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    /// Two-sided, Student t with `n - p` degrees of freedom.
    pub p_values: Vec<f64>,
    pub sse: f64,
    /// In-sample `SSE / n`.
    pub mse: f64,
    pub n_obs: usize,
    pub dof: usize,
}

fn column_names(p: usize, names: Option<&[String]>) -> Vec<String> {
    (0..p)
        .map(|j| names.and_then(|n| n.get(j).cloned()).unwrap_or_else(|| format!("x{j}")))
        .collect()
}

/// Solves `min ‖y - Xβ‖²` by Householder QR.
pub fn fit_ols(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsFit> {
    fit_ols_named(x, y, None)
}

pub fn fit_ols_named(x: &DMatrix<f64>, y: &DVector<f64>, names: Option<&[String]>) -> Result<OlsFit> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::Config(format!("X has {n} rows but y has {}", y.len())));
    }
    if n < p + 1 {
        return Err(Error::Underdetermined { rows: n, columns: p });
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let dependent: Vec<usize> = (0..p)
        .filter(|&j| {
            let norm = x.column(j).norm();
            norm == 0.0 || r[(j, j)].abs() <= 1e-9 * norm
        })
        .collect();
    if !dependent.is_empty() {
        let names = column_names(p, names);
        return Err(Error::RankDeficient {
            columns: dependent.into_iter().map(|j| names[j].clone()).collect(),
        });
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let beta = r
        .solve_upper_triangular(&qty.rows(0, p).into_owned())
        .ok_or_else(|| Error::RankDeficient { columns: column_names(p, names) })?;
    let residuals = y - x * &beta;
    let sse = residuals.norm_squared();
    let dof = n - p;
    let sigma2 = sse / dof as f64;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| Error::RankDeficient { columns: column_names(p, names) })?;
    let t_dist = StudentsT::new(0.0, 1.0, dof as f64).map_err(|e| Error::Config(e.to_string()))?;
    let mut std_errors = Vec::with_capacity(p);
    let mut t_stats = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    for j in 0..p {
        // diag((XᵀX)⁻¹) = row norms of R⁻¹.
        let se = (sigma2 * r_inv.row(j).norm_squared()).sqrt();
        let b = beta[j];
        let t = if se > 0.0 {
            b / se
        } else if b == 0.0 {
            0.0
        } else {
            b.signum() * f64::INFINITY
        };
        let pv = if t.is_infinite() {
            0.0
        } else {
            (2.0 * t_dist.sf(t.abs())).clamp(0.0, 1.0)
        };
        std_errors.push(se);
        t_stats.push(t);
        p_values.push(pv);
    }
    Ok(OlsFit {
        coefficients: beta.iter().copied().collect(),
        std_errors,
        t_stats,
        p_values,
        sse,
        mse: sse / n as f64,
        n_obs: n,
        dof,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefStat {
    pub coef: f64,
    pub std_err: f64,
    pub t: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub k: usize,
    pub amplitude: f64,
    /// `β1k`, the sine coefficient.
    pub sin: CoefStat,
    /// `β2k`, the cosine coefficient.
    pub cos: CoefStat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HrFit {
    pub design: HrDesign,
    pub columns: Vec<String>,
    pub ols: OlsFit,
    pub harmonics: Vec<HarmonicTerm>,
    pub warnings: Vec<String>,
}

impl HrFit {
    pub fn amplitudes(&self) -> Vec<f64> {
        self.harmonics.iter().map(|h| h.amplitude).collect()
    }

    pub fn mse(&self) -> f64 {
        self.ols.mse
    }

    /// Harmonics ordered by decreasing amplitude.
    pub fn top_harmonics(&self, n: usize) -> Vec<HarmonicTerm> {
        let mut terms = self.harmonics.clone();
        terms.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude).then(a.k.cmp(&b.k)));
        terms.truncate(n);
        terms
    }

    fn stat(&self, j: usize) -> CoefStat {
        CoefStat {
            coef: self.ols.coefficients[j],
            std_err: self.ols.std_errors[j],
            t: self.ols.t_stats[j],
            p_value: self.ols.p_values[j],
        }
    }

    /// Writes the coefficient table: `k,A_k,beta,coef,std_err,t,p_value`,
    /// two rows per harmonic, then the baseline coefficients with `k` empty.
    pub fn write_csv(&self, top: Option<usize>, context: &str, out: &mut impl Write) -> Result<()> {
        writeln!(out, "{}", self.header_comment(context)).map_err(|e| Error::io("<csv>", e))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "A_k", "beta", "coef", "std_err", "t", "p_value"])?;
        let terms = match top {
            Some(n) => self.top_harmonics(n),
            None => self.harmonics.clone(),
        };
        for h in &terms {
            for (which, s) in [(1, h.sin), (2, h.cos)] {
                w.write_record([
                    h.k.to_string(),
                    format!("{:.6}", h.amplitude),
                    format!("beta_{which}_{}", h.k),
                    format!("{:.6}", s.coef),
                    format!("{:.6}", s.std_err),
                    format!("{:.4}", s.t),
                    format!("{:.6}", s.p_value),
                ])?;
            }
        }
        for (j, b) in self.design.baseline.iter().enumerate() {
            let s = self.stat(j);
            w.write_record([
                String::new(),
                String::new(),
                b.name().to_string(),
                format!("{:.6}", s.coef),
                format!("{:.6}", s.std_err),
                format!("{:.4}", s.t),
                format!("{:.6}", s.p_value),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    fn header_comment(&self, context: &str) -> String {
        format!(
            "# baseline: {}; scaler={}; K={}; n_obs={}; mse={:.6}{}{}",
            baseline_names(&self.design.baseline),
            self.design.scaler,
            self.design.harmonics,
            self.ols.n_obs,
            self.ols.mse,
            if context.is_empty() { "" } else { "; " },
            context
        )
    }
}

fn baseline_names(b: &[BaselinePredictor]) -> String {
    b.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
}

pub fn fit_hr(dm: &DesignMatrix) -> Result<HrFit> {
    let ols = fit_ols_named(&dm.x, &dm.y, Some(&dm.columns))?;
    let base = dm.design.baseline.len();
    let harmonics = (1..=dm.design.harmonics)
        .map(|k| {
            let js = base + 2 * (k - 1);
            let stat = |j: usize| CoefStat {
                coef: ols.coefficients[j],
                std_err: ols.std_errors[j],
                t: ols.t_stats[j],
                p_value: ols.p_values[j],
            };
            let (sin, cos) = (stat(js), stat(js + 1));
            HarmonicTerm {
                k,
                amplitude: sin.coef.hypot(cos.coef),
                sin,
                cos,
            }
        })
        .collect();
    Ok(HrFit {
        design: dm.design.clone(),
        columns: dm.columns.clone(),
        ols,
        harmonics,
        warnings: dm.warnings.clone(),
    })
}

/// Documents of `docs` that fall in `portion`.
pub fn portion_docs(
    docs: &[SurprisalDocument],
    partition: &CorpusPartition,
    portion: Portion,
) -> Vec<SurprisalDocument> {
    docs.iter()
        .filter(|d| partition.contains(portion, &d.doc_id))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseCell {
    pub mse: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseTable {
    pub designs: Vec<HrDesign>,
    /// One row per portion, one cell per design.
    pub rows: Vec<(Portion, Vec<MseCell>)>,
}

impl MseTable {
    pub fn get(&self, portion: Portion, design: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|(p, _)| *p == portion)
            .and_then(|(_, cells)| cells.get(design))
            .and_then(|c| c.mse)
    }

    /// `portion,<design label>...`; failed cells are written as `NA`.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# baseline: {}", self.designs.first().map_or_else(String::new, |d| baseline_names(&d.baseline)))
            .map_err(|e| Error::io("<csv>", e))?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["portion".to_string()];
        header.extend(self.designs.iter().map(|d| d.label()));
        w.write_record(&header)?;
        for (portion, cells) in &self.rows {
            let mut row = vec![portion.to_string()];
            row.extend(cells.iter().map(|c| fmt_opt(c.mse)));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// In-sample MSE of every design on each of P2, P1, Sigma and Sigma - P1.
pub fn evaluate_mse_by_partition(
    docs: &[SurprisalDocument],
    results: &[DetectionResult],
    partition: &CorpusPartition,
    designs: &[HrDesign],
) -> MseTable {
    let cells: Vec<(Portion, usize, MseCell)> = Portion::ALL
        .iter()
        .flat_map(|&portion| (0..designs.len()).map(move |d| (portion, d)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(portion, d)| {
            let subset = portion_docs(docs, partition, portion);
            let cell = if subset.is_empty() {
                MseCell {
                    mse: None,
                    note: Some("empty portion".into()),
                }
            } else {
                match build_design_matrix(&subset, results, &designs[d]).and_then(|dm| fit_hr(&dm)) {
                    Ok(fit) => MseCell {
                        mse: Some(fit.mse()),
                        note: None,
                    },
                    Err(e) => MseCell {
                        mse: None,
                        note: Some(e.to_string()),
                    },
                }
            };
            (portion, d, cell)
        })
        .collect();
    let rows = Portion::ALL
        .iter()
        .map(|&portion| {
            let row = cells
                .iter()
                .filter(|(p, _, _)| *p == portion)
                .map(|(_, _, c)| c.clone())
                .collect();
            (portion, row)
        })
        .collect();
    MseTable {
        designs: designs.to_vec(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{ConfigSnapshot, DetectorConfig};

    fn sine_doc(id: &str, n: usize, period: f64, amp: f64) -> SurprisalDocument {
        SurprisalDocument::new(id, (0..n).map(|t| amp * (2.0 * PI * t as f64 / period).sin()).collect())
    }

    fn periodic_result(id: &str, periods: &[usize]) -> DetectionResult {
        let hint = crate::hints::PeriodHint {
            k: 1,
            period: periods[0] as f64 + 0.4,
            frequency: 0.0,
            power: 1.0,
            threshold: 0.0,
            confidence: 0.9,
        };
        DetectionResult {
            doc_id: id.into(),
            n: 0,
            classification: crate::analytics::Classification::Periodic,
            hints: vec![hint],
            periods: periods
                .iter()
                .map(|&p| crate::acf_filter::ValidatedPeriod {
                    source_hint: hint,
                    refined_period: p,
                    slope_left: 1.0,
                    slope_right: -1.0,
                    delta_theta: 1.0,
                    window: crate::acf_filter::Window { start: p - 1, end: p + 1 },
                })
                .collect(),
            rejected: vec![],
            config: ConfigSnapshot::from(&DetectorConfig::default()),
            diagnostics: vec![],
        }
    }

    #[test]
    fn document_scaler_columns() {
        let doc = SurprisalDocument::new("d", vec![1.0, 2.0, 3.0, 4.0]);
        let dm = build_design_matrix(&[doc], &[], &HrDesign::new(Scaler::Document, 1)).unwrap();
        assert_eq!(dm.columns, ["intercept", "relative_position", "log1p_position", "sin_1", "cos_1"]);
        for t in 0..4 {
            let a = 2.0 * PI * t as f64 / 4.0;
            assert!((dm.x[(t, 3)] - a.sin()).abs() < 1e-15);
            assert!((dm.x[(t, 4)] - a.cos()).abs() < 1e-15);
            assert!((dm.x[(t, 1)] - t as f64 / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn aps_period_uses_largest_period() {
        let doc = sine_doc("d", 400, 50.0, 1.0);
        let res = periodic_result("d", &[52, 163]);
        let dm = build_design_matrix(&[doc], &[res], &HrDesign::new(Scaler::ApsPeriod, 1)).unwrap();
        let t = 100usize;
        let a = 2.0 * PI * t as f64 / 163.0;
        assert!((dm.x[(t, 3)] - a.sin()).abs() < 1e-12);
        assert_eq!(dm.x[(200, 1)], 1.0);
    }

    #[test]
    fn aps_hint_uses_largest_hint() {
        let doc = sine_doc("d", 100, 50.0, 1.0);
        let res = periodic_result("d", &[52]);
        let dm = build_design_matrix(&[doc], &[res], &HrDesign::new(Scaler::ApsHint, 1)).unwrap();
        let a = 2.0 * PI * 10.0 / 52.4;
        assert!((dm.x[(10, 3)] - a.sin()).abs() < 1e-12);
    }

    #[test]
    fn unit_scaler_resets_position() {
        let doc = SurprisalDocument::new("s", (0..25).map(|v| v as f64).collect())
            .with_units(UnitKind::Sentence, vec![10, 20]);
        let dm = build_design_matrix(&[doc], &[], &HrDesign::new(Scaler::Sentence, 2)).unwrap();
        // Hand-built rows: (t, U) for every token.
        let expected: Vec<(f64, f64)> = (0..25)
            .map(|i| if i < 20 { ((i % 10) as f64, 10.0) } else { ((i - 20) as f64, 5.0) })
            .collect();
        for (i, &(t, u)) in expected.iter().enumerate() {
            let row = [
                1.0,
                (t / u).min(1.0),
                (1.0 + t).ln(),
                (2.0 * PI * t / u).sin(),
                (2.0 * PI * t / u).cos(),
                (4.0 * PI * t / u).sin(),
                (4.0 * PI * t / u).cos(),
            ];
            for (j, v) in row.iter().enumerate() {
                assert!((dm.x[(i, j)] - v).abs() < 1e-12, "row {i} col {j}");
            }
            assert_eq!(dm.y[i], i as f64);
        }
    }

    #[test]
    fn unresolvable_scalers() {
        let doc = SurprisalDocument::new("d", vec![1.0; 50]);
        assert!(matches!(
            build_design_matrix(&[doc.clone()], &[], &HrDesign::new(Scaler::Edu, 1)),
            Err(Error::Unresolvable { .. })
        ));
        assert!(matches!(
            build_design_matrix(&[doc], &[], &HrDesign::new(Scaler::ApsPeriod, 1)),
            Err(Error::Unresolvable { .. })
        ));
    }

    #[test]
    fn aliasing_warning() {
        let doc = SurprisalDocument::new("d", vec![1.0; 40]).with_units(UnitKind::Sentence, vec![8, 16, 24, 32]);
        let dm = build_design_matrix(&[doc], &[], &HrDesign::new(Scaler::Sentence, 4)).unwrap();
        assert_eq!(dm.warnings.len(), 1);
    }

    #[test]
    fn noiseless_sine_recovered() {
        let doc = sine_doc("d", 1000, 50.0, 0.5);
        let res = periodic_result("d", &[50]);
        let dm = build_design_matrix(&[doc], &[res], &HrDesign::new(Scaler::ApsPeriod, 1)).unwrap();
        let fit = fit_hr(&dm).unwrap();
        assert!((fit.harmonics[0].amplitude - 0.5).abs() < 1e-8);
        assert!(fit.harmonics[0].sin.p_value < 1e-10);
        assert!(fit.mse() < 1e-20);
    }

    #[test]
    fn constant_response_has_no_harmonics() {
        let doc = SurprisalDocument::new("d", vec![3.0; 300]);
        let dm = build_design_matrix(&[doc], &[], &HrDesign::new(Scaler::Document, 3)).unwrap();
        let fit = fit_hr(&dm).unwrap();
        for h in &fit.harmonics {
            assert!(h.sin.coef.abs() < 1e-10 && h.cos.coef.abs() < 1e-10);
            assert!(h.amplitude < 1e-10);
        }
        assert!((fit.ols.coefficients[0] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn rank_deficiency_names_column() {
        let x = DMatrix::from_fn(10, 3, |i, j| if j == 2 { 2.0 * i as f64 } else if j == 1 { i as f64 } else { 1.0 });
        let y = DVector::from_fn(10, |i, _| i as f64);
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        match fit_ols_named(&x, &y, Some(&names)) {
            Err(Error::RankDeficient { columns }) => assert_eq!(columns, vec!["c"]),
            other => panic!("unexpected {other:?}"),
        }
        let small = DMatrix::from_element(2, 2, 1.0);
        assert!(matches!(fit_ols(&small, &DVector::zeros(2)), Err(Error::Underdetermined { .. })));
    }

    #[test]
    fn phase_shift_keeps_amplitude() {
        let mut amps = Vec::new();
        for phase in [0.0, 0.7, 2.1, 4.0] {
            let doc = SurprisalDocument::new(
                "d",
                (0..600).map(|t| 1.0 + 0.8 * (2.0 * PI * t as f64 / 60.0 + phase).sin()).collect(),
            );
            let res = periodic_result("d", &[60]);
            let fit = fit_hr(&build_design_matrix(&[doc], &[res], &HrDesign::new(Scaler::ApsPeriod, 2)).unwrap()).unwrap();
            amps.push(fit.harmonics[0].amplitude);
        }
        for a in &amps {
            assert!((a - amps[0]).abs() < 1e-8);
        }
    }

    #[test]
    fn single_constant_doc_portion_has_zero_baseline_mse() {
        let docs = vec![SurprisalDocument::new("c", vec![2.0; 64])];
        let res = vec![periodic_result("c", &[16])];
        let part = CorpusPartition::new(
            ["c".to_string()].into(),
            ["c".to_string()].into(),
            ["c".to_string()].into(),
        )
        .unwrap();
        let table = evaluate_mse_by_partition(&docs, &res, &part, &[HrDesign::baseline_only()]);
        assert!(table.get(Portion::P2, 0).unwrap() < 1e-20);
        assert_eq!(table.get(Portion::SigmaMinusP1, 0), None);
    }

    #[test]
    fn coefficient_csv_layout() {
        let doc = sine_doc("d", 300, 30.0, 1.0);
        let noise: Vec<f64> = (0..300).map(|i| ((i * 7919 % 97) as f64 / 97.0 - 0.5) * 0.1).collect();
        let doc = SurprisalDocument::new("d", doc.values.iter().zip(&noise).map(|(a, b)| a + b).collect());
        let res = periodic_result("d", &[30]);
        let fit = fit_hr(&build_design_matrix(&[doc], &[res], &HrDesign::new(Scaler::ApsPeriod, 3)).unwrap()).unwrap();
        let mut buf = Vec::new();
        fit.write_csv(Some(2), "portion=P2", &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# baseline: intercept, relative_position, log1p_position"));
        assert_eq!(lines[1], "k,A_k,beta,coef,std_err,t,p_value");
        assert!(lines[2].starts_with("1,"));
        assert!(lines[3].contains("beta_2_1"));
        assert_eq!(lines.len(), 2 + 4 + 3);
    }
}
