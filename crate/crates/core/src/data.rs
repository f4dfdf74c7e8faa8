//! Documents, corpora and the JSONL interchange format.
//!
//! Each line of a corpus file is one JSON object:
//!
//! ```text
//! {"doc_id":"wsj_0976","values":[4.1,0.3,...],"tokens":["The",...],"units":{"sentence":[12,30]}}
//! ```
//!
//! `tokens`, `units` and `units_of_measure` are optional. Unit boundaries are
//! exclusive end indices: a unit ending at boundary `b` covers tokens up to
//! `b - 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Edu,
    Sentence,
    Paragraph,
    Document,
}

impl UnitKind {
    pub const ALL: [UnitKind; 4] = [
        UnitKind::Edu,
        UnitKind::Sentence,
        UnitKind::Paragraph,
        UnitKind::Document,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Edu => "edu",
            UnitKind::Sentence => "sentence",
            UnitKind::Paragraph => "paragraph",
            UnitKind::Document => "document",
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UnitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        UnitKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown unit kind {s:?}")))
    }
}

fn default_units_of_measure() -> String {
    "nats".to_string()
}

fn is_default_units_of_measure(s: &String) -> bool {
    s == "nats"
}

/// Per-token surprisal values of one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurprisalDocument {
    pub doc_id: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub units: BTreeMap<UnitKind, Vec<usize>>,
    /// Recorded as given; values are never converted between nats and bits.
    #[serde(
        default = "default_units_of_measure",
        skip_serializing_if = "is_default_units_of_measure"
    )]
    pub units_of_measure: String,
}

impl SurprisalDocument {
    pub fn new(doc_id: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            doc_id: doc_id.into(),
            values,
            tokens: None,
            units: BTreeMap::new(),
            units_of_measure: default_units_of_measure(),
        }
    }

    pub fn with_units(mut self, kind: UnitKind, boundaries: Vec<usize>) -> Self {
        self.units.insert(kind, boundaries);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn invalid(&self, field: &'static str, reason: impl Into<String>) -> Error {
        Error::InvalidDocument {
            doc_id: self.doc_id.clone(),
            field,
            reason: reason.into(),
        }
    }

    /// Checks the document invariants. Negative surprisal is only logged.
    pub fn validate(&self) -> Result<()> {
        let n = self.values.len();
        if n == 0 {
            return Err(self.invalid("values", "document has no values"));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(self.invalid("values", format!("non-finite value at index {i}")));
        }
        if self.values.iter().any(|&v| v < 0.0) {
            log::warn!(
                "document {:?}: negative surprisal values present",
                self.doc_id
            );
        }
        if let Some(tokens) = &self.tokens {
            if tokens.len() != n {
                return Err(self.invalid(
                    "tokens",
                    format!("{} tokens for {} values", tokens.len(), n),
                ));
            }
        }
        for (kind, bounds) in &self.units {
            let mut prev = 0usize;
            for &b in bounds {
                if b == 0 || b > n {
                    return Err(self.invalid(
                        "units",
                        format!("{kind} boundary {b} outside [1, {n}]"),
                    ));
                }
                if b <= prev {
                    return Err(self.invalid(
                        "units",
                        format!("{kind} boundaries not strictly increasing at {b}"),
                    ));
                }
                prev = b;
            }
        }
        Ok(())
    }

    /// Half-open token spans of the units of `kind`. Tokens after the last
    /// boundary form a trailing unit ending at N. `None` if the document has
    /// no annotation of that kind.
    pub fn unit_spans(&self, kind: UnitKind) -> Option<Vec<(usize, usize)>> {
        if kind == UnitKind::Document && !self.units.contains_key(&kind) {
            return Some(vec![(0, self.values.len())]);
        }
        let bounds = self.units.get(&kind)?;
        let mut spans = Vec::with_capacity(bounds.len() + 1);
        let mut start = 0;
        for &end in bounds {
            spans.push((start, end));
            start = end;
        }
        if start < self.values.len() {
            spans.push((start, self.values.len()));
        }
        Some(spans)
    }

    /// Token lengths of the annotated units of `kind`.
    pub fn unit_lengths(&self, kind: UnitKind) -> Option<Vec<usize>> {
        self.unit_spans(kind)
            .map(|spans| spans.into_iter().map(|(s, e)| e - s).collect())
    }
}

/// Reads a JSONL corpus, validating every document.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<SurprisalDocument>> {
    let docs = parse_corpus(path)?;
    docs.iter().try_for_each(SurprisalDocument::validate)?;
    Ok(docs)
}

pub fn read_corpus_from(reader: impl BufRead) -> Result<Vec<SurprisalDocument>> {
    let docs = parse_corpus_from(reader)?;
    docs.iter().try_for_each(SurprisalDocument::validate)?;
    Ok(docs)
}

/// Reads a JSONL corpus without validating the documents, so callers can
/// reject invalid ones individually. Malformed JSON is still an error.
pub fn parse_corpus(path: impl AsRef<Path>) -> Result<Vec<SurprisalDocument>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus_from(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_corpus_from(reader: impl BufRead) -> Result<Vec<SurprisalDocument>> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: SurprisalDocument = serde_json::from_str(&line).map_err(|source| Error::Parse {
            line: i + 1,
            source,
        })?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_corpus(docs: &[SurprisalDocument], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_jsonl(docs, &mut out).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes any serialisable records one per line.
pub fn write_jsonl<T: Serialize>(records: &[T], out: &mut impl Write) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("<writer>", e))?;
    }
    Ok(())
}

/// Documents split into the full corpus, those with at least one hint, and
/// those with at least one validated period.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusPartition {
    pub sigma: BTreeSet<String>,
    pub p1: BTreeSet<String>,
    pub p2: BTreeSet<String>,
}

/// The four corpus portions the harmonic-regression evaluation fits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Portion {
    P2,
    P1,
    Sigma,
    SigmaMinusP1,
}

impl Portion {
    pub const ALL: [Portion; 4] = [
        Portion::P2,
        Portion::P1,
        Portion::Sigma,
        Portion::SigmaMinusP1,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Portion::P2 => "P2",
            Portion::P1 => "P1",
            Portion::Sigma => "Sigma",
            Portion::SigmaMinusP1 => "Sigma-P1",
        }
    }
}

impl fmt::Display for Portion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Portion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p2" => Ok(Portion::P2),
            "p1" => Ok(Portion::P1),
            "sigma" | "all" => Ok(Portion::Sigma),
            "sigma-p1" | "sigma_minus_p1" | "rest" => Ok(Portion::SigmaMinusP1),
            _ => Err(Error::Config(format!("unknown portion {s:?}"))),
        }
    }
}

impl CorpusPartition {
    pub fn new(sigma: BTreeSet<String>, p1: BTreeSet<String>, p2: BTreeSet<String>) -> Result<Self> {
        let part = Self { sigma, p1, p2 };
        if !part.is_nested() {
            return Err(Error::Config(
                "partition violates P2 ⊆ P1 ⊆ Sigma".to_string(),
            ));
        }
        Ok(part)
    }

    pub fn is_nested(&self) -> bool {
        self.p2.is_subset(&self.p1) && self.p1.is_subset(&self.sigma)
    }

    pub fn contains(&self, portion: Portion, doc_id: &str) -> bool {
        match portion {
            Portion::P2 => self.p2.contains(doc_id),
            Portion::P1 => self.p1.contains(doc_id),
            Portion::Sigma => self.sigma.contains(doc_id),
            Portion::SigmaMinusP1 => self.sigma.contains(doc_id) && !self.p1.contains(doc_id),
        }
    }
}
