//! Periodicity detection for per-token surprisal sequences.
//!
//! The pipeline has two stages. [`hints`] thresholds the periodogram of a
//! sequence against the maximum powers of its own random permutations and
//! returns candidate periods. [`acf_filter`] keeps only those candidates that
//! sit on a hill of the circular autocorrelation curve and refines them to
//! integer lags. [`analytics`] runs the pipeline over corpora and summarises
//! the outcome, and [`harmonic`] cross-checks detected periods with harmonic
//! regression.
//!
//! ```
//! use infoperiod::analytics::{detect_document, DetectorConfig};
//! use infoperiod::data::SurprisalDocument;
//!
//! let values: Vec<f64> = (0..400)
//!     .map(|n| 3.0 + (2.0 * std::f64::consts::PI * n as f64 / 40.0).sin())
//!     .collect();
//! let doc = SurprisalDocument::new("demo", values);
//! let result = detect_document(&doc, &DetectorConfig::default()).unwrap();
//! assert!(result.periods.iter().any(|p| (39..=41).contains(&p.refined_period)));
//! ```

pub mod acf_filter;
pub mod analytics;
pub mod cli;
pub mod data;
mod error;
pub mod harmonic;
pub mod hints;
pub mod plot;
pub mod spectrum;
pub mod synth;

pub use error::{Error, Result};
