//! Link-level simulator and analytical evaluator for surface-aided double
//! spatial scattering modulation over sparse mmWave MIMO channels.
//!
//! The crate has two halves that cross-validate each other:
//!
//! * [`montecarlo`] simulates transmission end to end — uniform bits mapped
//!   onto a (scatterer, scatterer, symbol) triple, cascaded scatterer gains,
//!   per-branch receive outputs after surface phase alignment, joint
//!   detection, bit-error accounting — with deterministic per-trial random
//!   substreams.
//! * [`analysis`] evaluates the channel-averaged pairwise error
//!   probabilities in four interchangeable forms per beam-decision case and
//!   combines them into a bit-weighted union bound on the average bit error
//!   probability, plus diversity-order fitting and the minimum-element
//!   crossover against the single-hop baseline.
//!
//! [`config`] owns scenario parameters, [`modem`] the Gray-labelled bit
//! mapping, [`channel`] the gain model and array responses, [`detectors`]
//! the two decision rules with instrumented operation counts.

pub mod analysis;
pub mod channel;
pub mod config;
pub mod detectors;
pub mod modem;
pub mod montecarlo;

pub use analysis::{AnalysisError, BeamCase, UpepMethod};
pub use config::{ConfigError, ModulationKind, SystemConfig};
pub use detectors::DetectorKind;
pub use modem::{ModemError, TxTriple};
pub use montecarlo::{AbepCurve, AbepPoint, RunOptions, SystemKind};
