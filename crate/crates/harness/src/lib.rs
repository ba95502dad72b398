//! Verification suites, counterexample reconstructions and report output
//! for the `polyslice` command-line tool.

pub mod counterexamples;
pub mod report;
pub mod suites;

use polyslice::SliceError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use counterexamples::{counterexample, COUNTEREXAMPLES};
pub use report::{CaseRecord, Format, Relation, Report, Summary, CSV_HEADER};
pub use suites::{run_suite, threshold_report, SuiteConfig, SUITES};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown counterexample `{0}`")]
    UnknownId(String),
    #[error("{0}")]
    ResourceLimit(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// Errors caused by the caller's input rather than by a computation.
    pub fn is_usage(&self) -> bool {
        match self {
            HarnessError::UnknownSuite(_)
            | HarnessError::UnknownId(_)
            | HarnessError::ResourceLimit(_)
            | HarnessError::InvalidArgument(_) => true,
            HarnessError::Slice(e) => matches!(
                e,
                SliceError::DimensionTooSmall(_)
                    | SliceError::DimensionMismatch { .. }
                    | SliceError::ZeroVector
                    | SliceError::InvalidDirection(_)
                    | SliceError::Unsupported { .. }
                    | SliceError::RegimeViolation
                    | SliceError::UnsupportedQuery(_)
                    | SliceError::InvalidArgument(_)
                    | SliceError::ResourceLimit(_)
            ),
            _ => false,
        }
    }
}

/// Independent stream for one case, so results do not depend on scheduling.
pub fn case_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let mut h = seed ^ 0x243F_6A88_85A3_08D3;
    for &p in parts {
        h = splitmix(h ^ splitmix(p));
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
