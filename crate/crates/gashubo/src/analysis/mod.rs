//! Reproduction harnesses: gate-count verification, query-complexity
//! sweeps and BER Monte-Carlo, all deterministic under a base seed.

use std::error::Error;
use std::fmt;

use crate::gas::GasError;
use crate::hubo::HuboError;
use crate::mimo::{MimoError, Modulation};
use crate::quantum::QuantumError;

pub mod ber;
pub mod census;
pub mod sweep;

pub use ber::{ber_sweep, write_ber_csv, BerConfig, BerPoint};
pub use census::{
    census_circuit, full_circuit_gate_totals, predicted_census, verify_census, write_gates_csv,
    CensusOutcome, CensusReport, FullGateTotals, GateCensus,
};
pub use sweep::{
    aggregate_curves, final_ber, mean_cd_to_optimum, query_sweep, run_trial, run_trials,
    write_sweep_csv, ChannelModel, GasScenario, SweepDomain, SweepMetric, SweepRecord,
    TrialOutcome,
};

#[derive(Debug)]
pub enum AnalysisError {
    /// `n` is not a multiple of the modulation's bits per symbol.
    InconsistentBitCount {
        modulation: Modulation,
        n: usize,
    },
    /// Fixed-channel scenarios only exist for the 16-QAM 2x2 fixture.
    InconsistentScenario(String),
    Gas(GasError),
    Mimo(MimoError),
    Quantum(QuantumError),
    Hubo(HuboError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::InconsistentBitCount { modulation, n } => {
                write!(
                    f,
                    "{n} bits is not a multiple of {} bits/symbol ({modulation})",
                    modulation.bits_per_symbol()
                )
            }
            AnalysisError::InconsistentScenario(msg) => write!(f, "{msg}"),
            AnalysisError::Gas(e) => write!(f, "{e}"),
            AnalysisError::Mimo(e) => write!(f, "{e}"),
            AnalysisError::Quantum(e) => write!(f, "{e}"),
            AnalysisError::Hubo(e) => write!(f, "{e}"),
        }
    }
}

impl Error for AnalysisError {}

impl From<GasError> for AnalysisError {
    fn from(e: GasError) -> Self {
        AnalysisError::Gas(e)
    }
}

impl From<MimoError> for AnalysisError {
    fn from(e: MimoError) -> Self {
        AnalysisError::Mimo(e)
    }
}

impl From<QuantumError> for AnalysisError {
    fn from(e: QuantumError) -> Self {
        AnalysisError::Quantum(e)
    }
}

impl From<HuboError> for AnalysisError {
    fn from(e: HuboError) -> Self {
        AnalysisError::Hubo(e)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a per-work-unit seed from a base seed and an index, so trials
/// can run in parallel without perturbing each other's streams.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}
