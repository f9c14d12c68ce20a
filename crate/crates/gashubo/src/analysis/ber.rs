//! Bit-error-rate Monte-Carlo over detector choices.
//!
//! All detectors see the same instances (seeds depend only on the SNR
//! point and the trial index), so comparisons are paired down to the bit
//! level. Each SNR point runs until every detector has accumulated the
//! requested number of bit errors or the trial cap is reached, whichever
//! comes first.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{derive_seed, AnalysisError};
use crate::mimo::{detect, simulate_channel, DetectorKind, Modulation};
use crate::Scalar;

const TRIAL_CHUNK: u64 = 512;

/// Monte-Carlo setup for one BER table.
#[derive(Debug, Clone, PartialEq)]
pub struct BerConfig<T> {
    pub modulation: Modulation,
    pub n_t: usize,
    pub n_r: usize,
    pub snr_db_grid: Vec<T>,
    pub detectors: Vec<DetectorKind<T>>,
    pub max_trials: u64,
    /// Early-stop target per detector; 0 disables early stopping.
    pub min_bit_errors: u64,
    pub base_seed: u64,
}

/// One (SNR, detector) result.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint<T> {
    pub snr_db: T,
    pub detector: String,
    pub bit_errors: u64,
    pub total_bits: u64,
    pub trials: u64,
    pub ber: T,
}

/// Runs the paired Monte-Carlo and returns one point per (SNR, detector).
pub fn ber_sweep<T: Scalar>(cfg: &BerConfig<T>) -> Result<Vec<BerPoint<T>>, AnalysisError> {
    let mut points = Vec::new();
    for (snr_index, &snr_db) in cfg.snr_db_grid.iter().enumerate() {
        let snr = T::of(10.0).powf(snr_db / T::of(10.0));
        let snr_seed = derive_seed(cfg.base_seed, snr_index as u64);
        let mut errors = vec![0u64; cfg.detectors.len()];
        let mut trials_done = 0u64;

        while trials_done < cfg.max_trials {
            let chunk = TRIAL_CHUNK.min(cfg.max_trials - trials_done);
            let chunk_errors: Result<Vec<Vec<u64>>, AnalysisError> = (trials_done
                ..trials_done + chunk)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(snr_seed, trial));
                    let inst =
                        simulate_channel::<T, _>(cfg.n_t, cfg.n_r, cfg.modulation, snr, &mut rng);
                    cfg.detectors
                        .iter()
                        .map(|kind| {
                            let decided = detect(&inst, kind)?;
                            Ok(decided
                                .iter()
                                .zip(&inst.tx_bits)
                                .filter(|(a, b)| a != b)
                                .count() as u64)
                        })
                        .collect()
                })
                .collect();
            for per_trial in chunk_errors? {
                for (acc, e) in errors.iter_mut().zip(per_trial) {
                    *acc += e;
                }
            }
            trials_done += chunk;
            if cfg.min_bit_errors > 0 && errors.iter().all(|&e| e >= cfg.min_bit_errors) {
                break;
            }
        }

        let n = cfg.n_t * cfg.modulation.bits_per_symbol();
        let total_bits = trials_done * n as u64;
        for (kind, &bit_errors) in cfg.detectors.iter().zip(&errors) {
            points.push(BerPoint {
                snr_db,
                detector: kind.label(),
                bit_errors,
                total_bits,
                trials: trials_done,
                ber: T::of(bit_errors as f64) / T::of(total_bits as f64),
            });
        }
    }
    Ok(points)
}

/// Writes `snr_db,detector,ber,bit_errors,trials` rows.
pub fn write_ber_csv<T: Scalar, W: Write>(
    points: &[BerPoint<T>],
    mut w: W,
    comment: Option<&str>,
) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "snr_db,detector,ber,bit_errors,trials")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.snr_db, p.detector, p.ber, p.bit_errors, p.trials
        )?;
    }
    Ok(())
}
