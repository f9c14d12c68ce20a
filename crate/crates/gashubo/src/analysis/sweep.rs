//! Query-complexity sweeps: many seeded GAS runs on detection instances,
//! aggregated into best-so-far curves against cumulative classical and
//! quantum query counts.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{derive_seed, AnalysisError};
use crate::gas::{run_gas_from, GasConfig, GasEngine, GasMode, InitialPoint};
use crate::hubo::{bits_to_mask, mask_to_bits, Rounding};
use crate::mimo::{
    build_mld_hubo, example_channel, example_tx_bits, mmse_detect, proposed_threshold,
    simulate_channel, transmit_over, MimoInstance, Modulation, ThresholdPolicy,
};
use crate::Scalar;

/// Which query counter drives the x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDomain {
    Cd,
    Qd,
}

impl SweepDomain {
    pub fn label(self) -> &'static str {
        match self {
            SweepDomain::Cd => "CD",
            SweepDomain::Qd => "QD",
        }
    }
}

/// Quantity tracked along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMetric {
    /// Best objective so far, shifted so the instance minimum sits at zero.
    Objective,
    /// Bit errors of the current best decision against the transmitted bits.
    BitErrorRate,
}

/// Channel drawn per trial, or the fixed worked example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    Random,
    /// The fixed 16-QAM 2x2 channel with input bits `00110101`; noise is
    /// still drawn per trial.
    FixedExample,
}

/// Everything one sweep trial needs, minus the per-trial seed.
#[derive(Debug, Clone, PartialEq)]
pub struct GasScenario<T> {
    pub modulation: Modulation,
    pub n_t: usize,
    pub n_r: usize,
    pub snr_db: T,
    pub policy: ThresholdPolicy<T>,
    pub mode: GasMode,
    /// When set, coefficients are scaled by this factor and rounded to
    /// integers before solving (integer-approximation runs).
    pub approx_factor: Option<T>,
    pub metric: SweepMetric,
    pub channel: ChannelModel,
    pub engine: GasEngine,
    pub lambda: T,
    pub qd_budget_multiplier: T,
    pub no_improvement_limit: usize,
}

impl<T: Scalar> GasScenario<T> {
    pub fn new(
        modulation: Modulation,
        n_t: usize,
        n_r: usize,
        snr_db: T,
        policy: ThresholdPolicy<T>,
    ) -> Self {
        GasScenario {
            modulation,
            n_t,
            n_r,
            snr_db,
            policy,
            mode: GasMode::Real,
            approx_factor: None,
            metric: SweepMetric::Objective,
            channel: ChannelModel::Random,
            engine: GasEngine::Statevector,
            lambda: T::of(8.0 / 7.0),
            qd_budget_multiplier: T::of(22.5),
            no_improvement_limit: 20,
        }
    }

    pub fn snr_linear(&self) -> T {
        T::of(10.0).powf(self.snr_db / T::of(10.0))
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        if self.channel == ChannelModel::FixedExample
            && (self.modulation, self.n_t, self.n_r) != (Modulation::Qam16, 2, 2)
        {
            return Err(AnalysisError::InconsistentScenario(
                "the fixed-channel fixture is 16-QAM with 2x2 antennas".into(),
            ));
        }
        Ok(())
    }
}

/// Everything recorded from one trial: step-curve points per domain plus
/// convergence markers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome<T> {
    /// `(cd_after, metric)` including the starting point.
    pub cd_points: Vec<(u64, T)>,
    /// `(qd_after, metric)` including the starting point.
    pub qd_points: Vec<(u64, T)>,
    pub cd_total: u64,
    pub qd_total: u64,
    /// First classical query count at which the best value reached the
    /// instance minimum (None when the run never got there).
    pub cd_at_optimum: Option<u64>,
    pub qd_at_optimum: Option<u64>,
    /// Bit errors of the final decision against the transmitted bits.
    pub final_bit_errors: u64,
    pub n_bits: u64,
}

/// Runs one seeded trial of the scenario.
pub fn run_trial<T: Scalar>(
    scenario: &GasScenario<T>,
    seed: u64,
) -> Result<TrialOutcome<T>, AnalysisError> {
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let snr = scenario.snr_linear();
    let inst: MimoInstance<T> = match scenario.channel {
        ChannelModel::Random => simulate_channel(
            scenario.n_t,
            scenario.n_r,
            scenario.modulation,
            snr,
            &mut rng,
        ),
        ChannelModel::FixedExample => transmit_over(
            example_channel(),
            Modulation::Qam16,
            example_tx_bits(),
            snr,
            &mut rng,
        ),
    };
    let n = inst.n();

    let exact = build_mld_hubo(&inst);
    let (poly, threshold_scale) = match scenario.approx_factor {
        Some(f) => (exact.integer_approximation(f, Rounding::Nearest), f),
        None => (exact, T::one()),
    };

    // Initial point per policy, evaluated against the polynomial actually
    // being solved (matters for integer-approximation runs).
    let initial = match scenario.policy {
        ThresholdPolicy::Random => {
            let bits = mask_to_bits(rng.gen_range(0..(1u64 << n)), n);
            let y0 = poly.evaluate(&bits).expect("length");
            InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 1,
            }
        }
        ThresholdPolicy::MmseBased => {
            let bits = mmse_detect(&inst)?;
            let y0 = poly.evaluate(&bits).expect("length");
            InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 1,
            }
        }
        ThresholdPolicy::Proposed { p } => {
            let bits = mask_to_bits(rng.gen_range(0..(1u64 << n)), n);
            let y0 = proposed_threshold(inst.sigma2, inst.n_r, p)? * threshold_scale;
            InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 0,
            }
        }
        ThresholdPolicy::Combination { p } => {
            let bits = mmse_detect(&inst)?;
            let mmse_y = poly.evaluate(&bits).expect("length");
            let tail_y = proposed_threshold(inst.sigma2, inst.n_r, p)? * threshold_scale;
            InitialPoint {
                threshold: mmse_y.min(tail_y),
                bits,
                classical_evaluations: 1,
            }
        }
    };

    let mut cfg = GasConfig::new(scenario.mode, rng.gen());
    cfg.engine = scenario.engine;
    cfg.lambda = scenario.lambda;
    cfg.qd_budget_multiplier = scenario.qd_budget_multiplier;
    cfg.no_improvement_limit = scenario.no_improvement_limit;

    let trace = run_gas_from(&poly, &cfg, initial.clone())?;

    let (_, e_min) = poly.brute_force_min()?;
    let tol = T::of(1e-9) * e_min.abs().max(T::one());
    let tx_mask = bits_to_mask(&inst.tx_bits);
    let n_t_bits = T::of_usize(n);

    let metric = |mask: u64, value: T| match scenario.metric {
        SweepMetric::Objective => value - e_min,
        SweepMetric::BitErrorRate => T::of_usize((mask ^ tx_mask).count_ones() as usize) / n_t_bits,
    };

    let mut best_mask = bits_to_mask(&initial.bits);
    let mut best_value = poly.evaluate_mask(best_mask);
    let cd0 = initial.classical_evaluations as u64;

    let mut cd_points = vec![(cd0, metric(best_mask, best_value))];
    let mut qd_points = vec![(0u64, metric(best_mask, best_value))];
    let mut cd_at_optimum = (best_value <= e_min + tol).then_some(cd0);
    let mut qd_at_optimum = (best_value <= e_min + tol).then_some(0);

    for it in &trace.iterations {
        if it.improved && it.y_candidate < best_value {
            best_value = it.y_candidate;
            best_mask = bits_to_mask(&it.measured_bits);
        }
        let v = metric(best_mask, best_value);
        cd_points.push((it.cd_after as u64, v));
        qd_points.push((it.qd_after, v));
        if cd_at_optimum.is_none() && best_value <= e_min + tol {
            cd_at_optimum = Some(it.cd_after as u64);
            qd_at_optimum = Some(it.qd_after);
        }
    }

    Ok(TrialOutcome {
        cd_points,
        qd_points,
        cd_total: trace.cd_queries as u64,
        qd_total: trace.qd_queries,
        cd_at_optimum,
        qd_at_optimum,
        final_bit_errors: u64::from((best_mask ^ tx_mask).count_ones()),
        n_bits: n as u64,
    })
}

/// Runs `trials` seeded trials in parallel (seeds derived from
/// `base_seed`), preserving trial order in the result.
pub fn run_trials<T: Scalar>(
    scenario: &GasScenario<T>,
    trials: u64,
    base_seed: u64,
) -> Result<Vec<TrialOutcome<T>>, AnalysisError> {
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(scenario, derive_seed(base_seed, t)))
        .collect()
}

/// One aggregated point of a sweep curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord<T> {
    pub domain: SweepDomain,
    pub x: u64,
    pub mean: T,
    pub trials: u64,
}

/// Means of the trial step-curves on the integer grid `0..=max_x`.
/// Before a trial's first recorded point its initial value is carried
/// backward; after the last, the final value is carried forward.
pub fn aggregate_curves<T: Scalar>(
    outcomes: &[TrialOutcome<T>],
    domain: SweepDomain,
    max_x: u64,
) -> Vec<SweepRecord<T>> {
    let trials = outcomes.len();
    let mut sums = vec![T::zero(); max_x as usize + 1];
    for outcome in outcomes {
        let points = match domain {
            SweepDomain::Cd => &outcome.cd_points,
            SweepDomain::Qd => &outcome.qd_points,
        };
        let mut idx = 0usize;
        let mut current = points[0].1;
        for (x, sum) in sums.iter_mut().enumerate() {
            while idx < points.len() && points[idx].0 <= x as u64 {
                current = points[idx].1;
                idx += 1;
            }
            *sum += current;
        }
    }
    let denom = T::of_usize(trials.max(1));
    sums.into_iter()
        .enumerate()
        .map(|(x, sum)| SweepRecord {
            domain,
            x: x as u64,
            mean: sum / denom,
            trials: trials as u64,
        })
        .collect()
}

/// Runs the scenario and aggregates both domains.
pub fn query_sweep<T: Scalar>(
    scenario: &GasScenario<T>,
    trials: u64,
    base_seed: u64,
    max_cd: u64,
    max_qd: u64,
) -> Result<Vec<SweepRecord<T>>, AnalysisError> {
    let outcomes = run_trials(scenario, trials, base_seed)?;
    let mut records = aggregate_curves(&outcomes, SweepDomain::Cd, max_cd);
    records.extend(aggregate_curves(&outcomes, SweepDomain::Qd, max_qd));
    Ok(records)
}

/// Mean classical queries until the optimum was first reached; trials that
/// never reached it contribute their full query count.
pub fn mean_cd_to_optimum<T: Scalar>(outcomes: &[TrialOutcome<T>]) -> T {
    let total: u64 = outcomes
        .iter()
        .map(|o| o.cd_at_optimum.unwrap_or(o.cd_total))
        .sum();
    T::of(total as f64) / T::of_usize(outcomes.len().max(1))
}

/// Aggregate BER of the final decisions.
pub fn final_ber<T: Scalar>(outcomes: &[TrialOutcome<T>]) -> T {
    let errors: u64 = outcomes.iter().map(|o| o.final_bit_errors).sum();
    let bits: u64 = outcomes.iter().map(|o| o.n_bits).sum();
    T::of(errors as f64) / T::of(bits.max(1) as f64)
}

/// Writes labelled sweep curves as `series,domain,x,mean,trials` rows.
pub fn write_sweep_csv<T: Scalar, W: Write>(
    series: &[(String, Vec<SweepRecord<T>>)],
    mut w: W,
    comment: Option<&str>,
) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "series,domain,x,mean,trials")?;
    for (label, records) in series {
        for r in records {
            writeln!(
                w,
                "{label},{},{},{},{}",
                r.domain.label(),
                r.x,
                r.mean,
                r.trials
            )?;
        }
    }
    Ok(())
}
