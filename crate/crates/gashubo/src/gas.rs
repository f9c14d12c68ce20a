//! The Grover adaptive search loop.
//!
//! Two variants share one engine: the integer algorithm reads the objective
//! value straight out of the measured value register, while the real-valued
//! algorithm discards the register (its content is Fejér-spread and may be
//! wrong) and re-evaluates the objective classically from the measured bits.
//! Query complexity is tracked in both domains: classical queries (`cd`,
//! objective evaluations) and quantum queries (`qd`, applications of the
//! Grover operator).

use std::error::Error;
use std::fmt;
use std::io::{self, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hubo::{bits_to_mask, mask_to_bits, required_qubits_m, HuboPolynomial, ValueBounds};
use crate::quantum::{PreparedCircuit, QuantumError};
use crate::Scalar;

/// How the measured objective value is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GasMode {
    /// Value register decoded directly; requires integer coefficients.
    Integer,
    /// Value register ignored; `y = E(b)` recomputed classically.
    Real,
}

/// What produces the per-iteration measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GasEngine {
    /// Full statevector simulation of `G^L A_y |0>`, including the
    /// imperfect marking that direct encoding suffers near the threshold.
    Statevector,
    /// Idealized circuit: states below the threshold are marked exactly
    /// and amplified per the sine law. This is the protocol used to study
    /// initial thresholds in isolation.
    Idealized,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GasError {
    /// Integer mode was requested for a polynomial with fractional
    /// coefficients.
    NonIntegerCoefficients,
    /// The idealized engine enumerates all assignments and refuses
    /// oversized problems.
    TooManyVariables { n: usize, max: usize },
    /// The circuit could not be simulated.
    Quantum(QuantumError),
}

impl fmt::Display for GasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GasError::NonIntegerCoefficients => {
                write!(f, "integer GAS requires integer coefficients")
            }
            GasError::TooManyVariables { n, max } => {
                write!(
                    f,
                    "idealized engine supports at most {max} variables, got {n}"
                )
            }
            GasError::Quantum(e) => write!(f, "{e}"),
        }
    }
}

impl Error for GasError {}

impl From<QuantumError> for GasError {
    fn from(e: QuantumError) -> Self {
        GasError::Quantum(e)
    }
}

/// Solver configuration. Defaults: growth factor `8/7`, quantum budget
/// `22.5·sqrt(2^n)`, termination after 20 consecutive iterations without
/// improvement.
#[derive(Debug, Clone, PartialEq)]
pub struct GasConfig<T> {
    /// Rotation-set growth factor applied after a failed iteration.
    pub lambda: T,
    /// The run stops once `qd_queries` exceeds `multiplier * sqrt(2^n)`.
    pub qd_budget_multiplier: T,
    /// The run stops after this many consecutive non-improvements.
    pub no_improvement_limit: usize,
    /// Seed for the run's random stream (initial point, rotation draws,
    /// measurement sampling).
    pub seed: u64,
    pub mode: GasMode,
    pub engine: GasEngine,
}

impl<T: Scalar> GasConfig<T> {
    pub fn new(mode: GasMode, seed: u64) -> Self {
        GasConfig {
            lambda: T::of(8.0 / 7.0),
            qd_budget_multiplier: T::of(22.5),
            no_improvement_limit: 20,
            seed,
            mode,
            engine: GasEngine::Statevector,
        }
    }
}

/// Externally supplied starting point (threshold policies live in the
/// detection layer). `classical_evaluations` is the number of objective
/// evaluations the policy spent computing the threshold, charged to `cd`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialPoint<T> {
    pub threshold: T,
    pub bits: Vec<bool>,
    pub classical_evaluations: usize,
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Total Grover applications exceeded the budget.
    QdBudget,
    /// Too many consecutive iterations without improvement.
    NoImprovement,
}

/// Per-iteration record.
#[derive(Debug, Clone, PartialEq)]
pub struct GasIteration<T> {
    pub index: usize,
    /// `L_i`, the number of Grover operators applied this iteration.
    pub rotation_count: u64,
    pub measured_bits: Vec<bool>,
    /// Objective value attributed to the measurement (register decode in
    /// integer mode, classical re-evaluation in real mode).
    pub y_candidate: T,
    /// Threshold after the update, i.e. `y_{i+1}`.
    pub threshold: T,
    pub improved: bool,
    pub cd_after: usize,
    pub qd_after: u64,
}

/// Full record of one GAS execution.
#[derive(Debug, Clone, PartialEq)]
pub struct GasTrace<T> {
    pub n: usize,
    /// Value-register width chosen for the run.
    pub m: usize,
    pub initial_threshold: T,
    pub initial_bits: Vec<bool>,
    pub iterations: Vec<GasIteration<T>>,
    /// Objective evaluations: the policy's initial evaluations plus one per
    /// iteration.
    pub cd_queries: usize,
    /// Total Grover applications, `Σ L_i`.
    pub qd_queries: u64,
    pub best_bits: Vec<bool>,
    pub best_value: T,
    pub termination: Termination,
}

impl<T: Scalar> GasTrace<T> {
    /// Length of the trailing run of non-improving iterations.
    pub fn consecutive_no_improvement(&self) -> usize {
        self.iterations
            .iter()
            .rev()
            .take_while(|it| !it.improved)
            .count()
    }

    /// Serializes the per-iteration records as CSV (`i,L,y_candidate,y,cd,qd`),
    /// preceded by an optional `#` comment line.
    pub fn write_csv<W: Write>(&self, mut w: W, comment: Option<&str>) -> io::Result<()> {
        if let Some(c) = comment {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "i,L,y_candidate,y,cd,qd")?;
        for it in &self.iterations {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                it.index, it.rotation_count, it.y_candidate, it.threshold, it.cd_after, it.qd_after
            )?;
        }
        Ok(())
    }
}

/// Largest `n` the idealized engine will enumerate.
pub const MAX_IDEAL_VARS: usize = 20;

enum Sampler<T> {
    Circuit(PreparedCircuit<T>),
    Ideal {
        marked: Vec<u64>,
        unmarked: Vec<u64>,
    },
}

impl<T: Scalar> Sampler<T> {
    fn build(
        poly: &HuboPolynomial<T>,
        threshold: T,
        m: usize,
        engine: GasEngine,
    ) -> Result<Self, GasError> {
        match engine {
            GasEngine::Statevector => Ok(Sampler::Circuit(PreparedCircuit::prepare(
                poly, threshold, m,
            )?)),
            GasEngine::Idealized => {
                let n = poly.n();
                if n > MAX_IDEAL_VARS {
                    return Err(GasError::TooManyVariables {
                        n,
                        max: MAX_IDEAL_VARS,
                    });
                }
                let mut marked = Vec::new();
                let mut unmarked = Vec::new();
                for mask in 0..(1u64 << n) {
                    if poly.evaluate_mask(mask) < threshold {
                        marked.push(mask);
                    } else {
                        unmarked.push(mask);
                    }
                }
                Ok(Sampler::Ideal { marked, unmarked })
            }
        }
    }

    /// Measured key bits, plus the decoded value register when a circuit
    /// was actually simulated.
    fn sample<R: Rng>(&self, l: u64, n: usize, rng: &mut R) -> (Vec<bool>, Option<i64>) {
        match self {
            Sampler::Circuit(circ) => {
                let outcome = circ.grover_power(l).measure(rng);
                (outcome.key_bits, Some(outcome.value))
            }
            Sampler::Ideal { marked, unmarked } => {
                let total = (marked.len() + unmarked.len()) as f64;
                let theta = (marked.len() as f64 / total).sqrt().min(1.0).asin();
                let p_marked = ((2 * l + 1) as f64 * theta).sin().powi(2);
                let u: f64 = rng.gen();
                let mask = if !marked.is_empty() && (u < p_marked || unmarked.is_empty()) {
                    marked[rng.gen_range(0..marked.len())]
                } else {
                    unmarked[rng.gen_range(0..unmarked.len())]
                };
                (mask_to_bits(mask, n), None)
            }
        }
    }
}

/// Draws `L_i` uniformly from `{0, 1, ..., ceil(k-1)}`.
pub fn rotation_count_schedule<T: Scalar, R: Rng>(k: T, rng: &mut R) -> u64 {
    debug_assert!(k >= T::one());
    let hi = (k - T::one()).ceil().to_u64().unwrap_or(0);
    if hi == 0 {
        0
    } else {
        rng.gen_range(0..=hi)
    }
}

/// Termination test: quantum budget exceeded or the trailing
/// non-improvement streak reached the limit. The budget is checked after
/// the iteration that crossed it, so traces can overshoot by one draw.
pub fn should_terminate<T: Scalar>(trace: &GasTrace<T>, cfg: &GasConfig<T>) -> bool {
    let budget = cfg.qd_budget_multiplier * T::of(2.0).powi(trace.n as i32).sqrt();
    if T::of(trace.qd_queries as f64) > budget {
        return true;
    }
    trace.consecutive_no_improvement() >= cfg.no_improvement_limit
}

/// Runs the integer algorithm: the measured value register is trusted as
/// `E(b) - y_i`. Fails if any coefficient is fractional.
pub fn run_integer_gas<T: Scalar>(
    poly: &HuboPolynomial<T>,
    cfg: &GasConfig<T>,
) -> Result<GasTrace<T>, GasError> {
    if !poly.has_integer_coefficients() {
        return Err(GasError::NonIntegerCoefficients);
    }
    let cfg = GasConfig {
        mode: GasMode::Integer,
        ..cfg.clone()
    };
    run(poly, &cfg, None)
}

/// Runs the real-valued algorithm: measured bits are kept, the value
/// register is discarded and `y = E(b)` is recomputed classically.
pub fn run_real_gas<T: Scalar>(
    poly: &HuboPolynomial<T>,
    cfg: &GasConfig<T>,
) -> Result<GasTrace<T>, GasError> {
    let cfg = GasConfig {
        mode: GasMode::Real,
        ..cfg.clone()
    };
    run(poly, &cfg, None)
}

/// Runs GAS from an externally chosen starting point (threshold policy).
/// In integer mode a fractional threshold is tightened to `ceil(y0)`,
/// which marks exactly the same assignments.
pub fn run_gas_from<T: Scalar>(
    poly: &HuboPolynomial<T>,
    cfg: &GasConfig<T>,
    initial: InitialPoint<T>,
) -> Result<GasTrace<T>, GasError> {
    if cfg.mode == GasMode::Integer && !poly.has_integer_coefficients() {
        return Err(GasError::NonIntegerCoefficients);
    }
    run(poly, cfg, Some(initial))
}

fn run<T: Scalar>(
    poly: &HuboPolynomial<T>,
    cfg: &GasConfig<T>,
    initial: Option<InitialPoint<T>>,
) -> Result<GasTrace<T>, GasError> {
    let n = poly.n();
    if n >= 64 {
        return Err(GasError::Quantum(QuantumError::RegisterTooLarge {
            qubits: n + 1,
            max: crate::quantum::MAX_TOTAL_QUBITS,
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let (mut threshold, initial_bits, cd0) = match initial {
        Some(p) => {
            assert_eq!(p.bits.len(), n, "initial bits length must equal n");
            (p.threshold, p.bits, p.classical_evaluations)
        }
        None => {
            let mask = rng.gen_range(0..(1u64 << n));
            (poly.evaluate_mask(mask), mask_to_bits(mask, n), 1)
        }
    };
    if cfg.mode == GasMode::Integer && !threshold.fract().is_zero() {
        threshold = threshold.ceil();
    }
    let initial_threshold = threshold;

    // Size the value register from the attainable bounds, widened to cover
    // thresholds a policy may place outside the attainable range.
    let bounds = poly.bounds();
    let bounds = ValueBounds::new(bounds.e_min.min(threshold), bounds.e_max.max(threshold));
    let m = required_qubits_m(&bounds) as usize;

    let sqrt_space = T::of(2.0).powi(n as i32).sqrt();
    let qd_budget = cfg.qd_budget_multiplier * sqrt_space;

    let mut best_bits = initial_bits.clone();
    let mut best_value = poly.evaluate_mask(bits_to_mask(&initial_bits));
    let mut k = T::one();
    let mut no_improve = 0usize;
    let mut cd = cd0;
    let mut qd = 0u64;
    let mut iterations = Vec::new();
    let mut sampler = Sampler::build(poly, threshold, m, cfg.engine)?;

    let termination = loop {
        let l = rotation_count_schedule(k, &mut rng);
        let (measured_bits, register_value) = sampler.sample(l, n, &mut rng);
        let measured_mask = bits_to_mask(&measured_bits);
        let y_candidate = match (cfg.mode, register_value) {
            (GasMode::Integer, Some(value)) => threshold + T::of(value as f64),
            _ => poly.evaluate_mask(measured_mask),
        };
        cd += 1;
        qd += l;

        let improved = y_candidate < threshold;
        if improved {
            threshold = y_candidate;
            k = T::one();
            no_improve = 0;
            sampler = Sampler::build(poly, threshold, m, cfg.engine)?;
            if y_candidate < best_value {
                best_value = y_candidate;
                best_bits = measured_bits.clone();
            }
        } else {
            k = (cfg.lambda * k).min(sqrt_space);
            no_improve += 1;
        }

        iterations.push(GasIteration {
            index: iterations.len(),
            rotation_count: l,
            measured_bits,
            y_candidate,
            threshold,
            improved,
            cd_after: cd,
            qd_after: qd,
        });

        if T::of(qd as f64) > qd_budget {
            break Termination::QdBudget;
        }
        if no_improve >= cfg.no_improvement_limit {
            break Termination::NoImprovement;
        }
    };

    Ok(GasTrace {
        n,
        m,
        initial_threshold,
        initial_bits,
        iterations,
        cd_queries: cd,
        qd_queries: qd,
        best_bits,
        best_value,
        termination,
    })
}
