//! Subcommand implementations.

use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gashubo::analysis::{
    ber_sweep, query_sweep, verify_census, write_ber_csv, write_gates_csv, write_sweep_csv,
    BerConfig, CensusOutcome, ChannelModel, GasScenario, SweepMetric,
};
use gashubo::gas::{
    run_gas_from, run_integer_gas, run_real_gas, GasConfig, GasEngine, GasMode, GasTrace,
    InitialPoint, Termination,
};
use gashubo::hubo::{
    bits_to_string, required_qubits_m, HuboPolynomial, Monomial, Rounding, ValueBounds,
};
use gashubo::mimo::io::{instance_from_json, instance_to_json};
use gashubo::mimo::{
    build_mld_hubo, detect as run_detector, example_instance, mmse_detect, proposed_threshold,
    simulate_channel, DetectorKind, MimoInstance, Modulation, ThresholdPolicy,
};
use gashubo::quantum::{decode_twos_complement, fejer_amplitudes, PreparedCircuit};

use crate::output::{emit, header_comment, CliError};
use crate::{BerArgs, FejerArgs, GateCountArgs, SolveArgs, SweepArgs, TraceArgs};

type Poly = HuboPolynomial<f64>;

fn parse_modulation(s: &str) -> Result<Modulation, CliError> {
    s.parse().map_err(CliError::Config)
}

fn parse_mode(s: &str) -> Result<GasMode, CliError> {
    match s {
        "integer" => Ok(GasMode::Integer),
        "real" => Ok(GasMode::Real),
        other => Err(CliError::Config(format!(
            "unknown mode {other:?} (integer|real)"
        ))),
    }
}

fn parse_rounding(s: &str) -> Result<Rounding, CliError> {
    match s {
        "nearest" => Ok(Rounding::Nearest),
        "floor" => Ok(Rounding::Floor),
        other => Err(CliError::Config(format!(
            "unknown rounding {other:?} (nearest|floor)"
        ))),
    }
}

fn valid_p(p: f64) -> Result<f64, CliError> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(CliError::Config(format!("probability {p} outside (0, 1)")))
    }
}

/// Parses a policy name; bare `proposed`/`combination` use `default_p`.
fn parse_policy(s: &str, default_p: f64) -> Result<ThresholdPolicy<f64>, CliError> {
    let parse_p = |text: &str| -> Result<f64, CliError> {
        let p: f64 = text
            .parse()
            .map_err(|_| CliError::Config(format!("bad probability {text:?}")))?;
        valid_p(p)
    };
    match s {
        "random" => Ok(ThresholdPolicy::Random),
        "mmse" => Ok(ThresholdPolicy::MmseBased),
        "proposed" => Ok(ThresholdPolicy::Proposed {
            p: valid_p(default_p)?,
        }),
        "combination" => Ok(ThresholdPolicy::Combination {
            p: valid_p(default_p)?,
        }),
        other => {
            if let Some(p) = other.strip_prefix("proposed:") {
                return Ok(ThresholdPolicy::Proposed { p: parse_p(p)? });
            }
            if let Some(p) = other.strip_prefix("combination:") {
                return Ok(ThresholdPolicy::Combination { p: parse_p(p)? });
            }
            Err(CliError::Config(format!(
                "unknown policy {other:?} (random|mmse|proposed[:P]|combination[:P])"
            )))
        }
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad number {tok:?} in list")))
        })
        .collect()
}

fn load_poly(path: &str, n: Option<usize>) -> Result<Poly, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(HuboPolynomial::from_text(&text, n)?)
}

fn print_trace_summary(trace: &GasTrace<f64>) {
    let termination = match trace.termination {
        Termination::QdBudget => "qd-budget",
        Termination::NoImprovement => "no-improvement",
    };
    println!(
        "n={} m={} iterations={}",
        trace.n,
        trace.m,
        trace.iterations.len()
    );
    println!("best_bits={}", bits_to_string(&trace.best_bits));
    println!("best_value={}", trace.best_value);
    println!(
        "cd={} qd={} termination={termination}",
        trace.cd_queries, trace.qd_queries
    );
}

fn write_trace_file(
    trace: &GasTrace<f64>,
    path: Option<&str>,
    canonical: &str,
) -> Result<(), CliError> {
    if let Some(p) = path {
        let mut buf = Vec::new();
        trace.write_csv(&mut buf, Some(&header_comment(canonical)))?;
        fs::write(p, buf)?;
    }
    Ok(())
}

pub fn solve(args: SolveArgs) -> Result<(), CliError> {
    if let Some(demo) = args.demo.clone() {
        return solve_demo(&demo, &args);
    }
    let mode = parse_mode(&args.mode)?;
    let mut cfg = GasConfig::new(mode, args.seed);
    cfg.qd_budget_multiplier = args.budget;
    cfg.no_improvement_limit = args.limit;

    if let Some(modulation) = args.mimo.clone() {
        let modulation = parse_modulation(&modulation)?;
        let policy = parse_policy(&args.policy, args.p)?;
        let canonical =
            format!(
            "solve mimo={modulation} nt={} nr={} snr_db={} policy={} mode={} factor={:?} seed={}",
            args.nt, args.nr, args.snr_db, policy.label(), args.mode, args.factor, args.seed
        );
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let snr = 10f64.powf(args.snr_db / 10.0);
        let inst = simulate_channel::<f64, _>(args.nt, args.nr, modulation, snr, &mut rng);
        let (poly, scale) = scaled_poly(&inst, args.factor, parse_rounding(&args.round)?);
        let initial = initial_for_poly(&inst, &poly, scale, &policy, &mut rng)?;
        cfg.seed = rng.gen();
        let trace = run_gas_from(&poly, &cfg, initial)?;
        print_trace_summary(&trace);
        let errors = trace
            .best_bits
            .iter()
            .zip(&inst.tx_bits)
            .filter(|(a, b)| a != b)
            .count();
        println!(
            "tx_bits={} bit_errors={errors}",
            bits_to_string(&inst.tx_bits)
        );
        write_trace_file(&trace, args.trace_out.as_deref(), &canonical)?;
        return Ok(());
    }

    let path = args
        .poly
        .clone()
        .ok_or_else(|| CliError::Config("one of --poly, --mimo or --demo is required".into()))?;
    let mut poly = load_poly(&path, args.n)?;
    if let Some(factor) = args.factor {
        if factor <= 0.0 {
            return Err(CliError::Config("--factor must be positive".into()));
        }
        poly = poly.integer_approximation(factor, parse_rounding(&args.round)?);
    }
    let canonical = format!(
        "solve poly={path} mode={} factor={:?} seed={} budget={} limit={}",
        args.mode, args.factor, args.seed, args.budget, args.limit
    );
    let trace = match mode {
        GasMode::Integer => run_integer_gas(&poly, &cfg)?,
        GasMode::Real => run_real_gas(&poly, &cfg)?,
    };
    print_trace_summary(&trace);
    write_trace_file(&trace, args.trace_out.as_deref(), &canonical)?;
    Ok(())
}

/// Scales and rounds the detection polynomial when an approximation factor
/// is requested; returns the working polynomial and the threshold scale.
fn scaled_poly(inst: &MimoInstance<f64>, factor: Option<f64>, rounding: Rounding) -> (Poly, f64) {
    let exact = build_mld_hubo(inst);
    match factor {
        Some(f) => (exact.integer_approximation(f, rounding), f),
        None => (exact, 1.0),
    }
}

/// Initial point for a policy, with thresholds evaluated against the
/// working polynomial (scaled when approximating).
fn initial_for_poly<R: Rng>(
    inst: &MimoInstance<f64>,
    poly: &Poly,
    scale: f64,
    policy: &ThresholdPolicy<f64>,
    rng: &mut R,
) -> Result<InitialPoint<f64>, CliError> {
    let n = inst.n();
    let random_bits = |rng: &mut R| gashubo::hubo::mask_to_bits(rng.gen_range(0..(1u64 << n)), n);
    let point = match policy {
        ThresholdPolicy::Random => {
            let bits = random_bits(rng);
            let y0 = poly.evaluate(&bits).expect("length");
            InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 1,
            }
        }
        ThresholdPolicy::MmseBased => {
            let bits = mmse_detect(inst)?;
            let y0 = poly.evaluate(&bits).expect("length");
            InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 1,
            }
        }
        ThresholdPolicy::Proposed { p } => {
            let bits = random_bits(rng);
            let y0 = proposed_threshold(inst.sigma2, inst.n_r, *p)? * scale;
            InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 0,
            }
        }
        ThresholdPolicy::Combination { p } => {
            let bits = mmse_detect(inst)?;
            let mmse_y = poly.evaluate(&bits).expect("length");
            let tail_y = proposed_threshold(inst.sigma2, inst.n_r, *p)? * scale;
            InitialPoint {
                threshold: mmse_y.min(tail_y),
                bits,
                classical_evaluations: 1,
            }
        }
    };
    Ok(point)
}

fn fig2_poly() -> Poly {
    HuboPolynomial::from_terms(
        3,
        [
            (Monomial::CONSTANT, 1.0),
            (Monomial::from_indices(&[0]), 1.0),
            (Monomial::from_indices(&[1, 2]), -2.0),
        ],
    )
}

fn fig5_poly() -> Poly {
    HuboPolynomial::from_terms(
        4,
        [
            (Monomial::CONSTANT, 1.0),
            (Monomial::from_indices(&[0]), 1.0),
            (Monomial::from_indices(&[1, 2, 3]), -1.8),
        ],
    )
}

fn solve_demo(demo: &str, args: &SolveArgs) -> Result<(), CliError> {
    match demo {
        "fig2" => {
            let poly = fig2_poly();
            let circ = PreparedCircuit::prepare(&poly, 0.0, 3)?;
            println!("joint distribution of (bits, value) after L Grover steps:");
            for l in 0..=2u64 {
                let state = circ.grover_power(l);
                print!("L={l}:");
                for key in 0..8u64 {
                    let value = poly.evaluate_mask(key) as i64;
                    let p = state.joint_probability(key, value);
                    if p > 1e-9 {
                        let bits = gashubo::hubo::mask_to_bits(key, 3);
                        print!(" ({},{value})={:.4}", bits_to_string(&bits), p);
                    }
                }
                println!();
            }
            let cfg = GasConfig::new(GasMode::Integer, args.seed);
            let trace = run_integer_gas(&poly, &cfg)?;
            print_trace_summary(&trace);
            Ok(())
        }
        "fig5" => {
            let poly = fig5_poly();
            let circ = PreparedCircuit::prepare(&poly, 0.0, 3)?;
            println!("P(bits=0111) after L Grover steps:");
            let good_key = gashubo::hubo::bits_to_mask(&[false, true, true, true]);
            for l in 0..=3u64 {
                let p = circ.grover_power(l).key_probability(good_key);
                println!("L={l}: {p:.4}");
            }
            let cfg = GasConfig::new(GasMode::Real, args.seed);
            let trace = run_real_gas(&poly, &cfg)?;
            print_trace_summary(&trace);
            Ok(())
        }
        "eq23" => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let snr = 10f64.powf(args.snr_db / 10.0);
            let inst = example_instance::<f64, _>(snr, &mut rng);
            let poly = build_mld_hubo(&inst);
            let quartic = poly.coefficient(Monomial::from_indices(&[0, 2, 4, 6]));
            println!("coefficient(b0 b2 b4 b6) = {quartic} (~{:.2})", quartic);
            let policy = parse_policy(&args.policy, args.p)?;
            let mut cfg = GasConfig::new(GasMode::Real, args.seed);
            cfg.qd_budget_multiplier = args.budget;
            cfg.no_improvement_limit = args.limit;
            let initial = initial_for_poly(&inst, &poly, 1.0, &policy, &mut rng)?;
            cfg.seed = rng.gen();
            let trace = run_gas_from(&poly, &cfg, initial)?;
            print_trace_summary(&trace);
            println!("tx_bits={}", bits_to_string(&inst.tx_bits));
            Ok(())
        }
        other => Err(CliError::Config(format!(
            "unknown demo {other:?} (fig2|fig5|eq23)"
        ))),
    }
}

pub fn fejer(args: FejerArgs) -> Result<(), CliError> {
    if args.m == 0 || args.m > 16 {
        return Err(CliError::Config("m must be between 1 and 16".into()));
    }
    let amps = fejer_amplitudes(args.a, args.m)?;
    let size = 1usize << args.m;
    println!("value probability");
    for raw in 0..size {
        // ascending two's-complement order: -2^(m-1) .. 2^(m-1)-1
        let raw = (raw + size / 2) % size;
        let value = decode_twos_complement(raw as u64, args.m);
        println!("{value} {}", amps[raw].norm_sqr());
    }
    Ok(())
}

pub fn gate_count(args: GateCountArgs) -> Result<(), CliError> {
    if let Some(path) = &args.poly {
        let poly = load_poly(path, None)?;
        let circ = PreparedCircuit::prepare(&poly, 0.0, args.m)?;
        let census = gashubo::analysis::census_circuit(&circ);
        let canonical = format!("gate-count poly={path} m={}", args.m);
        let mut out = String::new();
        out.push_str(&format!("# {}\n", header_comment(&canonical)));
        out.push_str("gate,measured\n");
        for (label, count) in census.rows() {
            out.push_str(&format!("{label},{count}\n"));
        }
        return emit(args.out.as_deref(), &out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let inst = if args.eq23 {
        example_instance::<f64, _>(1000.0, &mut rng)
    } else {
        let modulation = parse_modulation(&args.modulation)?;
        simulate_channel(args.nt, args.nr, modulation, 100.0, &mut rng)
    };
    let canonical = format!(
        "gate-count modulation={} nt={} nr={} m={} seed={} eq23={}",
        inst.modulation, inst.n_t, inst.n_r, args.m, args.seed, args.eq23
    );
    let report = verify_census(&inst, args.m)?;
    let mut buf = Vec::new();
    write_gates_csv(&report, &mut buf, Some(&header_comment(&canonical)))?;
    let outcome = match report.outcome {
        CensusOutcome::Match => "match",
        CensusOutcome::CancellationFlagged => "cancellation-flagged",
        CensusOutcome::Mismatch => "mismatch",
    };
    match args.out {
        Some(path) => {
            fs::write(&path, buf)?;
            println!("outcome: {outcome}");
            println!("wrote {path}");
        }
        None => {
            emit(None, &String::from_utf8(buf).expect("utf8"))?;
            println!("# outcome: {outcome}");
        }
    }
    Ok(())
}

pub fn ber(args: BerArgs) -> Result<(), CliError> {
    let modulation = parse_modulation(&args.modulation)?;
    let detectors: Vec<DetectorKind<f64>> = args
        .detectors
        .split(',')
        .map(|tok| {
            DetectorKind::parse(tok.trim())
                .ok_or_else(|| CliError::Config(format!("unknown detector {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    let snr_db_grid = parse_f64_list(&args.snr_db)?;
    let canonical = format!(
        "ber modulation={modulation} nt={} nr={} snr_db={} detectors={} trials={} min_errors={} seed={}",
        args.nt, args.nr, args.snr_db, args.detectors, args.trials, args.min_errors, args.seed
    );
    let cfg = BerConfig {
        modulation,
        n_t: args.nt,
        n_r: args.nr,
        snr_db_grid,
        detectors,
        max_trials: args.trials,
        min_bit_errors: args.min_errors,
        base_seed: args.seed,
    };
    let points = ber_sweep(&cfg)?;
    let mut buf = Vec::new();
    write_ber_csv(&points, &mut buf, Some(&header_comment(&canonical)))?;
    match args.out {
        Some(path) => {
            fs::write(&path, buf)?;
            println!("wrote {path}");
        }
        None => emit(None, &String::from_utf8(buf).expect("utf8"))?,
    }
    Ok(())
}

struct SweepSetup {
    modulation: Modulation,
    n_t: usize,
    n_r: usize,
    snr_db: f64,
    policies: Vec<ThresholdPolicy<f64>>,
    metric: SweepMetric,
    mode: GasMode,
    factor: Option<f64>,
    channel: ChannelModel,
    engine: GasEngine,
}

fn sweep_setup(args: &SweepArgs) -> Result<SweepSetup, CliError> {
    if let Some(fig) = &args.fig {
        let setup = match fig.as_str() {
            "8a" => SweepSetup {
                modulation: Modulation::Qpsk,
                n_t: 2,
                n_r: 2,
                snr_db: 30.0,
                policies: vec![ThresholdPolicy::Random],
                metric: SweepMetric::Objective,
                mode: GasMode::Integer,
                factor: Some(3.0),
                channel: ChannelModel::Random,
                engine: GasEngine::Statevector,
            },
            "8b" => SweepSetup {
                modulation: Modulation::Qam16,
                n_t: 2,
                n_r: 2,
                snr_db: 30.0,
                policies: vec![ThresholdPolicy::Random],
                metric: SweepMetric::Objective,
                mode: GasMode::Integer,
                factor: Some(14.0),
                channel: ChannelModel::FixedExample,
                engine: GasEngine::Statevector,
            },
            "9a" => SweepSetup {
                modulation: Modulation::Qpsk,
                n_t: 2,
                n_r: 2,
                snr_db: 30.0,
                policies: vec![ThresholdPolicy::Random],
                metric: SweepMetric::Objective,
                mode: GasMode::Real,
                factor: None,
                channel: ChannelModel::Random,
                engine: GasEngine::Statevector,
            },
            "9b" => SweepSetup {
                modulation: Modulation::Qam16,
                n_t: 2,
                n_r: 2,
                snr_db: 30.0,
                policies: vec![ThresholdPolicy::Random],
                metric: SweepMetric::Objective,
                mode: GasMode::Real,
                factor: None,
                channel: ChannelModel::FixedExample,
                engine: GasEngine::Statevector,
            },
            "11" => SweepSetup {
                modulation: Modulation::Qpsk,
                n_t: 2,
                n_r: 2,
                snr_db: 20.0,
                policies: vec![
                    ThresholdPolicy::Random,
                    ThresholdPolicy::MmseBased,
                    ThresholdPolicy::Proposed { p: 1e-3 },
                    ThresholdPolicy::Proposed { p: 1e-4 },
                    ThresholdPolicy::Combination { p: 1e-4 },
                ],
                metric: SweepMetric::BitErrorRate,
                mode: GasMode::Real,
                factor: None,
                channel: ChannelModel::Random,
                engine: GasEngine::Idealized,
            },
            "12" => SweepSetup {
                modulation: Modulation::Qam16,
                n_t: 2,
                n_r: 2,
                snr_db: 20.0,
                policies: vec![
                    ThresholdPolicy::Random,
                    ThresholdPolicy::MmseBased,
                    ThresholdPolicy::Proposed { p: 1e-3 },
                    ThresholdPolicy::Combination { p: 1e-3 },
                ],
                metric: SweepMetric::BitErrorRate,
                mode: GasMode::Real,
                factor: None,
                channel: ChannelModel::Random,
                engine: GasEngine::Idealized,
            },
            other => {
                return Err(CliError::Config(format!(
                    "unknown preset {other:?} (8a|8b|9a|9b|11|12)"
                )))
            }
        };
        return Ok(setup);
    }
    let metric = match args.metric.as_str() {
        "objective" => SweepMetric::Objective,
        "ber" => SweepMetric::BitErrorRate,
        other => return Err(CliError::Config(format!("unknown metric {other:?}"))),
    };
    Ok(SweepSetup {
        modulation: parse_modulation(&args.modulation)?,
        n_t: args.nt,
        n_r: args.nr,
        snr_db: args.snr_db,
        policies: args
            .policies
            .split(',')
            .map(|p| parse_policy(p.trim(), 1e-3))
            .collect::<Result<_, _>>()?,
        metric,
        mode: parse_mode(&args.mode)?,
        factor: args.factor,
        channel: if args.fixed_channel {
            ChannelModel::FixedExample
        } else {
            ChannelModel::Random
        },
        engine: if args.idealized {
            GasEngine::Idealized
        } else {
            GasEngine::Statevector
        },
    })
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let setup = sweep_setup(&args)?;
    let n = setup.n_t * setup.modulation.bits_per_symbol();
    let budget = (22.5 * 2f64.powi(n as i32).sqrt()).ceil() as u64;
    let max_cd = args.max_cd.unwrap_or(budget);
    let max_qd = args.max_qd.unwrap_or(budget);
    let canonical = format!(
        "sweep fig={:?} modulation={} nt={} nr={} snr_db={} policies={} metric={:?} mode={:?} factor={:?} fixed={} engine={:?} trials={} seed={} max_cd={max_cd} max_qd={max_qd}",
        args.fig,
        setup.modulation,
        setup.n_t,
        setup.n_r,
        setup.snr_db,
        setup.policies.iter().map(|p| p.label()).collect::<Vec<_>>().join("+"),
        setup.metric,
        setup.mode,
        setup.factor,
        setup.channel == ChannelModel::FixedExample,
        setup.engine,
        args.trials,
        args.seed,
    );
    let mut series = Vec::new();
    for policy in &setup.policies {
        let mut scenario = GasScenario::new(
            setup.modulation,
            setup.n_t,
            setup.n_r,
            setup.snr_db,
            *policy,
        );
        scenario.metric = setup.metric;
        scenario.mode = setup.mode;
        scenario.approx_factor = setup.factor;
        scenario.channel = setup.channel;
        scenario.engine = setup.engine;
        let records = query_sweep(&scenario, args.trials, args.seed, max_cd, max_qd)?;
        series.push((policy.label(), records));
    }
    let mut buf = Vec::new();
    write_sweep_csv(&series, &mut buf, Some(&header_comment(&canonical)))?;
    match args.out {
        Some(path) => {
            fs::write(&path, buf)?;
            println!("wrote {path}");
        }
        None => emit(None, &String::from_utf8(buf).expect("utf8"))?,
    }
    Ok(())
}

pub fn trace(args: TraceArgs) -> Result<(), CliError> {
    let poly = load_poly(&args.poly, args.n)?;
    let m = match args.m {
        Some(m) => m,
        None => {
            let b = poly.bounds();
            let widened = ValueBounds::new(b.e_min.min(args.y), b.e_max.max(args.y));
            required_qubits_m(&widened) as usize
        }
    };
    let circ = PreparedCircuit::prepare(&poly, args.y, m)?;
    let mut out = String::new();
    out.push_str(&format!("m {m}\n"));
    out.push_str(&format!("y {}\n", args.y));
    for rotation in circ.rotations() {
        out.push_str(&format!("{}", rotation.theta / std::f64::consts::PI));
        for idx in rotation.controls.indices() {
            out.push_str(&format!(" {idx}"));
        }
        out.push('\n');
    }
    if args.amplitudes {
        let state = circ.grover_power(args.grover);
        for (i, amp) in state.amps().iter().enumerate() {
            out.push_str(&format!("{i} {} {}\n", amp.re, amp.im));
        }
    }
    emit(args.out.as_deref(), &out)
}

#[allow(clippy::too_many_arguments)]
pub fn instance_gen(
    modulation: String,
    nt: usize,
    nr: usize,
    snr_db: f64,
    seed: u64,
    eq23: bool,
    out: Option<String>,
) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let snr = 10f64.powf(snr_db / 10.0);
    let inst = if eq23 {
        example_instance::<f64, _>(snr, &mut rng)
    } else {
        let modulation = parse_modulation(&modulation)?;
        simulate_channel(nt, nr, modulation, snr, &mut rng)
    };
    let json = instance_to_json(&inst);
    emit(out.as_deref(), &(json + "\n"))
}

pub fn instance_load(file: String, detector: Option<String>) -> Result<(), CliError> {
    let text = fs::read_to_string(&file)?;
    let inst: MimoInstance<f64> = instance_from_json(&text)?;
    println!(
        "modulation={} nt={} nr={} n={} sigma2={} snr_db={:.2}",
        inst.modulation,
        inst.n_t,
        inst.n_r,
        inst.n(),
        inst.sigma2,
        10.0 * inst.snr().log10()
    );
    println!("tx_bits={}", bits_to_string(&inst.tx_bits));
    if let Some(name) = detector {
        let kind = DetectorKind::<f64>::parse(&name)
            .ok_or_else(|| CliError::Config(format!("unknown detector {name:?}")))?;
        let decided = run_detector(&inst, &kind)?;
        let errors = decided
            .iter()
            .zip(&inst.tx_bits)
            .filter(|(a, b)| a != b)
            .count();
        println!(
            "detector={name} decided={} bit_errors={errors}",
            bits_to_string(&decided)
        );
    }
    Ok(())
}
