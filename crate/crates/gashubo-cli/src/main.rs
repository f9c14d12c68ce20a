//! Reproduction driver: seeded experiment configs in, CSV/trace artifacts
//! out. Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "gashubo",
    version,
    about = "Grover adaptive search over real-valued HUBO objectives, with a MIMO detection front end"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run GAS on a polynomial file, a generated detection instance, or a
    /// named demo.
    Solve(SolveArgs),
    /// Print the value-register distribution for a phase-encoded real value.
    Fejer(FejerArgs),
    /// Compare measured circuit gate counts against the closed-form
    /// predictions.
    GateCount(GateCountArgs),
    /// Paired Monte-Carlo bit-error-rate table over detectors.
    Ber(BerArgs),
    /// Query-complexity sweep curves (CD and QD domains).
    Sweep(SweepArgs),
    /// Dump the prepared circuit (rotations, optionally amplitudes).
    Trace(TraceArgs),
    /// Generate or inspect detection instances.
    Instance(InstanceArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Polynomial file (`coeff i1 i2 ...` per line).
    #[arg(long, conflicts_with_all = ["mimo", "demo"])]
    poly: Option<String>,
    /// Variable count override for --poly (default: inferred).
    #[arg(long)]
    n: Option<usize>,
    /// Generate a detection instance with this modulation instead.
    #[arg(long, conflicts_with = "demo")]
    mimo: Option<String>,
    #[arg(long, default_value_t = 2)]
    nt: usize,
    #[arg(long, default_value_t = 2)]
    nr: usize,
    #[arg(long, default_value_t = 20.0)]
    snr_db: f64,
    /// Initial threshold policy: random | mmse | proposed | combination
    /// (the latter two take P from --p, or inline as proposed:P).
    #[arg(long, default_value = "random")]
    policy: String,
    /// Tail probability for the proposed/combination policies.
    #[arg(long, default_value_t = 1e-3)]
    p: f64,
    /// Named demo: fig2 | fig5 | eq23.
    #[arg(long)]
    demo: Option<String>,
    /// integer | real.
    #[arg(long, default_value = "real")]
    mode: String,
    /// Scale coefficients by this factor and round to integers first.
    #[arg(long)]
    factor: Option<f64>,
    /// Rounding for --factor: nearest | floor.
    #[arg(long, default_value = "nearest")]
    round: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// QD budget multiplier (applied to sqrt(2^n)).
    #[arg(long, default_value_t = 22.5)]
    budget: f64,
    /// Consecutive non-improvement limit.
    #[arg(long, default_value_t = 20)]
    limit: usize,
    /// Write the per-iteration trace CSV here.
    #[arg(long)]
    trace_out: Option<String>,
}

#[derive(Debug, Args)]
struct FejerArgs {
    /// Value-register qubits.
    #[arg(long)]
    m: usize,
    /// Real value to encode; must satisfy -2^(m-1) <= a < 2^(m-1).
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
}

#[derive(Debug, Args)]
struct GateCountArgs {
    /// Census a polynomial file instead of a generated instance (measured
    /// counts only; predictions need a modulation).
    #[arg(long)]
    poly: Option<String>,
    #[arg(long, default_value = "qpsk")]
    modulation: String,
    #[arg(long, default_value_t = 2)]
    nt: usize,
    #[arg(long, default_value_t = 2)]
    nr: usize,
    /// Value-register qubits for the prepared circuit.
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use the fixed 16-QAM 2x2 example channel instead of a random one.
    #[arg(long)]
    eq23: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct BerArgs {
    #[arg(long, default_value = "qpsk")]
    modulation: String,
    #[arg(long, default_value_t = 2)]
    nt: usize,
    #[arg(long, default_value_t = 2)]
    nr: usize,
    /// Comma-separated SNR grid in dB.
    #[arg(long, default_value = "5,10,15,20")]
    snr_db: String,
    /// Comma-separated detectors: zf | mmse | mld | hubo | int:F.
    #[arg(long, default_value = "zf,mmse,mld,hubo")]
    detectors: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Early-stop once every detector has this many bit errors (0 = off).
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Experiment preset: 8a | 8b | 9a | 9b | 11 | 12.
    #[arg(long)]
    fig: Option<String>,
    #[arg(long, default_value = "qpsk")]
    modulation: String,
    #[arg(long, default_value_t = 2)]
    nt: usize,
    #[arg(long, default_value_t = 2)]
    nr: usize,
    #[arg(long, default_value_t = 20.0)]
    snr_db: f64,
    /// Comma-separated policies: random | mmse | proposed:P | combination:P.
    #[arg(long, default_value = "random")]
    policies: String,
    /// objective | ber.
    #[arg(long, default_value = "objective")]
    metric: String,
    /// integer | real.
    #[arg(long, default_value = "real")]
    mode: String,
    /// Integer-approximation factor (switches the run to a scaled integer
    /// polynomial).
    #[arg(long)]
    factor: Option<f64>,
    /// Use the fixed 16-QAM example channel and bits.
    #[arg(long)]
    fixed_channel: bool,
    /// Replace the statevector by the idealized sampler (exact marking,
    /// sine-law amplification), as in the threshold-policy study.
    #[arg(long)]
    idealized: bool,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    max_cd: Option<u64>,
    #[arg(long)]
    max_qd: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    /// Polynomial file.
    #[arg(long)]
    poly: String,
    #[arg(long)]
    n: Option<usize>,
    /// Threshold folded into the circuit constant.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    y: f64,
    /// Value-register qubits (default: sized from the bounds).
    #[arg(long)]
    m: Option<usize>,
    /// Apply this many Grover steps before dumping amplitudes.
    #[arg(long, default_value_t = 0)]
    grover: u64,
    /// Also dump amplitudes as `index real imag` lines.
    #[arg(long)]
    amplitudes: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    #[command(subcommand)]
    action: InstanceAction,
}

#[derive(Debug, Subcommand)]
enum InstanceAction {
    /// Generate an instance and write it as JSON.
    Gen {
        #[arg(long, default_value = "qpsk")]
        modulation: String,
        #[arg(long, default_value_t = 2)]
        nt: usize,
        #[arg(long, default_value_t = 2)]
        nr: usize,
        #[arg(long, default_value_t = 20.0)]
        snr_db: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Use the fixed 16-QAM 2x2 example channel and bits.
        #[arg(long)]
        eq23: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Load an instance, print a summary, optionally run a detector.
    Load {
        #[arg(long)]
        file: String,
        /// zf | mmse | mld | hubo | int:F.
        #[arg(long)]
        detect: Option<String>,
    },
}

fn main() -> ExitCode {
    // die quietly on a closed pipe instead of panicking mid-CSV
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Fejer(args) => commands::fejer(args),
        Command::GateCount(args) => commands::gate_count(args),
        Command::Ber(args) => commands::ber(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Trace(args) => commands::trace(args),
        Command::Instance(args) => match args.action {
            InstanceAction::Gen {
                modulation,
                nt,
                nr,
                snr_db,
                seed,
                eq23,
                out,
            } => commands::instance_gen(modulation, nt, nr, snr_db, seed, eq23, out),
            InstanceAction::Load { file, detect } => commands::instance_load(file, detect),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
