//! Exit-code mapping, config fingerprints and artifact writing.

use std::fmt;
use std::fs;
use std::io::Write;

use gashubo::analysis::AnalysisError;
use gashubo::gas::GasError;
use gashubo::hubo::HuboError;
use gashubo::mimo::io::InstanceIoError;
use gashubo::mimo::MimoError;
use gashubo::quantum::QuantumError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2.
    Config(String),
    /// The computation itself failed; exit code 3.
    Numerical(String),
    /// Filesystem trouble; exit code 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<HuboError> for CliError {
    fn from(e: HuboError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<GasError> for CliError {
    fn from(e: GasError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MimoError> for CliError {
    fn from(e: MimoError) -> Self {
        match e {
            MimoError::SingularChannel => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<InstanceIoError> for CliError {
    fn from(e: InstanceIoError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Mimo(m) => m.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

/// Comment line embedded at the top of every CSV artifact: tool version,
/// a config fingerprint, and the canonical config itself.
pub fn header_comment(canonical: &str) -> String {
    format!(
        "gashubo {} fingerprint={:016x} {}",
        env!("CARGO_PKG_VERSION"),
        fnv1a64(canonical.as_bytes()),
        canonical
    )
}

/// Writes to the file when a path is given, otherwise to stdout.
pub fn emit(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, content)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}
