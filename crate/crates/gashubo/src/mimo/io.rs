//! JSON serialization of detection instances so the CLI can pin fixtures.
//!
//! Complex numbers are written as `[re, im]` pairs and bits as a `0`/`1`
//! string, always in double precision regardless of the in-memory scalar.

use std::error::Error;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::linalg::CMatrix;
use super::{MimoInstance, Modulation};
use crate::hubo::{bits_from_string, bits_to_string};
use crate::Scalar;

#[derive(Debug)]
pub enum InstanceIoError {
    Json(serde_json::Error),
    Invalid(String),
}

impl fmt::Display for InstanceIoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceIoError::Json(e) => write!(f, "instance JSON: {e}"),
            InstanceIoError::Invalid(msg) => write!(f, "invalid instance: {msg}"),
        }
    }
}

impl Error for InstanceIoError {}

impl From<serde_json::Error> for InstanceIoError {
    fn from(e: serde_json::Error) -> Self {
        InstanceIoError::Json(e)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n_t: usize,
    n_r: usize,
    modulation: String,
    h: Vec<Vec<[f64; 2]>>,
    sigma2: f64,
    tx_bits: String,
    r: Vec<[f64; 2]>,
}

/// Serializes an instance as pretty JSON.
pub fn instance_to_json<T: Scalar>(inst: &MimoInstance<T>) -> String {
    let to_pair = |z: &Complex<T>| [z.re.to_f64().unwrap(), z.im.to_f64().unwrap()];
    let h = (0..inst.n_r)
        .map(|u| {
            (0..inst.n_t)
                .map(|t| to_pair(&inst.channel[(u, t)]))
                .collect()
        })
        .collect();
    let file = InstanceFile {
        n_t: inst.n_t,
        n_r: inst.n_r,
        modulation: inst.modulation.to_string(),
        h,
        sigma2: inst.sigma2.to_f64().unwrap(),
        tx_bits: bits_to_string(&inst.tx_bits),
        r: inst.received.iter().map(to_pair).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// Parses and validates an instance from JSON.
pub fn instance_from_json<T: Scalar>(text: &str) -> Result<MimoInstance<T>, InstanceIoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let modulation: Modulation = file.modulation.parse().map_err(InstanceIoError::Invalid)?;
    if file.h.len() != file.n_r || file.h.iter().any(|row| row.len() != file.n_t) {
        return Err(InstanceIoError::Invalid(format!(
            "channel matrix must be {} x {}",
            file.n_r, file.n_t
        )));
    }
    if file.r.len() != file.n_r {
        return Err(InstanceIoError::Invalid(format!(
            "received vector must have {} entries",
            file.n_r
        )));
    }
    let n = file.n_t * modulation.bits_per_symbol();
    let tx_bits = bits_from_string(&file.tx_bits)
        .ok_or_else(|| InstanceIoError::Invalid("tx_bits must be a 0/1 string".into()))?;
    if tx_bits.len() != n {
        return Err(InstanceIoError::Invalid(format!(
            "tx_bits must have {n} bits"
        )));
    }
    if file.sigma2 <= 0.0 {
        return Err(InstanceIoError::Invalid("sigma2 must be positive".into()));
    }
    let mut channel = CMatrix::zeros(file.n_r, file.n_t);
    for (u, row) in file.h.iter().enumerate() {
        for (t, pair) in row.iter().enumerate() {
            channel[(u, t)] = Complex::new(T::of(pair[0]), T::of(pair[1]));
        }
    }
    let received = file
        .r
        .iter()
        .map(|pair| Complex::new(T::of(pair[0]), T::of(pair[1])))
        .collect();
    Ok(MimoInstance {
        n_t: file.n_t,
        n_r: file.n_r,
        modulation,
        channel,
        sigma2: T::of(file.sigma2),
        tx_bits,
        received,
    })
}
