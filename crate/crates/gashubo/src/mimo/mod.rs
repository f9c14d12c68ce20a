//! Maximum-likelihood detection of spatially multiplexed Gray-coded
//! symbols, posed as a binary optimization problem.
//!
//! A [`MimoInstance`] bundles one detection problem: the channel matrix,
//! noise level, transmitted bits and received vector. [`build_mld_hubo`]
//! expands its residual-norm objective into a
//! [`HuboPolynomial`](crate::hubo::HuboPolynomial) whose argmin is the ML
//! decision; [`mld_exhaustive`] computes the same argmin straight from the
//! norm as the independent oracle. Linear equalizers and the
//! initial-threshold policies for the solver live in [`detect`](mod@detect)
//! and [`threshold`].

use std::error::Error;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub mod builder;
pub mod detect;
pub mod io;
pub mod linalg;
pub mod mapping;
pub mod threshold;

pub use builder::{build_mld_hubo, build_mld_hubo_with_stats, symbol_component_polys, BuildStats};
pub use detect::{
    detect, hubo_argmin, integer_approx_argmin, mmse_detect, zf_detect, DetectorKind,
};
pub use linalg::CMatrix;
pub use mapping::{demap_symbol, demap_symbols_to_bits, map_bits_to_symbols, map_symbol};
pub use threshold::{
    erlang_min_cdf, initial_threshold, lambert_w_minus1, proposed_threshold, ThresholdPolicy,
};

use crate::hubo::{bits_to_mask, mask_to_bits};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum MimoError {
    /// Bit-vector length incompatible with the modulation/antenna setup.
    BitLength { expected: usize, actual: usize },
    /// The channel Gram matrix could not be inverted.
    SingularChannel,
    /// The threshold probability must lie strictly inside (0, 1).
    InvalidProbability,
    /// Exhaustive detection over too many bits.
    SearchTooLarge { n: usize, max: usize },
}

impl fmt::Display for MimoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MimoError::BitLength { expected, actual } => {
                write!(
                    f,
                    "bit-vector length {actual} incompatible (expected multiple/total {expected})"
                )
            }
            MimoError::SingularChannel => write!(f, "channel matrix is numerically singular"),
            MimoError::InvalidProbability => write!(f, "probability must be in (0, 1)"),
            MimoError::SearchTooLarge { n, max } => {
                write!(
                    f,
                    "exhaustive search over {n} bits exceeds the cap of {max}"
                )
            }
        }
    }
}

impl Error for MimoError {}

/// Constellation choices, Gray-coded per the 5G NR tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [
        Modulation::Bpsk,
        Modulation::Qpsk,
        Modulation::Qam16,
        Modulation::Qam64,
    ];

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    /// Constellation size `L_c`.
    pub fn order(self) -> usize {
        1 << self.bits_per_symbol()
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam64 => "qam64",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            "qam16" | "16qam" => Ok(Modulation::Qam16),
            "qam64" | "64qam" => Ok(Modulation::Qam64),
            other => Err(format!("unknown modulation {other:?}")),
        }
    }
}

/// One detection problem: `r = H s / sqrt(n_t) + sigma v`.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoInstance<T> {
    pub n_t: usize,
    pub n_r: usize,
    pub modulation: Modulation,
    pub channel: CMatrix<T>,
    pub sigma2: T,
    pub tx_bits: Vec<bool>,
    pub received: Vec<Complex<T>>,
}

impl<T: Scalar> MimoInstance<T> {
    /// Number of binary variables, `n = n_t * log2(L_c)`.
    pub fn n(&self) -> usize {
        self.n_t * self.modulation.bits_per_symbol()
    }

    /// Linear SNR, `gamma = 1 / sigma^2`.
    pub fn snr(&self) -> T {
        T::one() / self.sigma2
    }
}

/// Draws one standard complex Gaussian CN(0, 1).
fn standard_complex_gaussian<T: Scalar, R: Rng>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::of(re), T::of(im)) * T::FRAC_1_SQRT_2()
}

/// Generates a Rayleigh flat-fading instance: channel and noise entries
/// CN(0, 1), uniform transmit bits, `sigma = 1/sqrt(snr)`.
pub fn simulate_channel<T: Scalar, R: Rng>(
    n_t: usize,
    n_r: usize,
    modulation: Modulation,
    snr: T,
    rng: &mut R,
) -> MimoInstance<T> {
    assert!(snr > T::zero(), "linear SNR must be positive");
    let mut channel = CMatrix::zeros(n_r, n_t);
    for u in 0..n_r {
        for t in 0..n_t {
            channel[(u, t)] = standard_complex_gaussian(rng);
        }
    }
    let n = n_t * modulation.bits_per_symbol();
    assert!(n < 64, "too many transmit bits");
    let tx_bits = mask_to_bits(rng.gen_range(0..(1u64 << n)), n);
    transmit_over(channel, modulation, tx_bits, snr, rng)
}

/// Builds an instance over a fixed channel and fixed transmit bits,
/// drawing fresh noise.
pub fn transmit_over<T: Scalar, R: Rng>(
    channel: CMatrix<T>,
    modulation: Modulation,
    tx_bits: Vec<bool>,
    snr: T,
    rng: &mut R,
) -> MimoInstance<T> {
    let n_r = channel.rows();
    let n_t = channel.cols();
    assert_eq!(tx_bits.len(), n_t * modulation.bits_per_symbol());
    let sigma2 = T::one() / snr;
    let sigma = sigma2.sqrt();
    let symbols = map_bits_to_symbols(&tx_bits, modulation).expect("validated length");
    let faded = channel.mul_vec(&symbols);
    let inv_sqrt_nt = T::one() / T::of_usize(n_t).sqrt();
    let received = faded
        .iter()
        .map(|&x| x * inv_sqrt_nt + standard_complex_gaussian(rng) * sigma)
        .collect();
    MimoInstance {
        n_t,
        n_r,
        modulation,
        channel,
        sigma2,
        tx_bits,
        received,
    }
}

/// The fixed 2x2 channel used by the worked 16-QAM example.
pub fn example_channel<T: Scalar>() -> CMatrix<T> {
    let c = |re: f64, im: f64| Complex::new(T::of(re), T::of(im));
    CMatrix::from_rows(&[
        vec![
            c(0.748510757437062, -0.014877263039446401),
            c(1.3215983896521515, 0.06298233870206783),
        ],
        vec![
            c(0.6371630706424066, -0.14262155021296025),
            c(-0.3888005272494009, -0.15170387681055802),
        ],
    ])
}

/// The fixed input bits `00110101` paired with [`example_channel`].
pub fn example_tx_bits() -> Vec<bool> {
    crate::hubo::bits_from_string("00110101").expect("literal")
}

/// 16-QAM instance over the fixed example channel and bits.
pub fn example_instance<T: Scalar, R: Rng>(snr: T, rng: &mut R) -> MimoInstance<T> {
    transmit_over(
        example_channel(),
        Modulation::Qam16,
        example_tx_bits(),
        snr,
        rng,
    )
}

/// Residual-norm objective `||r - H M(b) / sqrt(n_t)||^2`, computed
/// directly from the instance. This is the reference the polynomial
/// expansion is verified against.
pub fn objective<T: Scalar>(inst: &MimoInstance<T>, bits: &[bool]) -> Result<T, MimoError> {
    if bits.len() != inst.n() {
        return Err(MimoError::BitLength {
            expected: inst.n(),
            actual: bits.len(),
        });
    }
    Ok(objective_mask(inst, bits_to_mask(bits)))
}

fn objective_mask<T: Scalar>(inst: &MimoInstance<T>, mask: u64) -> T {
    let bits = mask_to_bits(mask, inst.n());
    let symbols = map_bits_to_symbols(&bits, inst.modulation).expect("length by construction");
    let faded = inst.channel.mul_vec(&symbols);
    let inv_sqrt_nt = T::one() / T::of_usize(inst.n_t).sqrt();
    inst.received
        .iter()
        .zip(&faded)
        .map(|(&r, &f)| (r - f * inv_sqrt_nt).norm_sqr())
        .sum()
}

/// Exhaustive maximum-likelihood detection over all `2^n` bit patterns,
/// minimizing the residual norm directly (lexicographically-smallest
/// argmin on ties).
pub fn mld_exhaustive<T: Scalar>(inst: &MimoInstance<T>) -> Result<Vec<bool>, MimoError> {
    let n = inst.n();
    if n > crate::hubo::MAX_BRUTE_FORCE_VARS {
        return Err(MimoError::SearchTooLarge {
            n,
            max: crate::hubo::MAX_BRUTE_FORCE_VARS,
        });
    }
    let mut best_mask = 0u64;
    let mut best_value = objective_mask(inst, 0);
    for mask in 1..(1u64 << n) {
        let v = objective_mask(inst, mask);
        if v < best_value || (v == best_value && lex_before(mask, best_mask, n)) {
            best_value = v;
            best_mask = mask;
        }
    }
    Ok(mask_to_bits(best_mask, n))
}

fn lex_before(a: u64, b: u64, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    (a.reverse_bits() >> (64 - n)) < (b.reverse_bits() >> (64 - n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_received_vector_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // huge SNR stands in for the sigma -> 0 limit
        let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, 1e18, &mut rng);
        let e = objective(&inst, &inst.tx_bits).unwrap();
        assert!(e < 1e-15, "residual {e}");
    }

    #[test]
    fn channel_entries_have_unit_average_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut acc = 0.0;
        let draws = 100_000;
        for _ in 0..draws {
            acc += standard_complex_gaussian::<f64, _>(&mut rng).norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean power {mean}");
    }

    #[test]
    fn example_channel_is_verbatim() {
        let h = example_channel::<f64>();
        assert_eq!(h[(0, 0)].re, 0.748510757437062);
        assert_eq!(h[(0, 0)].im, -0.014877263039446401);
        assert_eq!(h[(1, 1)].re, -0.3888005272494009);
        assert_eq!(example_tx_bits().len(), 8);
    }

    #[test]
    fn exhaustive_mld_recovers_noiseless_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, 1e12, &mut rng);
            assert_eq!(mld_exhaustive(&inst).unwrap(), inst.tx_bits);
        }
    }

    #[test]
    fn objective_at_truth_matches_noise_norm_statistics() {
        // E(tx) = sigma^2 ||v||^2 follows Erlang(n_r, snr); check the mean
        // n_r * sigma^2 to a few percent.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let snr = 100.0;
        let trials = 20_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, snr, &mut rng);
            acc += objective(&inst, &inst.tx_bits).unwrap();
        }
        let mean = acc / trials as f64;
        let expect = 2.0 / snr;
        assert!(
            (mean - expect).abs() < 0.1 * expect,
            "mean {mean} vs {expect}"
        );
    }

    #[test]
    fn modulation_parsing() {
        assert_eq!("qpsk".parse::<Modulation>().unwrap(), Modulation::Qpsk);
        assert_eq!("16QAM".parse::<Modulation>().unwrap(), Modulation::Qam16);
        assert!("qam512".parse::<Modulation>().is_err());
        assert_eq!(Modulation::Qam64.order(), 64);
        assert_eq!(Modulation::Qam64.to_string(), "qam64");
    }
}
