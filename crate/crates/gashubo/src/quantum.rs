//! Statevector simulation of the GAS circuit family.
//!
//! The register layout is `n` key qubits (the binary variables) plus `m`
//! value qubits (a two's-complement accumulator). A basis index packs the
//! value register into the low `m` bits and variable `t` into index bit
//! `m + t`. The state preparation operator consists of a Hadamard wall,
//! one controlled phase ladder per polynomial term (angle
//! `2π·coeff/2^m`, controls = the term's variables) and an exact inverse
//! Fourier transform on the value register, after which the value register
//! holds `E(b) - y`: a computational-basis state for integer coefficients,
//! a Fejér-distributed superposition for real ones.

use std::error::Error;
use std::fmt;

use num_complex::Complex;
use rand::Rng;

use crate::hubo::{mask_to_bits, HuboPolynomial, Monomial};
use crate::Scalar;

/// Hard cap on total qubits; 2^26 amplitudes is already a gigabyte.
pub const MAX_TOTAL_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumError {
    /// The value register must have at least one qubit.
    InvalidValueQubits,
    /// Requested register does not fit in memory.
    RegisterTooLarge { qubits: usize, max: usize },
    /// A real value cannot be encoded in an `m`-qubit two's-complement
    /// register: it must satisfy `-2^(m-1) <= a < 2^(m-1)`.
    ValueOutOfRange { a: f64, m: usize },
    /// The rotation-count formula needs `1 <= solutions <= space`.
    InvalidSolutionCount { space: u64, solutions: u64 },
}

impl fmt::Display for QuantumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantumError::InvalidValueQubits => {
                write!(f, "value register needs at least one qubit")
            }
            QuantumError::RegisterTooLarge { qubits, max } => {
                write!(f, "{qubits} qubits exceed the simulation cap of {max}")
            }
            QuantumError::ValueOutOfRange { a, m } => {
                write!(
                    f,
                    "value {a} does not fit an {m}-qubit two's-complement register"
                )
            }
            QuantumError::InvalidSolutionCount { space, solutions } => {
                write!(
                    f,
                    "solution count {solutions} invalid for search space {space}"
                )
            }
        }
    }
}

impl Error for QuantumError {}

/// Decodes an `m`-bit raw register value as a two's-complement integer.
pub fn decode_twos_complement(raw: u64, m: usize) -> i64 {
    debug_assert!(raw < (1 << m));
    if raw >= 1 << (m - 1) {
        raw as i64 - (1i64 << m)
    } else {
        raw as i64
    }
}

/// Encodes a signed integer into `m` bits (must be representable).
pub fn encode_twos_complement(value: i64, m: usize) -> u64 {
    let half = 1i64 << (m - 1);
    assert!(
        -half <= value && value < half,
        "{value} does not fit {m} bits"
    );
    (value.rem_euclid(1 << m)) as u64
}

/// One controlled phase ladder of the state preparation: applies phase
/// `e^(j·theta·v)` to the value register (`v` its integer content) when all
/// control variables are 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRotation<T> {
    pub theta: T,
    pub controls: Monomial,
}

/// Result of sampling a state: decoded key bits and the signed integer in
/// the value register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementOutcome {
    pub key_bits: Vec<bool>,
    pub value: i64,
}

/// Complex amplitudes over `n_key + n_val` qubits.
#[derive(Debug, Clone)]
pub struct Statevector<T> {
    n_key: usize,
    n_val: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> Statevector<T> {
    /// `|0...0>` on `n_key + n_val` qubits.
    pub fn zero_state(n_key: usize, n_val: usize) -> Self {
        assert!(n_key + n_val <= MAX_TOTAL_QUBITS, "register too large");
        assert!(n_val >= 1, "value register needs at least one qubit");
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << (n_key + n_val)];
        amps[0] = Complex::new(T::one(), T::zero());
        Statevector { n_key, n_val, amps }
    }

    pub fn n_key(&self) -> usize {
        self.n_key
    }

    pub fn n_val(&self) -> usize {
        self.n_val
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// Basis index for a key assignment (variable bitmask) and a raw value
    /// register content.
    pub fn index_of(&self, key_mask: u64, raw_value: u64) -> usize {
        debug_assert!(self.n_key == 64 || key_mask >> self.n_key == 0);
        debug_assert!(raw_value >> self.n_val == 0);
        ((key_mask << self.n_val) | raw_value) as usize
    }

    /// Splits a basis index into (key mask, raw value register).
    pub fn decode_index(&self, index: usize) -> (u64, u64) {
        let raw = index as u64 & ((1 << self.n_val) - 1);
        (index as u64 >> self.n_val, raw)
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of measuring the given key assignment, marginalized over
    /// the value register.
    pub fn key_probability(&self, key_mask: u64) -> T {
        let base = self.index_of(key_mask, 0);
        self.amps[base..base + (1 << self.n_val)]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Probability of the joint outcome (key assignment, signed value).
    pub fn joint_probability(&self, key_mask: u64, value: i64) -> T {
        let raw = encode_twos_complement(value, self.n_val);
        self.amps[self.index_of(key_mask, raw)].norm_sqr()
    }

    /// Conditional value-register amplitudes for a fixed key assignment,
    /// rescaled to unit norm (the uniform key factor is divided out).
    pub fn conditional_value_amps(&self, key_mask: u64) -> Vec<Complex<T>> {
        let base = self.index_of(key_mask, 0);
        let block = &self.amps[base..base + (1 << self.n_val)];
        let norm = block.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        block.iter().map(|a| a / norm).collect()
    }

    /// One Hadamard per qubit.
    pub fn hadamard_wall(&mut self) {
        let inv_sqrt2 = T::FRAC_1_SQRT_2();
        let total = self.n_key + self.n_val;
        for q in 0..total {
            let stride = 1usize << q;
            let mut i = 0;
            while i < self.amps.len() {
                for j in i..i + stride {
                    let a = self.amps[j];
                    let b = self.amps[j + stride];
                    self.amps[j] = (a + b) * inv_sqrt2;
                    self.amps[j + stride] = (a - b) * inv_sqrt2;
                }
                i += stride << 1;
            }
        }
    }

    /// Applies the phase ladder `e^(j·theta·v)` controlled on the key
    /// variables in `controls`.
    pub fn apply_phase_ladder(&mut self, controls: Monomial, theta: T) {
        let table = phase_table(theta, self.n_val);
        self.apply_phase_table(controls, &table);
    }

    fn apply_phase_table(&mut self, controls: Monomial, table: &[Complex<T>]) {
        debug_assert_eq!(table.len(), 1 << self.n_val);
        let ctrl = controls.mask() << self.n_val;
        let val_mask = (1u64 << self.n_val) - 1;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let i = i as u64;
            if i & ctrl == ctrl {
                *amp *= table[(i & val_mask) as usize];
            }
        }
    }

    /// As [`Self::apply_phase_table`] with the conjugated (inverse) phases.
    fn apply_phase_table_conj(&mut self, controls: Monomial, table: &[Complex<T>]) {
        debug_assert_eq!(table.len(), 1 << self.n_val);
        let ctrl = controls.mask() << self.n_val;
        let val_mask = (1u64 << self.n_val) - 1;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let i = i as u64;
            if i & ctrl == ctrl {
                *amp *= table[(i & val_mask) as usize].conj();
            }
        }
    }

    /// Exact inverse Fourier transform on the value register (kernel
    /// `e^(-2πi·a·l/2^m)/sqrt(2^m)`), applied blockwise per key state.
    pub fn iqft_value(&mut self) {
        self.fourier_value(-T::one());
    }

    /// Inverse of [`Self::iqft_value`].
    pub fn qft_value(&mut self) {
        self.fourier_value(T::one());
    }

    fn fourier_value(&mut self, sign: T) {
        let block = 1usize << self.n_val;
        for chunk in self.amps.chunks_mut(block) {
            fourier_block(chunk, sign);
        }
    }

    /// Phase-flips every basis state whose value register is negative,
    /// i.e. whose two's-complement sign qubit is 1.
    pub fn apply_oracle(&mut self) {
        let sign_bit = 1u64 << (self.n_val - 1);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i as u64 & sign_bit != 0 {
                *amp = -*amp;
            }
        }
    }

    /// The computational-basis reflection `D`: identity on `|0...0>`,
    /// negation elsewhere.
    pub fn apply_diffusion(&mut self) {
        for amp in self.amps.iter_mut().skip(1) {
            *amp = -*amp;
        }
    }

    /// Samples a basis state with probability `|amp|^2` and decodes it.
    /// The state is not collapsed; GAS re-prepares it each iteration.
    pub fn measure<R: Rng>(&self, rng: &mut R) -> MeasurementOutcome {
        let u = T::of(rng.gen::<f64>());
        let mut acc = T::zero();
        let mut chosen = self.amps.len() - 1;
        for (i, amp) in self.amps.iter().enumerate() {
            acc += amp.norm_sqr();
            if u < acc {
                chosen = i;
                break;
            }
        }
        let (key_mask, raw) = self.decode_index(chosen);
        MeasurementOutcome {
            key_bits: mask_to_bits(key_mask, self.n_key),
            value: decode_twos_complement(raw, self.n_val),
        }
    }

    #[cfg(debug_assertions)]
    fn debug_check_normalized(&self) {
        // Tolerance scales with the type so f32 accumulation noise does not
        // trip the check; f64 stays at the 1e-9 contract.
        let tol = T::of(1e-9).max(T::epsilon() * T::of_usize(self.amps.len()) * T::of(16.0));
        let drift = (self.norm_sqr() - T::one()).abs();
        debug_assert!(drift < tol, "state norm drifted by {drift:?}");
    }

    #[cfg(not(debug_assertions))]
    fn debug_check_normalized(&self) {}
}

fn phase_table<T: Scalar>(theta: T, n_val: usize) -> Vec<Complex<T>> {
    (0..1usize << n_val)
        .map(|v| Complex::from_polar(T::one(), theta * T::of_usize(v)))
        .collect()
}

/// In-place radix-2 transform `X_a = (1/sqrt(M)) Σ_l x_l e^(sign·2πi·a·l/M)`.
fn fourier_block<T: Scalar>(block: &mut [Complex<T>], sign: T) {
    let len = block.len();
    debug_assert!(len.is_power_of_two());
    let bits = len.trailing_zeros();
    for i in 0..len {
        let j = (i as u64).reverse_bits() >> (64 - bits);
        let j = j as usize;
        if j > i {
            block.swap(i, j);
        }
    }
    let mut width = 2;
    while width <= len {
        let step = sign * T::of(2.0) * T::PI() / T::of_usize(width);
        let w_step = Complex::from_polar(T::one(), step);
        for start in (0..len).step_by(width) {
            let mut w = Complex::new(T::one(), T::zero());
            for k in start..start + width / 2 {
                let a = block[k];
                let b = block[k + width / 2] * w;
                block[k] = a + b;
                block[k + width / 2] = a - b;
                w *= w_step;
            }
        }
        width <<= 1;
    }
    let scale = T::one() / T::of_usize(len).sqrt();
    for x in block.iter_mut() {
        *x *= scale;
    }
}

/// The state preparation operator `A_y` for a polynomial and threshold:
/// rotation list plus precomputed per-term phase tables.
#[derive(Debug, Clone)]
pub struct PreparedCircuit<T> {
    n: usize,
    m: usize,
    y: T,
    rotations: Vec<PhaseRotation<T>>,
    tables: Vec<Vec<Complex<T>>>,
}

impl<T: Scalar> PreparedCircuit<T> {
    /// Builds `A_y` for `poly - y` on `poly.n()` key qubits and `m` value
    /// qubits. One rotation per nonzero term of `poly - y`, with angle
    /// `2π·coeff/2^m`; the threshold is folded into the constant term.
    pub fn prepare(poly: &HuboPolynomial<T>, y: T, m: usize) -> Result<Self, QuantumError> {
        if m == 0 {
            return Err(QuantumError::InvalidValueQubits);
        }
        let n = poly.n();
        if n + m > MAX_TOTAL_QUBITS {
            return Err(QuantumError::RegisterTooLarge {
                qubits: n + m,
                max: MAX_TOTAL_QUBITS,
            });
        }
        let scale = T::of(2.0) * T::PI() / T::of((1u64 << m) as f64);
        let mut rotations = Vec::with_capacity(poly.term_count() + 1);
        let shifted_constant = poly.coefficient(Monomial::CONSTANT) - y;
        let mut saw_constant = false;
        for (monomial, coeff) in poly.terms() {
            let coeff = if monomial == Monomial::CONSTANT {
                saw_constant = true;
                shifted_constant
            } else {
                coeff
            };
            if !coeff.is_zero() {
                rotations.push(PhaseRotation {
                    theta: scale * coeff,
                    controls: monomial,
                });
            }
        }
        if !saw_constant && !shifted_constant.is_zero() {
            rotations.insert(
                0,
                PhaseRotation {
                    theta: scale * shifted_constant,
                    controls: Monomial::CONSTANT,
                },
            );
        }
        let tables = rotations.iter().map(|r| phase_table(r.theta, m)).collect();
        Ok(PreparedCircuit {
            n,
            m,
            y,
            rotations,
            tables,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn threshold(&self) -> T {
        self.y
    }

    pub fn rotations(&self) -> &[PhaseRotation<T>] {
        &self.rotations
    }

    /// `A_y |0>`.
    pub fn state_preparation(&self) -> Statevector<T> {
        let mut state = Statevector::zero_state(self.n, self.m);
        self.apply(&mut state);
        state
    }

    /// Applies `A_y` to an arbitrary state.
    pub fn apply(&self, state: &mut Statevector<T>) {
        debug_assert_eq!(state.n_key, self.n);
        debug_assert_eq!(state.n_val, self.m);
        state.hadamard_wall();
        for (rotation, table) in self.rotations.iter().zip(&self.tables) {
            state.apply_phase_table(rotation.controls, table);
        }
        state.iqft_value();
        state.debug_check_normalized();
    }

    /// Applies the adjoint `A_y^H`.
    pub fn apply_adjoint(&self, state: &mut Statevector<T>) {
        state.qft_value();
        for (rotation, table) in self.rotations.iter().zip(&self.tables) {
            state.apply_phase_table_conj(rotation.controls, table);
        }
        state.hadamard_wall();
        state.debug_check_normalized();
    }

    /// One Grover step `G = A_y D A_y^H O` applied in place.
    pub fn grover_step(&self, state: &mut Statevector<T>) {
        state.apply_oracle();
        self.apply_adjoint(state);
        state.apply_diffusion();
        self.apply(state);
    }

    /// `G^L A_y |0>`.
    pub fn grover_power(&self, l: u64) -> Statevector<T> {
        let mut state = self.state_preparation();
        for _ in 0..l {
            self.grover_step(&mut state);
        }
        state
    }
}

/// Closed-form value-register amplitudes after phase-encoding a real value
/// `a` and applying the inverse Fourier transform: the inner products of
/// the geometric phase vector with the Fourier basis. Integer `a` puts all
/// mass on its own two's-complement code; otherwise the magnitudes follow
/// the Fejér kernel, concentrated on the two integers bracketing `a`.
///
/// Entry `l` of the result is the amplitude of raw register value `l`.
pub fn fejer_amplitudes<T: Scalar>(a: T, m: usize) -> Result<Vec<Complex<T>>, QuantumError> {
    if m == 0 {
        return Err(QuantumError::InvalidValueQubits);
    }
    let size = 1usize << m;
    let half = T::of((1u64 << (m - 1)) as f64);
    if !(-half <= a && a < half) {
        return Err(QuantumError::ValueOutOfRange {
            a: a.to_f64().unwrap_or(f64::NAN),
            m,
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut amps = vec![zero; size];
    if a.fract().is_zero() {
        let raw = encode_twos_complement(a.to_i64().expect("integral"), m);
        amps[raw as usize] = Complex::new(T::one(), T::zero());
        return Ok(amps);
    }
    let size_t = T::of_usize(size);
    for (l, amp) in amps.iter_mut().enumerate() {
        let d = a - T::of_usize(l);
        let magnitude = (T::PI() * d).sin() / (size_t * (T::PI() * d / size_t).sin());
        let phase = T::PI() * d * (size_t - T::one()) / size_t;
        *amp = Complex::from_polar(magnitude, phase);
    }
    Ok(amps)
}

/// `L_opt = floor((π/4)·sqrt(N/N_s))`, the rotation count that maximizes
/// the amplitude of the marked states.
pub fn optimal_rotation_count(space: u64, solutions: u64) -> Result<u64, QuantumError> {
    if solutions == 0 || solutions > space {
        return Err(QuantumError::InvalidSolutionCount { space, solutions });
    }
    let ratio = space as f64 / solutions as f64;
    Ok((std::f64::consts::FRAC_PI_4 * ratio.sqrt()).floor() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubo::bits_to_mask;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig2_poly() -> HuboPolynomial<f64> {
        HuboPolynomial::from_terms(
            3,
            [
                (Monomial::CONSTANT, 1.0),
                (Monomial::from_indices(&[0]), 1.0),
                (Monomial::from_indices(&[1, 2]), -2.0),
            ],
        )
    }

    fn real_poly() -> HuboPolynomial<f64> {
        HuboPolynomial::from_terms(
            4,
            [
                (Monomial::CONSTANT, 1.0),
                (Monomial::from_indices(&[0]), 1.0),
                (Monomial::from_indices(&[1, 2, 3]), -1.8),
            ],
        )
    }

    #[test]
    fn prepared_rotations_match_term_angles() {
        let circ = PreparedCircuit::prepare(&fig2_poly(), 0.0, 3).unwrap();
        let rot: Vec<(f64, u64)> = circ
            .rotations()
            .iter()
            .map(|r| (r.theta / std::f64::consts::PI, r.controls.mask()))
            .collect();
        // theta/pi: constant 2π/8 -> 0.25, b0 0.25, -2 b1 b2 -> -0.5
        assert_eq!(rot.len(), 3);
        assert!((rot[0].0 - 0.25).abs() < 1e-15 && rot[0].1 == 0);
        assert!((rot[1].0 - 0.25).abs() < 1e-15 && rot[1].1 == 0b001);
        assert!((rot[2].0 + 0.5).abs() < 1e-15 && rot[2].1 == 0b110);
    }

    #[test]
    fn real_term_uses_direct_encoding_angle() {
        let circ = PreparedCircuit::prepare(&real_poly(), 0.0, 3).unwrap();
        let cubic = circ
            .rotations()
            .iter()
            .find(|r| r.controls == Monomial::from_indices(&[1, 2, 3]))
            .unwrap();
        // -1.8 * 2π/8 = -1.8π/4 = -0.45π
        assert!((cubic.theta / std::f64::consts::PI + 0.45).abs() < 1e-15);
    }

    #[test]
    fn constant_only_polynomial_has_single_rotation() {
        let p = HuboPolynomial::constant(2, 3.0);
        let circ = PreparedCircuit::prepare(&p, 0.0, 4).unwrap();
        assert_eq!(circ.rotations().len(), 1);
        assert_eq!(circ.rotations()[0].controls, Monomial::CONSTANT);
    }

    #[test]
    fn threshold_folds_into_constant() {
        // poly without constant term, nonzero threshold -> one extra rotation
        let p = HuboPolynomial::from_terms(2, [(Monomial::from_indices(&[0]), 1.0)]);
        let circ = PreparedCircuit::prepare(&p, 2.0, 4).unwrap();
        assert_eq!(circ.rotations().len(), 2);
        assert_eq!(circ.rotations()[0].controls, Monomial::CONSTANT);
        // and a threshold equal to the constant term removes the rotation
        let q = HuboPolynomial::constant(2, 2.0);
        let circ = PreparedCircuit::prepare(&q, 2.0, 4).unwrap();
        assert_eq!(circ.rotations().len(), 0);
    }

    #[test]
    fn prepare_rejects_zero_value_qubits() {
        assert!(matches!(
            PreparedCircuit::prepare(&fig2_poly(), 0.0, 0),
            Err(QuantumError::InvalidValueQubits)
        ));
    }

    #[test]
    fn integer_preparation_yields_uniform_joint_distribution() {
        let poly = fig2_poly();
        let circ = PreparedCircuit::prepare(&poly, 0.0, 3).unwrap();
        let state = circ.state_preparation();
        for key in 0u64..8 {
            let value = poly.evaluate_mask(key) as i64;
            let p = state.joint_probability(key, value);
            assert!((p - 0.125).abs() < 1e-9, "key {key}: joint prob {p}");
        }
        // spot-check the advertised values
        assert!((state.joint_probability(0b000, 1) - 0.125).abs() < 1e-9);
        assert!((state.joint_probability(0b001, 2) - 0.125).abs() < 1e-9);
        assert!((state.joint_probability(0b110, -1) - 0.125).abs() < 1e-9);
        assert!((state.joint_probability(0b111, 0) - 0.125).abs() < 1e-9);
    }

    #[test]
    fn nonzero_threshold_shifts_the_encoded_values() {
        let poly = fig2_poly();
        let y = 2.0;
        let circ = PreparedCircuit::prepare(&poly, y, 4).unwrap();
        let state = circ.state_preparation();
        for key in 0u64..8 {
            let value = poly.evaluate_mask(key) as i64 - 2;
            let p = state.joint_probability(key, value);
            assert!((p - 0.125).abs() < 1e-9, "key {key}: {p}");
        }
    }

    #[test]
    fn zero_polynomial_leaves_value_register_cleared() {
        let p = HuboPolynomial::<f64>::new(2);
        let circ = PreparedCircuit::prepare(&p, 0.0, 3).unwrap();
        let state = circ.state_preparation();
        for key in 0u64..4 {
            assert!((state.joint_probability(key, 0) - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn real_preparation_prefers_nearest_integer() {
        let circ = PreparedCircuit::prepare(&real_poly(), 0.0, 3).unwrap();
        let state = circ.state_preparation();
        let key = bits_to_mask(&[false, true, true, true]);
        // E = -0.8: the -1 branch must dominate the -2 branch
        let p1 = state.joint_probability(key, -1);
        let p2 = state.joint_probability(key, -2);
        assert!(p1 > p2, "p(-1)={p1} <= p(-2)={p2}");
    }

    #[test]
    fn conditional_amplitudes_match_fejer_closed_form() {
        let poly = real_poly();
        for m in [3usize, 4, 5] {
            let circ = PreparedCircuit::prepare(&poly, 0.0, m).unwrap();
            let state = circ.state_preparation();
            for key in 0u64..16 {
                // key marginal stays uniform even for real coefficients
                let marginal = state.key_probability(key);
                assert!(
                    (marginal - 0.0625).abs() < 1e-9,
                    "m={m} key={key}: {marginal}"
                );
                let a = poly.evaluate_mask(key);
                let expected = fejer_amplitudes(a, m).unwrap();
                let got = state.conditional_value_amps(key);
                for (g, e) in got.iter().zip(&expected) {
                    assert!((g - e).norm() < 1e-9, "m={m} key={key}: {g} vs {e}");
                }
            }
        }
    }

    #[test]
    fn fejer_examples() {
        // a = -2.5: equal probability on -2 and -3
        let amps = fejer_amplitudes::<f64>(-2.5, 3).unwrap();
        let p = |v: i64| amps[encode_twos_complement(v, 3) as usize].norm_sqr();
        assert!((p(-2) - p(-3)).abs() < 1e-12);

        // integer a: single outcome
        let amps = fejer_amplitudes(2.0, 3).unwrap();
        assert_eq!(amps[2], Complex::new(1.0, 0.0));
        assert!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() == 1.0);

        // a = -2.3: -2 more likely than -3
        let amps = fejer_amplitudes(-2.3, 3).unwrap();
        let p = |v: i64| amps[encode_twos_complement(v, 3) as usize].norm_sqr();
        assert!(p(-2) > p(-3));
    }

    #[test]
    fn fejer_normalizes_and_checks_range() {
        for &a in &[-3.9f64, -0.5, 0.1, 2.7, 3.3] {
            let amps = fejer_amplitudes(a, 3).unwrap();
            let total: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
            assert!((total - 1.0).abs() < 1e-12, "a={a}: total {total}");
        }
        assert!(matches!(
            fejer_amplitudes(4.0, 3),
            Err(QuantumError::ValueOutOfRange { .. })
        ));
        assert!(fejer_amplitudes(-4.0, 3).is_ok());
    }

    #[test]
    fn oracle_flips_exactly_negative_values() {
        let poly = fig2_poly();
        let circ = PreparedCircuit::prepare(&poly, 0.0, 3).unwrap();
        let mut state = circ.state_preparation();
        let before = state.amps().to_vec();
        state.apply_oracle();
        for (i, &b) in before.iter().enumerate() {
            let (_, raw) = state.decode_index(i);
            let flipped = decode_twos_complement(raw, 3) < 0;
            let expected = if flipped { -b } else { b };
            assert_eq!(state.amps()[i], expected);
        }
    }

    #[test]
    fn diffusion_on_basis_states() {
        // |0...0> is fixed
        let mut state = Statevector::<f64>::zero_state(1, 1);
        state.apply_diffusion();
        assert_eq!(state.amps()[0], Complex::new(1.0, 0.0));

        // single qubit (n_key = 0): (|0> + |1>)/sqrt(2) -> (|0> - |1>)/sqrt(2)
        let mut state = Statevector::<f64>::zero_state(0, 1);
        state.hadamard_wall();
        state.apply_diffusion();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((state.amps()[0] - Complex::new(s, 0.0)).norm() < 1e-12);
        assert!((state.amps()[1] - Complex::new(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn preparation_adjoint_restores_zero_state() {
        let circ = PreparedCircuit::prepare(&real_poly(), 0.3, 4).unwrap();
        let mut state = circ.state_preparation();
        circ.apply_adjoint(&mut state);
        let fidelity = state.amps()[0].norm_sqr();
        assert!(fidelity > 1.0 - 1e-9, "fidelity {fidelity}");
    }

    #[test]
    fn grover_success_follows_sine_formula() {
        let poly = fig2_poly();
        let circ = PreparedCircuit::prepare(&poly, 0.0, 3).unwrap();
        let good_key = bits_to_mask(&[false, true, true]);
        let theta = (1.0f64 / 8.0).sqrt().asin();
        for l in 0..=4u64 {
            let state = circ.grover_power(l);
            let p = state.key_probability(good_key);
            let expected = ((2 * l + 1) as f64 * theta).sin().powi(2);
            assert!((p - expected).abs() < 1e-6, "L={l}: {p} vs {expected}");
            assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
        }
        // the advertised values
        let p1 = circ.grover_power(1).key_probability(good_key);
        assert!((p1 - 0.78125).abs() < 1e-6);
        let p2 = circ.grover_power(2).key_probability(good_key);
        assert!((p2 - 0.9453125).abs() < 1e-6);
    }

    #[test]
    fn grover_power_zero_is_state_preparation() {
        let circ = PreparedCircuit::prepare(&real_poly(), 0.0, 3).unwrap();
        let a = circ.state_preparation();
        let b = circ.grover_power(0);
        for (x, y) in a.amps().iter().zip(b.amps()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn oracle_count_sweep_matches_formula_on_random_integer_qubos() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let mut poly = HuboPolynomial::new(4);
            for mask in 1u64..16 {
                if mask.count_ones() <= 2 && rng.gen_bool(0.7) {
                    poly.add_term(Monomial::from_mask(mask), rng.gen_range(-3..=3) as f64);
                }
            }
            let y = 0.0;
            let n_s = poly.count_below(y).unwrap();
            if n_s == 0 || n_s == 16 {
                continue;
            }
            let m = crate::hubo::required_qubits_m(&poly.bounds()) as usize;
            let circ = PreparedCircuit::prepare(&poly, y, m).unwrap();
            let theta = ((n_s as f64 / 16.0).sqrt()).asin();
            for l in 0..=3u64 {
                let state = circ.grover_power(l);
                let mut good = 0.0;
                for key in 0u64..16 {
                    if poly.evaluate_mask(key) < y {
                        good += state.key_probability(key);
                    }
                }
                let expected = ((2 * l + 1) as f64 * theta).sin().powi(2);
                assert!(
                    (good - expected).abs() < 1e-6,
                    "n_s={n_s} L={l}: {good} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn measurement_decodes_deterministic_states() {
        // place all mass on key 0b01, raw value 0b111 (= -1)
        let mut state = Statevector::<f64>::zero_state(2, 3);
        let idx = state.index_of(0b01, 0b111);
        state.amps.swap(0, idx);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let outcome = state.measure(&mut rng);
        assert_eq!(outcome.key_bits, vec![true, false]);
        assert_eq!(outcome.value, -1);
    }

    #[test]
    fn measurement_frequencies_match_probabilities() {
        let poly = fig2_poly();
        let circ = PreparedCircuit::prepare(&poly, 0.0, 3).unwrap();
        let state = circ.state_preparation();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = std::collections::HashMap::new();
        let samples = 100_000usize;
        for _ in 0..samples {
            let o = state.measure(&mut rng);
            *counts
                .entry((bits_to_mask(&o.key_bits), o.value))
                .or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 8);
        // each outcome ~ Binomial(1e5, 1/8): 3 sigma ≈ 314
        let expect = samples as f64 / 8.0;
        let sigma3 = 3.0 * (samples as f64 * 0.125 * 0.875).sqrt();
        for (state_id, count) in counts {
            let dev = (count as f64 - expect).abs();
            assert!(dev < sigma3, "{state_id:?}: count {count} deviates {dev}");
        }
    }

    #[test]
    fn rotation_count_formula() {
        assert_eq!(optimal_rotation_count(8, 1).unwrap(), 2);
        assert_eq!(optimal_rotation_count(8, 8).unwrap(), 0);
        assert_eq!(optimal_rotation_count(256, 1).unwrap(), 12);
        assert!(optimal_rotation_count(8, 0).is_err());
        assert!(optimal_rotation_count(8, 9).is_err());
    }

    #[test]
    fn twos_complement_codec() {
        assert_eq!(decode_twos_complement(0b111, 3), -1);
        assert_eq!(decode_twos_complement(0b011, 3), 3);
        assert_eq!(decode_twos_complement(0b100, 3), -4);
        assert_eq!(encode_twos_complement(-1, 3), 0b111);
        assert_eq!(encode_twos_complement(3, 3), 0b011);
        for v in -4i64..4 {
            assert_eq!(decode_twos_complement(encode_twos_complement(v, 3), 3), v);
        }
    }

    #[test]
    fn f32_statevector_runs_the_same_circuit() {
        let poly: HuboPolynomial<f32> = HuboPolynomial::from_terms(
            3,
            [
                (Monomial::CONSTANT, 1.0f32),
                (Monomial::from_indices(&[0]), 1.0),
                (Monomial::from_indices(&[1, 2]), -2.0),
            ],
        );
        let circ = PreparedCircuit::prepare(&poly, 0.0f32, 3).unwrap();
        let state = circ.grover_power(2);
        let p = state.key_probability(0b110);
        assert!((p - 0.9453125).abs() < 1e-3, "f32 probability {p}");
    }
}
