//! Grover adaptive search (GAS) for binary optimization with real-valued
//! coefficients, simulated on a classical statevector backend.
//!
//! The crate is organized around five layers:
//!
//! * [`hubo`] — sparse pseudo-Boolean polynomials over `{0,1}^n` (the
//!   objective representation), with brute-force oracles, value bounds and
//!   the value-register sizing rule.
//! * [`quantum`] — the statevector simulator for the GAS circuit family:
//!   phase-encoded state preparation, sign-qubit oracle, diffusion, Grover
//!   powering, and the closed-form Fejér amplitudes used as an independent
//!   cross-check.
//! * [`gas`] — the adaptive search loop itself, for integer and real
//!   coefficients, with query accounting in the classical and quantum
//!   domains.
//! * [`mimo`] — maximum-likelihood detection of spatially multiplexed
//!   Gray-coded symbols: channel simulation, bit/symbol mapping, the
//!   expansion of the detection objective into a HUBO polynomial, ZF/MMSE
//!   baselines, and initial-threshold policies.
//! * [`analysis`] — gate-count accounting, query-complexity sweeps and BER
//!   Monte-Carlo harnesses that turn the above into CSV artifacts.
//!
//! All numeric code is generic over the scalar type through [`Scalar`];
//! `f64` is the default used by the CLI and the type aliases below.

pub mod analysis;
pub mod gas;
pub mod hubo;
pub mod mimo;
pub mod quantum;
mod scalar;

pub use scalar::Scalar;

/// Double-precision aliases; these are what the CLI and most tests use.
pub type Hubo64 = hubo::HuboPolynomial<f64>;
pub type Bounds64 = hubo::ValueBounds<f64>;
pub type State64 = quantum::Statevector<f64>;
pub type Circuit64 = quantum::PreparedCircuit<f64>;
pub type GasConfig64 = gas::GasConfig<f64>;
pub type GasTrace64 = gas::GasTrace<f64>;
pub type Instance64 = mimo::MimoInstance<f64>;

/// Single-precision aliases, mainly exercised by the genericity tests.
pub type Hubo32 = hubo::HuboPolynomial<f32>;
pub type State32 = quantum::Statevector<f32>;
