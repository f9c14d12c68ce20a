//! Initial-threshold policies for the solver.
//!
//! At high SNR the minimum objective value is the noise norm, whose
//! distribution is Erlang with shape `n_r` and rate `gamma`. Inverting its
//! tail at a small probability `P` gives a threshold `y = sigma^2 * nu`
//! that undershoots the true minimum only with probability `P`; for
//! `n_r = 2` the inversion has a closed form through the lower branch of
//! the Lambert W function, and the general case falls back to bisection.

use rand::Rng;

use super::detect::mmse_detect;
use super::{objective, MimoError, MimoInstance};
use crate::gas::InitialPoint;
use crate::hubo::mask_to_bits;
use crate::Scalar;

/// Strategies for the solver's initial threshold `y_0` and start bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy<T> {
    /// `y_0 = E(b_0)` for uniformly random bits.
    Random,
    /// `y_0 = E(b)` at the MMSE decision.
    MmseBased,
    /// `y_0 = sigma^2 * nu(P)` from the Erlang tail; random start bits.
    Proposed { p: T },
    /// The smaller of the MMSE-based and Erlang-tail thresholds, starting
    /// from the MMSE decision.
    Combination { p: T },
}

impl<T: Scalar> ThresholdPolicy<T> {
    pub fn label(&self) -> String {
        match self {
            ThresholdPolicy::Random => "random".into(),
            ThresholdPolicy::MmseBased => "mmse".into(),
            ThresholdPolicy::Proposed { p } => format!("proposed:{p}"),
            ThresholdPolicy::Combination { p } => format!("combination:{p}"),
        }
    }
}

/// Lower branch `W_{-1}` of the Lambert W function on `[-1/e, 0)`,
/// computed by bisection on `w e^w = x` over `w <= -1`.
pub fn lambert_w_minus1<T: Scalar>(x: T) -> Result<T, MimoError> {
    let minus_inv_e = -T::one() / T::E();
    if x < minus_inv_e || x >= T::zero() {
        return Err(MimoError::InvalidProbability);
    }
    if x == minus_inv_e {
        return Ok(-T::one());
    }
    let f = |w: T| w * w.exp();
    // f decreases from 0^- toward -1/e as w rises to -1; bracket leftward.
    let mut lo = -T::of(2.0);
    while f(lo) < x {
        lo *= T::of(2.0);
    }
    let mut hi = -T::one();
    for _ in 0..200 {
        let mid = (lo + hi) * T::of(0.5);
        if f(mid) > x {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= T::of(1e-12) * hi.abs().max(T::one()) {
            break;
        }
    }
    Ok((lo + hi) * T::of(0.5))
}

/// CDF of the Erlang(shape `n_r`, rate `gamma`) minimum-objective model:
/// `F(y) = 1 - e^(-gamma y) * sum_{u<n_r} (gamma y)^u / u!`.
pub fn erlang_min_cdf<T: Scalar>(y: T, gamma: T, n_r: usize) -> T {
    if y <= T::zero() {
        return T::zero();
    }
    T::one() - erlang_tail(gamma * y, n_r)
}

fn erlang_tail<T: Scalar>(x: T, n_r: usize) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for u in 1..n_r {
        term = term * x / T::of_usize(u);
        sum += term;
    }
    (-x).exp() * sum
}

/// Solves `erlang_tail(x, n_r) = p` for `x` by bisection (the tail is
/// strictly decreasing).
fn erlang_tail_quantile<T: Scalar>(p: T, n_r: usize) -> T {
    let mut hi = T::one();
    while erlang_tail(hi, n_r) > p {
        hi *= T::of(2.0);
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) * T::of(0.5);
        if erlang_tail(mid, n_r) > p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::of(1e-12) * hi.max(T::one()) {
            break;
        }
    }
    (lo + hi) * T::of(0.5)
}

/// The Erlang-tail threshold `y = sigma^2 * nu` with
/// `Pr[E_min > y] = p`. For two receive antennas
/// `nu = -1 - W_{-1}(-p/e)`; other antenna counts invert the tail
/// numerically.
pub fn proposed_threshold<T: Scalar>(sigma2: T, n_r: usize, p: T) -> Result<T, MimoError> {
    if !(p > T::zero() && p < T::one()) {
        return Err(MimoError::InvalidProbability);
    }
    let nu = if n_r == 2 {
        -T::one() - lambert_w_minus1(-p / T::E())?
    } else {
        erlang_tail_quantile(p, n_r)
    };
    Ok(sigma2 * nu)
}

/// Computes the initial point for a GAS run per the chosen policy.
/// `classical_evaluations` records how many objective evaluations the
/// policy itself spent (none for the pure Erlang-tail threshold).
pub fn initial_threshold<T: Scalar, R: Rng>(
    inst: &MimoInstance<T>,
    policy: &ThresholdPolicy<T>,
    rng: &mut R,
) -> Result<InitialPoint<T>, MimoError> {
    let n = inst.n();
    let random_bits = |rng: &mut R| mask_to_bits(rng.gen_range(0..(1u64 << n)), n);
    match policy {
        ThresholdPolicy::Random => {
            let bits = random_bits(rng);
            let y0 = objective(inst, &bits)?;
            Ok(InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 1,
            })
        }
        ThresholdPolicy::MmseBased => {
            let bits = mmse_detect(inst)?;
            let y0 = objective(inst, &bits)?;
            Ok(InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 1,
            })
        }
        ThresholdPolicy::Proposed { p } => {
            let bits = random_bits(rng);
            let y0 = proposed_threshold(inst.sigma2, inst.n_r, *p)?;
            Ok(InitialPoint {
                threshold: y0,
                bits,
                classical_evaluations: 0,
            })
        }
        ThresholdPolicy::Combination { p } => {
            let bits = mmse_detect(inst)?;
            let mmse_y = objective(inst, &bits)?;
            let tail_y = proposed_threshold(inst.sigma2, inst.n_r, *p)?;
            Ok(InitialPoint {
                threshold: mmse_y.min(tail_y),
                bits,
                classical_evaluations: 1,
            })
        }
    }
}
