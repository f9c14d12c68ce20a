//! Detectors: linear equalizers and the optimization-based ML variants.

use super::builder::build_mld_hubo;
use super::linalg::CMatrix;
use super::mapping::demap_symbols_to_bits;
use super::{mld_exhaustive, MimoError, MimoInstance};
use crate::hubo::{HuboError, Rounding};
use crate::Scalar;

/// Detection strategies comparable in the BER harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorKind<T> {
    Zf,
    Mmse,
    /// Exhaustive argmin of the residual norm (the reference MLD).
    MldExhaustive,
    /// Exhaustive argmin of the expanded HUBO polynomial.
    HuboBruteForce,
    /// Argmin of the polynomial after coefficient scaling and rounding to
    /// integers.
    IntegerApprox {
        factor: T,
    },
}

impl<T: Scalar> DetectorKind<T> {
    /// Stable label used in CSV output and CLI flags.
    pub fn label(&self) -> String {
        match self {
            DetectorKind::Zf => "zf".into(),
            DetectorKind::Mmse => "mmse".into(),
            DetectorKind::MldExhaustive => "mld".into(),
            DetectorKind::HuboBruteForce => "hubo".into(),
            DetectorKind::IntegerApprox { factor } => format!("int:{factor}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "zf" => Some(DetectorKind::Zf),
            "mmse" => Some(DetectorKind::Mmse),
            "mld" => Some(DetectorKind::MldExhaustive),
            "hubo" => Some(DetectorKind::HuboBruteForce),
            other => {
                let factor = other.strip_prefix("int:")?.parse::<f64>().ok()?;
                (factor > 0.0).then(|| DetectorKind::IntegerApprox {
                    factor: T::of(factor),
                })
            }
        }
    }
}

fn equalize_and_demap<T: Scalar>(inst: &MimoInstance<T>, w: &CMatrix<T>) -> Vec<bool> {
    let mut estimate = w.mul_vec(&inst.received);
    // undo the 1/sqrt(n_t) transmit normalization before the hard decision
    let scale = T::of_usize(inst.n_t).sqrt();
    for s in &mut estimate {
        *s *= scale;
    }
    demap_symbols_to_bits(&estimate, inst.modulation)
}

/// Zero-forcing detection via the pseudo-inverse (branching on the antenna
/// ratio). Fails on a singular Gram matrix.
pub fn zf_detect<T: Scalar>(inst: &MimoInstance<T>) -> Result<Vec<bool>, MimoError> {
    let h = &inst.channel;
    let hh = h.adjoint();
    let w = if inst.n_t <= inst.n_r {
        let gram = hh.mul_mat(h);
        gram.inverse()
            .ok_or(MimoError::SingularChannel)?
            .mul_mat(&hh)
    } else {
        let gram = h.mul_mat(&hh);
        hh.mul_mat(&gram.inverse().ok_or(MimoError::SingularChannel)?)
    };
    Ok(equalize_and_demap(inst, &w))
}

/// MMSE detection; the `sigma^2 I` regularizer keeps the inverse well
/// defined for any noisy channel.
pub fn mmse_detect<T: Scalar>(inst: &MimoInstance<T>) -> Result<Vec<bool>, MimoError> {
    let h = &inst.channel;
    let hh = h.adjoint();
    let w = if inst.n_t <= inst.n_r {
        let gram = hh.mul_mat(h).plus_scaled_identity(inst.sigma2);
        gram.inverse()
            .ok_or(MimoError::SingularChannel)?
            .mul_mat(&hh)
    } else {
        let gram = h.mul_mat(&hh).plus_scaled_identity(inst.sigma2);
        hh.mul_mat(&gram.inverse().ok_or(MimoError::SingularChannel)?)
    };
    Ok(equalize_and_demap(inst, &w))
}

fn map_enumeration_error(e: HuboError, n: usize) -> MimoError {
    match e {
        HuboError::EnumerationTooLarge { max, .. } => MimoError::SearchTooLarge { n, max },
        _ => MimoError::SearchTooLarge {
            n,
            max: crate::hubo::MAX_BRUTE_FORCE_VARS,
        },
    }
}

/// ML decision through the polynomial route: expand, then brute-force the
/// polynomial's argmin.
pub fn hubo_argmin<T: Scalar>(inst: &MimoInstance<T>) -> Result<Vec<bool>, MimoError> {
    let poly = build_mld_hubo(inst);
    let (bits, _) = poly
        .brute_force_min()
        .map_err(|e| map_enumeration_error(e, inst.n()))?;
    Ok(bits)
}

/// ML decision after rounding `factor * coeff` to nearest integers.
pub fn integer_approx_argmin<T: Scalar>(
    inst: &MimoInstance<T>,
    factor: T,
) -> Result<Vec<bool>, MimoError> {
    let poly = build_mld_hubo(inst).integer_approximation(factor, Rounding::Nearest);
    let (bits, _) = poly
        .brute_force_min()
        .map_err(|e| map_enumeration_error(e, inst.n()))?;
    Ok(bits)
}

/// Runs the requested detector on one instance.
pub fn detect<T: Scalar>(
    inst: &MimoInstance<T>,
    kind: &DetectorKind<T>,
) -> Result<Vec<bool>, MimoError> {
    match kind {
        DetectorKind::Zf => zf_detect(inst),
        DetectorKind::Mmse => mmse_detect(inst),
        DetectorKind::MldExhaustive => mld_exhaustive(inst),
        DetectorKind::HuboBruteForce => hubo_argmin(inst),
        DetectorKind::IntegerApprox { factor } => integer_approx_argmin(inst, *factor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mimo::{simulate_channel, transmit_over, Modulation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zf_inverts_a_clean_square_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, 1e12, &mut rng);
            assert_eq!(zf_detect(&inst).unwrap(), inst.tx_bits);
        }
    }

    #[test]
    fn identity_channel_passes_symbols_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = CMatrix::identity(2);
        let bits = vec![false, true, true, false];
        let inst = transmit_over::<f64, _>(h, Modulation::Qpsk, bits.clone(), 1e12, &mut rng);
        assert_eq!(zf_detect(&inst).unwrap(), bits);
        assert_eq!(mmse_detect(&inst).unwrap(), bits);
    }

    #[test]
    fn zf_surfaces_singular_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = CMatrix::zeros(2, 2);
        let inst = transmit_over::<f64, _>(h, Modulation::Qpsk, vec![false; 4], 100.0, &mut rng);
        assert_eq!(zf_detect(&inst), Err(MimoError::SingularChannel));
        // the regularized MMSE inverse still exists
        assert!(mmse_detect(&inst).is_ok());
    }

    #[test]
    fn mmse_approaches_zf_at_vanishing_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qam16, 1e10, &mut rng);
            assert_eq!(mmse_detect(&inst).unwrap(), zf_detect(&inst).unwrap());
        }
    }

    #[test]
    fn mmse_of_a_silent_receiver_decides_deterministically() {
        // r = 0 puts every equalized symbol exactly on the tie point; the
        // demapper must settle on the smallest bit pattern
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, 10.0, &mut rng);
        for r in &mut inst.received {
            *r = num_complex::Complex::new(0.0, 0.0);
        }
        let bits = mmse_detect(&inst).unwrap();
        assert_eq!(bits, vec![false, false, false, false]);
    }

    #[test]
    fn hubo_route_agrees_with_direct_mld() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for modulation in [Modulation::Qpsk, Modulation::Qam16] {
            for _ in 0..25 {
                let inst = simulate_channel::<f64, _>(2, 2, modulation, 50.0, &mut rng);
                assert_eq!(hubo_argmin(&inst).unwrap(), mld_exhaustive(&inst).unwrap());
            }
        }
    }

    #[test]
    fn over_determined_and_under_determined_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tall = simulate_channel::<f64, _>(2, 3, Modulation::Qpsk, 1e10, &mut rng);
        assert_eq!(zf_detect(&tall).unwrap(), tall.tx_bits);
        // wide channel (n_t > n_r): pseudo-inverse exists but symbols are
        // not separable; just check the branch runs
        let wide = simulate_channel::<f64, _>(3, 2, Modulation::Qpsk, 1e10, &mut rng);
        assert_eq!(zf_detect(&wide).unwrap().len(), 6);
    }

    #[test]
    fn detector_labels_round_trip() {
        for label in ["zf", "mmse", "mld", "hubo", "int:20"] {
            let kind = DetectorKind::<f64>::parse(label).unwrap();
            assert_eq!(kind.label(), label);
        }
        assert!(DetectorKind::<f64>::parse("int:-1").is_none());
        assert!(DetectorKind::<f64>::parse("sphere").is_none());
    }

    #[test]
    fn equalizer_scaling_restores_the_constellation() {
        // with H = I and no noise the equalized symbol must sit exactly on
        // the constellation point, which only happens with the sqrt(n_t)
        // rescaling applied
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = CMatrix::identity(2);
        let bits = vec![true, false, false, true];
        let inst = transmit_over::<f64, _>(h, Modulation::Qpsk, bits.clone(), 1e14, &mut rng);
        let w = CMatrix::identity(2);
        let mut est = w.mul_vec(&inst.received);
        let scale = 2f64.sqrt();
        for s in &mut est {
            *s *= scale;
        }
        let expected = crate::mimo::map_bits_to_symbols::<f64>(&bits, Modulation::Qpsk).unwrap();
        for (e, x) in est.iter().zip(&expected) {
            assert!((e - x).norm() < 1e-6, "{e} vs {x}");
        }
    }
}
