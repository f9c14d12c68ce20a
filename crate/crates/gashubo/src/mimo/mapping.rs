//! Gray-coded bit-to-symbol maps from the 5G NR modulation tables, and the
//! hard-decision nearest-point demapper.

use num_complex::Complex;

use super::{MimoError, Modulation};
use crate::Scalar;

#[inline]
fn pm<T: Scalar>(bit: bool) -> T {
    // 1 - 2b
    if bit {
        -T::one()
    } else {
        T::one()
    }
}

/// Maps one symbol's worth of bits (`modulation.bits_per_symbol()` of them)
/// onto the unit-average-power constellation point.
pub fn map_symbol<T: Scalar>(bits: &[bool], modulation: Modulation) -> Complex<T> {
    debug_assert_eq!(bits.len(), modulation.bits_per_symbol());
    let two = T::of(2.0);
    let four = T::of(4.0);
    match modulation {
        Modulation::Bpsk => {
            let a = pm::<T>(bits[0]) * T::FRAC_1_SQRT_2();
            Complex::new(a, a)
        }
        Modulation::Qpsk => Complex::new(pm(bits[0]), pm(bits[1])) * T::FRAC_1_SQRT_2(),
        Modulation::Qam16 => {
            let scale = T::one() / T::of(10.0).sqrt();
            let re = pm::<T>(bits[0]) * (two - pm::<T>(bits[2]));
            let im = pm::<T>(bits[1]) * (two - pm::<T>(bits[3]));
            Complex::new(re, im) * scale
        }
        Modulation::Qam64 => {
            let scale = T::one() / T::of(42.0).sqrt();
            let re = pm::<T>(bits[0]) * (four - pm::<T>(bits[2]) * (two - pm::<T>(bits[4])));
            let im = pm::<T>(bits[1]) * (four - pm::<T>(bits[3]) * (two - pm::<T>(bits[5])));
            Complex::new(re, im) * scale
        }
    }
}

/// Maps a full bit-vector (length divisible by bits/symbol) to symbols.
pub fn map_bits_to_symbols<T: Scalar>(
    bits: &[bool],
    modulation: Modulation,
) -> Result<Vec<Complex<T>>, MimoError> {
    let bps = modulation.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(MimoError::BitLength {
            expected: bps,
            actual: bits.len(),
        });
    }
    Ok(bits
        .chunks(bps)
        .map(|chunk| map_symbol(chunk, modulation))
        .collect())
}

/// Hard decision for one received symbol: the bits of the nearest
/// constellation point. Ties resolve toward the smaller bit pattern
/// (bits read as a binary number, first bit most significant).
pub fn demap_symbol<T: Scalar>(symbol: Complex<T>, modulation: Modulation) -> Vec<bool> {
    let bps = modulation.bits_per_symbol();
    let mut best_pattern = 0usize;
    let mut best_dist = T::infinity();
    for pattern in 0..modulation.order() {
        let bits: Vec<bool> = (0..bps)
            .map(|i| pattern >> (bps - 1 - i) & 1 == 1)
            .collect();
        let point = map_symbol::<T>(&bits, modulation);
        let dist = (symbol - point).norm_sqr();
        if dist < best_dist {
            best_dist = dist;
            best_pattern = pattern;
        }
    }
    (0..bps)
        .map(|i| best_pattern >> (bps - 1 - i) & 1 == 1)
        .collect()
}

/// Demaps a symbol vector to the concatenated bit decisions.
pub fn demap_symbols_to_bits<T: Scalar>(
    symbols: &[Complex<T>],
    modulation: Modulation,
) -> Vec<bool> {
    symbols
        .iter()
        .flat_map(|&s| demap_symbol(s, modulation))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qpsk_all_zero_bits() {
        let s = map_symbol::<f64>(&[false, false], Modulation::Qpsk);
        let e = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s - Complex::new(e, e)).norm() < 1e-15);
    }

    #[test]
    fn bpsk_one_bit() {
        let s = map_symbol::<f64>(&[true], Modulation::Bpsk);
        let e = -std::f64::consts::FRAC_1_SQRT_2;
        assert!((s - Complex::new(e, e)).norm() < 1e-15);
    }

    #[test]
    fn qam16_corner_point() {
        let s = map_symbol::<f64>(&[false, false, true, true], Modulation::Qam16);
        let e = 3.0 / 10f64.sqrt();
        assert!((s - Complex::new(e, e)).norm() < 1e-15);
    }

    #[test]
    fn unit_average_power() {
        for modulation in Modulation::ALL {
            let bps = modulation.bits_per_symbol();
            let mut total = 0.0;
            for pattern in 0..modulation.order() {
                let bits: Vec<bool> = (0..bps).map(|i| pattern >> i & 1 == 1).collect();
                total += map_symbol::<f64>(&bits, modulation).norm_sqr();
            }
            let mean = total / modulation.order() as f64;
            assert!(
                (mean - 1.0).abs() < 1e-12,
                "{modulation:?}: mean power {mean}"
            );
        }
    }

    #[test]
    fn demap_inverts_map_on_constellation_points() {
        for modulation in Modulation::ALL {
            let bps = modulation.bits_per_symbol();
            for pattern in 0..modulation.order() {
                let bits: Vec<bool> = (0..bps).map(|i| pattern >> i & 1 == 1).collect();
                let s = map_symbol::<f64>(&bits, modulation);
                assert_eq!(
                    demap_symbol(s, modulation),
                    bits,
                    "{modulation:?} {pattern}"
                );
            }
        }
    }

    #[test]
    fn demap_picks_nearest_quadrant() {
        let bits = demap_symbol(Complex::new(0.9, 0.1), Modulation::Qpsk);
        assert_eq!(bits, vec![false, false]);
        let bits = demap_symbol(Complex::new(-0.2, 0.7), Modulation::Qpsk);
        assert_eq!(bits, vec![true, false]);
    }

    #[test]
    fn demap_origin_is_deterministic() {
        // every QPSK point is equidistant from 0: smallest pattern wins
        let bits = demap_symbol(Complex::new(0.0, 0.0), Modulation::Qpsk);
        assert_eq!(bits, vec![false, false]);
    }

    #[test]
    fn map_rejects_ragged_bits() {
        assert!(map_bits_to_symbols::<f64>(&[false; 3], Modulation::Qpsk).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_random_patterns(pattern in 0usize..64, modulation_idx in 0usize..4) {
            let modulation = Modulation::ALL[modulation_idx];
            let bps = modulation.bits_per_symbol();
            let pattern = pattern % modulation.order();
            let bits: Vec<bool> = (0..bps).map(|i| pattern >> i & 1 == 1).collect();
            let s = map_symbol::<f64>(&bits, modulation);
            prop_assert_eq!(demap_symbol(s, modulation), bits);
        }

        #[test]
        fn small_noise_does_not_flip_decisions(pattern in 0usize..16, dx in -0.05..0.05f64, dy in -0.05..0.05f64) {
            let modulation = Modulation::Qam16;
            let bits: Vec<bool> = (0..4).map(|i| pattern >> i & 1 == 1).collect();
            let s = map_symbol::<f64>(&bits, modulation) + Complex::new(dx, dy);
            // 16-QAM decision cells have half-width 1/sqrt(10) ≈ 0.316
            prop_assert_eq!(demap_symbol(s, modulation), bits);
        }
    }
}
