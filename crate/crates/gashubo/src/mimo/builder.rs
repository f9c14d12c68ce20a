//! Expansion of the residual-norm detection objective into a HUBO
//! polynomial.
//!
//! Each symbol's real and imaginary parts are first written as small bit
//! polynomials (linear for BPSK/QPSK, quadratic for 16-QAM, cubic for
//! 64-QAM). The squared norm then expands into three families of terms:
//! received-times-symbol products, same-symbol powers, and cross-symbol
//! products weighted by the channel pair products `h_ut * conj(h_ut')` —
//! of which exactly `n_r * n_t * (n_t - 1) / 2` are formed.

use num_complex::Complex;

use super::{MimoInstance, Modulation};
use crate::hubo::{HuboPolynomial, Monomial};
use crate::Scalar;

/// Cost accounting for one expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildStats {
    /// Number of channel pair products `h_ut * conj(h_ut')` formed
    /// (`n_r * n_t * (n_t - 1) / 2`).
    pub channel_pair_products: usize,
}

/// The factor `1 - 2 b_i` as a polynomial.
fn linear_factor<T: Scalar>(n: usize, i: usize) -> HuboPolynomial<T> {
    HuboPolynomial::from_terms(
        n,
        [
            (Monomial::CONSTANT, T::one()),
            (Monomial::from_indices(&[i]), T::of(-2.0)),
        ],
    )
}

/// One axis of a Gray-coded symbol as a bit polynomial, before the power
/// normalization: `1-2b`, `2-(1-2b')` nests, etc.
fn axis_poly<T: Scalar>(
    n: usize,
    modulation: Modulation,
    sign_bit: usize,
    inner_bits: &[usize],
) -> HuboPolynomial<T> {
    let sign = linear_factor(n, sign_bit);
    match modulation {
        Modulation::Bpsk | Modulation::Qpsk => sign,
        Modulation::Qam16 => {
            // (1-2b0) * (2 - (1-2b2))
            let mut inner = HuboPolynomial::constant(n, T::of(2.0));
            inner.add_scaled(&linear_factor(n, inner_bits[0]), -T::one());
            sign.multiply(&inner)
        }
        Modulation::Qam64 => {
            // (1-2b0) * (4 - (1-2b2) * (2 - (1-2b4)))
            let mut nested = HuboPolynomial::constant(n, T::of(2.0));
            nested.add_scaled(&linear_factor(n, inner_bits[1]), -T::one());
            let middle = linear_factor(n, inner_bits[0]).multiply(&nested);
            let mut outer = HuboPolynomial::constant(n, T::of(4.0));
            outer.add_scaled(&middle, -T::one());
            sign.multiply(&outer)
        }
    }
}

/// Real and imaginary parts of symbol `t` as polynomials over the `n`
/// global bits, including the constellation power normalization.
pub fn symbol_component_polys<T: Scalar>(
    modulation: Modulation,
    t: usize,
    n: usize,
) -> (HuboPolynomial<T>, HuboPolynomial<T>) {
    let base = t * modulation.bits_per_symbol();
    let (mut re, mut im) = match modulation {
        Modulation::Bpsk => {
            let p = axis_poly::<T>(n, modulation, base, &[]);
            (p.clone(), p)
        }
        Modulation::Qpsk => (
            axis_poly(n, modulation, base, &[]),
            axis_poly(n, modulation, base + 1, &[]),
        ),
        Modulation::Qam16 => (
            axis_poly(n, modulation, base, &[base + 2]),
            axis_poly(n, modulation, base + 1, &[base + 3]),
        ),
        Modulation::Qam64 => (
            axis_poly(n, modulation, base, &[base + 2, base + 4]),
            axis_poly(n, modulation, base + 1, &[base + 3, base + 5]),
        ),
    };
    let scale = match modulation {
        Modulation::Bpsk | Modulation::Qpsk => T::of(0.5).sqrt(),
        Modulation::Qam16 => T::one() / T::of(10.0).sqrt(),
        Modulation::Qam64 => T::one() / T::of(42.0).sqrt(),
    };
    re.scale(scale);
    im.scale(scale);
    (re, im)
}

/// Expands `||r - H M(b) / sqrt(n_t)||^2` into a polynomial over the
/// instance's `n` bits; evaluating it reproduces the norm for every
/// assignment.
pub fn build_mld_hubo<T: Scalar>(inst: &MimoInstance<T>) -> HuboPolynomial<T> {
    build_mld_hubo_with_stats(inst).0
}

/// As [`build_mld_hubo`], also reporting expansion cost counters.
pub fn build_mld_hubo_with_stats<T: Scalar>(
    inst: &MimoInstance<T>,
) -> (HuboPolynomial<T>, BuildStats) {
    let n = inst.n();
    let n_t = inst.n_t;
    let inv_sqrt_nt = T::one() / T::of_usize(n_t).sqrt();
    let inv_nt = T::one() / T::of_usize(n_t);
    let two = T::of(2.0);
    let h = &inst.channel;

    let components: Vec<(HuboPolynomial<T>, HuboPolynomial<T>)> = (0..n_t)
        .map(|t| symbol_component_polys(inst.modulation, t, n))
        .collect();

    let mut objective = HuboPolynomial::new(n);

    // ||r||^2
    let rx_power: T = inst.received.iter().map(|r| r.norm_sqr()).sum();
    objective.add_term(Monomial::CONSTANT, rx_power);

    // -2 Re( r^H H s ) / sqrt(n_t)
    for (t, (re_t, im_t)) in components.iter().enumerate() {
        let mut c = Complex::new(T::zero(), T::zero());
        for u in 0..inst.n_r {
            c += inst.received[u].conj() * h[(u, t)];
        }
        objective.add_scaled(re_t, -two * inv_sqrt_nt * c.re);
        objective.add_scaled(im_t, two * inv_sqrt_nt * c.im);
    }

    // same-symbol powers: sum_u |h_ut|^2 * |s_t|^2 / n_t
    for (t, (re_t, im_t)) in components.iter().enumerate() {
        let mut w = T::zero();
        for u in 0..inst.n_r {
            w += h[(u, t)].norm_sqr();
        }
        let power = re_t.multiply(re_t);
        objective.add_scaled(&power, inv_nt * w);
        let power = im_t.multiply(im_t);
        objective.add_scaled(&power, inv_nt * w);
    }

    // cross-symbol products: 2 Re( P_tt' * s_t * conj(s_t') ) / n_t
    let mut pair_products = 0usize;
    for t in 0..n_t {
        for t2 in t + 1..n_t {
            let mut p = Complex::new(T::zero(), T::zero());
            for u in 0..inst.n_r {
                p += h[(u, t)] * h[(u, t2)].conj();
                pair_products += 1;
            }
            let (re_t, im_t) = &components[t];
            let (re_t2, im_t2) = &components[t2];
            let mut cross_re = re_t.multiply(re_t2);
            cross_re.add_scaled(&im_t.multiply(im_t2), T::one());
            let mut cross_im = im_t.multiply(re_t2);
            cross_im.add_scaled(&re_t.multiply(im_t2), -T::one());
            objective.add_scaled(&cross_re, inv_nt * two * p.re);
            objective.add_scaled(&cross_im, -(inv_nt * two * p.im));
        }
    }

    objective.compress();
    (
        objective,
        BuildStats {
            channel_pair_products: pair_products,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubo::mask_to_bits;
    use crate::mimo::{example_instance, map_bits_to_symbols, objective, simulate_channel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn component_polys_match_the_numeric_maps() {
        for modulation in Modulation::ALL {
            let bps = modulation.bits_per_symbol();
            let n = 2 * bps; // two symbols
            for t in 0..2 {
                let (re, im) = symbol_component_polys::<f64>(modulation, t, n);
                for mask in 0..(1u64 << n) {
                    let bits = mask_to_bits(mask, n);
                    let s = map_bits_to_symbols::<f64>(&bits, modulation).unwrap()[t];
                    assert!((re.evaluate(&bits).unwrap() - s.re).abs() < 1e-12);
                    assert!((im.evaluate(&bits).unwrap() - s.im).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn expansion_equals_direct_norm_exhaustively() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for modulation in [Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16] {
            for _ in 0..5 {
                let inst = simulate_channel::<f64, _>(2, 2, modulation, 100.0, &mut rng);
                let poly = build_mld_hubo(&inst);
                for mask in 0..(1u64 << inst.n()) {
                    let bits = mask_to_bits(mask, inst.n());
                    let direct = objective(&inst, &bits).unwrap();
                    let via_poly = poly.evaluate(&bits).unwrap();
                    assert!(
                        (direct - via_poly).abs() < 1e-9,
                        "{modulation:?} mask {mask}: {direct} vs {via_poly}"
                    );
                }
            }
        }
    }

    #[test]
    fn qam64_expansion_matches_on_single_antenna() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let inst = simulate_channel::<f64, _>(1, 2, Modulation::Qam64, 50.0, &mut rng);
        let poly = build_mld_hubo(&inst);
        // a single antenna has no cross-symbol products, so the sextic
        // terms are absent and the linear-in-s cubics dominate
        assert_eq!(poly.degree(), 3);
        for mask in 0..(1u64 << 6) {
            let bits = mask_to_bits(mask, 6);
            let direct = objective(&inst, &bits).unwrap();
            assert!((direct - poly.evaluate(&bits).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn degrees_follow_the_modulation_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let expected = [2usize, 2, 4, 6];
        for (modulation, degree) in Modulation::ALL.into_iter().zip(expected) {
            let inst = simulate_channel::<f64, _>(2, 2, modulation, 100.0, &mut rng);
            assert_eq!(build_mld_hubo(&inst).degree(), degree, "{modulation:?}");
        }
    }

    #[test]
    fn qpsk_pair_coefficient_is_twice_a1() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, 100.0, &mut rng);
        let poly = build_mld_hubo(&inst);
        let h = &inst.channel;
        let a1 = (h[(0, 0)] * h[(0, 1)].conj()).re + (h[(1, 0)] * h[(1, 1)].conj()).re;
        let a2 = (h[(0, 0)] * h[(0, 1)].conj()).im + (h[(1, 0)] * h[(1, 1)].conj()).im;
        let coeff = |idx: &[usize]| poly.coefficient(Monomial::from_indices(idx));
        assert!((coeff(&[0, 2]) - 2.0 * a1).abs() < 1e-12);
        assert!((coeff(&[1, 3]) - 2.0 * a1).abs() < 1e-12);
        assert!((coeff(&[0, 3]) - 2.0 * a2).abs() < 1e-12);
        assert!((coeff(&[1, 2]) + 2.0 * a2).abs() < 1e-12);

        // linear terms: 2 Re(h_ut r_u^*) on even bits minus the cross
        // leak-through, -(a1+a2) on b0/b3 and -(a1-a2) on b1/b2
        let r = &inst.received;
        let lin = |t: usize| (h[(0, t)] * r[0].conj()).re + (h[(1, t)] * r[1].conj()).re;
        let lin_im = |t: usize| (h[(0, t)] * r[0].conj()).im + (h[(1, t)] * r[1].conj()).im;
        assert!((coeff(&[0]) - (2.0 * lin(0) - (a1 + a2))).abs() < 1e-12);
        assert!((coeff(&[3]) - (-2.0 * lin_im(1) - (a1 + a2))).abs() < 1e-12);
        assert!((coeff(&[1]) - (-2.0 * lin_im(0) - (a1 - a2))).abs() < 1e-12);
        assert!((coeff(&[2]) - (2.0 * lin(1) - (a1 - a2))).abs() < 1e-12);
    }

    #[test]
    fn example_channel_quartic_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let inst = example_instance::<f64, _>(1000.0, &mut rng);
        let poly = build_mld_hubo(&inst);
        let c = poly.coefficient(Monomial::from_indices(&[0, 2, 4, 6]));
        // frozen from an independent evaluation of the channel products
        assert!((c - 1.2195208177933536).abs() < 1e-12, "coefficient {c}");
        assert_eq!((c * 100.0).round() / 100.0, 1.22);
    }

    #[test]
    fn fine_integer_approximation_preserves_the_argmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let inst = simulate_channel::<f64, _>(2, 2, Modulation::Qpsk, 80.0, &mut rng);
            let poly = build_mld_hubo(&inst);
            let (exact_bits, _) = poly.brute_force_min().unwrap();
            for factor in [1e3, 1e4] {
                let approx = poly.integer_approximation(factor, crate::hubo::Rounding::Nearest);
                let (bits, _) = approx.brute_force_min().unwrap();
                assert_eq!(bits, exact_bits, "factor {factor}");
            }
        }
    }

    #[test]
    fn pair_product_count_matches_the_combinatorics() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (n_t, n_r) in [(1usize, 2usize), (2, 2), (3, 2), (2, 3)] {
            let inst = simulate_channel::<f64, _>(n_t, n_r, Modulation::Qpsk, 100.0, &mut rng);
            let (_, stats) = build_mld_hubo_with_stats(&inst);
            assert_eq!(stats.channel_pair_products, n_r * n_t * (n_t - 1) / 2);
        }
    }
}
