//! Receivers: per-subsystem OFDM demodulation, the iterative stripe decoder
//! and the exhaustive maximum-likelihood decoder.

pub(crate) mod ml;
mod stripe;

use num_complex::Complex64;

pub use ml::{ml_decode, MlDecoder, ML_SEARCH_LIMIT};
pub use stripe::{stripe_decode, StripeDecoder, StripeParams};

use crate::alphabet::Alphabet;
use crate::config::SefdmConfig;
use crate::error::Result;
use crate::signal::{SampleVector, SoftEstimate};
use crate::txmod::{SubsystemSymbols, Transmitter};

/// Distances below this count as landing exactly on an alphabet point.
pub const GRAVITY_HIT_DISTANCE: f64 = 1e-12;

/// Recover `S'(k)` from a signal that carries only system `k` (plus noise).
pub fn demod_subsystem(signal: &SampleVector, k: usize, cfg: &SefdmConfig) -> Result<SubsystemSymbols> {
    Transmitter::new(cfg).demod_subsystem(signal, k)
}

/// `C(k) = r - sum_{j != k} U(j)`: the received signal with every system but
/// `k` cancelled using the current estimates.
pub fn residual(r: &SampleVector, est: &SoftEstimate, k: usize, cfg: &SefdmConfig) -> Result<SampleVector> {
    residual_with(&Transmitter::new(cfg), r, est, k)
}

pub(crate) fn residual_with(
    tx: &Transmitter,
    r: &SampleVector,
    est: &SoftEstimate,
    k: usize,
) -> Result<SampleVector> {
    let cfg = tx.config();
    r.check_len(cfg.n_samples())?;
    est.check_len(cfg.n_carriers())?;
    tx.rotation(k)?;
    let c = cfg.subsystems();
    let others = est
        .iter()
        .enumerate()
        .map(|(n, &z)| if n % c == k { Complex64::new(0.0, 0.0) } else { z })
        .collect();
    let others = tx.modulate_interleaved(&others)?;
    Ok(r.iter().zip(others.iter()).map(|(a, b)| a - b).collect())
}

/// Inverse-square-distance weighted centroid of the alphabet:
/// `G(z) = sum_a a / d(a, z)^2 / sum_a 1 / d(a, z)^2`.
///
/// Returns the point itself when `z` sits on it.
pub fn gravity(est: Complex64, alphabet: &Alphabet) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for &a in alphabet.points() {
        let d2 = (a - est).norm_sqr();
        if d2 < GRAVITY_HIT_DISTANCE * GRAVITY_HIT_DISTANCE {
            return a;
        }
        num += a / d2;
        den += 1.0 / d2;
    }
    num / den
}

/// Clamp real and imaginary parts into the alphabet's bounding box.
pub fn truncate(est: Complex64, alphabet: &Alphabet) -> Complex64 {
    alphabet.bounding_box().clamp(est)
}

/// Index of the nearest alphabet point; ties go to the lowest index.
pub fn slice_index(est: Complex64, alphabet: &Alphabet) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &a) in alphabet.points().iter().enumerate() {
        let d = (a - est).norm_sqr();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Hard decision: the nearest alphabet point.
pub fn slice(est: Complex64, alphabet: &Alphabet) -> Complex64 {
    alphabet.points()[slice_index(est, alphabet)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Alpha;
    use crate::random::RandomSource;
    use crate::signal::SymbolVector;
    use crate::txmod::{modulate_interleaved, modulate_subsystem, partition_symbols};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(n: usize, m: usize, b: usize, cc: usize, alphabet: Alphabet) -> SefdmConfig {
        SefdmConfig::new(n, m, Alpha::new(b, cc).unwrap(), alphabet).unwrap()
    }

    fn random_qam(n: usize, seed: u64) -> SymbolVector {
        let a = Alphabet::qam4();
        let mut bits = vec![0u8; 2 * n];
        RandomSource::new(seed, 0).fill_bits(&mut bits);
        a.bits_to_symbols(&bits).unwrap()
    }

    #[test]
    fn gravity_examples() {
        let q = Alphabet::qam4();
        for &a in q.points() {
            assert_eq!(gravity(a, &q), a);
        }
        assert!(gravity(c(0.0, 0.0), &q).norm() < 1e-15);
        let b = Alphabet::bpsk();
        assert!((gravity(c(0.5, 0.0), &b) - c(0.8, 0.0)).norm() < 1e-12);
        // within the exact-hit threshold
        assert_eq!(gravity(c(1.0 + 1e-13, 0.0), &b), c(1.0, 0.0));
    }

    #[test]
    fn truncate_examples() {
        let q = Alphabet::qam4();
        assert_eq!(truncate(c(1.3, -0.4), &q), c(1.0, -0.4));
        assert_eq!(truncate(c(0.2, -0.9), &q), c(0.2, -0.9));
        assert_eq!(truncate(c(0.7, 0.3), &Alphabet::bpsk()), c(0.7, 0.0));
    }

    #[test]
    fn slice_examples() {
        let q = Alphabet::qam4();
        assert_eq!(slice(c(0.2, 0.9), &q), c(1.0, 1.0));
        for &a in q.points() {
            assert_eq!(slice(a, &q), a);
        }
        assert_eq!(slice(c(0.0, 0.0), &q), q.points()[0]);
        assert_eq!(slice(c(0.0, 0.0), &Alphabet::bpsk()), c(1.0, 0.0));
    }

    #[test]
    fn demod_round_trip_and_trivial_cases() {
        let cf = cfg(12, 36, 2, 3, Alphabet::qam4());
        let s = random_qam(12, 1);
        for part in partition_symbols(&s, &cf).unwrap() {
            let u = modulate_subsystem(&part, &cf).unwrap();
            let back = demod_subsystem(&u, part.k(), &cf).unwrap();
            for (x, y) in back.values().iter().zip(part.values()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        let zero = demod_subsystem(&SampleVector::zeros(36), 2, &cf).unwrap();
        assert!(zero.values().iter().all(|z| z.norm() == 0.0));
        assert!(demod_subsystem(&SampleVector::zeros(36), 3, &cf).is_err());

        let ofdm = cfg(8, 8, 1, 1, Alphabet::qam4());
        let s = random_qam(8, 2);
        let u = modulate_interleaved(&s, &ofdm).unwrap();
        let back = demod_subsystem(&u, 0, &ofdm).unwrap();
        for (x, y) in back.values().iter().zip(s.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn residual_cases() {
        let cf = cfg(12, 12, 5, 6, Alphabet::qam4());
        let s = random_qam(12, 3);
        let r = modulate_interleaved(&s, &cf).unwrap();
        let est = SoftEstimate::new(s.to_vec());
        let parts = partition_symbols(&s, &cf).unwrap();
        for (k, part) in parts.iter().enumerate() {
            let res = residual(&r, &est, k, &cf).unwrap();
            let want = modulate_subsystem(part, &cf).unwrap();
            for (x, y) in res.iter().zip(want.iter()) {
                assert!((x - y).norm() < 1e-9);
            }
        }
        let zero_est = SoftEstimate::zeros(12);
        assert_eq!(residual(&r, &zero_est, 4, &cf).unwrap(), r);
        assert!(residual(&r, &zero_est, 6, &cf).is_err());
    }

    #[test]
    fn residual_plus_other_system_restores_signal() {
        let cf = cfg(10, 20, 1, 2, Alphabet::qam4());
        let s = random_qam(10, 4);
        let mut rng = RandomSource::new(5, 0);
        let r: SampleVector = (0..20).map(|_| rng.complex_normal(4.0)).collect();
        let est = SoftEstimate::new(s.to_vec());
        let res = residual(&r, &est, 0, &cf).unwrap();
        let part1 = &partition_symbols(&s, &cf).unwrap()[1];
        let u1 = modulate_subsystem(part1, &cf).unwrap();
        for ((a, b), want) in res.iter().zip(u1.iter()).zip(r.iter()) {
            assert!((a + b - want).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn gravity_stays_in_hull(re in -1.0f64..=1.0, im in -1.0f64..=1.0) {
            let g = gravity(c(re, im), &Alphabet::qam4());
            prop_assert!(g.re.abs() <= 1.0 + 1e-12 && g.im.abs() <= 1.0 + 1e-12);
            let gb = gravity(c(re, 0.0), &Alphabet::bpsk());
            prop_assert!(gb.re.abs() <= 1.0 + 1e-12 && gb.im == 0.0);
        }

        #[test]
        fn gravity_preserves_bpsk_decision(x in -3.0f64..3.0) {
            let b = Alphabet::bpsk();
            let z = c(x, 0.0);
            prop_assert_eq!(slice(gravity(z, &b), &b), slice(z, &b));
        }

        #[test]
        fn truncate_is_idempotent(re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let q = Alphabet::qam4();
            let t = truncate(c(re, im), &q);
            prop_assert!(q.bounding_box().contains(t));
            prop_assert_eq!(truncate(t, &q), t);
        }
    }
}
