//! AWGN channel and inter-carrier interference diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::SefdmConfig;
use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::signal::SampleVector;

/// Noise level for one Eb/N0 point.
///
/// `Eb = M Es / bits_per_symbol` is the expected energy per bit of a block,
/// and `sigma2 = Eb / 10^(ebn0_db / 10)` is the complex noise variance added
/// to every time sample. An infinite `ebn0_db` means no noise at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    ebn0_db: f64,
    sigma2: f64,
}

impl NoiseSpec {
    pub fn new(ebn0_db: f64, cfg: &SefdmConfig) -> Result<Self> {
        if ebn0_db.is_nan() || ebn0_db == f64::NEG_INFINITY {
            return Err(Error::Parameter(format!("Eb/N0 of {ebn0_db} dB")));
        }
        if ebn0_db == f64::INFINITY {
            return Ok(Self::noiseless());
        }
        let alphabet = cfg.alphabet();
        let eb = cfg.n_samples() as f64 * alphabet.symbol_energy() / alphabet.bits_per_symbol() as f64;
        Ok(Self {
            ebn0_db,
            sigma2: eb / db_to_linear(ebn0_db),
        })
    }

    pub fn noiseless() -> Self {
        Self {
            ebn0_db: f64::INFINITY,
            sigma2: 0.0,
        }
    }

    pub fn ebn0_db(&self) -> f64 {
        self.ebn0_db
    }

    /// Complex noise variance per sample, `sigma2 / 2` per real dimension.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn is_noiseless(&self) -> bool {
        self.sigma2 == 0.0
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Add circularly symmetric Gaussian noise in place.
pub fn add_awgn_in_place(u: &mut [Complex64], spec: &NoiseSpec, rng: &mut RandomSource) {
    if spec.is_noiseless() {
        return;
    }
    for x in u.iter_mut() {
        *x += rng.complex_normal(spec.sigma2);
    }
}

pub fn add_awgn(u: &SampleVector, spec: &NoiseSpec, rng: &mut RandomSource) -> SampleVector {
    let mut r = u.clone();
    add_awgn_in_place(&mut r, spec, rng);
    r
}

/// `sin(pi x) / x`, continued to `pi` at zero. This is the form the
/// interference expressions are written in.
fn sinc_pi(x: f64) -> f64 {
    if x == 0.0 {
        PI
    } else {
        (PI * x).sin() / x
    }
}

/// Carriers an integer number of OFDM spacings apart do not interfere; this
/// also settles the `0 / 0` the sampled form hits when `M` divides the
/// spacing.
fn orthogonal(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

fn check_distinct(n: i64, m: i64) -> Result<()> {
    if n == m {
        Err(Error::SelfInterference(n))
    } else {
        Ok(())
    }
}

/// Interference on carrier `m` from carrier `n` in the continuous-time
/// system: `S_n (sinc[(n-m) alpha] / pi) exp[pi i (n-m) alpha]`.
///
/// Diagnostic only; the modem never uses it.
pub fn interference_continuous(n: i64, m: i64, alpha: f64, s_n: Complex64) -> Result<Complex64> {
    check_distinct(n, m)?;
    let x = (n - m) as f64 * alpha;
    if orthogonal(x) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(s_n * (sinc_pi(x) / PI) * Complex64::from_polar(1.0, PI * x))
}

/// The sampled counterpart of [`interference_continuous`] with `M` samples:
/// `S_n sinc[(n-m) alpha] / sinc[(n-m) alpha / M] exp[pi i (n-m) alpha (M-1)/M]`.
pub fn interference_discrete(
    n: i64,
    m: i64,
    alpha: f64,
    samples: usize,
    s_n: Complex64,
) -> Result<Complex64> {
    check_distinct(n, m)?;
    if samples == 0 {
        return Err(Error::Parameter("at least one sample is required".into()));
    }
    let x = (n - m) as f64 * alpha;
    if orthogonal(x) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let big_m = samples as f64;
    let rotation = Complex64::from_polar(1.0, PI * x * (big_m - 1.0) / big_m);
    Ok(s_n * (sinc_pi(x) / sinc_pi(x / big_m)) * rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::config::Alpha;

    fn ofdm(n: usize) -> SefdmConfig {
        SefdmConfig::new(n, n, Alpha::ONE, Alphabet::qam4()).unwrap()
    }

    #[test]
    fn sigma2_convention() {
        let bpsk = SefdmConfig::new(64, 64, Alpha::ONE, Alphabet::bpsk()).unwrap();
        assert!((NoiseSpec::new(0.0, &bpsk).unwrap().sigma2() - 64.0).abs() < 1e-12);
        // Es = 2, 2 bits per symbol: same Eb as BPSK
        assert!((NoiseSpec::new(0.0, &ofdm(64)).unwrap().sigma2() - 64.0).abs() < 1e-12);
        assert!((NoiseSpec::new(10.0, &ofdm(64)).unwrap().sigma2() - 6.4).abs() < 1e-12);
        assert!(NoiseSpec::new(f64::NAN, &bpsk).is_err());
    }

    #[test]
    fn infinite_ebn0_is_exact() {
        let spec = NoiseSpec::new(f64::INFINITY, &ofdm(8)).unwrap();
        assert!(spec.is_noiseless());
        let u: SampleVector = (0..8).map(|i| Complex64::new(i as f64, -0.5)).collect();
        let mut rng = RandomSource::new(0, 0);
        assert_eq!(add_awgn(&u, &spec, &mut rng), u);
    }

    #[test]
    fn noise_variance_and_whiteness() {
        let spec = NoiseSpec::new(3.0, &ofdm(16)).unwrap();
        let mut rng = RandomSource::new(42, 0);
        let n = 1_000_000;
        let u = SampleVector::zeros(n);
        let noise = add_awgn(&u, &spec, &mut rng);
        let var = noise.energy() / n as f64;
        assert!((var / spec.sigma2() - 1.0).abs() < 0.01, "variance {var}");
        let re_var = noise.iter().map(|z| z.re * z.re).sum::<f64>() / n as f64;
        assert!((re_var / (spec.sigma2() / 2.0) - 1.0).abs() < 0.01);
        let lag1: Complex64 = noise
            .windows(2)
            .map(|w| w[1] * w[0].conj())
            .sum::<Complex64>()
            / ((n - 1) as f64 * spec.sigma2());
        assert!(lag1.norm() < 0.01, "lag-1 autocorrelation {lag1}");
        let mean: Complex64 = noise.iter().sum::<Complex64>() / n as f64;
        assert!(mean.norm() < 0.01 * spec.sigma2().sqrt());
    }

    #[test]
    fn awgn_is_reproducible() {
        let spec = NoiseSpec::new(5.0, &ofdm(4)).unwrap();
        let u = SampleVector::zeros(4);
        let a = add_awgn(&u, &spec, &mut RandomSource::new(9, 2));
        let b = add_awgn(&u, &spec, &mut RandomSource::new(9, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn continuous_interference_values() {
        let one = Complex64::new(1.0, 0.0);
        for d in 1..6 {
            assert_eq!(interference_continuous(d, 0, 1.0, one).unwrap(), Complex64::new(0.0, 0.0));
        }
        let v = interference_continuous(1, 0, 0.5, one).unwrap();
        assert!((v - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-15);

        let fwd = interference_continuous(3, 1, 0.8, one).unwrap();
        let back = interference_continuous(1, 3, 0.8, one).unwrap();
        assert!((fwd - back.conj()).norm() < 1e-15);
        assert_eq!(interference_continuous(2, 2, 0.8, one), Err(Error::SelfInterference(2)));
    }

    #[test]
    fn discrete_interference_values() {
        let one = Complex64::new(1.0, 0.0);
        for m in [1, 4, 64] {
            assert_eq!(interference_discrete(2, 0, 1.0, m, one).unwrap(), Complex64::new(0.0, 0.0));
        }
        let x = 0.4;
        let v = interference_discrete(1, 0, x, 1, one).unwrap();
        assert!(v.im.abs() < 1e-15 && (v.re - 1.0).abs() < 1e-12);
        assert!(interference_discrete(1, 1, 0.5, 8, one).is_err());
        assert!(interference_discrete(1, 0, 0.5, 0, one).is_err());
    }

    #[test]
    fn magnification_factor_limit() {
        // sinc(x/M) -> pi, so the magnification sinc(x)/sinc(x/M) -> sinc(x)/pi
        let x: f64 = 0.833;
        let limit = (PI * x).sin() / x / PI;
        let at = |m: f64| (PI * x).sin() / x / ((PI * x / m).sin() / (x / m));
        assert!((at(4096.0) / limit - 1.0).abs() < 1e-3);
        assert!(at(16.0) > at(64.0) && at(64.0) > at(4096.0) && at(4096.0) > limit);
    }

    #[test]
    fn discrete_exaggerates_interference() {
        let s = Complex64::new(1.0, -1.0);
        for d in 1..=5i64 {
            let cont = interference_continuous(d, 0, 5.0 / 6.0, s).unwrap().norm();
            let mut prev = f64::INFINITY;
            for m in [16, 64, 256, 4096] {
                let disc = interference_discrete(d, 0, 5.0 / 6.0, m, s).unwrap().norm();
                assert!(disc >= cont && disc <= prev, "d={d} M={m}");
                prev = disc;
            }
            assert!((prev / cont - 1.0).abs() < 1e-3);
        }
    }
}
