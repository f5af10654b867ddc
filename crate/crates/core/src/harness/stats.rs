//! Closed-form reference curves and binomial confidence intervals.

use crate::alphabet::{Alphabet, AlphabetKind};
use crate::channel::db_to_linear;
use crate::error::{Error, Result};

/// z-score of a two-sided 95% interval.
pub const Z_95: f64 = 1.96;

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Bit error rate of uncoded BPSK or Gray-coded 4-QAM over AWGN,
/// `Q(sqrt(2 Eb/N0))`. Both alphabets share the curve at equal Eb/N0.
pub fn theoretical_ber(ebn0_db: f64, alphabet: &Alphabet) -> Result<f64> {
    match alphabet.kind() {
        AlphabetKind::Bpsk | AlphabetKind::Qam4 => {}
        AlphabetKind::Custom => return Err(Error::UnsupportedAlphabet(alphabet.name().into())),
    }
    if ebn0_db.is_nan() {
        return Err(Error::Parameter("Eb/N0 is NaN".into()));
    }
    if ebn0_db == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(q_function((2.0 * db_to_linear(ebn0_db)).sqrt()))
}

/// The Eb/N0 (dB) at which the theoretical curve reaches `ber`.
pub fn theoretical_ebn0_db(ber: f64, alphabet: &Alphabet) -> Result<f64> {
    if !(ber > 0.0 && ber < 0.5) {
        return Err(Error::Parameter(format!("target BER {ber} outside (0, 0.5)")));
    }
    let (mut lo, mut hi) = (-30.0f64, 30.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if theoretical_ber(mid, alphabet)? > ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// 95% interval for a bit error rate measured as `errors / bits`.
///
/// Normal approximation `p +- 1.96 sqrt(p (1 - p) / bits)` clamped to
/// `[0, 1]`; with no errors the rule of three gives `(0, 3 / bits)`.
pub fn confidence_interval(errors: u64, bits: u64) -> (f64, f64) {
    assert!(bits >= 1, "confidence interval needs at least one bit");
    assert!(errors <= bits, "more errors than bits");
    let n = bits as f64;
    if errors == 0 {
        return (0.0, (3.0 / n).min(1.0));
    }
    let p = errors as f64 / n;
    let half = Z_95 * (p * (1.0 - p) / n).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

/// Eb/N0 at which a measured curve crosses `target`, interpolating
/// `log10(BER)` linearly in dB between the bracketing points.
///
/// Points with zero errors carry no information on the log scale and are
/// skipped. Returns `None` if the curve never brackets the target.
pub fn interpolate_ebn0_db(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = curve
        .iter()
        .copied()
        .filter(|&(db, ber)| db.is_finite() && ber > 0.0)
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let t = target.log10();
    pts.windows(2).find_map(|w| {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        let (y0, y1) = (b0.log10(), b1.log10());
        if y0 >= t && t >= y1 && y0 != y1 {
            Some(x0 + (t - y0) * (x1 - x0) / (y1 - y0))
        } else if y0 == t {
            Some(x0)
        } else {
            None
        }
    })
}

/// Horizontal distance (dB) between a measured curve and the theoretical
/// curve at BER `target`. Positive means the measured system needs more
/// power.
pub fn db_penalty(curve: &[(f64, f64)], target: f64, alphabet: &Alphabet) -> Result<f64> {
    let measured = interpolate_ebn0_db(curve, target).ok_or_else(|| {
        Error::Parameter(format!("measured curve does not bracket BER {target}"))
    })?;
    Ok(measured - theoretical_ebn0_db(target, alphabet)?)
}
