//! Iterative "stripe" decoder.
//!
//! SEFDM with `alpha = b / c` is the sum of `c` interleaved OFDM systems.
//! Each sweep re-estimates the systems one at a time: cancel the signal of
//! every other system using the current estimates, demodulate what is left
//! with a frequency-shifted DFT, clamp into the alphabet's bounding box and
//! write the new estimates back immediately. After the sweep every estimate
//! is pulled towards the alphabet by [`gravity`], with a weight that ramps
//! linearly from `1/J` to `1` over the `J` sweeps. Finally each estimate is
//! sliced to the nearest point.

use num_complex::Complex64;

use super::{gravity, slice_index, truncate};
use crate::config::SefdmConfig;
use crate::error::{Error, Result};
use crate::signal::{check_len, SampleVector, SoftEstimate, SymbolVector};
use crate::txmod::{FftBuffers, Transmitter};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripeParams {
    iterations: usize,
}

impl StripeParams {
    pub const DEFAULT_ITERATIONS: usize = 20;

    pub fn new(iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::Parameter(
                "the stripe decoder needs at least one iteration".into(),
            ));
        }
        Ok(Self { iterations })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

impl Default for StripeParams {
    fn default() -> Self {
        Self {
            iterations: Self::DEFAULT_ITERATIONS,
        }
    }
}

/// Stripe decoder with its transforms and working buffers.
///
/// One instance decodes one block at a time; clone it per worker.
#[derive(Debug, Clone)]
pub struct StripeDecoder {
    tx: Transmitter,
    params: StripeParams,
    est: Vec<Complex64>,
    err: Vec<Complex64>,
    update: Vec<Complex64>,
    delta: Vec<Complex64>,
    scratch: Vec<Complex64>,
    fft: FftBuffers,
}

impl StripeDecoder {
    pub fn new(cfg: &SefdmConfig, params: StripeParams) -> Self {
        Self::with_transmitter(Transmitter::new(cfg), params)
    }

    pub fn with_transmitter(tx: Transmitter, params: StripeParams) -> Self {
        let cfg = tx.config();
        let per = cfg.symbols_per_subsystem();
        Self {
            est: vec![ZERO; cfg.n_carriers()],
            err: vec![ZERO; cfg.n_samples()],
            update: vec![ZERO; per],
            delta: vec![ZERO; per],
            scratch: Vec::with_capacity(per),
            fft: tx.buffers(),
            tx,
            params,
        }
    }

    pub fn params(&self) -> StripeParams {
        self.params
    }

    pub fn config(&self) -> &SefdmConfig {
        self.tx.config()
    }

    /// Run all `J` sweeps and return the soft estimates before slicing.
    pub fn decode_soft(&mut self, r: &[Complex64]) -> Result<SoftEstimate> {
        self.run(r)?;
        Ok(SoftEstimate::new(self.est.clone()))
    }

    /// Decode to hard symbols.
    pub fn decode(&mut self, r: &[Complex64]) -> Result<SymbolVector> {
        self.run(r)?;
        let points = self.tx.config().alphabet().points();
        let alphabet = self.tx.config().alphabet();
        Ok(self
            .est
            .iter()
            .map(|&z| points[slice_index(z, alphabet)])
            .collect())
    }

    /// Decode to alphabet point indices, reusing `out`.
    pub fn decode_indices(&mut self, r: &[Complex64], out: &mut Vec<usize>) -> Result<()> {
        self.run(r)?;
        let alphabet = self.tx.config().alphabet();
        out.clear();
        out.extend(self.est.iter().map(|&z| slice_index(z, alphabet)));
        Ok(())
    }

    fn run(&mut self, r: &[Complex64]) -> Result<()> {
        let cfg = self.tx.config();
        check_len(r, cfg.n_samples())?;
        let n = cfg.n_carriers();
        let c = cfg.subsystems();
        let alphabet = cfg.alphabet();
        let big_j = self.params.iterations;

        self.est.fill(ZERO);
        for j in 1..=big_j {
            // err = r - U(est); the cancelled signal for system k is then
            // err + U_k(est_k), whose demodulation is est_k + demod_k(err).
            self.err.copy_from_slice(r);
            self.tx
                .add_all_branches(&self.est, -1.0, &mut self.err, &mut self.scratch, &mut self.fft);

            for k in 0..c {
                self.tx.demod_branch(k, &self.err, &mut self.update, &mut self.fft);
                let mut changed = false;
                for (l, (u, d)) in self.update.iter().zip(self.delta.iter_mut()).enumerate() {
                    let idx = l * c + k;
                    *d = if idx < n {
                        let old = self.est[idx];
                        let new = truncate(old + u, alphabet);
                        self.est[idx] = new;
                        new - old
                    } else {
                        ZERO
                    };
                    changed |= *d != ZERO;
                }
                if changed && k + 1 < c {
                    self.tx.add_branch(k, &self.delta, -1.0, &mut self.err, &mut self.fft);
                }
            }

            let keep = (big_j - j) as f64 / big_j as f64;
            let pull = j as f64 / big_j as f64;
            for z in self.est.iter_mut() {
                *z = *z * keep + gravity(*z, alphabet) * pull;
            }
        }
        Ok(())
    }
}

/// Decode one received block with a freshly built [`StripeDecoder`].
pub fn stripe_decode(r: &SampleVector, cfg: &SefdmConfig, params: StripeParams) -> Result<SymbolVector> {
    StripeDecoder::new(cfg, params).decode(r)
}
