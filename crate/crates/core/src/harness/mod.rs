//! Monte Carlo bit error rate measurement.
//!
//! Each sweep point runs symbol periods in fixed-size chunks. Chunk `i` of
//! point `p` draws from the random stream `(seed, p << 32 | i)`, and chunks
//! are processed in batches whose size does not depend on the number of
//! worker threads, so a sweep is a pure function of its [`SweepSpec`].

mod stats;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

pub use stats::{
    confidence_interval, db_penalty, interpolate_ebn0_db, q_function, theoretical_ber,
    theoretical_ebn0_db, Z_95,
};

use crate::channel::{add_awgn_in_place, NoiseSpec};
use crate::config::{Alpha, SefdmConfig};
use crate::detect::{slice_index, MlDecoder, StripeDecoder, StripeParams};
use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::txmod::{FftBuffers, Transmitter};

/// Symbol periods per random stream.
pub const CHUNK_PERIODS: u64 = 64;
/// Chunks evaluated between two checks of the stop rule.
pub const BATCH_CHUNKS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Stripe,
    Ml,
    /// Plain OFDM: the link runs at `alpha = 1` whatever the configured
    /// compression, and decodes with one forward DFT and a slicer.
    OfdmBaseline,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Stripe => "stripe",
            DecoderKind::Ml => "ml",
            DecoderKind::OfdmBaseline => "ofdm",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stripe" => Ok(DecoderKind::Stripe),
            "ml" => Ok(DecoderKind::Ml),
            "ofdm" | "ofdm-baseline" => Ok(DecoderKind::OfdmBaseline),
            other => Err(Error::Parameter(format!("unknown decoder `{other}`"))),
        }
    }
}

/// Outcome of one or more simulated symbol periods.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockOutcome {
    pub periods: u64,
    pub bits: u64,
    pub bit_errors: u64,
}

impl std::ops::AddAssign for BlockOutcome {
    fn add_assign(&mut self, rhs: Self) {
        self.periods += rhs.periods;
        self.bits += rhs.bits;
        self.bit_errors += rhs.bit_errors;
    }
}

#[derive(Debug, Clone)]
enum Receiver {
    Stripe(StripeDecoder),
    Ml(MlDecoder),
    Ofdm { data: Vec<Complex64>, fft: FftBuffers },
}

/// Transmitter, channel and receiver for one configuration and noise level.
///
/// Holds all per-block buffers; clone one per worker.
#[derive(Debug, Clone)]
pub struct Link {
    cfg: SefdmConfig,
    tx: Transmitter,
    rx: Receiver,
    noise: NoiseSpec,
    bits: Vec<u8>,
    sent: Vec<usize>,
    decided: Vec<usize>,
    symbols: Vec<Complex64>,
    signal: Vec<Complex64>,
    scratch: Vec<Complex64>,
    fft: FftBuffers,
}

impl Link {
    pub fn new(cfg: &SefdmConfig, ebn0_db: f64, decoder: DecoderKind, params: StripeParams) -> Result<Self> {
        let cfg = match decoder {
            DecoderKind::OfdmBaseline => cfg.with_alpha(Alpha::ONE),
            _ => cfg.clone(),
        };
        let tx = Transmitter::new(&cfg);
        let rx = match decoder {
            DecoderKind::Stripe => Receiver::Stripe(StripeDecoder::with_transmitter(tx.clone(), params)),
            DecoderKind::Ml => Receiver::Ml(MlDecoder::new(&cfg)?),
            DecoderKind::OfdmBaseline => Receiver::Ofdm {
                data: vec![Complex64::new(0.0, 0.0); cfg.n_carriers()],
                fft: tx.buffers(),
            },
        };
        Ok(Self {
            noise: NoiseSpec::new(ebn0_db, &cfg)?,
            bits: vec![0; cfg.bits_per_block()],
            sent: Vec::with_capacity(cfg.n_carriers()),
            decided: Vec::with_capacity(cfg.n_carriers()),
            symbols: Vec::with_capacity(cfg.n_carriers()),
            signal: vec![Complex64::new(0.0, 0.0); cfg.n_samples()],
            scratch: Vec::new(),
            fft: tx.buffers(),
            tx,
            rx,
            cfg,
        })
    }

    pub fn config(&self) -> &SefdmConfig {
        &self.cfg
    }

    /// One symbol period: random bits, interleaved modulation, AWGN,
    /// decoding, and a bit-by-bit comparison.
    pub fn run_block(&mut self, rng: &mut RandomSource) -> Result<BlockOutcome> {
        let alphabet = self.cfg.alphabet();
        let bps = alphabet.bits_per_symbol();
        rng.fill_bits(&mut self.bits);
        self.sent.clear();
        self.symbols.clear();
        for group in self.bits.chunks_exact(bps) {
            let label = group.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
            let idx = alphabet.index_of_label(label).expect("labels cover every bit pattern");
            self.sent.push(idx);
            self.symbols.push(alphabet.points()[idx]);
        }

        self.signal.fill(Complex64::new(0.0, 0.0));
        self.tx
            .add_all_branches(&self.symbols, 1.0, &mut self.signal, &mut self.scratch, &mut self.fft);
        add_awgn_in_place(&mut self.signal, &self.noise, rng);

        match &mut self.rx {
            Receiver::Stripe(dec) => dec.decode_indices(&self.signal, &mut self.decided)?,
            Receiver::Ml(dec) => dec.decode_indices(&self.signal, &mut self.decided)?,
            Receiver::Ofdm { data, fft } => {
                self.tx.demod_branch(0, &self.signal, data, fft);
                self.decided.clear();
                self.decided.extend(data.iter().map(|&z| slice_index(z, alphabet)));
            }
        }

        let bit_errors = self
            .sent
            .iter()
            .zip(&self.decided)
            .map(|(&a, &b)| u64::from(alphabet.label_distance(a, b)))
            .sum();
        Ok(BlockOutcome {
            periods: 1,
            bits: self.bits.len() as u64,
            bit_errors,
        })
    }

    pub fn run_blocks(&mut self, count: u64, rng: &mut RandomSource) -> Result<BlockOutcome> {
        let mut total = BlockOutcome::default();
        for _ in 0..count {
            total += self.run_block(rng)?;
        }
        Ok(total)
    }
}

/// Simulate a single symbol period.
pub fn run_block(
    cfg: &SefdmConfig,
    ebn0_db: f64,
    decoder: DecoderKind,
    params: StripeParams,
    rng: &mut RandomSource,
) -> Result<BlockOutcome> {
    Link::new(cfg, ebn0_db, decoder, params)?.run_block(rng)
}

/// When to stop simulating a point: after `min_bit_errors` errors or
/// `max_symbol_periods` periods, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_bit_errors: u64,
    pub max_symbol_periods: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_bit_errors: 100,
            max_symbol_periods: 1_000_000,
        }
    }
}

/// A sweep over compression ratios and Eb/N0 values for one decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Carriers, samples and alphabet; its alpha is replaced by each entry
    /// of `alphas`.
    pub template: SefdmConfig,
    pub alphas: Vec<Alpha>,
    pub ebn0_db: Vec<f64>,
    pub decoder: DecoderKind,
    pub stripe: StripeParams,
    pub stop: StopRule,
    pub seed: u64,
}

/// One `(alpha, Eb/N0)` pair of a sweep. `index` selects its random streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub index: u32,
    pub alpha: Alpha,
    pub ebn0_db: f64,
}

impl SweepSpec {
    pub fn new(template: SefdmConfig, decoder: DecoderKind, seed: u64) -> Self {
        Self {
            alphas: vec![template.alpha()],
            template,
            ebn0_db: Vec::new(),
            decoder,
            stripe: StripeParams::default(),
            stop: StopRule::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stop.min_bit_errors == 0 || self.stop.max_symbol_periods == 0 {
            return Err(Error::Parameter("stop rule limits must be positive".into()));
        }
        if self.alphas.is_empty() || self.ebn0_db.is_empty() {
            return Err(Error::Parameter("a sweep needs at least one alpha and one Eb/N0".into()));
        }
        for &db in &self.ebn0_db {
            NoiseSpec::new(db, &self.template)?;
        }
        if self.decoder == DecoderKind::Ml {
            crate::detect::ml::check_search_space(&self.template)?;
        }
        Ok(())
    }

    /// Points in output order: alphas as listed, Eb/N0 values as listed.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.alphas.len() * self.ebn0_db.len());
        for &alpha in &self.alphas {
            for &ebn0_db in &self.ebn0_db {
                out.push(SweepPoint {
                    index: out.len() as u32,
                    alpha,
                    ebn0_db,
                });
            }
        }
        out
    }
}

/// Result of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub config: SefdmConfig,
    pub decoder: DecoderKind,
    pub iterations: usize,
    pub seed: u64,
    pub ebn0_db: f64,
    pub periods: u64,
    pub bits_total: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub wall_time_s: f64,
}

impl BerRecord {
    /// Equality of everything except the wall-clock time.
    pub fn same_result(&self, other: &BerRecord) -> bool {
        BerRecord {
            wall_time_s: 0.0,
            ..self.clone()
        } == BerRecord {
            wall_time_s: 0.0,
            ..other.clone()
        }
    }
}

/// Simulate one point on the current rayon pool.
pub fn run_point(spec: &SweepSpec, point: &SweepPoint) -> Result<BerRecord> {
    let start = Instant::now();
    let cfg = spec.template.with_alpha(point.alpha);
    let proto = Arc::new(Link::new(&cfg, point.ebn0_db, spec.decoder, spec.stripe)?);
    let max = spec.stop.max_symbol_periods;
    let chunks = max.div_ceil(CHUNK_PERIODS);

    let mut total = BlockOutcome::default();
    let mut next_chunk = 0u64;
    while next_chunk < chunks && total.bit_errors < spec.stop.min_bit_errors {
        let batch_end = (next_chunk + BATCH_CHUNKS).min(chunks);
        let outcomes: Vec<Result<BlockOutcome>> = (next_chunk..batch_end)
            .into_par_iter()
            .map_init(
                || Link::clone(&proto),
                |link, chunk| {
                    let first = chunk * CHUNK_PERIODS;
                    let count = CHUNK_PERIODS.min(max - first);
                    let mut rng = RandomSource::new(
                        spec.seed,
                        RandomSource::stream_id(point.index, chunk as u32),
                    );
                    link.run_blocks(count, &mut rng)
                },
            )
            .collect();
        for o in outcomes {
            total += o?;
        }
        next_chunk = batch_end;
    }

    let (ci_low, ci_high) = confidence_interval(total.bit_errors, total.bits);
    Ok(BerRecord {
        config: cfg,
        decoder: spec.decoder,
        iterations: spec.stripe.iterations(),
        seed: spec.seed,
        ebn0_db: point.ebn0_db,
        periods: total.periods,
        bits_total: total.bits,
        bit_errors: total.bit_errors,
        ber: total.bit_errors as f64 / total.bits as f64,
        ci_low,
        ci_high,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Run every point of the sweep on the global rayon pool.
pub fn ber_sweep(spec: &SweepSpec) -> Result<Vec<BerRecord>> {
    spec.validate()?;
    spec.points().iter().map(|p| run_point(spec, p)).collect()
}

/// Run the sweep on a dedicated pool of `workers` threads.
pub fn ber_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<Vec<BerRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| ber_sweep(spec))
}
