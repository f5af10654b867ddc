//! SEFDM signal generation.
//!
//! Two routes produce the same samples
//!
//! ```text
//! U_m = sum_{k<N} S_k exp(2 pi i k m b / (c M))
//! ```
//!
//! The direct route evaluates the sum through the `N x M` carrier matrix. The
//! interleaved route splits the carriers into `c` OFDM systems (carriers
//! `k, k + c, k + 2c, ...`), synthesises each one with an `M`-point inverse
//! DFT that places its symbols on every `b`-th bin, and multiplies the result
//! by the rotation `exp(2 pi i m k b / (c M))` before summing.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::config::SefdmConfig;
use crate::error::{Error, Result};
use crate::signal::{check_len, SampleVector, SymbolVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `exp(2 pi i j / period)` for `j` in `0..period`.
///
/// Phases of the form `n m b / (c M)` are reduced modulo `c M` as integers
/// before the table lookup, so large index products lose no precision.
#[derive(Clone)]
struct Twiddles {
    table: Vec<Complex64>,
}

impl Twiddles {
    fn new(period: usize) -> Self {
        let table = (0..period)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / period as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Self { table }
    }

    #[inline]
    fn at(&self, numerator: usize) -> Complex64 {
        self.table[numerator % self.table.len()]
    }
}

fn config_twiddles(cfg: &SefdmConfig) -> Twiddles {
    Twiddles::new(cfg.subsystems() * cfg.n_samples())
}

/// The `N x M` matrix `c_nm = exp(2 pi i n m b / (c M))`, row-major.
#[derive(Clone, PartialEq)]
pub struct CarrierMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CarrierMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.cols + m]
    }

    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.entries[n * self.cols..(n + 1) * self.cols]
    }

    /// `U = S C`.
    pub fn apply(&self, s: &[Complex64]) -> Result<SampleVector> {
        check_len(s, self.rows)?;
        let mut out = vec![ZERO; self.cols];
        for (n, &sn) in s.iter().enumerate() {
            if sn == ZERO {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(self.row(n)) {
                *o += sn * c;
            }
        }
        Ok(SampleVector::new(out))
    }
}

impl fmt::Debug for CarrierMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CarrierMatrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish_non_exhaustive()
    }
}

pub fn carrier_matrix(cfg: &SefdmConfig) -> CarrierMatrix {
    let (rows, cols) = (cfg.n_carriers(), cfg.n_samples());
    let b = cfg.alpha().num();
    let tw = config_twiddles(cfg);
    let period = cfg.subsystems() * cols;
    let mut entries = Vec::with_capacity(rows * cols);
    for n in 0..rows {
        let step = (n * b) % period;
        entries.extend((0..cols).map(|m| tw.at(step * m % period)));
    }
    CarrierMatrix {
        rows,
        cols,
        entries,
    }
}

/// Naive `O(N M)` evaluation of the SEFDM sample equation.
pub fn modulate_direct(s: &SymbolVector, cfg: &SefdmConfig) -> Result<SampleVector> {
    s.check_len(cfg.n_carriers())?;
    let b = cfg.alpha().num();
    let tw = config_twiddles(cfg);
    let period = cfg.subsystems() * cfg.n_samples();
    let out = (0..cfg.n_samples())
        .map(|m| {
            s.iter()
                .enumerate()
                .map(|(k, &sk)| sk * tw.at(k * b % period * m % period))
                .sum()
        })
        .collect();
    Ok(out)
}

/// Symbols carried by interleaved system `k`, laid out on its own carrier
/// grid: entry `l * b` holds `S_{l c + k}`, every other entry is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemSymbols {
    k: usize,
    values: Vec<Complex64>,
}

impl SubsystemSymbols {
    /// Validates the layout: length `N' b / c` with zeros off the `b` grid.
    pub fn new(k: usize, values: Vec<Complex64>, cfg: &SefdmConfig) -> Result<Self> {
        check_subsystem(k, cfg)?;
        check_len(&values, cfg.subsystem_len())?;
        let b = cfg.alpha().num();
        if let Some((n, v)) = values
            .iter()
            .enumerate()
            .find(|&(n, v)| n % b != 0 && *v != ZERO)
        {
            return Err(Error::Parameter(format!(
                "subsystem entry {n} = {v} lies off the carrier grid of spacing {b}"
            )));
        }
        Ok(Self { k, values })
    }

    /// Build from the compact data `S_k, S_{c+k}, S_{2c+k}, ...`.
    pub fn from_data(k: usize, data: &[Complex64], cfg: &SefdmConfig) -> Result<Self> {
        check_subsystem(k, cfg)?;
        check_len(data, cfg.symbols_per_subsystem())?;
        let b = cfg.alpha().num();
        let mut values = vec![ZERO; cfg.subsystem_len()];
        for (l, &d) in data.iter().enumerate() {
            values[l * b] = d;
        }
        Ok(Self { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// The data-bearing entries `values[l * b]`.
    pub fn data(&self, cfg: &SefdmConfig) -> Vec<Complex64> {
        self.values
            .iter()
            .step_by(cfg.alpha().num())
            .copied()
            .collect()
    }
}

/// Diagonal of the rotation matrix `r(k)_m = exp(2 pi i m k b / (c M))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationVector {
    k: usize,
    entries: Vec<Complex64>,
}

impl RotationVector {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

pub fn rotation_vector(k: usize, cfg: &SefdmConfig) -> Result<RotationVector> {
    check_subsystem(k, cfg)?;
    Ok(rotation_with(&config_twiddles(cfg), k, cfg))
}

fn rotation_with(tw: &Twiddles, k: usize, cfg: &SefdmConfig) -> RotationVector {
    let step = k * cfg.alpha().num();
    let entries = (0..cfg.n_samples()).map(|m| tw.at(step * m)).collect();
    RotationVector { k, entries }
}

fn check_subsystem(k: usize, cfg: &SefdmConfig) -> Result<()> {
    if k < cfg.subsystems() {
        Ok(())
    } else {
        Err(Error::SubsystemOutOfRange {
            k,
            subsystems: cfg.subsystems(),
        })
    }
}

/// Split `S` into the `c` interleaved systems, zero-padding to `N'` carriers.
pub fn partition_symbols(s: &SymbolVector, cfg: &SefdmConfig) -> Result<Vec<SubsystemSymbols>> {
    s.check_len(cfg.n_carriers())?;
    let c = cfg.subsystems();
    let b = cfg.alpha().num();
    let mut parts: Vec<SubsystemSymbols> = (0..c)
        .map(|k| SubsystemSymbols {
            k,
            values: vec![ZERO; cfg.subsystem_len()],
        })
        .collect();
    for (n, &sn) in s.iter().enumerate() {
        parts[n % c].values[(n / c) * b] = sn;
    }
    Ok(parts)
}

/// Reassemble `S` from its subsystems: `S_n = S'(n mod c)_{b (n - n mod c) / c}`.
pub fn merge_symbols(parts: &[SubsystemSymbols], cfg: &SefdmConfig) -> Result<SymbolVector> {
    let c = cfg.subsystems();
    if parts.len() != c {
        return Err(Error::Dimension {
            expected: c,
            got: parts.len(),
        });
    }
    for (k, p) in parts.iter().enumerate() {
        if p.k != k {
            return Err(Error::Parameter(format!(
                "subsystem at position {k} is labelled {}",
                p.k
            )));
        }
        check_len(&p.values, cfg.subsystem_len())?;
    }
    let b = cfg.alpha().num();
    Ok((0..cfg.n_carriers())
        .map(|n| parts[n % c].values[b * (n - n % c) / c])
        .collect())
}

/// Precomputed transforms and rotations for one configuration.
///
/// Cheap to share between threads; per-call buffers live in [`FftBuffers`].
#[derive(Clone)]
pub struct Transmitter {
    cfg: SefdmConfig,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
    rotations: Vec<RotationVector>,
}

/// Working memory for one thread of [`Transmitter`] calls.
#[derive(Debug, Clone)]
pub struct FftBuffers {
    bins: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Transmitter {
    pub fn new(cfg: &SefdmConfig) -> Self {
        let mut planner = FftPlanner::new();
        let m = cfg.n_samples();
        let tw = config_twiddles(cfg);
        Self {
            cfg: cfg.clone(),
            inverse: planner.plan_fft_inverse(m),
            forward: planner.plan_fft_forward(m),
            rotations: (0..cfg.subsystems())
                .map(|k| rotation_with(&tw, k, cfg))
                .collect(),
        }
    }

    pub fn config(&self) -> &SefdmConfig {
        &self.cfg
    }

    pub fn rotation(&self, k: usize) -> Result<&RotationVector> {
        check_subsystem(k, &self.cfg)?;
        Ok(&self.rotations[k])
    }

    pub fn buffers(&self) -> FftBuffers {
        let scratch = self
            .inverse
            .get_inplace_scratch_len()
            .max(self.forward.get_inplace_scratch_len());
        FftBuffers {
            bins: vec![ZERO; self.cfg.n_samples()],
            scratch: vec![ZERO; scratch],
        }
    }

    /// `acc += sign * U'(k)` for the compact data `S_{lc+k}`, `l < N'/c`.
    pub(crate) fn add_branch(
        &self,
        k: usize,
        data: &[Complex64],
        sign: f64,
        acc: &mut [Complex64],
        buf: &mut FftBuffers,
    ) {
        let b = self.cfg.alpha().num();
        buf.bins.fill(ZERO);
        for (l, &d) in data.iter().enumerate() {
            buf.bins[l * b] = d * sign;
        }
        self.inverse
            .process_with_scratch(&mut buf.bins, &mut buf.scratch);
        if k == 0 {
            for (a, &x) in acc.iter_mut().zip(&buf.bins) {
                *a += x;
            }
        } else {
            for ((a, &x), &r) in acc.iter_mut().zip(&buf.bins).zip(&self.rotations[k].entries) {
                *a += x * r;
            }
        }
    }

    /// Derotate by `conj(r(k))`, take the forward DFT scaled by `1/M`, and
    /// write the bins `0, b, 2b, ...` into `out` (length `N'/c`).
    pub(crate) fn demod_branch(
        &self,
        k: usize,
        signal: &[Complex64],
        out: &mut [Complex64],
        buf: &mut FftBuffers,
    ) {
        if k == 0 {
            buf.bins.copy_from_slice(signal);
        } else {
            for ((x, &s), &r) in buf.bins.iter_mut().zip(signal).zip(&self.rotations[k].entries) {
                *x = s * r.conj();
            }
        }
        self.forward
            .process_with_scratch(&mut buf.bins, &mut buf.scratch);
        let scale = 1.0 / self.cfg.n_samples() as f64;
        let b = self.cfg.alpha().num();
        for (l, o) in out.iter_mut().enumerate() {
            *o = buf.bins[l * b] * scale;
        }
    }

    /// `acc += sign * U'` for a full (unpadded) symbol vector.
    pub(crate) fn add_all_branches(
        &self,
        s: &[Complex64],
        sign: f64,
        acc: &mut [Complex64],
        data: &mut Vec<Complex64>,
        buf: &mut FftBuffers,
    ) {
        let c = self.cfg.subsystems();
        for k in 0..c {
            gather_subsystem(s, k, c, self.cfg.symbols_per_subsystem(), data);
            if data.iter().all(|&d| d == ZERO) {
                continue;
            }
            self.add_branch(k, data, sign, acc, buf);
        }
    }

    pub fn modulate_subsystem(&self, part: &SubsystemSymbols) -> Result<SampleVector> {
        check_subsystem(part.k, &self.cfg)?;
        check_len(&part.values, self.cfg.subsystem_len())?;
        let mut out = vec![ZERO; self.cfg.n_samples()];
        let data = part.data(&self.cfg);
        self.add_branch(part.k, &data, 1.0, &mut out, &mut self.buffers());
        Ok(SampleVector::new(out))
    }

    pub fn modulate_interleaved(&self, s: &SymbolVector) -> Result<SampleVector> {
        s.check_len(self.cfg.n_carriers())?;
        let mut out = vec![ZERO; self.cfg.n_samples()];
        let mut data = Vec::new();
        self.add_all_branches(s, 1.0, &mut out, &mut data, &mut self.buffers());
        Ok(SampleVector::new(out))
    }

    pub fn demod_subsystem(&self, signal: &SampleVector, k: usize) -> Result<SubsystemSymbols> {
        check_subsystem(k, &self.cfg)?;
        signal.check_len(self.cfg.n_samples())?;
        let mut data = vec![ZERO; self.cfg.symbols_per_subsystem()];
        self.demod_branch(k, signal, &mut data, &mut self.buffers());
        SubsystemSymbols::from_data(k, &data, &self.cfg)
    }
}

impl fmt::Debug for Transmitter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transmitter")
            .field("cfg", &self.cfg)
            .finish_non_exhaustive()
    }
}

/// Collect `S_{lc+k}` for `l < per_subsystem`, zero beyond the end of `s`.
#[inline]
pub(crate) fn gather_subsystem(
    s: &[Complex64],
    k: usize,
    c: usize,
    per_subsystem: usize,
    out: &mut Vec<Complex64>,
) {
    out.clear();
    out.extend((0..per_subsystem).map(|l| s.get(l * c + k).copied().unwrap_or(ZERO)));
}

/// Interleaved-OFDM synthesis; equal to [`modulate_direct`] up to rounding.
pub fn modulate_interleaved(s: &SymbolVector, cfg: &SefdmConfig) -> Result<SampleVector> {
    Transmitter::new(cfg).modulate_interleaved(s)
}

/// The signal `U'(k)` of a single interleaved system.
pub fn modulate_subsystem(part: &SubsystemSymbols, cfg: &SefdmConfig) -> Result<SampleVector> {
    Transmitter::new(cfg).modulate_subsystem(part)
}
