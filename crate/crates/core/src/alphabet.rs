//! Constellation alphabets and Gray-labelled bit mapping.
//!
//! Points are kept unnormalised: BPSK is `{+1, -1}` and 4-QAM is `±1±i`, so
//! every real and imaginary component lies in `[-1, 1]`. Energy calibration
//! happens in the channel, through [`Alphabet::symbol_energy`].

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::SymbolVector;

/// Named alphabets with a known closed-form AWGN error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphabetKind {
    Bpsk,
    Qam4,
    Custom,
}

impl AlphabetKind {
    pub fn name(self) -> &'static str {
        match self {
            AlphabetKind::Bpsk => "bpsk",
            AlphabetKind::Qam4 => "qam4",
            AlphabetKind::Custom => "custom",
        }
    }
}

impl fmt::Display for AlphabetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Axis-aligned box enclosing all points of an alphabet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BoundingBox {
    /// Clamp the real and imaginary parts independently into the box.
    #[inline]
    pub fn clamp(&self, z: Complex64) -> Complex64 {
        Complex64::new(
            z.re.clamp(self.re_min, self.re_max),
            z.im.clamp(self.im_min, self.im_max),
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }
}

/// A finite complex constellation with one bit label per point.
///
/// Labels are stored as integers whose `bits_per_symbol` low bits are the
/// label, most significant bit first on the wire.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    kind: AlphabetKind,
    points: Vec<Complex64>,
    labels: Vec<u32>,
    bits_per_symbol: usize,
    bounding_box: BoundingBox,
}

impl Alphabet {
    /// Binary phase shift keying, `+1 -> 0`, `-1 -> 1`.
    pub fn bpsk() -> Self {
        Self::build(
            AlphabetKind::Bpsk,
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            vec![0b0, 0b1],
        )
        .expect("bpsk table is valid")
    }

    /// Gray-coded 4-QAM: `+1+i -> 00`, `-1+i -> 01`, `-1-i -> 11`, `+1-i -> 10`.
    ///
    /// The first bit selects the sign of the imaginary part and the second
    /// the sign of the real part.
    pub fn qam4() -> Self {
        Self::build(
            AlphabetKind::Qam4,
            vec![
                Complex64::new(1.0, 1.0),
                Complex64::new(-1.0, 1.0),
                Complex64::new(-1.0, -1.0),
                Complex64::new(1.0, -1.0),
            ],
            vec![0b00, 0b01, 0b11, 0b10],
        )
        .expect("qam4 table is valid")
    }

    /// An arbitrary alphabet. The number of points must be a power of two,
    /// the points distinct, and the labels a permutation of `0..len`.
    pub fn custom(points: Vec<Complex64>, labels: Vec<u32>) -> Result<Self> {
        Self::build(AlphabetKind::Custom, points, labels)
    }

    /// Look up a named alphabet (`bpsk` or `qam4`).
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "bpsk" => Some(Self::bpsk()),
            "qam4" | "4qam" | "qpsk" => Some(Self::qam4()),
            _ => None,
        }
    }

    fn build(kind: AlphabetKind, points: Vec<Complex64>, labels: Vec<u32>) -> Result<Self> {
        let size = points.len();
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::Alphabet(format!(
                "size must be a power of two >= 2, got {size}"
            )));
        }
        if labels.len() != size {
            return Err(Error::Alphabet(format!(
                "{} labels for {size} points",
                labels.len()
            )));
        }
        for (i, a) in points.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Alphabet(format!("point {a} is not finite")));
            }
            if points[..i].contains(a) {
                return Err(Error::Alphabet(format!("point {a} appears twice")));
            }
        }
        let mut seen = vec![false; size];
        for &l in &labels {
            match seen.get_mut(l as usize) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(Error::Alphabet(format!(
                        "labels must be a permutation of 0..{size}"
                    )))
                }
            }
        }

        let bits_per_symbol = size.trailing_zeros() as usize;
        let fold = |f: fn(&Complex64) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
            points.iter().map(f).fold(init, pick)
        };
        let bounding_box = BoundingBox {
            re_min: fold(|z| z.re, f64::INFINITY, f64::min),
            re_max: fold(|z| z.re, f64::NEG_INFINITY, f64::max),
            im_min: fold(|z| z.im, f64::INFINITY, f64::min),
            im_max: fold(|z| z.im, f64::NEG_INFINITY, f64::max),
        };
        Ok(Self {
            kind,
            points,
            labels,
            bits_per_symbol,
            bounding_box,
        })
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bounding_box
    }

    /// Mean symbol energy `E[|a|^2]` over equiprobable points.
    pub fn symbol_energy(&self) -> f64 {
        self.points.iter().map(|a| a.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Index of the point exactly equal to `z`, if any.
    pub fn index_of(&self, z: Complex64) -> Option<usize> {
        self.points.iter().position(|&a| a == z)
    }

    /// Index of the point carrying `label`.
    pub fn index_of_label(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Map `N * bits_per_symbol` bits (each 0 or 1) onto `N` symbols.
    pub fn bits_to_symbols(&self, bits: &[u8]) -> Result<SymbolVector> {
        let bps = self.bits_per_symbol;
        if !bits.len().is_multiple_of(bps) {
            return Err(Error::Dimension {
                expected: bits.len().div_ceil(bps) * bps,
                got: bits.len(),
            });
        }
        bits.chunks_exact(bps)
            .map(|group| {
                let label = group.iter().try_fold(0u32, |acc, &b| match b {
                    0 | 1 => Ok((acc << 1) | u32::from(b)),
                    other => Err(Error::Parameter(format!("bit value {other} is not 0 or 1"))),
                })?;
                let idx = self.index_of_label(label).expect("labels are a permutation");
                Ok(self.points[idx])
            })
            .collect::<Result<Vec<_>>>()
            .map(SymbolVector::new)
    }

    /// Inverse of [`Alphabet::bits_to_symbols`]. Every symbol must be an
    /// exact alphabet point; slice soft values first.
    pub fn symbols_to_bits(&self, symbols: &[Complex64]) -> Result<Vec<u8>> {
        let mut bits = Vec::with_capacity(symbols.len() * self.bits_per_symbol);
        for &z in symbols {
            let idx = self
                .index_of(z)
                .ok_or_else(|| Error::NotInAlphabet(z.to_string()))?;
            self.push_label_bits(idx, &mut bits);
        }
        Ok(bits)
    }

    /// Append the label bits of point `idx`, MSB first.
    pub fn push_label_bits(&self, idx: usize, out: &mut Vec<u8>) {
        let label = self.labels[idx];
        for shift in (0..self.bits_per_symbol).rev() {
            out.push(((label >> shift) & 1) as u8);
        }
    }

    /// Number of differing label bits between points `i` and `j`.
    #[inline]
    pub fn label_distance(&self, i: usize, j: usize) -> u32 {
        (self.labels[i] ^ self.labels[j]).count_ones()
    }
}

/// Free-function form of [`Alphabet::bits_to_symbols`].
pub fn bits_to_symbols(bits: &[u8], alphabet: &Alphabet) -> Result<SymbolVector> {
    alphabet.bits_to_symbols(bits)
}

/// Free-function form of [`Alphabet::symbols_to_bits`].
pub fn symbols_to_bits(symbols: &SymbolVector, alphabet: &Alphabet) -> Result<Vec<u8>> {
    alphabet.symbols_to_bits(symbols)
}
