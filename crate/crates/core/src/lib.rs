//! Spectrally efficient FDM (SEFDM) modem simulation.
//!
//! SEFDM packs `N` carriers at a spacing of `alpha = b / c` times the OFDM
//! spacing. Such a signal is exactly the sum of `c` frequency-shifted OFDM
//! systems, which gives an FFT-based transmitter ([`txmod`]) and an
//! iterative interference-cancelling receiver ([`detect::StripeDecoder`]).
//! [`harness`] measures bit error rates over AWGN with confidence intervals.
//!
//! ```
//! use sefdm_core::{Alpha, Alphabet, SefdmConfig, StripeParams};
//! use sefdm_core::{txmod, detect};
//!
//! let cfg = SefdmConfig::new(12, 12, Alpha::new(5, 6)?, Alphabet::qam4())?;
//! let s = cfg.alphabet().bits_to_symbols(&[0, 1, 1, 0].repeat(6))?;
//! let u = txmod::modulate_interleaved(&s, &cfg)?;
//! assert_eq!(detect::stripe_decode(&u, &cfg, StripeParams::default())?, s);
//! # Ok::<(), sefdm_core::Error>(())
//! ```

pub mod alphabet;
pub mod channel;
pub mod config;
pub mod detect;
pub mod error;
pub mod harness;
pub mod random;
pub mod signal;
pub mod txmod;

pub use alphabet::{Alphabet, AlphabetKind, BoundingBox};
pub use channel::NoiseSpec;
pub use config::{Alpha, SefdmConfig};
pub use detect::{MlDecoder, StripeDecoder, StripeParams};
pub use error::{Error, Result};
pub use harness::{BerRecord, DecoderKind, StopRule, SweepPoint, SweepSpec};
pub use random::RandomSource;
pub use signal::{SampleVector, SoftEstimate, SymbolVector};
pub use txmod::{CarrierMatrix, RotationVector, SubsystemSymbols, Transmitter};
