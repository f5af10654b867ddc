//! Fixtures shared by the benchmarks.

use sefdm_core::{Alpha, Alphabet, RandomSource, SampleVector, SefdmConfig, SymbolVector, Transmitter};

pub fn config(n: usize, m: usize, b: usize, c: usize) -> SefdmConfig {
    SefdmConfig::new(n, m, Alpha::new(b, c).expect("valid alpha"), Alphabet::qam4()).expect("valid config")
}

/// A random 4-QAM block and its noiseless samples.
pub fn block(cfg: &SefdmConfig, seed: u64) -> (SymbolVector, SampleVector) {
    let mut rng = RandomSource::new(seed, 0);
    let mut bits = vec![0u8; cfg.bits_per_block()];
    rng.fill_bits(&mut bits);
    let s = cfg.alphabet().bits_to_symbols(&bits).expect("bits fit the alphabet");
    let u = Transmitter::new(cfg).modulate_interleaved(&s).expect("matching length");
    (s, u)
}
