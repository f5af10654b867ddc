//! Exhaustive maximum-likelihood detection.
//!
//! Every candidate `S` in `A^N` is scored by `||r - S C||^2`. Expanding the
//! norm, `||S C||^2` does not depend on `r` and is computed once per
//! configuration; per block only the correlations `y_n = sum_m conj(r_m)
//! c_nm` are needed, and a depth-first walk over the candidates shares the
//! partial sums `sum_n S_n y_n` between candidates with a common prefix.

use num_complex::Complex64;

use crate::config::SefdmConfig;
use crate::error::{Error, Result};
use crate::signal::{check_len, SampleVector, SymbolVector};
use crate::txmod::{carrier_matrix, CarrierMatrix};

/// Largest search space `|A|^N` the decoder accepts.
pub const ML_SEARCH_LIMIT: u128 = 1 << 20;

/// Number of candidates `|A|^N`, saturating.
pub fn search_space(cfg: &SefdmConfig) -> u128 {
    let base = cfg.alphabet().len() as u128;
    (0..cfg.n_carriers()).fold(1u128, |acc, _| acc.saturating_mul(base))
}

pub fn check_search_space(cfg: &SefdmConfig) -> Result<()> {
    let size = search_space(cfg);
    if size > ML_SEARCH_LIMIT {
        Err(Error::Capacity {
            size,
            limit: ML_SEARCH_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Candidates are enumerated in odometer order with carrier 0 as the most
/// significant digit; ties keep the earliest candidate.
#[derive(Debug, Clone)]
pub struct MlDecoder {
    cfg: SefdmConfig,
    carriers: CarrierMatrix,
    /// `||S C||^2` for every candidate, in enumeration order.
    energies: Vec<f64>,
    corr: Vec<Complex64>,
    /// `products[n * |A| + a] = point_a * y_n`, refreshed per block.
    products: Vec<Complex64>,
}

impl MlDecoder {
    pub fn new(cfg: &SefdmConfig) -> Result<Self> {
        check_search_space(cfg)?;
        let carriers = carrier_matrix(cfg);
        let n = cfg.n_carriers();
        let points = cfg.alphabet().points();

        // gram[n][n'] = sum_m c_nm conj(c_n'm)
        let mut gram = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] = carriers
                    .row(i)
                    .iter()
                    .zip(carriers.row(j))
                    .map(|(a, b)| a * b.conj())
                    .sum();
            }
        }

        let mut energies = Vec::with_capacity(search_space(cfg) as usize);
        let mut chosen = vec![Complex64::new(0.0, 0.0); n];
        energy_walk(0, 0.0, &mut chosen, points, &gram, n, &mut energies);

        Ok(Self {
            cfg: cfg.clone(),
            carriers,
            energies,
            corr: vec![Complex64::new(0.0, 0.0); n],
            products: vec![Complex64::new(0.0, 0.0); n * points.len()],
        })
    }

    pub fn config(&self) -> &SefdmConfig {
        &self.cfg
    }

    /// Index (in enumeration order) of the best candidate and its metric
    /// `||S C||^2 - 2 Re sum_n S_n y_n`, which is `||r - S C||^2 - ||r||^2`.
    pub fn best_candidate(&mut self, r: &[Complex64]) -> Result<(usize, f64)> {
        check_len(r, self.cfg.n_samples())?;
        let points = self.cfg.alphabet().points();
        let q = points.len();
        for (n, y) in self.corr.iter_mut().enumerate() {
            *y = self
                .carriers
                .row(n)
                .iter()
                .zip(r)
                .map(|(c, x)| c * x.conj())
                .sum();
            for (a, &p) in points.iter().enumerate() {
                self.products[n * q + a] = p * *y;
            }
        }
        let mut best = (0usize, f64::INFINITY);
        let mut index = 0usize;
        search_walk(0, 0.0, &self.products, q, self.corr.len(), &self.energies, &mut index, &mut best);
        Ok(best)
    }

    /// Symbol indices of the candidate with the given enumeration index.
    pub fn candidate_indices(&self, mut index: usize, out: &mut Vec<usize>) {
        let q = self.cfg.alphabet().len();
        let n = self.cfg.n_carriers();
        out.clear();
        out.resize(n, 0);
        for slot in out.iter_mut().rev() {
            *slot = index % q;
            index /= q;
        }
    }

    pub fn decode_indices(&mut self, r: &[Complex64], out: &mut Vec<usize>) -> Result<()> {
        let (best, _) = self.best_candidate(r)?;
        self.candidate_indices(best, out);
        Ok(())
    }

    pub fn decode(&mut self, r: &[Complex64]) -> Result<SymbolVector> {
        let mut idx = Vec::new();
        self.decode_indices(r, &mut idx)?;
        let points = self.cfg.alphabet().points();
        Ok(idx.into_iter().map(|i| points[i]).collect())
    }
}

fn energy_walk(
    depth: usize,
    partial: f64,
    chosen: &mut [Complex64],
    points: &[Complex64],
    gram: &[Complex64],
    n: usize,
    out: &mut Vec<f64>,
) {
    if depth == n {
        out.push(partial);
        return;
    }
    for &p in points {
        // |p|^2 G_dd + 2 Re(p sum_{i<d} conj(S_i) G_di)
        let cross: Complex64 = (0..depth).map(|i| chosen[i].conj() * gram[depth * n + i]).sum();
        let add = p.norm_sqr() * gram[depth * n + depth].re + 2.0 * (p * cross).re;
        chosen[depth] = p;
        energy_walk(depth + 1, partial + add, chosen, points, gram, n, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn search_walk(
    depth: usize,
    partial: f64,
    products: &[Complex64],
    q: usize,
    n: usize,
    energies: &[f64],
    index: &mut usize,
    best: &mut (usize, f64),
) {
    if depth == n {
        let metric = energies[*index] - 2.0 * partial;
        if metric < best.1 {
            *best = (*index, metric);
        }
        *index += 1;
        return;
    }
    for a in 0..q {
        let add = products[depth * q + a].re;
        search_walk(depth + 1, partial + add, products, q, n, energies, index, best);
    }
}

/// Maximum-likelihood decode of one block.
pub fn ml_decode(r: &SampleVector, cfg: &SefdmConfig) -> Result<SymbolVector> {
    MlDecoder::new(cfg)?.decode(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::channel::{add_awgn, NoiseSpec};
    use crate::config::Alpha;
    use crate::random::RandomSource;
    use crate::txmod::modulate_direct;
    use std::f64::consts::TAU;

    fn cfg(n: usize, m: usize, b: usize, c: usize, alphabet: Alphabet) -> SefdmConfig {
        SefdmConfig::new(n, m, Alpha::new(b, c).unwrap(), alphabet).unwrap()
    }

    /// Enumerate every candidate and evaluate `sum_m |r_m - U_m|^2` from the
    /// sample equation directly.
    fn brute_force(r: &[Complex64], cf: &SefdmConfig) -> Vec<Complex64> {
        let points = cf.alphabet().points();
        let (n, m_len) = (cf.n_carriers(), cf.n_samples());
        let alpha = cf.alpha().value();
        let mut best = (f64::INFINITY, Vec::new());
        let total = points.len().pow(n as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut cand = vec![Complex64::new(0.0, 0.0); n];
            for slot in cand.iter_mut().rev() {
                *slot = points[rest % points.len()];
                rest /= points.len();
            }
            let dist: f64 = (0..m_len)
                .map(|m| {
                    let u: Complex64 = cand
                        .iter()
                        .enumerate()
                        .map(|(k, &s)| s * Complex64::from_polar(1.0, TAU * (k * m) as f64 * alpha / m_len as f64))
                        .sum();
                    (r[m] - u).norm_sqr()
                })
                .sum();
            if dist < best.0 {
                best = (dist, cand);
            }
        }
        best.1
    }

    #[test]
    fn noiseless_is_exact() {
        let cf = cfg(4, 8, 3, 4, Alphabet::qam4());
        let mut dec = MlDecoder::new(&cf).unwrap();
        let mut rng = RandomSource::new(1, 0);
        for _ in 0..50 {
            let mut bits = vec![0u8; 8];
            rng.fill_bits(&mut bits);
            let s = cf.alphabet().bits_to_symbols(&bits).unwrap();
            let r = modulate_direct(&s, &cf).unwrap();
            assert_eq!(dec.decode(&r).unwrap(), s);
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        for cf in [
            cfg(2, 2, 1, 2, Alphabet::bpsk()),
            cfg(3, 6, 2, 3, Alphabet::qam4()),
            cfg(4, 4, 4, 5, Alphabet::bpsk()),
        ] {
            let mut dec = MlDecoder::new(&cf).unwrap();
            let mut rng = RandomSource::new(99, cf.n_carriers() as u64);
            let spec = NoiseSpec::new(0.0, &cf).unwrap();
            for _ in 0..100 {
                let mut bits = vec![0u8; cf.bits_per_block()];
                rng.fill_bits(&mut bits);
                let s = cf.alphabet().bits_to_symbols(&bits).unwrap();
                let r = add_awgn(&modulate_direct(&s, &cf).unwrap(), &spec, &mut rng);
                assert_eq!(dec.decode(&r).unwrap().into_inner(), brute_force(&r, &cf));
            }
        }
    }

    #[test]
    fn metric_is_offset_squared_distance() {
        let cf = cfg(3, 5, 2, 3, Alphabet::qam4());
        let mut dec = MlDecoder::new(&cf).unwrap();
        let mut rng = RandomSource::new(4, 0);
        let r: Vec<Complex64> = (0..5).map(|_| rng.complex_normal(3.0)).collect();
        let (idx, metric) = dec.best_candidate(&r).unwrap();
        let mut sym = Vec::new();
        dec.candidate_indices(idx, &mut sym);
        let s: SymbolVector = sym.iter().map(|&i| cf.alphabet().points()[i]).collect();
        let u = modulate_direct(&s, &cf).unwrap();
        let dist: f64 = r.iter().zip(u.iter()).map(|(a, b)| (a - b).norm_sqr()).sum();
        let r_energy: f64 = r.iter().map(|z| z.norm_sqr()).sum();
        assert!((metric + r_energy - dist).abs() < 1e-9);
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(
            MlDecoder::new(&cfg(12, 12, 5, 6, Alphabet::qam4())),
            Err(Error::Capacity { .. })
        ));
        assert!(MlDecoder::new(&cfg(10, 10, 4, 5, Alphabet::qam4())).is_ok());
        assert!(MlDecoder::new(&cfg(21, 21, 4, 5, Alphabet::bpsk())).is_err());
    }
}
