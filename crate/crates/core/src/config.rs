use std::fmt;
use std::str::FromStr;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Bandwidth compression ratio `alpha = b / c` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: usize,
    den: usize,
}

impl Alpha {
    pub const ONE: Alpha = Alpha { num: 1, den: 1 };

    /// Requires `1 <= b <= c` and `gcd(b, c) = 1`.
    pub fn new(num: usize, den: usize) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Config(format!("alpha {num}/{den} must be positive")));
        }
        if num > den {
            return Err(Error::Config(format!("alpha {num}/{den} exceeds 1")));
        }
        if gcd(num, den) != 1 {
            return Err(Error::Config(format!(
                "alpha {num}/{den} is not in lowest terms"
            )));
        }
        Ok(Self { num, den })
    }

    /// `b`, the numerator.
    pub fn num(self) -> usize {
        self.num
    }

    /// `c`, the denominator and the number of interleaved OFDM systems.
    pub fn den(self) -> usize {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_orthogonal(self) -> bool {
        self.num == self.den
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |part: &str| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("malformed alpha `{s}`, expected B/C")))
        };
        match s.split_once('/') {
            Some((b, c)) => Alpha::new(parse(b)?, parse(c)?),
            None if s.trim() == "1" => Ok(Alpha::ONE),
            None => Err(Error::Config(format!("malformed alpha `{s}`, expected B/C"))),
        }
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// System dimensions: `N` carriers sampled `M` times per symbol period at
/// compression `alpha = b / c`, carrying symbols from `alphabet`.
#[derive(Debug, Clone, PartialEq)]
pub struct SefdmConfig {
    n_carriers: usize,
    n_samples: usize,
    alpha: Alpha,
    alphabet: Alphabet,
}

impl SefdmConfig {
    /// Requires `N >= 1` and `M >= N`.
    pub fn new(n_carriers: usize, n_samples: usize, alpha: Alpha, alphabet: Alphabet) -> Result<Self> {
        if n_carriers == 0 {
            return Err(Error::Config("at least one carrier is required".into()));
        }
        if n_samples < n_carriers {
            return Err(Error::Config(format!(
                "{n_samples} samples is fewer than {n_carriers} carriers"
            )));
        }
        Ok(Self {
            n_carriers,
            n_samples,
            alpha,
            alphabet,
        })
    }

    /// `N`.
    pub fn n_carriers(&self) -> usize {
        self.n_carriers
    }

    /// `M`.
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of interleaved OFDM systems, `c`.
    pub fn subsystems(&self) -> usize {
        self.alpha.den
    }

    /// `N' = c * ceil(N / c)`, the carrier count padded to a multiple of `c`.
    pub fn padded_carriers(&self) -> usize {
        self.n_carriers.div_ceil(self.alpha.den) * self.alpha.den
    }

    /// Symbols carried by each subsystem, `N' / c`.
    pub fn symbols_per_subsystem(&self) -> usize {
        self.padded_carriers() / self.alpha.den
    }

    /// Length of each subsystem symbol vector, `N' b / c`.
    pub fn subsystem_len(&self) -> usize {
        self.symbols_per_subsystem() * self.alpha.num
    }

    pub fn bits_per_block(&self) -> usize {
        self.n_carriers * self.alphabet.bits_per_symbol()
    }

    /// The same system with its compression replaced.
    pub fn with_alpha(&self, alpha: Alpha) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_parsing() {
        assert_eq!("5/6".parse::<Alpha>().unwrap(), Alpha::new(5, 6).unwrap());
        assert_eq!("1".parse::<Alpha>().unwrap(), Alpha::ONE);
        assert!("2/4".parse::<Alpha>().is_err());
        assert!("7/5".parse::<Alpha>().is_err());
        assert!("0/3".parse::<Alpha>().is_err());
        assert!("five/6".parse::<Alpha>().is_err());
        assert!("0.8".parse::<Alpha>().is_err());
    }

    #[test]
    fn padding_and_subsystem_sizes() {
        let cfg = SefdmConfig::new(16, 16, Alpha::new(5, 6).unwrap(), Alphabet::qam4()).unwrap();
        assert_eq!(cfg.padded_carriers(), 18);
        assert_eq!(cfg.symbols_per_subsystem(), 3);
        assert_eq!(cfg.subsystem_len(), 15);
        assert_eq!(cfg.bits_per_block(), 32);
    }

    #[test]
    fn rejects_undersampling() {
        assert!(SefdmConfig::new(8, 7, Alpha::ONE, Alphabet::bpsk()).is_err());
        assert!(SefdmConfig::new(0, 7, Alpha::ONE, Alphabet::bpsk()).is_err());
    }
}
