//! Command-line flags and their translation into a [`SweepSpec`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use sefdm_core::detect::ML_SEARCH_LIMIT;
use sefdm_core::{Alpha, Alphabet, DecoderKind, SefdmConfig, StopRule, StripeParams, SweepSpec};

use crate::CliError;

/// Upper bound on the number of points an `--ebn0` range may expand to.
const MAX_EBN0_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    Bpsk,
    Qam4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Stripe,
    Ml,
    Ofdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

/// Run SEFDM bit error rate sweeps over AWGN.
#[derive(Debug, Parser)]
#[command(name = "sefdm", version)]
pub struct Flags {
    /// Number of carriers N.
    #[arg(long, value_name = "N")]
    pub carriers: usize,

    /// Samples per symbol period M (defaults to N).
    #[arg(long, value_name = "M", conflicts_with = "oversample")]
    pub samples: Option<usize>,

    /// Oversampling factor F, giving M = F * N.
    #[arg(long, value_name = "F")]
    pub oversample: Option<usize>,

    /// Compression ratio B/C; repeat for one curve per value.
    #[arg(long, value_name = "B/C", default_value = "1/1")]
    pub alpha: Vec<String>,

    #[arg(long, value_enum, default_value = "qam4")]
    pub alphabet: AlphabetArg,

    /// Eb/N0 range in dB as START:STOP:STEP, stop inclusive.
    #[arg(long, value_name = "START:STOP:STEP", conflicts_with = "ebn0_list", required_unless_present = "ebn0_list")]
    pub ebn0: Option<String>,

    /// Explicit Eb/N0 values in dB; `inf` means no noise.
    #[arg(long = "ebn0-list", value_name = "V1,V2,...", value_delimiter = ',')]
    pub ebn0_list: Option<Vec<String>>,

    #[arg(long, value_enum, default_value = "stripe")]
    pub decoder: DecoderArg,

    /// Stripe decoder sweeps J.
    #[arg(long, value_name = "J", default_value_t = StripeParams::DEFAULT_ITERATIONS)]
    pub iterations: usize,

    /// Stop a point once this many bit errors are seen.
    #[arg(long = "min-errors", value_name = "E", default_value_t = 100)]
    pub min_errors: u64,

    /// Stop a point after this many symbol periods.
    #[arg(long = "max-periods", value_name = "P", default_value_t = 1_000_000)]
    pub max_periods: u64,

    #[arg(long, value_name = "S", default_value_t = 1)]
    pub seed: u64,

    /// Output path. With `--format both` the extension is replaced by
    /// `.csv` and `.svg`.
    #[arg(long, value_name = "PATH", default_value = "ber.csv")]
    pub out: PathBuf,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

/// A validated run: the sweep plus where to write it.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub spec: SweepSpec,
    pub out: PathBuf,
    pub format: OutputFormat,
}

impl CliConfig {
    pub fn csv_path(&self) -> Option<PathBuf> {
        match self.format {
            OutputFormat::Csv => Some(self.out.clone()),
            OutputFormat::Svg => None,
            OutputFormat::Both => Some(self.out.with_extension("csv")),
        }
    }

    pub fn svg_path(&self) -> Option<PathBuf> {
        match self.format {
            OutputFormat::Csv => None,
            OutputFormat::Svg => Some(self.out.clone()),
            OutputFormat::Both => Some(self.out.with_extension("svg")),
        }
    }
}

/// Parse and validate `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let flags = Flags::try_parse_from(argv).map_err(CliError::Usage)?;
    flags.into_config()
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl Flags {
    /// Validate the flags. Configuration problems reported by the core
    /// library surface as [`CliError::Invalid`].
    pub fn into_config(self) -> Result<CliConfig, CliError> {
        self.build().map_err(|e| match e {
            CliError::Core(e) => CliError::Invalid(e.to_string()),
            e => e,
        })
    }

    fn build(self) -> Result<CliConfig, CliError> {
        let n = self.carriers;
        if n == 0 {
            return Err(invalid("--carriers must be at least 1"));
        }
        let m = match (self.samples, self.oversample) {
            (Some(m), _) => m,
            (None, Some(0)) => return Err(invalid("--oversample must be at least 1")),
            (None, Some(f)) => n
                .checked_mul(f)
                .ok_or_else(|| invalid("--oversample overflows the sample count"))?,
            (None, None) => n,
        };
        if m < n {
            return Err(invalid(format!(
                "--samples {m} is fewer than --carriers {n}"
            )));
        }

        let mut alphas = Vec::with_capacity(self.alpha.len());
        for a in &self.alpha {
            let alpha: Alpha = a.parse()?;
            if !alphas.contains(&alpha) {
                alphas.push(alpha);
            }
        }

        let alphabet = match self.alphabet {
            AlphabetArg::Bpsk => Alphabet::bpsk(),
            AlphabetArg::Qam4 => Alphabet::qam4(),
        };
        let decoder = match self.decoder {
            DecoderArg::Stripe => DecoderKind::Stripe,
            DecoderArg::Ml => DecoderKind::Ml,
            DecoderArg::Ofdm => DecoderKind::OfdmBaseline,
        };
        let template = SefdmConfig::new(n, m, alphas[0], alphabet)?;

        if decoder == DecoderKind::Ml {
            let size = (template.alphabet().len() as u128).checked_pow(n as u32);
            if size.is_none_or(|s| s > ML_SEARCH_LIMIT) {
                return Err(invalid(format!(
                    "the ML decoder would search {}^{n} candidates, more than the limit of {ML_SEARCH_LIMIT}",
                    template.alphabet().len()
                )));
            }
        }

        let ebn0_db = match (&self.ebn0, &self.ebn0_list) {
            (Some(range), _) => parse_range(range)?,
            (None, Some(list)) => list.iter().map(|v| parse_db(v)).collect::<Result<_, _>>()?,
            (None, None) => unreachable!("clap enforces one of --ebn0 and --ebn0-list"),
        };

        let spec = SweepSpec {
            alphas,
            ebn0_db,
            stripe: StripeParams::new(self.iterations)?,
            stop: StopRule {
                min_bit_errors: self.min_errors,
                max_symbol_periods: self.max_periods,
            },
            ..SweepSpec::new(template, decoder, self.seed)
        };
        spec.validate()?;
        Ok(CliConfig {
            spec,
            out: self.out,
            format: self.format,
        })
    }
}

fn parse_db(v: &str) -> Result<f64, CliError> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| invalid(format!("`{v}` is not a number of dB")))?;
    if x.is_nan() || x == f64::NEG_INFINITY {
        return Err(invalid(format!("`{v}` is not a usable Eb/N0")));
    }
    Ok(x)
}

/// `START:STOP:STEP`, inclusive of `STOP` up to rounding.
fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(invalid(format!("--ebn0 `{s}` is not START:STOP:STEP")));
    };
    let (start, stop, step) = (parse_db(start)?, parse_db(stop)?, parse_db(step)?);
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(invalid("--ebn0 bounds must be finite; use --ebn0-list inf"));
    }
    if step <= 0.0 {
        return Err(invalid("--ebn0 step must be positive"));
    }
    if stop < start {
        return Err(invalid("--ebn0 stop is below start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > MAX_EBN0_POINTS {
        return Err(invalid(format!("--ebn0 expands to more than {MAX_EBN0_POINTS} points")));
    }
    // start + i * step, rounded to suppress accumulated binary noise
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}
