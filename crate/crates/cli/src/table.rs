//! CSV result files.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a file back reproduces the records bit for bit. Noiseless points carry
//! `inf` in the `ebn0_db` column.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use sefdm_core::{Alpha, Alphabet, BerRecord, DecoderKind, SefdmConfig};

use crate::{create_parent, CliError};

pub const CSV_HEADER: &str =
    "alpha_num,alpha_den,carriers,samples,alphabet,decoder,iterations,ebn0_db,bits,errors,ber,ci_low,ci_high,seed,wall_time_s";

/// Records ordered by alpha, then Eb/N0, both ascending. The sort is stable
/// so ties keep their input order.
fn sorted(records: &[BerRecord]) -> Vec<&BerRecord> {
    let mut rows: Vec<&BerRecord> = records.iter().collect();
    rows.sort_by(|a, b| {
        a.config
            .alpha()
            .value()
            .total_cmp(&b.config.alpha().value())
            .then(a.ebn0_db.total_cmp(&b.ebn0_db))
    });
    rows
}

pub fn write_csv<W: Write>(records: &[BerRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in sorted(records) {
        let cfg = &r.config;
        w.write_record([
            cfg.alpha().num().to_string(),
            cfg.alpha().den().to_string(),
            cfg.n_carriers().to_string(),
            cfg.n_samples().to_string(),
            cfg.alphabet().name().to_string(),
            r.decoder.name().to_string(),
            r.iterations.to_string(),
            r.ebn0_db.to_string(),
            r.bits_total.to_string(),
            r.bit_errors.to_string(),
            r.ber.to_string(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
            r.seed.to_string(),
            r.wall_time_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[BerRecord], path: &Path) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Invalid("no records to write".into()));
    }
    create_parent(path)?;
    let file = File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(records, std::io::BufWriter::new(file)).map_err(|source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse a file written by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<BerRecord>, CliError> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rdr.headers().map_err(csv_err)?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(CliError::Malformed {
            row: 0,
            msg: "unexpected header".into(),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err)?;
        out.push(parse_row(&row).map_err(|msg| CliError::Malformed { row: i + 1, msg })?);
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    let name = CSV_HEADER.split(',').nth(i).unwrap_or("?");
    let raw = row.get(i).ok_or_else(|| format!("missing {name}"))?;
    raw.parse().map_err(|e| format!("{name} `{raw}`: {e}"))
}

fn parse_row(row: &csv::StringRecord) -> Result<BerRecord, String> {
    let alpha = Alpha::new(field(row, 0)?, field(row, 1)?).map_err(|e| e.to_string())?;
    let alphabet_name: String = field(row, 4)?;
    let alphabet = Alphabet::by_name(&alphabet_name).ok_or_else(|| format!("unknown alphabet `{alphabet_name}`"))?;
    let config = SefdmConfig::new(field(row, 2)?, field(row, 3)?, alpha, alphabet).map_err(|e| e.to_string())?;
    let decoder: DecoderKind = field::<String>(row, 5)?.parse().map_err(|e: sefdm_core::Error| e.to_string())?;
    let bits_total: u64 = field(row, 8)?;
    let periods = bits_total / config.bits_per_block() as u64;
    Ok(BerRecord {
        decoder,
        iterations: field(row, 6)?,
        seed: field(row, 13)?,
        ebn0_db: field(row, 7)?,
        periods,
        bits_total,
        bit_errors: field(row, 9)?,
        ber: field(row, 10)?,
        ci_low: field(row, 11)?,
        ci_high: field(row, 12)?,
        wall_time_s: field(row, 14)?,
        config,
    })
}
