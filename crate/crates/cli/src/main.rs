use std::process::ExitCode;

fn main() -> ExitCode {
    let cfg = match sefdm_cli::args::parse_args(std::env::args_os()) {
        Ok(cfg) => cfg,
        Err(sefdm_cli::CliError::Usage(e)) => e.exit(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match sefdm_cli::run(&cfg) {
        Ok(report) if report.failures.is_empty() => ExitCode::SUCCESS,
        Ok(report) => {
            for (point, err) in &report.failures {
                eprintln!("failed: alpha {} at {} dB: {err}", point.alpha, point.ebn0_db);
            }
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
