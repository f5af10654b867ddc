use std::process::Command;

use proptest::prelude::*;
use sefdm_cli::{parse_args, read_csv, render_plot, run, CliError, CSV_HEADER};

fn argv(s: &str) -> Vec<String> {
    std::iter::once("sefdm".to_string())
        .chain(s.split_whitespace().map(String::from))
        .collect()
}

fn drop_wall_time(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap())
        .collect()
}

#[test]
fn small_sweep_writes_deterministic_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.out");
    let args = format!(
        "--carriers 8 --alpha 4/5 --alpha 2/3 --ebn0 0:6:3 --max-periods 2000 --min-errors 50 --format both --out {}",
        out.display()
    );
    let cfg = parse_args(argv(&args)).unwrap();

    let first = run(&cfg).unwrap();
    assert!(first.failures.is_empty());
    let csv_path = out.with_extension("csv");
    let a = std::fs::read_to_string(&csv_path).unwrap();
    run(&cfg).unwrap();
    let b = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(drop_wall_time(&a), drop_wall_time(&b));

    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 7);
    // alpha 2/3 sorts before 4/5
    assert!(lines[1].starts_with("2,3,8,8,qam4,stripe,20,0,"));
    assert!(lines[4].starts_with("4,5,8,8,qam4,stripe,20,0,"));

    let back = read_csv(&csv_path).unwrap();
    assert_eq!(back.len(), first.records.len());
    for rec in &first.records {
        // the second run rewrote the file with its own timings
        assert!(back.iter().any(|r| r.same_result(rec)), "{rec:?}");
    }

    let svg = std::fs::read_to_string(out.with_extension("svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("theory")));
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("curve-stripe-4-5")));
    assert!(!svg.contains("href"));
}

#[test]
fn plot_axes_and_zero_error_markers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let cfg = parse_args(argv(&format!(
        "--carriers 4 --ebn0 0:12:2 --max-periods 200 --decoder ofdm --out {}",
        out.display()
    )))
    .unwrap();
    let report = run(&cfg).unwrap();
    let svg = render_plot(&report.records).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let xticks: Vec<&str> = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("x-ticks"))
        .unwrap()
        .children()
        .filter(|n| n.is_element())
        .filter_map(|n| n.text())
        .collect();
    assert_eq!(xticks, ["0", "2", "4", "6", "8", "10", "12"]);
    // 200 periods of 8 bits cannot show errors at 12 dB
    assert!(report.records.iter().any(|r| r.bit_errors == 0));
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("zero-error")));
    let yticks = doc.descendants().find(|n| n.attribute("id") == Some("y-ticks")).unwrap();
    assert!(yticks.children().filter_map(|n| n.text()).any(|t| t == "1e-1"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sefdm");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");

    let ok = Command::new(bin)
        .args(["--carriers", "4", "--ebn0-list", "inf,5", "--max-periods", "100", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let noiseless = text.lines().find(|l| l.contains(",inf,")).unwrap();
    let cols: Vec<&str> = noiseless.split(',').collect();
    assert_eq!((cols[9], cols[10], cols[11]), ("0", "0", "0"));

    let unknown = Command::new(bin).args(["--carriers", "4", "--ebn0-list", "1", "--fast"]).output().unwrap();
    assert!(!unknown.status.success());
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("--fast"));

    let guard = Command::new(bin)
        .args(["--carriers", "12", "--decoder", "ml", "--alphabet", "qam4", "--ebn0-list", "8"])
        .output()
        .unwrap();
    assert!(!guard.status.success());
    assert!(String::from_utf8_lossy(&guard.stderr).contains("ML decoder"));
}

#[test]
fn documented_examples() {
    let cfg = parse_args(argv(
        "--carriers 16 --oversample 16 --alpha 5/6 --alphabet qam4 --decoder stripe --ebn0 0:12:2",
    ))
    .unwrap();
    assert_eq!(cfg.spec.template.n_samples(), 256);
    assert_eq!(cfg.spec.points().len(), 7);
    assert!(parse_args(argv("--alpha 7/8 --carriers 16 --ebn0-list 1")).is_ok());
    assert!(matches!(
        parse_args(argv("--decoder ml --carriers 12 --alphabet qam4 --ebn0-list 1")),
        Err(CliError::Invalid(_))
    ));
}

const FLAGS: [&str; 16] = [
    "--carriers", "--samples", "--oversample", "--alpha", "--alphabet", "--ebn0", "--ebn0-list", "--decoder",
    "--iterations", "--min-errors", "--max-periods", "--seed", "--out", "--format", "--help-me", "-x",
];
const VALUES: [&str; 16] = [
    "0", "1", "16", "4/5", "2/4", "0/1", "bpsk", "qam4", "ml", "0:12:2", "3:1:1", "inf,2", "nan", "-1", "", "18446744073709551616",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parse_args_never_panics(tokens in prop::collection::vec((0usize..16, 0usize..16, any::<bool>()), 0..10)) {
        let mut args = vec!["sefdm".to_string()];
        for (f, v, with_value) in tokens {
            args.push(FLAGS[f].to_string());
            if with_value {
                args.push(VALUES[v].to_string());
            }
        }
        if let Ok(cfg) = parse_args(&args) {
            let t = &cfg.spec.template;
            prop_assert!(t.n_samples() >= t.n_carriers());
            prop_assert!(!cfg.spec.ebn0_db.is_empty());
        }
    }

    #[test]
    fn parse_args_is_total_on_arbitrary_strings(args in prop::collection::vec(".{0,12}", 0..8)) {
        let argv: Vec<String> = std::iter::once("sefdm".to_string()).chain(args).collect();
        let _ = parse_args(&argv);
    }
}
