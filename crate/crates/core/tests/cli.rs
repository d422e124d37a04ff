use std::process::{Command, Output};

use myopic_relay::channel::uniform_line_config;
use myopic_relay::optimizer::{optimize_allocation, OptimizerOptions};
use myopic_relay::scheme::SchemeSpec;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_myopic-relay"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn rate_matches_library_optimizer() {
    let o = run(&[
        "rate",
        "--uniform",
        "T=5",
        "--snr-db",
        "0",
        "--scheme",
        "k=2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let config = uniform_line_config(5, 1.0, 1.0, 1.0, 2.0).unwrap();
    let expected = optimize_allocation(
        &config,
        &SchemeSpec::myopic(5, 2).unwrap(),
        &OptimizerOptions::default(),
    )
    .unwrap();
    assert_eq!(stdout(&o), expected.report.to_string());
}

#[test]
fn two_nodes_give_half_a_bit() {
    let o = run(&[
        "rate",
        "--uniform",
        "T=2",
        "--snr-db",
        "0",
        "--scheme",
        "k=1",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("end-to-end: 0.500000000 bits"));
}

#[test]
fn rate_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.toml");
    std::fs::write(&path, "[uniform]\nnodes = 4\nsnr_db = 3.0\n").unwrap();
    let from_file = run(&[
        "rate",
        "--config",
        path.to_str().unwrap(),
        "--scheme",
        "omniscient",
    ]);
    let inline = run(&[
        "rate",
        "--uniform",
        "T=4",
        "--snr-db",
        "3",
        "--scheme",
        "omniscient",
    ]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&inline));
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "[channel]\npositions = [0.0, 1.0, 2.0]\nkappa = oops\n",
    )
    .unwrap();
    let o = run(&["rate", "--config", path.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: config: "), "{err}");
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_config_file() {
    let o = run(&["rate", "--config", "/nonexistent/channel.toml"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error: config: "));
}

#[test]
fn sweep_has_one_row_per_point_and_scheme() {
    let args = [
        "sweep",
        "--uniform",
        "T=5",
        "--snr-from",
        "-10",
        "--snr-to",
        "20",
        "--snr-step",
        "1",
        "--schemes",
        "1,2,omniscient",
    ];
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("snr_db,scheme,end_to_end_bits,bottleneck_node,converged_flag")
    );
    assert_eq!(lines.count(), 93);

    let threaded = bin()
        .args(args)
        .env("MYOPIC_RELAY_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&threaded), csv);
}

#[test]
fn sweep_writes_file_and_rho_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.csv");
    let o = run(&[
        "sweep",
        "--uniform",
        "T=4",
        "--snr-from",
        "-2",
        "--snr-to",
        "2",
        "--snr-step",
        "2",
        "--rho",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("snr_db,one_hop_bits,two_hop_bits,omniscient_bits,rho1,rho2\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn sweep_rejects_bad_input() {
    let o = run(&["sweep", "--uniform", "T=5", "--schemes", ""]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("scheme list is empty"));
    let o = run(&[
        "sweep",
        "--uniform",
        "T=5",
        "--snr-from",
        "5",
        "--snr-to",
        "0",
    ]);
    assert!(!o.status.success());
    let o = bin()
        .args(["sweep", "--uniform", "T=3"])
        .env("MYOPIC_RELAY_THREADS", "many")
        .output()
        .unwrap();
    assert!(stderr(&o).starts_with("error: invalid-argument: "));
}

#[test]
fn schedule_dumps_every_block() {
    let o = run(&["schedule", "T=5", "k=2", "B=3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("block ")).count(), 6);
}

#[test]
fn scaling_rows() {
    let o = run(&["scaling", "--eta", "2", "--T", "5,10,20"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().nth(3).unwrap().starts_with("20,"));
    let o = run(&["scaling", "--T", "500"]);
    assert!(stderr(&o).starts_with("error: unsupported-size: "));
}

#[test]
fn verify_reports_all_trials() {
    let o = run(&["verify", "--trials", "100", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "100/100 OK"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = run(&["plot"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
}
