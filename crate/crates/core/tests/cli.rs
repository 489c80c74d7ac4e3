//! End-to-end runs of the `lienard` binary.

use std::fs;
use std::process::{Command, Output};

fn lienard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lienard")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&lienard(&["factor", "--G", "0,15/2", "--F", "0,9,0,25/4"])), 0);
    assert_eq!(code(&lienard(&["factor", "--G", "0,1", "--F", "1,1"])), 1);
    assert_eq!(code(&lienard(&["factor", "--G", "0,1", "--F", "0,1,1"])), 2);
    assert_eq!(code(&lienard(&["solve", "general", "--G", "0,1", "--F", "0,1,1"])), 2);
    assert_eq!(code(&lienard(&["verify", "sundman2", "--printed"])), 3);
    assert_eq!(code(&lienard(&["solve", "cubic", "--k", "abc"])), 1);
    assert_eq!(code(&lienard(&["launch"])), 1);
}

#[test]
fn factor_prints_regime_and_monomial_form() {
    let o = lienard(&["factor", "cubic", "--k", "5/2", "--omega", "3"]);
    let s = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(s.contains("regime: trigonometric"), "{s}");
    assert!(s.contains("c^2 = -9"), "{s}");
    assert!(s.contains("monomial form: q = 1, A = 5/2, B = 0, C = 9, Delta = -36"), "{s}");
}

#[test]
fn solve_is_deterministic_and_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let svg = dir.path().join("w.svg");
    let phase = dir.path().join("p.svg");
    let csv_s = csv.to_str().unwrap();
    let o = lienard(&["solve", "wilson", "--mu", "0.5", "--A", "-1", "--out", csv_s, "--svg", svg.to_str().unwrap(), "--phase-svg", phase.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read(&csv).unwrap();
    let again = lienard(&["solve", "wilson", "--mu", "0.5", "--A", "-1"]);
    assert_eq!(again.stdout, first);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert!(fs::read_to_string(&phase).unwrap().contains("<polyline"));

    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("t,x,xdot\n"));
    // The A < 0 Wilson wave starts inside a window where it is undefined.
    assert!(text.lines().any(str::is_empty));

    let v = lienard(&["verify", "wilson", "--mu", "0.5", "--A", "-1", "--csv", csv_s]);
    let out = String::from_utf8(v.stdout.clone()).unwrap();
    assert_eq!(code(&v), 0, "{out}");
    assert!(out.contains("csv_max_deviation: 0e0"), "{out}");

    let v = lienard(&["verify", "wilson", "--mu", "0.6", "--A", "-1", "--csv", csv_s]);
    assert_eq!(code(&v), 3);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# cubic run\nk = 1\nomega = 2\nA = -1/2\nsamples = 5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = lienard(&["solve", "cubic", "--config", c]);
    let flags = lienard(&["solve", "cubic", "--k", "1", "--omega", "2", "--A", "-0.5", "--samples", "5"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, flags.stdout);
    let overridden = lienard(&["solve", "cubic", "--config", c, "--samples", "3"]);
    assert_eq!(String::from_utf8(overridden.stdout).unwrap().lines().count(), 4);

    fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(code(&lienard(&["solve", "cubic", "--config", c])), 1);
}

#[test]
fn sweep_rows_in_order_and_empty_range() {
    let o = lienard(&["sweep", "cubic", "--param", "A", "--from", "-1", "--to", "1", "--step", "1/2", "--t1", "5"]);
    let s = String::from_utf8(o.stdout.clone()).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "A,period,regularity,max_ode_residual");
    let params: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(params, ["-1", "-0.5", "0", "0.5", "1"]);
    assert!(lines[3].contains(",singular,"));
    assert!(lines[1].contains(",regular,"));

    let empty = lienard(&["sweep", "wilson", "--param", "mu", "--from", "1", "--to", "0", "--step", "0.1"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(String::from_utf8(empty.stdout).unwrap(), "mu,period,regularity,max_ode_residual\n");
}

#[test]
fn limit_cycle_and_arbitration_flags() {
    let o = lienard(&["verify", "wilson", "--A", "1", "--limit-cycle"]);
    let s = String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(code(&o), 0, "{s}");
    assert!(s.contains("limit_cycle_residual"));

    let o = lienard(&["verify", "sto", "--b", "0", "--arbitrate"]);
    let s = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(s.contains("arbitration winner: Theorem"), "{s}");
    assert_eq!(code(&lienard(&["verify", "cubic", "--arbitrate"])), 1);
}
