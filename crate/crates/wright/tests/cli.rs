//! End-to-end checks of the `wright` binary: pinned outputs, exit codes,
//! output formats, determinism, and config-file round trips.

use std::process::{Command, Output};

fn wright(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wright"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn eval_e_to_thirty_digits() {
    let out = wright(&["eval", "--ml", "1,1", "--r", "1", "--theta-pi", "0", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    let mut lines = s.lines();
    assert_eq!(lines.next().unwrap(), "2.718281828459045235360287471353");
    assert_eq!(lines.next().unwrap(), "0");
}

#[test]
fn banner_goes_to_stderr_only() {
    let out = wright(&["coeffs", "--preset", "f1", "--J", "1"]);
    assert!(stderr(&out).starts_with("wright "));
    assert!(!stdout(&out).contains("wright "));
}

#[test]
fn coeffs_first_fraction() {
    let out = wright(&["coeffs", "--preset", "f1", "--J", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("1 61/192\n"), "got: {}", stdout(&out));
}

#[test]
fn coeffs_cap_is_invalid_params() {
    let out = wright(&["coeffs", "--preset", "f1", "--J", "101"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_index_out_of_range() {
    let out = wright(&["table", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_parameter_lists_rejected() {
    let out = wright(&[
        "eval", "--alpha", "1,2", "--a", "1", "--beta", "1", "--b", "1", "--r", "1",
        "--theta-pi", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn higher_order_pole_exit_code() {
    // the two upper gamma pole sequences overlap (a = 1 and a = 2 with
    // alpha = 1), so the simple-pole algebraic expansion must refuse
    let out = wright(&[
        "eval", "--alpha", "1,1", "--a", "1,2", "--beta", "2", "--b", "1", "--r", "5",
        "--theta-pi", "0", "--method", "asym",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn table_one_lists_exact_fractions() {
    let out = wright(&["table", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.starts_with("j,c_j\n"), "got: {}", s);
    assert!(s.contains("1,61/192"));
    assert!(s.contains("10,86726322340809175676137010099575/1411683280887784006131646464"));
}

#[test]
fn scan_csv_header_and_determinism() {
    let args = ["scan", "--preset", "f2", "--format", "csv"];
    let a = wright(&args);
    assert_eq!(a.status.code(), Some(0));
    let sa = stdout(&a);
    assert!(
        sa.starts_with("theta_over_pi,residual_abs,reference_abs,S_re,S_im,flags\n"),
        "got: {}",
        sa
    );
    // byte-identical on a second run
    let b = wright(&args);
    assert_eq!(sa, stdout(&b));
}

#[test]
fn config_file_round_trip() {
    let dir = std::env::temp_dir().join("wright-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eval.cfg");
    std::fs::write(
        &path,
        "# minimal eval job\nsubcommand=eval\npreset=ml\na=1\nb=1\nr=1\ntheta_pi=0\ndigits=30\n",
    )
    .unwrap();
    let out = wright(&["eval", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).starts_with("2.718281828459045235360287471353\n"));
}

#[test]
fn stokes_line_flagged_in_plan() {
    let out = wright(&[
        "eval", "--preset", "f2", "--r", "10", "--theta-pi", "2/3", "--method", "asym",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("on_stokes_line true"), "got: {}", stdout(&out));
}
