//! Contract tests for the `riccati` binary: exit codes, deterministic
//! reports, format handling, and the environment tolerance override.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use riccati::io::{parse_matrix, serialize_matrix, MatrixFormat};
use riccati::rng::SplitMix64;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_riccati"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.csv", "2,0\n0,3\n");
    let zero = write(dir.path(), "zero.csv", "0,0\n0,0\n");
    let ragged = write(dir.path(), "bad.csv", "1,2\n3\n");

    // 0: verification passes.
    let out = run_in(dir.path(), &["solve", &w, "--mode", "pinv"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // 1: identity failure (zero candidate against nonzero W).
    let out = run_in(dir.path(), &["verify", &w, &zero]);
    assert_eq!(out.status.code(), Some(1));

    // 2: validation (wrong sign-pattern length).
    let out = run_in(dir.path(), &["solve", &w, "--mode", "signs", "+++"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sign pattern"), "stderr: {err}");

    // 2: usage (unknown subcommand handled by the parser).
    let out = run_in(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // 2: non-hermitian input to the hermitian command.
    let nh = write(dir.path(), "nh.csv", "0,2\n0,0\n");
    let out = run_in(dir.path(), &["hermitian", &nh]);
    assert_eq!(out.status.code(), Some(2));

    // 3: missing file.
    let out = run_in(dir.path(), &["spectrum", "does-not-exist.csv"]);
    assert_eq!(out.status.code(), Some(3));

    // 3: parse failure.
    let out = run_in(dir.path(), &["spectrum", &ragged]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "1,0\n0,1\n1,1\n");
    let b = write(dir.path(), "b.csv", "2,1,0\n0,1,1\n");
    let first = run_in(
        dir.path(),
        &["rol", &a, &b, "--output", "json", "--seed", "5"],
    );
    let second = run_in(
        dir.path(),
        &["rol", &a, &b, "--output", "json", "--seed", "5"],
    );
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");

    // Randomized solve: same seed, same bytes (report and X file).
    let w = write(dir.path(), "w.csv", "1,2,0\n0,1,1\n");
    let args = [
        "solve", &w, "--mode", "random", "--seed", "42", "--output", "json", "--out", "x.json",
    ];
    let first = run_in(dir.path(), &args);
    let x_first = std::fs::read(dir.path().join("x.json")).unwrap();
    let second = run_in(dir.path(), &args);
    let x_second = std::fs::read(dir.path().join("x.json")).unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(x_first, x_second);

    // A different seed must change the constructed solution.
    let mut args_other = args;
    args_other[5] = "43";
    run_in(dir.path(), &args_other);
    let x_other = std::fs::read(dir.path().join("x.json")).unwrap();
    assert_ne!(x_first, x_other);
}

#[test]
fn solve_sign_pattern_with_leading_hyphen() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.csv", "2,0\n0,3\n");
    let out = run_in(
        dir.path(),
        &["solve", &w, "--mode", "signs", "-+", "--out", "x.json", "--output", "json"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let x = riccati::io::read_matrix(&dir.path().join("x.json"), None).unwrap();
    // Clusters are ordered by descending singular value (3 before 2), so
    // "-+" puts the minus on the sigma = 3 position.
    let expected =
        riccati::Matrix::from_real_rows(&[&[0.5, 0.0], &[0.0, -1.0 / 3.0]]).unwrap();
    assert!(x.sub(&expected).norm_fro() < 1e-12);
}

#[test]
fn verify_reports_listing_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.csv", "2,0\n0,3\n");
    run_in(
        dir.path(),
        &["solve", &w, "--mode", "signs", "+-", "--out", "x.json"],
    );
    let out = run_in(
        dir.path(),
        &["verify", &w, "x.json", "--output", "json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("json report");
    assert_eq!(report["schema"], 1);
    let gap = report["idempotency_gaps"]["wx"].as_f64().unwrap();
    assert!((gap - 2.0).abs() < 1e-10, "one minus sign gives gap 2");
    assert_eq!(report["identities"]["riccati"]["pass"], true);
}

#[test]
fn env_var_overrides_tolerance_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.csv", "2,0\n0,3\n");
    write(dir.path(), "x.csv", "0.5,0\n0,0.3333333333333333\n");

    let out = bin()
        .current_dir(dir.path())
        .env("RICCATI_PINV_TOL", "1e-3")
        .args(["verify", "w.csv", "x.csv", "--output", "json"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["identities"]["riccati"]["tol"].as_f64(), Some(1e-3));

    let out = bin()
        .current_dir(dir.path())
        .env("RICCATI_PINV_TOL", "1e-3")
        .args(["verify", "w.csv", "x.csv", "--output", "json", "--tol", "1e-6"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["identities"]["riccati"]["tol"].as_f64(), Some(1e-6));
}

#[test]
fn enumerate_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.csv", "2,0\n0,3\n");
    let out = run_in(dir.path(), &["enumerate", &w, "--out", "fam"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(dir.path().join("fam"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names.len(), 5, "4 solutions + manifest: {names:?}");
    for pattern in ["++", "+-", "-+", "--"] {
        assert!(
            names.iter().any(|n| n.contains(pattern) && n.ends_with(".json")),
            "missing {pattern} in {names:?}"
        );
    }

    // Zero matrix: a single (zero) solution.
    let z = write(dir.path(), "z.csv", "0,0,0\n0,0,0\n");
    let out = run_in(dir.path(), &["enumerate", &z, "--out", "famz", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(manifest["count"], 1);
    assert_eq!(manifest["family_dimension"], 6);
}

#[test]
fn spectrum_matches_hand_values() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.csv", "2\n");
    let out = run_in(dir.path(), &["spectrum", &w, "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["eigenvalues"], serde_json::json!([4.0, -4.0]));
    assert_eq!(report["diagonalizable"], true);
}

#[test]
fn hermitian_reports_discrepancy_flag() {
    let dir = tempfile::tempdir().unwrap();
    let wi = write(dir.path(), "wi.csv", "2,0\n0,-1\n");
    let out = run_in(dir.path(), &["hermitian", &wi, "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["convention_discrepancy"], true);
    assert_eq!(report["w_inverse_is_maximal"], false);
    let stabilizing: Vec<bool> = report["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["stabilizing"].as_bool().unwrap())
        .collect();
    assert_eq!(stabilizing.iter().filter(|&&s| s).count(), 1);

    let singular = write(dir.path(), "ws.csv", "1,0\n0,0\n");
    let out = run_in(dir.path(), &["hermitian", &singular]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invertible required"));

    // Dense indefinite case (eigenvalues 3 and -1): both the pairwise
    // maximum and W^-1 are reported, and they differ.
    let dense = write(dir.path(), "wd.csv", "1,2\n2,1\n");
    let out = run_in(dir.path(), &["hermitian", &dense, "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let evs: Vec<f64> = report["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((evs[0] - 3.0).abs() < 1e-12 && (evs[1] + 1.0).abs() < 1e-12);
    assert_eq!(report["convention_discrepancy"], true);
    assert!(report["maximal"].is_object() && report["w_inverse"].is_object());
}

#[test]
fn enumerate_invertible_gives_two_to_the_n_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.csv", "2,0,0\n0,3,0\n0,0,5\n");
    let out = run_in(dir.path(), &["enumerate", &w, "--out", "fam", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(manifest["count"], 8);
    let files = std::fs::read_dir(dir.path().join("fam")).unwrap().count();
    assert_eq!(files, 9, "8 solutions + manifest");
}

#[test]
fn matrix_market_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(
        dir.path(),
        "w.mtx",
        "%%MatrixMarket matrix array real general\n% a diagonal example\n2 2\n2\n0\n0\n3\n",
    );
    let out = run_in(
        dir.path(),
        &["solve", &w, "--mode", "pinv", "--out", "x.mtx", "--format", "matrix-market"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let x = riccati::io::read_matrix(&dir.path().join("x.mtx"), None).unwrap();
    let expected =
        riccati::Matrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 1.0 / 3.0]]).unwrap();
    assert!(x.sub(&expected).norm_fro() < 1e-12);
}

#[test]
fn format_flag_is_read_fallback_and_write_override() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown extension: the flag decides.
    let dat = write(dir.path(), "w.dat", "2,0\n0,3\n");
    let out = run_in(dir.path(), &["spectrum", &dat, "--format", "csv-real"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let out = run_in(dir.path(), &["spectrum", &dat]);
    assert_eq!(out.status.code(), Some(3));

    // Known extension wins for reading even when a flag is present, so a
    // json input can still be solved while writing csv output...
    let cw = write(
        dir.path(),
        "cw.json",
        "{\"rows\":1,\"cols\":1,\"data\":[[{\"re\":2.0,\"im\":0.0}]]}\n",
    );
    let out = run_in(
        dir.path(),
        &["solve", &cw, "--mode", "pinv", "--format", "csv-real", "--out", "x.csv"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(
        std::fs::read_to_string(dir.path().join("x.csv")).unwrap().trim(),
        "5.0000000000000000e-1"
    );

    // ... and asking csv to carry a complex solution is a validation error.
    let ci = write(
        dir.path(),
        "ci.json",
        "{\"rows\":1,\"cols\":1,\"data\":[[{\"re\":0.0,\"im\":2.0}]]}\n",
    );
    let out = run_in(
        dir.path(),
        &["solve", &ci, "--mode", "pinv", "--format", "csv-real", "--out", "y.csv"],
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn format_round_trip_randomized() {
    // 1000 matrices across the three formats; json and matrix-market carry
    // complex entries, csv only real ones. All round trips are bit-exact.
    let mut rng = SplitMix64::new(0xF0F0);
    for case in 0..1000 {
        let m = 1 + (rng.next_u64() % 12) as usize;
        let n = 1 + (rng.next_u64() % 12) as usize;
        let complex = case % 3 == 1;
        let a = if complex {
            rng.complex_matrix(m, n)
        } else {
            rng.normal_matrix(m, n)
        };
        let formats: &[MatrixFormat] = if complex {
            &[MatrixFormat::MatrixMarket, MatrixFormat::JsonComplex]
        } else {
            &[
                MatrixFormat::MatrixMarket,
                MatrixFormat::JsonComplex,
                MatrixFormat::CsvReal,
            ]
        };
        for &format in formats {
            let text = serialize_matrix(format, &a).unwrap();
            let back = parse_matrix(format, &text).unwrap();
            assert_eq!(a, back, "case {case} format {format:?}");
        }
    }
}
