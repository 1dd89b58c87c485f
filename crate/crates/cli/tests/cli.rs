use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

const BIN: &str = env!("CARGO_BIN_EXE_cpshift");

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("CPSHIFT_THREADS", n),
        None => cmd.env_remove("CPSHIFT_THREADS"),
    };
    cmd.output().unwrap()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("scan.cfg");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn scan_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "medium = nonreciprocal_mirror\ncount = 12\nquantities = gamma\n",
    );
    let out = dir.path().join("out");
    let o = run(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()], Some("2"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert_eq!(csv.lines().next(), Some("zeta,gamma_ratio"));
    let m = manifest(&out);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["threads"], 2);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["config"]["count"], 12);
    assert_eq!(m["error_estimates"]["points"], 12);
    assert_eq!(m["tolerances"]["wavenumber_rel_tol"], 1e-9);
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(m["outputs"][0], "scan.csv");
}

#[test]
fn output_key_is_used_without_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config");
    let cfg = write_config(
        dir.path(),
        &format!("medium = perfect_conductor\ncount = 4\noutput = {}\n", target.display()),
    );
    let o = run(&["scan", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(target.join("scan.csv").exists());
}

#[test]
fn scan_bytes_do_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "medium = axion\nepsilon = 16\ntheta = -pi\ncount = 30\n");
    let mut outputs = Vec::new();
    for n in ["1", "4"] {
        let out = dir.path().join(format!("t{n}"));
        let o = run(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()], Some(n));
        assert_eq!(o.status.code(), Some(0));
        outputs.push(std::fs::read(out.join("scan.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_errors_exit_one_and_still_write_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "medium = perfect_conductor\nmedium = axion\n");
    let out = dir.path().join("out");
    let o = run(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let m = manifest(&out);
    assert_eq!(m["status"], "error");
    let cause = m["error"].as_str().unwrap();
    assert!(cause.contains("lines 1 and 2"), "{cause}");
    assert!(!out.join("scan.csv").exists());

    let cfg = write_config(dir.path(), "medium = perfect_conductor\nquantities = none\n");
    assert_eq!(
        run(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()], None)
            .status
            .code(),
        Some(1)
    );
    let cfg = write_config(dir.path(), "medium = perfect_conductor\n");
    assert_eq!(run(&["scan", "--config", &cfg], None).status.code(), Some(1));
    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        run(
            &[
                "scan",
                "--config",
                missing.to_str().unwrap(),
                "--out",
                out.to_str().unwrap()
            ],
            None
        )
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn bad_thread_override_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "medium = perfect_conductor\ncount = 3\n");
    let out = dir.path().join("out");
    let o = run(
        &["scan", "--config", &cfg, "--out", out.to_str().unwrap()],
        Some("zero"),
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(manifest(&out)["status"], "error");
}

#[test]
fn numerical_failure_exits_two_with_cause() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "medium = axion\nepsilon = 16\ntheta = pi\ncount = 4\nrel_tol = 1e-13\nmax_intervals = 2\n",
    );
    let out = dir.path().join("out");
    let o = run(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let m = manifest(&out);
    assert_eq!(m["status"], "error");
    assert!(m["error"].as_str().unwrap().contains("zeta = 5e-2"));
    assert_eq!(m["tolerances"]["wavenumber_rel_tol"], 1e-13);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let cfg = write_config(dir.path(), "medium = perfect_conductor\ncount = 3\n");
    let o = run(
        &["scan", "--config", &cfg, "--out", blocker.join("sub").to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[], None).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(
        run(&["rates", "--medium", "glass", "--zeta", "1"], None).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["rates", "--medium", "axion", "--zeta", "0"], None).status.code(),
        Some(1)
    );
    assert_eq!(
        run(
            &["rates", "--medium", "perfect_conductor", "--theta", "pi", "--zeta", "1"],
            None
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    assert_eq!(run(&["--version"], None).status.code(), Some(0));
}

#[test]
fn unknown_figure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "fig7", "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown figure"));
    assert_eq!(manifest(dir.path())["status"], "error");
}

#[test]
fn single_point_queries_print_one_row() {
    let o = run(&["rates", "--medium", "perfect_conductor", "--zeta", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("zeta,gamma_ratio"));
    let v: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    let expected = 0.75 * (-(2.0f64).sin() - (2.0f64).cos() / 2.0 + (2.0f64).sin() / 4.0);
    assert!((v[1] - expected).abs() < 1e-11);
    assert_eq!(v[3], 0.0);

    let o = run(
        &[
            "shift",
            "--medium",
            "axion",
            "--epsilon",
            "16",
            "--theta",
            "-1.0pi",
            "--zeta",
            "0.5",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(row.len(), 4);
    assert!((row[1] + row[2] - row[3]).abs() <= 1e-11 * row[3].abs());
}

#[test]
fn decay_follows_the_modified_rate() {
    let o = run(
        &[
            "rates",
            "--medium",
            "nonreciprocal_mirror",
            "--sign",
            "-1",
            "--zeta",
            "2",
        ],
        None,
    );
    let rate_line = String::from_utf8(o.stdout).unwrap();
    let gamma: f64 = rate_line
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let o = run(
        &[
            "decay",
            "--medium",
            "nonreciprocal_mirror",
            "--sign",
            "-1",
            "--zeta",
            "2",
            "--t-max",
            "2",
            "--steps",
            "5",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let expected = (-(1.0 + gamma) * v[0]).exp();
        assert!((v[1] - expected).abs() < 1e-10, "{line}");
        assert!((v[1] + v[2] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn every_figure_finishes_within_a_minute() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["gamma_mirrors", "omega_mirrors", "loglog_nres", "gamma_ti", "omega_ti"] {
        let start = Instant::now();
        let o = run(&["figure", name, "--out", dir.path().to_str().unwrap()], None);
        let secs = start.elapsed().as_secs_f64();
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(secs < 60.0, "{name} took {secs} s");
        let m = manifest(&dir.path().join(name));
        assert_eq!(m["status"], "ok");
        for file in m["outputs"].as_array().unwrap() {
            let csv = std::fs::read_to_string(dir.path().join(name).join(file.as_str().unwrap())).unwrap();
            assert_eq!(csv.lines().count(), 401, "{name}/{file}");
        }
    }
}
