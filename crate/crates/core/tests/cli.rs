use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_roadfield");

fn run(args: &[&str], cfg: &Path, out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--config")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p
}

const MINIMAL: &str = "[model]\nd = 1\nD = 2\nmu = 1\nnu = 1\nq = 0\n[field]\nkind = logistic\nr = 1\n[road]\nkind = zero\n";

#[test]
fn speed_on_minimal_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINIMAL);
    let out = run(&["speed"], &cfg, dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("speed.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[7], "+1");
    assert_eq!(row[8].parse::<f64>().unwrap(), 2.0);
    assert_eq!(row[9], "true");
}

#[test]
fn config_error_exits_2_with_error_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &MINIMAL.replace("d = 1", "d=-1"));
    let out = run(&["speed"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error kind=config msg=\"line 2"), "{err}");
    assert!(err.contains("`d`"), "{err}");

    let missing = run(&["speed"], &dir.path().join("absent.cfg"), dir.path());
    assert_eq!(missing.status.code(), Some(2));

    let status = Command::new(BIN).arg("speed").output().unwrap().status;
    assert_eq!(status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{MINIMAL}[grid]\nlx = 4\nly = 2\ndx = 0.5\ndy = 0.5\ndt = 10\nt_final = 1\nrecord_every = 0.5\n"
    );
    let cfg = write_config(dir.path(), &text);
    let out = run(&["simulate"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error kind=unstable msg="), "{stderr}");
}

#[test]
fn parameter_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINIMAL);
    let out = run(&["speed", "--tol", "-1"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    let cfg = write_config(dir.path(), &format!("{MINIMAL}[geometry]\nc = 1\n"));
    let out = run(&["geometry"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.starts_with("error kind=invalid-parameter"),
        "{stderr}"
    );
}

#[test]
fn sweep_is_deterministic_and_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{MINIMAL}[sweep]\nD = 0.1:5:2\nq = -3:3:2\nrho = 0:3:2\nrandom_points = 100\nseed = 42\ndirection = both\n"
    );
    let cfg = write_config(dir.path(), &text);
    let mut outputs = Vec::new();
    for (k, workers) in ["1", "4", "4"].iter().enumerate() {
        let out_dir = dir.path().join(format!("o{k}"));
        let out = run(&["sweep", "--workers", workers], &cfg, &out_dir);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(fs::read(out_dir.join("sweep.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 1 + 200);
    assert!(!text.contains('\r'));
}

#[test]
fn thresholds_flip_at_three() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{}[sweep]\nD = 1:4:31\n",
        MINIMAL.replace("kind = zero", "kind = mortality\nrho = 1")
    );
    let cfg = write_config(dir.path(), &text);
    let out = run(&["thresholds"], &cfg, dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("thresholds.csv")).unwrap();
    let mut flips = 0;
    let mut last = None;
    for line in csv.lines().skip(1) {
        let c: Vec<&str> = line.split(',').collect();
        let ratio: f64 = c[4].parse().unwrap();
        let predicts = c[6] == "true";
        assert_eq!(predicts, ratio <= 3.0 + 1e-12, "{line}");
        if last.is_some_and(|l| l != predicts) {
            flips += 1;
        }
        last = Some(predicts);
    }
    assert_eq!(flips, 1);
}

#[test]
fn stationary_limits_geometry_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = MINIMAL.replace("kind = zero", "kind = mortality\nrho = 1");
    let cfg = write_config(dir.path(), &text);

    let out = run(&["stationary"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("check_bounds = true"));
    let csv = fs::read_to_string(dir.path().join("stationary.csv")).unwrap();
    let head = csv.lines().next().unwrap();
    assert!(
        head.starts_with("# U=") && head.contains("V_prime_0="),
        "{head}"
    );

    let out = run(&["limits"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(0));
    let lim = fs::read_to_string(dir.path().join("limits.csv")).unwrap();
    assert_eq!(lim.lines().next(), Some("d,mu,nu,fp0,gp0,h,k"));

    let out = run(&["geometry"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("geometry.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn short_simulation_writes_fronts_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{MINIMAL}[grid]\nlx = 30\nly = 10\ndx = 0.5\ndy = 0.5\nt_final = 12\nrecord_every = 0.5\nsnapshots = 0, 6\n"
    );
    let cfg = write_config(dir.path(), &text);
    let a = run(&["simulate", "--workers", "1"], &cfg, &dir.path().join("a"));
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let b = run(&["simulate", "--workers", "3"], &cfg, &dir.path().join("b"));
    assert_eq!(b.status.code(), Some(0));
    let fa = fs::read(dir.path().join("a/fronts.csv")).unwrap();
    let fb = fs::read(dir.path().join("b/fronts.csv")).unwrap();
    assert_eq!(fa, fb);
    let text = String::from_utf8(fa).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("t,x_front_plus,x_front_minus,u_max,mass")
    );
    assert_eq!(text.lines().count(), 1 + 25);
    let snap = fs::read_to_string(dir.path().join("a/snapshot_001.csv")).unwrap();
    assert!(snap.starts_with("# t=6"));
    assert_eq!(snap.lines().count(), 2 + 121 * 21);
    let stdout = String::from_utf8_lossy(&a.stdout);
    assert!(stdout.contains("speed+1 = "), "{stdout}");
}
