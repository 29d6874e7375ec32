use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn wgqed(args: &[&std::ffi::OsStr]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgqed")).args(args).output().expect("binary runs")
}

fn run_to(cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cfg.as_os_str(), "--out".as_ref(), out.as_os_str()];
    args.extend(extra.iter().map(|s| std::ffi::OsStr::new(*s)));
    wgqed(&args)
}

fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn write_cfg(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn spectrum_round_trips_through_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.csv");
    let res = run_to(&config("spectrum_single.cfg"), &out, &[]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let (header, rows) = read_table(&out);
    assert_eq!(header, ["delta", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"]);
    assert_eq!(rows.len(), 1001);
    let centre = &rows[500];
    assert_eq!(centre[0], 0.0);
    assert_eq!(centre[6], 0.0);
    assert!((centre[5] - 1.0).abs() < 1e-15);
    for row in &rows {
        assert!((row[5] + row[6] + row[7] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn three_atom_dip_sits_at_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        &dir,
        "mode = spectrum\ngamma = 1\ngamma0 = 0.1\ndetunings = 0 0 0\nphases = 3.141592653589793\ngrid = -5 5 101\n",
    );
    let out = dir.path().join("s.csv");
    assert!(run_to(&cfg, &out, &[]).status.success());
    let (_, rows) = read_table(&out);
    let min = rows.iter().min_by(|a, b| a[6].total_cmp(&b[6])).unwrap();
    assert_eq!(min[0], 0.0);
}

#[test]
fn eta_map_reaches_the_optimum_column() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("eta.csv");
    assert!(run_to(&config("eta_map.cfg"), &out, &[]).status.success());
    let (header, rows) = read_table(&out);
    assert_eq!(header, ["theta", "s", "eta"]);
    assert_eq!(rows.len(), 181 * 81);
    let max = rows.iter().map(|r| r[2]).fold(f64::NEG_INFINITY, f64::max);
    assert!(max >= 13.7, "max eta {max}");
    // θ-major ordering.
    assert_eq!(rows[1][0], rows[0][0]);
    assert!(rows[81][0] > rows[0][0]);
}

#[test]
fn eta_argmax_at_fixed_phase() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("arg.csv");
    assert!(run_to(&config("eta_argmax.cfg"), &out, &[]).status.success());
    let (_, rows) = read_table(&out);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] - 4.0).abs() < 1e-8);
    assert!((rows[0][2] - (7.0 + 4.0 * 3f64.sqrt())).abs() < 1e-9);
}

#[test]
fn transparency_and_cavity_runs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    let res = run_to(&config("transparency_odd.cfg"), &out, &[]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("protocol"));
    assert_eq!(read_table(&out).1.len(), 241);

    let out = dir.path().join("c.csv");
    assert!(run_to(&config("cavity.cfg"), &out, &[]).status.success());
    let (header, rows) = read_table(&out);
    assert_eq!(header, ["delta_probe", "re_t", "im_t", "T"]);
    assert_eq!(rows.len(), 401);
    for row in &rows {
        assert!(row[3] <= 1.0 + 1e-12);
    }
    // Probes on the atomic lines are transmission zeros.
    let at = |p: f64| rows.iter().find(|r| r[0] == p).unwrap()[3];
    assert_eq!(at(1.0), 0.0);
    assert_eq!(at(-1.0), 0.0);
}

#[test]
fn oracle_check_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let res = run_to(&config("oracle_check.cfg"), &a, &[]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let res = Command::new(env!("CARGO_BIN_EXE_wgqed"))
        .env("WGQED_THREADS", "1")
        .args([config("oracle_check.cfg").as_os_str(), "--out".as_ref(), b.as_os_str()])
        .output()
        .unwrap();
    assert!(res.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (header, rows) = read_table(&a);
    assert_eq!(header, ["case", "max_abs_dr", "max_abs_dt"]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[1] <= 1e-10 && r[2] <= 1e-10));

    let c = dir.path().join("c.csv");
    assert!(run_to(&config("oracle_check.cfg"), &c, &["--seed", "8"]).status.success());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(run_to(&config("transparency_odd.cfg"), &a, &[]).status.success());
    assert!(run_to(&config("transparency_odd.cfg"), &b, &[]).status.success());
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(!bytes.contains(&b'\r'));
}

#[test]
fn tsv_format() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "mode = cavity\nkappa = 1\ng = 1\natom_detunings = 1\ngrid = -1 1 3\nformat = tsv\n");
    let out = dir.path().join("c.tsv");
    assert!(run_to(&cfg, &out, &[]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("delta_probe\tre_t\tim_t\tT"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.csv");

    let bad = write_cfg(&dir, "mode = spectrum\ngamma = -1\ndetunings = 0\nphases = 0\ngrid = 0 1 2\n");
    let res = run_to(&bad, &out, &[]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("gamma"));

    let unknown = write_cfg(&dir, "mode = spectrum\ncolour = blue\n");
    let res = run_to(&unknown, &out, &[]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    let missing = dir.path().join("nope.cfg");
    assert_eq!(run_to(&missing, &out, &[]).status.code(), Some(1));

    let good = config("spectrum_single.cfg");
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(run_to(&good, &unwritable, &[]).status.code(), Some(1));

    let no_output = write_cfg(&dir, "mode = oracle-check\ncases = 1\n");
    assert_eq!(wgqed(&[no_output.as_os_str()]).status.code(), Some(1));

    assert_eq!(wgqed(&["--bogus".as_ref()]).status.code(), Some(1));
    assert_eq!(wgqed(&["--help".as_ref()]).status.code(), Some(0));

    let res = Command::new(env!("CARGO_BIN_EXE_wgqed"))
        .env("WGQED_THREADS", "zero")
        .args([good.as_os_str(), "--out".as_ref(), out.as_os_str()])
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn degenerate_region_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "mode = eta-argmax\ngamma = 1\ntheta_range = 1 1\ns_range = 2 2\n");
    let res = run_to(&cfg, &dir.path().join("o.csv"), &[]);
    assert_eq!(res.status.code(), Some(1));
}
