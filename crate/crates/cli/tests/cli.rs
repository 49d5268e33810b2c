use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_skyrelay");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header line and numeric rows, comments dropped.
fn parse(csv: &str) -> (String, Vec<Vec<Option<f64>>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header").to_string();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| if c.is_empty() { None } else { c.parse().ok() })
                .collect()
        })
        .collect();
    (header, rows)
}

fn assert_matches_golden(preset: &str, cmd: &str) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&[cmd, "--preset", preset, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let golden = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{preset}.csv"))).unwrap();
    let actual = fs::read_to_string(&path).unwrap();
    let (gh, grows) = parse(&golden);
    let (ah, arows) = parse(&actual);
    assert_eq!(ah, gh);
    assert_eq!(arows.len(), grows.len());
    for (r, (a, g)) in arows.iter().zip(&grows).enumerate() {
        assert_eq!(a.len(), g.len(), "row {r}");
        for (c, (x, y)) in a.iter().zip(g).enumerate() {
            match (x, y) {
                (Some(x), Some(y)) => assert!(
                    (x - y).abs() <= 1e-9 * y.abs().max(1e-300),
                    "{preset} row {r} col {c}: {x} vs {y}"
                ),
                (None, None) => {}
                _ => panic!("{preset} row {r} col {c}: {x:?} vs {y:?}"),
            }
        }
    }
}

#[test]
fn fig2_matches_golden() {
    assert_matches_golden("fig2", "deploy");
}

#[test]
fn fig3_matches_golden() {
    assert_matches_golden("fig3", "ee");
}

#[test]
fn fig4a_matches_golden() {
    assert_matches_golden("fig4a", "minpower");
}

#[test]
fn fig4b_matches_golden() {
    assert_matches_golden("fig4b", "ee");
}

#[test]
fn fig4c_matches_golden() {
    assert_matches_golden("fig4c", "ee");
}

#[test]
fn sequential_output_is_identical() {
    let a = run(&["ee", "--preset", "fig4c"]);
    let b = run(&["ee", "--preset", "fig4c", "--sequential"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fig2_df_thresholds_in_csv() {
    let out = run(&["deploy", "--preset", "fig2"]);
    let (header, rows) = parse(&stdout(&out));
    let cols: Vec<&str> = header.split(',').collect();
    let idx = |name: &str| cols.iter().position(|c| *c == name).unwrap();
    let (h, mid, low, high) = (
        idx("h_min_m"),
        idx("DF_N10_pr4.31615dBm_x_m"),
        idx("DF_N10_pr0dBm_x_m"),
        idx("DF_N10_pr8.5dBm_x_m"),
    );
    for row in &rows {
        let h = row[h].unwrap();
        assert!((row[mid].unwrap() - 50.0).abs() < 0.01);
        if h >= 50.0 {
            assert_eq!(row[low], Some(100.0));
        }
        if h >= 47.0 {
            assert_eq!(row[high], Some(0.0));
        }
    }
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# shorter sweep\nsweep = h_min_m\nsweep_start = 50\nsweep_stop = 150\nsweep_points = 3\nseries = IRS:10, DF:1\n").unwrap();
    let out = run(&["ee", "--preset", "fig4c", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = parse(&stdout(&out));
    assert_eq!(rows.len(), 3);
    assert!(header.starts_with("h_min_m,IRS_N10_"));
    assert!(header.contains("DF_N1_ee"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "bogus_key = 1\n",
        "n = 0\n",
        "h_min_m = 400\nh_max_m = 300\n",
        "p_r_dbm = 10\np_r_w = 0.01\n",
        "omega = 1.5\n",
        "l_m = 100\nl_m = 200\n",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = dir.path().join(format!("bad{i}.cfg"));
        fs::write(&cfg, text).unwrap();
        let out = run(&["minpower", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code(&out), 1, "{text:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["minpower", "--no-such-flag"])), 1);
    assert_eq!(code(&run(&["deploy", "--preset", "fig3"])), 1);
    assert_eq!(code(&run(&["verify", "--perturb", "-2"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn missing_config_file_is_reported() {
    let out = run(&["ee", "--config", "/nonexistent/skyrelay.cfg"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unwritable_output_exits_three() {
    let out = run(&["deploy", "--preset", "fig2", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let ok = run(&["verify"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).lines().filter(|l| l.starts_with("PASS")).count() >= 9);
    assert!(!stdout(&ok).contains("FAIL"));

    let bad = run(&["verify", "--perturb", "0.01"]);
    assert_eq!(code(&bad), 2);
    assert_eq!(stdout(&bad).lines().filter(|l| l.starts_with("FAIL")).count(), 1);
}

#[test]
fn verify_outcome_independent_of_seed() {
    let marks = |seed: &str| -> Vec<bool> {
        let out = run(&["verify", "--seed", seed]);
        assert_eq!(code(&out), 0);
        stdout(&out)
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .map(|l| l.starts_with("PASS"))
            .collect()
    };
    assert_eq!(marks("1"), marks("987654321"));
}

#[test]
fn plan_trace_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plan.cfg");
    fs::write(&cfg, "series = AF:4, DF:4\nl_m = 300\nh_min_m = 50\nr0 = 3\n").unwrap();
    let out = run(&["plan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "series,iteration,x_m,total_w,total_dbm,converged");
    assert!(text.lines().any(|l| l.starts_with("AF_N4,")));
    assert!(text.lines().any(|l| l.starts_with("DF_N4,")));
}

#[test]
fn plot_script_references_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig4b.csv");
    let gp = dir.path().join("fig4b.gp");
    let out = run(&[
        "ee",
        "--preset",
        "fig4b",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let script = fs::read_to_string(&gp).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
}
