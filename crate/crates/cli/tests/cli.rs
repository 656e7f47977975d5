use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cssqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cssqkd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn field<'a>(header: &str, row: &'a str, name: &str) -> &'a str {
    let i = header.split(',').position(|h| h == name).unwrap();
    row.split(',').nth(i).unwrap()
}

#[test]
fn no_arguments_prints_usage_and_fails() {
    let o = cssqkd(&[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(cssqkd(&["--help"]).status.code(), Some(0));
    assert_eq!(cssqkd(&["--version"]).status.code(), Some(0));
    assert_eq!(cssqkd(&["simulate", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cssqkd(&["bound", "--n", "10", "--epsilon", "0", "--delta", "0.1", "--bogus"]).status.code(), Some(1));
    assert_eq!(cssqkd(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cssqkd(&["bound", "--n", "7", "--epsilon", "0", "--delta", "0.1"]).status.code(), Some(1));
    assert_eq!(cssqkd(&["exponent", "--R", "0.3", "--p0", "0.6", "--p1", "0.1"]).status.code(), Some(1));
}

#[test]
fn keyrate_thresholds_in_header() {
    let o = cssqkd(&["keyrate", "--p-max", "0.25", "--steps", "500"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let get = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("# {key}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("threshold_this_paper") - 0.110_028).abs() < 1e-6);
    assert!((get("threshold_mayers") - 0.075_68).abs() < 1e-4);
    let rows = data_rows(&text);
    assert_eq!(rows[0], "p,rate_this_paper,rate_mayers");
    assert_eq!(rows.len(), 502);
}

#[test]
fn exponent_grid_check() {
    let o = cssqkd(&["exponent", "--R", "0.3", "--p0", "0.11", "--p1", "0.11", "--check-grid"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = data_rows(&text);
    let delta: f64 = field(rows[0], rows[1], "grid_delta").parse().unwrap();
    assert!(delta <= 1e-6);
    assert_eq!(field(rows[0], rows[1], "regime"), "tilted");
}

#[test]
fn every_output_starts_with_manifest() {
    let o = cssqkd(&["bound", "--n", "10000", "--epsilon", "0", "--delta", "0.1", "--seed", "5"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# tool=cssqkd-cli "));
    assert_eq!(lines.next().unwrap(), "# subcommand=bound");
    assert_eq!(lines.next().unwrap(), "# seed=5");
    assert_eq!(lines.next().unwrap(), "# output=-");
    assert!(text.contains("# --delta=0.1\n"));
}

#[test]
fn numeric_fields_round_trip() {
    let o = cssqkd(&["keyrate", "--steps", "50"]);
    for row in data_rows(&stdout(&o)).iter().skip(1) {
        for f in row.split(',') {
            let x: f64 = f.parse().unwrap();
            assert_eq!(format!("{x:?}"), f);
        }
    }
}

#[test]
fn simulate_is_deterministic_and_writes_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(format!("{name}.csv"));
        let tr = dir.path().join("t.txt");
        let o = cssqkd(&[
            "simulate", "--n", "16", "--theta", "4", "--m", "2", "--channel", "bsc", "--pz", "0.03",
            "--px", "0.03", "--sessions", "40", "--seed", "17",
            "--out", out.to_str().unwrap(), "--transcript", tr.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        (fs::read_to_string(&out).unwrap(), fs::read_to_string(&tr).unwrap())
    };
    let (a, ta) = run("a");
    let (b, tb) = run("a");
    assert_eq!(a, b);
    assert_eq!(ta, tb);
    let rows = data_rows(&a);
    assert_eq!(rows.len(), 41);
    assert_eq!(field(rows[0], rows[1], "seed"), "17");
    assert_eq!(field(rows[0], rows[40], "seed"), "56");
    assert_eq!(ta.matches("\nseed=").count() + usize::from(ta.starts_with("seed=")), 40);
}

#[test]
fn intercept_resend_only_aborts_exits_two() {
    let o = cssqkd(&["simulate", "--n", "64", "--theta", "3", "--eve", "intercept-resend", "--sessions", "20"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(data_rows(&text).iter().skip(1).all(|r| r.contains(",true,")));
    let o = cssqkd(&["simulate", "--n", "64", "--theta", "3", "--sessions", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn code_file_round_trip_through_perr() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = dir.path().join("c1.txt");
    let c2 = dir.path().join("c2.txt");
    let o = cssqkd(&["sample-code", "--n", "10", "--k", "3", "--seed", "2", "--out", c1.to_str().unwrap()]);
    assert!(o.status.success());
    let o = cssqkd(&["sample-code", "--c1-dual", c1.to_str().unwrap(), "--m", "3", "--seed", "9", "--out", c2.to_str().unwrap()]);
    assert!(o.status.success());
    let sampled = cssqkd(&["perr", "--c1-dual", c1.to_str().unwrap(), "--m", "3", "--seed", "9", "--p0", "0.05", "--p1", "0.1"]);
    let from_file = cssqkd(&["perr", "--c1-dual", c1.to_str().unwrap(), "--c2-dual", c2.to_str().unwrap(), "--p0", "0.05", "--p1", "0.1"]);
    let a = stdout(&sampled);
    let b = stdout(&from_file);
    assert_eq!(data_rows(&a), data_rows(&b));
    let rows = data_rows(&a);
    assert_eq!(field(rows[0], rows[1], "method"), "exact");
    assert_eq!(field(rows[0], rows[1], "m"), "3");
    assert_eq!(field(rows[0], rows[1], "p_first"), "0.1");

    let mc = cssqkd(&["perr", "--c1-dual", c1.to_str().unwrap(), "--c2-dual", c2.to_str().unwrap(), "--p0", "0.05", "--p1", "0.1", "--method", "monte-carlo", "--trials", "200000"]);
    let m = stdout(&mc);
    let mr = data_rows(&m);
    let exact: f64 = field(rows[0], rows[1], "value").parse().unwrap();
    let est: f64 = field(mr[0], mr[1], "value").parse().unwrap();
    let ci: f64 = field(mr[0], mr[1], "ci").parse().unwrap();
    assert!((est - exact).abs() <= 2.0 * ci + 1e-3);

    write(&c2, "10 2\n1111100000\n");
    let o = cssqkd(&["perr", "--c1-dual", c1.to_str().unwrap(), "--c2-dual", c2.to_str().unwrap(), "--p0", "0.05", "--p1", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn batch_runs_sections_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("b.conf");
    let out1 = dir.path().join("one.csv");
    write(
        &conf,
        &format!(
            "# two runs\nsubcommand=bound\nn=10000\nepsilon=0\ndelta=0.1\n\nsubcommand=exponent\nR=0.3\np0=0.11\np1=0.11\ncheck-grid=false\nout={}\n",
            out1.display()
        ),
    );
    let o = cssqkd(&["batch", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# subcommand=bound"));
    assert!(!text.contains("subcommand=exponent"));
    let direct = cssqkd(&["exponent", "--R", "0.3", "--p0", "0.11", "--p1", "0.11", "--out", out1.to_str().unwrap()]);
    assert!(direct.status.success());
    assert!(fs::read_to_string(&out1).unwrap().contains("0.3,0.11,0.11,"));

    write(&conf, "");
    let o = cssqkd(&["batch", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn batch_parallel_matches_sequential() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("b.conf");
    let mut text = String::new();
    for s in 0..6 {
        text.push_str(&format!(
            "subcommand=simulate\nn=16\ntheta=4\nm=2\nchannel=bsc\npz=0.02\npx=0.02\nsessions=10\nseed={s}\n\n"
        ));
    }
    write(&conf, &text);
    let seq = cssqkd(&["batch", conf.to_str().unwrap()]);
    let par = cssqkd(&["batch", conf.to_str().unwrap(), "--parallel", "4"]);
    assert!(seq.status.success());
    assert_eq!(seq.stdout, par.stdout);
    assert_eq!(stdout(&seq).matches("# subcommand=simulate").count(), 6);
}

#[test]
fn batch_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("b.conf");
    let cases = [
        ("subcommand=bound\nn=10\nn=12\n", ":3:", "`n`"),
        ("subcommand=bound\nn=10\nbogus=1\n", ":3:", "bogus"),
        ("subcommand=keyrate\n\nsubcommand=keyrate\nsteps=x\n", ":3:", "steps"),
    ];
    for (body, line, needle) in cases {
        write(&conf, body);
        let o = cssqkd(&["batch", conf.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(line) && err.contains(needle), "{err}");
        assert!(o.stdout.is_empty());
    }
    let o = cssqkd(&["batch", dir.path().join("missing.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn batch_of_aborting_simulations_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("b.conf");
    write(
        &conf,
        "subcommand=simulate\nn=64\ntheta=3\neve=intercept-resend\nsessions=5\n\nsubcommand=simulate\nn=64\ntheta=3\neve=intercept-resend\nsessions=5\nseed=100\n",
    );
    assert_eq!(cssqkd(&["batch", conf.to_str().unwrap()]).status.code(), Some(2));
}
