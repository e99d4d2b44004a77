use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_raptor-bounds"));
    c.env_remove("RAPTOR_BOUNDS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn hamming_bound_has_one_row_per_delta() {
    let out = stdout(&run(&["bound", "--outer", "hamming:6", "--delta", "0:20:1"]));
    assert!(out.starts_with("# raptor-bounds"));
    assert!(out.contains("# k = 57"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 21);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[0], i.to_string());
        let upper: f64 = cells[3].parse().unwrap();
        let ds: f64 = cells[5].parse().unwrap();
        assert!(ds <= upper && upper <= 1.0);
        // 17 significant digits
        assert_eq!(cells[3].split('e').next().unwrap().len(), 18);
    }
}

#[test]
fn simulation_is_reproducible_across_thread_counts() {
    let args = [
        "simulate",
        "--outer",
        "hamming:4",
        "--fold-degrees",
        "--delta",
        "0,2,4",
        "--seed",
        "7",
        "--target-failures",
        "40",
        "--max-trials",
        "20000",
    ];
    let one = bin().args(args).arg("--threads").arg("1").output().unwrap();
    let many = bin().args(args).env("RAPTOR_BOUNDS_THREADS", "4").output().unwrap();
    assert_eq!(stdout(&one), stdout(&many));
    assert!(stdout(&one).contains("# seed = 7"));
    let other = run(&["simulate", "--outer", "hamming:4", "--fold-degrees", "--delta", "0,2,4", "--seed", "8", "--max-trials", "20000"]);
    assert_ne!(data_rows(&stdout(&one)), data_rows(&stdout(&other)));
}

#[test]
fn ensemble_simulation_reports_dimension_histogram() {
    let out = stdout(&run(&[
        "simulate",
        "--outer",
        "uniform-pc:14:10",
        "--dist",
        "r10",
        "--fold-degrees",
        "--delta",
        "0,3",
        "--codes",
        "20",
        "--trials-per-code",
        "10",
    ]));
    let hist = out.lines().last().unwrap();
    assert!(hist.starts_with("# k_C histogram = "), "{hist}");
    let total: usize = hist["# k_C histogram = ".len()..]
        .split(' ')
        .map(|kv| kv.split(':').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 20);
    assert_eq!(data_rows(&out).len(), 2);
}

#[test]
fn config_errors_exit_with_two_and_name_the_field() {
    for (args, field) in [
        (vec!["bound", "--outer", "hamming:3", "--field", "6"], "--field"),
        (vec!["bound", "--outer", "hamming:3", "--delta", "5:1:1"], "--delta"),
        (vec!["bound", "--outer", "hammming:3"], "--outer"),
        (vec!["bound", "--outer", "hamming:3"], "--dist"),
        (vec!["bound", "--outer", "hamming:6", "--construction", "met"], "--split"),
        (vec!["errexp", "--rate", "0.9", "--kernel", "nope"], "--kernel"),
        (vec!["bound", "--outer", "hamming:6", "--threads", "0"], "--threads"),
    ] {
        let o = run(&args);
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {err}");
        assert!(err.contains(field), "{args:?}: {err}");
    }
}

#[test]
fn feasibility_guards_exit_with_three() {
    let o = run(&["oracle", "--outer", "hamming:6", "--delta", "0"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["enumerate", "--outer", "uniform-pc:400:300", "--field", "4", "--kind", "bicomposition"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn repetition_code_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let code = write(dir.path(), "rep.txt", "# repetition code\n2 1 2\n1 1\n");
    let dist = write(dir.path(), "omega.txt", "1 0.5\n2 0.5\n");
    let out = stdout(&run(&["oracle", "--outer", &format!("file:{code}"), "--dist", &dist, "--delta", "0:5:1"]));
    for (delta, row) in data_rows(&out).iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[3], format!("1/{}", 1u64 << (delta + 1)));
        assert_eq!(cells[2].parse::<f64>().unwrap(), 0.5f64.powi(delta as i32 + 1));
        assert_eq!(cells[4], "tuples+inclusion-exclusion");
    }
}

#[test]
fn dumped_code_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let direct = stdout(&run(&["enumerate", "--outer", "uniform-pc:12:6", "--dump-code", p, "--seed", "3"]));
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# raptor-bounds"));
    let reread = stdout(&run(&["enumerate", "--outer", &format!("file:{p}"), "--kind", "composition"]));
    let again = dir.path().join("h.txt");
    stdout(&run(&["enumerate", "--outer", &format!("file:{p}"), "--dump-code", again.to_str().unwrap()]));
    let strip = |t: String| t.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(std::fs::read_to_string(&path).unwrap()), strip(std::fs::read_to_string(&again).unwrap()));
    // the ensemble enumerator is an average, the dumped code a sample
    assert!(direct.contains("weight,2,12"));
    assert!(reread.contains("composition,2,12"));
}

#[test]
fn output_file_gets_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let o = run(&["errexp", "--rate", "0.95", "--epsilon", "0,0.05", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# raptor-bounds"));
    assert!(text.contains("# kernel = pi_limit"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    assert!(text.lines().last().unwrap().starts_with("# threshold_epsilon = "));
    let at_zero: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    assert!(at_zero < 0.0);
}
