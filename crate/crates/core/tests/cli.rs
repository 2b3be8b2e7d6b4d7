use std::path::Path;
use std::process::{Command, Output};

use contextuality::cli::{emit_box, emit_box_string, parse_box, parse_box_str, BoxSpecFile};
use contextuality::{kcbs, pr_box, tensor_power, XorFamily};

fn ctxq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxq")).args(args).env_remove("CTXQ_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV written by `measure` or `batch`, split on commas.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("box,measure,value,certificate,iterations,seconds"));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn box_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for b in [pr_box(), kcbs().unwrap(), XorFamily::PeresMermin.isotropic(0.9).unwrap()] {
        let path = dir.path().join("box.toml");
        emit_box(&b, &path).unwrap();
        let back = parse_box(&path).unwrap();
        assert_eq!(back, b);
        assert_eq!(parse_box_str(&emit_box_string(&b).unwrap()).unwrap(), b);
    }
    assert_eq!(BoxSpecFile::from_box(&pr_box()).observables.len(), 4);
}

#[test]
fn box_files_reject_bad_documents() {
    let good = emit_box_string(&pr_box()).unwrap();
    let negative = good.replacen("0.5, 0.0, 0.0, 0.5", "1.5, -0.5, 0.0, 0.0", 1);
    assert!(parse_box_str(&negative).is_err());
    let unknown = good.replacen("[\"A1\", \"A2\"]", "[\"A1\", \"Z9\"]", 1);
    assert!(parse_box_str(&unknown).unwrap_err().to_string().contains("Z9"));
    let extra = format!("comment = \"x\"\n{good}");
    assert!(parse_box_str(&extra).is_err());
    let broken = good.replacen("]]", "]", 1);
    assert!(parse_box_str(&broken).unwrap_err().to_string().contains("line"));
    assert!(parse_box(Path::new("/nonexistent/box.toml")).is_err());
}

#[test]
fn measure_named_boxes() {
    let o = ctxq(&["measure", "builtin:PR", "xu"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &rows(&o)[0];
    assert_eq!((r[0].as_str(), r[1].as_str()), ("builtin:PR", "xu"));
    assert!((r[2].parse::<f64>().unwrap() - 0.41504).abs() < 1e-5);
    assert!(r[3].parse::<f64>().unwrap() <= 1e-7);
    assert!(stdout(&o).starts_with("# tol="));

    let o = ctxq(&["measure", "builtin:KCBS", "xu"]);
    assert!((rows(&o)[0][2].parse::<f64>().unwrap() - 0.0466576).abs() < 1e-5);

    let o = ctxq(&["measure", "builtin:PM", "cost"]);
    assert_eq!(rows(&o)[0][2].parse::<f64>().unwrap(), 1.0);

    let o = ctxq(&["measure", "builtin:CH:5:alpha=0.9", "beta"]);
    assert!((rows(&o)[0][2].parse::<f64>().unwrap() - 4.5).abs() < 1e-12);

    let o = ctxq(&["measure", "builtin:M", "consistency", "--format", "plain"]);
    assert!(stdout(&o).starts_with("builtin:M consistency = 0.000000000"));
}

#[test]
fn measure_with_weights() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    std::fs::write(&w, "0 0 0 1\n").unwrap();
    let o = ctxq(&["measure", "builtin:PR", "xu", "--weights", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&o)[0][2].parse::<f64>().unwrap() <= 1e-8);

    let o = ctxq(&["measure", "builtin:PR", "xu", "--weights", "optimize"]);
    assert!((rows(&o)[0][2].parse::<f64>().unwrap() - 0.41504).abs() < 1e-5);

    std::fs::write(&w, "0.5 0.5\n").unwrap();
    assert_eq!(ctxq(&["measure", "builtin:PR", "xu", "--weights", w.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(ctxq(&["measure", "builtin:NOPE", "xu"]).status.code(), Some(2));
    assert_eq!(ctxq(&["measure", "/nonexistent.toml", "cost"]).status.code(), Some(2));
    assert_eq!(ctxq(&["measure", "builtin:PR", "entropy"]).status.code(), Some(2));
    assert_eq!(ctxq(&["measure", "builtin:KCBS", "beta"]).status.code(), Some(2));
    let o = ctxq(&["measure", "builtin:PM", "xu", "--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(rows(&o).len(), 1);

    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("pm3.toml");
    emit_box(&tensor_power(&XorFamily::PeresMermin.extremal().unwrap(), 3).unwrap(), &big).unwrap();
    assert_eq!(ctxq(&["measure", big.to_str().unwrap(), "xu"]).status.code(), Some(4));
    assert_eq!(ctxq(&["measure", big.to_str().unwrap(), "cost"]).status.code(), Some(4));
}

#[test]
fn deterministic_output() {
    let args = ["measure", "builtin:CH:6:alpha=0.97", "xmax", "--deterministic"];
    let (a, b) = (ctxq(&args), ctxq(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(rows(&a)[0][5], "0");
}

#[test]
fn export_then_measure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pm.toml");
    assert_eq!(ctxq(&["export", "builtin:PM:alpha=0.9", path.to_str().unwrap()]).status.code(), Some(0));
    let o = ctxq(&["measure", path.to_str().unwrap(), "cost"]);
    assert!((rows(&o)[0][2].parse::<f64>().unwrap() - 0.4).abs() < 1e-9);
}

#[test]
fn batch_rows_keep_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = dir.path().join("jobs.txt");
    let sources =
        ["builtin:PM", "builtin:PR", "builtin:KCBS", "builtin:CH:9", "builtin:M:alpha=0.9", "builtin:PR:alpha=0.6"];
    let text: String = sources.iter().map(|s| format!("{s} xu\n{s} cost\n")).collect();
    std::fs::write(&jobs, format!("# jobs\n\n{text}")).unwrap();
    let serial = ctxq(&["batch", jobs.to_str().unwrap(), "--deterministic"]);
    let parallel = Command::new(env!("CARGO_BIN_EXE_ctxq"))
        .args(["batch", jobs.to_str().unwrap(), "--deterministic"])
        .env("CTXQ_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
    let r = rows(&serial);
    assert_eq!(r.len(), 12);
    for (k, s) in sources.iter().enumerate() {
        assert_eq!((r[2 * k][0].as_str(), r[2 * k][1].as_str()), (*s, "xu"));
        assert_eq!(r[2 * k + 1][1], "cost");
    }

    std::fs::write(&jobs, "builtin:PR xu\nbuiltin:NOPE xu\n").unwrap();
    let o = ctxq(&["batch", jobs.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(rows(&o).len(), 1);
}

#[test]
fn figure_chain_output() {
    let o = ctxq(&["figure-chain", "--n-min", "3", "--n-max", "50", "--variant", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,alpha,xu");
    assert_eq!(lines.len(), 97);
    let o = ctxq(&["figure-chain", "--n-min", "50", "--n-max", "50", "--solver", "both"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let xu: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((xu - (50f64 / 49.0).log2()).abs() < 1e-12);
    let o = ctxq(&["figure-chain", "--n-min", "5", "--n-max", "5", "--variant", "quantum", "--solver", "reduced"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
    assert!((f[1] - 0.894427).abs() < 1e-6);
    assert!((f[2] - contextuality::closed_form::xu_chain(5, f[1]).unwrap()).abs() < 1e-9);
    assert_eq!(ctxq(&["figure-chain", "--n-min", "2"]).status.code(), Some(2));
    assert_eq!(ctxq(&["figure-chain", "--n-min", "9", "--n-max", "4"]).status.code(), Some(2));
}

#[test]
fn verify_suites_report_checks() {
    let o = ctxq(&["verify", "--suite", "equivalence", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("suite,check,result,detail"));
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
    let o = ctxq(&["verify", "--suite", "properties", "--seed", "42", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(ctxq(&["verify", "--suite", "everything"]).status.code(), Some(2));
}
