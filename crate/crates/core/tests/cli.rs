use std::path::Path;
use std::process::{Command, Output};

use ctwalk::cli::{exit_code, run, ExperimentConfig};
use ctwalk::{Error, Execution};
use serde_json::Value;

fn ctwalk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctwalk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("CTWALK_THREADS", "2")
        .output()
        .unwrap()
}

fn read_json(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("result.json")).unwrap()).unwrap()
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

#[test]
fn encode_table_follows_log2_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let out = ctwalk(&["encode-table", "--max-n", "8"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = std::fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "n,N,unary_symbols,binary_bits");
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[3], "3,8,8,3");
    assert_eq!(rows[8], "8,256,256,8");
    let json = read_json(dir.path());
    assert_eq!(json["command"], "encode-table");
    assert_eq!(json["version"], ctwalk::VERSION);
    assert_eq!(json["params"]["max_n"], 8);
    assert_eq!(json["result"]["binary_bits_equal_log2_n"], true);
}

#[test]
fn search_with_auto_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = ctwalk(
        &[
            "search", "--n", "6", "--m", "13", "--gamma", "auto", "--tf", "auto",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(header(&dir.path().join("trace.csv")), "t,prob_m,norm");
    let json = read_json(dir.path());
    let r = &json["result"];
    let t_star = r["t_star"].as_f64().unwrap();
    assert!((t_star - 4.0 * std::f64::consts::PI).abs() < 0.25 * 4.0 * std::f64::consts::PI);
    assert!(r["peak_probability"].as_f64().unwrap() > 0.5);
    assert!(r["gamma"].as_f64().unwrap() > 0.0);
    assert_eq!(r["tuning"]["sweep"].as_array().unwrap().len(), 50);
    assert_eq!(json["params"]["m"], 13);
}

#[test]
fn documented_headers() {
    let cases: &[(&[&str], &str, &str)] = &[
        (
            &["walk", "--size", "32", "--tf", "3"],
            "trace.csv",
            "t,norm,p_start,sigma",
        ),
        (
            &["walk", "--graph", "cycle", "--size", "12", "--tf", "3"],
            "trace.csv",
            "t,norm,p_start",
        ),
        (
            &["adiabatic", "--n", "3", "--m", "1", "--tf", "5"],
            "trace.csv",
            "t,prob_m,norm",
        ),
        (
            &[
                "hybrid", "--n", "3", "--m", "1", "--tf", "5", "--mix", "0.3",
            ],
            "trace.csv",
            "t,prob_m,norm",
        ),
        (&["gapscan", "--n", "4"], "gap.csv", "s,E0,E1,gap"),
        (
            &["sk-sample", "--n", "4", "--shots", "20"],
            "samples.csv",
            "shot,index,bits,energy",
        ),
        (
            &["glued-trees", "--depth", "2", "--tf", "4"],
            "transport.csv",
            "t,p_exit,norm",
        ),
        (
            &["scaling", "--protocol", "gap", "--n-range", "3..5"],
            "scaling.csv",
            "n,N,gamma,s_star,gap_min",
        ),
    ];
    for (args, file, expect) in cases {
        let dir = tempfile::tempdir().unwrap();
        let out = ctwalk(args, dir.path());
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(header(&dir.path().join(file)), *expect, "{args:?}");
        let body = std::fs::read_to_string(dir.path().join(file)).unwrap();
        // Plain decimal points only: every field parses as a number or bitstring.
        for line in body.lines().skip(1) {
            for field in line.split(',') {
                assert!(field.parse::<f64>().is_ok(), "{args:?}: {field}");
            }
        }
    }
}

#[test]
fn gap_csv_is_sorted_and_includes_minimum() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ctwalk(&["gapscan", "--n", "5", "--m", "3"], dir.path())
        .status
        .success());
    let json = read_json(dir.path());
    let s_star = json["result"]["s_star"].as_f64().unwrap();
    let body = std::fs::read_to_string(dir.path().join("gap.csv")).unwrap();
    let s: Vec<f64> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(s.windows(2).all(|w| w[0] < w[1]));
    assert!(s.contains(&s_star));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"command":"search","params":{"n":4,"bogus":1}}"#).unwrap();
    let out = ctwalk(&["run", bad.to_str().unwrap()], &dir.path().join("o1"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let out = ctwalk(&["gapscan", "--n", "12"], &dir.path().join("o2"));
    assert_eq!(out.status.code(), Some(2));

    let out = ctwalk(&["search", "--n", "3", "--m", "8"], &dir.path().join("o3"));
    assert_eq!(out.status.code(), Some(2));

    let out = ctwalk(
        &["search", "--n", "3", "--frobnicate"],
        &dir.path().join("o4"),
    );
    assert_eq!(out.status.code(), Some(2));

    // Output path blocked by a regular file.
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "x").unwrap();
    let out = ctwalk(&["encode-table"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(4));

    let missing = dir.path().join("nope.json");
    let out = ctwalk(&["run", missing.to_str().unwrap()], &dir.path().join("o5"));
    assert_eq!(out.status.code(), Some(4));

    let drift = Error::NormDrift {
        drift: 1e-3,
        tolerance: 1e-6,
    };
    assert_eq!(exit_code(&drift), 3);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"command":"gapscan","params":{"n":4,"m":2,"resolution":32}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("o");
    let out = ctwalk(
        &["--config", cfg.to_str().unwrap(), "gapscan", "--n", "5"],
        &out_dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = read_json(&out_dir);
    assert_eq!(json["params"]["n"], 5);
    assert_eq!(json["params"]["m"], 2);
    assert_eq!(json["result"]["dim"], 32);

    let out = ctwalk(
        &["--config", cfg.to_str().unwrap(), "search"],
        &dir.path().join("o2"),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"command":"sk-sample","params":{"n":4,"seed":3,"shots":64}}"#;
    let mut outputs = Vec::new();
    for (k, exec) in [Execution::Parallel, Execution::Sequential]
        .into_iter()
        .enumerate()
    {
        let mut cfg = ExperimentConfig::from_json(text).unwrap();
        cfg.out = Some(dir.path().join(format!("r{k}")));
        let res = run(&cfg, exec).unwrap();
        let mut json = read_json(&res.dir);
        json.as_object_mut().unwrap().remove("wall_time");
        let csv = std::fs::read(res.dir.join("samples.csv")).unwrap();
        outputs.push((json, csv));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn result_json_keys_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        ctwalk(&["glued-trees", "--depth", "2", "--tf", "2"], dir.path())
            .status
            .success()
    );
    let text = std::fs::read_to_string(dir.path().join("result.json")).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort_unstable();
    assert_eq!(top, sorted);
    assert!(top.contains(&"seed") && top.contains(&"params") && top.contains(&"version"));
}
