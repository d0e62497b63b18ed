use std::io::Write;

use clap::Parser;
use serde_json::Value;
use tempfile::NamedTempFile;

use tdham_cli::{run, RunConfig};

const K4: &str = "p 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const TRIANGLE: &str = "p 3\n0 1 1\n1 2 2\n0 2 3\n";
const P3: &str = "p 3\n0 1\n1 2\n";

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tdham(args: &[&str], stdin: &str) -> Output {
    let config = RunConfig::try_parse_from(std::iter::once("tdham").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&config, &mut stdin.as_bytes(), &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn count_k4_with_every_engine() {
    for engine in ["zeta", "reference", "oracle"] {
        let o = tdham(&["count", "--engine", engine], K4);
        assert_eq!((o.code, o.stdout.as_str()), (0, "3\n"), "{engine}: {}", o.stderr);
    }
    let g = file(K4);
    let o = tdham(&["count", "--graph", g.path().to_str().unwrap(), "--cache", "1024"], "");
    assert_eq!(o.stdout, "3\n");
}

#[test]
fn tsp_triangle() {
    let o = tdham(&["tsp"], TRIANGLE);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("min_cost=6\ncycles_at_min=1\n"), "{}", o.stdout);
    let v = json(&tdham(&["tsp", "--format", "json"], TRIANGLE).stdout);
    assert_eq!(v["min_cost"], 6);
    assert_eq!(v["cycles_at_min"], "1");
    assert_eq!(v["total_cycles"], "1");
    assert!(v["stats"]["zeta"]["strand_count"].as_u64().unwrap() > 0);
    let oracle = json(&tdham(&["tsp", "--format", "json", "--engine", "oracle"], TRIANGLE).stdout);
    assert_eq!(oracle["min_cost"], 6);
}

#[test]
fn tsp_without_tour() {
    let o = tdham(&["tsp"], P3);
    assert!(o.stdout.starts_with("min_cost=none\n"), "{}", o.stdout);
}

#[test]
fn validate_p3_two_bags() {
    let td = file("s 2\nb 0 0 1\nb 1 1 2\ne 0 1\n");
    let o = tdham(&["validate", "--td", td.path().to_str().unwrap()], P3);
    assert_eq!((o.code, o.stdout.as_str()), (0, "valid, width=1, depth=3\n"));
    let bad = file("s 2\nb 0 0 1\nb 1 2\ne 0 1\n");
    let o = tdham(&["validate", "--td", bad.path().to_str().unwrap()], P3);
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("invalid"));
}

#[test]
fn decompose_round_trips_through_validate() {
    let o = tdham(&["decompose"], K4);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("c width=3 depth=4\n"), "{}", o.stdout);
    let td = file(&o.stdout);
    let v = tdham(&["validate", "--td", td.path().to_str().unwrap()], K4);
    assert_eq!(v.stdout, "valid, width=3, depth=4\n");
}

#[test]
fn supplied_decomposition_is_used() {
    let td = file("s 2\nb 0 0 1\nb 1 1 2\ne 0 1\n");
    let path = td.path().to_str().unwrap();
    let o = tdham(&["count", "--td", path, "--root", "1"], P3);
    assert_eq!(o.stdout, "0\n");
    let o = tdham(&["count", "--td", path, "--root", "7"], P3);
    assert_ne!(o.code, 0);
    let bad = file("s 1\nb 0 0 1\n");
    let o = tdham(&["count", "--td", bad.path().to_str().unwrap()], P3);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("invalid tree decomposition"), "{}", o.stderr);
}

#[test]
fn parse_errors_exit_one() {
    for input in ["0 1\n", "p 3\n0 0\n", "p 2\n0 1 -4\n", "p 2\n0 9\n"] {
        let o = tdham(&["count"], input);
        assert_eq!(o.code, 1, "{input:?}");
        assert!(o.stderr.starts_with("error: line"), "{}", o.stderr);
    }
    let o = tdham(&["count", "--graph", "/nonexistent/graph.txt"], "");
    assert_eq!(o.code, 1);
}

#[test]
fn oracle_guard_is_reported() {
    let mut text = String::from("p 13\n");
    for i in 0..13 {
        text.push_str(&format!("{i} {}\n", (i + 1) % 13));
    }
    let o = tdham(&["count", "--engine", "oracle"], &text);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("at most 12 vertices"), "{}", o.stderr);
    assert_eq!(tdham(&["count"], &text).stdout, "1\n");
}

#[test]
fn oracle_subcommand() {
    let o = tdham(&["oracle"], K4);
    assert_eq!(o.stdout, "count=3\nmin_cost=4\n");
}

fn without_wall_time(mut v: Value) -> Value {
    fn strip(v: &mut Value) {
        match v {
            Value::Object(m) => {
                m.remove("wall_time");
                m.remove("time");
                m.values_mut().for_each(strip);
            }
            Value::Array(a) => a.iter_mut().for_each(strip),
            _ => {}
        }
    }
    strip(&mut v);
    v
}

#[test]
fn json_is_deterministic_apart_from_timing() {
    for args in [&["count", "--format", "json"][..], &["tsp", "--format", "json"], &["count", "--format", "json", "--engine", "reference"]] {
        let a = json(&tdham(args, K4).stdout);
        let b = json(&tdham(args, K4).stdout);
        assert!(a["stats"]["wall_time"].is_number());
        assert_eq!(without_wall_time(a), without_wall_time(b));
    }
}

#[test]
fn bench_rows_agree_and_are_seeded() {
    let a = json(&tdham(&["bench", "--format", "json", "--seed", "5"], "").stdout);
    let b = json(&tdham(&["bench", "--format", "json", "--seed", "5"], "").stdout);
    assert_eq!(without_wall_time(a.clone()), without_wall_time(b));
    let rows = a.as_array().unwrap();
    for key in ["engine", "n", "w", "d", "strands", "peak_live_values", "time"] {
        assert!(rows.iter().all(|r| r.get(key).is_some()), "{key}");
    }
    for pair in rows.chunks(2) {
        assert_eq!(pair[0]["count"], pair[1]["count"]);
        assert_eq!((pair[0]["engine"].as_str(), pair[1]["engine"].as_str()), (Some("zeta"), Some("reference")));
    }
    let plain = tdham(&["bench"], "");
    assert!(plain.stdout.lines().next().unwrap().starts_with("instance"));
}

#[test]
fn zeta_and_reference_agree_on_counts() {
    let graphs = ["p 5\n0 1\n1 2\n2 3\n3 4\n4 0\n0 2\n1 3\n", "p 6\n0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n", K4];
    for g in graphs {
        let z = tdham(&["count"], g).stdout;
        let r = tdham(&["count", "--engine", "reference"], g).stdout;
        let o = tdham(&["count", "--engine", "oracle"], g).stdout;
        assert_eq!(z, r);
        assert_eq!(z, o);
    }
}
