use num_bigint::BigInt;
use obstructa::zlinalg::{Certificate, CertificateKind, Payload, SparseMatrix};
use obstructa_cli::Report;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstructa")).args(args).output().expect("binary runs")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("error is one JSON object")
}

fn tmp(name: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("obstructa-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_file(&p);
    p
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn dense(rows: &[&[i64]]) -> SparseMatrix {
    SparseMatrix::from_dense(&rows.iter().map(|r| big(r)).collect::<Vec<_>>())
}

#[test]
fn exit_codes_and_json_errors() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["vk", "builtin:no_such"], 2, "validation"),
        (&["vk", "builtin:k5", "-d", "4"], 2, "validation"),
        (&["--size-guard", "3", "vk", "builtin:k5"], 3, "size_guard"),
        (&["frobnicate"], 2, "usage"),
        (&["linalg", "snf", "/definitely/not/here.json"], 2, "validation"),
    ];
    for (args, code, kind) in cases {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        let e = stderr_json(&o);
        assert_eq!(e["error"]["code"], kind, "{args:?}");
        assert_eq!(e["error"]["exit_code"], code);
    }
}

#[test]
fn degenerate_maps_exit_with_four() {
    let map = tmp("degenerate.json");
    std::fs::write(&map, r#"{"d":2,"coords":{"0":["0","0"],"1":["2","0"],"2":["1","0"],"3":["3","0"]}}"#).unwrap();
    let o = bin(&["geom", "intersect", map.to_str().unwrap(), "0,1", "2,3"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stderr_json(&o)["error"]["code"], "degenerate");
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let run = || {
        let o = bin(&["--json", "vk", "builtin:k5"]);
        assert!(o.status.success());
        let r: Report = serde_json::from_slice(&o.stdout).unwrap();
        r
    };
    let (a, b) = (run(), run());
    assert_eq!(a.without_timings(), b.without_timings());
    assert_eq!(a.inputs.len(), 1);
    assert_eq!(a.inputs[0].sha256.len(), 64);
    assert_eq!(a.tool, "obstructa");
    assert!(!a.timings.is_empty());
}

#[test]
fn output_file_collects_json_lines() {
    let out = tmp("batch.jsonl");
    for m in ["1", "2", "3"] {
        assert!(bin(&["-o", out.to_str().unwrap(), "trees", "rank", "-m", m]).status.success());
    }
    let text = std::fs::read_to_string(&out).unwrap();
    let ranks: Vec<u64> = text.lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["result"]["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 2, 6]);
}

#[test]
fn builtin_complex_round_trips_through_a_file() {
    let out = tmp("k5.json");
    assert!(bin(&["-o", out.to_str().unwrap(), "complex", "builtin", "k5"]).status.success());
    let o = bin(&["--json", "complex", "validate", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["census"]["counts"], serde_json::json!([5, 10]));
    let bad = tmp("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","maximal_simplices":[],"simplices":[[0,1,2],[0,1]]}"#).unwrap();
    let o = bin(&["complex", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_rejects_tampered_values() {
    let out = tmp("k5.jsonl");
    assert!(bin(&["-o", out.to_str().unwrap(), "vk", "builtin:k5"]).status.success());
    assert!(bin(&["verify", out.to_str().unwrap()]).status.success());
    let mut v: Value = serde_json::from_str(std::fs::read_to_string(&out).unwrap().trim()).unwrap();
    let cocycle = &mut v["certificates"][0]["payload"]["cocycle"];
    let first = cocycle[0].as_str().map(|s| s.parse::<i64>().unwrap()).or(cocycle[0].as_i64()).expect("integer entry");
    cocycle[0] = if cocycle[0].is_string() { serde_json::json!((first + 1).to_string()) } else { serde_json::json!(first + 1) };
    let bad = tmp("k5-tampered.jsonl");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = bin(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
    let garbage = tmp("garbage.jsonl");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(bin(&["verify", garbage.to_str().unwrap()]).status.code(), Some(2));
}

/// Square 0123 with diagonal 02 and the triangle 012 filled in.
fn square_pairing(cycle: &[i64], value: i64) -> Certificate {
    // edges e0=01, e1=12, e2=23, e3=30, e4=02
    let d0 = dense(&[&[-1, 1, 0, 0], &[0, -1, 1, 0], &[0, 0, -1, 1], &[1, 0, 0, -1], &[-1, 0, 1, 0]]);
    let d1 = dense(&[&[1, 1, 0, 0, -1]]);
    Certificate {
        kind: CertificateKind::NonzeroByPairing,
        subject: "loop around the open square".into(),
        payload: Payload::Pairing {
            coboundary: d0,
            next_coboundary: Some(d1),
            cocycle: big(&[0, 0, 0, 1, 0]),
            cycle: big(cycle),
            value: BigInt::from(value),
        },
    }
}

#[test]
fn verify_accepts_homologous_cycles_and_rejects_wrong_values() {
    let z1 = [1, 1, 1, 1, 0];
    let z2 = [0, 0, 1, 1, 1];
    for z in [z1, z2] {
        square_pairing(&z, 1).verify().unwrap();
    }
    assert!(square_pairing(&z1, 2).verify().is_err());
    assert!(square_pairing(&[1, 0, 0, 0, 0], 0).verify().is_err());

    let mut report = Report::new("synthetic");
    report.certificates.push(square_pairing(&z2, 1));
    let path = tmp("square.jsonl");
    std::fs::write(&path, report.to_json_line()).unwrap();
    assert!(bin(&["verify", path.to_str().unwrap()]).status.success());
    report.certificates[0] = square_pairing(&z2, 2);
    std::fs::write(&path, report.to_json_line()).unwrap();
    assert_eq!(bin(&["verify", path.to_str().unwrap()]).status.code(), Some(5));
}

#[test]
fn linalg_solve_certifies_both_outcomes() {
    let m = tmp("m.json");
    std::fs::write(&m, r#"{"rows":2,"cols":2,"entries":[[0,0,2],[1,1,3]]}"#).unwrap();
    let run = |rhs: &str| {
        let o = bin(&["--json", "linalg", "solve", m.to_str().unwrap(), "--rhs", rhs]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_slice::<Value>(&o.stdout).unwrap()
    };
    assert_eq!(run("4,9")["certificates"][0]["kind"], "zero_with_primitive");
    assert_eq!(run("1,9")["certificates"][0]["kind"], "nonzero_by_infeasibility");
    let o = bin(&["--json", "linalg", "snf", m.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["divisors"], serde_json::json!(["1", "6"]));
}

#[test]
fn geom_link_counts_the_synthetic_linking() {
    let lk = |map: &str, a: &str, g: &str| {
        let o = bin(&["--json", "geom", "link", map, "--complex", "builtin:disjoint_sphere_sphere_torus", "--cycle2", a, "--cycle1", g]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["result"]["linking_number"].as_str().unwrap().to_string()
    };
    assert_eq!(lk("builtin:synthetic_linked", "A", "g1"), "1");
    assert_eq!(lk("builtin:synthetic_linked", "A", "g2"), "0");
    assert_eq!(lk("builtin:synthetic_unlinked", "A", "g1"), "0");
}

#[test]
fn help_exits_cleanly() {
    assert!(bin(&["--help"]).status.success());
    assert!(bin(&["--version"]).status.success());
}
