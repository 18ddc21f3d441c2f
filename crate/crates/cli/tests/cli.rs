//! End-to-end runs of the `toda` binary against stored outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use toda_core::verify::betti_pattern;
use toda_core::{CartanType, Family};

fn toda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = toda(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

const TYPES: [(&str, &str); 6] = [
    ("A", "2"),
    ("A", "3"),
    ("C", "2"),
    ("B", "2"),
    ("D", "5"),
    ("E", "6"),
];

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn homology_goldens() {
    for (f, r) in TYPES {
        let got = stdout(&[
            "homology", "--family", f, "--rank", r, "--coeff", "Z", "--format", "json",
        ]);
        assert_eq!(got, golden(&format!("homology_{f}{r}.json")), "{f}{r}");
        // The stored groups must have the rational Betti numbers of their
        // family and binomial mod-2 counts by universal coefficients.
        let v: serde_json::Value = serde_json::from_str(&got).unwrap();
        let h = v["H"].as_array().unwrap();
        let l: usize = r.parse().unwrap();
        let ct = CartanType::new(f.parse::<Family>().unwrap(), l).unwrap();
        let free: Vec<usize> = h
            .iter()
            .map(|g| g["free"].as_u64().unwrap() as usize)
            .collect();
        assert_eq!(free, betti_pattern(ct), "{f}{r}");
        let twos = |k: usize| {
            h[k]["torsion"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|t| t.as_u64().unwrap() % 2 == 0)
                .count()
        };
        for k in 0..=l {
            let z2 = free[k] + twos(k) + if k > 0 { twos(k - 1) } else { 0 };
            assert_eq!(z2, binomial(l, k), "{f}{r} k={k}");
        }
    }
}

#[test]
fn homology_matches_known_examples() {
    let a3 = stdout(&[
        "homology", "--family", "A", "--rank", "3", "--coeff", "Z", "--format", "json",
    ]);
    assert_eq!(
        a3.trim_end(),
        r#"{"H":[{"free":1,"torsion":[]},{"free":1,"torsion":[2,2]},{"free":0,"torsion":[4]},{"free":0,"torsion":[]}]}"#
    );
    let a2 = stdout(&["homology", "--family", "A", "--rank", "2"]);
    assert_eq!(a2, "H_0(A2; Z) = Z\nH_1(A2; Z) = Z + Z_2\nH_2(A2; Z) = 0\n");
}

#[test]
fn graph_goldens() {
    for (f, r) in TYPES {
        let got = stdout(&["graph", "--family", f, "--rank", r, "--format", "dot"]);
        assert_eq!(got, golden(&format!("graph_{f}{r}.dot")), "{f}{r}");
        let l: u32 = r.parse().unwrap();
        let vertices = got
            .lines()
            .filter(|s| s.trim_end().ends_with("\";") && !s.contains("->"))
            .count();
        assert_eq!(vertices, 1 << l);
    }
    let a2 = stdout(&["graph", "--family", "A", "--rank", "2", "--format", "dot"]);
    let edges: Vec<&str> = a2.lines().filter(|s| s.contains("->")).collect();
    assert_eq!(
        edges,
        [
            "  \"(**)\" -> \"(0*)\" [weight=2, label=\"2\"];",
            "  \"(**)\" -> \"(*0)\" [weight=2, label=\"-2\"];"
        ]
    );
    let local = stdout(&[
        "graph",
        "--family",
        "A",
        "--rank",
        "3",
        "--variant",
        "local",
        "--format",
        "json",
    ]);
    assert_eq!(local, golden("graph_local_A3.json"));
}

#[test]
fn tau_goldens() {
    for t in ["A2", "C2", "B2"] {
        let (f, r) = t.split_at(1);
        let got = stdout(&["tau", "--family", f, "--rank", r]);
        assert_eq!(got, golden(&format!("tau_{t}.txt")), "{t}");
    }
    let a2 = stdout(&["tau", "--family", "A", "--rank", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&a2).unwrap();
    assert_eq!(v["tau"][1], "t2 - 1/2*t1^2");
    assert_eq!(v["a0"], serde_json::json!(["1", "-1"]));
    assert!(v["constraint"].is_null());
    let g2 = stdout(&["tau", "--family", "G", "--rank", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&g2).unwrap();
    assert!(v["a0"].is_null());
    assert!(v["constraint"].as_str().unwrap().contains("t5^2"));
}

#[test]
fn divisor_table() {
    let got = stdout(&["divisor", "--max-rank", "10"]);
    assert_eq!(got, golden("divisor.csv"));
    for line in got.lines().skip(1) {
        let cols: Vec<usize> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[3], 2 * ((cols[0] + 1) / 2));
        assert_eq!(cols[1], cols[2], "all roots real");
    }
    assert_eq!(
        stdout(&["divisor", "--rank", "4", "--format", "text"]),
        "l=4: degree 2, 2 real roots, 4 components\n"
    );
}

#[test]
fn simulate_csv() {
    let got = stdout(&[
        "simulate", "--family", "A", "--rank", "1", "--a", "-4", "--b", "2", "--t0", "0.5",
        "--t-end", "2", "--dt", "1e-3", "--every", "500",
    ]);
    let lines: Vec<&str> = got.lines().collect();
    assert_eq!(lines[0], "t,a_1,b_1,blowup_flag");
    assert_eq!(lines.len(), 5);
    let last: Vec<f64> = lines[4].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(last[0], 2.0);
    assert!((last[1] + 0.25).abs() < 1e-8 && (last[2] - 0.5).abs() < 1e-8);
    assert_eq!(last[3], 0.0);

    let blow = stdout(&[
        "simulate", "--family", "A", "--rank", "1", "--a", "-1", "--b", "1", "--t0", "1",
        "--t-end", "-1",
    ]);
    assert!(blow.trim_end().ends_with(",1"));

    let tau = stdout(&[
        "simulate",
        "--family",
        "C",
        "--rank",
        "2",
        "--from-tau",
        "1,0,5",
        "--t-end",
        "1.01",
    ]);
    assert_eq!(tau.lines().count(), 12);
}

#[test]
fn byte_identical_repeats() {
    let args = [
        "homology", "--family", "E", "--rank", "6", "--coeff", "Q", "--format", "csv",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn out_flag_writes_file() {
    let path: PathBuf = std::env::temp_dir().join(format!("toda-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = toda(&[
        "homology", "--family", "A", "--rank", "2", "--format", "json", "--out", p,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        golden("homology_A2.json")
    );
    let _ = std::fs::remove_file(path);
}

#[test]
fn exit_codes() {
    assert_eq!(
        toda(&["homology", "--family", "E", "--rank", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        toda(&["homology", "--family", "X", "--rank", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(toda(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        toda(&[
            "homology",
            "--family",
            "B",
            "--rank",
            "3",
            "--variant",
            "schubert"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        toda(&[
            "graph",
            "--family",
            "E",
            "--rank",
            "6",
            "--variant",
            "local"
        ])
        .status
        .code(),
        Some(1)
    );
    let bad = toda(&["verify", "--only", "13"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stdout).starts_with("FAIL 13"));
    let ok = toda(&["verify", "--suite", "paper", "--only", "1,10"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    assert_eq!(toda(&["--help"]).status.code(), Some(0));
}
