use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybridgraph")).args(args).output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn single(out: &Output) -> Value {
    let mut v = lines(out);
    assert_eq!(v.len(), 1, "{}", String::from_utf8_lossy(&out.stdout));
    v.pop().unwrap()
}

#[test]
fn analyze_h1() {
    let out = run(&["analyze", &data("inequalities/h1.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let v = single(&out);
    assert_eq!(v["tool"], "hybridgraph");
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    let r = &v["report"];
    assert_eq!(r["alpha"], "2");
    assert_eq!(r["alpha_hat"], "2");
    assert_eq!(r["alpha_star"], "7/3");
    assert_eq!(r["classification"], "NON_GENUINE");
    assert!((r["theta"]["dual"].as_f64().unwrap() - 2.10992).abs() < 1e-4);
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn analyze_bowles_with_timings_and_dot() {
    let dir = std::env::temp_dir().join(format!("hybridgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("bowles.dot");
    let out = run(&["analyze", &data("inequalities/bowles.txt"), "--timings", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = single(&out);
    assert_eq!(v["report"]["alpha"], "8");
    assert_eq!(v["report"]["alpha_hat"], "8");
    assert_eq!(v["report"]["events"].as_array().unwrap().len(), 48);
    assert!(v["timings_ms"].is_object());
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_input_exits_with_2() {
    let dir = std::env::temp_dir().join(format!("hybridgraph-cli-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.txt");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let out = run(&["analyze", empty.to_str().unwrap(), "--scenario", &data("scenarios/broadcast_3_2_2.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let missing = run(&["analyze", "/nonexistent/ineq.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn quantum_values() {
    let ineq = data("inequalities/h1.txt");
    for (file, want) in [("h1_ghz.toml", 2.042), ("h1_tuned.toml", 2.069), ("h1_product.toml", 0.0)] {
        let out = run(&["quantum", &ineq, &data(&format!("strategies/{file}"))]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let r = &single(&out)["report"];
        assert!((r["value"].as_f64().unwrap() - want).abs() < 5e-3, "{file}: {}", r["value"]);
        assert_eq!(r["no_signaling"], true);
    }
}

#[test]
fn verify_paper_theta_only() {
    let out = run(&["verify-paper", "--only", "theta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    let summary = &v.last().unwrap()["report"];
    assert_eq!(summary["failed"], 0);
    assert_eq!(summary["checks"].as_u64().unwrap() as usize, v.len() - 1);
}

#[test]
fn verify_paper_flags_a_mismatch() {
    let out = run(&["verify-paper", "--only", "alpha_hat", "--h1-weight", "1.1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = lines(&out);
    let h1 = v.iter().find(|l| l["report"]["name"] == "h1.alpha_hat").unwrap();
    assert_eq!(h1["report"]["passed"], false);
    assert_eq!(h1["report"]["computed"], "11/5");
}

#[test]
fn search_is_reproducible() {
    let scenario = data("scenarios/broadcast_3_3_3.toml");
    let args = ["search", scenario.as_str(), "--seed", "7", "--samples", "150"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = lines(&a);
    let summary = v.last().unwrap();
    assert_eq!(summary["report"]["record"], "summary");
    assert_eq!(summary["report"]["samples_drawn"], 150);
    for c in &v[..v.len() - 1] {
        let r = &c["report"]["inequality"];
        assert_eq!(c["report"]["record"], "candidate");
        let q = |k: &str| -> (i64, i64) {
            let s = r[k].as_str().unwrap();
            match s.split_once('/') {
                Some((n, d)) => (n.parse().unwrap(), d.parse().unwrap()),
                None => (s.parse().unwrap(), 1),
            }
        };
        let ((an, ad), (hn, hd)) = (q("alpha"), q("alpha_hat"));
        assert!(an * hd < hn * ad);
    }
}

#[test]
fn search_rejects_small_sizes() {
    let out = run(&["search", &data("scenarios/broadcast_3_3_3.toml"), "--max-size", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn vertices_and_graph() {
    let ineq = data("inequalities/h1.txt");
    let stab = single(&run(&["vertices", "stab", &ineq]));
    let qstab = single(&run(&["vertices", "qstab", &ineq]));
    let hstab = single(&run(&["vertices", "hstab", &ineq]));
    let count = |v: &Value| v["report"]["count"].as_u64().unwrap();
    assert_eq!(qstab["report"]["polytope"], "QSTAB");
    assert!(count(&stab) <= count(&hstab));
    assert_eq!(count(&qstab) as usize, qstab["report"]["vertices"].as_array().unwrap().len());
    let dot = run(&["graph", &ineq]);
    assert_eq!(dot.status.code(), Some(0));
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("graph h1 {"));
    assert_eq!(text.matches(" -- ").count(), 14);
}
