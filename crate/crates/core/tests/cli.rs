use std::path::Path;

use deltacouple::cli::{emit_preset, run, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("deltacouple").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn column(csv: &str, name: &str, route: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|c| c[1] == route)
        .map(|c| c[col].parse().unwrap())
        .collect()
}

#[test]
fn preset_emits_a_parseable_config() {
    let (code, out, _) = call(&["preset", "figure-expo"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(deltacouple::cli::ScanConfig::from_json(&out).unwrap(), emit_preset("figure-expo").unwrap());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let (code, out, _) = call(&["preset", "figure-const", "--emit-config", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
    assert!(std::fs::read_to_string(path).unwrap().contains("\"offset\": 5.0"));
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(call(&["preset", "figure-9"]).0, EXIT_USAGE);
    assert_eq!(call(&["scan"]).0, EXIT_USAGE);
    assert_eq!(call(&["scan", "--config", "/nonexistent/x.json"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{\n  \"problem\": {\"channels\": [], \"couplings\": []},\n  \"energy\": 1\n}");
    let (code, _, err) = call(&["scan", "--config", &cfg]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line"), "{err}");
    let cfg = write_config(dir.path(), "jobs.json", &emit_preset("figure-const").unwrap().to_json());
    assert_eq!(call(&["scan", "--config", &cfg, "--jobs", "0"]).0, EXIT_USAGE);
}

#[test]
fn figure_const_shape_near_threshold() {
    let mut cfg = emit_preset("figure-const").unwrap();
    cfg.energies.min = 5.000001;
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "c.json", &cfg.to_json());
    let (code, out, err) = call(&["scan", "--config", &path, "--route", "matcher"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let t = column(&out, "t_cross_total", "matcher");
    assert_eq!(t.len(), 200);
    assert!(t[0] < 1e-2, "{}", t[0]);
    let peak = (0..t.len()).max_by(|&a, &b| t[a].total_cmp(&t[b])).unwrap();
    assert!(peak > 0 && peak < t.len() - 1);
    assert!(t[..=peak].windows(2).all(|w| w[1] > w[0]));
    assert!(t[peak..].windows(2).all(|w| w[1] < w[0]));
    assert!(t[199] < 0.1 * t[peak]);
}

#[test]
fn zero_coupling_scan_is_exactly_zero() {
    for name in deltacouple::cli::PRESETS {
        let mut cfg = emit_preset(name).unwrap();
        cfg.problem.couplings[0].strength = 0.0;
        cfg.energies.count = 20;
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(dir.path(), "c.json", &cfg.to_json());
        let (code, out, err) = call(&["scan", "--config", &path]);
        assert_eq!(code, EXIT_OK, "{err}");
        for route in ["closed_form", "matcher", "greens", "oracle"] {
            let t = column(&out, "t_cross_total", route);
            assert_eq!(t.len(), 20);
            assert!(t.iter().all(|&v| v == 0.0), "{name} {route}");
        }
    }
}

#[test]
fn figure_expo_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "c.json", &emit_preset("figure-expo").unwrap().to_json());
    let (code, out, err) = call(&["scan", "--config", &path]);
    assert_eq!(code, EXIT_OK, "{err}");
    let cf = column(&out, "t_cross_total", "closed_form");
    for route in ["matcher", "greens", "oracle"] {
        let other = column(&out, "t_cross_total", route);
        assert!(cf.iter().zip(&other).all(|(a, b)| (a - b).abs() < 1e-8), "{route}");
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "c.json", &emit_preset("figure-linear").unwrap().to_json());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (out, jobs) in [(&a, "1"), (&b, "4")] {
        let code = call(&["scan", "--config", &path, "--format", "json", "--jobs", jobs, "--output", out.to_str().unwrap()]).0;
        assert_eq!(code, EXIT_OK);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let rows: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    let energies: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["energy"].as_f64().unwrap()).collect();
    assert_eq!(energies.len(), 800);
    assert!(energies.windows(2).all(|w| w[1] >= w[0]));
}
