use std::path::Path;
use std::process::{Command, Output};

fn infolab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infolab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let suits = r#"["spades", "clubs", "diamonds", "hearts"]"#;
    let files = [
        ("uniform4.json", format!(r#"{{"alphabet": {suits}, "probs": [0.25, 0.25, 0.25, 0.25]}}"#)),
        ("red.json", format!(r#"{{"alphabet": {suits}, "probs": [0, 0, 0.5, 0.5]}}"#)),
        (
            "product.json",
            r#"{"x_alphabet": ["a", "b"], "y_alphabet": ["u", "v"], "probs": [[0.12, 0.28], [0.18, 0.42]]}"#.into(),
        ),
        (
            "suit_color.json",
            format!(
                r#"{{"x_alphabet": {suits}, "y_alphabet": ["black", "red"],
                    "probs": [[0.25, 0], [0.25, 0], [0, 0.25], [0, 0.25]]}}"#
            ),
        ),
        (
            "flip.json",
            r#"{"x_alphabet": ["black", "red"], "y_alphabet": ["black", "red"], "rows": [[0.9, 0.1], [0.1, 0.9]]}"#
                .into(),
        ),
        ("samples.csv", "0\n1\n1\n2\n2\n2\n3\n3\n3\n3\n".into()),
        ("empty.csv", String::new()),
        ("broken.json", "{\n  \"alphabet\": [\"a\", \"b\"],\n  \"probs\": [0.5 0.5]\n}\n".into()),
        ("unnormalized.json", r#"{"alphabet": ["a", "b"], "probs": [0.5, 0.6]}"#.into()),
    ];
    for (name, body) in files {
        std::fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

#[test]
fn measure_text_output() {
    let dir = workspace();
    let kl = infolab(&["measure", "kl", "red.json", "uniform4.json"], dir.path());
    assert!(kl.status.success());
    assert_eq!(stdout(&kl), "0.693147 nats\n");
    let h = infolab(&["measure", "entropy", "uniform4.json", "--base", "bits"], dir.path());
    assert_eq!(stdout(&h), "2.000000 bits\n");
    let mi = infolab(&["measure", "mi", "product.json"], dir.path());
    assert_eq!(stdout(&mi), "0.000000 nats\n");
    let ce = infolab(&["measure", "cond_entropy", "suit_color.json"], dir.path());
    assert_eq!(stdout(&ce), "0.693147 nats\n");
    let inf = infolab(&["measure", "kl", "uniform4.json", "red.json"], dir.path());
    assert_eq!(stdout(&inf), "+inf nats\n");
}

#[test]
fn types_report_and_exit_codes() {
    let dir = workspace();
    let ok = infolab(&["types", "uniform4.json", "--n", "12"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("455 types checked, all bounds hold\n"));

    let rate = infolab(&["types", "uniform4.json", "--n", "4", "--p", "red.json", "--rate"], dir.path());
    assert_eq!(rate.status.code(), Some(0));
    let text = stdout(&rate);
    assert!(text.contains("divergence d(p,q) = 0.693147 nats"));
    assert_eq!(text.lines().filter(|l| l.starts_with(" ") && l.trim_start().starts_with(char::is_numeric)).count(), 3);

    let csv = infolab(&["types", "uniform4.json", "--n", "2", "--csv"], dir.path());
    let lines: Vec<String> = stdout(&csv).lines().map(String::from).collect();
    assert_eq!(lines[0], "type_counts,exact_log_prob,lower,upper,holds");
    assert_eq!(lines.len(), 1 + 10);

    let capped = infolab(&["types", "uniform4.json", "--n", "500"], dir.path());
    assert_eq!(capped.status.code(), Some(1));
    assert!(stderr(&capped).contains("exceed"), "{}", stderr(&capped));
}

#[test]
fn fit_round_trips_through_measure() {
    let dir = workspace();
    let out = infolab(&["fit", "categorical", "samples.csv", "--output", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fits"].as_array().unwrap().len(), 2);
    assert_eq!(v["max_theta_difference"].as_f64(), Some(0.0));
    let fitted = &v["fits"][0]["fitted"];
    assert_eq!(fitted["probs"], serde_json::json!([0.1, 0.2, 0.3, 0.4]));
    std::fs::write(dir.path().join("fitted.json"), fitted.to_string()).unwrap();
    let h = infolab(&["measure", "entropy", "fitted.json"], dir.path());
    assert!(h.status.success(), "{}", stderr(&h));

    let tilt = infolab(&["fit", "tilt", "samples.csv", "--mode", "min_divergence", "--output", "json"], dir.path());
    assert_eq!(tilt.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&tilt.stdout).unwrap();
    assert_eq!(v["fits"][0]["mode"], "min_divergence");
    assert_eq!(v["fits"][0]["converged"], true);
}

#[test]
fn input_errors_exit_one() {
    let dir = workspace();
    let empty = infolab(&["fit", "categorical", "empty.csv"], dir.path());
    assert_eq!(empty.status.code(), Some(1));
    let broken = infolab(&["measure", "entropy", "broken.json"], dir.path());
    assert_eq!(broken.status.code(), Some(1));
    assert!(stderr(&broken).contains("line 3"), "{}", stderr(&broken));
    let bad = infolab(&["measure", "entropy", "unnormalized.json"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    let missing = infolab(&["measure", "entropy", "nope.json"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
    let wrong_kind = infolab(&["measure", "mi", "red.json"], dir.path());
    assert_eq!(wrong_kind.status.code(), Some(1));
    let usage = infolab(&["measure"], dir.path());
    assert_eq!(usage.status.code(), Some(1));
    let strategy = infolab(&["game", "red.json", "--strategy", "psychic"], dir.path());
    assert_eq!(strategy.status.code(), Some(1));
    for o in [&empty, &broken, &bad, &missing, &wrong_kind, &usage, &strategy] {
        assert!(!stderr(o).contains("panicked"));
    }
}

#[test]
fn games_report_their_seed() {
    let dir = workspace();
    let out = infolab(
        &["game", "suit_color.json", "--rounds", "20000", "--seed", "7", "--output", "json"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["game"], "side_info");
    assert!((v["average_loss"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 0.01);

    let stubborn = infolab(
        &["game", "uniform4.json", "--strategy", "stubborn:red.json", "--rounds", "100", "--output", "json"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&stubborn.stdout).unwrap();
    assert_eq!(v["average_loss"], "+inf");
    assert_eq!(v["seed"], 0);
}

#[test]
fn dpi_modes() {
    let dir = workspace();
    let report = infolab(&["dpi", "suit_color.json", "flip.json", "--output", "json"], dir.path());
    assert_eq!(report.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&report.stdout).unwrap();
    assert_eq!(v["dpi_holds"], true);
    assert_eq!(v["markov_certified"], true);

    let gallery = infolab(&["dpi", "--gallery", "--output", "json"], dir.path());
    assert_eq!(gallery.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&gallery.stdout).unwrap();
    assert_eq!(v[0]["name"], "xor");
    assert!((v[0]["report"]["i_xy_given_z"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);

    let none = infolab(&["dpi"], dir.path());
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn shipped_particle_file_is_nonincreasing() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let out = infolab(&["dpi", "--particles", "particles.json", "--steps", "5", "--output", "json"], &data);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nonincreasing"], true);
    assert_eq!(v["mutual_information"].as_array().unwrap().len(), 6);
}
