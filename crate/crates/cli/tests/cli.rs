use std::fs;
use std::process::{Command, Output};

fn geolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geolab"))
        .args(args)
        .env_remove("GEOLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn ok(args: &[&str]) -> String {
    let o = geolab(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn selfint_examples() {
    assert_eq!(ok(&["--surface", "pants", "selfint", "aaB"]), "2\n");
    assert_eq!(ok(&["--surface", "torus", "selfint", "aabb"]), "1\n");
    assert_eq!(ok(&["--surface", "torus", "selfint", "ab"]), "0\n");
    assert_eq!(ok(&["--surface", "pants", "selfint", "aaBaBaB"]), "12\n");
    // input is reduced first
    assert_eq!(ok(&["--surface", "pants", "selfint", "bAaaBaB"]), "2\n");
}

#[test]
fn selfint_with_oracle_and_pairs() {
    let text = ok(&["--surface", "torus", "selfint", "aabbb", "--oracle", "--show-pairs"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "2");
    assert_eq!(lines[1], "oracle 2");
    assert_eq!(lines.iter().filter(|l| l.starts_with("pair ")).count(), 2);

    let json = ok(&["--surface", "pants", "--format", "json", "selfint", "aaB", "--oracle"]);
    let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert_eq!(v["i"], 2);
    assert_eq!(v["oracle"], 2);
    assert_eq!(v["L"], 3);
    assert_eq!(v["bound"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&geolab(&["--surface", "torus", "selfint", "abab"])), 65);
    assert_eq!(code(&geolab(&["--surface", "torus", "selfint", "axb"])), 64);
    assert_eq!(code(&geolab(&["--surface", "torus", "selfint", "aA"])), 64);
    assert_eq!(code(&geolab(&["selfint", "ab"])), 64);
    assert_eq!(code(&geolab(&["--surface", "sphere", "selfint", "ab"])), 64);
    assert_eq!(
        code(&geolab(&["--surface", "torus", "enumerate", "--max-length", "15"])),
        66
    );
    assert_eq!(code(&geolab(&["--surface", "torus", "sequence", "--k-max", "61"])), 66);
    assert_eq!(code(&geolab(&["--surface", "torus", "systole", "--k", "0"])), 64);
    assert_eq!(
        code(&geolab(&[
            "--surface",
            "torus",
            "--lambda-a",
            "0.1",
            "selfint",
            "ab",
            "--oracle"
        ])),
        64
    );
    assert_eq!(
        code(&geolab(&["--surface", "torus", "--lambda-a", "-2", "selfint", "ab"])),
        64
    );
    assert_eq!(
        code(&geolab(&["--surface", "torus", "--workers", "0", "selfint", "ab"])),
        64
    );
    assert_eq!(code(&geolab(&["frobnicate"])), 64);
    let o = geolab(&["--surface", "torus", "--out", "/nonexistent/dir/x.svg", "render", "ab"]);
    assert_eq!(code(&o), 74);
    assert!(!o.stderr.is_empty());
}

#[test]
fn enumerate_rows() {
    let pants = ok(&["--surface", "pants", "enumerate", "--max-length", "4"]);
    let mut lines = pants.lines();
    assert_eq!(lines.next(), Some("word,L,i,saturates_bound"));
    assert!(pants.lines().any(|l| l == "aaB,3,2,true"));
    let torus = ok(&["--surface", "torus", "enumerate", "--max-length", "4"]);
    assert!(torus.lines().any(|l| l == "aabb,4,1,true"));
    assert!(torus.lines().any(|l| l == "ab,2,0,true"));
    for line in torus.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[0].len(), fields[1].parse::<usize>().unwrap());
    }
}

#[test]
fn printed_words_round_trip() {
    let torus = ok(&["--surface", "torus", "enumerate", "--max-length", "5"]);
    for line in torus.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(
            ok(&["--surface", "torus", "selfint", fields[0]]).trim(),
            fields[2],
            "{line}"
        );
    }
}

#[test]
fn enumerate_json_lines() {
    let json = ok(&[
        "--surface",
        "torus",
        "--format",
        "json",
        "enumerate",
        "--max-length",
        "3",
    ]);
    let rows: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|r| r["word"].is_string() && r["saturates_bound"].is_boolean()));
}

#[test]
fn sequence_rows() {
    let torus = ok(&["--surface", "torus", "sequence", "--k-max", "6"]);
    let lines: Vec<&str> = torus.lines().collect();
    assert_eq!(lines[0], "k,s_k,I_k,I_k-k,witnesses");
    assert!(lines[2].starts_with("2,5,2,0,"));
    assert!(lines[2].split(',').nth(4).unwrap().split(';').any(|w| w == "aabbb"));
    assert!(lines[6].starts_with("6,7,6,0,"));

    let pants = ok(&["--surface", "pants", "sequence", "--k-max", "5"]);
    assert!(pants.lines().nth(5).unwrap().starts_with("5,5,6,1,"));

    let json = ok(&["--surface", "pants", "--format", "json", "sequence", "--k-max", "5"]);
    let rows: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4]["I_k"], 6);
    assert_eq!(rows[4]["status"], "lemma");
    assert_eq!(rows[3]["status"], "empirical");
    assert_eq!(rows[1]["status"], "lemma");
}

#[test]
fn systole_single() {
    let out = ok(&["--surface", "torus", "systole", "--k", "4"]);
    assert!(out.lines().nth(1).unwrap().starts_with("4,6,4,0,"));
}

#[test]
fn render_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.svg");
    ok(&[
        "--surface",
        "pants",
        "--out",
        path.to_str().unwrap(),
        "render",
        "aaBaBaB",
    ]);
    let svg = fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert_eq!(svg.matches("class=\"lift\"").count(), 7);
    assert_eq!(svg.matches("crossing in-p").count(), 12);
}

#[test]
fn verify_small_scale() {
    let args = ["--surface", "torus", "verify", "--max-length", "6", "--k-max", "4"];
    let o = geolab(&args);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let mut faulty = args.to_vec();
    faulty.push("--inject-fault");
    assert_eq!(code(&geolab(&faulty)), 1);
}

#[test]
fn worker_count_does_not_change_output() {
    let args = |w: &'static str| ["--surface", "pants", "--workers", w, "sequence", "--k-max", "8"];
    assert_eq!(ok(&args("1")), ok(&args("3")));
    let e = |w: &'static str| ["--surface", "torus", "--workers", w, "enumerate", "--max-length", "7"];
    assert_eq!(ok(&e("1")), ok(&e("3")));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "# settings\nsurface = torus\nformat = json\nlength_cap = 3\n").unwrap();
    let p = path.to_str().unwrap();
    let out = ok(&["--config", p, "selfint", "aabb"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["i"], 1);
    assert_eq!(code(&geolab(&["--config", p, "enumerate", "--max-length", "4"])), 66);
    // flags win over the file
    assert_eq!(
        ok(&[
            "--config",
            p,
            "--surface",
            "pants",
            "--format",
            "text",
            "selfint",
            "aaB"
        ]),
        "2\n"
    );
    fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(code(&geolab(&["--config", p, "selfint", "ab"])), 64);
}
