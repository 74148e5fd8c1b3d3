//! Golden-file suite: command output for the committed inputs and the
//! planar table is diffed against `data/golden/`. Set `GHFP_BLESS=1` to
//! rewrite the goldens after an intended change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    match std::env::var_os("GHFP_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

fn ghfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghfp"))
        .args(args)
        .env("GHFP_DATA_DIR", data_dir())
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ghfp(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// The seconds column is the only nondeterministic field.
fn mask_seconds(table: &str) -> String {
    table
        .lines()
        .map(|l| match l.rsplit_once(' ') {
            Some((head, secs)) if secs.parse::<f64>().is_ok() => format!("{head} *"),
            _ => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

fn golden(name: &str, actual: &str) {
    let path = data_dir().join("golden").join(name);
    if std::env::var_os("GHFP_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn example_reports() {
    for ex in ["gh4_1", "gh3_3", "gh8_1", "gh81_1"] {
        golden(&format!("{ex}.report.txt"), &stdout(&["report", &format!("{ex}.coc")]));
    }
}

#[test]
fn example_pi_tables() {
    for ex in ["gh4_1", "gh3_3", "gh8_1"] {
        golden(&format!("{ex}.propelinear.txt"), &stdout(&["propelinear", &format!("{ex}.coc")]));
    }
}

#[test]
fn table1_small() {
    golden("table1.txt", &mask_seconds(&stdout(&["table1", "--a-min", "4", "--a-max", "6"])));
}

#[test]
fn report_lines_for_examples() {
    let r = stdout(&["report", "gh4_1.coc"]);
    for line in ["rank=2", "kernel=2", "group=[4,4]", "pi_group=[2,2]"] {
        assert!(r.lines().any(|l| l == line), "missing {line}");
    }
    let r = stdout(&["report", "gh8_1.coc"]);
    for line in ["rank=2", "kernel=2", "group=[4,4,4]"] {
        assert!(r.lines().any(|l| l == line), "missing {line}");
    }
}

#[test]
fn committed_inputs_are_reproducible() {
    let tmp = std::env::temp_dir().join(format!("ghfp-golden-{}", std::process::id()));
    fs::create_dir_all(&tmp).unwrap();
    let out = |name: &str| tmp.join(name).to_string_lossy().into_owned();
    let s3 = data_dir().join("s3.coc").to_string_lossy().into_owned();
    stdout(&["build", "--construction", "sylvester-power", "--q", "3", "--t", "2", "--out", &out("pow.coc")]);
    stdout(&["build", "--construction", "kronecker", "--left", &s3, "--right", &s3, "--out", &out("kron.coc")]);
    stdout(&["build", "--construction", "planar", "--a", "4", "--b", "3", "--out", &out("planar.coc")]);
    stdout(&["build", "--construction", "sylvester", "--p", "2", "--m", "3", "--order", "primitive", "--out", &out("s8.coc")]);
    let read = |p: PathBuf| fs::read(p).unwrap();
    assert_eq!(read(tmp.join("pow.coc")), read(tmp.join("kron.coc")));
    assert_eq!(read(tmp.join("pow.coc")), read(data_dir().join("gh3_3.coc")));
    assert_eq!(read(tmp.join("planar.coc")), read(data_dir().join("gh81_1.coc")));
    assert_eq!(read(tmp.join("s8.coc")), fs::read_to_string(data_dir().join("gh8_1.coc")).unwrap().replace("gh8_1.cay", "s8.cay").into_bytes());
    assert_eq!(read(tmp.join("s8.cay")), read(data_dir().join("gh8_1.cay")));
    // the .ghm of a cocycle is its matrix, and verifies
    stdout(&["build", "--construction", "sylvester-power", "--q", "3", "--t", "2", "--out", &out("pow.ghm")]);
    assert_eq!(stdout(&["verify", &out("pow.ghm")]).lines().next(), Some("GH(3,3) OK"));
    fs::remove_dir_all(&tmp).ok();
}

#[test]
fn corrupted_input_exits_with_2() {
    let tmp = std::env::temp_dir().join(format!("ghfp-bad-{}.coc", std::process::id()));
    fs::write(&tmp, "p=3 m=1\nv=3\n0 0 0\n0 1 2\n0 2\n").unwrap();
    let out = ghfp(&["report", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5, column 4"), "{err}");
    fs::remove_file(&tmp).ok();
}

#[test]
fn failed_check_exits_nonzero() {
    let tmp = std::env::temp_dir().join(format!("ghfp-nongh-{}.ghm", std::process::id()));
    fs::write(&tmp, "ghm 1\np=3 m=1\nv=3\n0 0 0\n0 1 2\n0 1 2\n").unwrap();
    let out = ghfp(&["verify", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("not GH:"));
    fs::remove_file(&tmp).ok();
}

#[test]
fn json_mirrors_text() {
    let text = stdout(&["code", "gh3_3.coc"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&["--json", "code", "gh3_3.coc"])).unwrap();
    let outputs = json["outputs"].as_object().unwrap();
    for line in text.lines() {
        let (k, v) = line.split_once('=').unwrap();
        let j = &outputs[k];
        let rendered = match j {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert_eq!(rendered, v, "key {k}");
    }
    assert_eq!(json["seed"], 0);
    assert!(json["inputs"].as_object().unwrap().values().all(|h| h.as_str().unwrap().starts_with("sha256:")));
    // same inputs and seed, same outputs
    let again: serde_json::Value = serde_json::from_str(&stdout(&["--json", "code", "gh3_3.coc"])).unwrap();
    assert_eq!(json["outputs"], again["outputs"]);
}
