use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spiral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiral")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend(["--out", &path]);
    let o = spiral(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

fn grid_2x3(dir: &Path) -> String {
    let tiles: Vec<String> = (0..2)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .map(|(r, c)| {
            format!(
                r#"{{"id":"s{r}{c}","vertices":[[{c},{r}],[{c1},{r}],[{c1},{r1}],[{c},{r1}]]}}"#,
                c1 = c + 1,
                r1 = r + 1
            )
        })
        .collect();
    let path = dir.join("grid23.json");
    fs::write(&path, format!(r#"{{"tiles":[{}]}}"#, tiles.join(","))).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn generated_patches_validate() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "g.json", &["square-grid", "4"]);
    let o = spiral(&["validate", &p]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "ok: 16 tiles");
}

#[test]
fn grid_contact_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = grid_2x3(dir.path());
    let dg = spiral(&["graph", &p]);
    assert_eq!(stdout(&dg).lines().next(), Some("7 edges"));
    let cg = spiral(&["graph", &p, "--kind", "cg"]);
    let out = stdout(&cg);
    assert_eq!(out.lines().next(), Some("11 edges"));
    assert_eq!(out.matches("pointwise").count(), 4);
}

#[test]
fn rect_spiral_has_four_segmental_classes() {
    let o = spiral(&["classify", "fixture:corner_contact_spiral"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "rs.json", &["rect-spiral", "3"]);
    let o = spiral(&["classify", &p]);
    assert_eq!(stdout(&o).lines().next(), Some("4 segmental classes"));
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let trunc = dir.path().join("t.json");
    fs::write(&trunc, r#"{"tiles":["#).unwrap();
    let trunc = trunc.to_string_lossy().into_owned();
    let p = gen(dir.path(), "rs.json", &["rect-spiral", "2"]);
    for args in [
        vec!["analyze", trunc.as_str()],
        vec!["analyze", "/nonexistent/patch.json"],
        vec!["analyze", "fixture:no_such_fixture"],
        vec!["verify", p.as_str(), "--classes"],
        vec!["verify", p.as_str(), "--classes", "99"],
        vec!["analyze", p.as_str(), "--budget", "0"],
        vec!["analyze", p.as_str(), "--center", "1,nan"],
        vec!["gen", "rect-spiral", "0"],
        vec!["frobnicate"],
    ] {
        let o = spiral(&args);
        assert_eq!(code(&o), 3, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let grid = gen(dir.path(), "g.json", &["square-grid", "6"]);
    let o = spiral(&["analyze", &grid]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("precheck"), "{}", stderr(&o));

    let rs = gen(dir.path(), "rs.json", &["rect-spiral", "3"]);
    let o = spiral(&["analyze", &rs]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "spiral");
}

#[test]
fn verify_reports_a_reason() {
    let dir = tempfile::tempdir().unwrap();
    let rs = gen(dir.path(), "rs.json", &["rect-spiral", "3"]);
    let o = spiral(&["verify", &rs, "--classes", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("not verified: "), "{}", stderr(&o));
}

#[test]
fn ring_on_annulus() {
    let dir = tempfile::tempdir().unwrap();
    let an = gen(dir.path(), "an.json", &["annulus-rings", "3", "12"]);
    let o = spiral(&["ring", &an, "--strength"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ring"]["rings"].as_array().unwrap().len(), 3);
    assert!(stderr(&o).contains("ring only"), "{}", stderr(&o));
}

#[test]
fn render_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let rs = gen(dir.path(), "rs.json", &["rect-spiral", "3"]);
    let report = dir.path().join("r.json").to_string_lossy().into_owned();
    let o = spiral(&["analyze", &rs, "--out", &report]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("spiral: 2 arm(s)"), "{}", stdout(&o));

    let patch: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rs).unwrap()).unwrap();
    let tiles = patch["tiles"].as_array().unwrap().len();
    let svg1 = stdout(&spiral(&["render", &rs, "--report", &report, "--graph"]));
    let svg2 = stdout(&spiral(&["render", &rs, "--report", &report, "--graph"]));
    assert_eq!(svg1, svg2);
    assert_eq!(svg1.matches("class=\"tile\"").count(), tiles);
    assert_eq!(svg1.matches("class=\"thread\"").count(), 2);
    assert_eq!(svg1.matches("class=\"center\"").count(), 1);
    assert!(svg1.matches("class=\"cut\"").count() > 0);
    assert!(svg1.trim_end().ends_with("</svg>"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"candidates":[{"status":"verified","arms":[["nope"]]}]}"#).unwrap();
    let o = spiral(&["render", &rs, "--report", &bad.to_string_lossy()]);
    assert_eq!(code(&o), 3);
}
