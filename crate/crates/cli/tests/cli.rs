use std::path::PathBuf;
use std::process::{Command, Output};

fn triarray(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triarray"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("triarray-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn verify_exit_codes() {
    let ok = triarray(&["ds", "verify", "--group", "cyclic:7", "--members", "1,2,4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "{1,2,4} (7,3,1)\n");

    let bad = triarray(&["ds", "verify", "--group", "cyclic:7", "--members", "1,2,3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("difference condition violated"));

    let wrong = triarray(&[
        "ds",
        "verify",
        "--group",
        "cyclic:7",
        "--members",
        "1,2,4",
        "--params",
        "7,3,2",
    ]);
    assert_eq!(wrong.status.code(), Some(1));

    let usage = triarray(&["ds", "verify", "--group", "nosuch", "--members", "1"]);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(triarray(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn family_exit_codes() {
    let five = triarray(&["family", "gen", "--u", "5"]);
    assert_eq!(five.status.code(), Some(2));
    assert!(stderr(&five).contains("square-free part 5"));
    assert_eq!(
        triarray(&["family", "gen", "--u", "9"]).status.code(),
        Some(2)
    );
    let two = triarray(&["family", "gen", "--u", "2"]);
    assert_eq!(two.status.code(), Some(0));
    assert!(stdout(&two).contains("(16,6,2)"));
}

#[test]
fn table_rows() {
    let o = triarray(&["report", "tables", "--set", "catalog:J.22"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "J 22 4 8 8"));
    let all = stdout(&triarray(&["report", "tables"]));
    assert!(all.lines().any(|l| l == "J 23 4 8 8"));
    assert!(all.lines().any(|l| l == "Z7 Fano -- -- 7"));
}

#[test]
fn triple_array_build_and_reverify() {
    let scratch = Scratch::new("grid");
    let built = triarray(&[
        "ta",
        "build",
        "--from-ds",
        "catalog:D.8",
        "--column",
        "e",
        "--format",
        "grid",
    ]);
    assert_eq!(built.status.code(), Some(0));
    let text = stdout(&built);
    assert!(text.contains("# form=standard rows=6 cols=10"));
    assert!(text.trim_end().ends_with("TA(15,4,6,2,4 : 6x10)"));

    let path = scratch.write("d8.grid", &text);
    let again = triarray(&["ta", "verify", &path]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again), "TA(15,4,6,2,4 : 6x10)\n");

    for (from, column) in [("catalog:AII.17", "ab"), ("catalog:J.22", "a^3")] {
        for extra in [&[][..], &["--rl"][..]] {
            let mut args = vec!["ta", "build", "--from-ds", from, "--column", column];
            args.extend_from_slice(extra);
            let built = triarray(&args);
            let verdict_line = stdout(&built).lines().last().unwrap().to_string();
            let path = scratch.write("a.grid", &stdout(&built));
            let again = triarray(&["ta", "verify", &path]);
            assert_eq!(again.status.code(), built.status.code(), "{from} {extra:?}");
            assert!(verdict_line.ends_with(stdout(&again).lines().next().unwrap()));
        }
    }
}

#[test]
fn json_arrays_reverify() {
    let scratch = Scratch::new("json");
    let built = triarray(&[
        "ta",
        "direct",
        "--from-ds",
        "catalog:J.23",
        "--format",
        "json",
    ]);
    assert_eq!(built.status.code(), Some(1));
    let path = scratch.write("j23.json", &stdout(&built));
    let again = triarray(&["ta", "verify", &path]);
    assert_eq!(again.status.code(), Some(1));
    assert!(stdout(&again).starts_with("DA(15,4,6,2 : 6x10)"));
    assert!(stdout(&again).contains("TA4 violated"));

    let rl = triarray(&[
        "ta",
        "build",
        "--from-ds",
        "catalog:Fano",
        "--rl",
        "--format",
        "json",
    ]);
    let path = scratch.write("fano.json", &stdout(&rl));
    let again = triarray(&["ta", "verify", &path]);
    assert_eq!(again.status.code(), Some(1));
    assert!(stdout(&again).contains("RTA4 violated"));
}

#[test]
fn catalog_export_reimports() {
    let scratch = Scratch::new("export");
    let shown = triarray(&["catalog", "show", "AII.17", "--format", "json"]);
    assert_eq!(shown.status.code(), Some(0));
    let path = scratch.write("aii17.json", &stdout(&shown));
    let verified = triarray(&["ds", "verify", "--set", &path, "--params", "36,15,6"]);
    assert_eq!(verified.status.code(), Some(0));
    let row = triarray(&["report", "tables", "--set", &path]);
    assert!(stdout(&row).lines().any(|l| l.starts_with("AII AII.17 ")));
}

#[test]
fn malformed_array_files() {
    let scratch = Scratch::new("bad");
    let path = scratch.write("bad.grid", "* c0 c1\nr0 x x\nr1 y x\n");
    let o = triarray(&["ta", "verify", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("repeated"));
    assert_eq!(
        triarray(&["ta", "verify", "/nonexistent/file"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn searches() {
    let o = triarray(&[
        "ds", "search", "--group", "cyclic:7", "--k", "3", "--lambda", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.ends_with("# 6 normalized difference sets with parameters (7,3,1) in cyclic:7\n"));

    let capped = triarray(&[
        "--cap",
        "100",
        "ds",
        "search",
        "--group",
        "cyclic:16",
        "--k",
        "6",
        "--lambda",
        "2",
    ]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(stderr(&capped).contains("3003"));
}

#[test]
fn designs_and_youden() {
    let fc = stdout(&triarray(&["design", "fourcycle", "--set", "catalog:J.22"]));
    assert_eq!(fc.matches("(16,6,2)-SBIBD").count(), 4);
    let fano = stdout(&triarray(&["design", "fourcycle", "--set", "catalog:Fano"]));
    assert!(fano.contains("# degenerate"));

    let dev = triarray(&["design", "dev", "--group", "cyclic:7", "--members", "1,2,4"]);
    assert_eq!(dev.status.code(), Some(0));
    assert!(stdout(&dev).ends_with("# (7,3,1)-SBIBD\n"));

    let y = triarray(&[
        "youden",
        "build",
        "--set",
        "catalog:Fano",
        "--order",
        "4,1,2",
    ]);
    assert_eq!(y.status.code(), Some(0));
    let text = stdout(&y);
    assert!(text.lines().nth(1).unwrap().starts_with("4 4 5 6 0"));
    let bad = triarray(&[
        "youden",
        "build",
        "--set",
        "catalog:Fano",
        "--order",
        "1,2,3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
