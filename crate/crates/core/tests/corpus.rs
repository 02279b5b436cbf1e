use andromeda::session::{Options, Session};
use std::path::PathBuf;
use std::process::Command;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn check_golden(name: &str) {
    let mut s = Session::new(Options { typecheck: true, ..Default::default() }).unwrap();
    s.run_file(&corpus(&format!("{name}.aml"))).unwrap();
    let want = std::fs::read_to_string(corpus(&format!("{name}.golden"))).unwrap();
    assert_eq!(normalize(&s.output.join("\n")), normalize(&want));
    assert!(s.warnings.is_empty(), "{:?}", s.warnings);
}

macro_rules! goldens {
    ($($name:ident)*) => {
        $(#[test]
        fn $name() {
            check_golden(stringify!($name));
        })*
    };
}

goldens!(transport hypothetical symmetry matching naturals sigma universes auto);

#[test]
fn untyped_elaborates() {
    let mut s = Session::new(Options { typecheck: true, ..Default::default() }).unwrap();
    s.run_file(&corpus("untyped.aml")).unwrap();
    assert_eq!(s.values.len(), 2);
}

fn cli(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_andromeda"))
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(input) = stdin {
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn cli_runs_a_file() {
    let path = corpus("transport.aml");
    let (code, out, _) = cli(&[path.to_str().unwrap()], None);
    assert_eq!(code, 0);
    let want = std::fs::read_to_string(corpus("transport.golden")).unwrap();
    assert_eq!(normalize(&out), normalize(&want));
}

#[test]
fn cli_reports_errors_with_exit_code() {
    let dir = std::env::temp_dir().join(format!("andromeda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.aml");
    std::fs::write(&bad, "constant A : Type\ndo refl A : A\n").unwrap();
    let (code, _, err) = cli(&[bad.to_str().unwrap()], None);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("bad.aml:2"), "{err}");
    let (code, _, _) = cli(&[dir.join("missing.aml").to_str().unwrap()], None);
    assert_ne!(code, 0);
}

#[test]
fn cli_json_output_is_json() {
    let path = corpus("hypothetical.aml");
    let (code, out, err) = cli(&["--json", path.to_str().unwrap()], None);
    assert_eq!(code, 0, "{err}");
    for line in out.lines().filter(|l| !l.trim().is_empty()) {
        serde_json::from_str::<serde_json::Value>(line).unwrap_or_else(|e| panic!("{line}: {e}"));
    }
}

#[test]
fn repl_reads_commands() {
    let (code, out, err) = cli(&[], Some("constant A : Type;;\nconstant a : A;;\ndo a;;\n"));
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("⊢ a : A"), "{out}");
}
