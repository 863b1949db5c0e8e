//! Helpers for running the binary and comparing against golden files.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn reference() -> PathBuf {
    golden_dir().join("grid3.json")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn polygrid(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_polygrid"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn tokens(text: &str) -> Vec<&str> {
    text.split(|c: char| c.is_whitespace() || "[]{},:=\"".contains(c))
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn same_text(actual: &str, expected: &str) -> Result<(), String> {
    let (a, e) = (tokens(actual), tokens(expected));
    if a.len() != e.len() {
        return Err(format!("token count {} vs {}", a.len(), e.len()));
    }
    for (x, y) in a.iter().zip(&e) {
        match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(p), Ok(q)) if (p - q).abs() <= 1e-12 * p.abs().max(q.abs()).max(1.0) => {}
            _ if x == y => {}
            _ => return Err(format!("{x:?} vs {y:?}")),
        }
    }
    Ok(())
}

pub fn assert_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("POLYGRID_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    if let Err(msg) = same_text(actual, &expected) {
        panic!("{name} differs from golden ({msg}):\n{actual}");
    }
}

pub fn file(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}
