//! Read and write grid files and drive the command layer from code, the
//! same way the `polygrid` binary does.
//!
//! cargo run --example grid_files

use clap::Parser;
use polygrid::cli::{emit_grid_file, parse_grid_file, run, Cli};
use polygrid::Result;

const GRID: &str = r#"{
  "phases": 1,
  "nodes": [{"name": "a"}, {"name": "b"}, {"name": "c", "shunt": [[[0.01, 0.02]]]}],
  "branches": [{"from": "a", "to": "b", "impedance": [[[0.1, 0.3]]]}],
  "tees": [{"from": "b", "to": "c", "z_primary": [[[0.01, 0.05]]],
            "z_secondary": [[[0.01, 0.05]]], "y_center": [[[0.001, -0.2]]]}]
}"#;

fn main() -> Result<()> {
    let model = parse_grid_file(GRID)?;
    println!("parsed nodes: {:?}", model.node_names());
    let text = emit_grid_file(&model);
    assert_eq!(parse_grid_file(&text)?, model);
    println!("emitted:\n{text}");

    let dir = std::env::temp_dir().join("polygrid-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("grid.json");
    std::fs::write(&path, &text)?;
    let path = path.to_str().expect("utf-8 path");
    let out = dir.join("h.json");
    for args in [
        vec!["polygrid", "check", path],
        vec!["polygrid", "rank", path, "--subset", "a,c"],
        vec![
            "polygrid",
            "--json",
            "hybrid",
            path,
            "--set",
            "b",
            "--out",
            out.to_str().unwrap(),
        ],
    ] {
        let outcome = run(&Cli::parse_from(&args));
        println!(
            "$ {} (exit {})\n{}",
            args[1..].join(" "),
            outcome.exit_code,
            outcome.stdout
        );
    }
    Ok(())
}
