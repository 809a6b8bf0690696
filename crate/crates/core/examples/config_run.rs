//! Drives the command-line front end from code: writes a configuration,
//! runs `bound` and `sweep`, and lists the files produced.

use std::fs;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("jumpcount-config-run");
    fs::create_dir_all(&dir)?;
    let config = dir.join("run.json");
    fs::write(
        &config,
        r#"{
  "measure": {"class": "example3", "alpha": 0.5, "c1": 1, "c2": 1,
              "lambda1": 2, "lambda2": 1.5, "eps": 1, "big_m": 2},
  "m_list": [4, 8],
  "region": {"policy": "full_line"}
}"#,
    )?;
    let out = dir.join("out");
    for command in ["bound", "sweep"] {
        let code = jumpcount::cli::run([
            "jumpcount",
            command,
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        println!("{command}: exit {code}");
    }
    let mut files: Vec<_> = fs::read_dir(&out)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name())
        .collect();
    files.sort();
    for f in files {
        println!("  {}", f.to_string_lossy());
    }
    Ok(())
}
