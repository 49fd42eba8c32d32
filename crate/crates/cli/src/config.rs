//! Flat `key = value` configuration files. Each entry becomes the flag
//! `--key value`, placed before the command line flags so that those win.

use std::fs;
use std::path::Path;

/// Parses a configuration file into flag arguments.
pub fn parse(text: &str) -> Result<Vec<String>, String> {
    let mut args = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", n + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.starts_with('-') || key == "config" {
            return Err(format!("line {}: invalid key {key:?}", n + 1));
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value.to_string());
            }
        }
    }
    Ok(args)
}

/// Path given by `--config PATH` or `--config=PATH`, if any.
pub fn find_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Inserts the file's flags right after the subcommand name.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = find_path(&argv) else { return Ok(argv) };
    if argv.len() < 2 || argv[1].starts_with('-') {
        return Ok(argv);
    }
    let text = fs::read_to_string(Path::new(&path)).map_err(|e| format!("config file {path}: {e}"))?;
    let extra = parse(&text)?;
    let mut out = argv[..2].to_vec();
    out.extend(extra);
    out.extend(argv[2..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_from_lines() {
        let args = parse("# run\ngroup = Z_5^w\nkappa=4\n\ncheck = true\ntiming = false\n").unwrap();
        assert_eq!(args, ["--group", "Z_5^w", "--kappa", "4", "--check"]);
        assert!(parse("kappa 4").is_err());
        assert!(parse("config = x").is_err());
    }

    #[test]
    fn config_path_forms() {
        let argv = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(find_path(&argv(&["pack", "bset", "--config", "a.cfg"])), Some("a.cfg".into()));
        assert_eq!(find_path(&argv(&["pack", "bset", "--config=b.cfg"])), Some("b.cfg".into()));
        assert_eq!(find_path(&argv(&["pack", "bset"])), None);
    }
}
