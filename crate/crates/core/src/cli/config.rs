//! Flat `key = value` config files. Each key names a long flag; its value
//! is used only when that flag is absent from the command line.

use std::fs;
use std::path::Path;

use clap::{ArgAction, Command};

use crate::{Error, Result};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// underscores in keys are read as dashes.
pub fn parse_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(path, i + 1, "expected `key = value`"))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::parse(path, i + 1, "empty key"));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<&str> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).map(String::as_str)
        } else {
            a.strip_prefix("--config=")
        }
    })
}

fn flag_present(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Returns `argv` with config-file values appended for every flag that the
/// command line leaves unset. Keys that match no flag of the chosen
/// subcommand are configuration errors.
pub fn inject_config(cmd: &Command, argv: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let entries = parse_config(Path::new(path))?;
    let sub = argv
        .iter()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .and_then(|name| cmd.find_subcommand(name));
    let lookup = |key: &str| {
        sub.into_iter()
            .flat_map(|s| s.get_arguments())
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key))
            .map(|a| matches!(a.get_action(), ArgAction::SetTrue | ArgAction::SetFalse))
    };
    let mut extra = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let Some(is_switch) = lookup(&key) else {
            return Err(Error::Config(format!("config key `{key}` matches no flag of this command")));
        };
        if flag_present(&argv, &key) {
            continue;
        }
        if is_switch {
            match value.as_str() {
                "true" | "yes" | "1" => extra.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => return Err(Error::Config(format!("config key `{key}` expects true or false"))),
            }
        } else {
            extra.push(format!("--{key}"));
            extra.push(value);
        }
    }
    let mut argv = argv;
    argv.extend(extra);
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::{Arg, ArgAction};

    fn cmd() -> Command {
        Command::new("t").subcommand(
            Command::new("train")
                .arg(Arg::new("dim").long("dim"))
                .arg(Arg::new("min-count").long("min-count"))
                .arg(Arg::new("fast").long("fast").action(ArgAction::SetTrue))
                .arg(Arg::new("config").long("config")),
        )
    }

    fn argv(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.conf");
        std::fs::write(&p, "# comment\ndim = 50\nmin_count = 3\nfast = true\n").unwrap();
        let a = argv(&["t", "train", "--config", p.to_str().unwrap(), "--dim", "8"]);
        let out = inject_config(&cmd(), a).unwrap();
        assert_eq!(&out[6..], &argv(&["--min-count", "3", "--fast"])[..]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.conf");
        std::fs::write(&p, "window = 5\n").unwrap();
        let a = argv(&["t", "train", "--config", p.to_str().unwrap()]);
        assert!(matches!(inject_config(&cmd(), a), Err(Error::Config(_))));
        std::fs::write(&p, "no equals sign\n").unwrap();
        let a = argv(&["t", "train", "--config", p.to_str().unwrap()]);
        assert!(matches!(inject_config(&cmd(), a), Err(Error::Parse { .. })));
    }
}
