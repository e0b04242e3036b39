//! Flat `key = value` config files.
//!
//! Keys are flag names without the leading dashes (`steps`, `burn-in` or
//! `burn_in`). Each line becomes `--key value`; `true` becomes a bare
//! `--key` and `false` drops the line. An optional `command` key names the
//! subcommand. The expanded flags go in front of the command-line flags, so
//! the command line wins when both set the same key.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub flags: Vec<String>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let mut cfg = ConfigFile::default();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", n + 1)));
        };
        let key = key.trim().trim_start_matches('-').replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        match (key.as_str(), value) {
            ("command", v) => cfg.command = Some(v.to_string()),
            ("config", _) => {
                return Err(CliError::Usage(format!("config line {}: nested config files are not supported", n + 1)))
            }
            (_, "true") => cfg.flags.push(format!("--{key}")),
            (_, "false") => {}
            (_, v) => {
                cfg.flags.push(format!("--{key}"));
                cfg.flags.push(v.to_string());
            }
        }
    }
    Ok(cfg)
}

fn take_config_path(args: &mut Vec<OsString>) -> Result<Option<OsString>, CliError> {
    let mut found = None;
    let mut i = 1;
    while i < args.len() {
        let arg = args[i].to_string_lossy().into_owned();
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::Usage("--config needs a file path".into()));
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            found = Some(OsString::from(path));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

/// Replaces `--config FILE` in `args` with the flags it contains.
pub fn expand_config(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = take_config_path(&mut args)? else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = parse_config(&text)?;

    let sub_pos = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 1);
    let insert_at = match (sub_pos, cfg.command) {
        (Some(p), _) => p + 1,
        (None, Some(cmd)) => {
            args.insert(1, OsString::from(cmd));
            2
        }
        (None, None) => {
            return Err(CliError::Usage("no subcommand given on the command line or in the config file".into()))
        }
    };
    args.splice(insert_at..insert_at, cfg.flags.into_iter().map(OsString::from));
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_lines() {
        let cfg = parse_config("# run\ncommand = simulate\ncanonical = true\neps = 0.005\nburn_in = 10\nquiet = false\n").unwrap();
        assert_eq!(cfg.command.as_deref(), Some("simulate"));
        assert_eq!(cfg.flags, ["--canonical", "--eps", "0.005", "--burn-in", "10"]);
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn expands_after_subcommand() {
        let dir = tempfile_path("expand");
        std::fs::write(&dir, "steps = 10\nseed = 1\n").unwrap();
        let args = os(&["parrondo", "--config", dir.to_str().unwrap(), "simulate", "--seed", "7"]);
        let out = expand_config(args).unwrap();
        assert_eq!(out, os(&["parrondo", "simulate", "--steps", "10", "--seed", "1", "--seed", "7"]));
        std::fs::remove_file(dir).unwrap();
    }

    #[test]
    fn command_from_file() {
        let dir = tempfile_path("command");
        std::fs::write(&dir, "command = verify\ntrials = 5\n").unwrap();
        let out = expand_config(os(&["parrondo", &format!("--config={}", dir.display())])).unwrap();
        assert_eq!(out, os(&["parrondo", "verify", "--trials", "5"]));
        std::fs::remove_file(dir).unwrap();
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = expand_config(os(&["parrondo", "--config", "/nonexistent/parrondo.conf", "verify"])).unwrap_err();
        assert_eq!(err.exit_code(), 73);
    }

    fn tempfile_path(tag: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("parrondo-config-{tag}-{}.conf", std::process::id()))
    }
}
