//! `key = value` config files spliced in ahead of the real flags.
//!
//! Keys are long flag names (`-` or `_` both accepted). Boolean flags take
//! `true`/`false`. A `manifest.json` from an earlier run also works: its
//! `config` object is read the same way. Flags given on the command line win
//! because clap keeps the last occurrence.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

use crate::CliError;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", i + 1)))?;
        pairs.push((normalize_key(k), v.trim().trim_matches('"').to_string()));
    }
    Ok(pairs)
}

fn normalize_key(k: &str) -> String {
    k.trim().replace('_', "-")
}

/// Reads the `config` object of a run manifest.
pub fn manifest_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("manifest is not valid JSON: {e}")))?;
    let obj = value
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| CliError::Config("manifest has no config object".into()))?;
    Ok(obj
        .iter()
        .filter_map(|(k, v)| {
            let text = match v {
                serde_json::Value::Null => return None,
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            Some((normalize_key(k), text))
        })
        .collect())
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        manifest_pairs(&text)
    } else {
        parse_pairs(&text)
    }
}

/// Turns config pairs into flags for `sub`, checking each key exists.
pub fn to_flags(root: &Command, sub: &str, pairs: &[(String, String)]) -> Result<Vec<OsString>, CliError> {
    let cmd = root
        .find_subcommand(sub)
        .ok_or_else(|| CliError::Config(format!("unknown command {sub:?}")))?;
    let mut flags = Vec::new();
    for (key, value) in pairs {
        if key == "config" {
            continue;
        }
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::Config(format!("unknown config key {key:?} for {sub}")))?;
        if arg.get_action().takes_values() {
            flags.push(format!("--{key}").into());
            flags.push(value.into());
        } else {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => flags.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => return Err(CliError::Config(format!("config key {key:?} expects true or false"))),
            }
        }
    }
    Ok(flags)
}

/// Removes `--config FILE` / `--config=FILE` from `args`, returning the path.
pub fn take_config_flag(args: &mut Vec<OsString>) -> Result<Option<OsString>, CliError> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        let text = args[i].to_string_lossy().into_owned();
        if text == "--" {
            break;
        }
        if text == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::Config("--config needs a file".into()));
            }
            args.remove(i);
            found = Some(args.remove(i));
            continue;
        }
        if let Some(path) = text.strip_prefix("--config=") {
            found = Some(path.into());
            args.remove(i);
            continue;
        }
        i += 1;
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Cli;
    use clap::CommandFactory;

    #[test]
    fn pairs_with_comments() {
        let pairs = parse_pairs("# run\nn = 18\nconjecture=wagner21  # the one\n\ncheck_every_step = true\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("n".to_string(), "18".to_string()),
                ("conjecture".to_string(), "wagner21".to_string()),
                ("check-every-step".to_string(), "true".to_string())
            ]
        );
        assert!(parse_pairs("n 18").is_err());
    }

    #[test]
    fn flags_for_values_and_switches() {
        let root = Cli::command();
        let pairs = parse_pairs("n = 5\nnormalize = true\nself-loops = false").unwrap();
        let flags = to_flags(&root, "search", &pairs).unwrap();
        assert_eq!(flags, vec![OsString::from("--n"), "5".into(), "--normalize".into()]);
        assert!(to_flags(&root, "search", &[("colour".into(), "red".into())]).is_err());
        assert!(to_flags(&root, "search", &[("normalize".into(), "maybe".into())]).is_err());
    }

    #[test]
    fn manifest_config_object() {
        let pairs = manifest_pairs(r#"{"config": {"n": 7, "game": "flip", "horizon": null, "normalize": false}}"#).unwrap();
        assert!(pairs.contains(&("n".into(), "7".into())));
        assert!(pairs.contains(&("game".into(), "flip".into())));
        assert!(!pairs.iter().any(|(k, _)| k == "horizon"));
    }

    #[test]
    fn config_flag_is_extracted() {
        let mut args: Vec<OsString> = vec!["--n".into(), "4".into(), "--config".into(), "a.cfg".into()];
        assert_eq!(take_config_flag(&mut args).unwrap(), Some("a.cfg".into()));
        assert_eq!(args, vec![OsString::from("--n"), "4".into()]);
        let mut args: Vec<OsString> = vec!["--config=b.cfg".into()];
        assert_eq!(take_config_flag(&mut args).unwrap(), Some("b.cfg".into()));
        assert!(take_config_flag(&mut vec!["--config".into()]).is_err());
    }
}
