use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Command;
use serde_json::Value;

use crate::error::CliError;

/// Finds `--config FILE` or `--config=FILE` before clap sees the arguments.
pub fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

/// Reads a flat JSON object. Keys may use `-` or `_`; values must be
/// scalars or arrays of scalars.
pub fn load(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage("config must be a JSON object".into()));
    };
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let text = match &v {
            Value::Array(items) => items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(","),
            other => scalar(other)?,
        };
        out.insert(k.replace('_', "-"), text);
    }
    Ok(out)
}

fn scalar(v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(CliError::Usage(format!("config value {v} is not a scalar"))),
    }
}

/// Installs config values as defaults on every matching long option, so
/// flags given on the command line still win.
pub fn apply(cmd: Command, values: &BTreeMap<String, String>) -> Command {
    let names: Vec<String> = cmd.get_subcommands().map(|c| c.get_name().to_string()).collect();
    let mut cmd = cmd.mut_args(|arg| {
        let Some(long) = arg.get_long() else { return arg };
        if long == "config" {
            return arg;
        }
        match values.get(long) {
            Some(v) => arg.default_value(v.clone()),
            None => arg,
        }
    });
    for name in names {
        cmd = cmd.mut_subcommand(name, |sub| apply(sub, values));
    }
    cmd
}

/// Keys that no option of the selected command consumed.
pub fn unused(cmd: &Command, path: &[String], values: &BTreeMap<String, String>) -> Vec<String> {
    let mut longs: Vec<String> = cmd.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect();
    let mut cur = cmd;
    for p in path {
        match cur.find_subcommand(p) {
            Some(sub) => {
                cur = sub;
                longs.extend(cur.get_arguments().filter_map(|a| a.get_long().map(str::to_string)));
            }
            None => break,
        }
    }
    values.keys().filter(|k| !longs.contains(k)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::{CommandFactory, FromArgMatches};

    fn argv(s: &[&str]) -> Vec<OsString> {
        s.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_config_flag() {
        assert_eq!(config_path(&argv(&["t", "--config", "a.json", "x"])), Some(PathBuf::from("a.json")));
        assert_eq!(config_path(&argv(&["t", "--config=b.json"])), Some(PathBuf::from("b.json")));
        assert_eq!(config_path(&argv(&["t", "--", "--config", "c"])), None);
    }

    #[test]
    fn loads_flat_object() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"u_max": 12, "gamma": [0, 0.5], "deterministic": true}"#).unwrap();
        let m = load(&p).unwrap();
        assert_eq!(m["u-max"], "12");
        assert_eq!(m["gamma"], "0,0.5");
        assert_eq!(m["deterministic"], "true");
        std::fs::write(&p, r#"{"x": {"y": 1}}"#).unwrap();
        assert!(load(&p).is_err());
        std::fs::write(&p, "[1]").unwrap();
        assert!(load(&p).is_err());
    }

    #[test]
    fn values_become_overridable_defaults() {
        let values: BTreeMap<String, String> =
            [("theta", "0.8"), ("lo", "20"), ("deterministic", "true"), ("nope", "1")]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
        let cmd = apply(Cli::command(), &values);
        let m = cmd.clone().try_get_matches_from(["t", "ternary", "scan", "--lo", "30"]).unwrap();
        let cli = Cli::from_arg_matches(&m).unwrap();
        assert!(cli.global.deterministic);
        let v = serde_json::to_value(&cli.command).unwrap();
        assert_eq!(v["ternary"]["scan"]["theta"], 0.8);
        assert_eq!(v["ternary"]["scan"]["lo"], 30);
        let path = ["ternary".to_string(), "scan".to_string()];
        assert_eq!(unused(&cmd, &path, &values), vec!["nope".to_string()]);
    }
}
