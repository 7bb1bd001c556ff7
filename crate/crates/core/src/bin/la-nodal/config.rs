//! `--config FILE` handling. The file's parameters become flags placed ahead
//! of the user's own, so anything given on the command line wins.

use crate::Cli;
use clap::{CommandFactory, FromArgMatches};
use serde_json::Value;

pub enum ParseFailure {
    Clap(clap::Error),
    Config(String),
}

pub fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

/// Removes `--config X` / `--config=X` from `args` and returns `X`.
fn take_config(args: &mut Vec<String>) -> Result<Option<String>, ParseFailure> {
    let mut found = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--" {
            break;
        }
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                return Err(ParseFailure::Config("--config needs a file".into()));
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(v) = args[i].strip_prefix("--config=") {
            found = Some(v.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

fn flag_values(key: &str, v: &Value) -> Result<Option<String>, String> {
    Ok(match v {
        Value::Null | Value::Bool(false) => None,
        Value::Bool(true) => Some(String::new()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let nested = items.iter().any(Value::is_array);
            let sep = if nested { ";" } else { "," };
            let parts = items
                .iter()
                .map(|x| match x {
                    Value::Array(inner) => inner.iter().map(|y| scalar(key, y)).collect::<Result<Vec<_>, _>>().map(|v| v.join(",")),
                    other => scalar(key, other),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(parts.join(sep))
        }
        Value::Object(_) => return Err(format!("parameters.{key} must not be an object")),
    })
}

fn scalar(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        _ => Err(format!("parameters.{key} holds an unsupported value {v}")),
    }
}

/// Builds the argument list implied by a configuration file.
fn config_args(text: &str, user: &[String]) -> Result<Vec<String>, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = doc.as_object().ok_or("the configuration must be a JSON object")?;
    for k in obj.keys() {
        if !["subcommand", "parameters", "output", "seed"].contains(&k.as_str()) {
            return Err(format!("unknown key {k:?} (expected subcommand, parameters, output, seed)"));
        }
    }
    let sub: Vec<String> = match obj.get("subcommand") {
        Some(Value::String(s)) => s.split_whitespace().map(str::to_string).collect(),
        Some(other) => return Err(format!("subcommand must be a string, got {other}")),
        None => Vec::new(),
    };
    // The user may repeat the configured subcommand; any other one conflicts.
    let given: Vec<&String> = user.iter().skip(1).take_while(|a| !a.starts_with('-')).collect();
    let rest_start = 1 + given.len();
    if !sub.is_empty() && !given.is_empty() && !sub.iter().zip(&given).all(|(a, b)| a == *b) {
        return Err(format!("configured subcommand {:?} conflicts with {:?}", sub.join(" "), given.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")));
    }
    let path: Vec<String> = if given.len() > sub.len() { given.iter().map(|s| s.to_string()).collect() } else { sub.clone() };
    if path.is_empty() {
        return Err("no subcommand in the configuration or on the command line".into());
    }
    let mut cmd = Cli::command();
    cmd.build();
    let mut target = &cmd;
    for name in &path {
        target = target.find_subcommand(name).ok_or_else(|| format!("unknown subcommand {name:?}"))?;
    }
    let known: Vec<String> = target.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect();

    let mut args = vec![user[0].clone()];
    args.extend(path.iter().cloned());
    if let Some(out) = obj.get("output") {
        let out = out.as_str().ok_or("output must be a string")?;
        args.extend(["--out".into(), out.into()]);
    }
    if let Some(seed) = obj.get("seed") {
        let seed = seed.as_u64().ok_or("seed must be a non-negative integer")?;
        args.extend(["--seed".into(), seed.to_string()]);
    }
    if let Some(params) = obj.get("parameters") {
        let params = params.as_object().ok_or("parameters must be an object")?;
        for (key, v) in params {
            let flag = key.replace('_', "-");
            if !known.contains(&flag) || ["config", "out", "seed"].contains(&flag.as_str()) {
                return Err(format!("parameters.{key} is not a parameter of {:?}", path.join(" ")));
            }
            match flag_values(key, v)? {
                Some(_) if v.is_boolean() => args.push(format!("--{flag}")),
                Some(val) => args.push(format!("--{flag}={val}")),
                None => {}
            }
        }
    }
    args.extend(user[rest_start..].iter().cloned());
    Ok(args)
}

pub fn parse(mut argv: Vec<String>) -> Result<Cli, ParseFailure> {
    let args = match take_config(&mut argv)? {
        None => argv,
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| ParseFailure::Config(format!("cannot read {path}: {e}")))?;
            config_args(&text, &argv).map_err(ParseFailure::Config)?
        }
    };
    parse_args(args).map_err(ParseFailure::Clap)
}

/// Parses with repeated flags allowed; the last occurrence wins.
fn parse_args(args: Vec<String>) -> Result<Cli, clap::Error> {
    fn last_wins(c: clap::Command) -> clap::Command {
        c.args_override_self(true).mut_subcommands(last_wins)
    }
    let matches = last_wins(Cli::command()).try_get_matches_from(args)?;
    Cli::from_arg_matches(&matches)
}
