//! `key = value` config files, merged beneath command-line flags.
//!
//! Each key is a long flag name of the chosen subcommand. The file's
//! entries are spliced into the argument list right after the subcommand,
//! so any flag given on the command line later overrides them.

use crate::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("config line {}: expected key = value", i + 1)));
        };
        let k = k.trim();
        if k.is_empty() || k == "config" {
            return Err(CliError::Config(format!("config line {}: invalid key {k:?}", i + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Rewrite argv so config entries precede the user's own flags.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(args);
    };
    let path = match args[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => match args.get(pos + 1) {
            Some(p) => p.clone(),
            None => return Err(CliError::Config("--config needs a file path".into())),
        },
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("cannot read config {path}: {e}")))?;
    let mut injected = Vec::new();
    for (k, v) in parse(&text)? {
        match v.as_str() {
            "true" => injected.push(format!("--{k}")),
            "false" => {}
            _ => {
                injected.push(format!("--{k}"));
                injected.push(v);
            }
        }
    }
    if pos < 2 {
        return Err(CliError::Config("--config must follow a subcommand".into()));
    }
    // argv[0], subcommand, file entries, then the user's flags (which still
    // include --config so the path is recorded)
    let mut out = vec![args[0].clone(), args[1].clone()];
    out.extend(injected);
    out.extend(args.into_iter().skip(2));
    Ok(out)
}
