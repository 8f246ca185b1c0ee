use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// Envelope carried by every JSON output.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub generator: &'static str,
    pub command: &'a str,
    pub config: &'a C,
    pub seeds: &'a [u64],
    pub result: &'a R,
}

pub fn envelope<'a, C: Serialize, R: Serialize>(command: &'a str, config: &'a C, seeds: &'a [u64], result: &'a R) -> Envelope<'a, C, R> {
    Envelope { tool: "mixcens", version: mixcens::VERSION, generator: mixcens::GENERATOR, command, config, seeds, result }
}

pub fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut b = serde_json::to_vec_pretty(v).map_err(|e| CliError::Runtime(e.to_string()))?;
    b.push(b'\n');
    Ok(b)
}

/// Comment lines placed above CSV tables so they carry the same provenance.
pub fn csv_preamble<C: Serialize>(command: &str, config: &C, seeds: &[u64]) -> Result<String, CliError> {
    let cfg = serde_json::to_string(config).map_err(|e| CliError::Runtime(e.to_string()))?;
    let seeds: Vec<String> = seeds.iter().map(u64::to_string).collect();
    Ok(format!(
        "# tool=mixcens version={} generator={} command={command} seeds={}\n# config={cfg}\n",
        mixcens::VERSION,
        mixcens::GENERATOR,
        seeds.join(";")
    ))
}

pub fn csv_bytes(preamble: String, header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut out = preamble.into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header).map_err(|e| CliError::Runtime(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Runtime(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(out)
}

/// Write to standard output for `-`, otherwise to a temporary file in the
/// target directory followed by a rename.
pub fn emit(out: &str, bytes: &[u8]) -> Result<(), CliError> {
    if out == "-" {
        let mut s = std::io::stdout().lock();
        s.write_all(bytes).and_then(|_| s.flush()).map_err(|e| CliError::Runtime(e.to_string()))?;
        return Ok(());
    }
    let path = Path::new(out);
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Config(format!("cannot write to {}: {e}", dir.display())))?;
    tmp.write_all(bytes).map_err(|e| CliError::Runtime(e.to_string()))?;
    tmp.as_file().sync_all().map_err(|e| CliError::Runtime(e.to_string()))?;
    tmp.persist(path).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(())
}

pub fn fmt(v: f64) -> String {
    v.to_string()
}
