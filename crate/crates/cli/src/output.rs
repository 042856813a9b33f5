//! Output files: `#`-prefixed parameter headers, CSV bodies, key = value reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::Resolved;
use crate::error::{CliError, CliResult};

/// Scientific notation with 16 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.15e}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), num)
}

pub fn interval(v: (f64, f64)) -> String {
    format!("[{}, {}]", num(v.0), num(v.1))
}

/// Header block echoing the configuration and the derived quantities,
/// followed by command-specific lines. Every line starts with `#`.
pub fn header(r: &Resolved, command: &str, extra: &[(&str, String)]) -> CliResult<String> {
    let mut config = toml::Table::try_from(&r.config).map_err(|e| CliError::Config(e.to_string()))?;
    // where the file was written is not needed to reproduce it
    config.remove("output_dir");
    let mut out = String::new();
    let _ = writeln!(out, "# echelon {command}");
    for line in toml::to_string(&config)
        .map_err(|e| CliError::Config(e.to_string()))?
        .lines()
    {
        let _ = writeln!(out, "# {line}");
    }
    let p = &r.params;
    for (k, v) in [
        ("half_span", p.half_span()),
        ("vortex_half_span", p.vortex_half_span()),
        ("circulation", p.circulation()),
        ("core_radius", p.core_radius()),
        ("diffusion", p.diffusion()),
        ("beta_resolved", r.beta),
        ("beta_lower_resolved", r.beta_lower),
    ] {
        let _ = writeln!(out, "# {k} = {}", num(v));
    }
    for (k, v) in extra {
        let _ = writeln!(out, "# {k} = {v}");
    }
    Ok(out)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Lines of a CSV file that are not part of the header block.
pub fn csv_body(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter(|l| !l.starts_with('#'))
}
