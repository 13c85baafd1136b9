//! Polynomial input files.
//!
//! ```text
//! # comment
//! vars=2
//! x1^2 + x2^2
//! x1*x2 - 3   # trailing comments are fine
//! ```

use std::fs;
use std::path::Path;

use adelic_core::MultiPoly;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct PolyFile {
    pub path: String,
    pub sha256: String,
    pub nvars: usize,
    pub polys: Vec<MultiPoly>,
}

pub fn read_poly_file(path: &Path) -> Result<PolyFile, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Usage(format!("{}: not valid UTF-8", path.display())))?;
    let (nvars, polys) = parse_poly_text(&text)
        .map_err(|(line, msg)| CliError::Usage(format!("{}:{line}: {msg}", path.display())))?;
    Ok(PolyFile {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        nvars,
        polys,
    })
}

/// Parses the file body; errors carry a 1-based line number.
pub fn parse_poly_text(text: &str) -> Result<(usize, Vec<MultiPoly>), (usize, String)> {
    let mut nvars = None;
    let mut polys = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let Some(s) = nvars else {
            let value = line
                .strip_prefix("vars")
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('='))
                .ok_or((lineno, "expected `vars=<s>` header".to_string()))?;
            let s: usize = value
                .trim()
                .parse()
                .map_err(|_| (lineno, format!("bad variable count `{}`", value.trim())))?;
            if s == 0 {
                return Err((lineno, "vars must be >= 1".into()));
            }
            nvars = Some(s);
            continue;
        };
        let f = MultiPoly::parse(line, s).map_err(|e| (lineno, e.to_string()))?;
        polys.push(f);
    }
    let Some(s) = nvars else {
        return Err((1, "missing `vars=<s>` header".into()));
    };
    if polys.is_empty() {
        return Err((text.lines().count().max(1), "no polynomials given".into()));
    }
    Ok((s, polys))
}
