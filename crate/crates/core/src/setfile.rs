//! Plain-text set files: UTF-8, one integer or `p/q` per line, blank lines and
//! `#` comments ignored.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::RSet;

pub fn parse_set_text(text: &str, origin: &Path) -> Result<RSet> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value = line.parse::<Rational>().map_err(|e| Error::SetFile {
            path: origin.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        values.push(value);
    }
    Ok(RSet::from_values(values))
}

pub fn read_set_file(path: &Path) -> Result<RSet> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_set_text(&text, path)
}

pub fn write_set_file(path: &Path, set: &RSet) -> Result<()> {
    fs::write(path, set.to_file_string()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
