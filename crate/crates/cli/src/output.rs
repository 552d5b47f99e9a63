use std::fs;
use std::path::{Path, PathBuf};

use crate::Outcome;

pub fn ensure_dir(dir: &Path) -> Outcome<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes through a temporary sibling and renames into place.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Outcome<PathBuf> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, &target)?;
    Ok(target)
}

pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Outcome<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| crate::Failure::Io(e.to_string()))
}

/// File-name-safe form of a label.
pub fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}
