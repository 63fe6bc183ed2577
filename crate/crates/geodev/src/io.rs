//! Surface files in and JSON/text files out.

use std::fmt;
use std::fs;
use std::path::Path;

use geodev_core::surface::{parse_surface, SurfaceChart};
use serde::Serialize;

#[derive(Debug)]
pub enum IoError {
    Read { path: String, source: std::io::Error },
    Write { path: String, source: std::io::Error },
    Parse { path: String, source: geodev_core::Error },
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Read { path, source } => write!(f, "cannot read surface file {path}: {source}"),
            IoError::Write { path, source } => write!(f, "cannot write {path}: {source}"),
            IoError::Parse { path, source } => write!(f, "{path}: {source}"),
        }
    }
}

impl std::error::Error for IoError {}

pub fn load_surface(path: &Path) -> Result<SurfaceChart, IoError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| IoError::Read { path: name.clone(), source })?;
    parse_surface(&text).map_err(|source| IoError::Parse { path: name, source })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Pretty JSON with keys sorted at every level and a trailing newline.
/// Floats use the shortest representation that round-trips.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("json values print");
    s.push('\n');
    s
}
