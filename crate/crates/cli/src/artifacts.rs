//! Writing CSV and JSON artifacts.
//!
//! Rows are gathered per grid cell and written once, in grid order, so the
//! bytes do not depend on the worker count. Floats use the shortest
//! round-trip representation.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

pub fn write_csv<R: Serialize>(dir: &Path, name: &str, rows: &[R]) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(path)
}

/// Data rows in a CSV artifact (the header excluded).
pub fn count_csv_rows(path: &Path) -> anyhow::Result<usize> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut n = 0;
    for record in r.records() {
        record?;
        n += 1;
    }
    Ok(n)
}
