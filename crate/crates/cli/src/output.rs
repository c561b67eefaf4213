//! File writing and text formatting shared by the runners.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// One output file: a name inside the output directory and its body,
/// written after the configuration header.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub body: String,
}

impl OutputFile {
    pub fn new(name: impl Into<String>, body: impl Into<String>) -> Self {
        Self { name: name.into(), body: body.into() }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Writes every file as `header + body` into `dir`, creating it if needed.
pub fn write_files(dir: &Path, header: &str, files: &[OutputFile]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut paths = Vec::with_capacity(files.len());
    for f in files {
        let path = dir.join(&f.name);
        let mut text = String::with_capacity(header.len() + f.body.len());
        text.push_str(header);
        text.push_str(&f.body);
        fs::write(&path, text).map_err(io_err(&path))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Full-precision value for CSV cells.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Short value for summary tables.
pub fn short(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-3..1e5).contains(&v.abs()) {
        format!("{v:.4}")
    } else {
        format!("{v:.4e}")
    }
}

/// Right-aligned columns with a rule under the header.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(headers.to_vec());
    let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
    s.push_str(&"-".repeat(total));
    s.push('\n');
    for row in rows {
        s.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_columns() {
        let t = table(&["a", "bbb"], &[vec!["10".into(), "2".into()]]);
        assert_eq!(t, " a  bbb\n-------\n10    2\n");
    }

    #[test]
    fn num_round_trips() {
        for v in [0.1, 1e-152, 34.30000000001, -2.5] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn files_get_the_header() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_files(dir.path(), "# h\n", &[OutputFile::new("x.csv", "a\n")]).unwrap();
        assert_eq!(fs::read_to_string(&paths[0]).unwrap(), "# h\na\n");
    }
}
