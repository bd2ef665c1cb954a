//! Output helpers: aligned text tables for stdout and versioned CSV files.

use anyhow::{Context, Result};
use std::path::Path;

/// Render an aligned text table.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    out.push_str(&fmt_row(&header_cells, &widths));
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
        out.push('\n');
    }
    out
}

/// A CSV document with the schema-version preamble.
pub struct CsvDoc {
    header: String,
    rows: Vec<String>,
}

impl CsvDoc {
    pub fn new(header: &str) -> Self {
        CsvDoc { header: header.to_string(), rows: Vec::new() }
    }

    pub fn push(&mut self, cells: &[String]) {
        self.rows.push(cells.join(","));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# schema_version: 1\n");
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    /// Write the document; rerunning the same command rewrites the same bytes.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .with_context(|| format!("writing CSV {}", path.display()))
    }
}

/// Format a float for CSV/table output: shortest round-trip representation.
pub fn num(v: f64) -> String {
    format!("{v}")
}

/// Format a float with fixed precision for human tables.
pub fn fixed(v: f64, digits: usize) -> String {
    format!("{v:.digits$}")
}

/// Format seconds with an engineering suffix for human tables.
pub fn seconds(v: f64) -> String {
    if v == 0.0 {
        "0 s".to_string()
    } else if v >= 1.0 {
        format!("{v:.4} s")
    } else if v >= 1e-3 {
        format!("{:.4} ms", v * 1e3)
    } else if v >= 1e-6 {
        format!("{:.4} us", v * 1e6)
    } else {
        format!("{:.4} ns", v * 1e9)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let table = render_table(
            &["name", "value"],
            &[
                vec!["a".to_string(), "1".to_string()],
                vec!["long_name".to_string(), "2.5".to_string()],
            ],
        );
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "name       value");
        assert_eq!(lines[2], "a          1");
    }

    #[test]
    fn csv_preamble() {
        let mut doc = CsvDoc::new("a,b");
        doc.push(&["1".to_string(), "2".to_string()]);
        assert_eq!(doc.to_text(), "# schema_version: 1\na,b\n1,2\n");
    }

    #[test]
    fn second_formatting() {
        assert_eq!(seconds(0.5771), "577.1000 ms");
        assert_eq!(seconds(4.352e-6), "4.3520 us");
    }
}
