use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "twomode";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Flag(bool),
    Text(&'static str),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Num(x) => x,
            Cell::Int(n) => n as f64,
            Cell::Flag(b) => f64::from(u8::from(b)),
            Cell::Text(_) => f64::NAN,
        }
    }

    fn render(&self, out: &mut String) {
        match *self {
            // 17 significant digits round-trip every f64
            Cell::Num(x) => write!(out, "{x:.16e}").expect("write to string"),
            Cell::Int(n) => write!(out, "{n}").expect("write to string"),
            Cell::Flag(b) => out.push(if b { '1' } else { '0' }),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

/// Rows with a fixed header, in sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// Rows whose `converged` style flags are all set.
    pub fn unconverged_rows(&self) -> usize {
        let flags: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.ends_with("converged"))
            .map(|(i, _)| i)
            .collect();
        self.rows
            .iter()
            .filter(|r| flags.iter().any(|&i| matches!(r[i], Cell::Flag(false))))
            .count()
    }
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(cfg.canonical().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").expect("write to string");
        s
    })
}

/// CSV text: provenance comments, header, rows.
pub fn render_csv(cfg: &RunConfig, table: &Table) -> String {
    let mut out = String::new();
    writeln!(out, "# {TOOL} {VERSION}").expect("write to string");
    writeln!(out, "# command: {}", cfg.command).expect("write to string");
    writeln!(out, "# config-sha256: {}", config_hash(cfg)).expect("write to string");
    for line in cfg.canonical().lines() {
        writeln!(out, "# config: {line}").expect("write to string");
    }
    writeln!(out, "# entropy unit: {}", if cfg.bits { "bits" } else { "nats" }).expect("write to string");
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            cell.render(&mut out);
        }
        out.push('\n');
    }
    out
}

/// Writes to `path`, or stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Self-contained matplotlib script that plots `csv` column by column
/// against the first column.
pub fn plot_script(csv: &Path, table: &Table) -> String {
    let x = table.columns[0];
    let ys: Vec<String> = table
        .columns
        .iter()
        .skip(1)
        .filter(|c| c.starts_with("S_"))
        .map(|c| format!("{c:?}"))
        .collect();
    format!(
        r##"import sys
import pandas as pd
import matplotlib.pyplot as plt

data = pd.read_csv({csv:?}, comment="#")
fig, ax = plt.subplots()
for col in [{ys}]:
    ax.plot(data[{x:?}], data[col], label=col, marker="." if col.endswith("oracle") else None, linestyle="" if col.endswith("oracle") else "-")
ax.set_xlabel({x:?})
ax.set_ylabel("entropy")
ax.legend()
out = sys.argv[1] if len(sys.argv) > 1 else {png:?}
fig.savefig(out, dpi=150)
"##,
        csv = csv.display().to_string(),
        ys = ys.join(", "),
        png = csv.with_extension("png").display().to_string(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456789.12345679] {
            let mut s = String::new();
            Cell::Num(x).render(&mut s);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        let mut s = String::new();
        Cell::Flag(true).render(&mut s);
        assert_eq!(s, "1");
    }
}
