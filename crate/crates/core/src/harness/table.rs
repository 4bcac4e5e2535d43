use std::fmt;
use std::io::Write;
use std::path::Path;

use super::{HarnessError, Implementation};
use crate::memory::Cycle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMode {
    /// Rows are extra latencies in cycles, normalised to the 0-cycle row.
    Latency,
    /// Rows are bandwidths in B/cycle, normalised to the 1 B/cycle row.
    Bandwidth,
}

impl SweepMode {
    pub fn baseline(self) -> u64 {
        match self {
            SweepMode::Latency => 0,
            SweepMode::Bandwidth => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SweepMode::Latency => "latency",
            SweepMode::Bandwidth => "bandwidth",
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Execution times normalised per implementation: `cells[r][c]` is the
/// cycles of column `c` at sweep value `rows[r]` divided by its cycles at the
/// baseline value.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowdownTable {
    pub mode: SweepMode,
    pub columns: Vec<Implementation>,
    pub rows: Vec<u64>,
    pub cells: Vec<Vec<f64>>,
}

impl SlowdownTable {
    /// Builds a table from raw cycle counts laid out like `cells`.
    pub fn from_cycles(
        mode: SweepMode,
        columns: Vec<Implementation>,
        rows: Vec<u64>,
        cycles: &[Vec<Cycle>],
    ) -> Result<Self, HarnessError> {
        let base = rows.iter().position(|&r| r == mode.baseline()).ok_or_else(|| {
            HarnessError::Config(format!("{mode} sweep needs the baseline value {}", mode.baseline()))
        })?;
        let cells = cycles
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&cycles[base])
                    .map(|(&c, &b)| c as f64 / b as f64)
                    .collect()
            })
            .collect();
        Ok(Self {
            mode,
            columns,
            rows,
            cells,
        })
    }

    pub fn column_index(&self, implementation: Implementation) -> Option<usize> {
        self.columns.iter().position(|&c| c == implementation)
    }

    pub fn cell(&self, row: u64, implementation: Implementation) -> Option<f64> {
        let r = self.rows.iter().position(|&v| v == row)?;
        Some(self.cells[r][self.column_index(implementation)?])
    }

    pub fn header(&self) -> Vec<String> {
        std::iter::once("sweep_value".to_string())
            .chain(self.columns.iter().map(|c| c.to_string()))
            .collect()
    }

    /// Writes `sweep_value,<columns...>` and one line per row. Cells use the
    /// shortest decimal form that parses back to the same `f64`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for (v, row) in self.rows.iter().zip(&self.cells) {
            w.write_record(std::iter::once(v.to_string()).chain(row.iter().map(|x| x.to_string())))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// Parses text produced by [`write_csv`](Self::write_csv).
    pub fn from_csv(text: &str, mode: SweepMode) -> Result<Self, HarnessError> {
        let bad = |m: String| HarnessError::Config(format!("slowdown CSV: {m}"));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.get(0) != Some("sweep_value") {
            return Err(bad("first column must be sweep_value".into()));
        }
        let columns = header.iter().skip(1).map(str::parse).collect::<Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        let mut cells = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("'{s}' is not a number")));
            rows.push(
                rec[0]
                    .parse()
                    .map_err(|_| bad(format!("bad sweep value '{}'", &rec[0])))?,
            );
            cells.push(rec.iter().skip(1).map(num).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(Self {
            mode,
            columns,
            rows,
            cells,
        })
    }
}

/// Writes `table` as CSV to `path`.
pub fn emit_csv(table: &SlowdownTable, path: &Path) -> Result<(), HarnessError> {
    if table.rows.is_empty() || table.columns.is_empty() {
        return Err(HarnessError::Config("cannot emit an empty table".into()));
    }
    std::fs::write(path, table.to_csv_string()).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SlowdownTable {
        let cols = vec![Implementation::Scalar, Implementation::Vector { vlmax: 8 }];
        SlowdownTable::from_cycles(SweepMode::Latency, cols, vec![0, 32], &[vec![300, 70], vec![1000, 71]]).unwrap()
    }

    #[test]
    fn baseline_is_exactly_one() {
        let t = table();
        assert_eq!(t.cells[0], vec![1.0, 1.0]);
        assert_eq!(t.cell(32, Implementation::Scalar), Some(1000.0 / 300.0));
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let t = table();
        let text = t.to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "sweep_value,scalar,vl8");
        assert_eq!(lines[1], "0,1,1");
        assert_eq!(SlowdownTable::from_csv(&text, SweepMode::Latency).unwrap(), t);
    }

    #[test]
    fn missing_baseline() {
        let cols = vec![Implementation::Scalar];
        assert!(SlowdownTable::from_cycles(SweepMode::Bandwidth, cols, vec![2, 4], &[vec![1], vec![1]]).is_err());
    }
}
