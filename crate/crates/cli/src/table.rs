//! Wide CSV tables with a `#` comment header.

use std::io::Write;

use skyrelay::units::watts_to_dbm;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Watts to dBm; empty for zero power.
    pub fn dbm(watts: f64) -> Cell {
        watts_to_dbm(watts).map_or(Cell::Empty, Cell::Num)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) if *v == 0.0 || (1e-4..1e9).contains(&v.abs()) => format!("{v}"),
            Cell::Num(v) => format!("{v:e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, `None` for non-numeric cells.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), CliError> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
