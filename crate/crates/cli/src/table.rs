use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

pub const SCHEMA_LINE: &str = "# schema=1";

/// Marker for a cell whose parameters are infeasible.
pub const INFEASIBLE: &str = "inf";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{SCHEMA_LINE}")?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for r in &self.rows {
            csv.write_record(r)?;
        }
        csv.flush()
    }

    pub fn write(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) => self.write_to(io::BufWriter::new(File::create(p)?)),
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// Shortest round-trip formatting; exponent form for very small or large values.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| INFEASIBLE.to_string(), num)
}
