//! CSV input and output.
//!
//! Numeric tables have one observation per row and an optional header row.
//! A dissimilarity table must be square. Errors carry the 1-based line and
//! column of the offending field.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::distgeom::{DataMatrix, DissimilarityMatrix};
use crate::error::{Error, Result};

/// A parsed numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn into_data(self) -> Result<DataMatrix> {
        DataMatrix::from_rows(&self.rows)
    }

    pub fn into_dissimilarity(self) -> Result<DissimilarityMatrix> {
        let n = self.rows.len();
        if let Some(i) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "dissimilarity table must be square: {n} rows but row {} has {} columns",
                i + 1,
                self.rows[i].len()
            )));
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| self.rows[i][j]);
        DissimilarityMatrix::new(m)
    }

    /// Index of a named column, or of a 1-based column number.
    pub fn column_index(&self, key: &str) -> Result<usize> {
        if let Some(h) = &self.header {
            if let Some(i) = h.iter().position(|c| c == key) {
                return Ok(i);
            }
        }
        match key.parse::<usize>() {
            Ok(k) if k >= 1 && k <= self.ncols() => Ok(k - 1),
            _ => Err(Error::InvalidInput(format!("no column named or numbered '{key}'"))),
        }
    }
}

pub fn read_table<R: Read>(reader: R, has_header: bool) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let header = if has_header {
        let h = rdr.headers().map_err(|e| csv_error(&e))?;
        Some(h.iter().map(str::to_string).collect())
    } else {
        None
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(record.len());
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Csv {
                line,
                column: k + 1,
                message: format!("'{field}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Csv {
                    line,
                    column: k + 1,
                    message: format!("'{field}' is not finite"),
                });
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Csv {
                    line,
                    column: row.len().min(first.len()) + 1,
                    message: format!("expected {} fields, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("table has no data rows".into()));
    }
    Ok(Table { header, rows })
}

fn csv_error(e: &csv::Error) -> Error {
    Error::Csv {
        line: e.position().map_or(0, |p| p.line()),
        column: 0,
        message: e.to_string(),
    }
}

pub fn read_table_path(path: impl AsRef<Path>, has_header: bool) -> Result<Table> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    read_table(file, has_header)
}

pub fn read_data(path: impl AsRef<Path>, has_header: bool) -> Result<DataMatrix> {
    read_table_path(path, has_header)?.into_data()
}

pub fn read_dissimilarity(path: impl AsRef<Path>, has_header: bool) -> Result<DissimilarityMatrix> {
    read_table_path(path, has_header)?.into_dissimilarity()
}

/// Writes rows of `x`, preceded by `header` when given.
pub fn write_data<W: Write>(out: W, x: &DataMatrix, header: Option<&[String]>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| csv_error(&e);
    if let Some(h) = header {
        w.write_record(h).map_err(err)?;
    }
    for i in 0..x.nrows() {
        w.write_record(x.row(i).iter().map(|v| format!("{v:e}"))).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_header() {
        let t = read_table("a,b\n1,2\n3, 4\n".as_bytes(), true).unwrap();
        assert_eq!(t.header.as_deref(), Some(&["a".to_string(), "b".to_string()][..]));
        assert_eq!(t.rows, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(t.column_index("b").unwrap(), 1);
        assert_eq!(t.column_index("1").unwrap(), 0);
        assert!(t.column_index("c").is_err());
        let t = read_table("1,2\n3,4\n".as_bytes(), false).unwrap();
        assert_eq!(t.rows.len(), 2);
    }

    #[test]
    fn reports_position_of_bad_field() {
        let e = read_table("a,b\n1,2\n3,x\n".as_bytes(), true).unwrap_err();
        match e {
            Error::Csv { line, column, .. } => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
        let e = read_table("1,2\n3\n".as_bytes(), false).unwrap_err();
        assert!(matches!(e, Error::Csv { line: 2, .. }));
        let e = read_table("1,inf\n".as_bytes(), false).unwrap_err();
        assert!(matches!(e, Error::Csv { line: 1, column: 2, .. }));
    }

    #[test]
    fn dissimilarity_must_be_square() {
        let t = read_table("0,1,2\n1,0,3\n".as_bytes(), false).unwrap();
        assert!(t.into_dissimilarity().is_err());
        let t = read_table("0,1\n1,0\n".as_bytes(), false).unwrap();
        assert_eq!(t.into_dissimilarity().unwrap().order(), 2);
    }

    #[test]
    fn write_round_trip() {
        let x = DataMatrix::from_rows(&[vec![0.1, -2.0], vec![1e-300, 3.5]]).unwrap();
        let mut buf = Vec::new();
        write_data(&mut buf, &x, Some(&["u".into(), "v".into()])).unwrap();
        let back = read_table(buf.as_slice(), true).unwrap().into_data().unwrap();
        assert_eq!(back, x);
    }
}
