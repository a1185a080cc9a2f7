use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Token used for undefined entries in CSV files.
pub const UNDEFINED_TOKEN: &str = "NA";

/// Exact scalar used for slack matrices and LP data.
pub type Rational = Rational64;

/// Entry types that can be written to and read from matrix files.
pub trait Entry: Clone + PartialOrd + Sized {
    fn format_entry(&self) -> String;
    fn parse_entry(s: &str) -> Option<Self>;
    fn to_f64(&self) -> f64;
}

impl Entry for Rational {
    /// Always `p/q`, also for integers.
    fn format_entry(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    /// Accepts `p/q`, integers and finite decimals such as `0.25`.
    fn parse_entry(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Entry for f64 {
    /// Shortest decimal that round-trips.
    fn format_entry(&self) -> String {
        format!("{self:?}")
    }

    fn parse_entry(s: &str) -> Option<Self> {
        if let Some(r) = s.contains('/').then(|| parse_rational(s)).flatten() {
            return Some(r.to_f64());
        }
        f64::from_str(s).ok().filter(|x| x.is_finite())
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Parses `p/q`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        return (q != 0).then(|| Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let (neg, int) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int.strip_prefix('+').unwrap_or(int)),
        };
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !int.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int_val: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let num = int_val.checked_mul(den)?.checked_add(frac.parse::<i64>().ok()?)?;
        let r = Rational::new(num, den);
        return Some(if neg { -r } else { r });
    }
    s.parse::<i64>().ok().map(Rational::from_integer)
}

/// A dense matrix in which some entries may be undefined.
///
/// Undefined entries are stored as `None`; there are no sentinel values.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialMatrix<T> {
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<Option<T>>,
}

impl<T: Clone> PartialMatrix<T> {
    pub fn from_fn<F>(rows: Vec<String>, cols: Vec<String>, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Option<T>,
    {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                entries.push(f(i, j));
            }
        }
        PartialMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Fully defined matrix from row vectors, with numeric labels.
    pub fn from_rows(data: Vec<Vec<T>>) -> Result<Self> {
        let m = data.len();
        let n = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = data.into_iter().flatten().map(Some).collect();
        Ok(PartialMatrix {
            rows: (0..m).map(|i| i.to_string()).collect(),
            cols: (0..n).map(|j| j.to_string()).collect(),
            entries,
        })
    }

    /// Matrix from optional entries, with numeric labels.
    pub fn from_options(data: Vec<Vec<Option<T>>>) -> Result<Self> {
        let m = data.len();
        let n = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(PartialMatrix {
            rows: (0..m).map(|i| i.to_string()).collect(),
            cols: (0..n).map(|j| j.to_string()).collect(),
            entries: data.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[String] {
        &self.cols
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        if rows.len() != self.nrows() || cols.len() != self.ncols() {
            return Err(Error::DimensionMismatch("label count".into()));
        }
        self.rows = rows;
        self.cols = cols;
        Ok(self)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.entries[i * self.cols.len() + j].as_ref()
    }

    pub fn is_defined(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut Option<T> {
        let n = self.cols.len();
        &mut self.entries[i * n + j]
    }

    /// Number of defined entries.
    pub fn defined_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_fully_defined(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Mask of defined entries, row-major.
    pub fn mask(&self) -> Vec<Vec<bool>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.is_defined(i, j)).collect())
            .collect()
    }

    /// Defined entries as `(row, col, value)`.
    pub fn defined_entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let n = self.ncols();
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(k, e)| e.as_ref().map(|v| (k / n, k % n, v)))
    }

    pub fn map<U: Clone, F: FnMut(&T) -> U>(&self, mut f: F) -> PartialMatrix<U> {
        PartialMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|e| e.as_ref().map(&mut f)).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        PartialMatrix {
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: cols.iter().map(|&j| self.cols[j].clone()).collect(),
            entries: rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
                .map(|(i, j)| self.get(i, j).cloned())
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        PartialMatrix::from_fn(self.cols.clone(), self.rows.clone(), |i, j| {
            self.get(j, i).cloned()
        })
    }

    /// Equality of masks and of all defined entries (labels ignored).
    pub fn same_entries(&self, other: &Self) -> bool
    where
        T: PartialEq,
    {
        self.nrows() == other.nrows()
            && self.ncols() == other.ncols()
            && self.entries == other.entries
    }
}

impl<T: Entry> PartialMatrix<T> {
    pub fn to_f64(&self) -> PartialMatrix<f64> {
        self.map(Entry::to_f64)
    }

    /// First defined entry below zero, if any.
    pub fn find_negative(&self, zero: &T) -> Option<(usize, usize)> {
        self.defined_entries()
            .find(|(_, _, v)| *v < zero)
            .map(|(i, j, _)| (i, j))
    }

    /// CSV with a header row of column labels and the row label in the first
    /// column; undefined entries are written as `NA`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&csv_cell(""));
        for c in &self.cols {
            out.push(',');
            out.push_str(&csv_cell(c));
        }
        out.push('\n');
        for i in 0..self.nrows() {
            out.push_str(&csv_cell(&self.rows[i]));
            for j in 0..self.ncols() {
                out.push(',');
                match self.get(i, j) {
                    Some(v) => out.push_str(&v.format_entry()),
                    None => out.push_str(UNDEFINED_TOKEN),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`PartialMatrix::to_csv`] output. Lines starting with `#` are
    /// skipped. Errors carry the 1-based line and column of the bad cell.
    pub fn from_csv(text: &str) -> Result<Self> {
        let body: String = text
            .lines()
            .map(|l| if l.starts_with('#') { "" } else { l })
            .collect::<Vec<_>>()
            .join("\n");
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(body.as_bytes());
        let mut records = reader.records();
        let header = loop {
            match records.next() {
                Some(r) => {
                    let r = r?;
                    if r.iter().all(str::is_empty) {
                        continue;
                    }
                    break r;
                }
                None => return Err(Error::parse(1, None, "missing header row")),
            }
        };
        let cols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        for rec in records {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.iter().all(str::is_empty) {
                continue;
            }
            if rec.len() != cols.len() + 1 {
                return Err(Error::parse(
                    line,
                    None,
                    format!("expected {} cells, found {}", cols.len() + 1, rec.len()),
                ));
            }
            rows.push(rec[0].to_string());
            for (k, cell) in rec.iter().enumerate().skip(1) {
                let cell = cell.trim();
                if cell == UNDEFINED_TOKEN {
                    entries.push(None);
                } else {
                    let v = T::parse_entry(cell).ok_or_else(|| {
                        Error::parse(line, Some(k + 1), format!("bad entry {cell:?}"))
                    })?;
                    entries.push(Some(v));
                }
            }
        }
        Ok(PartialMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn to_json_value(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: (0..self.nrows())
                .map(|i| {
                    (0..self.ncols())
                        .map(|j| self.get(i, j).map(Entry::format_entry))
                        .collect()
                })
                .collect(),
            mask: self.mask(),
        }
    }

    pub fn from_json_value(j: &MatrixJson) -> Result<Self> {
        let (m, n) = (j.rows.len(), j.cols.len());
        if j.entries.len() != m || j.mask.len() != m {
            return Err(Error::DimensionMismatch("json row count".into()));
        }
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            if j.entries[i].len() != n || j.mask[i].len() != n {
                return Err(Error::DimensionMismatch(format!("json row {i}")));
            }
            for k in 0..n {
                match (&j.entries[i][k], j.mask[i][k]) {
                    (Some(s), true) => entries.push(Some(T::parse_entry(s).ok_or_else(|| {
                        Error::parse(i + 1, Some(k + 1), format!("bad entry {s:?}"))
                    })?)),
                    (_, false) => entries.push(None),
                    (None, true) => {
                        return Err(Error::parse(i + 1, Some(k + 1), "mask set but entry null"))
                    }
                }
            }
        }
        Ok(PartialMatrix {
            rows: j.rows.clone(),
            cols: j.cols.clone(),
            entries,
        })
    }
}

pub(crate) fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// JSON form of a partial matrix with an explicit mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<Option<String>>>,
    pub mask: Vec<Vec<bool>>,
}

/// Renders a matrix as aligned text, for examples and logs.
pub fn pretty<T: Entry>(m: &PartialMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        write!(out, "{:>8} |", m.row_labels()[i]).unwrap();
        for j in 0..m.ncols() {
            let cell = m.get(i, j).map_or("·".to_string(), |v| v.format_entry());
            write!(out, " {cell:>6}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("-2"), Some(r(-2)));
        assert_eq!(parse_rational("0.25"), Some(Rational::new(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(Rational::new(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(r(3).format_entry(), "3/1");
    }

    #[test]
    fn csv_round_trip_with_na() {
        let m = PartialMatrix::from_options(vec![
            vec![Some(r(1)), None],
            vec![Some(Rational::new(1, 3)), Some(r(0))],
        ])
        .unwrap();
        let text = m.to_csv();
        assert_eq!(text, ",0,1\n0,1/1,NA\n1,1/3,0/1\n");
        let back = PartialMatrix::<Rational>::from_csv(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn csv_errors_point_at_cell() {
        let err = PartialMatrix::<Rational>::from_csv(",a,b\nx,1,oops\n").unwrap_err();
        match err {
            Error::Parse { pos, .. } => assert_eq!((pos.line, pos.column), (2, Some(3))),
            other => panic!("unexpected {other:?}"),
        }
        assert!(PartialMatrix::<Rational>::from_csv(",a,b\nx,1\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = PartialMatrix::from_options(vec![vec![Some(0.5f64), None]]).unwrap();
        let j = m.to_json_value();
        assert_eq!(j.mask, vec![vec![true, false]]);
        assert_eq!(PartialMatrix::<f64>::from_json_value(&j).unwrap(), m);
    }

    #[test]
    fn submatrix_and_transpose() {
        let m = PartialMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let s = m.submatrix(&[1], &[0, 2]);
        assert_eq!(s.get(0, 1), Some(&6));
        assert_eq!(m.transpose().get(2, 1), Some(&6));
    }
}
