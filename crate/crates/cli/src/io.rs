//! CSV ingestion of a single numeric column.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use bandlimit_core::Series64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("column {0} not found")]
    MissingColumn(String),

    #[error("non-numeric cell at data row {row}, column {column}")]
    NonNumericCell { row: usize, column: String },

    #[error("no data rows")]
    Empty,
}

/// A column addressed by header name or 0-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    /// All-digit strings are positions, anything else a header name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub column: ColumnRef,
    /// First row is a header, not data.
    pub skip_header: bool,
    /// Carried into reports as row labels; never used numerically.
    pub date_column: Option<ColumnRef>,
}

impl ColumnSpec {
    pub fn named(column: &str) -> Self {
        Self {
            column: ColumnRef::Name(column.to_string()),
            skip_header: true,
            date_column: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSeries {
    /// Values in file order, the first data row at `t = 1`.
    pub series: Series64,
    /// Header name of the value column, or its position.
    pub column_name: String,
    pub dates: Option<Vec<String>>,
}

pub fn load_series_csv(path: &Path, spec: &ColumnSpec) -> Result<LoadedSeries, IoError> {
    let file = File::open(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_series_from_reader(file, spec)
}

pub fn load_series_from_reader<R: Read>(reader: R, spec: &ColumnSpec) -> Result<LoadedSeries, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(spec.skip_header)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);

    let headers = if spec.skip_header {
        Some(rdr.headers()?.clone())
    } else {
        None
    };
    let resolve = |col: &ColumnRef| -> Result<(usize, String), IoError> {
        match col {
            ColumnRef::Index(i) => {
                let name = headers
                    .as_ref()
                    .and_then(|h| h.get(*i))
                    .map_or_else(|| i.to_string(), str::to_string);
                Ok((*i, name))
            }
            ColumnRef::Name(name) => headers
                .as_ref()
                .and_then(|h| h.iter().position(|c| c == name))
                .map(|i| (i, name.clone()))
                .ok_or_else(|| IoError::MissingColumn(name.clone())),
        }
    };
    let (value_idx, column_name) = resolve(&spec.column)?;
    let date_idx = spec.date_column.as_ref().map(resolve).transpose()?.map(|(i, _)| i);

    let mut values = Vec::new();
    let mut dates = date_idx.map(|_| Vec::new());
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let cell = record
            .get(value_idx)
            .ok_or_else(|| IoError::MissingColumn(spec.column.to_string()))?;
        let value = cell
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| IoError::NonNumericCell {
                row,
                column: column_name.clone(),
            })?;
        values.push(value);
        if let (Some(idx), Some(dates)) = (date_idx, dates.as_mut()) {
            let label = record
                .get(idx)
                .ok_or_else(|| IoError::MissingColumn(spec.date_column.as_ref().unwrap().to_string()))?;
            dates.push(label.to_string());
        }
    }
    if values.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(LoadedSeries {
        series: Series64::new(1, values).expect("finite values checked above"),
        column_name,
        dates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, spec: &ColumnSpec) -> Result<LoadedSeries, IoError> {
        load_series_from_reader(text.as_bytes(), spec)
    }

    #[test]
    fn named_column() {
        let out = load("t,value\n1,10.0\n2,11.5", &ColumnSpec::named("value")).unwrap();
        assert_eq!(out.series.start_t(), 1);
        assert_eq!(out.series.values(), &[10.0, 11.5]);
        assert_eq!(out.column_name, "value");
        assert!(out.dates.is_none());
    }

    #[test]
    fn missing_column() {
        assert!(matches!(
            load("t,value\n1,10.0\n", &ColumnSpec::named("high")),
            Err(IoError::MissingColumn(c)) if c == "high"
        ));
        let spec = ColumnSpec { column: ColumnRef::Index(5), ..ColumnSpec::named("x") };
        assert!(matches!(load("t,value\n1,10.0\n", &spec), Err(IoError::MissingColumn(_))));
    }

    #[test]
    fn non_numeric_cell() {
        let err = load("t,value\n1,10.0\n2,abc\n", &ColumnSpec::named("value")).unwrap_err();
        assert!(matches!(err, IoError::NonNumericCell { row: 2, ref column } if column == "value"));
    }

    #[test]
    fn empty_cells_are_errors() {
        let err = load("t,value\n1,10.0\n2,\n", &ColumnSpec::named("value")).unwrap_err();
        assert!(matches!(err, IoError::NonNumericCell { row: 2, .. }));
        let err = load("t,value\n1,nan\n", &ColumnSpec::named("value")).unwrap_err();
        assert!(matches!(err, IoError::NonNumericCell { row: 1, .. }));
    }

    #[test]
    fn positional_without_header() {
        let spec = ColumnSpec {
            column: ColumnRef::Index(2),
            skip_header: false,
            date_column: Some(ColumnRef::Index(0)),
        };
        let out = load("2018-01-02,a,3.5\n2018-01-03,b,4.0\n", &spec).unwrap();
        assert_eq!(out.series.values(), &[3.5, 4.0]);
        assert_eq!(out.dates.unwrap(), vec!["2018-01-02", "2018-01-03"]);
        assert_eq!(out.column_name, "2");
        let named = ColumnSpec { skip_header: false, ..ColumnSpec::named("value") };
        assert!(matches!(load("1,2\n", &named), Err(IoError::MissingColumn(_))));
    }

    #[test]
    fn empty_file() {
        assert!(matches!(load("t,value\n", &ColumnSpec::named("value")), Err(IoError::Empty)));
    }

    #[test]
    fn column_ref_parsing() {
        assert_eq!("3".parse::<ColumnRef>().unwrap(), ColumnRef::Index(3));
        assert_eq!("high".parse::<ColumnRef>().unwrap(), ColumnRef::Name("high".into()));
    }
}
