//! CSV ingestion and export of labelled datasets.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use bregman_core::{FeatureVector, LabeledDataset};
use serde::Serialize;

/// A column addressed by header name or zero-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "#{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvSchema {
    pub label_column: ColumnRef,
    /// `None` means every column other than the label and the excluded ones.
    pub feature_columns: Option<Vec<ColumnRef>>,
    pub exclude_columns: Vec<ColumnRef>,
    pub has_header: bool,
    #[serde(serialize_with = "ser_delimiter")]
    pub delimiter: u8,
}

fn ser_delimiter<S: serde::Serializer>(d: &u8, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&(*d as char).to_string())
}

impl Default for CsvSchema {
    /// Header row, label in the last column named `label`, comma separated.
    fn default() -> Self {
        CsvSchema {
            label_column: ColumnRef::Name("label".into()),
            feature_columns: None,
            exclude_columns: Vec::new(),
            has_header: true,
            delimiter: b',',
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{source_name}: parse error at row {row}, column {column}: {message}")]
    Parse {
        source_name: String,
        row: u64,
        column: String,
        message: String,
    },
    #[error("{source_name}: {message}")]
    Schema {
        source_name: String,
        message: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] bregman_core::Error),
}

impl DataError {
    fn parse(source_name: &str, row: u64, column: String, message: impl Into<String>) -> Self {
        DataError::Parse {
            source_name: source_name.into(),
            row,
            column,
            message: message.into(),
        }
    }

    fn schema(source_name: &str, message: impl Into<String>) -> Self {
        DataError::Schema {
            source_name: source_name.into(),
            message: message.into(),
        }
    }
}

fn resolve(
    column: &ColumnRef,
    header: Option<&csv::StringRecord>,
    width: usize,
    source_name: &str,
) -> Result<usize, DataError> {
    let idx = match column {
        ColumnRef::Index(i) => *i,
        ColumnRef::Name(name) => header
            .and_then(|h| h.iter().position(|c| c.trim() == name))
            .ok_or_else(|| DataError::schema(source_name, format!("no column named `{name}`")))?,
    };
    if idx >= width {
        return Err(DataError::schema(
            source_name,
            format!("column {column} is beyond the {width} columns in the file"),
        ));
    }
    Ok(idx)
}

/// Parses CSV text from `reader`. `source_name` labels errors and the dataset.
pub fn read_csv(
    reader: impl Read,
    schema: &CsvSchema,
    source_name: &str,
) -> Result<LabeledDataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .delimiter(schema.delimiter)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = if schema.has_header {
        let h = rdr.headers()?.clone();
        if h.is_empty() {
            return Err(DataError::parse(
                source_name,
                1,
                "-".into(),
                "missing header row",
            ));
        }
        Some(h)
    } else {
        None
    };

    let mut records = rdr.records().peekable();
    let width = match (&header, records.peek()) {
        (Some(h), _) => h.len(),
        (None, Some(Ok(r))) => r.len(),
        (None, Some(Err(_))) => 0,
        (None, None) => {
            return Err(DataError::parse(
                source_name,
                1,
                "-".into(),
                "file contains no data rows",
            ))
        }
    };

    let label_idx = resolve(&schema.label_column, header.as_ref(), width, source_name)?;
    let excluded = schema
        .exclude_columns
        .iter()
        .map(|c| resolve(c, header.as_ref(), width, source_name))
        .collect::<Result<Vec<_>, _>>()?;
    let feature_idx: Vec<usize> = match &schema.feature_columns {
        Some(cols) => cols
            .iter()
            .map(|c| resolve(c, header.as_ref(), width, source_name))
            .collect::<Result<_, _>>()?,
        None => (0..width)
            .filter(|i| *i != label_idx && !excluded.contains(i))
            .collect(),
    };
    if feature_idx.contains(&label_idx) {
        return Err(DataError::schema(
            source_name,
            "the label column cannot also be a feature column",
        ));
    }
    if feature_idx.is_empty() {
        return Err(DataError::schema(
            source_name,
            "no feature columns selected",
        ));
    }

    let column_name = |i: usize| match &header {
        Some(h) => format!("{} (#{i})", &h[i]),
        None => format!("#{i}"),
    };

    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for record in records {
        let record = record?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != width {
            return Err(DataError::parse(
                source_name,
                row,
                "-".into(),
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        let mut features = Vec::with_capacity(feature_idx.len());
        for &i in &feature_idx {
            let cell = &record[i];
            let v: f64 = cell.parse().map_err(|_| {
                DataError::parse(
                    source_name,
                    row,
                    column_name(i),
                    format!("`{cell}` is not a number"),
                )
            })?;
            if !v.is_finite() {
                return Err(DataError::parse(
                    source_name,
                    row,
                    column_name(i),
                    "value is not finite",
                ));
            }
            features.push(v);
        }
        vectors.push(FeatureVector::new(features)?);
        labels.push(record[label_idx].to_string());
    }
    if vectors.is_empty() {
        return Err(DataError::parse(
            source_name,
            1,
            "-".into(),
            "file contains no data rows",
        ));
    }
    Ok(LabeledDataset::new(vectors, labels, source_name)?)
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<LabeledDataset, DataError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: name.clone(),
        source,
    })?;
    read_csv(std::io::BufReader::new(file), schema, &name)
}

/// Loads each file with the same schema and concatenates them in order.
pub fn load_csv_files<P: AsRef<Path>>(
    paths: &[P],
    schema: &CsvSchema,
) -> Result<LabeledDataset, DataError> {
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    let mut names = Vec::new();
    for p in paths {
        let d = load_csv(p, schema)?;
        names.push(d.name().to_string());
        if let Some(first) = vectors.first().map(|v: &FeatureVector| v.len()) {
            if first != d.dim() {
                return Err(DataError::schema(
                    d.name(),
                    format!("has {} features but earlier files have {first}", d.dim()),
                ));
            }
        }
        vectors.extend_from_slice(d.vectors());
        labels.extend_from_slice(d.labels());
    }
    Ok(LabeledDataset::new(vectors, labels, names.join("+"))?)
}

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header `f0,…,f{n-1},label` and one row per instance.
pub fn write_csv(data: &LabeledDataset, writer: impl Write) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..data.dim()).map(|i| format!("f{i}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for (v, l) in data.vectors().iter().zip(data.labels()) {
        let mut row: Vec<String> = v.iter().map(|&x| fmt_f64(x)).collect();
        row.push(l.clone());
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| DataError::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}

/// Keeps the first `n` classes in order of first appearance.
pub fn keep_first_classes(data: &LabeledDataset, n: usize) -> Result<LabeledDataset, DataError> {
    let keep: Vec<String> = data
        .classes()
        .into_iter()
        .take(n)
        .map(String::from)
        .collect();
    Ok(data.filter_labels(|l| keep.iter().any(|k| k == l))?)
}

pub fn keep_classes(
    data: &LabeledDataset,
    classes: &[String],
) -> Result<LabeledDataset, DataError> {
    Ok(data.filter_labels(|l| classes.iter().any(|k| k == l))?)
}
