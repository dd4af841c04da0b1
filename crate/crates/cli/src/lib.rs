//! Standard-library companion to `bregman-core`: CSV datasets, threaded
//! evaluation, JSON/CSV reports and the `bregman` command line.

pub mod cli;
pub mod data;
pub mod eval;

pub use cli::{run, CliError};
pub use data::{load_csv, load_csv_files, read_csv, write_csv, ColumnRef, CsvSchema, DataError};
