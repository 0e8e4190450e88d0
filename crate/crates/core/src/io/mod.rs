//! Scenario files, result tables and the commands behind the CLI.

pub mod commands;
pub mod scenario;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub use commands::{run, CommandError, CommandOutput};
pub use scenario::{ConfigError, Format, GridSpec, Scenario, SweepConfig};
pub use table::{Cell, ResultTable};

/// Environment variable naming the directory for outputs without an explicit path.
pub const OUT_DIR_ENV: &str = "CHIRAL_DIODE_OUT_DIR";

pub fn write_table<W: Write>(table: &ResultTable, format: Format, w: W) -> io::Result<()> {
    match format {
        Format::Csv => table.write_csv(w),
        Format::Json => table.write_json(w),
    }
}

pub fn write_table_to(table: &ResultTable, format: Format, path: &Path) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_table(table, format, &mut w)?;
    w.flush()
}
