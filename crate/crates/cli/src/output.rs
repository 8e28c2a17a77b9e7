//! CSV sinks. Every table starts with one `#` metadata line and a header row.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const OUTPUT_DIR_ENV: &str = "BSPDC_OUTPUT_DIR";

/// Where a table goes: an explicit path (relative paths resolve against the
/// output directory when one is set), `<dir>/<default_name>` when only the
/// directory is set, and stdout otherwise.
pub fn destination(output: Option<&Path>, dir: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    match (output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    }
}

/// Shortest round-trip form; exponent notation for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Ordered `key=value` pairs for the metadata line.
#[derive(Debug, Default, Clone)]
pub struct Metadata {
    command: String,
    fields: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut line = format!("# bspdc {} {}", env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in &self.fields {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}

pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(path: Option<&Path>, meta: &Metadata, header: &[&str]) -> io::Result<Self> {
        let mut sink: Box<dyn Write> = match path {
            Some(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(parent)?;
                }
                Box::new(BufWriter::new(File::create(p)?))
            }
            None => Box::new(io::stdout().lock()),
        };
        writeln!(sink, "{}", meta.line())?;
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> io::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn destination_rules() {
        let d = Path::new("/tmp/out");
        assert_eq!(destination(None, None, "x.csv"), None);
        assert_eq!(destination(None, Some(d), "x.csv"), Some(d.join("x.csv")));
        assert_eq!(
            destination(Some(Path::new("y.csv")), Some(d), "x.csv"),
            Some(d.join("y.csv"))
        );
        assert_eq!(
            destination(Some(Path::new("/abs/y.csv")), Some(d), "x.csv"),
            Some(PathBuf::from("/abs/y.csv"))
        );
        assert_eq!(
            destination(Some(Path::new("y.csv")), None, "x.csv"),
            Some(PathBuf::from("y.csv"))
        );
    }

    #[test]
    fn metadata_line_is_ordered() {
        let m = Metadata::new("qpdc").field("seed", 7).field("q", 1);
        assert_eq!(
            m.line(),
            format!("# bspdc {} qpdc seed=7 q=1", env!("CARGO_PKG_VERSION"))
        );
    }
}
