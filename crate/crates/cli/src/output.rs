use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use iwalk_core::exact::format_rational;
use num_rational::BigRational;
use serde_json::Value;

/// A failed run, carrying the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or a violated precondition. Exit code 2.
    Usage(String),
    /// An asserted check failed. Exit code 1.
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

impl From<iwalk_core::Error> for Failure {
    fn from(e: iwalk_core::Error) -> Self {
        match e {
            iwalk_core::Error::IdentityFailed(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced: always JSON, CSV where a tabular form exists.
pub struct Artifact {
    /// File stem used under `--out`.
    pub stem: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Artifact {
    pub fn json(stem: impl Into<String>, json: Value) -> Self {
        Artifact {
            stem: stem.into(),
            json,
            csv: None,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

/// Writes the artifact to stdout, or to `out/<stem>.<ext>` through a
/// temporary file and rename. Returns the path written, if any.
pub fn emit(artifact: &Artifact, format: Format, out: Option<&Path>) -> CliResult<Option<PathBuf>> {
    let (body, ext) = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&artifact.json).expect("json serializes");
            s.push('\n');
            (s, "json")
        }
        Format::Csv => match &artifact.csv {
            Some(csv) => (csv.clone(), "csv"),
            None => {
                return Err(Failure::Usage(format!(
                    "--format csv is not available for {}; use json",
                    artifact.stem.split('_').next().unwrap_or("this command")
                )))
            }
        },
    };
    match out {
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(None)
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}.{ext}", artifact.stem));
            write_atomic(&path, body.as_bytes())?;
            println!("{}", path.display());
            Ok(Some(path))
        }
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
