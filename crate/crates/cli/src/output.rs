use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::commands::Failure;

/// Buffered stdout or file; every write error maps to exit 6.
pub struct Sink {
    inner: BufWriter<Box<dyn Write>>,
    label: String,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Sink, Failure> {
        match path {
            None => Ok(Sink { inner: BufWriter::new(Box::new(io::stdout().lock())), label: "stdout".into() }),
            Some(p) => {
                let file = File::create(p).map_err(|e| io_failure(p, e))?;
                Ok(Sink { inner: BufWriter::new(Box::new(file)), label: p.display().to_string() })
            }
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        let label = &self.label;
        self.inner
            .write_all(s.as_ref().as_bytes())
            .and_then(|_| self.inner.write_all(b"\n"))
            .map_err(|e| write_failure(label, e))
    }

    pub fn raw(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        let label = &self.label;
        self.inner.write_all(s.as_ref().as_bytes()).map_err(|e| write_failure(label, e))
    }

    pub fn finish(mut self) -> Result<(), Failure> {
        let label = self.label.clone();
        self.inner.flush().map_err(|e| write_failure(&label, e))
    }
}

/// A closed stdout (e.g. piped into `head`) ends the program quietly.
fn write_failure(label: &str, e: io::Error) -> Failure {
    if e.kind() == io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    Failure::Io(format!("{label}: {e}"))
}

pub fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", PathBuf::from(path).display()))
}

/// Writes a JSON array of strings one element at a time.
pub struct JsonArray<'a> {
    sink: &'a mut Sink,
    first: bool,
}

impl<'a> JsonArray<'a> {
    pub fn start(sink: &'a mut Sink) -> Result<Self, Failure> {
        sink.raw("[")?;
        Ok(JsonArray { sink, first: true })
    }

    pub fn push(&mut self, item: &str) -> Result<(), Failure> {
        if !self.first {
            self.sink.raw(",")?;
        }
        self.first = false;
        self.sink.raw(serde_json::Value::from(item).to_string())
    }

    pub fn end(self) -> Result<(), Failure> {
        self.sink.line("]")
    }
}
