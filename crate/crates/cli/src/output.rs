use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// `x` with 12 significant digits, never in scientific notation.
pub fn sig12(x: f64) -> String {
    sig_digits(x, 12)
}

pub fn sig_digits(x: f64, digits: i32) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", (digits - 1) as usize, 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.99... -> 10.0).
    let rounded: f64 = s.parse().unwrap_or(x);
    if decimals > 0 && rounded.abs().log10().floor() as i32 > magnitude {
        format!("{x:.*}", decimals - 1)
    } else {
        s
    }
}

#[derive(Debug)]
pub struct OutputError {
    pub path: Option<PathBuf>,
    pub source: io::Error,
}

impl std::fmt::Display for OutputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.path {
            Some(p) => write!(f, "{}: {}", p.display(), self.source),
            None => write!(f, "stdout: {}", self.source),
        }
    }
}

/// Writes to `path`, or stdout when absent.
pub fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>, OutputError> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|source| OutputError { path: Some(p.to_path_buf()), source }),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn csv_writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, OutputError> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(open_sink(path)?))
}

pub fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> OutputError + '_ {
    move |source| OutputError { path: path.map(Path::to_path_buf), source }
}

pub fn csv_err(path: Option<&Path>) -> impl Fn(csv::Error) -> OutputError + '_ {
    move |e| OutputError { path: path.map(Path::to_path_buf), source: io::Error::other(e.to_string()) }
}
