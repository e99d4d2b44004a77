use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use rug::{Float, Rational};

use crate::config::{CliError, CliResult};

/// Comment header listing the resolved configuration.
#[derive(Clone)]
pub struct Header {
    lines: Vec<String>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Header {
            lines: vec![format!("# raptor-bounds {} {}", env!("CARGO_PKG_VERSION"), command)],
        }
    }

    pub fn field(mut self, key: &str, value: impl Display) -> Self {
        let value = value.to_string().replace('\n', " ");
        self.lines.push(format!("# {key} = {value}"));
        self
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

pub fn float(x: &Float) -> String {
    let y = x.to_f64();
    if x.is_zero() || y.abs() >= f64::MIN_POSITIVE {
        real(y)
    } else {
        // below the normal f64 range
        format!("{x:.17e}")
    }
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn rational(x: &Rational) -> String {
    float(&Float::with_val(raptor_bounds::bounds::PRECISION, x))
}

pub fn optional(x: Option<&Float>) -> String {
    x.map(float).unwrap_or_default()
}

/// Write to the named file, or to stdout when none is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::config("--output", format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Runtime(format!("writing output: {e}")))
        }
    }
}
