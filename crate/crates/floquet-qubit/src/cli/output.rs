//! Bit-stable CSV and JSON writers.
//!
//! Numbers are written with 12 significant digits in scientific notation,
//! rows are newline-terminated, and a header row is mandatory, so files from
//! identical configurations diff clean byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use super::CliError;

/// Format a float with 12 significant digits; NaN marks failed cells.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// A CSV table under construction.
pub struct CsvTable {
    buffer: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut buffer = String::new();
        buffer.push_str(&header.join(","));
        buffer.push('\n');
        Self {
            buffer,
            columns: header.len(),
        }
    }

    pub fn push_row(&mut self, fields: &[String]) {
        assert_eq!(
            fields.len(),
            self.columns,
            "row width does not match header"
        );
        let _ = writeln!(self.buffer, "{}", fields.join(","));
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.buffer.as_bytes())?;
        Ok(())
    }
}

/// Strip characters that would break one-line CSV fields.
pub fn sanitize_message(msg: &str) -> String {
    msg.replace([',', '\n'], ";")
}

/// Serialize pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.2), "2.00000000000e-1");
        assert_eq!(format_sig(-4.0), "-4.00000000000e0");
        assert_eq!(format_sig(f64::NAN), "nan");
        assert_eq!(format_sig(12345.6789), "1.23456789000e4");
    }

    #[test]
    fn sanitizer_removes_separators() {
        assert_eq!(sanitize_message("a,b\nc"), "a;b;c");
    }
}
