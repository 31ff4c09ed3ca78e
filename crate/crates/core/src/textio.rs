//! Helpers for the line-oriented text formats used by datasets and codebooks.
//!
//! Floats are written with 17 significant digits so every `f64` round-trips
//! bit-exactly; complex entries are written as `re:im` pairs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 17 significant digits: lossless decimal form of an f64.
pub fn fmt_f64_exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// 10 significant digits, used for result tables.
pub fn fmt_f64_short(x: f64) -> String {
    format!("{x:.9e}")
}

pub(crate) fn fmt_complex_exact(z: Complex64) -> String {
    format!("{}:{}", fmt_f64_exact(z.re), fmt_f64_exact(z.im))
}

pub(crate) fn parse_f64(token: &str, line: usize, what: &str) -> Result<f64> {
    let value: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: invalid float `{token}`")))?;
    if !value.is_finite() {
        return Err(Error::parse(line, format!("{what}: non-finite value")));
    }
    Ok(value)
}

pub(crate) fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: invalid integer `{token}`")))
}

pub(crate) fn parse_u64(token: &str, line: usize, what: &str) -> Result<u64> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: invalid integer `{token}`")))
}

pub(crate) fn parse_complex(token: &str, line: usize, what: &str) -> Result<Complex64> {
    let (re, im) = token
        .split_once(':')
        .ok_or_else(|| Error::parse(line, format!("{what}: expected `re:im`, got `{token}`")))?;
    Ok(Complex64::new(
        parse_f64(re, line, what)?,
        parse_f64(im, line, what)?,
    ))
}

/// Iterates over meaningful lines of a text payload, skipping `#` comment
/// lines while keeping 1-based physical line numbers for error reporting.
pub(crate) struct LineCursor<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> LineCursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines(),
            line_no: 0,
        }
    }

    /// Next non-comment line, or `None` at end of input.
    pub(crate) fn next_line(&mut self) -> Option<(usize, &'a str)> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            if line.trim_start().starts_with('#') {
                continue;
            }
            return Some((self.line_no, line));
        }
    }

    /// Next non-comment line, erroring with `what` if the input ends first.
    pub(crate) fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_line()
            .ok_or_else(|| Error::parse(self.line_no + 1, format!("unexpected end of file: expected {what}")))
    }

    /// Errors if any non-comment, non-empty line remains.
    pub(crate) fn expect_end(&mut self) -> Result<()> {
        while let Some((no, line)) = self.next_line() {
            if !line.trim().is_empty() {
                return Err(Error::parse(no, "unexpected trailing content".to_string()));
            }
        }
        Ok(())
    }
}
