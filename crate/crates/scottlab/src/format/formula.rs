//! Formula files: one sentence in the text syntax, possibly over several
//! lines. Lines starting with `#` are comments.

use std::path::Path;

use scottlab_core::formula::{parse, Formula};

use super::FormatError;

pub fn read_formula_text(file: &str, text: &str) -> Result<Formula, FormatError> {
    let body: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect();
    parse(&body.join("\n")).map_err(|e| FormatError::invalid(file, ".", e))
}

pub fn read_formula(path: &Path) -> Result<Formula, FormatError> {
    read_formula_text(&path.display().to_string(), &super::read_text(path)?)
}
