//! JSON and text file formats.
//!
//! Every JSON document rejects unknown fields. Decoding errors carry the path
//! of the offending field, e.g. `[3].A.elements[0].labels[2]`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

pub mod formula;
pub mod label;
pub mod structure;
pub mod theta;
pub mod trace;
pub mod tree;

pub use formula::{read_formula, read_formula_text};
pub use label::{label_from_text, label_to_text, JsonLabel};
pub use structure::{ElementDoc, StructureDoc};
pub use theta::{builtin_theta, Theta, ThetaDoc, BUILTIN_THETAS};
pub use trace::{RecordDoc, TraceDoc};
pub use tree::{parse_path_spec, parse_tree_spec, PathDoc, TreeDoc};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{file}: {source}")]
    Io {
        file: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: at {at}: {message}")]
    Json {
        file: String,
        at: String,
        message: String,
    },
    #[error("{file}: at {at}: {message}")]
    Invalid {
        file: String,
        at: String,
        message: String,
    },
}

impl FormatError {
    pub fn invalid(file: &str, at: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Invalid {
            file: file.to_string(),
            at: at.into(),
            message: message.to_string(),
        }
    }

    /// Rewrites the file name of a decoding error.
    pub fn in_file(self, name: &str) -> Self {
        match self {
            FormatError::Json { at, message, .. } => FormatError::Json {
                file: name.to_string(),
                at,
                message,
            },
            FormatError::Invalid { at, message, .. } => FormatError::Invalid {
                file: name.to_string(),
                at,
                message,
            },
            other => other,
        }
    }
}

/// Decodes `text`, reporting the field path on failure.
pub fn from_json_str<T: DeserializeOwned>(name: &str, text: &str) -> Result<T, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| FormatError::Json {
        file: name.to_string(),
        at: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| FormatError::Json {
        file: name.to_string(),
        at: ".".into(),
        message: e.to_string(),
    })?;
    Ok(value)
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        file: path.to_path_buf(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    from_json_str(&path.display().to_string(), &read_text(path)?)
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        file: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    write_text(path, &to_json_string(value))
}
