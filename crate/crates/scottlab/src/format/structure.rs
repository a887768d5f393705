//! Structure documents:
//! `{"stage": s, "elements": [{"id", "sort", "status", "labels", "name"?}]}`.
//!
//! `status` is `"active"`, `"pending"` or `"dup:<id>"`; the optional `name`
//! is the designation of an active element (`"a(3)"`, `"b(0.1)"`, `"c"`).

use std::collections::BTreeSet;

use scottlab_core::{Designation, ElementId, ElementRecord, Label, StageStructure, Status};
use serde::{Deserialize, Serialize};

use super::label::JsonLabel;
use super::FormatError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub stage: u64,
    pub elements: Vec<ElementDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub id: u64,
    pub sort: u32,
    pub status: String,
    pub labels: Vec<JsonLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl From<&StageStructure> for StructureDoc {
    fn from(s: &StageStructure) -> Self {
        StructureDoc {
            stage: s.stage,
            elements: s
                .elements
                .iter()
                .map(|e| ElementDoc {
                    id: e.id.0,
                    sort: e.sort,
                    status: match &e.status {
                        Status::Active(_) => "active".into(),
                        Status::PendingDuplicate => "pending".into(),
                        Status::DuplicateOf(t) => format!("dup:{}", t.0),
                    },
                    labels: e.labels.iter().cloned().map(JsonLabel).collect(),
                    name: e.status.designation().map(ToString::to_string),
                })
                .collect(),
        }
    }
}

impl StructureDoc {
    /// Converts and validates; `at` prefixes the field paths in errors.
    pub fn to_structure(&self, file: &str, at: &str) -> Result<StageStructure, FormatError> {
        let mut elements = Vec::with_capacity(self.elements.len());
        for (i, e) in self.elements.iter().enumerate() {
            let here = format!("{at}elements[{i}]");
            let designation = match &e.name {
                None => None,
                Some(n) => Some(Designation::parse(n).ok_or_else(|| {
                    FormatError::invalid(file, format!("{here}.name"), format!("malformed designation {n:?}"))
                })?),
            };
            let status = match e.status.as_str() {
                "active" => Status::Active(designation),
                other => {
                    if designation.is_some() {
                        return Err(FormatError::invalid(file, format!("{here}.name"), "only active elements carry a name"));
                    }
                    match other {
                        "pending" => Status::PendingDuplicate,
                        _ => {
                            let target = other
                                .strip_prefix("dup:")
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| {
                                    FormatError::invalid(file, format!("{here}.status"), format!("unknown status {other:?}"))
                                })?;
                            Status::DuplicateOf(ElementId(target))
                        }
                    }
                }
            };
            let labels: BTreeSet<Label> = e.labels.iter().map(|l| l.0.clone()).collect();
            if labels.len() != e.labels.len() {
                return Err(FormatError::invalid(file, format!("{here}.labels"), "repeated label"));
            }
            elements.push(ElementRecord {
                id: ElementId(e.id),
                sort: e.sort,
                labels,
                status,
            });
        }
        let s = StageStructure {
            stage: self.stage,
            elements,
        };
        s.validate()
            .map_err(|err| FormatError::invalid(file, format!("{at}elements"), err))?;
        Ok(s)
    }
}

pub fn structure_from_str(file: &str, text: &str) -> Result<StageStructure, FormatError> {
    super::from_json_str::<StructureDoc>(file, text)?.to_structure(file, "")
}

pub fn read_structure(path: &std::path::Path) -> Result<StageStructure, FormatError> {
    structure_from_str(&path.display().to_string(), &super::read_text(path)?)
}

pub fn structure_to_string(s: &StageStructure) -> String {
    super::to_json_string(&StructureDoc::from(s))
}
