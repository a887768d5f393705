//! Trace documents: a JSON array of stage records
//! `{"stage", "flag", "acting", "init"?, "A", "B", "n", "k", "T_s"?}`.
//!
//! A requirement is written `[e, i, "b-ids"]` with the tuple `b̄` as
//! comma-separated element ids (`""` for the empty tuple).

use scottlab_core::constructions::{ConstructionTrace, RequirementKey, StageFlag, StageRecord};
use scottlab_core::label::{parse_seq, seq_string};
use scottlab_core::{ElementId, StageStructure};
use serde::{Deserialize, Serialize};

use super::structure::StructureDoc;
use super::FormatError;

pub type KeyDoc = (u32, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDoc {
    pub stage: u64,
    pub flag: String,
    pub acting: Option<KeyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<KeyDoc>,
    #[serde(rename = "A")]
    pub a: StructureDoc,
    #[serde(rename = "B")]
    pub b: Option<StructureDoc>,
    pub n: u64,
    pub k: u64,
    #[serde(rename = "T_s", default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Vec<String>>,
}

pub type TraceDoc = Vec<RecordDoc>;

fn key_doc(k: &RequirementKey) -> KeyDoc {
    let ids: Vec<String> = k.b.iter().map(|id| id.0.to_string()).collect();
    (k.e, k.i, ids.join(","))
}

fn key_from_doc(file: &str, at: &str, d: &KeyDoc) -> Result<RequirementKey, FormatError> {
    let b = if d.2.is_empty() {
        Vec::new()
    } else {
        d.2.split(',')
            .map(|t| t.trim().parse().map(ElementId))
            .collect::<Result<_, _>>()
            .map_err(|_| FormatError::invalid(file, format!("{at}[2]"), format!("malformed id list {:?}", d.2)))?
    };
    Ok(RequirementKey { e: d.0, i: d.1, b })
}

pub fn trace_doc(trace: &ConstructionTrace) -> TraceDoc {
    trace
        .records
        .iter()
        .map(|r| RecordDoc {
            stage: r.stage,
            flag: r.flag.as_str().into(),
            acting: r.acting.as_ref().map(key_doc),
            init: r.init.as_ref().map(key_doc),
            a: StructureDoc::from(&r.a),
            b: r.b.as_ref().map(StructureDoc::from),
            n: r.n,
            k: r.k,
            tree: r.tree.as_ref().map(|ts| ts.iter().map(|s| seq_string(s)).collect()),
        })
        .collect()
}

pub fn trace_from_doc(file: &str, doc: &TraceDoc) -> Result<ConstructionTrace, FormatError> {
    let mut records = Vec::with_capacity(doc.len());
    for (i, r) in doc.iter().enumerate() {
        let at = format!("[{i}]");
        let flag = StageFlag::parse(&r.flag)
            .ok_or_else(|| FormatError::invalid(file, format!("{at}.flag"), format!("unknown flag {:?}", r.flag)))?;
        let tree = match &r.tree {
            None => None,
            Some(ts) => Some(
                ts.iter()
                    .enumerate()
                    .map(|(j, s)| {
                        parse_seq(s).ok_or_else(|| {
                            FormatError::invalid(file, format!("{at}.T_s[{j}]"), format!("malformed sequence {s:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        records.push(StageRecord {
            stage: r.stage,
            flag,
            acting: r.acting.as_ref().map(|k| key_from_doc(file, &format!("{at}.acting"), k)).transpose()?,
            init: r.init.as_ref().map(|k| key_from_doc(file, &format!("{at}.init"), k)).transpose()?,
            a: r.a.to_structure(file, &format!("{at}.A."))?,
            b: r.b.as_ref().map(|b| b.to_structure(file, &format!("{at}.B."))).transpose()?,
            n: r.n,
            k: r.k,
            tree,
        });
    }
    Ok(ConstructionTrace { records })
}

pub fn trace_to_string(trace: &ConstructionTrace) -> String {
    super::to_json_string(&trace_doc(trace))
}

pub fn trace_from_str(file: &str, text: &str) -> Result<ConstructionTrace, FormatError> {
    trace_from_doc(file, &super::from_json_str(file, text)?)
}

pub fn read_trace(path: &std::path::Path) -> Result<ConstructionTrace, FormatError> {
    trace_from_str(&path.display().to_string(), &super::read_text(path)?)
}

/// Companion snapshots written by `bpath`: a JSON array of structures.
pub fn snapshots_to_string(bs: &[StageStructure]) -> String {
    let docs: Vec<StructureDoc> = bs.iter().map(StructureDoc::from).collect();
    super::to_json_string(&docs)
}

pub fn snapshots_from_str(file: &str, text: &str) -> Result<Vec<StageStructure>, FormatError> {
    let docs: Vec<StructureDoc> = super::from_json_str(file, text)?;
    docs.iter()
        .enumerate()
        .map(|(i, d)| d.to_structure(file, &format!("[{i}].")))
        .collect()
}

pub fn read_snapshots(path: &std::path::Path) -> Result<Vec<StageStructure>, FormatError> {
    snapshots_from_str(&path.display().to_string(), &super::read_text(path)?)
}
