//! Theta documents: the sentence a construction diagonalizes against.
//!
//! ```json
//! {"kind": "pi2", "members": ["A x. E y. x = y"]}
//! {"kind": "pi3", "clauses": [{"xs": ["x"], "disjuncts": ["E y. true"]}]}
//! {"kind": "builtin", "name": "unsat-at:3"}
//! ```
//!
//! Pi2 members are the conjuncts `∀x̄ ∃ȳ φ`; Pi3 clauses are
//! `∀x̄ ⩖ⱼ ∃ȳ φⱼ` with open disjuncts over `x̄`.

use std::path::Path;

use scottlab_core::constructions::{Pi3Clause, Pi3Theta};
use scottlab_core::formula::{parse, parse_open, Connective, Formula, FormulaFamily};
use scottlab_core::Label;
use serde::{Deserialize, Serialize};

use super::FormatError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseDoc {
    pub xs: Vec<String>,
    pub disjuncts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ThetaDoc {
    Pi2 { members: Vec<String> },
    Pi3 { clauses: Vec<ClauseDoc> },
    Builtin { name: String },
}

#[derive(Clone, Debug)]
pub enum Theta {
    Pi2(FormulaFamily),
    Pi3(Pi3Theta),
}

/// Names accepted by [`builtin_theta`]; `N` is a natural.
pub const BUILTIN_THETAS: &[&str] = &[
    "trivial",
    "unsat-at:N",
    "label-chain",
    "pi3-always-attention",
    "pi3-never-attention",
    "pi3-distinct-witness",
    "pi3-label-avoid",
];

fn pi2(members: &[&str]) -> Theta {
    Theta::Pi2(FormulaFamily::explicit(
        Connective::Conjunctive,
        members.iter().map(|m| parse(m).expect("builtin member")).collect(),
    ))
}

fn pi3_single(disjunct: &str) -> Theta {
    Theta::Pi3(Pi3Theta {
        clauses: vec![Pi3Clause {
            xs: vec!["x".into()],
            disjuncts: FormulaFamily::explicit(
                Connective::Disjunctive,
                vec![parse_open(disjunct).expect("builtin disjunct")],
            ),
        }],
    })
}

pub fn builtin_theta(name: &str) -> Result<Theta, String> {
    const WITNESSED: &str = "A x. E y. x = y";
    Ok(match name {
        "trivial" => pi2(&[WITNESSED]),
        "label-chain" => Theta::Pi2(FormulaFamily::generated(
            Connective::Conjunctive,
            "A x. E y. l<i>(y)",
            |i| {
                let body = Formula::label(Label::ell(i as u64), "y");
                Ok(Formula::forall(&["x"], Formula::exists(&["y"], body)))
            },
        )),
        "pi3-always-attention" => pi3_single("E y. false"),
        "pi3-never-attention" => pi3_single("E y. true"),
        "pi3-distinct-witness" => pi3_single("E y. And{ !x = y, l2(y) }"),
        "pi3-label-avoid" => pi3_single("E y. And{ x = y, !l4(x) }"),
        _ => {
            let n: usize = name
                .strip_prefix("unsat-at:")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| format!("unknown builtin theta {name:?}; known: {}", BUILTIN_THETAS.join(", ")))?;
            let mut members = vec![WITNESSED; n];
            members.push("A x. E y. false");
            pi2(&members)
        }
    })
}

impl ThetaDoc {
    pub fn to_theta(&self, file: &str) -> Result<Theta, FormatError> {
        match self {
            ThetaDoc::Builtin { name } => builtin_theta(name).map_err(|e| FormatError::invalid(file, "name", e)),
            ThetaDoc::Pi2 { members } => {
                let fs = members
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse(m).map_err(|e| FormatError::invalid(file, format!("members[{i}]"), e)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Theta::Pi2(FormulaFamily::explicit(Connective::Conjunctive, fs)))
            }
            ThetaDoc::Pi3 { clauses } => {
                let mut out = Vec::with_capacity(clauses.len());
                for (i, c) in clauses.iter().enumerate() {
                    let ds = c
                        .disjuncts
                        .iter()
                        .enumerate()
                        .map(|(j, d)| {
                            parse_open(d)
                                .map_err(|e| FormatError::invalid(file, format!("clauses[{i}].disjuncts[{j}]"), e))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(Pi3Clause {
                        xs: c.xs.clone(),
                        disjuncts: FormulaFamily::explicit(Connective::Disjunctive, ds),
                    });
                }
                Ok(Theta::Pi3(Pi3Theta { clauses: out }))
            }
        }
    }
}

/// `builtin:NAME`, or a theta document on disk.
pub fn parse_theta_spec(spec: &str) -> Result<Theta, FormatError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_theta(name).map_err(|e| FormatError::invalid(spec, ".", e));
    }
    let doc: ThetaDoc = super::read_json(Path::new(spec))?;
    doc.to_theta(spec)
}
