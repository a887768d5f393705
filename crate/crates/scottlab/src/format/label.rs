//! Label spelling inside JSON documents: `u(0)`, `l(3)`, `ld(2)`,
//! `l(0.1.4)`, `l(0.)` for the one-element sequence, `l(eps)`, `cls(2)`.

use std::fmt;

use scottlab_core::structure::{index_text, parse_index};
use scottlab_core::Label;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

pub fn label_to_text(l: &Label) -> String {
    match l {
        Label::Sort(e) => format!("u({e})"),
        Label::Ell(i) => format!("l({})", index_text(i)),
        Label::EllDagger(i) => format!("ld({})", index_text(i)),
        Label::Class(c) => format!("cls({c})"),
    }
}

pub fn label_from_text(text: &str) -> Result<Label, String> {
    let bad = || format!("malformed label {text:?}");
    let (head, rest) = text.split_once('(').ok_or_else(bad)?;
    let inner = rest.strip_suffix(')').ok_or_else(bad)?;
    let nat = |s: &str| -> Result<u32, String> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match head {
        "u" => Ok(Label::Sort(nat(inner)?)),
        "cls" => Ok(Label::Class(nat(inner)?)),
        "l" => parse_index(inner).map(Label::Ell).ok_or_else(bad),
        "ld" => parse_index(inner).map(Label::EllDagger).ok_or_else(bad),
        _ => Err(bad()),
    }
}

/// A label serialized as its JSON spelling.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonLabel(pub Label);

impl Serialize for JsonLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&label_to_text(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonLabel;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a label such as \"l(3)\" or \"ld(0.1)\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonLabel, E> {
                label_from_text(v).map(JsonLabel).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spellings_round_trip() {
        let cases = [
            ("u(0)", Label::Sort(0)),
            ("l(3)", Label::ell(3)),
            ("ld(2)", Label::dagger(2)),
            ("l(0.1.4)", Label::ell_seq(&[0, 1, 4])),
            ("l(0.)", Label::ell_seq(&[0])),
            ("ld(eps)", Label::dagger_seq(&[])),
            ("cls(2)", Label::Class(2)),
        ];
        for (text, label) in cases {
            assert_eq!(label_to_text(&label), text);
            assert_eq!(label_from_text(text).unwrap(), label);
        }
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["l3", "l()", "x(1)", "u(eps)", "l(1..2)", "cls(-1)", "l(3"] {
            assert!(label_from_text(bad).is_err(), "{bad}");
        }
    }
}
