//! Unary labels carried by the elements of a bouquet structure.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Index of an `ℓ` / `ℓ†` label: a natural number (warm-up and Π₃
/// constructions) or a finite sequence of naturals (tree construction).
///
/// The two namespaces never collide: `Nat(0)` and `Seq([0])` are different
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelIndex {
    Nat(u64),
    Seq(Vec<u32>),
}

impl LabelIndex {
    pub fn root() -> Self {
        LabelIndex::Seq(Vec::new())
    }

    pub fn as_seq(&self) -> Option<&[u32]> {
        match self {
            LabelIndex::Seq(s) => Some(s),
            LabelIndex::Nat(_) => None,
        }
    }

    /// Writes the index the way it appears after a label prefix in formula
    /// text: `3`, `(0.1)`, `(eps)`.
    fn fmt_formula(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelIndex::Nat(n) => write!(f, "{n}"),
            LabelIndex::Seq(s) => write!(f, "({})", SeqText(s)),
        }
    }
}

/// A unary label.
///
/// `Class` is reserved for the copy tags of [`crate::structure::omega_power`]
/// and never produced by a construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Sort(u32),
    Ell(LabelIndex),
    EllDagger(LabelIndex),
    Class(u32),
}

impl Label {
    pub fn ell(n: u64) -> Self {
        Label::Ell(LabelIndex::Nat(n))
    }

    pub fn dagger(n: u64) -> Self {
        Label::EllDagger(LabelIndex::Nat(n))
    }

    pub fn ell_seq(s: &[u32]) -> Self {
        Label::Ell(LabelIndex::Seq(s.to_vec()))
    }

    pub fn dagger_seq(s: &[u32]) -> Self {
        Label::EllDagger(LabelIndex::Seq(s.to_vec()))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Label::Sort(_))
    }
}

/// Formula-grammar spelling: `u0`, `l3`, `ld(0.1)`, `l(eps)`, `cls2`.
impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Sort(e) => write!(f, "u{e}"),
            Label::Ell(i) => {
                f.write_str("l")?;
                i.fmt_formula(f)
            }
            Label::EllDagger(i) => {
                f.write_str("ld")?;
                i.fmt_formula(f)
            }
            Label::Class(c) => write!(f, "cls{c}"),
        }
    }
}

/// Dot-separated rendering of a sequence; the empty sequence is `eps`.
pub struct SeqText<'a>(pub &'a [u32]);

impl fmt::Display for SeqText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Parses `eps` or a dot-separated list of naturals.
pub fn parse_seq(text: &str) -> Option<Vec<u32>> {
    if text == "eps" {
        return Some(Vec::new());
    }
    text.split('.').map(parse_nat_u32).collect()
}

fn parse_nat_u32(text: &str) -> Option<u32> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

pub fn seq_string(s: &[u32]) -> String {
    use alloc::string::ToString;
    SeqText(s).to_string()
}

/// `prefix ⪯ seq`.
pub fn is_prefix(prefix: &[u32], seq: &[u32]) -> bool {
    prefix.len() <= seq.len() && seq[..prefix.len()] == *prefix
}

/// Neither sequence extends the other.
pub fn incompatible(a: &[u32], b: &[u32]) -> bool {
    !is_prefix(a, b) && !is_prefix(b, a)
}
