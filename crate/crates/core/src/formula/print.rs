use core::fmt;

use super::{Atom, Formula};

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Label(l, v) => write!(f, "{l}({v})"),
            Atom::Eq(x, y) => write!(f, "{x} = {y}"),
        }
    }
}

/// Prints in the text syntax accepted by [`super::parse`]. Nested quantifiers
/// of the same kind are merged into one block: `E x, y. φ`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NotAtom(a) => write!(f, "!{a}"),
            Formula::And(fs) => write_list(f, "And", fs),
            Formula::Or(fs) => write_list(f, "Or", fs),
            Formula::Exists(..) => {
                let (vars, body) = self.exists_prefix();
                write_block(f, "E", &vars, body)
            }
            Formula::Forall(..) => {
                let (vars, body) = self.forall_prefix();
                write_block(f, "A", &vars, body)
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, fs: &[Formula]) -> fmt::Result {
    if fs.is_empty() {
        return write!(f, "{head}{{}}");
    }
    write!(f, "{head}{{ ")?;
    for (i, g) in fs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{g}")?;
    }
    f.write_str(" }")
}

fn write_block(f: &mut fmt::Formatter<'_>, q: &str, vars: &[&str], body: &Formula) -> fmt::Result {
    write!(f, "{q} ")?;
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(v)?;
    }
    write!(f, ". {body}")
}
