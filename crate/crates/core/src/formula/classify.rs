use core::fmt;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Sigma,
    Pi,
    /// Quantifier-free.
    Delta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Classification {
    pub kind: Kind,
    pub level: u32,
}

impl Classification {
    pub fn new(kind: Kind, level: u32) -> Self {
        Classification { kind, level }
    }

    /// True when a formula of this class is also Σₙ.
    pub fn is_sigma_at_most(&self, n: u32) -> bool {
        match self.kind {
            Kind::Delta => true,
            Kind::Sigma => self.level <= n,
            Kind::Pi => self.level < n,
        }
    }

    /// True when a formula of this class is also Πₙ.
    pub fn is_pi_at_most(&self, n: u32) -> bool {
        match self.kind {
            Kind::Delta => true,
            Kind::Pi => self.level <= n,
            Kind::Sigma => self.level < n,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Sigma => write!(f, "Sigma{}", self.level),
            Kind::Pi => write!(f, "Pi{}", self.level),
            Kind::Delta => write!(f, "Delta{}", self.level),
        }
    }
}

/// Least `n` with `f ∈ Σₙ` and least `n` with `f ∈ Πₙ`.
fn levels(f: &Formula) -> (u32, u32) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NotAtom(_) => (0, 0),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().map(levels).fold((0, 0), |(s, p), (a, b)| {
            (s.max(a), p.max(b))
        }),
        Formula::Exists(_, b) => {
            let (s, p) = levels(b);
            let sig = s.min(p + 1).max(1);
            (sig, sig + 1)
        }
        Formula::Forall(_, b) => {
            let (s, p) = levels(b);
            let pi = p.min(s + 1).max(1);
            (pi + 1, pi)
        }
    }
}

/// Minimal Σₙ/Πₙ class. When a formula sits at the same least level on both
/// sides, a conjunction is reported as Π and a disjunction as Σ.
pub fn classify(f: &Formula) -> Classification {
    let (s, p) = levels(f);
    if s == 0 && p == 0 {
        return Classification::new(Kind::Delta, 0);
    }
    if s < p {
        Classification::new(Kind::Sigma, s)
    } else if p < s {
        Classification::new(Kind::Pi, p)
    } else if matches!(f, Formula::Or(_)) {
        Classification::new(Kind::Sigma, s)
    } else {
        Classification::new(Kind::Pi, p)
    }
}
