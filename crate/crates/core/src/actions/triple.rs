use std::fmt;

use serde::{Serialize, Serializer};

use super::CircleAction;
use crate::circle::{detect_rational_rotation, translation_number_enclosure, Enclosure};
use crate::error::{Error, Result};
use crate::rational::Rational1;
use crate::words::Word;

/// One rotation number: exact, or only enclosed (as a translation number).
#[derive(Clone, Debug, PartialEq)]
pub enum TripleEntry {
    Exact(Rational1),
    Enclosure(Enclosure),
}

impl TripleEntry {
    pub fn is_exact(&self) -> bool {
        matches!(self, TripleEntry::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational1> {
        match self {
            TripleEntry::Exact(r) => Some(r),
            TripleEntry::Enclosure(_) => None,
        }
    }
}

impl fmt::Display for TripleEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleEntry::Exact(r) => write!(f, "{r}"),
            TripleEntry::Enclosure(e) => write!(f, "{e}"),
        }
    }
}

impl Serialize for TripleEntry {
    /// Exact entries become `"p/q"`; enclosures become `{"lo": …, "hi": …}`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TripleEntry::Exact(r) => r.serialize(s),
            TripleEntry::Enclosure(e) => e.serialize(s),
        }
    }
}

/// `(rot φ(α), rot φ(β), rot φ(αβ))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationTriple {
    pub ra: TripleEntry,
    pub rb: TripleEntry,
    pub rab: TripleEntry,
}

impl RotationTriple {
    pub fn exact(ra: Rational1, rb: Rational1, rab: Rational1) -> Self {
        RotationTriple { ra: TripleEntry::Exact(ra), rb: TripleEntry::Exact(rb), rab: TripleEntry::Exact(rab) }
    }

    /// Shorthand for tests and menus: `RotationTriple::of((1,2), (1,3), (0,1))`.
    pub fn of(ra: (i64, i64), rb: (i64, i64), rab: (i64, i64)) -> Self {
        Self::exact(Rational1::new(ra.0, ra.1), Rational1::new(rb.0, rb.1), Rational1::new(rab.0, rab.1))
    }

    pub fn as_exact(&self) -> Option<(&Rational1, &Rational1, &Rational1)> {
        Some((self.ra.exact()?, self.rb.exact()?, self.rab.exact()?))
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }
}

impl fmt::Display for RotationTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.ra, self.rb, self.rab)
    }
}

impl std::str::FromStr for RotationTriple {
    type Err = Error;

    /// Parses `"1/2,1/3,0"`, optionally parenthesized.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::Parse(format!("expected three rationals, got {s:?}")));
        };
        Ok(RotationTriple::exact(a.parse()?, b.parse()?, c.parse()?))
    }
}

/// `ra`, `rb` from the declared data; `rab` from a periodic point of `φ̃(ab)`
/// with period at most `q_max`, else an enclosure after `n_iters` iterations.
pub fn rotation_triple(phi: &CircleAction, q_max: i64, n_iters: u64) -> Result<RotationTriple> {
    let ab = phi.apply(&Word::from_syllables([crate::words::Syllable::A, crate::words::Syllable::B]));
    let rab = match detect_rational_rotation(&ab, q_max)? {
        Some(w) => TripleEntry::Exact(w.rot),
        None => TripleEntry::Enclosure(translation_number_enclosure(&ab, n_iters.max(1), 8)),
    };
    Ok(RotationTriple { ra: TripleEntry::Exact(phi.rot_a().clone()), rb: TripleEntry::Exact(phi.rot_b().clone()), rab })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "triple")]
pub enum SemiConjClass {
    FuchsianO23,
    FiveFoldLift,
    /// The classification theorem says nothing about this triple.
    Unclassified(String),
}

impl fmt::Display for SemiConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiConjClass::FuchsianO23 => f.write_str("FuchsianO23"),
            SemiConjClass::FiveFoldLift => f.write_str("FiveFoldLift"),
            SemiConjClass::Unclassified(t) => write!(f, "Unclassified{t}"),
        }
    }
}

pub fn classify_theorem1(t: &RotationTriple) -> Result<SemiConjClass> {
    let (ra, rb, rab) = t.as_exact().ok_or_else(|| Error::NonExactTriple(t.to_string()))?;
    let is = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| {
        *ra == Rational1::new(a.0, a.1) && *rb == Rational1::new(b.0, b.1) && *rab == Rational1::new(c.0, c.1)
    };
    Ok(if is((1, 2), (1, 3), (0, 1)) {
        SemiConjClass::FuchsianO23
    } else if is((1, 2), (2, 3), (1, 5)) {
        SemiConjClass::FiveFoldLift
    } else {
        SemiConjClass::Unclassified(t.to_string())
    })
}
