//! Normal forms in `Z/2 ∗ Z/3 = ⟨α, β | α² = β³ = 1⟩`.
//!
//! A word alternates between the factors: `A = α`, `B = β`, `B2 = β² = β⁻¹`.
//! The text form uses `a`, `b`, `B` for the three syllables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    A,
    B,
    B2,
}

impl Syllable {
    pub fn inverse(self) -> Self {
        match self {
            Syllable::A => Syllable::A,
            Syllable::B => Syllable::B2,
            Syllable::B2 => Syllable::B,
        }
    }

    fn is_alpha(self) -> bool {
        self == Syllable::A
    }

    pub fn token(self) -> char {
        match self {
            Syllable::A => 'a',
            Syllable::B => 'b',
            Syllable::B2 => 'B',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Syllable>);

/// Appends `s`, applying `α² = 1` and `β³ = 1` at the junction.
fn push_reduced(v: &mut Vec<Syllable>, s: Syllable) {
    use Syllable::*;
    match (v.last().copied(), s) {
        (Some(A), A) | (Some(B), B2) | (Some(B2), B) => {
            v.pop();
        }
        (Some(B), B) => *v.last_mut().unwrap() = B2,
        (Some(B2), B2) => *v.last_mut().unwrap() = B,
        _ => v.push(s),
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn alpha() -> Self {
        Word(vec![Syllable::A])
    }

    pub fn beta() -> Self {
        Word(vec![Syllable::B])
    }

    /// Normal form of an arbitrary product of syllables.
    pub fn from_syllables(syllables: impl IntoIterator<Item = Syllable>) -> Self {
        let mut v = Vec::new();
        for s in syllables {
            push_reduced(&mut v, s);
        }
        Word(v)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        for &s in &other.0 {
            push_reduced(&mut v, s);
        }
        Word(v)
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    pub fn pow(&self, n: u32) -> Word {
        (0..n).fold(Word::identity(), |acc, _| acc.multiply(self))
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.multiply(self).multiply(&g.invert())
    }

    /// Image under the automorphism `α ↦ α, β ↦ β⁻¹`.
    pub fn flip_beta(&self) -> Word {
        Word(self.0.iter().map(|s| if s.is_alpha() { *s } else { s.inverse() }).collect())
    }

    pub fn classify_conjugacy(&self) -> ConjClass {
        classify_conjugacy(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.token())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a token string over `a`, `b`, `B` and normalizes it.
    fn from_str(s: &str) -> Result<Self> {
        let syl = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'a' => Ok(Syllable::A),
                'b' => Ok(Syllable::B),
                'B' => Ok(Syllable::B2),
                other => Err(Error::Parse(format!("unexpected token {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_syllables(syl))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conjugacy class of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "class", content = "form")]
pub enum ConjClass {
    Identity,
    PowerOfAlpha,
    /// Conjugate to `β^e`, `e ∈ {1, 2}`.
    PowerOfBeta(u8),
    /// Infinite order; holds the lexicographically least cyclic rotation of the
    /// cyclically reduced form, which starts with `A`.
    Hyperbolic(Word),
}

/// Cyclically reduced conjugate of `w`.
pub fn cyclic_reduction(w: &Word) -> Word {
    let mut v = w.0.clone();
    while v.len() >= 2 && v[0].is_alpha() == v[v.len() - 1].is_alpha() {
        let first = v.remove(0);
        push_reduced(&mut v, first);
    }
    Word(v)
}

pub fn classify_conjugacy(w: &Word) -> ConjClass {
    let r = cyclic_reduction(w);
    match r.0.as_slice() {
        [] => ConjClass::Identity,
        [Syllable::A] => ConjClass::PowerOfAlpha,
        [Syllable::B] => ConjClass::PowerOfBeta(1),
        [Syllable::B2] => ConjClass::PowerOfBeta(2),
        v => {
            let n = v.len();
            let best =
                (0..n).map(|k| v[k..].iter().chain(&v[..k]).copied().collect::<Vec<_>>()).min().expect("nonempty");
            ConjClass::Hyperbolic(Word(best))
        }
    }
}

/// Number of normal-form words with exactly `n` syllables.
pub fn count_words(n: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    // Starting with A: ⌊n/2⌋ β-syllables; starting with β: ⌈n/2⌉.
    (1u64 << (n / 2)) + (1u64 << n.div_ceil(2))
}

fn words_of_length(n: usize) -> Vec<Word> {
    fn extend(prefix: &mut Vec<Syllable>, n: usize, out: &mut Vec<Word>) {
        if prefix.len() == n {
            out.push(Word(prefix.clone()));
            return;
        }
        for s in [Syllable::A, Syllable::B, Syllable::B2] {
            if let Some(&last) = prefix.last() {
                if last.is_alpha() == s.is_alpha() {
                    continue;
                }
            }
            prefix.push(s);
            extend(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// Every nontrivial normal-form word with at most `max_syllables` syllables,
/// breadth-first by length and lexicographic (`A < B < B²`) within a length.
pub fn enumerate(max_syllables: usize) -> Result<impl Iterator<Item = Word>> {
    if max_syllables == 0 {
        return Err(Error::Precondition("max_syllables must be >= 1".into()));
    }
    Ok((1..=max_syllables).flat_map(words_of_length))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn relations() {
        assert!(w("a").multiply(&w("a")).is_identity());
        assert!(w("b").multiply(&w("B")).is_identity());
        assert_eq!(w("ab").multiply(&w("ab")), w("abab"));
        assert_eq!(w("ab").multiply(&w("ab")).len(), 4);
        assert_eq!(w("bb"), w("B"));
        assert!(w("bbb").is_identity());
    }

    #[test]
    fn inverses() {
        assert_eq!(w("a").invert(), w("a"));
        assert_eq!(w("b").invert(), w("B"));
        assert_eq!(w("abaB").invert(), w("baBa"));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_conjugacy(&w("baB")), ConjClass::PowerOfAlpha);
        assert_eq!(classify_conjugacy(&w("ab")), ConjClass::Hyperbolic(w("ab")));
        assert_eq!(classify_conjugacy(&w("")), ConjClass::Identity);
        assert_eq!(classify_conjugacy(&w("abab")), ConjClass::Hyperbolic(w("abab")));
        assert_eq!(classify_conjugacy(&w("aba")), ConjClass::PowerOfBeta(1));
        assert_eq!(classify_conjugacy(&w("aBa")), ConjClass::PowerOfBeta(2));
        assert_eq!(classify_conjugacy(&w("ba")), ConjClass::Hyperbolic(w("ab")));
    }

    #[test]
    fn enumeration_small_cases() {
        let one: Vec<String> = enumerate(1).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(one, ["a", "b", "B"]);
        let two: Vec<String> = enumerate(2).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(two, ["a", "b", "B", "ab", "aB", "ba", "Ba"]);
        assert!(enumerate(0).is_err());
    }

    #[test]
    fn enumeration_counts_follow_recurrence() {
        for n in 1..=12 {
            let got = enumerate(n).unwrap().filter(|w| w.len() == n).count() as u64;
            assert_eq!(got, count_words(n));
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("abc".parse::<Word>().is_err());
    }
}
