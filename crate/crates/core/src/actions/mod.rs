//! Circle actions of `Z/2 ∗ Z/3`, stored as lifts of the generator images.

mod construct;
mod random;
mod triple;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use construct::{fuchsian_o23, fuchsian_o23_pl, hat_phi, k_fold_lift, lift_offsets, triangle_action};
pub use random::{random_action, random_conjugator, RandomParams};
pub use triple::{classify_theorem1, rotation_triple, RotationTriple, SemiConjClass, TripleEntry};

use crate::circle::{compose, LiftHomeo, LiftPl, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::rational::{qi, to_f64, Rational1, Scalar, Q};
use crate::words::{Syllable, Word};

/// Grid size used when a relation can only be checked by sampling.
pub const RELATION_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exact rational PL maps and rotations.
    Pl,
    /// Double-precision Möbius lifts.
    Mobius,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Pl => "pl",
            Backend::Mobius => "mobius",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pl" => Ok(Backend::Pl),
            "mobius" => Ok(Backend::Mobius),
            _ => Err(Error::Parse(format!("unknown backend {s:?} (expected pl or mobius)"))),
        }
    }
}

/// An action `φ` given by lifts `ã` of `φ(α)` and `b̃` of `φ(β)` together with
/// their translation numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleAction {
    lift_a: LiftHomeo,
    lift_b: LiftHomeo,
    lift_b_inv: LiftHomeo,
    rot_a: Rational1,
    rot_b: Rational1,
    backend: Backend,
}

impl CircleAction {
    /// Validates `ã² = T_{2 rot_a}` and `b̃³ = T_{3 rot_b}`, exactly on the PL
    /// backend and within [`DEFAULT_THRESHOLD`] on the Möbius backend.
    pub fn new(
        lift_a: LiftHomeo,
        lift_b: LiftHomeo,
        rot_a: Rational1,
        rot_b: Rational1,
        backend: Backend,
    ) -> Result<Self> {
        let ta = rot_a.value() * qi(2);
        let tb = rot_b.value() * qi(3);
        if !ta.is_integer() {
            return Err(Error::InvalidAction(format!("rot_a = {rot_a} is not in {{0, 1/2}}")));
        }
        if !tb.is_integer() {
            return Err(Error::InvalidAction(format!("rot_b = {rot_b} is not in {{0, 1/3, 2/3}}")));
        }
        if backend == Backend::Pl && !(lift_a.is_exact() && lift_b.is_exact()) {
            return Err(Error::InvalidAction("pl backend requires exact lifts".into()));
        }
        let lift_a = lift_a.flattened();
        let lift_b = lift_b.flattened();
        let action = CircleAction { lift_b_inv: lift_b.inverse(), lift_a, lift_b, rot_a, rot_b, backend };
        let (ra, rb) = action.relation_residuals();
        let ok = |r: f64| if backend == Backend::Pl { r == 0.0 } else { r <= DEFAULT_THRESHOLD };
        if !ok(ra) {
            return Err(Error::InvalidAction(format!("a~^2 differs from T_{ta} by {ra:e}")));
        }
        if !ok(rb) {
            return Err(Error::InvalidAction(format!("b~^3 differs from T_{tb} by {rb:e}")));
        }
        Ok(action)
    }

    pub fn lift_a(&self) -> &LiftHomeo {
        &self.lift_a
    }

    pub fn lift_b(&self) -> &LiftHomeo {
        &self.lift_b
    }

    pub fn lift_b_inv(&self) -> &LiftHomeo {
        &self.lift_b_inv
    }

    pub fn rot_a(&self) -> &Rational1 {
        &self.rot_a
    }

    pub fn rot_b(&self) -> &Rational1 {
        &self.rot_b
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_exact(&self) -> bool {
        self.backend == Backend::Pl
    }

    /// Residuals of `ã² = T_{2 rot_a}` and `b̃³ = T_{3 rot_b}`.
    pub fn relation_residuals(&self) -> (f64, f64) {
        let a2 = compose(&self.lift_a, &self.lift_a);
        let b3 = compose(&self.lift_b, &compose(&self.lift_b, &self.lift_b));
        (
            translation_residual(&a2, &(self.rot_a.value() * qi(2))),
            translation_residual(&b3, &(self.rot_b.value() * qi(3))),
        )
    }

    /// Lift assigned to one syllable; `B2` is realized by `b̃⁻¹`.
    pub fn generator(&self, s: Syllable) -> &LiftHomeo {
        match s {
            Syllable::A => &self.lift_a,
            Syllable::B => &self.lift_b,
            Syllable::B2 => &self.lift_b_inv,
        }
    }

    /// The lift of `φ(w)` obtained by substituting generator lifts along `w`.
    pub fn apply(&self, w: &Word) -> LiftHomeo {
        self.apply_syllables(w.syllables())
    }

    /// Like [`apply`](Self::apply) but without normalizing the syllables, so
    /// `[A, A]` gives `ã²` rather than the identity.
    pub fn apply_syllables(&self, syllables: &[Syllable]) -> LiftHomeo {
        syllables.iter().rev().fold(LiftHomeo::identity(), |acc, &s| compose(self.generator(s), &acc))
    }

    /// `φ̃(w)(x)` by chained evaluation, exact whenever the action and `x` are.
    pub fn eval_word(&self, w: &Word, x: &Scalar) -> Scalar {
        w.syllables().iter().rev().fold(x.clone(), |y, &s| self.generator(s).evaluate(&y))
    }

    /// `h ∘ φ ∘ h⁻¹`, with the same translation numbers.
    pub fn conjugate(&self, h: &LiftHomeo) -> Result<CircleAction> {
        let hi = h.inverse();
        let conj = |f: &LiftHomeo| compose(h, &compose(f, &hi));
        let backend = if self.backend == Backend::Pl && h.is_exact() { Backend::Pl } else { Backend::Mobius };
        CircleAction::new(conj(&self.lift_a), conj(&self.lift_b), self.rot_a.clone(), self.rot_b.clone(), backend)
    }

    /// The action `α ↦ ã`, `β ↦ b̃⁻¹ + 1` obtained by precomposing with the
    /// automorphism `α ↦ α, β ↦ β⁻¹`.
    pub fn flip_beta(&self) -> Result<CircleAction> {
        let rot_b = Rational1::from_q(&(qi(1) - self.rot_b.value()));
        let shift = if self.rot_b.value().is_zero() { 0 } else { 1 };
        CircleAction::new(self.lift_a.clone(), self.lift_b_inv.shifted(shift), self.rot_a.clone(), rot_b, self.backend)
    }
}

fn sample_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| i as f64 / n as f64)
}

/// Largest `|f(x) - x - t|` over the line; exact (breakpoint scan) for exact maps,
/// sampled on [`RELATION_SAMPLES`] points otherwise.
pub fn translation_residual(f: &LiftHomeo, t: &Q) -> f64 {
    if let Some(p) = f.to_pl() {
        let (lo, hi) = p.displacement_range();
        let (lo, hi) = (lo - t, hi - t);
        return to_f64(&hi).abs().max(to_f64(&lo).abs());
    }
    let tf = to_f64(t);
    sample_grid(RELATION_SAMPLES).map(|x| (f.eval_f64(x) - x - tf).abs()).fold(0.0, f64::max)
}

/// The integer `m` nearest to the displacement of `f` and the residual of
/// `f = T_m`.
pub fn nearest_integer_translation(f: &LiftHomeo) -> (i64, f64) {
    let m = f.eval_f64(0.0).round().to_i64().unwrap_or(0);
    (m, translation_residual(f, &qi(m)))
}

/// Largest circle distance between `f(x)` and `x` over `samples` grid points:
/// zero exactly when `f` projects to the identity of the circle.
pub fn distance_from_identity(f: &LiftHomeo, samples: usize) -> f64 {
    sample_grid(samples)
        .map(|x| {
            let d = f.eval_f64(x) - x;
            (d - d.round()).abs()
        })
        .fold(0.0, f64::max)
}

/// Exact PL lift as a `LiftHomeo`, collapsing translations.
pub(crate) fn pl_homeo(p: LiftPl) -> LiftHomeo {
    match p.as_translation() {
        Some(t) => LiftHomeo::rotation(t),
        None => LiftHomeo::Pl(p),
    }
}
