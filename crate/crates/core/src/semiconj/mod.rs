//! Semi-conjugacy machinery: monotone maps, the interval-trapping certificate
//! for the Fuchsian class, path witnesses, and the Markov certificate and
//! period-five map for the five-fold class.

mod case1;
mod case2;
mod path;
mod theta;

use num_traits::ToPrimitive;
use serde::Serialize;

pub use case1::{certify_case1, find_x0_case1, Case1Certificate, Case1Options, WordVerdict};
pub use case2::{build_markov, find_x0_case2, verify_lemma_ineq, IneqReport, MarkovCertificate, MarkovInterval};
pub use path::{normalize_case1, path_witness};
pub use theta::{build_theta, ThetaMap, ThetaOptions};

use crate::actions::CircleAction;
use crate::circle::PeriodicPl;
use crate::error::Result;
use crate::rational::{circle_distance, Scalar, Q};
use crate::words::Word;

/// Name of the boundary chart recorded in Möbius certificates.
pub const CHART: &str = "t -> tan(pi (t - 1/2))";

/// One checked clause of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Clause {
    pub(crate) fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Clause { name: name.into(), pass, detail: detail.into() }
    }

    /// `Err(CertificateFailure)` for a failing clause.
    pub(crate) fn require(self) -> Result<Clause> {
        if self.pass {
            Ok(self)
        } else {
            Err(crate::Error::CertificateFailure { clause: self.name, detail: self.detail })
        }
    }
}

/// `a ≤ b`; exact when both are, otherwise up to `thr`.
pub(crate) fn le(a: &Scalar, b: &Scalar, thr: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(a), Scalar::Exact(b)) => a <= b,
        _ => a.to_f64() <= b.to_f64() + thr,
    }
}

/// `a < b`; exact when both are, otherwise with margin larger than `thr`.
pub(crate) fn lt(a: &Scalar, b: &Scalar, thr: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(a), Scalar::Exact(b)) => a < b,
        _ => a.to_f64() < b.to_f64() - thr,
    }
}

pub(crate) fn eq(a: &Scalar, b: &Scalar, thr: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
        _ => (a.to_f64() - b.to_f64()).abs() <= thr,
    }
}

/// `⌈a − b⌉`, computed with a tolerance of `thr` for floats.
fn ceil_diff(a: &Scalar, b: &Scalar, thr: f64) -> i64 {
    match (a, b) {
        (Scalar::Exact(a), Scalar::Exact(b)) => (a - b).ceil().to_integer().to_i64().expect("small shift"),
        _ => (a.to_f64() - b.to_f64() - thr).ceil() as i64,
    }
}

fn round_diff(a: &Scalar, b: &Scalar) -> i64 {
    match (a, b) {
        (Scalar::Exact(a), Scalar::Exact(b)) => (a - b).round().to_integer().to_i64().expect("small shift"),
        _ => (a.to_f64() - b.to_f64()).round() as i64,
    }
}

/// A closed arc of the circle given by a lift `[lo, hi]` with `hi − lo < 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Arc {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Arc {
    pub fn new(lo: Scalar, hi: Scalar) -> Self {
        Arc { lo, hi }
    }

    pub fn image(&self, f: impl Fn(&Scalar) -> Scalar) -> Arc {
        Arc { lo: f(&self.lo), hi: f(&self.hi) }
    }

    pub fn shifted(&self, n: i64) -> Arc {
        Arc { lo: self.lo.add_int(n), hi: self.hi.add_int(n) }
    }

    /// The integer `n` with `self + n ⊂ other` on the line, if the arcs are
    /// nested on the circle.
    pub fn within(&self, other: &Arc, thr: f64) -> Option<i64> {
        let n = ceil_diff(&other.lo, &self.lo, thr);
        let s = self.shifted(n);
        (le(&other.lo, &s.lo, thr) && le(&s.hi, &other.hi, thr)).then_some(n)
    }

    /// The integer `n` with `self + n = other`, if the arcs coincide on the circle.
    pub fn equals(&self, other: &Arc, thr: f64) -> Option<i64> {
        let n = round_diff(&other.lo, &self.lo);
        let s = self.shifted(n);
        (eq(&s.lo, &other.lo, thr) && eq(&s.hi, &other.hi, thr)).then_some(n)
    }
}

impl std::fmt::Display for Arc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo.render(), self.hi.render())
    }
}

/// A degree-one monotone map: a nondecreasing PL lift commuting with `T_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneMap(PeriodicPl);

impl MonotoneMap {
    /// Breakpoints `(x, y)` with `x` in `[0, 1)`; flat pieces allowed.
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        Ok(MonotoneMap(PeriodicPl::new(points, false)?))
    }

    pub fn from_any_points(points: Vec<(Q, Q)>) -> Result<Self> {
        Ok(MonotoneMap(PeriodicPl::from_any_points(points, false)?))
    }

    pub fn identity() -> Self {
        MonotoneMap(
            PeriodicPl::new(vec![(Q::from_integer(0.into()), Q::from_integer(0.into()))], false).expect("identity"),
        )
    }

    pub fn from_lift(f: &crate::circle::LiftPl) -> Self {
        MonotoneMap(f.inner().clone())
    }

    pub fn inner(&self) -> &PeriodicPl {
        &self.0
    }

    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        match x {
            Scalar::Exact(q) => Scalar::Exact(self.0.eval(q)),
            Scalar::Float(v) => Scalar::Float(self.0.eval_f64(*v)),
        }
    }
}

/// Largest circle distance between `h(φ₁(γ)(x))` and `φ₂(γ)(h(x))` over the
/// words and `sample_count` grid points of `[0, 1)`.
pub fn check_semiconjugacy(
    h: &MonotoneMap,
    phi1: &CircleAction,
    phi2: &CircleAction,
    words: &[Word],
    sample_count: usize,
) -> f64 {
    let exact = phi1.is_exact() && phi2.is_exact();
    let n = sample_count.max(1) as i64;
    let point = |i: i64| {
        if exact {
            Scalar::Exact(crate::rational::q(i, n))
        } else {
            Scalar::Float(i as f64 / n as f64)
        }
    };
    words
        .iter()
        .flat_map(|w| (0..n).map(move |i| (w, i)))
        .map(|(w, i)| {
            let x = point(i);
            let lhs = h.evaluate(&phi1.eval_word(w, &x));
            let rhs = phi2.eval_word(w, &h.evaluate(&x));
            circle_distance(&lhs, &rhs)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{fuchsian_o23, fuchsian_o23_pl, random_conjugator};
    use crate::circle::LiftHomeo;
    use crate::rational::q;
    use crate::words::enumerate;
    use rand::SeedableRng;

    #[test]
    fn arc_nesting_mod_one() {
        let ex = |a, b, c, d| Arc::new(Scalar::Exact(q(a, b)), Scalar::Exact(q(c, d)));
        assert_eq!(ex(5, 4, 3, 2).within(&ex(1, 8, 7, 8), 0.0), Some(-1));
        assert_eq!(ex(1, 4, 1, 2).within(&ex(1, 4, 1, 2), 0.0), Some(0));
        assert_eq!(ex(1, 8, 1, 2).within(&ex(1, 4, 1, 2), 0.0), None);
        assert_eq!(ex(9, 4, 5, 2).equals(&ex(1, 4, 1, 2), 0.0), Some(-2));
    }

    #[test]
    fn identity_semiconjugacy_has_zero_residual() {
        let words: Vec<Word> = enumerate(4).unwrap().collect();
        let phi = fuchsian_o23_pl();
        assert_eq!(check_semiconjugacy(&MonotoneMap::identity(), &phi, &phi, &words, 16), 0.0);
    }

    #[test]
    fn conjugator_inverse_is_exact_semiconjugacy() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = random_conjugator(&mut rng, 5, 16, 16);
        let phi2 = fuchsian_o23_pl();
        let phi1 = phi2.conjugate(&LiftHomeo::Pl(g.clone())).unwrap();
        let h = MonotoneMap::from_lift(&g.inverse());
        let words: Vec<Word> = enumerate(4).unwrap().collect();
        assert_eq!(check_semiconjugacy(&h, &phi1, &phi2, &words, 16), 0.0);
    }

    #[test]
    fn rotation_is_not_equivariant() {
        let h = MonotoneMap::new(vec![(q(0, 1), q(1, 7))]).unwrap();
        let phi = fuchsian_o23();
        let words: Vec<Word> = enumerate(2).unwrap().collect();
        assert!(check_semiconjugacy(&h, &phi, &phi, &words, 64) > 0.01);
    }
}
