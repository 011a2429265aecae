use serde::Serialize;

use super::{eq, le, lt, Clause};
use crate::actions::CircleAction;
use crate::circle::{compose, find_periodic_point, min_difference, power, translation_number_enclosure, LiftHomeo};
use crate::error::{Error, Result};
use crate::rational::{q, to_f64, Rational1, Scalar};
use crate::words::{Syllable, Word};

/// Sample count for "for every x" checks on maps without an exact form.
pub const INEQ_SAMPLES: usize = 10_000;

fn check_case2_rotations(phi: &CircleAction) -> Result<()> {
    if *phi.rot_a() != Rational1::new(1, 2) || *phi.rot_b() != Rational1::new(2, 3) {
        return Err(Error::CertificateFailure {
            clause: "precondition".into(),
            detail: format!("declared (rot a, rot b) = ({}, {}), need (1/2, 2/3)", phi.rot_a(), phi.rot_b()),
        });
    }
    Ok(())
}

/// The lift `ãb̃ − 1` of `φ(αβ)`.
fn lift_ab(phi: &CircleAction) -> LiftHomeo {
    phi.apply(&Word::from_syllables([Syllable::A, Syllable::B])).shifted(-1)
}

/// A point `x̃₀` with `(ãb̃ − 1)⁵(x̃₀) = x̃₀ + 1`.
pub fn find_x0_case2(phi: &CircleAction, threshold: f64) -> Result<Scalar> {
    check_case2_rotations(phi)?;
    find_periodic_point(&lift_ab(phi), 5, 1, threshold)
        .map(|(x, _)| x)
        .ok_or_else(|| Error::NoSolution("ab has no point with (ab)^5(x) = x + 1".into()))
}

/// Orbit `o_l = (ab)^l x̃₀` for `l` in `lo..=hi`.
struct Orbit {
    lo: i64,
    points: Vec<Scalar>,
}

impl Orbit {
    fn new(ab: &LiftHomeo, x0: &Scalar, lo: i64, hi: i64) -> Self {
        let inv = ab.inverse();
        let mut back = vec![x0.clone()];
        for _ in lo..0 {
            let y = inv.evaluate(back.last().expect("nonempty"));
            back.push(y);
        }
        back.reverse();
        let mut points = back;
        for _ in 0..hi {
            let y = ab.evaluate(points.last().expect("nonempty"));
            points.push(y);
        }
        Orbit { lo: lo.min(0), points }
    }

    fn at(&self, l: i64) -> &Scalar {
        &self.points[(l - self.lo) as usize]
    }
}

/// Outcome of the three inequalities preceding the Markov partition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IneqReport {
    pub x0: Scalar,
    pub window: i64,
    pub clauses: Vec<Clause>,
    /// `min (b̃(x) − ã(x))`.
    pub margin_1: f64,
    /// `min (x + 1 − (ab)²ã(x))`.
    pub margin_2: f64,
    /// Smallest gap in the four-term chain over the window.
    pub margin_3: f64,
    /// `None` when (1) and (2) were decided exactly on breakpoints.
    pub samples: Option<usize>,
    pub threshold: f64,
}

impl IneqReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

fn ineq_failure(clause: &str, witness: &Scalar) -> Error {
    Error::InequalityFailure { clause: clause.into(), witness: witness.render() }
}

/// Minimum of `g(x) − f(x)` over the line with its location.
fn min_gap(f: &LiftHomeo, g: &LiftHomeo) -> (f64, Scalar) {
    if let (Some(f), Some(g)) = (f.to_pl(), g.to_pl()) {
        let (m, x) = min_difference(g.inner(), f.inner());
        return (to_f64(&m), Scalar::Exact(x));
    }
    (0..INEQ_SAMPLES)
        .map(|i| {
            let x = i as f64 / INEQ_SAMPLES as f64;
            (g.eval_f64(x) - f.eval_f64(x), Scalar::Float(x))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty")
}

/// Checks, for an action with triple `(1/2, 2/3, 1/5)`:
/// (1) `ã(x) < b̃(x)`; (2) `(ab)²ã(x) < x + 1`; (3) the chain
/// `o_l < b̃(o_{l+2}) − 1 < b̃²(o_{l+4}) − 2 < o_{l+1}` for `|l| ≤ window`.
pub fn verify_lemma_ineq(phi: &CircleAction, window: i64, threshold: f64) -> Result<IneqReport> {
    check_case2_rotations(phi)?;
    let (a, b) = (phi.lift_a(), phi.lift_b());
    let ab = lift_ab(phi);
    let enc = translation_number_enclosure(&ab, 10_000, 8);
    let fifth = q(1, 5);
    if !enc.contains(&fifth) {
        return Err(Error::CertificateFailure {
            clause: "precondition".into(),
            detail: format!("translation number of ab lies in [{}, {}], need 1/5", enc.lo, enc.hi),
        });
    }
    let x0 = find_x0_case2(phi, threshold)?;
    let exact = phi.is_exact();
    let mut clauses =
        vec![Clause::new("translation number of ab is 1/5", true, format!("enclosure [{}, {}]", enc.lo, enc.hi))];

    let (margin_1, w1) = min_gap(a, b);
    let ok1 = if exact { margin_1 > 0.0 } else { margin_1 > threshold };
    if !ok1 {
        return Err(ineq_failure("(1) a(x) < b(x)", &w1));
    }
    clauses.push(Clause::new("(1) a(x) < b(x)", true, format!("min b - a = {margin_1:.6e} at {}", w1.render())));

    let lhs = compose(&power(&ab, 2), a);
    let (margin_2, w2) = min_gap(&lhs, &LiftHomeo::translation(1));
    let ok2 = if exact { margin_2 > 0.0 } else { margin_2 > threshold };
    if !ok2 {
        return Err(ineq_failure("(2) (ab)^2 a(x) < x + 1", &w2));
    }
    clauses.push(Clause::new(
        "(2) (ab)^2 a(x) < x + 1",
        true,
        format!("min x + 1 - (ab)^2 a(x) = {margin_2:.6e} at {}", w2.render()),
    ));

    let orbit = Orbit::new(&ab, &x0, -window, window + 5);
    let mut margin_3 = f64::INFINITY;
    for l in -window..=window {
        let chain = [
            orbit.at(l).clone(),
            b.evaluate(orbit.at(l + 2)).add_int(-1),
            b.evaluate(&b.evaluate(orbit.at(l + 4))).add_int(-2),
            orbit.at(l + 1).clone(),
        ];
        for w in chain.windows(2) {
            margin_3 = margin_3.min(w[1].to_f64() - w[0].to_f64());
            if !lt(&w[0], &w[1], threshold) {
                return Err(ineq_failure(&format!("(3) chain at l = {l}"), &w[0]));
            }
        }
    }
    clauses.push(Clause::new(
        "(3) o_l < b(o_{l+2}) - 1 < b^2(o_{l+4}) - 2 < o_{l+1}",
        true,
        format!("|l| <= {window}, smallest gap {margin_3:.6e}"),
    ));
    Ok(IneqReport {
        x0,
        window,
        clauses,
        margin_1,
        margin_2,
        margin_3,
        samples: (!exact).then_some(INEQ_SAMPLES),
        threshold,
    })
}

/// `Ĩ_l = (o_l, e_l]` and `J̃_l = (e_l, o_{l+1}]` with `e_l = b̃(o_{l+2}) − 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovInterval {
    pub l: i64,
    pub o: Scalar,
    pub e: Scalar,
    pub o_next: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovCertificate {
    pub x0: Scalar,
    pub window: i64,
    pub intervals: Vec<MarkovInterval>,
    pub ineq: IneqReport,
    pub clauses: Vec<Clause>,
    pub threshold: f64,
    pub exact: bool,
}

impl MarkovCertificate {
    pub fn passed(&self) -> bool {
        self.ineq.passed() && self.clauses.iter().all(|c| c.pass)
    }

    pub fn interval(&self, l: i64) -> Option<&MarkovInterval> {
        self.intervals.iter().find(|iv| iv.l == l)
    }
}

/// Builds `Ĩ_l, J̃_l` for `|l| ≤ window` and checks
/// `b̃⁻¹(o_l) ∈ Int J̃_{l−4}`, `b̃ã(o_l) ∈ Int J̃_{l+5}`, `ã(J̃_l) = Ĩ_{l+3}`,
/// `b̃(Ĩ_l) ⊂ J̃_{l+3}` and `b̃⁻¹(Ĩ_l) ⊂ J̃_{l−4}`.
pub fn build_markov(phi: &CircleAction, window: i64, threshold: f64) -> Result<MarkovCertificate> {
    if window < 0 {
        return Err(Error::Precondition(format!("window must be nonnegative, got {window}")));
    }
    let ineq = verify_lemma_ineq(phi, window, threshold)?;
    let (a, b, b_inv) = (phi.lift_a(), phi.lift_b(), phi.lift_b_inv());
    let thr = threshold;
    let x0 = ineq.x0.clone();
    let orbit = Orbit::new(&lift_ab(phi), &x0, -window - 5, window + 8);
    let o = |l: i64| orbit.at(l).clone();
    let e = |l: i64| b.evaluate(orbit.at(l + 2)).add_int(-1);

    type Check<'a> = (&'static str, Box<dyn Fn(i64) -> (bool, String) + 'a>);
    let checks: Vec<Check> = vec![
        (
            "b^-1(o_l) in Int J_{l-4}",
            Box::new(|l| {
                let y = b_inv.evaluate(&o(l));
                (lt(&e(l - 4), &y, thr) && lt(&y, &o(l - 3), thr), format!("b^-1(o_l) = {}", y.render()))
            }),
        ),
        (
            "ba(o_l) in Int J_{l+5}",
            Box::new(|l| {
                let y = b.evaluate(&a.evaluate(&o(l)));
                (lt(&e(l + 5), &y, thr) && lt(&y, &o(l + 6), thr), format!("ba(o_l) = {}", y.render()))
            }),
        ),
        (
            "a(J_l) = I_{l+3}",
            Box::new(|l| {
                let (lo, hi) = (a.evaluate(&e(l)), a.evaluate(&o(l + 1)));
                (
                    eq(&lo, &o(l + 3), thr) && eq(&hi, &e(l + 3), thr),
                    format!("a(J_l) = ({}, {}]", lo.render(), hi.render()),
                )
            }),
        ),
        (
            "b(I_l) in J_{l+3}",
            Box::new(|l| {
                let (lo, hi) = (b.evaluate(&o(l)), b.evaluate(&e(l)));
                (
                    le(&e(l + 3), &lo, thr) && le(&hi, &o(l + 4), thr),
                    format!("b(I_l) = ({}, {}]", lo.render(), hi.render()),
                )
            }),
        ),
        (
            "b^-1(I_l) in J_{l-4}",
            Box::new(|l| {
                let (lo, hi) = (b_inv.evaluate(&o(l)), b_inv.evaluate(&e(l)));
                (
                    le(&e(l - 4), &lo, thr) && le(&hi, &o(l - 3), thr),
                    format!("b^-1(I_l) = ({}, {}]", lo.render(), hi.render()),
                )
            }),
        ),
        (
            "a(o_l) = b(o_{l+4}) - 1",
            Box::new(|l| {
                let y = a.evaluate(&o(l));
                (eq(&y, &e(l + 2), thr), format!("a(o_l) = {}", y.render()))
            }),
        ),
        (
            "o_{l+5} = o_l + 1",
            Box::new(|l| (eq(&o(l + 5), &o(l).add_int(1), thr), format!("o_(l+5) = {}", o(l + 5).render()))),
        ),
    ];

    let mut clauses = Vec::with_capacity(checks.len());
    for (name, check) in &checks {
        for l in -window..=window {
            let (pass, detail) = check(l);
            if !pass {
                return Err(Error::CertificateFailure { clause: format!("{name} at l = {l}"), detail });
            }
        }
        clauses.push(Clause::new(*name, true, format!("all |l| <= {window}")));
    }
    let intervals = (-window..=window).map(|l| MarkovInterval { l, o: o(l), e: e(l), o_next: o(l + 1) }).collect();
    Ok(MarkovCertificate { x0, window, intervals, ineq, clauses, threshold, exact: phi.is_exact() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{fuchsian_o23, fuchsian_o23_pl, k_fold_lift, random_action, RandomParams, RotationTriple};
    use crate::circle::DEFAULT_THRESHOLD;

    fn five_fold_pl() -> CircleAction {
        k_fold_lift(&fuchsian_o23_pl(), 5).unwrap()
    }

    #[test]
    fn x0_of_exact_lift() {
        let psi = five_fold_pl();
        let x0 = find_x0_case2(&psi, 0.0).unwrap();
        let ab = lift_ab(&psi);
        assert_eq!(power(&ab, 5).evaluate(&x0), x0.add_int(1));
    }

    #[test]
    fn ineq_holds_on_five_fold_lifts() {
        let r = verify_lemma_ineq(&five_fold_pl(), 10, 0.0).unwrap();
        assert!(r.passed());
        assert_eq!(r.samples, None);
        assert!(r.margin_1 > 0.0 && r.margin_2 > 0.0 && r.margin_3 > 0.0);
        let m = verify_lemma_ineq(&k_fold_lift(&fuchsian_o23(), 5).unwrap(), 10, 1e-6).unwrap();
        assert!(m.passed());
        assert_eq!(m.samples, Some(INEQ_SAMPLES));
    }

    #[test]
    fn case1_action_is_rejected() {
        assert!(matches!(
            verify_lemma_ineq(&fuchsian_o23_pl(), 10, 0.0),
            Err(Error::CertificateFailure { clause, .. }) if clause == "precondition"
        ));
    }

    #[test]
    fn markov_on_exact_and_conjugated_lifts() {
        let cert = build_markov(&five_fold_pl(), 10, 0.0).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.intervals.len(), 21);
        let t = RotationTriple::of((1, 2), (2, 3), (1, 5));
        for seed in 0..3 {
            let phi = random_action(&t, seed, &RandomParams::default()).unwrap();
            assert!(build_markov(&phi, 10, 0.0).unwrap().passed());
        }
    }

    #[test]
    fn markov_on_mobius_lift() {
        let psi = k_fold_lift(&fuchsian_o23(), 5).unwrap();
        assert!(build_markov(&psi, 10, 1e-6).unwrap().passed());
    }

    #[test]
    fn intervals_are_translation_compatible() {
        let cert = build_markov(&five_fold_pl(), 10, DEFAULT_THRESHOLD).unwrap();
        for l in -10..=5 {
            let (i, j) = (cert.interval(l).unwrap(), cert.interval(l + 5).unwrap());
            assert_eq!(j.o, i.o.add_int(1));
            assert_eq!(j.e, i.e.add_int(1));
        }
    }
}
