use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{eq, lt, Arc, Clause};
use crate::actions::CircleAction;
use crate::circle::{detect_rational_rotation_with, find_periodic_point, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::rational::{Rational1, Scalar};
use crate::words::{classify_conjugacy, enumerate, ConjClass, Syllable, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case1Options {
    /// Tolerance for floating-point comparisons; unused on exact actions.
    pub threshold: f64,
    /// How many distinct hyperbolic classes get an independent periodic-point
    /// check of rotation number zero.
    pub cross_check: usize,
}

impl Default for Case1Options {
    fn default() -> Self {
        Case1Options { threshold: DEFAULT_THRESHOLD, cross_check: usize::MAX }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordVerdict {
    pub word: Word,
    pub class: ConjClass,
    /// Rotation number of `φ(word)`.
    pub rot: Rational1,
    /// For hyperbolic classes: the trapping `φ(γ)(I) ⊂ I` held for the canonical form.
    pub trapped: Option<bool>,
    /// For cross-checked hyperbolic classes: rotation number found by periodic-point search.
    pub detected: Option<Rational1>,
}

/// Evidence that an action with triple `(1/2, 1/3, 0)` has the rotation
/// numbers of the Fuchsian action on every checked word.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case1Certificate {
    pub x0: Scalar,
    pub interval_i: Arc,
    pub interval_j: Arc,
    pub clauses: Vec<Clause>,
    pub words: Vec<WordVerdict>,
    pub hyperbolic_classes: usize,
    /// Hyperbolic words whose class was cross-checked by periodic-point search.
    pub cross_checked: usize,
    pub max_syllables: usize,
    pub threshold: f64,
    pub exact: bool,
}

impl Case1Certificate {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
            && self.words.iter().all(|w| w.trapped != Some(false))
            && self.words.iter().all(|w| w.detected.as_ref().is_none_or(|d| *d == w.rot))
    }
}

fn check_case1_rotations(phi: &CircleAction) -> Result<()> {
    if *phi.rot_a() != Rational1::new(1, 2) || *phi.rot_b() != Rational1::new(1, 3) {
        return Err(Error::CertificateFailure {
            clause: "precondition".into(),
            detail: format!("declared (rot a, rot b) = ({}, {}), need (1/2, 1/3)", phi.rot_a(), phi.rot_b()),
        });
    }
    Ok(())
}

fn ab() -> Word {
    Word::from_syllables([Syllable::A, Syllable::B])
}

/// A point `x̃₀` with `(ãb̃)(x̃₀) = x̃₀ + 1`.
pub fn find_x0_case1(phi: &CircleAction, threshold: f64) -> Result<Scalar> {
    check_case1_rotations(phi)?;
    let f = phi.apply(&ab());
    find_periodic_point(&f, 1, 1, threshold)
        .map(|(x, _)| x)
        .ok_or_else(|| Error::NoSolution("a~b~ has no point with a~b~(x) = x + 1".into()))
}

fn class_rotation(class: &ConjClass) -> Rational1 {
    match class {
        ConjClass::Identity | ConjClass::Hyperbolic(_) => Rational1::zero(),
        ConjClass::PowerOfAlpha => Rational1::new(1, 2),
        ConjClass::PowerOfBeta(e) => Rational1::new(*e as i64, 3),
    }
}

/// Checks `φ(α)(J) = I`, `φ(β^{±1})(I) ⊂ J` and `φ(γ)(I) ⊂ I` for every
/// hyperbolic class met among words of at most `max_syllables` syllables,
/// where `I = [x̃₀, b̃x̃₀]` and `J = [b̃x̃₀, x̃₀ + 1]`.
pub fn certify_case1(phi: &CircleAction, max_syllables: usize, opts: &Case1Options) -> Result<Case1Certificate> {
    check_case1_rotations(phi)?;
    let thr = opts.threshold;
    let x0 = find_x0_case1(phi, thr)?;
    let (a, b, b_inv) = (phi.lift_a(), phi.lift_b(), phi.lift_b_inv());
    let ax0 = a.evaluate(&x0);
    let bx0 = b.evaluate(&x0);
    let b2x0 = b.evaluate(&bx0);
    let x1 = x0.add_int(1);
    let interval_i = Arc::new(x0.clone(), bx0.clone());
    let interval_j = Arc::new(bx0.clone(), x1.clone());

    let mut clauses = Vec::new();
    let chain = lt(&x0, &ax0, thr) && eq(&ax0, &bx0, thr) && lt(&bx0, &b2x0, thr) && lt(&b2x0, &x1, thr);
    clauses.push(
        Clause::new(
            "order x0 < a(x0) = b(x0) < b^2(x0) < x0+1",
            chain,
            format!("x0={}, a(x0)={}, b(x0)={}, b^2(x0)={}", x0.render(), ax0.render(), bx0.render(), b2x0.render()),
        )
        .require()?,
    );
    let aj = interval_j.image(|x| a.evaluate(x));
    clauses.push(
        Clause::new("a(J) = I", aj.equals(&interval_i, thr).is_some(), format!("a(J) = {aj}, I = {interval_i}"))
            .require()?,
    );
    let bi = interval_i.image(|x| b.evaluate(x));
    clauses.push(
        Clause::new("b(I) in J", bi.within(&interval_j, thr).is_some(), format!("b(I) = {bi}, J = {interval_j}"))
            .require()?,
    );
    let bii = interval_i.image(|x| b_inv.evaluate(x));
    clauses.push(
        Clause::new(
            "b^-1(I) in J",
            bii.within(&interval_j, thr).is_some(),
            format!("b^-1(I) = {bii}, J = {interval_j}"),
        )
        .require()?,
    );

    let words: Vec<Word> = enumerate(max_syllables)?.collect();
    let classes: Vec<ConjClass> = words.iter().map(classify_conjugacy).collect();
    let mut forms: Vec<Word> = classes
        .iter()
        .filter_map(|c| match c {
            ConjClass::Hyperbolic(f) => Some(f.clone()),
            _ => None,
        })
        .collect();
    forms.sort_by(|u, v| u.len().cmp(&v.len()).then_with(|| u.cmp(v)));
    forms.dedup();

    // Inner `None`: the cross-check ran but found no fixed point.
    let per_form: Vec<(Word, bool, Option<Option<Rational1>>)> = forms
        .par_iter()
        .enumerate()
        .map(|(idx, form)| {
            let img = interval_i.image(|x| phi.eval_word(form, x));
            let trapped = img.within(&interval_i, thr).is_some();
            let detected = (idx < opts.cross_check)
                .then(|| detect_rational_rotation_with(&phi.apply(form), 1, thr).ok().flatten().map(|w| w.rot));
            (form.clone(), trapped, detected)
        })
        .collect();
    let lookup: BTreeMap<Word, (bool, Option<Option<Rational1>>)> =
        per_form.iter().map(|(f, t, d)| (f.clone(), (*t, d.clone()))).collect();

    let mut verdicts = Vec::with_capacity(words.len());
    for (w, class) in words.into_iter().zip(classes) {
        let rot = class_rotation(&class);
        let (trapped, detected) = match &class {
            ConjClass::Hyperbolic(f) => {
                let (t, d) = lookup[f].clone();
                (Some(t), d)
            }
            _ => (None, None),
        };
        if trapped == Some(false) {
            return Err(Error::CertificateFailure {
                clause: format!("phi({w})(I) in I"),
                detail: format!(
                    "canonical form {} moves I = {interval_i} off itself",
                    match &class {
                        ConjClass::Hyperbolic(f) => f.to_string(),
                        _ => unreachable!(),
                    }
                ),
            });
        }
        if let Some(d) = &detected {
            if d.as_ref() != Some(&rot) {
                return Err(Error::CertificateFailure {
                    clause: format!("detected rot phi({w}) = 0"),
                    detail: format!(
                        "periodic-point search gave {}",
                        d.as_ref().map_or("no fixed point".to_string(), |r| r.to_string())
                    ),
                });
            }
        }
        verdicts.push(WordVerdict { word: w, class, rot, trapped, detected: detected.flatten() });
    }
    let cross_checked = verdicts.iter().filter(|v| v.detected.is_some()).count();
    Ok(Case1Certificate {
        x0,
        interval_i,
        interval_j,
        clauses,
        words: verdicts,
        hyperbolic_classes: forms.len(),
        cross_checked,
        max_syllables,
        threshold: thr,
        exact: phi.is_exact(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{fuchsian_o23, fuchsian_o23_pl, k_fold_lift};
    use crate::rational::q;

    #[test]
    fn fuchsian_x0_is_parabolic_point() {
        let x0 = find_x0_case1(&fuchsian_o23(), DEFAULT_THRESHOLD).unwrap();
        assert!((x0.to_f64() - 0.5).abs() < 1e-6);
        assert_eq!(find_x0_case1(&fuchsian_o23_pl(), 0.0).unwrap(), Scalar::Exact(q(1, 2)));
    }

    #[test]
    fn fuchsian_certificates_pass() {
        for phi in [fuchsian_o23(), fuchsian_o23_pl()] {
            let cert = certify_case1(&phi, 8, &Case1Options::default()).unwrap();
            assert!(cert.passed());
            assert!(cert.cross_checked >= 50);
            let hyperbolic = cert.words.iter().filter(|w| matches!(w.class, ConjClass::Hyperbolic(_))).count();
            assert_eq!(cert.cross_checked, hyperbolic);
        }
    }

    #[test]
    fn five_fold_lift_is_rejected() {
        let psi = k_fold_lift(&fuchsian_o23_pl(), 5).unwrap();
        assert!(matches!(certify_case1(&psi, 4, &Case1Options::default()), Err(Error::CertificateFailure { .. })));
    }

    #[test]
    fn wrong_ab_rotation_has_no_solution() {
        // The (2,3,7) triangle group has triple (1/2, 1/3, 6/7).
        let phi = crate::actions::triangle_action(7).unwrap();
        assert!(matches!(find_x0_case1(&phi, DEFAULT_THRESHOLD), Err(Error::NoSolution(_))));
    }
}
