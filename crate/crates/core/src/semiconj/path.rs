use num_traits::Zero;

use super::find_x0_case1;
use crate::actions::{rotation_triple, Backend, CircleAction, RotationTriple};
use crate::circle::{LiftHomeo, LiftPl};
use crate::error::{Error, Result};
use crate::rational::{floor_i64, q, qi, Rational1, Scalar, Q};

fn fuchsian_triple() -> RotationTriple {
    RotationTriple::of((1, 2), (1, 3), (0, 1))
}

/// Conjugates an exact action with triple `(1/2, 1/3, 0)` so that `b̃` becomes
/// the rotation by `1/3` and `x̃₀` moves to `0`; returns the new action and
/// the conjugator `h`.
///
/// `h` is affine from `[x̃₀, b̃x̃₀]` onto `[0, 1/3]` and extended by
/// `h ∘ b̃ = T_{1/3} ∘ h`.
pub fn normalize_case1(phi: &CircleAction) -> Result<(CircleAction, LiftPl)> {
    if !phi.is_exact() {
        return Err(Error::NormalizationFailure("only exact actions can be normalized; use the pl backend".into()));
    }
    let x0 = match find_x0_case1(phi, 0.0)? {
        Scalar::Exact(x) => x,
        Scalar::Float(_) => unreachable!("exact action gives exact root"),
    };
    let b = phi.lift_b().to_pl().expect("exact");
    let bx0 = b.eval(&x0);
    let width = &bx0 - &x0;
    let third = q(1, 3);
    let mut pts: Vec<(Q, Q)> = Vec::new();
    let mut bk = LiftPl::identity();
    for k in 0..3 {
        let base = &third * qi(k);
        let to_u = |y: &Q| &base + (y - &x0) / (qi(3) * &width);
        let from_u = |u: &Q| &x0 + (u - &base) * qi(3) * &width;
        let mut us = vec![base.clone()];
        for n in floor_i64(&x0) - 1..=floor_i64(&bx0) + 1 {
            for x in bk.xs() {
                let y = x + qi(n);
                if y > x0 && y < bx0 {
                    us.push(to_u(&y));
                }
            }
        }
        pts.extend(us.into_iter().map(|u| {
            let v = bk.eval(&from_u(&u));
            (u, v)
        }));
        bk = b.compose(&bk);
    }
    let h = LiftPl::from_any_points(pts)?.inverse();
    let psi = phi.conjugate(&LiftHomeo::Pl(h.clone()))?;
    if *psi.lift_b() != LiftHomeo::rotation(third.clone()) {
        return Err(Error::NormalizationFailure("conjugated b is not the rotation by 1/3".into()));
    }
    if psi.lift_a().eval_exact(&third) != Some(qi(1)) {
        return Err(Error::NormalizationFailure("conjugated a does not send 1/3 to 1".into()));
    }
    Ok((psi, h))
}

/// Lift of `φ(α)` rebuilt from its restriction `g: [1/3, 1] → [1, 4/3]`,
/// using `ã = g⁻¹ + 1` on `[1, 4/3]`.
fn lift_from_half(us: &[Q], g: impl Fn(&Q) -> Q) -> Result<LiftPl> {
    let pts = us.iter().flat_map(|u| {
        let v = g(u);
        [(u.clone(), v.clone()), (v, u + qi(1))]
    });
    LiftPl::from_any_points(pts.collect())
}

/// A discretized path of `steps` actions from the normalization of `φ₀` to
/// that of `φ₁`, every one with verified triple `(1/2, 1/3, 0)`.
pub fn path_witness(phi0: &CircleAction, phi1: &CircleAction, steps: usize) -> Result<Vec<CircleAction>> {
    if steps < 2 {
        return Err(Error::Precondition(format!("a path needs at least 2 steps, got {steps}")));
    }
    let target = fuchsian_triple();
    for (name, phi) in [("phi0", phi0), ("phi1", phi1)] {
        let t = rotation_triple(phi, 30, 10_000)?;
        if t != target {
            return Err(Error::Precondition(format!("{name} has triple {t}, need {target}")));
        }
    }
    let (psi0, _) = normalize_case1(phi0)?;
    let (psi1, _) = normalize_case1(phi1)?;
    let a0 = psi0.lift_a().to_pl().expect("exact");
    let a1 = psi1.lift_a().to_pl().expect("exact");
    let (lo, hi) = (q(1, 3), qi(1));
    let mut us: Vec<Q> = vec![lo.clone(), hi.clone()];
    for x in a0.xs().iter().chain(a1.xs()) {
        for y in [x.clone(), x + qi(1)] {
            if y > lo && y < hi {
                us.push(y);
            }
        }
    }
    us.sort();
    us.dedup();
    let last = (steps - 1) as i64;
    (0..steps as i64)
        .map(|s| {
            let t = q(s, last);
            let a = if t.is_zero() {
                a0.clone()
            } else {
                lift_from_half(&us, |u| (qi(1) - &t) * a0.eval(u) + &t * a1.eval(u))?
            };
            let a = if s == last { a1.clone() } else { a };
            let phi = CircleAction::new(
                LiftHomeo::Pl(a),
                LiftHomeo::rotation(q(1, 3)),
                Rational1::new(1, 2),
                Rational1::new(1, 3),
                Backend::Pl,
            )?;
            let got = rotation_triple(&phi, 30, 10_000)?;
            if got != target {
                return Err(Error::CertificateFailure {
                    clause: format!("path step {s}"),
                    detail: format!("triple {got}"),
                });
            }
            Ok(phi)
        })
        .collect()
}
