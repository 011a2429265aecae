use std::f64::consts::PI;

use super::{nearest_integer_translation, pl_homeo, Backend, CircleAction};
use crate::circle::{compose, LiftHomeo, LiftMobius, LiftPl, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::rational::{q, qi, Rational1};

const ALPHA: [f64; 4] = [0.0, -1.0, 1.0, 0.0];
const BETA: [f64; 4] = [1.0, 1.0, -1.0, 0.0];

fn mobius(m: [f64; 4], sheet: i64) -> LiftHomeo {
    LiftHomeo::Mobius(LiftMobius::new(m, sheet).expect("determinant one"))
}

/// The modular group acting on the boundary of the upper half-plane:
/// `α = [[0,−1],[1,0]]`, `β = [[1,1],[−1,0]]`, with `rot̃(ã) = 1/2` and
/// `rot̃(b̃) = 1/3`.
pub fn fuchsian_o23() -> CircleAction {
    CircleAction::new(mobius(ALPHA, 1), mobius(BETA, 0), Rational1::new(1, 2), Rational1::new(1, 3), Backend::Mobius)
        .expect("valid Fuchsian action")
}

/// An exact PL action conjugate to [`fuchsian_o23`].
///
/// The Minkowski question-mark function conjugates the modular action on
/// `R ∪ {∞}` to the PL action `ã = T_{1/2}`, `b̃` through `(0, 1/4)`,
/// `(1/4, 1/2)`, `(1/2, 1)`, carrying the chart coordinate `t = 1/2` (the
/// parabolic fixed point of `αβ`) to itself.
pub fn fuchsian_o23_pl() -> CircleAction {
    let b = LiftPl::new(vec![(q(0, 1), q(1, 4)), (q(1, 4), q(1, 2)), (q(1, 2), q(1, 1))]).expect("increasing");
    CircleAction::new(
        LiftHomeo::rotation(q(1, 2)),
        LiftHomeo::Pl(b),
        Rational1::new(1, 2),
        Rational1::new(1, 3),
        Backend::Pl,
    )
    .expect("valid PL Fuchsian action")
}

/// `x ↦ (f(kx) + j)/k`.
fn cover_of(f: &LiftHomeo, k: i64, j: i64) -> LiftHomeo {
    if let LiftHomeo::Rotation(crate::circle::Amount::Exact(t)) = f {
        return LiftHomeo::rotation((t + qi(j)) / qi(k));
    }
    match f.to_pl() {
        Some(p) => pl_homeo(p.cover(k, j)),
        None => LiftHomeo::Cover { base: Box::new(f.clone()), degree: k, offset: j },
    }
}

fn is_integer_translation(f: &LiftHomeo, exact: bool) -> bool {
    let (_, r) = nearest_integer_translation(f);
    if exact {
        r == 0.0
    } else {
        r <= DEFAULT_THRESHOLD
    }
}

/// All offset pairs `(j_a, j_b)` in `{0..k−1}²` whose cover lifts satisfy
/// `α² = β³ = 1` on the circle.
pub fn lift_offsets(phi: &CircleAction, k: i64) -> Result<Vec<(i64, i64)>> {
    if k < 1 {
        return Err(Error::Precondition(format!("lift degree must be positive, got {k}")));
    }
    let exact = phi.is_exact();
    let ok_a: Vec<bool> = (0..k)
        .map(|j| {
            let f = cover_of(phi.lift_a(), k, j);
            is_integer_translation(&compose(&f, &f), exact)
        })
        .collect();
    let ok_b: Vec<bool> = (0..k)
        .map(|j| {
            let f = cover_of(phi.lift_b(), k, j);
            is_integer_translation(&compose(&f, &compose(&f, &f)), exact)
        })
        .collect();
    Ok((0..k)
        .flat_map(|ja| (0..k).map(move |jb| (ja, jb)))
        .filter(|&(ja, jb)| ok_a[ja as usize] && ok_b[jb as usize])
        .collect())
}

/// The `k`-fold lift `ψ` of `φ`, with `p_k ∘ ψ(γ) = φ(γ) ∘ p_k`.
pub fn k_fold_lift(phi: &CircleAction, k: i64) -> Result<CircleAction> {
    if k < 1 {
        return Err(Error::Precondition(format!("lift degree must be positive, got {k}")));
    }
    if k % 6 != 1 && k % 6 != 5 {
        return Err(Error::NoLiftExists { k });
    }
    let offsets = lift_offsets(phi, k)?;
    let [(ja, jb)] = offsets.as_slice() else {
        return Err(Error::NoLiftExists { k });
    };
    let rot = |r: &Rational1, j: i64| Rational1::from_q(&((r.value() + qi(j)) / qi(k)));
    CircleAction::new(
        cover_of(phi.lift_a(), k, *ja),
        cover_of(phi.lift_b(), k, *jb),
        rot(phi.rot_a(), *ja),
        rot(phi.rot_b(), *jb),
        phi.backend(),
    )
}

fn check_triangle_k(k: i64) -> Result<()> {
    if k < 7 || (k % 6 != 1 && k % 6 != 5) {
        return Err(Error::InvalidK { k });
    }
    Ok(())
}

/// The `(2, 3, k)` rotation triangle group on the boundary circle.
///
/// `α` is the half-turn about `i`; `β` is the order-three rotation about a
/// point `P` on the imaginary axis with `cosh d(i, P) = 2cos(π/k)/√3`, which
/// makes `αβ` elliptic of order `k`.
pub fn triangle_action(k: i64) -> Result<CircleAction> {
    check_triangle_k(k)?;
    let (c, s) = (0.5, 3f64.sqrt() / 2.0);
    let r = 4.0 * (PI / k as f64).cos() / 3f64.sqrt();
    let y = (r + (r * r - 4.0).sqrt()) / 2.0;
    CircleAction::new(
        mobius(ALPHA, 1),
        mobius([c, s * y, -s / y, c], 0),
        Rational1::new(1, 2),
        Rational1::new(1, 3),
        Backend::Mobius,
    )
}

/// `φ̂ = φ_{O_{2,3,k}} ∘ q`, precomposed with `β ↦ β⁻¹` when `k ≡ −1 mod 6`,
/// so that its rotation triple matches the `k`-fold lift of the Fuchsian
/// action.
pub fn hat_phi(k: i64) -> Result<CircleAction> {
    let t = triangle_action(k)?;
    if k % 6 == 1 {
        Ok(t)
    } else {
        t.flip_beta()
    }
}
