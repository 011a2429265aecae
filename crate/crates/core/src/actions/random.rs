use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fuchsian_o23_pl, k_fold_lift, pl_homeo, rotation_triple, Backend, CircleAction, RotationTriple};
use crate::circle::{LiftHomeo, LiftPl};
use crate::error::{Error, Result};
use crate::rational::{q, qi, Rational1, Q};

/// Shape of randomly generated PL data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomParams {
    /// Interior breakpoints of each random piece.
    pub breakpoints: usize,
    /// Breakpoint values lie on the grid `Z / denominator`.
    pub denominator: i64,
    /// Conjugate the result by a random PL homeomorphism.
    pub conjugate: bool,
    /// For the five-fold target, conjugator breakpoints lie on `Z / (5·2^depth)`.
    pub lattice_depth: u32,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { breakpoints: 4, denominator: 16, conjugate: true, lattice_depth: 2 }
    }
}

/// `n` sorted distinct integers in `1..m`.
fn sorted_sample(rng: &mut impl Rng, m: i64, n: usize) -> Vec<i64> {
    let n = n.min((m - 1).max(0) as usize);
    let mut v: Vec<i64> = sample(rng, (m - 1) as usize, n).into_iter().map(|i| i as i64 + 1).collect();
    v.sort_unstable();
    v
}

/// Random PL homeomorphism with `n` breakpoints on `Z/x_den`, values on `Z/y_den`.
pub fn random_conjugator(rng: &mut impl Rng, n: usize, x_den: i64, y_den: i64) -> LiftPl {
    let n = n.max(1);
    let xs: Vec<Q> = {
        let mut v: Vec<i64> =
            sample(rng, x_den as usize, n.min(x_den as usize)).into_iter().map(|i| i as i64).collect();
        v.sort_unstable();
        v.into_iter().map(|i| q(i, x_den)).collect()
    };
    let ys: Vec<Q> = {
        let mut v: Vec<i64> =
            sample(rng, y_den as usize, xs.len().min(y_den as usize)).into_iter().map(|i| i as i64).collect();
        v.sort_unstable();
        v.into_iter().map(|i| q(i, y_den)).collect()
    };
    let m = xs.len().min(ys.len());
    let s = rng.gen_range(0..m);
    let pts = (0..m)
        .map(|i| {
            let k = i + s;
            let y = if k >= m { &ys[k - m] + qi(1) } else { ys[k].clone() };
            (xs[i].clone(), y)
        })
        .collect();
    LiftPl::new(pts).expect("sorted data gives an increasing map")
}

/// Random increasing PL bijection `[a, b] → [c, d]` as a list of points.
fn random_bijection(rng: &mut impl Rng, n: usize, den: i64, (a, b): (Q, Q), (c, d): (Q, Q)) -> Vec<(Q, Q)> {
    let xs = sorted_sample(rng, den, n);
    let ys = sorted_sample(rng, den, xs.len());
    let m = xs.len().min(ys.len());
    let mut pts = vec![(a.clone(), c.clone())];
    for i in 0..m {
        let x = &a + (&b - &a) * q(xs[i], den);
        let y = &c + (&d - &c) * q(ys[i], den);
        pts.push((x, y));
    }
    pts.push((b, d));
    pts
}

/// Random exact PL action with the given rotation triple.
///
/// For `(1/2, 1/3, 0)`: `b̃` is the rotation by `1/3` and `ã` is a random lift
/// with `ã(1/3) = 1` and `ã² = T_1`, then optionally conjugated. For
/// `(1/2, 2/3, 1/5)`: the five-fold lift of the PL Fuchsian action conjugated
/// by a random PL homeomorphism.
pub fn random_action(target: &RotationTriple, seed: u64, params: &RandomParams) -> Result<CircleAction> {
    let case1 = RotationTriple::of((1, 2), (1, 3), (0, 1));
    let case2 = RotationTriple::of((1, 2), (2, 3), (1, 5));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = if *target == case1 {
        let g = random_bijection(&mut rng, params.breakpoints, params.denominator, (q(1, 3), qi(1)), (qi(1), q(4, 3)));
        let pts = g.iter().flat_map(|(x, y)| [(x.clone(), y.clone()), (y.clone(), x + qi(1))]).collect();
        let a = LiftPl::from_any_points(pts)?;
        let phi = CircleAction::new(
            pl_homeo(a),
            LiftHomeo::rotation(q(1, 3)),
            Rational1::new(1, 2),
            Rational1::new(1, 3),
            Backend::Pl,
        )?;
        if params.conjugate {
            let h = random_conjugator(&mut rng, params.breakpoints, params.denominator, params.denominator);
            phi.conjugate(&LiftHomeo::Pl(h))?
        } else {
            phi
        }
    } else if *target == case2 {
        let psi = k_fold_lift(&fuchsian_o23_pl(), 5)?;
        let x_den = 5 * (1i64 << params.lattice_depth);
        let h = random_conjugator(&mut rng, params.breakpoints, x_den, params.denominator);
        psi.conjugate(&LiftHomeo::Pl(h))?
    } else {
        return Err(Error::UnsupportedTriple(target.to_string()));
    };
    let got = rotation_triple(&phi, 30, 10_000)?;
    if got != *target {
        return Err(Error::CertificateFailure {
            clause: "random_action triple".into(),
            detail: format!("generated action has triple {got}, wanted {target}"),
        });
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let t = RotationTriple::of((1, 2), (1, 3), (0, 1));
        let p = RandomParams::default();
        assert_eq!(random_action(&t, 7, &p).unwrap(), random_action(&t, 7, &p).unwrap());
        assert_ne!(random_action(&t, 7, &p).unwrap(), random_action(&t, 8, &p).unwrap());
    }

    #[test]
    fn unsupported_target() {
        let t = RotationTriple::of((1, 2), (1, 2), (0, 1));
        assert!(matches!(random_action(&t, 1, &RandomParams::default()), Err(Error::UnsupportedTriple(_))));
    }

    #[test]
    fn both_targets_verify() {
        for t in [RotationTriple::of((1, 2), (1, 3), (0, 1)), RotationTriple::of((1, 2), (2, 3), (1, 5))] {
            for seed in 0..5 {
                let phi = random_action(&t, seed, &RandomParams::default()).unwrap();
                assert_eq!(phi.relation_residuals(), (0.0, 0.0));
            }
        }
    }
}
