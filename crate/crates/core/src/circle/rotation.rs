//! Translation-number enclosures and detection of rational rotation numbers.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::lift::{Amount, LiftHomeo};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, from_f64, q, qi, to_f64, Rational1, Scalar, Q};

/// Residual below which a floating-point equation counts as satisfied.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

/// Rigorous bounds `[lo, hi]` on a translation number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    #[serde(with = "crate::rational::q_string")]
    pub lo: Q,
    #[serde(with = "crate::rational::q_string")]
    pub hi: Q,
}

impl Enclosure {
    pub fn point(t: Q) -> Self {
        Enclosure { lo: t.clone(), hi: t }
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    /// The single rational with denominator at most `q_max` inside, if unique.
    pub fn pinned_rational(&self, q_max: i64) -> Option<Q> {
        let mut found: Option<Q> = None;
        for den in 1..=q_max {
            let d = qi(den);
            let lo = (&self.lo * &d).ceil().to_integer();
            let hi = (&self.hi * &d).floor().to_integer();
            let mut p = lo;
            while p <= hi {
                let r = Q::new(p.clone(), d.to_integer());
                match &found {
                    Some(f) if *f != r => return None,
                    _ => found = Some(r),
                }
                p += 1;
            }
        }
        found
    }

    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / qi(2)))
    }
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.12}, {:.12}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

/// Encloses the translation number of `f` from `n` iterations at `samples`
/// evenly spaced points.
///
/// For any lift `G` the displacement `G(y) - y` has oscillation below one and
/// its range contains `rot(G)`. With `G = F^n`, every sample `x` therefore gives
/// `rot(F) ∈ ((G(x) - x - 1)/n, (G(x) - x + 1)/n)`. Orbits are followed with
/// outward-rounded intervals, and the per-sample bounds are intersected. For
/// exact maps whose bound is still wider than `2/n`, orbits of the samples and
/// then of the breakpoints are followed exactly.
pub fn translation_number_enclosure(f: &LiftHomeo, n: u64, samples: u32) -> Enclosure {
    assert!(n >= 1 && samples >= 1, "n and samples must be positive");
    if let LiftHomeo::Rotation(t) = f {
        return Enclosure::point(t.to_q());
    }
    let limit = Q::new(2.into(), n.into());
    let enc = enclose_with(f, n, samples, false);
    if !f.is_exact() || enc.width() <= limit {
        return enc;
    }
    // Orbits that stay in slope-one pieces or on a periodic orbit keep small
    // denominators; redo those samples exactly so the interval rounding does
    // not widen the bound.
    let mut enc = enclose_with(f, n, samples, true);
    if enc.width() > limit {
        if let Some(pl) = f.to_pl() {
            let nq = Q::from_integer(n.into());
            for x in pl.xs() {
                if let Some(d) = exact_displacement(f, x, n) {
                    enc.lo = enc.lo.max((&d - Q::one()) / &nq);
                    enc.hi = enc.hi.min((d + Q::one()) / &nq);
                    if enc.width() <= limit {
                        break;
                    }
                }
            }
        }
    }
    enc
}

/// Bit size beyond which an exact orbit is abandoned for interval arithmetic.
const EXACT_ORBIT_BITS: u64 = 192;

fn exact_displacement(f: &LiftHomeo, x: &Q, n: u64) -> Option<Q> {
    let mut y = x.clone();
    for _ in 0..n {
        y = f.eval_exact(&y)?;
        if y.denom().bits() > EXACT_ORBIT_BITS || y.numer().bits() > EXACT_ORBIT_BITS + 64 {
            return None;
        }
    }
    Some(y - x)
}

fn float_displacement(f: &LiftHomeo, x: f64, n: u64) -> (Q, Q) {
    let (mut l, mut u) = (x, x);
    let mut shift: i64 = 0;
    for _ in 0..n {
        let (a, b) = f.eval_interval(l, u);
        let k = a.floor();
        l = a - k;
        u = b - k;
        shift += k as i64;
    }
    let base = qi(shift) - from_f64(x);
    (&base + from_f64(l), &base + from_f64(u))
}

fn enclose_with(f: &LiftHomeo, n: u64, samples: u32, try_exact: bool) -> Enclosure {
    let nq = Q::from_integer(n.into());
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for s in 0..samples {
        let x = s as f64 / samples as f64;
        let exact = if try_exact { exact_displacement(f, &from_f64(x), n) } else { None };
        let (m_lo, m_hi) = match exact {
            Some(d) => (d.clone(), d),
            None => float_displacement(f, x, n),
        };
        let s_lo = (m_lo - Q::one()) / &nq;
        let s_hi = (m_hi + Q::one()) / &nq;
        lo = Some(match lo {
            Some(v) if v > s_lo => v,
            _ => s_lo,
        });
        hi = Some(match hi {
            Some(v) if v < s_hi => v,
            _ => s_hi,
        });
    }
    let (lo, hi) = (lo.expect("samples >= 1"), hi.expect("samples >= 1"));
    debug_assert!(lo <= hi, "inconsistent enclosure");
    Enclosure { lo, hi }
}

/// A periodic point certifying a rational rotation number.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicWitness {
    /// Rotation number `p/q` mod 1.
    pub rot: Rational1,
    /// Translation number `p/q` of the lift itself.
    pub translation: Q,
    pub period: i64,
    pub shift: i64,
    /// A point with `F^period(x) = x + shift`.
    pub point: Scalar,
    /// `|F^period(x) - x - shift|`; zero for exact witnesses.
    pub residual: f64,
}

/// Finds `x` with `F^q(x) = x + p`.
///
/// Exact maps are composed into a single PL map and scanned for sign changes
/// of `F^q(x) - x - p` over its breakpoints. Other maps are sampled and refined
/// numerically; a root is accepted when the residual is at most `threshold`.
pub fn find_periodic_point(f: &LiftHomeo, q_: i64, p: i64, threshold: f64) -> Option<(Scalar, f64)> {
    assert!(q_ >= 1);
    if let Some(pl) = f.to_pl() {
        let g = pl.pow(q_ as u32);
        return g.first_displacement_root(&qi(p)).map(|x| (Scalar::Exact(x), 0.0));
    }
    float_root(|x| iterate_f64(f, x, q_) - x - p as f64, threshold)
}

fn iterate_f64(f: &LiftHomeo, x: f64, n: i64) -> f64 {
    (0..n).fold(x, |y, _| f.eval_f64(y))
}

const GRID: usize = 1024;

/// Root of a continuous 1-periodic function, allowing tangential zeros.
pub(crate) fn float_root(d: impl Fn(f64) -> f64, threshold: f64) -> Option<(Scalar, f64)> {
    let xs: Vec<f64> = (0..=GRID).map(|i| i as f64 / GRID as f64).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| d(x)).collect();
    for i in 0..GRID {
        if ds[i] == 0.0 {
            return Some((Scalar::Float(xs[i]), 0.0));
        }
        if ds[i].signum() != ds[i + 1].signum() {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            let sa = ds[i].signum();
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let dm = d(m);
                if dm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if dm.signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            let x = 0.5 * (a + b);
            let r = d(x).abs();
            if r <= threshold {
                return Some((Scalar::Float(x), r));
            }
        }
    }
    // No sign change: look for a tangential zero near the local minima of |d|.
    let mut cands: Vec<usize> = (0..GRID)
        .filter(|&i| {
            let prev = if i == 0 { GRID - 1 } else { i - 1 };
            ds[i].abs() <= ds[prev].abs() && ds[i].abs() <= ds[i + 1].abs()
        })
        .collect();
    cands.sort_by(|&a, &b| ds[a].abs().total_cmp(&ds[b].abs()));
    for &i in cands.iter().take(8) {
        if ds[i].abs() > 0.05 {
            break;
        }
        let h = 1.0 / GRID as f64;
        let (x, r) = golden_min(|x| d(x).abs(), xs[i] - h, xs[i] + h);
        if r <= threshold {
            return Some((Scalar::Float(x.rem_euclid(1.0)), r));
        }
    }
    None
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-16 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Searches for a periodic point of period at most `q_max` and returns the
/// rotation number it certifies.
///
/// Candidates `p/q` are restricted to those inside a translation-number
/// enclosure, which is sound: a periodic point forces the translation number
/// to equal `p/q`. Periods are tried in increasing order, so the first hit is
/// already in lowest terms.
pub fn detect_rational_rotation(f: &LiftHomeo, q_max: i64) -> Result<Option<PeriodicWitness>> {
    detect_rational_rotation_with(f, q_max, DEFAULT_THRESHOLD)
}

pub fn detect_rational_rotation_with(f: &LiftHomeo, q_max: i64, threshold: f64) -> Result<Option<PeriodicWitness>> {
    if q_max < 1 {
        return Err(Error::Precondition(format!("q_max must be >= 1, got {q_max}")));
    }
    if let LiftHomeo::Rotation(Amount::Exact(t)) = f {
        let den = t.denom().to_i64().unwrap_or(i64::MAX);
        if den <= q_max {
            let p = t.numer().to_i64().expect("small numerator");
            return Ok(Some(PeriodicWitness {
                rot: Rational1::from_q(t),
                translation: t.clone(),
                period: den,
                shift: p,
                point: Scalar::Exact(Q::zero()),
                residual: 0.0,
            }));
        }
        return Ok(None);
    }
    let n = (2 * q_max * q_max + 64) as u64;
    let enc = translation_number_enclosure(f, n, 8);
    for den in 1..=q_max {
        let d = qi(den);
        let lo = (&enc.lo * &d).ceil().to_integer();
        let hi = (&enc.hi * &d).floor().to_integer();
        let mut p = lo;
        while p <= hi {
            let pi = p.to_i64().expect("small numerator");
            if pi.gcd(&den) == 1 {
                if let Some((point, residual)) = find_periodic_point(f, den, pi, threshold) {
                    let translation = q(pi, den);
                    return Ok(Some(PeriodicWitness {
                        rot: Rational1::from_q(&translation),
                        translation,
                        period: den,
                        shift: pi,
                        point,
                        residual,
                    }));
                }
            }
            p += 1;
        }
    }
    Ok(None)
}

/// Best available translation number: exact when a periodic point is found,
/// otherwise an enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum TranslationNumber {
    Exact(Q),
    Enclosed(Enclosure),
}

pub fn translation_number(f: &LiftHomeo, q_max: i64, n_iters: u64) -> TranslationNumber {
    match detect_rational_rotation(f, q_max) {
        Ok(Some(w)) => TranslationNumber::Exact(w.translation),
        _ => TranslationNumber::Enclosed(translation_number_enclosure(f, n_iters, 8)),
    }
}

impl TranslationNumber {
    pub fn render(&self) -> String {
        match self {
            TranslationNumber::Exact(t) => fmt_q(t),
            TranslationNumber::Enclosed(e) => e.to_string(),
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        match self {
            TranslationNumber::Exact(t) => t == x,
            TranslationNumber::Enclosed(e) => e.contains(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::lift::compose;
    use crate::circle::mobius::LiftMobius;
    use crate::circle::pl::LiftPl;

    #[test]
    fn rigid_rotation_enclosure_is_exact() {
        let e = translation_number_enclosure(&LiftHomeo::rotation(q(2, 7)), 5, 3);
        assert!(e.contains(&q(2, 7)));
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let e = translation_number_enclosure(&LiftHomeo::Rotation(Amount::Float(golden)), 10_000, 4);
        assert!(e.contains(&from_f64(golden)));
        assert!(e.width() <= q(2, 10_000));
    }

    #[test]
    fn detect_half_rotation() {
        let w = detect_rational_rotation(&LiftHomeo::rotation(q(1, 2)), 2).unwrap().unwrap();
        assert_eq!(w.rot, Rational1::new(1, 2));
        assert!(detect_rational_rotation(&LiftHomeo::rotation(q(1, 3)), 2).unwrap().is_none());
        assert!(detect_rational_rotation(&LiftHomeo::rotation(q(1, 3)), 0).is_err());
    }

    #[test]
    fn parabolic_fixed_point_found_numerically() {
        // x ↦ x/(x+1) fixes chart point 0, i.e. t = 1/2, tangentially.
        let m = LiftHomeo::Mobius(LiftMobius::new([1.0, 0.0, 1.0, 1.0], 0).unwrap());
        let w = detect_rational_rotation(&m, 1).unwrap().unwrap();
        assert_eq!(w.rot, Rational1::zero());
        let x = w.point.to_f64();
        assert!((x - 0.5).abs() < 1e-4, "witness {x}");
        assert!(w.residual <= DEFAULT_THRESHOLD);
    }

    #[test]
    fn pl_with_planted_orbit_detected_exactly() {
        // Orbit 1/10 -> 3/10 -> 1/2 -> 7/10 -> 9/10 -> 1/10 + 1, with kinks in between.
        let f = LiftPl::new(vec![
            (q(1, 10), q(3, 10)),
            (q(1, 5), q(7, 20)),
            (q(3, 10), q(1, 2)),
            (q(1, 2), q(7, 10)),
            (q(7, 10), q(9, 10)),
            (q(9, 10), q(11, 10)),
        ])
        .unwrap();
        let f = LiftHomeo::Pl(f);
        let w = detect_rational_rotation(&f, 10).unwrap().unwrap();
        assert_eq!(w.rot, Rational1::new(1, 5));
        assert_eq!(w.period, 5);
        let x = w.point.as_exact().unwrap().clone();
        let mut y = x.clone();
        for _ in 0..5 {
            y = f.eval_exact(&y).unwrap();
        }
        assert_eq!(y, x + qi(1));
        let e = translation_number_enclosure(&f, 10_000, 8);
        assert!(e.contains(&q(1, 5)));
        assert!(e.width() <= q(2, 10_000));
    }

    #[test]
    fn conjugation_preserves_enclosure() {
        let h = LiftHomeo::Pl(LiftPl::new(vec![(q(0, 1), q(0, 1)), (q(1, 3), q(1, 8)), (q(3, 4), q(2, 3))]).unwrap());
        let r = LiftHomeo::rotation(q(3, 7));
        let c = compose(&h, &compose(&r, &h.inverse()));
        let e = translation_number_enclosure(&c, 2000, 5);
        assert!(e.contains(&q(3, 7)));
    }

    #[test]
    fn pinned_rational() {
        let e = Enclosure { lo: q(199, 1000), hi: q(201, 1000) };
        assert_eq!(e.pinned_rational(30), Some(q(1, 5)));
        let wide = Enclosure { lo: q(0, 1), hi: q(1, 2) };
        assert_eq!(wide.pinned_rational(30), None);
    }
}
