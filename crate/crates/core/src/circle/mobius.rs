//! Lifts of linear fractional transformations acting on the boundary circle.
//!
//! The boundary `R ∪ {∞}` is identified with `R/Z` through the chart
//! `c(t) = tan(π(t − 1/2))`, so `t = 0` is `∞` and `t = 1/2` is `0`. A point
//! `t` corresponds to the direction `(−cos πt, sin πt)` in the plane, and the
//! linear action of the matrix on directions gives a continuous lift.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Chart value `tan(π(t − 1/2))`; `∞` at integers.
pub fn chart(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r == 0.0 {
        f64::INFINITY
    } else {
        -(PI * r).cos() / (PI * r).sin()
    }
}

/// Inverse chart into `[0, 1)`; `±∞` maps to `0`.
pub fn chart_inv(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        0.5 + x.atan() / PI
    }
}

/// A Möbius transformation with a chosen lift. `sheet` is the integer added to
/// the base lift, which moves points by less than one.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftMobius {
    mat: [f64; 4],
    sheet: i64,
    norm2: f64,
}

impl LiftMobius {
    /// Accepts any matrix of positive determinant; it is rescaled to
    /// determinant one and its sign fixed so the trace is nonnegative.
    pub fn new(mat: [f64; 4], sheet: i64) -> Result<Self> {
        let [a, b, c, d] = mat;
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidLift("non-finite matrix entry".into()));
        }
        let det = a * d - b * c;
        if det <= 0.0 {
            return Err(Error::InvalidLift(format!(
                "determinant {det} is not positive (orientation reversing or singular)"
            )));
        }
        let s = det.sqrt();
        let sign = if a + d < 0.0 { -1.0 } else { 1.0 };
        let mat = [sign * a / s, sign * b / s, sign * c / s, sign * d / s];
        let norm2 = mat.iter().map(|v| v * v).sum();
        Ok(LiftMobius { mat, sheet, norm2 })
    }

    pub fn matrix(&self) -> [f64; 4] {
        self.mat
    }

    pub fn sheet(&self) -> i64 {
        self.sheet
    }

    pub fn trace(&self) -> f64 {
        self.mat[0] + self.mat[3]
    }

    pub fn with_sheet(&self, sheet: i64) -> Self {
        LiftMobius { sheet, ..self.clone() }
    }

    /// The boundary map in chart coordinates, `x ↦ (ax + b)/(cx + d)`.
    pub fn act(&self, x: f64) -> f64 {
        let [a, b, c, d] = self.mat;
        if x.is_infinite() {
            return if c == 0.0 { f64::INFINITY } else { a / c };
        }
        let den = c * x + d;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (a * x + b) / den
        }
    }

    fn base_eval(&self, r: f64) -> f64 {
        let [a, b, c, d] = self.mat;
        let (v0, v1) = (-(PI * r).cos(), (PI * r).sin());
        let (w0, w1) = (a * v0 + b * v1, c * v0 + d * v1);
        let cross = v0 * w1 - v1 * w0;
        let dot = v0 * w0 + v1 * w1;
        r - cross.atan2(dot) / PI
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let n = x.floor();
        let r = x - n;
        self.base_eval(r) + n + self.sheet as f64
    }

    /// Error bound for one evaluation near `x`.
    pub fn float_error(&self, x: f64) -> f64 {
        64.0 * EPS * (1.0 + self.norm2) + 8.0 * EPS * (x.abs() + self.sheet.abs() as f64 + 2.0)
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.mat;
        LiftMobius { mat: [d, -b, -c, a], sheet: -self.sheet, norm2: self.norm2 }
    }

    /// Closed-form lift of `self ∘ other`.
    pub fn compose(&self, other: &LiftMobius) -> LiftMobius {
        let [a, b, c, d] = self.mat;
        let [e, f, g, h] = other.mat;
        let prod = LiftMobius::new([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], 0)
            .expect("product of SL(2,R) matrices");
        // The base lifts of the product and of the composition differ by an integer.
        let t0 = 0.3;
        let chained = self.with_sheet(0).eval_f64(other.with_sheet(0).eval_f64(t0));
        let offset = (chained - prod.eval_f64(t0)).round() as i64;
        prod.with_sheet(offset + self.sheet + other.sheet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> LiftMobius {
        LiftMobius::new([0.0, -1.0, 1.0, 0.0], 0).unwrap()
    }

    fn beta() -> LiftMobius {
        LiftMobius::new([1.0, 1.0, -1.0, 0.0], 0).unwrap()
    }

    #[test]
    fn chart_round_trip() {
        for k in 1..100 {
            let t = k as f64 / 100.0;
            assert!((chart_inv(chart(t)) - t).abs() < 1e-14);
        }
        assert_eq!(chart(0.0), f64::INFINITY);
        assert_eq!(chart_inv(f64::NEG_INFINITY), 0.0);
        assert!(chart(0.5).abs() < 1e-15);
        assert!((chart(0.25) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_sends_zero_to_infinity() {
        // chart value 0 is t = 1/2, chart value ∞ is t = 0.
        let y = alpha().eval_f64(0.5);
        assert!((y - y.round()).abs() < 1e-15);
        assert_eq!(alpha().act(0.0), f64::INFINITY);
    }

    #[test]
    fn lift_agrees_with_chart_action() {
        let m = LiftMobius::new([2.0, 1.0, 3.0, 2.0], 0).unwrap();
        for k in 1..50 {
            let t = k as f64 / 50.0 + 0.0037;
            let lhs = chart_inv(m.act(chart(t)));
            let rhs = m.eval_f64(t).rem_euclid(1.0);
            let d = (lhs - rhs).rem_euclid(1.0);
            assert!(d.min(1.0 - d) < 1e-12, "t={t} lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn base_lift_moves_less_than_one() {
        for m in [alpha(), beta(), LiftMobius::new([5.0, 2.0, 2.0, 1.0], 0).unwrap()] {
            for k in 0..200 {
                let t = k as f64 / 200.0;
                let d = m.eval_f64(t) - t;
                assert!(d.abs() < 1.0);
            }
        }
    }

    #[test]
    fn inverse_round_trip_error_small() {
        let m = LiftMobius::new([3.0, 1.0, 5.0, 2.0], 2).unwrap();
        let inv = m.inverse();
        for k in -40..40 {
            let t = k as f64 / 13.0 + 0.01;
            assert!((inv.eval_f64(m.eval_f64(t)) - t).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_form_composition() {
        let ab = alpha().with_sheet(1).compose(&beta());
        for k in 0..37 {
            let t = k as f64 / 37.0;
            let chained = alpha().with_sheet(1).eval_f64(beta().eval_f64(t));
            assert!((ab.eval_f64(t) - chained).abs() < 1e-12);
        }
    }
}
