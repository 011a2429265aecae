//! Piecewise-linear maps of the line commuting with unit translation.
//!
//! A map is stored by its breakpoints `(x_i, y_i)` with `x_i` in `[0, 1)`;
//! the graph is the linear interpolation of all translates `(x_i + n, y_i + n)`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{floor_i64, fmt_q, frac, qi, to_f64, Q};

const EPS: f64 = f64::EPSILON;

/// Breakpoint data shared by strictly increasing lifts and monotone maps.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicPl {
    xs: Vec<Q>,
    ys: Vec<Q>,
    // slopes[i] is the slope from point i to point i+1 (cyclically, with +1 on wrap).
    slopes: Vec<Q>,
    fxs: Vec<f64>,
    fys: Vec<f64>,
    fslopes: Vec<f64>,
    float_err: f64,
}

impl PeriodicPl {
    /// Builds from breakpoints with `x` in `[0, 1)`. `strict` demands a strictly
    /// increasing map; otherwise flat pieces are allowed.
    pub fn new(points: Vec<(Q, Q)>, strict: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidLift("at least one breakpoint required".into()));
        }
        let zero = Q::zero();
        let one = Q::one();
        for (i, (x, _)) in points.iter().enumerate() {
            if *x < zero || *x >= one {
                return Err(Error::InvalidLift(format!("x = {} outside [0,1)", fmt_q(x))));
            }
            if i > 0 && points[i - 1].0 >= *x {
                return Err(Error::InvalidLift("x-values must be strictly increasing".into()));
            }
        }
        let bad = |a: &Q, b: &Q| if strict { a >= b } else { a > b };
        for w in points.windows(2) {
            if bad(&w[0].1, &w[1].1) {
                return Err(Error::InvalidLift(format!(
                    "map not {} between x = {} and x = {}",
                    if strict { "increasing" } else { "nondecreasing" },
                    fmt_q(&w[0].0),
                    fmt_q(&w[1].0)
                )));
            }
        }
        let (first, last) = (&points[0], &points[points.len() - 1]);
        if points.len() > 1 && bad(&last.1, &(&first.1 + &one)) {
            return Err(Error::InvalidLift("map not monotone across the period".into()));
        }
        let (xs, ys): (Vec<Q>, Vec<Q>) = points.into_iter().unzip();
        Ok(Self::from_parts(xs, ys))
    }

    fn from_parts(xs: Vec<Q>, ys: Vec<Q>) -> Self {
        let m = xs.len();
        let slopes: Vec<Q> = (0..m)
            .map(|i| {
                let (x1, y1) =
                    if i + 1 < m { (xs[i + 1].clone(), ys[i + 1].clone()) } else { (&xs[0] + qi(1), &ys[0] + qi(1)) };
                (y1 - &ys[i]) / (x1 - &xs[i])
            })
            .collect();
        let fxs: Vec<f64> = xs.iter().map(to_f64).collect();
        let fys: Vec<f64> = ys.iter().map(to_f64).collect();
        let fslopes: Vec<f64> = slopes.iter().map(to_f64).collect();
        let max_slope = fslopes.iter().fold(0.0f64, |a, s| a.max(s.abs()));
        let max_y = fys.iter().fold(0.0f64, |a, y| a.max(y.abs()));
        let float_err = 16.0 * EPS * (1.0 + 2.0 * max_slope) * (2.0 + max_y);
        PeriodicPl { xs, ys, slopes, fxs, fys, fslopes, float_err }
    }

    /// Accepts breakpoints anywhere on the line; reduces them mod 1 and sorts.
    pub fn from_any_points(points: Vec<(Q, Q)>, strict: bool) -> Result<Self> {
        let mut pts: Vec<(Q, Q)> = points
            .into_iter()
            .map(|(x, y)| {
                let n = qi(floor_i64(&x));
                (&x - &n, &y - &n)
            })
            .collect();
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        Self::new(pts, strict)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn xs(&self) -> &[Q] {
        &self.xs
    }

    pub fn slopes(&self) -> &[Q] {
        &self.slopes
    }

    /// Segment index and local data for a point `r` in `[0, 1)`.
    fn segment(&self, r: &Q) -> (Q, Q, &Q) {
        let m = self.xs.len();
        let idx = self.xs.partition_point(|v| v <= r);
        if idx == 0 {
            (&self.xs[m - 1] - qi(1), &self.ys[m - 1] - qi(1), &self.slopes[m - 1])
        } else {
            (self.xs[idx - 1].clone(), self.ys[idx - 1].clone(), &self.slopes[idx - 1])
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let n = x.floor();
        let r = x - &n;
        let (xa, ya, s) = self.segment(&r);
        ya + s * (r - xa) + n
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let m = self.fxs.len();
        let mut n = x.floor();
        let mut r = x - n;
        if r >= 1.0 {
            r -= 1.0;
            n += 1.0;
        }
        let idx = self.fxs.partition_point(|v| *v <= r);
        let (xa, ya, s) = if idx == 0 {
            (self.fxs[m - 1] - 1.0, self.fys[m - 1] - 1.0, self.fslopes[m - 1])
        } else {
            (self.fxs[idx - 1], self.fys[idx - 1], self.fslopes[idx - 1])
        };
        ya + s * (r - xa) + n
    }

    /// Bound on `|eval_f64(x) - eval(x)|` for `x` of modest size.
    pub fn float_error(&self, x: f64) -> f64 {
        self.float_err + 4.0 * EPS * (x.abs() + 1.0)
    }

    pub fn max_slope(&self) -> f64 {
        self.fslopes.iter().fold(0.0f64, |a, s| a.max(s.abs()))
    }

    pub fn is_strict(&self) -> bool {
        self.slopes.iter().all(|s| s.is_positive())
    }

    /// Removes breakpoints where the slope does not change.
    pub fn simplified(&self) -> Self {
        let m = self.xs.len();
        if m == 1 {
            return self.clone();
        }
        let keep: Vec<usize> = (0..m)
            .filter(|&i| {
                let prev = if i == 0 { m - 1 } else { i - 1 };
                self.slopes[prev] != self.slopes[i]
            })
            .collect();
        let keep = if keep.is_empty() { vec![0] } else { keep };
        if keep.len() == m {
            return self.clone();
        }
        let xs = keep.iter().map(|&i| self.xs[i].clone()).collect();
        let ys = keep.iter().map(|&i| self.ys[i].clone()).collect();
        Self::from_parts(xs, ys)
    }

    pub fn shifted(&self, n: i64) -> Self {
        let n = qi(n);
        Self::from_parts(self.xs.clone(), self.ys.iter().map(|y| y + &n).collect())
    }

    /// First zero of `self(x) - x - c` in `[0, 1)`, in increasing order.
    ///
    /// Zeros at breakpoints are returned as the breakpoint itself; on a flat
    /// zero segment the left end is returned.
    pub fn first_displacement_root(&self, c: &Q) -> Option<Q> {
        let m = self.xs.len();
        let d: Vec<Q> = (0..m).map(|i| &self.ys[i] - &self.xs[i] - c).collect();
        for (x, di) in self.xs.iter().zip(&d) {
            if di.is_zero() {
                return Some(x.clone());
            }
        }
        for i in 0..m {
            let j = (i + 1) % m;
            if d[i].signum() != d[j].signum() {
                let xi = &self.xs[i];
                let xj = if j == 0 { &self.xs[0] + qi(1) } else { self.xs[j].clone() };
                let root = xi - &d[i] * (&xj - xi) / (&d[j] - &d[i]);
                return Some(frac(&root));
            }
        }
        None
    }

    /// Range `[min, max]` of `self(x) - x` over one period.
    pub fn displacement_range(&self) -> (Q, Q) {
        let mut it = self.xs.iter().zip(&self.ys).map(|(x, y)| y - x);
        let first = it.next().expect("nonempty");
        it.fold((first.clone(), first), |(lo, hi), d| {
            let lo = if d < lo { d.clone() } else { lo };
            let hi = if d > hi { d } else { hi };
            (lo, hi)
        })
    }
}

/// Strictly increasing PL lift of a circle homeomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftPl(PeriodicPl);

impl LiftPl {
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        Ok(LiftPl(PeriodicPl::new(points, true)?))
    }

    pub fn from_any_points(points: Vec<(Q, Q)>) -> Result<Self> {
        Ok(LiftPl(PeriodicPl::from_any_points(points, true)?))
    }

    pub fn identity() -> Self {
        Self::translation(&Q::zero())
    }

    pub fn translation(t: &Q) -> Self {
        LiftPl(PeriodicPl::from_parts(vec![Q::zero()], vec![t.clone()]))
    }

    pub fn inner(&self) -> &PeriodicPl {
        &self.0
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.0.breakpoints()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.eval_f64(x)
    }

    pub fn float_error(&self, x: f64) -> f64 {
        self.0.float_error(x)
    }

    /// `Some(t)` when the map is the translation by `t`.
    pub fn as_translation(&self) -> Option<Q> {
        let s = self.0.simplified();
        (s.len() == 1).then(|| &s.ys[0] - &s.xs[0])
    }

    pub fn shifted(&self, n: i64) -> Self {
        LiftPl(self.0.shifted(n))
    }

    pub fn inverse(&self) -> Self {
        let pts = self.0.xs.iter().zip(&self.0.ys).map(|(x, y)| (y.clone(), x.clone())).collect();
        LiftPl(PeriodicPl::from_any_points(pts, true).expect("inverse of a lift is a lift"))
    }

    /// Exact `self ∘ other`.
    pub fn compose(&self, other: &LiftPl) -> LiftPl {
        let other_inv = other.inverse();
        let mut cand: Vec<Q> = other.0.xs.clone();
        cand.extend(self.0.xs.iter().map(|x| frac(&other_inv.eval(x))));
        cand.sort();
        cand.dedup();
        let ys = cand.iter().map(|x| self.eval(&other.eval(x))).collect();
        LiftPl(PeriodicPl::from_parts(cand, ys).simplified())
    }

    pub fn pow(&self, n: u32) -> LiftPl {
        let mut acc = LiftPl::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// The `k`-fold cover lift `x ↦ (self(kx) + j) / k`.
    pub fn cover(&self, k: i64, j: i64) -> LiftPl {
        let kq = qi(k);
        let pts = (0..k)
            .flat_map(|m| self.0.xs.iter().zip(&self.0.ys).map(move |(x, y)| (x + qi(m), y + qi(m))))
            .map(|(x, y)| (x / &kq, (y + qi(j)) / &kq))
            .collect();
        LiftPl(PeriodicPl::from_parts_sorted(pts))
    }

    pub fn max_slope(&self) -> f64 {
        self.0.max_slope()
    }

    pub fn first_displacement_root(&self, c: &Q) -> Option<Q> {
        self.0.first_displacement_root(c)
    }

    pub fn displacement_range(&self) -> (Q, Q) {
        self.0.displacement_range()
    }

    pub fn xs(&self) -> &[Q] {
        self.0.xs()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl PeriodicPl {
    fn from_parts_sorted(mut pts: Vec<(Q, Q)>) -> Self {
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        let (xs, ys) = pts.into_iter().unzip();
        Self::from_parts(xs, ys).simplified()
    }
}

/// Sorted union of breakpoint abscissae of several maps, all in `[0, 1)`.
pub fn breakpoint_union<'a>(maps: impl IntoIterator<Item = &'a PeriodicPl>) -> Vec<Q> {
    let mut v: Vec<Q> = maps.into_iter().flat_map(|m| m.xs.iter().cloned()).collect();
    v.sort();
    v.dedup();
    v
}

/// Minimum of `f(x) - g(x)` over the line, attained at a breakpoint of either map.
pub fn min_difference(f: &PeriodicPl, g: &PeriodicPl) -> (Q, Q) {
    breakpoint_union([f, g])
        .into_iter()
        .map(|x| (f.eval(&x) - g.eval(&x), x))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("nonempty")
}
