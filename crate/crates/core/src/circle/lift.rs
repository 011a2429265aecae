use num_traits::Zero;

use super::mobius::LiftMobius;
use super::pl::LiftPl;
use crate::rational::{from_f64, qi, to_f64, Scalar, Q};

const EPS: f64 = f64::EPSILON;

/// Translation amount of a rigid rotation lift.
#[derive(Clone, Debug, PartialEq)]
pub enum Amount {
    Exact(Q),
    Float(f64),
}

impl Amount {
    pub fn to_f64(&self) -> f64 {
        match self {
            Amount::Exact(t) => to_f64(t),
            Amount::Float(t) => *t,
        }
    }

    /// Exact value; a float amount is read as the dyadic rational it encodes.
    pub fn to_q(&self) -> Q {
        match self {
            Amount::Exact(t) => t.clone(),
            Amount::Float(t) => from_f64(*t),
        }
    }
}

/// A strictly increasing map `F` of the line with `F(x + 1) = F(x) + 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftHomeo {
    /// `x ↦ x + t`.
    Rotation(Amount),
    Pl(LiftPl),
    Mobius(LiftMobius),
    /// The `degree`-fold cover lift `x ↦ (base(degree·x) + offset) / degree`.
    Cover {
        base: Box<LiftHomeo>,
        degree: i64,
        offset: i64,
    },
    /// `T_shift ∘ factors[0] ∘ … ∘ factors[n-1]`; the last factor acts first.
    Composite {
        factors: Vec<LiftHomeo>,
        shift: i64,
    },
}

impl LiftHomeo {
    pub fn identity() -> Self {
        LiftHomeo::Rotation(Amount::Exact(Q::zero()))
    }

    pub fn translation(n: i64) -> Self {
        LiftHomeo::Rotation(Amount::Exact(qi(n)))
    }

    pub fn rotation(t: Q) -> Self {
        LiftHomeo::Rotation(Amount::Exact(t))
    }

    /// True when every piece of data is an exact rational.
    pub fn is_exact(&self) -> bool {
        match self {
            LiftHomeo::Rotation(Amount::Exact(_)) | LiftHomeo::Pl(_) => true,
            LiftHomeo::Rotation(Amount::Float(_)) | LiftHomeo::Mobius(_) => false,
            LiftHomeo::Cover { base, .. } => base.is_exact(),
            LiftHomeo::Composite { factors, .. } => factors.iter().all(|f| f.is_exact()),
        }
    }

    pub fn eval_exact(&self, x: &Q) -> Option<Q> {
        match self {
            LiftHomeo::Rotation(Amount::Exact(t)) => Some(x + t),
            LiftHomeo::Rotation(Amount::Float(_)) | LiftHomeo::Mobius(_) => None,
            LiftHomeo::Pl(p) => Some(p.eval(x)),
            LiftHomeo::Cover { base, degree, offset } => {
                let k = qi(*degree);
                base.eval_exact(&(x * &k)).map(|y| (y + qi(*offset)) / k)
            }
            LiftHomeo::Composite { factors, shift } => {
                let mut y = x.clone();
                for f in factors.iter().rev() {
                    y = f.eval_exact(&y)?;
                }
                Some(y + qi(*shift))
            }
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            LiftHomeo::Rotation(t) => x + t.to_f64(),
            LiftHomeo::Pl(p) => p.eval_f64(x),
            LiftHomeo::Mobius(m) => m.eval_f64(x),
            LiftHomeo::Cover { base, degree, offset } => {
                // Split off the integer part so the base sees a small argument.
                let n = x.floor();
                let k = *degree as f64;
                (base.eval_f64(k * (x - n)) + *offset as f64) / k + n
            }
            LiftHomeo::Composite { factors, shift } => {
                factors.iter().rev().fold(x, |y, f| f.eval_f64(y)) + *shift as f64
            }
        }
    }

    /// `F(x)`, exact whenever both the map and the point are.
    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        if let Scalar::Exact(q) = x {
            if let Some(y) = self.eval_exact(q) {
                return Scalar::Exact(y);
            }
        }
        Scalar::Float(self.eval_f64(x.to_f64()))
    }

    /// Outward-rounded image of `[lo, hi]`. Monotonicity makes the endpoint
    /// images bound the image of the whole interval.
    pub fn eval_interval(&self, lo: f64, hi: f64) -> (f64, f64) {
        let widen = |l: f64, h: f64, e_l: f64, e_h: f64| (l - e_l, h + e_h);
        match self {
            LiftHomeo::Rotation(t) => {
                let tf = t.to_f64();
                let terr = match t {
                    Amount::Exact(q) => (to_f64(q) - tf).abs() + EPS * (tf.abs() + 1.0),
                    Amount::Float(_) => 0.0,
                };
                let (l, h) = (lo + tf, hi + tf);
                widen(l, h, terr + 2.0 * EPS * (l.abs() + 1.0), terr + 2.0 * EPS * (h.abs() + 1.0))
            }
            LiftHomeo::Pl(p) => {
                let (l, h) = (p.eval_f64(lo), p.eval_f64(hi));
                widen(l, h, p.float_error(lo) + 2.0 * EPS * l.abs(), p.float_error(hi) + 2.0 * EPS * h.abs())
            }
            LiftHomeo::Mobius(m) => {
                let (l, h) = (m.eval_f64(lo), m.eval_f64(hi));
                widen(l, h, m.float_error(lo) + 2.0 * EPS * l.abs(), m.float_error(hi) + 2.0 * EPS * h.abs())
            }
            LiftHomeo::Cover { base, degree, offset } => {
                let k = *degree as f64;
                let n = lo.floor();
                let (a, b) = ((lo - n) * k, (hi - n) * k);
                let (a, b) = (a - 2.0 * EPS * (a.abs() + 1.0), b + 2.0 * EPS * (b.abs() + 1.0));
                let (l, h) = base.eval_interval(a, b);
                let (l, h) = ((l + *offset as f64) / k + n, (h + *offset as f64) / k + n);
                widen(l, h, 4.0 * EPS * (l.abs() + 1.0), 4.0 * EPS * (h.abs() + 1.0))
            }
            LiftHomeo::Composite { factors, shift } => {
                let (l, h) = factors.iter().rev().fold((lo, hi), |(l, h), f| f.eval_interval(l, h));
                let s = *shift as f64;
                widen(l + s, h + s, 2.0 * EPS * (l.abs() + s.abs() + 1.0), 2.0 * EPS * (h.abs() + s.abs() + 1.0))
            }
        }
    }

    pub fn shifted(&self, n: i64) -> LiftHomeo {
        if n == 0 {
            return self.clone();
        }
        match self {
            LiftHomeo::Rotation(Amount::Exact(t)) => LiftHomeo::rotation(t + qi(n)),
            LiftHomeo::Rotation(Amount::Float(t)) => LiftHomeo::Rotation(Amount::Float(t + n as f64)),
            LiftHomeo::Pl(p) => LiftHomeo::Pl(p.shifted(n)),
            LiftHomeo::Mobius(m) => LiftHomeo::Mobius(m.with_sheet(m.sheet() + n)),
            LiftHomeo::Cover { base, degree, offset } => {
                LiftHomeo::Cover { base: base.clone(), degree: *degree, offset: offset + n * degree }
            }
            LiftHomeo::Composite { factors, shift } => {
                LiftHomeo::Composite { factors: factors.clone(), shift: shift + n }
            }
        }
    }

    pub fn inverse(&self) -> LiftHomeo {
        match self {
            LiftHomeo::Rotation(Amount::Exact(t)) => LiftHomeo::rotation(-t.clone()),
            LiftHomeo::Rotation(Amount::Float(t)) => LiftHomeo::Rotation(Amount::Float(-t)),
            LiftHomeo::Pl(p) => LiftHomeo::Pl(p.inverse()),
            LiftHomeo::Mobius(m) => LiftHomeo::Mobius(m.inverse()),
            LiftHomeo::Cover { base, degree, offset } => {
                LiftHomeo::Cover { base: Box::new(base.inverse()), degree: *degree, offset: -offset }
            }
            LiftHomeo::Composite { factors, shift } => {
                LiftHomeo::Composite { factors: factors.iter().rev().map(|f| f.inverse()).collect(), shift: -shift }
            }
        }
    }

    /// Single exact PL representative, if the map is exact.
    pub fn to_pl(&self) -> Option<LiftPl> {
        match self {
            LiftHomeo::Rotation(Amount::Exact(t)) => Some(LiftPl::translation(t)),
            LiftHomeo::Rotation(Amount::Float(_)) | LiftHomeo::Mobius(_) => None,
            LiftHomeo::Pl(p) => Some(p.clone()),
            LiftHomeo::Cover { base, degree, offset } => Some(base.to_pl()?.cover(*degree, *offset)),
            LiftHomeo::Composite { factors, shift } => {
                let mut acc = LiftPl::identity();
                for f in factors.iter().rev() {
                    acc = f.to_pl()?.compose(&acc);
                }
                Some(acc.shifted(*shift))
            }
        }
    }

    /// Replaces an exact map by its flattened PL form; leaves others alone.
    pub fn flattened(&self) -> LiftHomeo {
        match self {
            LiftHomeo::Rotation(_) | LiftHomeo::Pl(_) | LiftHomeo::Mobius(_) => self.clone(),
            _ => match self.to_pl() {
                Some(p) => match p.as_translation() {
                    Some(t) => LiftHomeo::rotation(t),
                    None => LiftHomeo::Pl(p),
                },
                None => self.clone(),
            },
        }
    }

    /// Error bound for float evaluation near points of size `x`.
    pub fn float_error(&self, x: f64) -> f64 {
        let (l, h) = self.eval_interval(x, x);
        (h - l) / 2.0 + 4.0 * EPS * (x.abs() + 1.0)
    }
}

/// Lift of `f ∘ g`. Closed forms are used when both factors share one;
/// otherwise the result is a composite evaluated by chained application.
pub fn compose(f: &LiftHomeo, g: &LiftHomeo) -> LiftHomeo {
    use LiftHomeo::*;
    match (f, g) {
        (Rotation(Amount::Exact(s)), Rotation(Amount::Exact(t))) => LiftHomeo::rotation(s + t),
        (Rotation(Amount::Exact(s)), other) | (other, Rotation(Amount::Exact(s))) if s.is_integer() => {
            other.shifted(crate::rational::floor_i64(s))
        }
        (Rotation(a), Rotation(b)) => Rotation(Amount::Float(a.to_f64() + b.to_f64())),
        (Mobius(a), Mobius(b)) => Mobius(a.compose(b)),
        (Cover { base: b1, degree: k1, offset: j1 }, Cover { base: b2, degree: k2, offset: j2 }) if k1 == k2 => {
            Cover { base: Box::new(compose(b1, b2)), degree: *k1, offset: j1 + j2 }
        }
        _ if f.is_exact() && g.is_exact() => {
            let p = f.to_pl().expect("exact").compose(&g.to_pl().expect("exact"));
            match p.as_translation() {
                Some(t) => LiftHomeo::rotation(t),
                None => Pl(p),
            }
        }
        _ => {
            let mut factors = Vec::new();
            let mut shift = 0;
            for h in [f, g] {
                match h {
                    Composite { factors: fs, shift: s } => {
                        factors.extend(fs.iter().cloned());
                        shift += s;
                    }
                    other => factors.push(other.clone()),
                }
            }
            Composite { factors, shift }
        }
    }
}

/// `f^n` for `n ≥ 0`, negative powers through the inverse.
pub fn power(f: &LiftHomeo, n: i64) -> LiftHomeo {
    let base = if n < 0 { f.inverse() } else { f.clone() };
    let mut acc = LiftHomeo::identity();
    for _ in 0..n.unsigned_abs() {
        acc = compose(&base, &acc);
    }
    acc
}

pub fn inverse(f: &LiftHomeo) -> LiftHomeo {
    f.inverse()
}

pub fn evaluate(f: &LiftHomeo, x: &Scalar) -> Scalar {
    f.evaluate(x)
}
