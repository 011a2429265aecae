use serde::Serialize;

use super::{eq, MarkovCertificate};
use crate::actions::CircleAction;
use crate::circle::LiftPl;
use crate::error::{Error, Result};
use crate::rational::{floor_i64, Scalar, Q};
use crate::words::{enumerate, Syllable, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaOptions {
    pub max_syllables: usize,
    /// Tolerance for coincident orbit points and for the residuals.
    pub threshold: f64,
    /// Largest allowed gap between consecutive orbit points on the circle.
    pub max_gap: f64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions { max_syllables: 8, threshold: 1e-6, max_gap: 0.1 }
    }
}

/// `θ̃(φ̃(γ)(x̃₀)) = φ̃(γ)(ab(x̃₀))` on one orbit point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaEntry {
    pub word: Word,
    pub p: Scalar,
    pub q: Scalar,
}

/// The period-five map on the orbit of `x̃₀`, extended by linear
/// interpolation between table points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaMap {
    pub x0: Scalar,
    /// Sorted by `p`, with `p` in `[0, 1)`.
    pub table: Vec<ThetaEntry>,
    pub words_checked: usize,
    pub max_syllables: usize,
    pub threshold: f64,
    pub largest_gap: f64,
    /// `max |θ̃(g̃(p)) − g̃(θ̃(p))|` over table points and `g ∈ {α, β}`.
    pub equivariance_residual: f64,
    /// `max |θ̃⁵(p) − p − 1|` over table points.
    pub period_residual: f64,
    /// The translation amount when `θ̃` is a rigid translation.
    pub deck_shift: Option<Scalar>,
    pub exact: bool,
    #[serde(skip)]
    extension: Option<LiftPl>,
}

impl ThetaMap {
    pub fn passed(&self) -> bool {
        self.equivariance_residual <= self.threshold && self.period_residual <= self.threshold
    }

    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        if let (Some(ext), Scalar::Exact(x)) = (&self.extension, x) {
            return Scalar::Exact(ext.eval(x));
        }
        let xf = x.to_f64();
        let n = xf.floor();
        let u = xf - n;
        let m = self.table.len();
        let point = |i: usize| -> (f64, f64) {
            if i < m {
                (self.table[i].p.to_f64(), self.table[i].q.to_f64())
            } else {
                let (p, q) = (self.table[i - m].p.to_f64(), self.table[i - m].q.to_f64());
                (p + 1.0, q + 1.0)
            }
        };
        let i = self.table.partition_point(|e| e.p.to_f64() <= u);
        let (lo, hi) = if i == 0 {
            let (p, q) = point(m - 1);
            ((p - 1.0, q - 1.0), point(0))
        } else {
            (point(i - 1), point(i))
        };
        let t = if hi.0 > lo.0 { (u - lo.0) / (hi.0 - lo.0) } else { 0.0 };
        Scalar::Float(lo.1 + t * (hi.1 - lo.1) + n)
    }

    /// Piecewise-linear extension, available when the table is exact.
    pub fn extension(&self) -> Option<&LiftPl> {
        self.extension.as_ref()
    }
}

fn floor_of(x: &Scalar) -> i64 {
    match x {
        Scalar::Exact(x) => floor_i64(x),
        Scalar::Float(x) => x.floor() as i64,
    }
}

fn abs_diff(a: &Scalar, b: &Scalar) -> f64 {
    a.sub(b).to_f64().abs()
}

/// Tabulates `θ̃` on the orbit points of all words up to `max_syllables`
/// and checks well-definedness, strict monotonicity and density before
/// measuring equivariance and `θ̃⁵ = T₁`.
pub fn build_theta(phi: &CircleAction, markov: &MarkovCertificate, opts: &ThetaOptions) -> Result<ThetaMap> {
    let thr = opts.threshold;
    let x0 = markov.x0.clone();
    let ab = Word::from_syllables([Syllable::A, Syllable::B]);
    let abx0 = phi.eval_word(&ab, &x0).add_int(-1);
    let words: Vec<Word> = std::iter::once(Word::identity()).chain(enumerate(opts.max_syllables)?).collect();
    let mut raw: Vec<ThetaEntry> = words
        .iter()
        .map(|w| {
            let (p, q) = (phi.eval_word(w, &x0), phi.eval_word(w, &abx0));
            let n = floor_of(&p);
            ThetaEntry { word: w.clone(), p: p.add_int(-n), q: q.add_int(-n) }
        })
        .collect();
    raw.sort_by(|u, v| u.p.cmp_with(&v.p).then_with(|| u.word.cmp(&v.word)));
    if !phi.is_exact() {
        // Points just below 1 coincide with points at 0 on the circle.
        let wrap = raw.iter().rev().take_while(|e| e.p.to_f64() > 1.0 - thr).count();
        let tail: Vec<ThetaEntry> = raw
            .drain(raw.len() - wrap..)
            .map(|e| ThetaEntry { p: e.p.add_int(-1), q: e.q.add_int(-1), word: e.word })
            .collect();
        raw.splice(0..0, tail);
    }

    let mut table: Vec<ThetaEntry> = Vec::new();
    for e in raw {
        match table.last() {
            Some(last) if eq(&last.p, &e.p, thr) => {
                if !eq(&last.q, &e.q, thr) {
                    return Err(Error::WellDefinednessFailure(format!(
                        "{} and {} send x0 to {} but ab(x0) to {} and {}",
                        last.word,
                        e.word,
                        e.p.render(),
                        last.q.render(),
                        e.q.render()
                    )));
                }
            }
            _ => table.push(e),
        }
    }

    let m = table.len();
    for i in 0..m {
        let (cur, next) = (&table[i], &table[(i + 1) % m]);
        let next_q = if i + 1 == m { next.q.add_int(1) } else { next.q.clone() };
        if cur.q.cmp_with(&next_q) != std::cmp::Ordering::Less {
            return Err(Error::MonotonicityFailure(format!(
                "{} < {} on orbit points but theta gives {} >= {}",
                cur.word,
                next.word,
                cur.q.render(),
                next_q.render()
            )));
        }
    }
    let largest_gap = (0..m)
        .map(|i| {
            let next = if i + 1 == m { table[0].p.add_int(1) } else { table[i + 1].p.clone() };
            next.sub(&table[i].p).to_f64()
        })
        .fold(0.0, f64::max);
    if largest_gap > opts.max_gap {
        return Err(Error::DensityFailure(format!(
            "largest gap {largest_gap:.4} between {} orbit points exceeds {}; raise max_syllables",
            m, opts.max_gap
        )));
    }

    let extension = if phi.is_exact() {
        let pts: Vec<(Q, Q)> = table
            .iter()
            .map(|e| (e.p.as_exact().expect("exact").clone(), e.q.as_exact().expect("exact").clone()))
            .collect();
        Some(LiftPl::from_any_points(pts)?)
    } else {
        None
    };
    let mut theta = ThetaMap {
        x0,
        table,
        words_checked: words.len(),
        max_syllables: opts.max_syllables,
        threshold: thr,
        largest_gap,
        equivariance_residual: 0.0,
        period_residual: 0.0,
        deck_shift: None,
        exact: phi.is_exact(),
        extension,
    };

    let gens = [phi.lift_a(), phi.lift_b()];
    let mut equiv: f64 = 0.0;
    let mut period: f64 = 0.0;
    for e in &theta.table {
        for g in gens {
            equiv = equiv.max(abs_diff(&theta.evaluate(&g.evaluate(&e.p)), &g.evaluate(&e.q)));
        }
        let p5 = (0..5).fold(e.p.clone(), |y, _| theta.evaluate(&y));
        period = period.max(abs_diff(&p5, &e.p.add_int(1)));
    }
    theta.equivariance_residual = equiv;
    theta.period_residual = period;
    theta.deck_shift = match &theta.extension {
        Some(ext) => ext.as_translation().map(Scalar::Exact),
        None => {
            let first = theta.table[0].q.sub(&theta.table[0].p);
            theta.table.iter().all(|e| eq(&e.q.sub(&e.p), &first, thr)).then_some(first)
        }
    };
    Ok(theta)
}
