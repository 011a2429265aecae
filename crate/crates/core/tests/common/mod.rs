#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rotkit::circle::LiftPl;
use rotkit::rational::{q, qi, Q};
use rotkit::words::{ConjClass, Word};

/// Expands to generator letters, deletes `aa` and `bbb` until stable, then
/// writes runs `bb` back as `B`.
pub fn oracle_normal(tokens: &str) -> String {
    let mut s: String = tokens
        .chars()
        .map(|c| match c {
            'B' => "bb".to_string(),
            c => c.to_string(),
        })
        .collect();
    loop {
        let t = s.replace("aa", "").replace("bbb", "");
        if t == s {
            break;
        }
        s = t;
    }
    s.replace("bb", "B")
}

pub fn oracle_invert(tokens: &str) -> String {
    let expanded: String = oracle_normal(tokens).replace('B', "bb");
    let inv: String = expanded.chars().rev().map(|c| if c == 'b' { "bb" } else { "a" }).collect();
    oracle_normal(&inv)
}

/// All shortest words reachable by conjugating with single letters, found by
/// breadth-first search that never lengthens the word.
pub fn oracle_minimal_conjugates(tokens: &str) -> BTreeSet<String> {
    let start = oracle_normal(tokens);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for g in ["a", "b", "B"] {
            let c = oracle_normal(&format!("{g}{w}{}", oracle_invert(g)));
            if c.len() <= w.len() && seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let min = seen.iter().map(String::len).min().expect("nonempty");
    seen.into_iter().filter(|w| w.len() == min).collect()
}

/// Checks a classification against [`oracle_minimal_conjugates`].
pub fn oracle_agrees(tokens: &str, class: &ConjClass) -> bool {
    let mins = oracle_minimal_conjugates(tokens);
    let first = mins.iter().next().expect("nonempty").clone();
    match class {
        ConjClass::Identity => first.is_empty(),
        ConjClass::PowerOfAlpha => mins.contains("a"),
        ConjClass::PowerOfBeta(1) => mins.contains("b"),
        ConjClass::PowerOfBeta(2) => mins.contains("B"),
        ConjClass::PowerOfBeta(_) => false,
        ConjClass::Hyperbolic(c) => first.len() >= 2 && mins.contains(&c.to_string()) && c.to_string().starts_with('a'),
    }
}

/// Random token string over `a, b, B`.
pub fn random_tokens(rng: &mut impl Rng, len: usize) -> String {
    (0..len).map(|_| ['a', 'b', 'B'][rng.gen_range(0..3)]).collect()
}

/// Random reduced word with exactly `n` syllables.
pub fn random_word(rng: &mut impl Rng, n: usize) -> Word {
    let mut s = String::new();
    let mut alpha = rng.gen_bool(0.5);
    for _ in 0..n {
        s.push(if alpha {
            'a'
        } else if rng.gen_bool(0.5) {
            'b'
        } else {
            'B'
        });
        alpha = !alpha;
    }
    s.parse().expect("valid tokens")
}

/// Strictly increasing values `lo < v_1 < … < v_k < hi` on the grid `Z/den`
/// refined enough to fit `k` points.
fn increasing_between(rng: &mut impl Rng, lo: &Q, hi: &Q, k: usize) -> Vec<Q> {
    let den = 64 * (k as i64 + 1);
    let mut v: Vec<Q> = (0..k).map(|_| lo + (hi - lo) * q(rng.gen_range(1..den), den)).collect();
    v.sort();
    v.dedup();
    v
}

/// A PL lift with translation number `p/q + m`: a planted orbit
/// `x_i ↦ x_{i+p}` (indices mod `q`, carrying integers) plus random monotone
/// pieces between orbit points.
pub fn planted_lift(rng: &mut impl Rng, p: i64, q_: i64, m: i64) -> LiftPl {
    let grid = 8 * q_;
    let mut cells: Vec<i64> = (0..grid).collect();
    let mut xs: Vec<Q> = Vec::new();
    for _ in 0..q_ {
        let i = rng.gen_range(0..cells.len());
        xs.push(q(cells.swap_remove(i), grid));
    }
    xs.sort();
    let image = |i: i64| -> Q {
        let j = i + p;
        &xs[j.rem_euclid(q_) as usize] + qi(j.div_euclid(q_) + m)
    };
    let mut pts: Vec<(Q, Q)> = Vec::new();
    for i in 0..q_ {
        let (x_lo, y_lo) = (xs[i as usize].clone(), image(i));
        let x_hi = if i + 1 < q_ { xs[i as usize + 1].clone() } else { &xs[0] + qi(1) };
        let y_hi = image(i + 1);
        pts.push((x_lo.clone(), y_lo.clone()));
        let k = rng.gen_range(0..3);
        let inner_x = increasing_between(rng, &x_lo, &x_hi, k);
        let inner_y = increasing_between(rng, &y_lo, &y_hi, inner_x.len());
        pts.extend(inner_x.into_iter().zip(inner_y));
    }
    LiftPl::from_any_points(pts).expect("increasing data")
}
