mod common;

use common::planted_lift;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotkit::actions::random_conjugator;
use rotkit::circle::{compose, detect_rational_rotation, power, translation_number_enclosure, LiftHomeo};
use rotkit::rational::{q, qi, Q};

fn planted(seed: u64, p: i64, den: i64, m: i64) -> LiftHomeo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LiftHomeo::Pl(planted_lift(&mut rng, p, den, m))
}

fn detected(f: &LiftHomeo, q_max: i64) -> Option<Q> {
    detect_rational_rotation(f, q_max).ok().flatten().map(|w| w.translation)
}

fn planted_args() -> impl Strategy<Value = (u64, i64, i64, i64)> {
    (any::<u64>(), 1i64..=12, -2i64..=2).prop_flat_map(|(seed, den, m)| (Just(seed), 0..den, Just(den), Just(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosure_contains_planted_value((seed, p, den, m) in planted_args(), n in 50u64..2000) {
        let f = planted(seed, p, den, m);
        let t = q(p, den) + qi(m);
        let enc = translation_number_enclosure(&f, n, 4);
        prop_assert!(enc.contains(&t), "{enc} misses {t}");
        prop_assert!(enc.width() <= q(2, n as i64));
    }

    #[test]
    fn conjugation_preserves_translation_number((seed, p, den, m) in planted_args(), hseed in any::<u64>()) {
        let f = planted(seed, p, den, m);
        let mut rng = ChaCha8Rng::seed_from_u64(hseed);
        let h = LiftHomeo::Pl(random_conjugator(&mut rng, 3, 16, 16));
        let g = compose(&h, &compose(&f, &h.inverse()));
        let t = q(p, den) + qi(m);
        prop_assert!(translation_number_enclosure(&g, 1000, 4).contains(&t));
        prop_assert_eq!(detected(&g, den), Some(t));
    }

    #[test]
    fn cover_lift_divides_translation_number((seed, p, den, m) in planted_args(), k in 1i64..=5, j in -3i64..=3) {
        let f = planted(seed, p, den, m);
        let LiftHomeo::Pl(pl) = &f else { unreachable!() };
        let g = LiftHomeo::Pl(pl.cover(k, j));
        let expected = (q(p, den) + qi(m) + qi(j)) / qi(k);
        prop_assert!(translation_number_enclosure(&g, 1000, 4).contains(&expected));
        prop_assert_eq!(detected(&g, den * k), Some(expected));
    }

    #[test]
    fn powers_scale_translation_number((seed, p, den, m) in planted_args(), n in -3i64..=3) {
        let f = planted(seed, p, den, m);
        let expected = (q(p, den) + qi(m)) * qi(n);
        prop_assert!(translation_number_enclosure(&power(&f, n), 500, 4).contains(&expected));
    }
}

#[test]
fn rigid_rotations_are_points() {
    for t in [q(0, 1), q(1, 3), q(-7, 5), q(22, 7)] {
        let enc = translation_number_enclosure(&LiftHomeo::rotation(t.clone()), 10, 1);
        assert_eq!((enc.lo.clone(), enc.hi), (t.clone(), t));
    }
}
