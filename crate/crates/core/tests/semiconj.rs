use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotkit::actions::{fuchsian_o23_pl, k_fold_lift, random_action, random_conjugator, RandomParams, RotationTriple};
use rotkit::circle::{translation_number_enclosure, LiftHomeo};
use rotkit::rational::{q, qi, Scalar, Q};
use rotkit::semiconj::{build_markov, build_theta, certify_case1, path_witness, Case1Options, ThetaOptions};
use rotkit::words::{Syllable, Word};

fn case1() -> RotationTriple {
    RotationTriple::of((1, 2), (1, 3), (0, 1))
}

fn case2() -> RotationTriple {
    RotationTriple::of((1, 2), (2, 3), (1, 5))
}

fn ab() -> Word {
    Word::from_syllables([Syllable::A, Syllable::B])
}

fn exact(x: &Scalar) -> Q {
    x.as_exact().expect("exact").clone()
}

#[test]
fn ab_translation_numbers() {
    let phi = fuchsian_o23_pl();
    let psi = k_fold_lift(&phi, 5).unwrap();
    assert!(translation_number_enclosure(&phi.apply(&ab()), 1000, 4).contains(&qi(1)));
    assert!(translation_number_enclosure(&psi.apply(&ab()), 1000, 4).contains(&q(6, 5)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Conjugating the five-fold lift by `h` turns the deck translation by
    /// `1/5` into `h ∘ T_{1/5} ∘ h⁻¹`.
    #[test]
    fn theta_of_conjugate_matches_conjugated_deck_translation(seed in any::<u64>(), n in 1usize..6) {
        let psi = k_fold_lift(&fuchsian_o23_pl(), 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_conjugator(&mut rng, n, 20, 16);
        let phi = psi.conjugate(&LiftHomeo::Pl(h.clone())).unwrap();
        let cert = build_markov(&phi, 6, 0.0).unwrap();
        let theta = build_theta(&phi, &cert, &ThetaOptions { max_syllables: 10, max_gap: 1.0, ..ThetaOptions::default() }).unwrap();
        let h_inv = h.inverse();
        for e in &theta.table {
            let oracle = h.eval(&(h_inv.eval(&exact(&e.p)) + q(1, 5)));
            prop_assert_eq!(exact(&e.q), oracle);
        }
        prop_assert!(theta.passed());
    }

    #[test]
    fn markov_windows_agree(seed in 0u64..1000, w in 1i64..6, extra in 1i64..5) {
        let phi = random_action(&case2(), seed, &RandomParams::default()).unwrap();
        let small = build_markov(&phi, w, 0.0).unwrap();
        let large = build_markov(&phi, w + extra, 0.0).unwrap();
        prop_assert!(small.passed() && large.passed());
        prop_assert_eq!(&small.x0, &large.x0);
        for iv in &small.intervals {
            prop_assert_eq!(Some(iv), large.interval(iv.l));
        }
    }

    #[test]
    fn theta_gap_shrinks_with_syllables(seed in 0u64..1000) {
        let phi = random_action(&case2(), seed, &RandomParams::default()).unwrap();
        let cert = build_markov(&phi, 10, 0.0).unwrap();
        let opts = |n| ThetaOptions { max_syllables: n, max_gap: 1.0, ..ThetaOptions::default() };
        let gaps: Vec<f64> = (2..=10).step_by(2).map(|n| build_theta(&phi, &cert, &opts(n)).unwrap().largest_gap).collect();
        prop_assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{:?}", gaps);
    }

    #[test]
    fn path_steps_are_certified(s0 in 0u64..1000, s1 in 0u64..1000, steps in 2usize..6) {
        let params = RandomParams { breakpoints: 2, ..RandomParams::default() };
        let phi0 = random_action(&case1(), s0, &params).unwrap();
        let phi1 = random_action(&case1(), s1, &params).unwrap();
        let path = path_witness(&phi0, &phi1, steps).unwrap();
        prop_assert_eq!(path.len(), steps);
        for phi in &path {
            prop_assert_eq!(phi.lift_b(), &LiftHomeo::rotation(q(1, 3)));
            prop_assert!(certify_case1(phi, 4, &Case1Options::default()).unwrap().passed());
        }
    }
}
