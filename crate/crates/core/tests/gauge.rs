use defmorph::coeff::ArtinSeries;
use defmorph::deformation::{conjugation_oracle, GaugeOutcome, Problem};
use defmorph::exact_linalg::Rational;
use defmorph::linfty::{GElement, HElement, Part};
use defmorph::sampling::{random_element, random_morphism, small_rational, AlgebraShape};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDER: usize = 3;
const CAP: usize = 3;

fn series(rng: &mut ChaCha8Rng, r: Rational) -> ArtinSeries {
    let mut c = vec![Rational::zero(); ORDER + 1];
    c[1] = r;
    for x in c.iter_mut().skip(2) {
        if rng.gen_bool(0.3) {
            *x = small_rational(rng);
        }
    }
    ArtinSeries::from_coeffs(c)
}

fn setup(seed: u64) -> (Problem, HElement<ArtinSeries>, GElement<ArtinSeries>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = AlgebraShape {
        max_dim: 2,
        ..AlgebraShape::default()
    };
    let (m, _) = random_morphism(&mut rng, shape);
    let p = Problem::new(&m, CAP, ORDER);
    let h = random_element(&mut rng, &p.space, 0, &[Part::Alpha, Part::Beta], 0.5, series);
    let g1 = random_element(
        &mut rng,
        &p.space,
        1,
        &[Part::Alpha, Part::Beta, Part::Gamma],
        0.4,
        series,
    );
    (p, HElement::from_g(&h), g1, rng)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn flow_agrees_with_conjugation(seed in any::<u64>()) {
        let (p, h, g1, _) = setup(seed);
        let flowed = p.gauge_action(&h, &g1).unwrap();
        let base = p.base.to_series(ORDER);
        let oracle = conjugation_oracle(&p.space, &base.plus(&g1), &h, ORDER);
        prop_assert_eq!(base.plus(&flowed), oracle);
    }

    #[test]
    fn gauge_inverse_returns_to_start(seed in any::<u64>()) {
        let (p, h, g1, _) = setup(seed);
        let there = p.gauge_action(&h, &g1).unwrap();
        let back = p.gauge_action(&h.neg(), &there).unwrap();
        prop_assert_eq!(back, g1);
    }

    #[test]
    fn witnesses_are_found_for_gauge_images(seed in any::<u64>()) {
        let (p, h, _, _) = setup(seed);
        let zero = p.zero_solution();
        let zero = defmorph::deformation::MCSolution { verified_order: ORDER, ..zero };
        let moved = p.gauge_exp(&h, &zero).unwrap();
        prop_assert_eq!(p.verified_order(&moved.element).unwrap(), ORDER);
        match p.gauge_equivalent(&zero, &moved).unwrap() {
            GaugeOutcome::Equivalent(w) => {
                prop_assert_eq!(p.gauge_exp(&w, &zero).unwrap().element, moved.element);
            }
            other => prop_assert!(false, "no witness: {:?}", other),
        }
    }
}
