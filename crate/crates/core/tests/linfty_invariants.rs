use defmorph::exact_linalg::Rational;
use defmorph::hochschild::{coalgebraic_residuals, AlgebraMorphism};
use defmorph::linfty::{
    d_corestriction, dhat_squared_on_symmetrization, differential_element, encode, mc_full, residuals_as_g,
    GElement, Linfty, Part, Twisted, Untwisted,
};
use defmorph::sampling::{random_algebra, random_element, random_morphism, AlgebraShape};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALL: [Part; 3] = [Part::Alpha, Part::Beta, Part::Gamma];
const CAP: usize = 3;

fn shape() -> AlgebraShape {
    AlgebraShape {
        max_dim: 2,
        ..AlgebraShape::default()
    }
}

fn rational(_: &mut ChaCha8Rng, r: Rational) -> Rational {
    r
}

fn random_word(rng: &mut ChaCha8Rng, l: &Linfty, max_len: usize) -> Vec<GElement<Rational>> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| {
            let g = rng.gen_range(-1..=2);
            random_element(rng, l, g, &ALL, 0.5, rational)
        })
        .collect()
}

fn pair_space(rng: &mut ChaCha8Rng) -> (Linfty, AlgebraMorphism) {
    let (m, _) = random_morphism(rng, shape());
    (Linfty::for_morphism(&m, CAP), m)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn untwisted_brackets_square_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_algebra(&mut rng, shape());
        let (b, _) = random_algebra(&mut rng, shape());
        let l = Linfty::new(a.basis().clone(), b.basis().clone(), CAP);
        let word = random_word(&mut rng, &l, 3);
        let r = dhat_squared_on_symmetrization(&Untwisted { space: &l }, &word);
        prop_assert!(r.is_zero(), "residual {:?}", r);
    }

    #[test]
    fn brackets_twisted_by_the_differentials_square_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_algebra(&mut rng, shape());
        let (b, _) = random_algebra(&mut rng, shape());
        let l = Linfty::new(a.basis().clone(), b.basis().clone(), CAP);
        let tw = Twisted::new(&l, differential_element(&a, &b)).unwrap();
        let word = random_word(&mut rng, &l, 3);
        let r = dhat_squared_on_symmetrization(&tw, &word);
        prop_assert!(r.is_zero(), "residual {:?}", r);
    }

    #[test]
    fn brackets_twisted_by_a_morphism_square_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, m) = pair_space(&mut rng);
        let tw = Twisted::new(&l, encode(&m)).unwrap();
        let word = random_word(&mut rng, &l, 3);
        let r = dhat_squared_on_symmetrization(&tw, &word);
        prop_assert!(r.is_zero(), "residual {:?}", r);
    }

    #[test]
    fn brackets_have_degree_one(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, _) = pair_space(&mut rng);
        let len = rng.gen_range(2..=CAP + 1);
        let degs: Vec<i32> = (0..len).map(|_| rng.gen_range(-1..=2)).collect();
        let word: Vec<GElement<Rational>> = degs
            .iter()
            .map(|&g| random_element(&mut rng, &l, g, &ALL, 0.7, rational))
            .collect();
        let refs: Vec<&GElement<Rational>> = word.iter().collect();
        let out = d_corestriction(&l, &refs);
        // sg-degrees add up, plus one
        let expected = degs.iter().map(|g| g - 1).sum::<i32>() + 2;
        for g in out.g_degrees() {
            prop_assert_eq!(g, expected);
        }
    }

    #[test]
    fn mc_equation_is_the_ainfty_system(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, m) = pair_space(&mut rng);
        let el = random_element(&mut rng, &l, 1, &ALL, 0.4, rational);
        let total = encode(&m).plus(&el);
        prop_assert_eq!(mc_full(&l, &total), residuals_as_g(&l, &total));
    }

    #[test]
    fn mc_equation_matches_coalgebra_residuals(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, m) = pair_space(&mut rng);
        let el = random_element(&mut rng, &l, 1, &ALL, 0.4, rational);
        let total = encode(&m).plus(&el);
        let [r1, r2, r3] = coalgebraic_residuals(
            &total.alpha,
            &total.beta,
            &total.gamma,
            &Rational::one(),
            CAP,
        );
        // the brackets are the negated coalgebraic squares
        let lhs = mc_full(&l, &total);
        prop_assert_eq!(lhs.alpha, r1.neg());
        prop_assert_eq!(lhs.beta, r2.neg());
        prop_assert_eq!(lhs.gamma, r3.neg());
    }
}

#[test]
fn encoded_morphisms_solve_the_mc_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (l, m) = pair_space(&mut rng);
        assert!(mc_full(&l, &encode(&m)).is_zero());
    }
}
