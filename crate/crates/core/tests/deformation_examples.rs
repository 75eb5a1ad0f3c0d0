use defmorph::coeff::ArtinSeries;
use defmorph::cohomology::LinftyCohomology;
use defmorph::deformation::{Extension, GaugeOutcome, MCSolution, Problem};
use defmorph::exact_linalg::Rational;
use defmorph::hochschild::AlgebraMorphism;
use defmorph::linfty::{residuals_as_g, symmetric_bracket, GElement, HElement, Slice};
use defmorph::suite::corpus;

const CAP: usize = 4;

fn morphism(name: &str) -> AlgebraMorphism {
    corpus()
        .into_iter()
        .find(|(n, _)| *n == name)
        .expect("corpus entry")
        .1
}

/// Two tangent classes whose bracket is nonzero in cohomology.
fn obstructed_pair(g: &AlgebraMorphism) -> (GElement<Rational>, GElement<Rational>) {
    let h = LinftyCohomology::new(g, CAP);
    let reps = h.representatives(1).unwrap();
    let p = Problem::new(g, CAP, 2);
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let b = symmetric_bracket(&h.space, &h.base, &[&reps[i], &reps[j]]).unwrap();
            if p.obstruction_coords(&b).unwrap().iter().any(|c| !c.is_zero()) {
                return (reps[i].clone(), reps[j].clone());
            }
        }
    }
    panic!("no pair of tangent classes with a nonzero bracket");
}

fn obstruction(p: &Problem, sol: &MCSolution) -> Vec<Rational> {
    match p.extend_order(sol).unwrap() {
        Extension::Obstructed(o) => {
            assert_eq!(o.order, 2);
            o.class
        }
        Extension::Extended(_) => panic!("expected an obstruction"),
    }
}

#[test]
fn single_tangent_classes_of_the_nilpotent_corpus_are_unobstructed() {
    for name in ["nilpotent-identity", "nilpotent-zero", "nilpotent-projection"] {
        let g = morphism(name);
        let p = Problem::new(&g, CAP, 3);
        for x in LinftyCohomology::new(&g, CAP).representatives(1).unwrap() {
            let sol = p.first_order(&x).unwrap();
            assert!(
                matches!(p.solve_to(&sol, 3).unwrap(), Extension::Extended(_)),
                "{name}"
            );
        }
    }
}

#[test]
fn sum_of_two_classes_is_obstructed_by_their_bracket() {
    let g = morphism("nilpotent-zero");
    let p = Problem::new(&g, CAP, 2);
    let (x, y) = obstructed_pair(&g);
    let sol = p.first_order(&x.plus(&y)).unwrap();
    let class = obstruction(&p, &sol);
    assert!(class.iter().any(|c| !c.is_zero()));

    // the class of the bracket of the two summands
    let b = symmetric_bracket(&p.space, &p.base, &[&x, &y]).unwrap();
    assert_eq!(class, p.obstruction_coords(&b).unwrap());

    // the t² coefficient of the A∞ residuals of the deformed triple
    let total = p.base.to_series(2).plus(&sol.element);
    let brute = residuals_as_g(&p.space, &total).coefficient(2);
    assert_eq!(class, p.obstruction_coords(&brute).unwrap());
}

#[test]
fn obstruction_class_is_gauge_invariant() {
    let g = morphism("nilpotent-zero");
    let p = Problem::new(&g, CAP, 2);
    let (x, y) = obstructed_pair(&g);
    let sol = p.first_order(&x.plus(&y)).unwrap();
    let class = obstruction(&p, &sol);
    let slice = p.gauge_slice();
    for k in 0..slice.dim() {
        // h = t·e_k + t²·(−e_k)
        let e = slice.unit(&p.space, k);
        let h = HElement::from_g(&e.times_t_power(2, 1).plus(&e.neg().times_t_power(2, 2)));
        let moved = p.gauge_exp(&h, &sol).unwrap();
        assert_eq!(moved.verified_order, 1);
        assert_eq!(obstruction(&p, &moved), class, "gauge direction {k}");
    }
}

#[test]
fn distinct_tangent_classes_are_inequivalent_at_first_order() {
    let g = morphism("nilpotent-identity");
    let p = Problem::new(&g, CAP, 1);
    let reps = LinftyCohomology::new(&g, CAP).representatives(1).unwrap();
    assert!(reps.len() >= 2);
    let s0 = p.first_order(&reps[0]).unwrap();
    let s1 = p.first_order(&reps[1]).unwrap();
    assert_eq!(
        p.gauge_equivalent(&s0, &s1).unwrap(),
        GaugeOutcome::Inequivalent {
            order: 1,
            exact: true
        }
    );
    assert_eq!(
        p.gauge_equivalent(&s0, &p.zero_solution()).unwrap(),
        GaugeOutcome::Inequivalent {
            order: 1,
            exact: true
        }
    );
}

#[test]
fn cohomologous_first_order_terms_are_equivalent() {
    let g = morphism("nilpotent-identity");
    let p = Problem::new(&g, CAP, 1);
    let reps = LinftyCohomology::new(&g, CAP).representatives(1).unwrap();
    let below = Slice::new(&p.space, 0);
    let y = below.element(&p.space, &vec![Rational::one(); below.dim()]);
    let shifted = reps[0].plus(&p.differential(&y));
    assert_ne!(shifted, reps[0]);
    let s0 = p.first_order(&reps[0]).unwrap();
    let s1 = p.first_order(&shifted).unwrap();
    match p.gauge_equivalent(&s0, &s1).unwrap() {
        GaugeOutcome::Equivalent(h) => {
            let moved = p.gauge_exp(&h, &s0).unwrap();
            assert_eq!(moved.element, s1.element);
        }
        other => panic!("expected equivalence, got {other:?}"),
    }
}

#[test]
fn series_coefficients_are_in_the_maximal_ideal() {
    let g = morphism("null-identity");
    let p = Problem::new(&g, CAP, 3);
    let sol = defmorph::suite::null_flat_family(&p).unwrap();
    let Extension::Extended(full) = p.solve_to(&sol, 3).unwrap() else {
        panic!("flat family obstructed")
    };
    assert!(full.element.in_maximal_ideal());
    let zero: GElement<ArtinSeries> = p.space.zero();
    assert_ne!(full.element, zero);
}
