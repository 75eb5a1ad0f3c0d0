//! Randomized and corpus-driven verification runs, shared by the command
//! line and the acceptance tests. Trial `i` draws from a ChaCha stream
//! seeded with `seed + i`; trials run in parallel and are reported in trial
//! order.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{ArtinSeries, Coeff};
use crate::cohomology::{
    build_cone, build_gs, cohomology_table, linfty_binary_on_cohomology, CohomologyError, LinftyCohomology,
    TableRow,
};
use crate::deformation::{conjugation_oracle, DeformationError, Extension, MCSolution, Problem};
use crate::exact_linalg::Rational;
use crate::graded_signs::GradedBasis;
use crate::hochschild::{AlgebraMorphism, DGAlgebra};
use crate::linfty::{
    d_corestriction, dhat_squared_on_symmetrization, differential_element, encode, mc_residual,
    residuals_as_g, Brackets, GElement, HElement, Linfty, Part, Slice, Twisted, Untwisted,
};
use crate::multimap::MultiMap;
use crate::sampling::{
    random_algebra, random_element, random_morphism, small_rational, AlgebraShape, Rejections,
};

fn rng_for(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64))
}

/// Human-readable listing of the nonzero entries of an element.
pub fn describe<C: Coeff>(x: &GElement<C>) -> Vec<String> {
    let mut out = Vec::new();
    for p in [Part::Alpha, Part::Beta, Part::Gamma] {
        let m = x.part(p);
        for ((w, o), c) in m.entries() {
            let ins: Vec<&str> = w.iter().map(|&i| m.source().name(i)).collect();
            out.push(format!(
                "{}({} -> {}) = {:?}",
                p.letter(),
                ins.join(" "),
                m.target().name(*o),
                c
            ));
        }
    }
    out
}

fn rational(_: &mut ChaCha8Rng, r: Rational) -> Rational {
    r
}

/// A homogeneous single-part element of a random nonempty g-degree, with
/// about three nonzero entries.
fn random_factor(rng: &mut ChaCha8Rng, l: &Linfty, part: Part) -> Option<GElement<Rational>> {
    let degrees: Vec<(i32, usize)> = (-2..=4)
        .map(|g| (g, Slice::with_parts(l, g, &[part]).dim()))
        .filter(|(_, d)| *d > 0)
        .collect();
    let &(g, dim) = degrees.choose(rng)?;
    let density = (3.0 / dim as f64).min(1.0);
    for _ in 0..8 {
        let x = random_element(rng, l, g, &[part], density, rational);
        if !x.is_zero() {
            return Some(x);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityFailure {
    pub trial: usize,
    pub brackets: String,
    pub word: Vec<Vec<String>>,
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeFailure {
    pub trial: usize,
    pub word: Vec<Vec<String>>,
    pub expected: i32,
    pub found: Vec<i32>,
}

/// Outcome of the d̂² and degree checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LinftyReport {
    pub trials: usize,
    /// Words checked, keyed by the sorted part letters of their factors.
    pub words_checked: BTreeMap<String, usize>,
    pub brackets_checked: usize,
    pub failures: Vec<IdentityFailure>,
    pub degree_failures: Vec<DegreeFailure>,
    pub rejections: Rejections,
}

impl LinftyReport {
    pub fn identity_ok(&self) -> bool {
        self.failures.is_empty() && self.trials > 0
    }

    pub fn degree_ok(&self) -> bool {
        self.degree_failures.is_empty() && self.brackets_checked > 0
    }

    fn absorb(&mut self, other: LinftyReport) {
        self.trials += other.trials;
        for (k, v) in other.words_checked {
            *self.words_checked.entry(k).or_default() += v;
        }
        self.brackets_checked += other.brackets_checked;
        self.failures.extend(other.failures);
        self.degree_failures.extend(other.degree_failures);
        self.rejections.absorb(other.rejections);
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LinftyConfig {
    pub trials: usize,
    pub seed: u64,
    pub word_cap: usize,
    pub arity_cap: usize,
    pub words_per_trial: usize,
    pub shape: AlgebraShape,
}

impl Default for LinftyConfig {
    fn default() -> Self {
        LinftyConfig {
            trials: 100,
            seed: 0,
            word_cap: 4,
            arity_cap: 4,
            words_per_trial: 10,
            shape: AlgebraShape::default(),
        }
    }
}

/// Checks `d̂² = 0` on symmetrized words and the degree of every bracket,
/// for one set of brackets.
fn check_brackets<C: Coeff, B: Brackets<C>>(
    br: &B,
    label: &str,
    trial: usize,
    words: &[Vec<GElement<C>>],
    letters: &[String],
    report: &mut LinftyReport,
) {
    for (word, key) in words.iter().zip(letters) {
        *report.words_checked.entry(format!("{label}:{key}")).or_default() += 1;
        let r = dhat_squared_on_symmetrization(br, word);
        if !r.is_zero() {
            report.failures.push(IdentityFailure {
                trial,
                brackets: label.to_string(),
                word: word.iter().map(describe).collect(),
                residual: describe(&r),
            });
        }
        // every contiguous subword is a bracket input
        for i in 0..word.len() {
            for j in i + 1..=word.len().min(i + br.max_length()) {
                let sub: Vec<&GElement<C>> = word[i..j].iter().collect();
                let out = br.bracket(&sub);
                report.brackets_checked += 1;
                let expected = sub
                    .iter()
                    .map(|x| x.g_degree().expect("homogeneous") - 1)
                    .sum::<i32>()
                    + 2;
                let found: Vec<i32> = out.g_degrees().into_iter().collect();
                if found.iter().any(|&g| g != expected) {
                    report.degree_failures.push(DegreeFailure {
                        trial,
                        word: sub.iter().map(|x| describe(x)).collect(),
                        expected,
                        found,
                    });
                }
            }
        }
    }
}

fn random_words(
    rng: &mut ChaCha8Rng,
    l: &Linfty,
    count: usize,
    word_cap: usize,
) -> (Vec<Vec<GElement<Rational>>>, Vec<String>) {
    let parts = [Part::Alpha, Part::Beta, Part::Gamma];
    let mut words = Vec::new();
    let mut letters = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(1..=word_cap);
        let mut word = Vec::new();
        let mut key: Vec<char> = Vec::new();
        for _ in 0..len {
            let p = *parts.choose(rng).unwrap();
            if let Some(x) = random_factor(rng, l, p) {
                word.push(x);
                key.push(p.letter());
            }
        }
        if word.is_empty() {
            continue;
        }
        key.sort_unstable();
        words.push(word);
        letters.push(key.into_iter().collect());
    }
    (words, letters)
}

/// Criteria on the L∞ structure itself: for random dg pairs, `d̂² = 0` for
/// the untwisted brackets and for the brackets twisted by the algebra
/// differentials, and every bracket has degree one.
pub fn verify_linfty(cfg: &LinftyConfig) -> LinftyReport {
    let per_trial: Vec<LinftyReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(cfg.seed, trial);
            let (a, ra) = random_algebra(&mut rng, cfg.shape);
            let (b, rb) = random_algebra(&mut rng, cfg.shape);
            let mut report = LinftyReport {
                trials: 1,
                ..Default::default()
            };
            report.rejections.absorb(ra);
            report.rejections.absorb(rb);
            let l = Linfty::new(a.basis().clone(), b.basis().clone(), cfg.arity_cap);
            let (words, letters) = random_words(&mut rng, &l, cfg.words_per_trial, cfg.word_cap);
            check_brackets(
                &Untwisted { space: &l },
                "untwisted",
                trial,
                &words,
                &letters,
                &mut report,
            );
            let tw = Twisted::new(&l, differential_element(&a, &b)).expect("x0 has g-degree 1");
            check_brackets(&tw, "dg", trial, &words, &letters, &mut report);
            report
        })
        .collect();
    let mut total = LinftyReport::default();
    for r in per_trial {
        total.absorb(r);
    }
    total
}

/// The same checks on the algebra pair of a fixed morphism, adding the
/// brackets twisted by the morphism itself. Trial `i` draws its words from
/// `seed + i`.
pub fn verify_linfty_on(gamma: &AlgebraMorphism, cfg: &LinftyConfig) -> LinftyReport {
    let l = Linfty::for_morphism(gamma, cfg.arity_cap);
    let x0 = differential_element(gamma.source(), gamma.target());
    let per: Vec<LinftyReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(cfg.seed, trial);
            let mut report = LinftyReport {
                trials: 1,
                ..Default::default()
            };
            let (words, letters) = random_words(&mut rng, &l, cfg.words_per_trial, cfg.word_cap);
            check_brackets(
                &Untwisted { space: &l },
                "untwisted",
                trial,
                &words,
                &letters,
                &mut report,
            );
            let dg = Twisted::new(&l, x0.clone()).expect("x0 has g-degree 1");
            check_brackets(&dg, "dg", trial, &words, &letters, &mut report);
            let mc = Twisted::new(&l, encode(gamma)).expect("encoded morphism has g-degree 1");
            check_brackets(&mc, "morphism", trial, &words, &letters, &mut report);
            report
        })
        .collect();
    let mut total = LinftyReport::default();
    for r in per {
        total.absorb(r);
    }
    total
}

/// Twisting check: brackets twisted by `g + g'` for an MC solution `g'`
/// over the series ring square to zero on random constant words.
pub fn verify_twisting(solutions: &[MCSolution], cap: usize, seed: u64, words: usize) -> LinftyReport {
    let per: Vec<LinftyReport> = solutions
        .par_iter()
        .enumerate()
        .map(|(i, sol)| {
            let mut rng = rng_for(seed, i);
            let l = Linfty::for_morphism(&sol.base, cap);
            let total = encode(&sol.base).to_series(sol.order).plus(&sol.element);
            let mut report = LinftyReport {
                trials: 1,
                ..Default::default()
            };
            let tw = match Twisted::new(&l, total) {
                Ok(tw) => tw,
                Err(e) => {
                    report.failures.push(IdentityFailure {
                        trial: i,
                        brackets: "mc".into(),
                        word: Vec::new(),
                        residual: vec![e.to_string()],
                    });
                    return report;
                }
            };
            let (ws, letters) = random_words(&mut rng, &l, words, 3);
            let ws: Vec<Vec<GElement<ArtinSeries>>> = ws
                .iter()
                .map(|w| w.iter().map(|x| x.to_series(sol.order)).collect())
                .collect();
            check_brackets(&tw, "mc", i, &ws, &letters, &mut report);
            report
        })
        .collect();
    let mut total = LinftyReport::default();
    for r in per {
        total.absorb(r);
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleFailure {
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleReport {
    pub trials: usize,
    /// Trials whose element solved the MC equation.
    pub solutions: usize,
    pub failures: Vec<OracleFailure>,
    pub rejections: Rejections,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.trials > 0
    }
}

fn series_in_ideal(rng: &mut ChaCha8Rng, order: usize, r: Rational) -> ArtinSeries {
    let mut c = vec![Rational::zero(); order + 1];
    let lead = rng.gen_range(1..=order.max(1)).min(order);
    c[lead] = r;
    for x in c.iter_mut().skip(lead + 1) {
        if rng.gen_bool(0.3) {
            *x = small_rational(rng);
        }
    }
    ArtinSeries::from_coeffs(c)
}

fn random_gauge(rng: &mut ChaCha8Rng, p: &Problem) -> HElement<ArtinSeries> {
    let order = p.order;
    let dim = p.gauge_slice().dim().max(1);
    let h = random_element(
        rng,
        &p.space,
        0,
        &[Part::Alpha, Part::Beta],
        (3.0 / dim as f64).min(1.0),
        |rng, r| series_in_ideal(rng, order, r),
    );
    HElement::from_g(&h)
}

/// A verified MC solution: a first-order cocycle pushed through the solver
/// when unobstructed, otherwise the gauge image of zero; then moved by a
/// random gauge transformation.
pub fn random_solution(rng: &mut ChaCha8Rng, p: &Problem) -> Result<MCSolution, DeformationError> {
    let mut sol = MCSolution {
        verified_order: p.order,
        ..p.zero_solution()
    };
    let cocycles = p.first_order_cocycles();
    if !cocycles.is_empty() {
        let mut x = p.space.zero();
        for c in &cocycles {
            if rng.gen_bool(0.3) {
                x.add_assign(&c.scale(&small_rational(rng)));
            }
        }
        if let Extension::Extended(s) = p.solve_to(&p.first_order(&x)?, p.order)? {
            sol = s;
        }
    }
    p.gauge_exp(&random_gauge(rng, p), &sol)
}

fn small_shape() -> AlgebraShape {
    AlgebraShape {
        max_dim: 2,
        ..AlgebraShape::default()
    }
}

/// MC ↔ A∞: for random degree-1 elements (half of them genuine solutions),
/// the MC residual equals the transported A∞ residuals entrywise, so one
/// vanishes exactly when the other does.
pub fn verify_mc_ainfty(trials: usize, seed: u64, order: usize, cap: usize) -> OracleReport {
    let per: Vec<OracleReport> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(seed, trial);
            let (m, rej) = random_morphism(&mut rng, small_shape());
            let p = Problem::new(&m, cap, order);
            let mut rep = OracleReport {
                trials: 1,
                rejections: rej,
                ..Default::default()
            };
            let el = if trial % 2 == 1 {
                match random_solution(&mut rng, &p) {
                    Ok(s) => s.element,
                    Err(e) => {
                        rep.failures.push(OracleFailure {
                            trial,
                            detail: e.to_string(),
                        });
                        return rep;
                    }
                }
            } else {
                let dim = Slice::new(&p.space, 1).dim().max(1);
                random_element(
                    &mut rng,
                    &p.space,
                    1,
                    &[Part::Alpha, Part::Beta, Part::Gamma],
                    (4.0 / dim as f64).min(1.0),
                    |rng, r| series_in_ideal(rng, order, r),
                )
            };
            let base = encode(&m).to_series(order);
            let mc = match mc_residual(&p.space, &el, &base) {
                Ok(r) => r,
                Err(e) => {
                    rep.failures.push(OracleFailure {
                        trial,
                        detail: e.to_string(),
                    });
                    return rep;
                }
            };
            let ainfty = residuals_as_g(&p.space, &base.plus(&el));
            if mc.is_zero() {
                rep.solutions += 1;
            }
            if mc != ainfty {
                rep.failures.push(OracleFailure {
                    trial,
                    detail: format!(
                        "MC residual {:?} differs from A-infinity residual {:?}",
                        describe(&mc),
                        describe(&ainfty)
                    ),
                });
            }
            rep
        })
        .collect();
    let mut total = OracleReport::default();
    for r in per {
        total.trials += r.trials;
        total.solutions += r.solutions;
        total.failures.extend(r.failures);
        total.rejections.absorb(r.rejections);
    }
    total
}

/// Gauge check: `gauge_exp` keeps the MC residual zero and agrees with the
/// conjugation of lifts.
pub fn verify_gauge(trials: usize, seed: u64, order: usize, cap: usize) -> OracleReport {
    let per: Vec<OracleReport> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(seed, trial);
            let (m, rej) = random_morphism(&mut rng, small_shape());
            let p = Problem::new(&m, cap, order);
            let mut rep = OracleReport {
                trials: 1,
                rejections: rej,
                ..Default::default()
            };
            let run = || -> Result<Option<String>, DeformationError> {
                let mut rng = rng.clone();
                let sol = random_solution(&mut rng, &p)?;
                let h = random_gauge(&mut rng, &p);
                let moved = p.gauge_exp(&h, &sol)?;
                if p.verified_order(&moved.element)? != order {
                    return Ok(Some("gauge image is not an MC solution".into()));
                }
                let base = encode(&m).to_series(order);
                let oracle = conjugation_oracle(&p.space, &base.plus(&sol.element), &h, order);
                if base.plus(&moved.element) != oracle {
                    return Ok(Some(format!(
                        "flow {:?} differs from conjugation {:?}",
                        describe(&base.plus(&moved.element)),
                        describe(&oracle)
                    )));
                }
                Ok(None)
            };
            match run() {
                Ok(None) => rep.solutions += 1,
                Ok(Some(detail)) => rep.failures.push(OracleFailure { trial, detail }),
                Err(e) => rep.failures.push(OracleFailure {
                    trial,
                    detail: e.to_string(),
                }),
            }
            rep
        })
        .collect();
    let mut total = OracleReport::default();
    for r in per {
        total.trials += r.trials;
        total.solutions += r.solutions;
        total.failures.extend(r.failures);
        total.rejections.absorb(r.rejections);
    }
    total
}

/// The named corpus morphisms.
pub fn corpus() -> Vec<(&'static str, AlgebraMorphism)> {
    let q = Rational::from_integer;
    let null = Arc::new(
        DGAlgebra::new(
            GradedBasis::from_degrees(&[0]).expect("basis"),
            vec![vec![vec![q(0)]]],
            None,
        )
        .expect("null algebra"),
    );
    let nilpotent = Arc::new(nilpotent_algebra());
    let projection = AlgebraMorphism::new(nilpotent.clone(), null.clone(), vec![vec![q(1)], vec![q(0)]])
        .expect("projection");
    vec![
        ("null-identity", AlgebraMorphism::identity(null.clone())),
        ("null-zero", AlgebraMorphism::zero(null.clone(), null.clone())),
        ("nilpotent-identity", AlgebraMorphism::identity(nilpotent.clone())),
        (
            "nilpotent-zero",
            AlgebraMorphism::zero(nilpotent.clone(), nilpotent.clone()),
        ),
        ("nilpotent-projection", projection),
    ]
}

/// `u·u = v`, all other products zero.
pub fn nilpotent_algebra() -> DGAlgebra {
    let q = Rational::from_integer;
    let basis = GradedBasis::new(vec![
        crate::graded_signs::BasisElement {
            name: "u".into(),
            degree: 0,
        },
        crate::graded_signs::BasisElement {
            name: "v".into(),
            degree: 0,
        },
    ])
    .expect("basis");
    let mut product = vec![vec![vec![q(0); 2]; 2]; 2];
    product[0][0][1] = q(1);
    DGAlgebra::new(basis, product, None).expect("nilpotent algebra")
}

/// First-order family `α' = β' = t·μ` for the null algebra's identity,
/// `μ(e, e) = e`.
pub fn null_flat_family(p: &Problem) -> Result<MCSolution, DeformationError> {
    let a = p.space.a.clone();
    let mut mu = MultiMap::zero(a.clone(), a.clone());
    mu.add_term(vec![0, 0], 0, Rational::one());
    let x1 = crate::deformation::from_plain(&mu, &mu, &MultiMap::zero(a.clone(), a));
    p.first_order(&x1)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntryReport {
    pub name: String,
    pub tangent_mc: usize,
    pub tangent_cone: usize,
    pub solutions: usize,
    pub obstructed: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CorpusReport {
    pub flat_family_order: usize,
    pub flat_family_unobstructed: bool,
    pub entries: Vec<CorpusEntryReport>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub solutions: Vec<MCSolution>,
}

impl CorpusReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.flat_family_unobstructed && !self.entries.is_empty()
    }
}

/// The deformation corpus run: the flat null-algebra family to `order`, the
/// tangent dimension computed on both sides for every entry, and every
/// first-order cocycle basis vector pushed through the solver.
pub fn verify_corpus(order: usize, cap: usize) -> Result<CorpusReport, DeformationError> {
    let mut report = CorpusReport::default();
    let entries = corpus();
    let (_, null_id) = &entries[0];
    let p = Problem::new(null_id, cap, order);
    match p.solve_to(&null_flat_family(&p)?, order)? {
        Extension::Extended(s) => {
            report.flat_family_order = s.verified_order;
            report.flat_family_unobstructed =
                s.verified_order == order && p.verified_order(&s.element)? == order;
            report.solutions.push(s);
        }
        Extension::Obstructed(o) => {
            report
                .failures
                .push(format!("flat family obstructed at order {}", o.order));
        }
    }
    for (name, g) in &entries {
        let p = Problem::new(g, cap, order);
        let tangent_mc = p.tangent_dimension();
        let cone = build_cone(g, cap, 3).map_err(cohomology_error)?;
        let tangent_cone = cone.cohomology_dim(2).map_err(cohomology_error)?;
        if tangent_mc != tangent_cone {
            report.failures.push(format!(
                "{name}: tangent {tangent_mc} from MC side, {tangent_cone} from the cone"
            ));
        }
        let mut solutions = 0;
        let mut obstructed = 0;
        for x in p.first_order_cocycles() {
            match p.solve_to(&p.first_order(&x)?, order)? {
                Extension::Extended(s) => {
                    if p.verified_order(&s.element)? != order {
                        report
                            .failures
                            .push(format!("{name}: solver output fails verification"));
                    }
                    solutions += 1;
                    report.solutions.push(s);
                }
                Extension::Obstructed(_) => obstructed += 1,
            }
        }
        report.entries.push(CorpusEntryReport {
            name: name.to_string(),
            tangent_mc,
            tangent_cone,
            solutions,
            obstructed,
        });
    }
    Ok(report)
}

fn cohomology_error(e: CohomologyError) -> DeformationError {
    DeformationError::Format(e.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonMismatch {
    pub case: String,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ComparisonReport {
    pub cases: usize,
    pub certified_rows: usize,
    pub mismatches: Vec<ComparisonMismatch>,
    pub errors: Vec<String>,
    pub rejections: Rejections,
}

impl ComparisonReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty() && self.cases > 0
    }
}

fn compare_one(name: String, g: &AlgebraMorphism, cap: usize, max_degree: i32) -> ComparisonReport {
    let mut rep = ComparisonReport {
        cases: 1,
        ..Default::default()
    };
    let tables = build_cone(g, cap, max_degree)
        .and_then(|c| build_gs(g, cap, max_degree).map(|s| (c, s)))
        .and_then(|(c, s)| cohomology_table(&c, &s, max_degree));
    match tables {
        Ok(rows) => {
            let certified: Vec<&TableRow> = rows.iter().filter(|r| r.certified).collect();
            rep.certified_rows = certified.len();
            if certified.iter().any(|r| r.dim_cone != r.dim_gs) {
                rep.mismatches.push(ComparisonMismatch { case: name, rows });
            }
        }
        Err(e) => rep.errors.push(format!("{name}: {e}")),
    }
    rep
}

/// Cone versus Gerstenhaber–Schack tables on the corpus and on random
/// validated morphisms.
pub fn verify_gs(trials: usize, seed: u64, cap: usize, max_degree: i32) -> ComparisonReport {
    let mut cases: Vec<(String, AlgebraMorphism, Rejections)> = corpus()
        .into_iter()
        .map(|(n, g)| (n.to_string(), g, Rejections::default()))
        .collect();
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let (g, rej) = random_morphism(&mut rng, AlgebraShape::default());
        cases.push((format!("random-{trial}"), g, rej));
    }
    let per: Vec<ComparisonReport> = cases
        .into_par_iter()
        .map(|(name, g, rej)| {
            let mut r = compare_one(name, &g, cap, max_degree);
            r.rejections = rej;
            r
        })
        .collect();
    let mut total = ComparisonReport::default();
    for r in per {
        total.cases += r.cases;
        total.certified_rows += r.certified_rows;
        total.mismatches.extend(r.mismatches);
        total.errors.extend(r.errors);
        total.rejections.absorb(r.rejections);
    }
    total
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BracketReport {
    pub cases: usize,
    pub brackets: usize,
    pub nonzero_brackets: usize,
    pub failures: Vec<String>,
}

impl BracketReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.brackets > 0
    }
}

/// Representative independence of the bracket on cohomology: representatives
/// in cone degrees 1 and 2 are shifted by random coboundaries and the
/// projected brackets recomputed.
pub fn verify_bracket(seed: u64, cap: usize) -> BracketReport {
    let mut rep = BracketReport::default();
    for (i, (name, g)) in corpus().into_iter().enumerate() {
        let mut rng = rng_for(seed, i);
        let h = LinftyCohomology::new(&g, cap);
        let run = |rng: &mut ChaCha8Rng| -> Result<Result<(usize, usize), String>, CohomologyError> {
            let mut classes = h.representatives(0)?;
            classes.extend(h.representatives(1)?);
            let table = linfty_binary_on_cohomology(&h, &classes)?;
            let shifted: Vec<GElement<Rational>> = classes
                .iter()
                .map(|x| {
                    let g = x.g_degree().expect("homogeneous representative");
                    let below = Slice::new(&h.space, g - 1);
                    let coords: Vec<Rational> = (0..below.dim()).map(|_| small_rational(rng)).collect();
                    x.plus(&h.differential(&below.element(&h.space, &coords)))
                })
                .collect();
            let again = linfty_binary_on_cohomology(&h, &shifted)?;
            if table != again {
                return Ok(Err("bracket classes change under a coboundary shift".into()));
            }
            let nonzero = table
                .iter()
                .filter(|e| e.class.iter().any(|c| !c.is_zero()))
                .count();
            Ok(Ok((table.len(), nonzero)))
        };
        rep.cases += 1;
        match run(&mut rng) {
            Ok(Ok((n, nz))) => {
                rep.brackets += n;
                rep.nonzero_brackets += nz;
            }
            Ok(Err(e)) => rep.failures.push(format!("{name}: {e}")),
            Err(e) => rep.failures.push(format!("{name}: {e}")),
        }
    }
    rep
}

/// Brackets of length 2 through the cap on a word, used by the command line
/// to show individual bracket values.
pub fn bracket_value<C: Coeff>(l: &Linfty, word: &[&GElement<C>]) -> GElement<C> {
    d_corestriction(l, word)
}
