//! Acceptance run: one pass/fail line per criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use defmorph::suite::{
    verify_bracket, verify_corpus, verify_gauge, verify_gs, verify_linfty, verify_mc_ainfty, verify_twisting,
    LinftyConfig,
};

const SEED: u64 = 20_240_601;
const ORDER: usize = 3;
const CAP: usize = 4;

/// Writes straight to the stdout handle so the line shows up without
/// `--nocapture`.
fn line(n: usize, ok: bool, what: &str, detail: String) -> bool {
    let text = format!(
        "criterion {n}: {} | {what} | {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .expect("stdout");
    ok
}

#[test]
fn acceptance() {
    let mut results = Vec::new();

    let start = Instant::now();
    let lin = verify_linfty(&LinftyConfig {
        seed: SEED,
        ..LinftyConfig::default()
    });
    let elapsed = start.elapsed();
    let words: usize = lin.words_checked.values().sum();
    results.push(line(
        1,
        lin.identity_ok() && elapsed < Duration::from_secs(300),
        "d-hat squares to zero on random dg pairs",
        format!(
            "{} trials, {words} words in {} shape families, {} failures, rejection rate {:.3}, {:.1}s",
            lin.trials,
            lin.words_checked.len(),
            lin.failures.len(),
            lin.rejections.rate(),
            elapsed.as_secs_f64()
        ),
    ));
    results.push(line(
        2,
        lin.degree_ok(),
        "every bracket has degree one",
        format!(
            "{} brackets, {} failures",
            lin.brackets_checked,
            lin.degree_failures.len()
        ),
    ));

    let mc = verify_mc_ainfty(100, SEED, ORDER, CAP);
    results.push(line(
        3,
        mc.ok() && mc.solutions > 0 && mc.solutions < mc.trials,
        "MC residual equals the A-infinity residuals",
        format!(
            "{} elements, {} solutions, {} failures",
            mc.trials,
            mc.solutions,
            mc.failures.len()
        ),
    ));

    let corpus = verify_corpus(ORDER, CAP).expect("corpus run");
    let twist = verify_twisting(&corpus.solutions, CAP, SEED, 3);
    results.push(line(
        4,
        twist.identity_ok() && twist.degree_ok(),
        "brackets twisted by MC solutions square to zero",
        format!(
            "{} solutions, {} words, {} failures",
            twist.trials,
            twist.words_checked.values().sum::<usize>(),
            twist.failures.len() + twist.degree_failures.len()
        ),
    ));

    let start = Instant::now();
    let gauge = verify_gauge(50, SEED, ORDER, CAP);
    let elapsed = start.elapsed();
    results.push(line(
        5,
        gauge.ok() && gauge.solutions == gauge.trials && elapsed < Duration::from_secs(120),
        "gauge action preserves MC and matches conjugation",
        format!(
            "{} pairs, {} failures, {:.1}s",
            gauge.trials,
            gauge.failures.len(),
            elapsed.as_secs_f64()
        ),
    ));

    let tangents: Vec<String> = corpus
        .entries
        .iter()
        .map(|e| format!("{}={}/{}", e.name, e.tangent_mc, e.tangent_cone))
        .collect();
    results.push(line(
        6,
        corpus.ok() && corpus.flat_family_order == ORDER,
        "deformation corpus and tangent dimensions",
        format!(
            "flat family to order {}, tangents {}, {} failures",
            corpus.flat_family_order,
            tangents.join(" "),
            corpus.failures.len()
        ),
    ));

    let gs = verify_gs(50, SEED, CAP, 3);
    results.push(line(
        7,
        gs.ok(),
        "cone and Gerstenhaber-Schack cohomology agree",
        format!(
            "{} cases, {} certified rows, {} mismatches, {} errors",
            gs.cases,
            gs.certified_rows,
            gs.mismatches.len(),
            gs.errors.len()
        ),
    ));

    let br = verify_bracket(SEED, CAP);
    results.push(line(
        8,
        br.ok(),
        "bracket on cohomology is independent of representatives",
        format!(
            "{} cases, {} brackets, {} nonzero, {} failures",
            br.cases,
            br.brackets,
            br.nonzero_brackets,
            br.failures.len()
        ),
    ));

    assert!(results.iter().all(|&ok| ok), "some criteria failed");
}
