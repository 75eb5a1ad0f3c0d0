//! `defmorph`: validation, verification suites, cohomology tables and
//! deformation solving for morphisms of dg algebras.
//!
//! Exit status: 0 success, 1 a check failed, 2 bad input, 3 the input
//! parses but violates the algebra or morphism axioms.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use defmorph::cohomology::{
    build_cone, build_gs, cohomology_table, linfty_binary_on_cohomology, LinftyCohomology,
};
use defmorph::conventions::convention_hash;
use defmorph::deformation::{cochain_from_json, gauge_to_json, Extension, GaugeOutcome, MCSolution, Problem};
use defmorph::hochschild::{
    validate_algebra, validate_morphism, AlgebraFile, AlgebraMorphism, DGAlgebra, MorphismFile, Violation,
};
use defmorph::linfty::{encode, mc_residual, residuals_as_g};
use defmorph::sampling::AlgebraShape;
use defmorph::suite::{
    describe, verify_linfty, verify_linfty_on, verify_mc_ainfty, LinftyConfig, LinftyReport,
};

/// Caps above this need `DEFMORPH_MAX_CAP`.
const DEFAULT_MAX_CAP: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "defmorph",
    version,
    about = "Deformations of morphisms of dg algebras, in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest cochain arity kept.
    #[arg(long, global = true, default_value_t = 4)]
    arity_cap: usize,
    /// Longest word fed to the bracket checks.
    #[arg(long, global = true, default_value_t = 4)]
    word_cap: usize,
    /// Work over Q[t]/(t^(N+1)).
    #[arg(long, global = true, default_value_t = 3)]
    order: usize,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Required by randomized commands. Trial i uses seed + i.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of algebra or morphism files.
    Validate { files: Vec<PathBuf> },
    /// Check that the brackets square to zero and have degree one, on random
    /// dg pairs or on the algebra pairs of the given morphisms.
    VerifyLinfty { files: Vec<PathBuf> },
    /// Cone and Gerstenhaber-Schack cohomology dimensions of a morphism.
    Cohomology {
        file: PathBuf,
        /// Also print the binary bracket on cone degrees 1 and 2.
        #[arg(long)]
        brackets: bool,
    },
    /// Solve the MC equation order by order.
    Deform {
        file: PathBuf,
        /// First-order cochain (plain tensors under alpha, beta, phi).
        #[arg(long, conflicts_with_all = ["basis_index", "solution"])]
        first_order: Option<PathBuf>,
        /// Sum of these elements of the computed basis of first-order
        /// cocycles (comma separated). Defaults to the first one.
        #[arg(long, value_delimiter = ',', conflicts_with = "solution")]
        basis_index: Vec<usize>,
        /// Re-verify a saved solution and extend it.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Decide whether two saved solutions are gauge equivalent.
    GaugeEquiv { first: PathBuf, second: PathBuf },
    /// Compare the MC residual with the A-infinity residuals, on saved
    /// solutions or on random degree-one elements.
    OracleAinfty { files: Vec<PathBuf> },
}

/// Malformed input: exit 2.
#[derive(Debug)]
struct BadInput(String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

/// Axiom violations: exit 3.
#[derive(Debug)]
struct Invalid {
    path: PathBuf,
    violations: Vec<Violation>,
}

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} axiom violations",
            self.path.display(),
            self.violations.len()
        )
    }
}

impl std::error::Error for Invalid {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    BadInput(msg.into()).into()
}

struct Report {
    ok: bool,
    json: Value,
    text: String,
}

fn max_cap() -> Result<usize> {
    match std::env::var("DEFMORPH_MAX_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| bad(format!("DEFMORPH_MAX_CAP is not a number: {v}"))),
        Err(_) => Ok(DEFAULT_MAX_CAP),
    }
}

fn check_caps(cli: &Cli) -> Result<()> {
    let max = max_cap()?;
    if cli.arity_cap == 0 || cli.arity_cap > max {
        return Err(bad(format!(
            "--arity-cap {} outside 1..={max} (raise the limit with DEFMORPH_MAX_CAP)",
            cli.arity_cap
        )));
    }
    if cli.word_cap == 0 || cli.word_cap > max {
        return Err(bad(format!("--word-cap {} outside 1..={max}", cli.word_cap)));
    }
    if cli.order == 0 {
        return Err(bad("--order must be at least 1"));
    }
    Ok(())
}

fn seed(cli: &Cli) -> Result<u64> {
    cli.seed
        .ok_or_else(|| bad("this command is randomized; pass --seed"))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn is_morphism(v: &Value) -> bool {
    v.get("matrix").is_some()
}

/// Loads a morphism and rejects it unless both algebras and the map satisfy
/// the axioms.
fn load_morphism(path: &Path) -> Result<AlgebraMorphism> {
    let v = read_json(path)?;
    if !is_morphism(&v) {
        return Err(bad(format!(
            "{}: expected a morphism (no \"matrix\" field)",
            path.display()
        )));
    }
    let file: MorphismFile = parse(path, v)?;
    let g = AlgebraMorphism::from_file(file).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let violations = morphism_violations(&g);
    if !violations.is_empty() {
        return Err(Invalid {
            path: path.to_path_buf(),
            violations,
        }
        .into());
    }
    Ok(g)
}

fn morphism_violations(g: &AlgebraMorphism) -> Vec<Violation> {
    let mut v = validate_algebra(g.source());
    v.extend(validate_algebra(g.target()));
    v.extend(validate_morphism(g));
    v
}

fn load_solution(path: &Path) -> Result<MCSolution> {
    let mut v = read_json(path)?;
    // accept a full `deform --format json` report as well as the bare solution
    if v.get("command").is_some() {
        v = v["result"].take();
    }
    if let Some(c) = v.get("convention").and_then(Value::as_str) {
        if c != convention_hash() {
            return Err(bad(format!(
                "{}: written under sign conventions {c}, this build uses {}",
                path.display(),
                convention_hash()
            )));
        }
    }
    let sol = MCSolution::from_json(&v).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let violations = morphism_violations(&sol.base);
    if !violations.is_empty() {
        return Err(Invalid {
            path: path.to_path_buf(),
            violations,
        }
        .into());
    }
    Ok(sol)
}

fn validate(files: &[PathBuf]) -> Result<Report> {
    if files.is_empty() {
        return Err(bad("validate needs at least one file"));
    }
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for path in files {
        let v = read_json(path)?;
        let (kind, violations) = if is_morphism(&v) {
            let file: MorphismFile = parse(path, v)?;
            let g = AlgebraMorphism::from_file(file).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            ("morphism", morphism_violations(&g))
        } else {
            let file: AlgebraFile = parse(path, v)?;
            let a = DGAlgebra::from_file(file).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            ("algebra", validate_algebra(&a))
        };
        ok &= violations.is_empty();
        let _ = writeln!(
            text,
            "{}: {kind}, {} violations",
            path.display(),
            violations.len()
        );
        for v in &violations {
            let _ = writeln!(text, "  {}", serde_json::to_string(v)?);
        }
        entries.push(json!({
            "path": path.display().to_string(),
            "kind": kind,
            "violations": violations,
        }));
    }
    Ok(Report {
        ok,
        json: json!({ "files": entries }),
        text,
    })
}

fn linfty_text(r: &LinftyReport) -> String {
    let mut t = String::new();
    let words: usize = r.words_checked.values().sum();
    let _ = writeln!(t, "trials: {}", r.trials);
    let _ = writeln!(t, "words checked: {words}");
    for (family, n) in &r.words_checked {
        let _ = writeln!(t, "  {family:<16} {n}");
    }
    let _ = writeln!(t, "brackets checked: {}", r.brackets_checked);
    if r.rejections.accepted > 0 {
        let _ = writeln!(t, "rejection rate: {:.3}", r.rejections.rate());
    }
    let _ = writeln!(t, "identity failures: {}", r.failures.len());
    for f in &r.failures {
        let _ = writeln!(
            t,
            "  trial {} ({}): word {:?} gives {:?}",
            f.trial, f.brackets, f.word, f.residual
        );
    }
    let _ = writeln!(t, "degree failures: {}", r.degree_failures.len());
    for f in &r.degree_failures {
        let _ = writeln!(
            t,
            "  trial {}: word {:?} expected {} found {:?}",
            f.trial, f.word, f.expected, f.found
        );
    }
    t
}

fn verify(cli: &Cli, files: &[PathBuf]) -> Result<Report> {
    let cfg = LinftyConfig {
        trials: cli.trials.unwrap_or(100),
        seed: seed(cli)?,
        word_cap: cli.word_cap,
        arity_cap: cli.arity_cap,
        shape: AlgebraShape::default(),
        ..LinftyConfig::default()
    };
    let mut reports = Vec::new();
    if files.is_empty() {
        reports.push(("random dg pairs".to_string(), verify_linfty(&cfg)));
    } else {
        for path in files {
            let g = load_morphism(path)?;
            reports.push((path.display().to_string(), verify_linfty_on(&g, &cfg)));
        }
    }
    let ok = reports.iter().all(|(_, r)| r.identity_ok() && r.degree_ok());
    let mut text = String::new();
    for (name, r) in &reports {
        let _ = writeln!(text, "{name}");
        text.push_str(&linfty_text(r));
    }
    let json = json!({
        "runs": reports
            .iter()
            .map(|(name, r)| json!({ "input": name, "report": r, "rejection_rate": r.rejections.rate() }))
            .collect::<Vec<_>>(),
    });
    Ok(Report { ok, json, text })
}

fn cohomology(cli: &Cli, file: &Path, brackets: bool) -> Result<Report> {
    let g = load_morphism(file)?;
    let max_degree = cli.arity_cap as i32 - 1;
    let cone = build_cone(&g, cli.arity_cap, max_degree)?;
    let gs = build_gs(&g, cli.arity_cap, max_degree)?;
    let rows = cohomology_table(&cone, &gs, max_degree)?;
    let ok = rows
        .iter()
        .filter(|r| r.certified)
        .all(|r| r.dim_cone == r.dim_gs);
    let mut text = format!(
        "{:>6} {:>8} {:>6} {:>9}\n",
        "degree", "dim_cone", "dim_gs", "certified"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:>6} {:>8} {:>6} {:>9}",
            r.degree, r.dim_cone, r.dim_gs, r.certified
        );
    }
    let mut json = json!({ "table": rows });
    if brackets {
        let h = LinftyCohomology::new(&g, cli.arity_cap);
        let mut classes = h.representatives(0)?;
        let n1 = classes.len();
        classes.extend(h.representatives(1)?);
        let table = linfty_binary_on_cohomology(&h, &classes)?;
        let _ = writeln!(
            text,
            "\nbrackets (classes 0..{n1} in cone degree 1, the rest in degree 2)"
        );
        for e in &table {
            let _ = writeln!(
                text,
                "  [{}, {}] -> degree {}: {:?}",
                e.left, e.right, e.degree, e.class
            );
        }
        json["representatives"] = json!(classes.iter().map(describe).collect::<Vec<_>>());
        json["brackets"] = json!(table);
    }
    Ok(Report { ok, json, text })
}

fn solution_report(sol: &MCSolution, extra: &str) -> Report {
    let mut text = format!(
        "MC solution, verified modulo t^{} (series order {}){extra}\n",
        sol.verified_order + 1,
        sol.order
    );
    for line in describe(&sol.element) {
        let _ = writeln!(text, "  {line}");
    }
    Report {
        ok: true,
        json: sol.to_json(),
        text,
    }
}

fn deform(
    cli: &Cli,
    file: &Path,
    first_order: Option<&Path>,
    basis_index: &[usize],
    saved: Option<&Path>,
) -> Result<Report> {
    let g = load_morphism(file)?;
    let p = Problem::new(&g, cli.arity_cap, cli.order);
    let start = if let Some(path) = saved {
        let sol = load_solution(path)?;
        if sol.base != g {
            return Err(bad(format!(
                "{}: the solution deforms a different morphism",
                path.display()
            )));
        }
        if sol.order != cli.order {
            return Err(bad(format!(
                "{}: solution has series order {}, --order is {}",
                path.display(),
                sol.order,
                cli.order
            )));
        }
        let actual = p.verified_order(&sol.element)?;
        if actual < sol.verified_order {
            return Ok(Report {
                ok: false,
                json: json!({ "claimed_order": sol.verified_order, "verified_order": actual }),
                text: format!(
                    "saved solution claims order {} but only holds to order {actual}\n",
                    sol.verified_order
                ),
            });
        }
        sol
    } else {
        let x1 = if let Some(path) = first_order {
            cochain_from_json(&read_json(path)?, &g).map_err(|e| bad(format!("{}: {e}", path.display())))?
        } else {
            let basis = p.first_order_cocycles();
            let picks = if basis_index.is_empty() {
                &[0][..]
            } else {
                basis_index
            };
            let mut x = p.space.zero();
            for &k in picks {
                let b = basis.get(k).ok_or_else(|| {
                    bad(format!(
                        "basis index {k} out of range: {} first-order cocycles",
                        basis.len()
                    ))
                })?;
                x.add_assign(b);
            }
            x
        };
        p.first_order(&x1).map_err(|e| match e {
            defmorph::deformation::DeformationError::NotACocycle => {
                bad("the first-order cochain is not a cocycle")
            }
            e => e.into(),
        })?
    };
    match p.solve_to(&start, cli.order)? {
        Extension::Extended(sol) => Ok(solution_report(&sol, "")),
        Extension::Obstructed(o) => {
            let text = format!(
                "obstructed at order {}: class {:?} in cone degree 3\n",
                o.order, o.class
            );
            Ok(Report {
                ok: false,
                json: o.to_json(),
                text,
            })
        }
    }
}

fn gauge_equiv(cli: &Cli, first: &Path, second: &Path) -> Result<Report> {
    let s1 = load_solution(first)?;
    let s2 = load_solution(second)?;
    let p = Problem::new(&s1.base, cli.arity_cap, s1.order);
    for (path, s) in [(first, &s1), (second, &s2)] {
        if p.verified_order(&s.element)? < s.order {
            return Err(bad(format!(
                "{}: not an MC solution to its series order",
                path.display()
            )));
        }
    }
    Ok(match p.gauge_equivalent(&s1, &s2)? {
        GaugeOutcome::Equivalent(h) => Report {
            ok: true,
            json: json!({ "equivalent": true, "witness": gauge_to_json(&h, s1.order) }),
            text: "gauge equivalent\n".into(),
        },
        GaugeOutcome::Inequivalent { order, exact } => {
            Report {
                ok: false,
                json: json!({ "equivalent": false, "order": order, "exact": exact }),
                text: if exact {
                    format!("not gauge equivalent: the gauge equation has no solution at order {order}\n")
                } else {
                    format!("no gauge transformation found at order {order}; lower-order choices were not unique\n")
                },
            }
        }
    })
}

fn oracle(cli: &Cli, files: &[PathBuf]) -> Result<Report> {
    if files.is_empty() {
        let trials = cli.trials.unwrap_or(100);
        let r = verify_mc_ainfty(trials, seed(cli)?, cli.order, cli.arity_cap);
        let mut text = format!(
            "elements: {}\nMC solutions among them: {}\nmismatches: {}\n",
            r.trials,
            r.solutions,
            r.failures.len()
        );
        for f in &r.failures {
            let _ = writeln!(text, "  trial {}: {}", f.trial, f.detail);
        }
        return Ok(Report {
            ok: r.ok(),
            json: json!({ "report": r, "rejection_rate": r.rejections.rate() }),
            text,
        });
    }
    let mut ok = true;
    let mut entries = Vec::new();
    let mut text = String::new();
    for path in files {
        let sol = load_solution(path)?;
        let p = Problem::new(&sol.base, cli.arity_cap, sol.order);
        let base = encode(&sol.base).to_series(sol.order);
        let mc = mc_residual(&p.space, &sol.element, &base)?;
        let ainfty = residuals_as_g(&p.space, &base.plus(&sol.element));
        let agree = mc == ainfty;
        ok &= agree;
        let _ = writeln!(
            text,
            "{}: MC residual zero {}, A-infinity residuals zero {}, agree {agree}",
            path.display(),
            mc.is_zero(),
            ainfty.is_zero()
        );
        entries.push(json!({
            "path": path.display().to_string(),
            "agree": agree,
            "mc_residual": describe(&mc),
            "ainfty_residual": describe(&ainfty),
        }));
    }
    Ok(Report {
        ok,
        json: json!({ "files": entries }),
        text,
    })
}

fn run(cli: &Cli) -> Result<Report> {
    check_caps(cli)?;
    match &cli.command {
        Command::Validate { files } => validate(files),
        Command::VerifyLinfty { files } => verify(cli, files),
        Command::Cohomology { file, brackets } => cohomology(cli, file, *brackets),
        Command::Deform {
            file,
            first_order,
            basis_index,
            solution,
        } => deform(
            cli,
            file,
            first_order.as_deref(),
            basis_index,
            solution.as_deref(),
        ),
        Command::GaugeEquiv { first, second } => gauge_equiv(cli, first, second),
        Command::OracleAinfty { files } => oracle(cli, files),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::VerifyLinfty { .. } => "verify-linfty",
        Command::Cohomology { .. } => "cohomology",
        Command::Deform { .. } => "deform",
        Command::GaugeEquiv { .. } => "gauge-equiv",
        Command::OracleAinfty { .. } => "oracle-ainfty",
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match cli.format {
        Format::Json => {
            let v = json!({
                "command": command_name(&cli.command),
                "convention": convention_hash(),
                "ok": report.ok,
                "result": report.json,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Text => {
            write!(out, "{}", report.text)?;
            writeln!(out, "convention {}", convention_hash())?;
        }
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                }
                return ExitCode::from(1);
            }
            match (report.ok, &cli.command) {
                (true, _) => ExitCode::SUCCESS,
                (false, Command::Validate { .. }) => ExitCode::from(3),
                (false, _) => ExitCode::from(1),
            }
        }
        Err(e) => {
            if let Some(inv) = e.downcast_ref::<Invalid>() {
                if cli.format == Format::Json {
                    let out = json!({
                        "command": command_name(&cli.command),
                        "convention": convention_hash(),
                        "ok": false,
                        "result": { "path": inv.path.display().to_string(), "violations": inv.violations },
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap_or_default());
                } else {
                    eprintln!("error: {inv}");
                    for v in &inv.violations {
                        eprintln!("  {}", serde_json::to_string(v).unwrap_or_default());
                    }
                }
                return ExitCode::from(3);
            }
            eprintln!("error: {e:#}");
            if e.downcast_ref::<BadInput>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_are_bounded() {
        let cli = Cli::parse_from(["defmorph", "--arity-cap", "9", "validate", "x.json"]);
        let err = check_caps(&cli).unwrap_err();
        assert!(err.downcast_ref::<BadInput>().is_some());
    }

    #[test]
    fn randomized_commands_need_a_seed() {
        let cli = Cli::parse_from(["defmorph", "verify-linfty"]);
        assert!(seed(&cli).is_err());
    }
}
