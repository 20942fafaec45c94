//! The `rezk` command line. Every subcommand prints one JSON document (or a
//! text rendering of it) and maps its outcome to an exit status: 0 when
//! everything passed, 1 on a failure, 2 on a parse or validation error and 3
//! when the only shortfall is budget exhaustion.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cat::{check_split_classes_with, refl_loop_projection_with};
use crate::cofib::{dnf, entails};
use crate::completion::{solve, Completion};
use crate::cube::{DimCtx, IntervalExpr, VarMap};
use crate::error::{Error, Result};
use crate::kan::{center_and_path, TruncationSpace};
use crate::report::{Obligation, Report, Status};
use crate::syntax::{load_functor, load_presentation, load_problem, parse_cof, parse_term};
use crate::terms::normalize::budget_from_env;
use crate::terms::{Config, Normalizer, Presentation, Sort, SortKind, Term};
use crate::tower::Tower;

#[derive(Parser, Debug)]
#[command(name = "rezk", version, about = "Cofibration solving, free completions and their checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Rewrite steps allowed per normalization call (default: RF_STEP_BUDGET or 100000).
    #[arg(long, global = true)]
    step_budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide questions about cofibrations.
    #[command(subcommand)]
    Cof(CofCommand),
    /// Normalize a term over a presentation.
    Normalize {
        presentation: PathBuf,
        term: String,
    },
    /// List normal forms of one sort up to a depth.
    Enumerate {
        presentation: PathBuf,
        #[arg(long, value_enum, default_value_t = SortArg::Ob)]
        sort: SortArg,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Comma-separated dimension names.
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Kan operations.
    #[command(subcommand)]
    Kan(KanCommand),
    /// Checks on functors between presentations.
    #[command(subcommand)]
    Cat(CatCommand),
    /// Build the completion of a presentation and verify it.
    Complete(CompleteArgs),
    /// Paths between the elements of a set completion.
    TruncateDemo {
        /// Comma-separated element names.
        #[arg(long, default_value = "a,b")]
        elements: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CofCommand {
    /// Whether the first cofibration entails the second.
    Entails { lhs: String, rhs: String },
    /// The canonical disjunctive normal form.
    Dnf { cof: String },
    /// Whether the cofibration holds at the identity.
    Decide { cof: String },
}

#[derive(Subcommand, Debug)]
enum KanCommand {
    /// Solve a filling problem and certify the solution.
    Wcom {
        #[arg(long)]
        problem: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CatCommand {
    /// Check the split-class conditions of a functor.
    Check {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Check the projection out of the reflexive-loop category.
    ReflLoop {
        presentation: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SortArg {
    Ob,
    Elt,
    Hom,
}

#[derive(Args, Debug)]
struct CompleteArgs {
    presentation: PathBuf,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long)]
    externalize: bool,
    #[arg(long)]
    verify_weq: bool,
    #[arg(long)]
    verify_completeness: bool,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What a subcommand produced: a JSON document, a text rendering and an
/// exit status.
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    fn simple(json: Value, text: String, ok: bool) -> Self {
        Outcome {
            code: if ok { 0 } else { 1 },
            json,
            text,
        }
    }

    fn report(r: &Report, extra: Option<(&str, Value)>) -> Self {
        let mut json: Value = serde_json::from_str(&r.to_json(true)).expect("valid json");
        if let Some((k, v)) = extra {
            json[k] = v;
        }
        Outcome {
            code: r.exit_code(),
            json,
            text: r.to_text(),
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: if e.is_budget() { 3 } else { 2 },
            json: json!({ "error": e.to_string() }),
            text: format!("error: {e}\n"),
        }
    }
}

/// Run the command line on `args` (including the program name) and return
/// the exit status and rendered output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (
                    2,
                    serde_json::to_string_pretty(&json!({ "error": e.to_string().trim() })).expect("json") + "\n",
                ),
            };
        }
    };
    let budget = cli.step_budget.unwrap_or_else(budget_from_env);
    let out = dispatch(&cli.command, budget).unwrap_or_else(|e| Outcome::error(&e));
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
        Format::Text => out.text,
    };
    (out.code, rendered)
}

/// Entry point of the `rezk` binary.
pub fn main() -> i32 {
    let (code, out) = run(std::env::args_os());
    print!("{out}");
    code
}

fn config(budget: usize) -> Config {
    Config {
        budget,
        ..Config::default()
    }
}

fn normalizer(p: Presentation, budget: usize) -> Normalizer {
    Normalizer::with_config(Arc::new(p), config(budget))
}

fn show_sort(s: &Sort) -> String {
    match s {
        Sort::Ob => "ob".into(),
        Sort::Elt => "elt".into(),
        Sort::Hom(a, b) => format!("hom({a}, {b})"),
    }
}

fn dispatch(cmd: &Command, budget: usize) -> Result<Outcome> {
    match cmd {
        Command::Cof(c) => cof(c),
        Command::Normalize { presentation, term } => {
            let n = normalizer(load_presentation(presentation)?, budget);
            let t = parse_term(term, &n)?;
            let sort = n.check(&t)?;
            let nf = n.normalize(&t)?;
            Ok(Outcome::simple(
                json!({ "result": nf.to_string(), "sort": show_sort(&sort) }),
                format!("{nf} : {}\n", show_sort(&sort)),
                true,
            ))
        }
        Command::Enumerate {
            presentation,
            sort,
            depth,
            context,
        } => {
            let n = normalizer(load_presentation(presentation)?, budget);
            let names: Vec<&str> = context.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let ctx = DimCtx::new(names)?;
            let kind = match sort {
                SortArg::Ob => SortKind::Ob,
                SortArg::Elt => SortKind::Elt,
                SortArg::Hom => SortKind::Hom,
            };
            let terms: Vec<String> = crate::terms::enumerate(&n, kind, &ctx, *depth)?
                .iter()
                .map(Term::to_string)
                .collect();
            let text = terms.iter().map(|t| format!("{t}\n")).collect::<String>();
            Ok(Outcome::simple(json!({ "result": terms, "count": terms.len() }), text, true))
        }
        Command::Kan(KanCommand::Wcom { problem }) => {
            let (pres, p) = load_problem(problem)?;
            let c = Completion::with_config(pres, config(budget));
            let f = solve(&c, &p)?;
            let ok = f.cert.passed();
            let cert = serde_json::to_value(&f.cert).expect("certificates serialize");
            let text = format!(
                "filler: {}\nfiller at r: {}\npath ({}): {}\ncertificate: {} entries, {}\n",
                f.filler,
                f.filler_rr,
                f.path_dim,
                f.path,
                f.cert.entries.len(),
                if ok { "pass" } else { "FAIL" }
            );
            Ok(Outcome::simple(
                json!({
                    "result": if ok { "pass" } else { "fail" },
                    "filler": f.filler.to_string(),
                    "filler_rr": f.filler_rr.to_string(),
                    "path": f.path.to_string(),
                    "path_dim": f.path_dim.to_string(),
                    "certificate": cert,
                }),
                text,
                ok,
            ))
        }
        Command::Cat(CatCommand::Check { functor, depth }) => {
            let f = load_functor(functor)?;
            Ok(Outcome::report(&check_split_classes_with(&f, *depth, budget), None))
        }
        Command::Cat(CatCommand::ReflLoop { presentation, depth }) => {
            let p = Arc::new(load_presentation(presentation)?);
            let f = refl_loop_projection_with(p, *depth, budget)?;
            Ok(Outcome::report(&check_split_classes_with(&f, *depth, budget), None))
        }
        Command::Complete(a) => complete(a, budget),
        Command::TruncateDemo {
            elements,
            depth,
            samples,
            seed,
        } => {
            let names: Vec<&str> = elements.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let c = Completion::with_config(Arc::new(Presentation::set(&names)?), config(budget));
            let r = truncate_demo(&c, *depth, *samples, *seed)?;
            Ok(Outcome::report(&r, None))
        }
    }
}

fn cof(c: &CofCommand) -> Result<Outcome> {
    match c {
        CofCommand::Entails { lhs, rhs } => {
            let (a, b) = (parse_cof(lhs)?, parse_cof(rhs)?);
            let result = entails(&a, &b);
            // the faces of the premise on which the conclusion fails
            let witnesses: Vec<String> = dnf(&a)
                .faces()
                .iter()
                .filter(|f| !b.subst_map(f.map()).decided())
                .map(|f| f.to_string())
                .collect();
            Ok(Outcome::simple(
                json!({ "result": result, "witnesses": witnesses }),
                format!("{result}\n"),
                true,
            ))
        }
        CofCommand::Dnf { cof } => {
            let d = dnf(&parse_cof(cof)?);
            let faces: Vec<String> = d.faces().iter().map(|f| f.to_string()).collect();
            Ok(Outcome::simple(
                json!({ "result": d.to_string(), "witnesses": faces }),
                format!("{d}\n"),
                true,
            ))
        }
        CofCommand::Decide { cof } => {
            let c = parse_cof(cof)?.eliminate_foralls();
            let result = c.decided();
            let faces: Vec<String> = dnf(&c).faces().iter().map(|f| f.to_string()).collect();
            Ok(Outcome::simple(
                json!({ "result": result, "witnesses": faces }),
                format!("{result}\n"),
                true,
            ))
        }
    }
}

fn complete(a: &CompleteArgs, budget: usize) -> Result<Outcome> {
    let pres = load_presentation(&a.presentation)?;
    let c = Completion::with_config(Arc::new(pres), config(budget));
    let mut report = Report::new();
    let mut fragment = None;
    if a.externalize {
        let start = Instant::now();
        match c.externalize(a.depth) {
            Ok(f) => {
                report.push(tower_obligation(&c, &f));
                report.push(
                    Obligation::new("externalize.fragment", "externalize", Status::Pass).with_witness(format!(
                        "{} objects, {} generating arrows, {} homs, {} composites outside the fragment",
                        f.objects.len(),
                        f.arrows.len(),
                        f.homs.len(),
                        f.overflow()
                    )),
                );
                fragment = Some(f.to_json());
            }
            Err(e) if e.is_budget() => report.push(Obligation::out_of_budget("externalize.fragment", "externalize", budget)),
            Err(e) => return Err(e),
        }
        report.time("externalize", start.elapsed().as_secs_f64());
    }
    if a.verify_weq {
        report.extend(c.verify_weq_dim0(a.depth));
    }
    if a.verify_completeness {
        report.extend(c.verify_completeness(a.samples, a.seed));
    }
    let report = report.finish();
    let out = Outcome::report(&report, fragment.map(|f| ("fragment", f)));
    if let Some(path) = &a.out {
        let text = serde_json::to_string_pretty(&out.json).expect("json") + "\n";
        std::fs::write(path, text)?;
    }
    Ok(out)
}

/// Compare a fragment with the stage-by-stage tower over the same base.
fn tower_obligation(c: &Completion, f: &crate::completion::Fragment) -> Obligation {
    let base: Vec<String> = c.presentation().objects().iter().map(|o| o.to_string()).collect();
    let base_refs: Vec<&str> = base.iter().map(String::as_str).collect();
    let index = |o: &crate::cube::Name| base.iter().position(|b| **b == **o).expect("object");
    let pairs = c.presentation().inverse_pairs(c.normalizer().config().budget);
    let arrows: Vec<(usize, usize, bool)> = c
        .presentation()
        .homs()
        .iter()
        .map(|h| (index(&h.src), index(&h.dst), pairs.iter().any(|(f, _)| *f == h.name)))
        .collect();
    let tower = Tower::build(&base_refs, &arrows, f.depth);
    let status = if tower.count() == f.objects.len() && tower.matches(f) {
        Status::Pass
    } else {
        Status::Fail
    };
    Obligation::new("externalize.tower", "tower", status)
        .with_witness(format!("{} objects, tower has {}", f.objects.len(), tower.count()))
}

/// Paths between every pair of elements up to `depth`, with certified
/// endpoints, plus optional random completeness samples.
pub fn truncate_demo(c: &Completion, depth: usize, samples: usize, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let n = c.normalizer();
    let ctx = DimCtx::empty();
    let elements = c.enumerate(SortKind::Elt, &ctx, depth)?;
    let basepoint = match elements.first() {
        Some(b) => b.clone(),
        None => return Err(Error::validation("the set has no elements")),
    };
    let space = TruncationSpace { basepoint };
    let width = elements.len().to_string().len().max(2);
    let mut report = Report::new();
    for (a, x) in elements.iter().enumerate() {
        for (b, y) in elements.iter().enumerate() {
            let id = format!("truncate.path.{a:0width$}.{b:0width$}");
            let cp = center_and_path(&space, n, &ctx, x, y)?;
            let at = |e| n.nf_map(&cp.path, &VarMap::from([(cp.path_dim.clone(), e)]));
            let ends_ok = at(IntervalExpr::Zero)? == *x && at(IntervalExpr::One)? == *y;
            let status = if ends_ok && cp.cert.passed() { Status::Pass } else { Status::Fail };
            report.push(
                Obligation::new(id, "path", status).with_witness(format!("{x} ~ {y} via {}", cp.path)),
            );
        }
    }
    report.time("paths", start.elapsed().as_secs_f64());
    if samples > 0 {
        report.extend(c.verify_completeness(samples, seed));
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, Value) {
        let mut all = vec!["rezk"];
        all.extend_from_slice(args);
        let (code, out) = run(all);
        (code, serde_json::from_str(&out).unwrap_or(Value::String(out)))
    }

    #[test]
    fn entails_example() {
        let (code, v) = run_args(&["cof", "entails", "(i=0)/\\(j=0)", "(i=j)"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"], true);
        let (_, v) = run_args(&["cof", "entails", "(i=j)", "(i=0) \\/ (i=1)"]);
        assert_eq!(v["result"], false);
        assert_eq!(v["witnesses"][0], "(i=j)");
    }

    #[test]
    fn parse_errors_exit_2() {
        let (code, v) = run_args(&["cof", "dnf", "(i=0) /\\"]);
        assert_eq!(code, 2);
        assert!(v["error"].as_str().unwrap().contains("parse error"));
        let (code, v) = run_args(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(v.get("error").is_some());
    }

    #[test]
    fn truncate_demo_passes() {
        let (code, v) = run_args(&["truncate-demo", "--elements", "a,b", "--depth", "0"]);
        assert_eq!(code, 0);
        assert_eq!(v["counts"]["pass"], 4);
    }
}
