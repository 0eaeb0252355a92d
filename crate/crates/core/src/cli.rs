//! Command-line front end.
//!
//! Every command returns its exit code and output instead of printing, so
//! the binary is a thin wrapper and commands are testable in-process.
//! Exit codes: 0 success, 1 unrevisable / no stable model / oracle
//! disagreement, 2 input or resource error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::engine::{revise, EngineConfig, EngineOutcome, DEFAULT_STEP_BUDGET};
use crate::grounder::{ground, herbrand_constants, HerbrandUniverse};
use crate::model::{Program, RevisionFramework, Rule};
use crate::oracle::{cross_check, DEFAULT_ORACLE_BOUND};
use crate::parser::{parse_framework, render_rule};
use crate::stable::{generalized_stable_models_over, stable_models_over};
use crate::translator::{translate, AbductiveFramework, RevisionJson};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "lprevise",
    version,
    about = "Minimal revision of normal logic programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the minimal revisions for adding the #new rule.
    Revise(Opts),
    /// Print stable models of T_pst ∪ T_tmp (plus the #new rule, if any).
    Models(ModelOpts),
    /// Print the ground program over the file's constants.
    Ground(Opts),
    /// Compare the engine against the brute-force oracle.
    Check(Opts),
    /// Print the indexed call trace of every success branch.
    Trace(Opts),
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    pub path: PathBuf,
    /// Also report non-minimal successes.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub json: bool,
    /// Attach traces to revise output.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
    pub step_budget: u64,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
    pub oracle_bound: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ModelOpts {
    pub path: PathBuf,
    /// List generalized stable models of the translated framework.
    #[arg(long)]
    pub abduce: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, stderr: impl Into<String>) -> Self {
        Output {
            code,
            stdout,
            stderr: stderr.into(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Output::fail(2, String::new(), format!("error: {e}\n"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Output::ok(text)
            } else {
                Output::fail(2, String::new(), text)
            }
        }
    }
}

pub fn execute(cmd: &Command) -> Output {
    match cmd {
        Command::Revise(o) => cmd_revise(o),
        Command::Models(o) => cmd_models(o),
        Command::Ground(o) => cmd_ground(o),
        Command::Check(o) => cmd_check(o),
        Command::Trace(o) => cmd_trace(o),
    }
}

fn load(path: &Path) -> Result<(RevisionFramework, Option<Rule>), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_framework(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_with_new(path: &Path) -> Result<(RevisionFramework, Rule), String> {
    let (fw, r_new) = load(path)?;
    let r_new = r_new.ok_or_else(|| format!("{}: {}", path.display(), Error::MissingNew))?;
    Ok((fw, r_new))
}

fn config(o: &Opts, trace: bool) -> EngineConfig {
    EngineConfig {
        step_budget: o.step_budget,
        trace,
        ..Default::default()
    }
}

fn engine_error(e: Error) -> Output {
    match e {
        Error::Unrevisable => {
            Output::fail(1, "unrevisable\n".into(), "no consistent revision exists\n")
        }
        other => Output::error(other),
    }
}

/// JSON document printed by `revise --json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviseJson {
    pub revisions: Vec<RevisionJson>,
    /// Abducible sets of non-minimal successes, with `--all`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub non_minimal: Vec<Vec<String>>,
    /// Rendered traces of every success branch, with `--trace`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<Vec<String>>,
}

fn revise_json(out: &EngineOutcome, o: &Opts) -> ReviseJson {
    ReviseJson {
        revisions: out
            .revisions
            .iter()
            .map(|r| RevisionJson::new(r, &out.framework, &out.new_rule))
            .collect(),
        non_minimal: if o.all { non_minimal(out) } else { Vec::new() },
        traces: if o.trace {
            out.successes
                .iter()
                .map(|s| s.trace.iter().map(ToString::to_string).collect())
                .collect()
        } else {
            Vec::new()
        },
    }
}

fn non_minimal(out: &EngineOutcome) -> Vec<Vec<String>> {
    out.success_thetas()
        .into_iter()
        .filter(|t| !out.minimal_thetas.contains(t))
        .map(|t| t.iter().map(ToString::to_string).collect())
        .collect()
}

pub fn cmd_revise(o: &Opts) -> Output {
    let (fw, r_new) = match load_with_new(&o.path) {
        Ok(x) => x,
        Err(e) => return Output::fail(2, String::new(), format!("error: {e}\n")),
    };
    let out = match revise(&fw, &r_new, &config(o, o.trace)) {
        Ok(out) => out,
        Err(e) => return engine_error(e),
    };
    if o.json {
        let doc = revise_json(&out, o);
        return Output::ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n");
    }
    let mut s = String::new();
    for (i, rev) in out.revisions.iter().enumerate() {
        let doc = RevisionJson::new(rev, &out.framework, &out.new_rule);
        let _ = writeln!(s, "revision {}: Θ = {}", i + 1, rev.theta);
        let _ = writeln!(s, "  deletions:");
        for r in &doc.deletions {
            let _ = writeln!(s, "    {r}");
        }
        let _ = writeln!(s, "  additions:");
        for r in &doc.additions {
            let _ = writeln!(s, "    {r}");
        }
        let _ = writeln!(s, "  revised program:");
        for r in &doc.revised_program {
            let _ = writeln!(s, "    {r}");
        }
    }
    if o.all {
        for t in non_minimal(&out) {
            let _ = writeln!(s, "non-minimal: {{{}}}", t.join(", "));
        }
    }
    if o.trace {
        write_traces(&mut s, &out);
    }
    let mut res = Output::ok(s);
    for t in &out.rejected {
        let _ = writeln!(
            res.stderr,
            "warning: revision {t} failed the consistency re-check"
        );
    }
    res
}

fn write_traces(s: &mut String, out: &EngineOutcome) {
    for (i, success) in out.successes.iter().enumerate() {
        let _ = writeln!(s, "branch {}: Θ = {}", i + 1, success.theta);
        for e in &success.trace {
            let _ = writeln!(s, "{e}");
        }
        let _ = writeln!(s, "success Δ={}", success.delta);
    }
}

pub fn cmd_trace(o: &Opts) -> Output {
    let (fw, r_new) = match load_with_new(&o.path) {
        Ok(x) => x,
        Err(e) => return Output::fail(2, String::new(), format!("error: {e}\n")),
    };
    match revise(&fw, &r_new, &config(o, true)) {
        Ok(out) => {
            if o.json {
                let traces: Vec<Vec<String>> = out
                    .successes
                    .iter()
                    .map(|s| s.trace.iter().map(ToString::to_string).collect())
                    .collect();
                return Output::ok(
                    serde_json::to_string_pretty(&traces).expect("serializable") + "\n",
                );
            }
            let mut s = String::new();
            write_traces(&mut s, &out);
            Output::ok(s)
        }
        Err(e) => engine_error(e),
    }
}

/// Program whose models `models` prints: `T_pst ∪ T_tmp`, plus the new rule
/// when present.
fn combined(fw: &RevisionFramework, r_new: Option<&Rule>) -> Program {
    let mut p = fw.t_pst.extended(fw.t_tmp.iter().cloned());
    p.rules.extend(r_new.cloned());
    p.iter().map(|r| r.clone().unnamed()).collect()
}

/// Abductive framework for `models --abduce`: a framework with temporal or
/// backup rules is translated; a plain program treats its `-*` / `+*`
/// predicates as abducible.
fn abductive_view(fw: &RevisionFramework, r_new: Option<&Rule>) -> Result<AbductiveFramework> {
    if fw.t_tmp.is_empty() && fw.t_bck.is_empty() {
        let program = combined(fw, r_new);
        let abducibles = program
            .iter()
            .flat_map(|r| r.atoms())
            .map(|a| a.pred.clone())
            .filter(|p| p.ends_with("-*") || p.ends_with("+*"))
            .collect();
        return Ok(AbductiveFramework {
            program,
            abducibles,
        });
    }
    match r_new {
        Some(r) => translate(fw, r),
        None => {
            let placeholder = Rule::fact(crate::model::Atom::new(crate::model::DOM, Vec::new()));
            let mut af = translate(fw, &placeholder)?;
            af.program.rules.remove(fw.t_pst.len());
            Ok(af)
        }
    }
}

fn universe(fw: &RevisionFramework, r_new: Option<&Rule>) -> Result<HerbrandUniverse> {
    match r_new {
        Some(r) => herbrand_constants(fw, r),
        None => {
            let p = combined(fw, None).extended(fw.t_bck.iter().cloned());
            let hu = HerbrandUniverse::of_program(&p);
            if hu.is_empty() && p.has_variables() {
                return Err(Error::EmptyUniverse);
            }
            Ok(hu)
        }
    }
}

#[derive(Serialize)]
struct GsmJson {
    theta: Vec<String>,
    model: Vec<String>,
}

pub fn cmd_models(o: &ModelOpts) -> Output {
    let (fw, r_new) = match load(&o.path) {
        Ok(x) => x,
        Err(e) => return Output::fail(2, String::new(), format!("error: {e}\n")),
    };
    let hu = match universe(&fw, r_new.as_ref()) {
        Ok(hu) => hu,
        Err(e) => return Output::error(e),
    };
    let mut s = String::new();
    if o.abduce {
        let af = match abductive_view(&fw, r_new.as_ref()) {
            Ok(af) => af,
            Err(e) => return Output::error(e),
        };
        let gsms = generalized_stable_models_over(&af, &hu);
        if o.json {
            let doc: Vec<GsmJson> = gsms
                .iter()
                .map(|g| GsmJson {
                    theta: g.theta.iter().map(ToString::to_string).collect(),
                    model: g.model.atoms.iter().map(ToString::to_string).collect(),
                })
                .collect();
            s = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        } else {
            for g in &gsms {
                let _ = writeln!(s, "Θ = {}  M = {}", g.theta, g.model);
            }
        }
        return if gsms.is_empty() {
            Output::fail(
                1,
                s + if o.json {
                    ""
                } else {
                    "no generalized stable models\n"
                },
                "",
            )
        } else {
            Output::ok(s)
        };
    }
    let models = stable_models_over(&combined(&fw, r_new.as_ref()), &hu);
    if o.json {
        let doc: Vec<Vec<String>> = models
            .iter()
            .map(|m| m.atoms.iter().map(ToString::to_string).collect())
            .collect();
        s = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    } else {
        for m in &models {
            let _ = writeln!(s, "{m}");
        }
    }
    if models.is_empty() {
        Output::fail(1, s + if o.json { "" } else { "no stable models\n" }, "")
    } else {
        Output::ok(s)
    }
}

pub fn cmd_ground(o: &Opts) -> Output {
    let (fw, r_new) = match load(&o.path) {
        Ok(x) => x,
        Err(e) => return Output::fail(2, String::new(), format!("error: {e}\n")),
    };
    let hu = match universe(&fw, r_new.as_ref()) {
        Ok(hu) => hu,
        Err(e) => return Output::error(e),
    };
    let mut p = combined(&fw, r_new.as_ref());
    p.rules.extend(fw.t_bck.iter().map(|r| r.clone().unnamed()));
    let g = ground(&p, &hu);
    if o.json {
        let doc: Vec<String> = g.rules().map(render_rule).collect();
        return Output::ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n");
    }
    let mut s = String::new();
    for r in g.rules() {
        let _ = writeln!(s, "{}", render_rule(r));
    }
    Output::ok(s)
}

pub fn cmd_check(o: &Opts) -> Output {
    let (fw, r_new) = match load_with_new(&o.path) {
        Ok(x) => x,
        Err(e) => return Output::fail(2, String::new(), format!("error: {e}\n")),
    };
    let report = match cross_check(&fw, &r_new, &config(o, false), o.oracle_bound) {
        Ok(r) => r,
        Err(e) => return Output::error(e),
    };
    let code = if report.agreement { 0 } else { 1 };
    let s = if o.json {
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "consistent pairs: {}", report.all_revisions.len());
        for m in &report.minimal_revisions {
            let _ = writeln!(s, "minimal: {{{}}}", m.theta.join(", "));
        }
        for t in &report.engine_minimal {
            let _ = writeln!(s, "engine: {{{}}}", t.join(", "));
        }
        for d in &report.divergences {
            let _ = writeln!(s, "divergence: {d}");
        }
        let _ = writeln!(s, "agreement: {}", report.agreement);
        s
    };
    Output::fail(code, s, "")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const FW1: &str = "#persistent\nc(c1). c(c2).\n#temporal\nphi1: r(X) :- c(X), not b(X).\n#backup\nphi2: b(X) :- c(X), not r(X).\n#new\n:- r(c1).\n";

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn lp(args: &[&str]) -> Output {
        run(std::iter::once("lprevise").chain(args.iter().copied()))
    }

    #[test]
    fn revise_fw1_prints_two_revisions() {
        let f = file(FW1);
        let out = lp(&["revise", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("revision 1"));
        assert!(out.stdout.contains("revision 2"));
        assert!(!out.stdout.contains("revision 3"));
        assert!(
            out.stdout.contains("r(X) :- c(X), not b(X), X != c1."),
            "{}",
            out.stdout
        );
        assert!(out.stdout.contains("b(c1) :- c(c1), not r(c1)."));
    }

    #[test]
    fn revise_json_round_trips() {
        let f = file(FW1);
        let out = lp(&["revise", "--json", "--all", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        let doc: ReviseJson = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc.revisions.len(), 2);
        for r in &doc.revisions {
            let rev = r.to_revision().unwrap();
            let (fw, r_new) = parse_framework(FW1).unwrap();
            assert_eq!(&RevisionJson::new(&rev, &fw, &r_new.unwrap()), r);
        }
        // both successes on this framework are minimal
        assert!(doc.non_minimal.is_empty());
    }

    #[test]
    fn unrevisable_and_malformed() {
        let f = file("c(a).\n#new\n:- c(a).\n");
        let out = lp(&["revise", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("unrevisable"));
        let f = file("p(X :- q(X).\n");
        let out = lp(&["revise", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("1:5"), "{}", out.stderr);
        let out = lp(&["revise", "/nonexistent/file.lp"]);
        assert_eq!(out.code, 2);
    }

    #[test]
    fn models_of_fw1() {
        let without_new = FW1.split("#new").next().unwrap();
        let f = file(without_new);
        let out = lp(&["models", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "{c(c1), c(c2), r(c1), r(c2)}\n");
        let f = file(FW1);
        let out = lp(&["models", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("no stable models"));
    }

    #[test]
    fn models_abduce_lists_by_theta_size() {
        let tau1 = "c(c1). c(c2). :- r(c1).\nr(X) :- c(X), not b(X), not phi1-*(X).\nb(X) :- c(X), phi2+*(X), not r(X).\n";
        let f = file(tau1);
        let out = lp(&["models", "--abduce", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert!(
            lines[0].starts_with("Θ = {phi1-*(c1)}") || lines[0].starts_with("Θ = {phi2+*(c1)}"),
            "{}",
            out.stdout
        );
        let f = file(FW1);
        let out2 = lp(&["models", "--abduce", f.path().to_str().unwrap()]);
        assert_eq!(out2.stdout, out.stdout);
    }

    #[test]
    fn ground_and_check() {
        let f = file(FW1);
        let out = lp(&["ground", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("r(c2) :- c(c2), not b(c2)."));
        let out = lp(&["check", "--json", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.contains("\"agreement\": true"));
    }

    #[test]
    fn trace_lists_branches() {
        let f = file(FW1);
        let out = lp(&["trace", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("rc(:- r(c1)) Δ={}"));
        assert!(out.stdout.contains("1 lc(not r(c1)) Δ={}"));
    }

    #[test]
    fn consistent_addition_traces_one_line() {
        let f = file(
            "#persistent\nc(c1). c(c2).\n#temporal\nphi1: r(X) :- c(X), not b(X).\n#new\nc(c3).\n",
        );
        let out = lp(&["trace", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        let calls: Vec<&str> = out
            .stdout
            .lines()
            .filter(|l| l.contains("Δ=") && !l.starts_with("success"))
            .collect();
        assert_eq!(calls, ["rc(c(c3)) Δ={}"]);
    }
}
