//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lprevise::engine::{TraceEntry, TraceEvent};
use lprevise::grounder::herbrand_constants;
use lprevise::oracle::{
    brute_force_revisions, brute_force_theta, cross_check, random_framework, random_ground_program,
    GenParams,
};
use lprevise::stable::{stable_models_ground, Strategy};
use lprevise::{
    del, extract_revision, parse_framework, parse_program, parse_rule, resolve, revise, translate,
    Atom, Delta, EngineConfig, Literal, Rule, Theta,
};

const FW1: &str = include_str!("../fixtures/fw1.lp");
const TAU1: &str = include_str!("../fixtures/tau1.lp");
const NONMINIMAL: &str = include_str!("../fixtures/nonminimal.lp");
const P_EX: &str = "r(X) :- c(X), not b(X). b(X) :- c(X), not r(X).";
const FRAMEWORKS: u64 = 100;

type Check = Result<String, String>;

fn rule(s: &str) -> Rule {
    parse_rule(s).unwrap()
}

fn lit(s: &str) -> Literal {
    rule(&format!("x :- {s}.")).body[0].clone()
}

fn atom(s: &str) -> Atom {
    rule(&format!("{s}.")).head
}

fn theta(xs: &[&str]) -> Theta {
    xs.iter().map(|s| atom(s)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example_1() -> Check {
    let start = Instant::now();
    let (fw, r_new) = parse_framework(FW1).map_err(|e| e.to_string())?;
    let out = revise(&fw, &r_new.unwrap(), &EngineConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got: BTreeSet<Theta> = out.minimal_thetas.iter().cloned().collect();
    let want: BTreeSet<Theta> = [theta(&["phi1-*(c1)"]), theta(&["phi2+*(c1)"])].into();
    ensure(got == want, || format!("minimal Θ {got:?}"))?;
    ensure(out.revisions.len() == 2, || "expected two revisions".into())?;
    for rev in &out.revisions {
        if rev.theta == theta(&["phi1-*(c1)"]) {
            ensure(
                rev.deletions == [rule("r(c1) :- c(c1), not b(c1).")],
                || format!("{:?}", rev.deletions),
            )?;
            ensure(
                rev.additions() == [rule("r(X) :- c(X), not b(X), X != c1.")],
                || format!("{:?}", rev.additions()),
            )?;
        } else {
            ensure(rev.deletions.is_empty(), || format!("{:?}", rev.deletions))?;
            ensure(
                rev.additions() == [rule("b(c1) :- c(c1), not r(c1).")],
                || format!("{:?}", rev.additions()),
            )?;
        }
    }
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("2 minimal revisions in {elapsed:?}"))
}

fn translation() -> Check {
    let (fw, r_new) = parse_framework(FW1).map_err(|e| e.to_string())?;
    let af = translate(&fw, &r_new.unwrap()).map_err(|e| e.to_string())?;
    let want = parse_program(TAU1).map_err(|e| e.to_string())?;
    let got: BTreeSet<&Rule> = af.program.iter().collect();
    let want_set: BTreeSet<&Rule> = want.iter().collect();
    ensure(got == want_set && af.program.len() == 5, || {
        format!("got\n{}", af.program)
    })?;
    let names: Vec<&str> = af.abducibles.iter().map(|s| &**s).collect();
    ensure(names == ["phi1-*", "phi2+*"], || {
        format!("abducibles {names:?}")
    })?;
    Ok("five rules, two abducible predicates".into())
}

/// (index, call or select text, Δ at the call); selects carry no Δ.
type Step = (&'static str, &'static str, &'static [&'static str]);

const SEQUENCE_1: &[Step] = &[
    ("", "rc(:- r(c1))", &[]),
    ("1", "lc(not r(c1))", &[]),
    (
        "1.1",
        "rc(:- c(c1), not b(c1), not phi1-*(c1))",
        &["not r(c1)"],
    ),
    ("1.1.1", "dr(c(c1))", &["not r(c1)"]),
    ("1.1.1.1", "select c(c1).", &[]),
    ("1.1.1.2", "lc(c(c1))", &["not r(c1)"]),
    (
        "1.1.1.2.1",
        "rc(r(c1) :- not b(c1), not phi1-*(c1))",
        &["c(c1)", "not r(c1)"],
    ),
    ("1.1.1.2.1.1", "lc(not b(c1))", &["c(c1)", "not r(c1)"]),
    (
        "1.1.1.2.1.1.1",
        "rc(r(c1) :- c(c1), not phi1-*(c1))",
        &["c(c1)", "not b(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.1.1",
        "dr(phi1-*(c1))",
        &["c(c1)", "not b(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.1.1.1",
        "lc(phi1-*(c1))",
        &["c(c1)", "not b(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.1.1.1.1",
        "dc(r(c1) :- c(c1), not b(c1), not phi1-*(c1))",
        &["phi1-*(c1)", "c(c1)", "not b(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.2",
        "rc(:- c(c1), phi2+*(c1), not r(c1))",
        &["phi1-*(c1)", "c(c1)", "not b(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.2.1",
        "lc(not phi2+*(c1))",
        &["phi1-*(c1)", "c(c1)", "not b(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.2.1.1",
        "dc(b(c1) :- c(c1), phi2+*(c1), not r(c1))",
        &[
            "phi1-*(c1)",
            "c(c1)",
            "not phi2+*(c1)",
            "not b(c1)",
            "not r(c1)",
        ],
    ),
    (
        "1.1.1.2.2",
        "rc(b(c1) :- phi2+*(c1), not r(c1))",
        &[
            "phi1-*(c1)",
            "c(c1)",
            "not phi2+*(c1)",
            "not b(c1)",
            "not r(c1)",
        ],
    ),
    (
        "1.2",
        "rc(b(c1) :- c(c1), phi2+*(c1))",
        &[
            "phi1-*(c1)",
            "c(c1)",
            "not phi2+*(c1)",
            "not b(c1)",
            "not r(c1)",
        ],
    ),
    (
        "1.3",
        "dc(:- r(c1))",
        &[
            "phi1-*(c1)",
            "c(c1)",
            "not phi2+*(c1)",
            "not b(c1)",
            "not r(c1)",
        ],
    ),
];

const SEQUENCE_2: &[Step] = &[
    ("", "rc(:- r(c1))", &[]),
    ("1", "lc(not r(c1))", &[]),
    (
        "1.1",
        "rc(:- c(c1), not b(c1), not phi1-*(c1))",
        &["not r(c1)"],
    ),
    ("1.1.1", "dr(c(c1))", &["not r(c1)"]),
    ("1.1.1.1", "select c(c1).", &[]),
    ("1.1.1.2", "lc(c(c1))", &["not r(c1)"]),
    (
        "1.1.1.2.1",
        "rc(r(c1) :- not b(c1), not phi1-*(c1))",
        &["c(c1)", "not r(c1)"],
    ),
    ("1.1.1.2.1.1", "dr(b(c1))", &["c(c1)", "not r(c1)"]),
    (
        "1.1.1.2.1.1.1",
        "select b(c1) :- c(c1), phi2+*(c1), not r(c1).",
        &[],
    ),
    ("1.1.1.2.1.1.2", "dr(c(c1))", &["c(c1)", "not r(c1)"]),
    ("1.1.1.2.1.1.3", "lc(phi2+*(c1))", &["c(c1)", "not r(c1)"]),
    (
        "1.1.1.2.1.1.3.1",
        "rc(b(c1) :- c(c1), not r(c1))",
        &["phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.3.1.1",
        "lc(b(c1))",
        &["phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.3.1.1.1",
        "dc(r(c1) :- c(c1), not b(c1), not phi1-*(c1))",
        &["b(c1)", "phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.4",
        "lc(not r(c1))",
        &["b(c1)", "phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.1.1.5",
        "lc(b(c1))",
        &["b(c1)", "phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.1.1.2.2",
        "rc(b(c1) :- phi2+*(c1), not r(c1))",
        &["b(c1)", "phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.2",
        "rc(b(c1) :- c(c1), phi2+*(c1))",
        &["b(c1)", "phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
    (
        "1.3",
        "dc(:- r(c1))",
        &["b(c1)", "phi2+*(c1)", "c(c1)", "not r(c1)"],
    ),
];

fn delta(xs: &[&str]) -> Delta {
    xs.iter().map(|s| lit(s)).collect()
}

fn compare_trace(got: &[TraceEntry], want: &[Step]) -> Result<(), String> {
    ensure(got.len() == want.len(), || {
        format!("{} lines, expected {}", got.len(), want.len())
    })?;
    for (g, &(index, text, d)) in got.iter().zip(want) {
        let (shown, delta_ok) = match &g.event {
            TraceEvent::Call { proc, arg } => (format!("{proc}({arg})"), g.delta == delta(d)),
            TraceEvent::Select { rule } => (format!("select {rule}"), true),
        };
        ensure(
            g.index_string() == index && shown == text && delta_ok,
            || format!("line `{g}` differs from `{index} {text} {d:?}`"),
        )?;
    }
    Ok(())
}

fn trace_skeletons() -> Check {
    let (fw, r_new) = parse_framework(FW1).map_err(|e| e.to_string())?;
    let out = revise(&fw, &r_new.unwrap(), &EngineConfig::traced()).map_err(|e| e.to_string())?;
    ensure(out.successes.len() == 2, || {
        format!("{} success branches", out.successes.len())
    })?;
    let final1 = delta(SEQUENCE_1.last().unwrap().2);
    let final2 = delta(SEQUENCE_2.last().unwrap().2);
    let b1 = out
        .successes
        .iter()
        .find(|s| s.delta == final1)
        .ok_or("no branch ends in Sequence 1's Δ")?;
    let b2 = out
        .successes
        .iter()
        .find(|s| s.delta == final2)
        .ok_or("no branch ends in Sequence 2's Δ")?;
    compare_trace(&b1.trace, SEQUENCE_1).map_err(|e| format!("sequence 1: {e}"))?;
    compare_trace(&b2.trace, SEQUENCE_2).map_err(|e| format!("sequence 2: {e}"))?;
    ensure(
        b1.theta == theta(&["phi1-*(c1)"]) && b2.theta == theta(&["phi2+*(c1)"]),
        || "abducibles".into(),
    )?;
    Ok(format!(
        "{} + {} lines matched",
        SEQUENCE_1.len(),
        SEQUENCE_2.len()
    ))
}

fn resolve_del() -> Check {
    let p = parse_program(P_EX).map_err(|e| e.to_string())?;
    let r = resolve(&lit("not r(c1)"), &p);
    let want_r = [rule(":- c(c1), not b(c1)."), rule("b(c1) :- c(c1).")];
    ensure(
        r.iter().collect::<BTreeSet<_>>() == want_r.iter().collect(),
        || format!("resolve {r:?}"),
    )?;
    let d = del(&lit("b(c1)"), &p);
    ensure(d == [rule("r(c1) :- c(c1), not b(c1).")], || {
        format!("del {d:?}")
    })?;
    Ok("resolve and del fixtures".into())
}

fn stable_model_oracle() -> Check {
    let start = Instant::now();
    for seed in 0..200u64 {
        let atoms = 1 + (seed % 12) as usize;
        let p = random_ground_program(seed, atoms);
        let search = stable_models_ground(&p, Strategy::Search);
        let brute = stable_models_ground(&p, Strategy::BruteForce);
        ensure(search == brute, || {
            format!("seed {seed}: {search:?} vs {brute:?}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("200 programs in {elapsed:?}"))
}

fn frameworks() -> Vec<(lprevise::RevisionFramework, Rule)> {
    let params = GenParams::default();
    (0..FRAMEWORKS)
        .map(|seed| random_framework(seed, &params))
        .collect()
}

fn correspondence(fws: &[(lprevise::RevisionFramework, Rule)]) -> Check {
    for (i, (fw, r_new)) in fws.iter().enumerate() {
        let bf = brute_force_revisions(fw, r_new, 16).map_err(|e| format!("#{i}: {e}"))?;
        let af = translate(fw, r_new).map_err(|e| format!("#{i}: {e}"))?;
        let hu = herbrand_constants(fw, r_new).map_err(|e| e.to_string())?;
        let (_, minimal) = brute_force_theta(&af, &hu, 24).map_err(|e| format!("#{i}: {e}"))?;
        ensure(minimal.len() == bf.minimal.len(), || {
            format!("#{i}: sizes differ")
        })?;
        for t in &minimal {
            let rev = extract_revision(t, fw).map_err(|e| e.to_string())?;
            let pair = rev.pair();
            ensure(
                bf.minimal
                    .iter()
                    .any(|p| p.deletions == pair.0 && p.additions == pair.1),
                || format!("#{i}: {t} has no matching minimal pair"),
            )?;
        }
    }
    Ok(format!("{FRAMEWORKS} frameworks"))
}

fn soundness(fws: &[(lprevise::RevisionFramework, Rule)]) -> Check {
    let mut checked = 0;
    for (i, (fw, r_new)) in fws.iter().enumerate() {
        let out = match revise(fw, r_new, &EngineConfig::default()) {
            Ok(o) => o,
            Err(lprevise::Error::Unrevisable) => continue,
            Err(e) => return Err(format!("#{i}: {e}")),
        };
        let bad = lprevise::oracle::soundness_violations(&out);
        ensure(bad.is_empty(), || {
            format!("#{i}: revised program inconsistent for {bad:?}")
        })?;
        let (all, _) = brute_force_theta(&out.abductive, &out.universe, 24)
            .map_err(|e| format!("#{i}: {e}"))?;
        for t in out.success_thetas() {
            ensure(all.iter().any(|g| t.is_subset(g)), || {
                format!("#{i}: {t} extends to no model")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} success Θ, 0 violations"))
}

fn completeness(fws: &[(lprevise::RevisionFramework, Rule)]) -> Check {
    for (i, (fw, r_new)) in fws.iter().enumerate() {
        let report = cross_check(fw, r_new, &EngineConfig::default(), 16)
            .map_err(|e| format!("#{i}: {e}"))?;
        ensure(report.agreement, || {
            format!("#{i}: {:?}", report.divergences)
        })?;
        if let Ok(out) = revise(fw, r_new, &EngineConfig::default()) {
            let found = out.success_thetas();
            for m in &report.minimal_revisions {
                let t: Theta = m.theta.iter().map(|s| atom(s)).collect();
                ensure(found.contains(&t), || {
                    format!("#{i}: minimal {t} not among successes")
                })?;
            }
        } else {
            ensure(report.minimal_revisions.is_empty(), || {
                format!("#{i}: engine found nothing")
            })?;
        }
    }
    Ok(format!("{FRAMEWORKS} frameworks, 0 divergences"))
}

fn non_minimality(fws: &[(lprevise::RevisionFramework, Rule)]) -> Check {
    let (fw, r_new) = parse_framework(NONMINIMAL).map_err(|e| e.to_string())?;
    let out = revise(&fw, &r_new.unwrap(), &EngineConfig::default()).map_err(|e| e.to_string())?;
    let extra = out.non_minimal_successes();
    ensure(!extra.is_empty(), || {
        "fixture has no non-minimal success".into()
    })?;
    ensure(out.minimal_thetas == [theta(&["t1-*"])], || {
        format!("{:?}", out.minimal_thetas)
    })?;
    let random = fws
        .iter()
        .filter(|(fw, r)| {
            revise(fw, r, &EngineConfig::default())
                .map(|o| !o.non_minimal_successes().is_empty())
                .unwrap_or(false)
        })
        .count();
    Ok(format!(
        "fixture success {} filtered; {random} random frameworks also",
        extra[0].theta
    ))
}

type Criterion<'a> = Box<dyn Fn() -> Check + 'a>;

fn main() {
    let fws = frameworks();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 example 1 end-to-end", Box::new(example_1)),
        ("2 translation fidelity", Box::new(translation)),
        ("3 trace skeletons", Box::new(trace_skeletons)),
        ("4 resolve/del fixtures", Box::new(resolve_del)),
        ("5 stable-model oracle", Box::new(stable_model_oracle)),
        (
            "6 revision/abducible correspondence",
            Box::new(|| correspondence(&fws)),
        ),
        ("7 soundness", Box::new(|| soundness(&fws))),
        ("8 completeness", Box::new(|| completeness(&fws))),
        ("9 non-minimal successes", Box::new(|| non_minimality(&fws))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(note) => println!("PASS  {name}: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
