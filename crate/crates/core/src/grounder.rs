//! Herbrand machinery: constants, grounding, the range-restriction
//! transform, the negation-and-abducible-stripped program P⁻, its least
//! model, and the relevant ground program Ω.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexSet;

use crate::model::{
    is_abducible, sym, Abducibles, Atom, Literal, Program, RevisionFramework, Rule, Substitution,
    Symbol, Term, DOM,
};
use crate::{Error, Result};

/// The constants of a framework, in first-occurrence order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HerbrandUniverse {
    constants: Vec<Symbol>,
}

impl HerbrandUniverse {
    pub fn new(constants: impl IntoIterator<Item = Symbol>) -> Self {
        let mut out: Vec<Symbol> = Vec::new();
        for c in constants {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        HerbrandUniverse { constants: out }
    }

    pub fn of_program(p: &Program) -> Self {
        HerbrandUniverse::new(p.constants())
    }

    pub fn constants(&self) -> &[Symbol] {
        &self.constants
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    /// Adds constants missing from `self`, keeping order.
    pub fn merged(&self, more: &HerbrandUniverse) -> HerbrandUniverse {
        HerbrandUniverse::new(self.constants.iter().chain(&more.constants).cloned())
    }
}

/// Constants lexically present in `T_pst`, `T_tmp`, `T_bck` and `r_new`.
pub fn herbrand_constants(fw: &RevisionFramework, r_new: &Rule) -> Result<HerbrandUniverse> {
    let mut out = Vec::new();
    for r in fw.all_rules().chain(std::iter::once(r_new)) {
        r.constants_into(&mut out);
    }
    let hu = HerbrandUniverse { constants: out };
    let has_vars = fw
        .all_rules()
        .chain(std::iter::once(r_new))
        .any(|r| !r.vars().is_empty());
    if hu.is_empty() && has_vars {
        return Err(Error::EmptyUniverse);
    }
    Ok(hu)
}

/// A set of variable-free rules in first-derivation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    rules: IndexSet<Rule>,
}

impl GroundProgram {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Self {
        let rules: IndexSet<Rule> = rules.into_iter().collect();
        debug_assert!(rules.iter().all(Rule::is_ground));
        GroundProgram { rules }
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn contains(&self, r: &Rule) -> bool {
        self.rules.contains(r)
    }

    pub fn to_program(&self) -> Program {
        Program::new(self.rules.iter().cloned())
    }

    /// Atoms occurring anywhere in the program.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(|r| r.atoms().cloned()).collect()
    }

    pub fn is_subset(&self, other: &GroundProgram) -> bool {
        self.rules.iter().all(|r| other.rules.contains(r))
    }
}

impl FromIterator<Rule> for GroundProgram {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        GroundProgram::new(iter)
    }
}

/// Every ground substitution for `vars` over `hu`, odometer order with the
/// last variable varying fastest.
pub fn assignments(vars: &[Symbol], hu: &HerbrandUniverse) -> Vec<Substitution> {
    let mut out = vec![Substitution::empty()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * hu.len());
        for s in &out {
            for c in hu.constants() {
                let mut s = s.clone();
                s.bind(v.clone(), Term::Const(c.clone()));
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// Ground instances of one rule. Guards are evaluated and removed: an
/// instance violating a guard is dropped. Names are stripped.
pub fn ground_rule(r: &Rule, hu: &HerbrandUniverse) -> Vec<Rule> {
    let vars = r.vars();
    assignments(&vars, hu)
        .into_iter()
        .filter_map(|s| instantiate(r, &s))
        .collect()
}

/// `r` under a ground substitution covering its variables, with guards
/// resolved; `None` if a guard excludes the instance.
pub fn instantiate(r: &Rule, s: &Substitution) -> Option<Rule> {
    use crate::model::Apply;
    let mut g = r.apply(s).unnamed();
    for d in &g.guards {
        if d.eval() != Some(true) {
            return None;
        }
    }
    g.guards.clear();
    Some(g)
}

/// Π_P over `hu`, duplicates collapsed.
pub fn ground(p: &Program, hu: &HerbrandUniverse) -> GroundProgram {
    p.iter().flat_map(|r| ground_rule(r, hu)).collect()
}

/// Whether every variable of `r` occurs in a positive body literal whose
/// predicate is not abducible.
pub fn is_range_restricted(r: &Rule, abducibles: &Abducibles) -> bool {
    let covered: BTreeSet<Symbol> = r
        .body
        .iter()
        .filter(|l| l.is_pos() && !is_abducible(&l.atom, abducibles))
        .flat_map(|l| l.atom.vars())
        .collect();
    r.vars().iter().all(|v| covered.contains(v))
}

/// Adds `dom(V)` in front of the body for every variable `V` not covered
/// by a positive literal. The `dom` facts are returned only when the rule
/// changed.
pub fn make_range_restricted(r: &Rule, hu: &HerbrandUniverse) -> (Rule, Vec<Rule>) {
    let covered: BTreeSet<Symbol> = r
        .body
        .iter()
        .filter(|l| l.is_pos())
        .flat_map(|l| l.atom.vars())
        .collect();
    let missing: Vec<Symbol> = r
        .vars()
        .into_iter()
        .filter(|v| !covered.contains(v))
        .collect();
    if missing.is_empty() {
        return (r.clone(), Vec::new());
    }
    let mut out = r.clone();
    let dom_lits = missing
        .iter()
        .map(|v| Literal::pos(Atom::new(DOM, vec![Term::Var(v.clone())])));
    out.body = dom_lits.chain(r.body.iter().cloned()).collect();
    (out, dom_facts(hu))
}

pub fn dom_facts(hu: &HerbrandUniverse) -> Vec<Rule> {
    hu.constants()
        .iter()
        .map(|c| Rule::fact(Atom::new(DOM, vec![Term::Const(c.clone())])))
        .collect()
}

/// Applies [`make_range_restricted`] to every rule of a framework and
/// `r_new`; `dom` facts are appended to `T_pst` once if anything changed.
pub fn range_restrict_framework(
    fw: &RevisionFramework,
    r_new: &Rule,
    hu: &HerbrandUniverse,
) -> (RevisionFramework, Rule) {
    let mut changed = false;
    let mut fix = |p: &Program| -> Program {
        p.iter()
            .map(|r| {
                let (rr, facts) = make_range_restricted(r, hu);
                changed |= !facts.is_empty();
                rr
            })
            .collect()
    };
    let mut out = RevisionFramework::new(fix(&fw.t_pst), fix(&fw.t_tmp), fix(&fw.t_bck));
    let (new_rr, facts) = make_range_restricted(r_new, hu);
    changed |= !facts.is_empty();
    if changed {
        out.t_pst.rules.extend(dom_facts(hu));
    }
    (out, new_rr)
}

/// P⁻: integrity constraints dropped, naf and abducible literals removed.
pub fn negation_removed(p: &Program, abducibles: &Abducibles) -> Program {
    p.iter()
        .filter(|r| !r.is_constraint())
        .map(|r| Rule {
            name: r.name.clone(),
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .filter(|l| l.is_pos() && !is_abducible(&l.atom, abducibles))
                .cloned()
                .collect(),
            guards: r.guards.clone(),
        })
        .collect()
}

/// Least fixpoint of the immediate-consequence operator, semi-naive: each
/// rule is revisited only when one of its body atoms is newly derived.
pub fn least_model(p: &GroundProgram) -> Result<BTreeSet<Atom>> {
    if let Some(r) = p.rules().find(|r| !r.is_definite()) {
        return Err(Error::NotDefinite(r.to_string()));
    }
    Ok(least_model_of(p.rules()))
}

/// Least model of definite ground rules; naf literals, if any, are ignored.
pub(crate) fn least_model_of<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> BTreeSet<Atom> {
    let rules: Vec<&Rule> = rules.into_iter().collect();
    let mut watch: BTreeMap<&Atom, Vec<usize>> = BTreeMap::new();
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut queue: Vec<&Atom> = Vec::new();
    let mut model: BTreeSet<Atom> = BTreeSet::new();
    for (i, r) in rules.iter().enumerate() {
        let pos: BTreeSet<&Atom> = r
            .body
            .iter()
            .filter(|l| l.is_pos())
            .map(|l| &l.atom)
            .collect();
        missing.push(pos.len());
        for a in &pos {
            watch.entry(a).or_default().push(i);
        }
        if pos.is_empty() && model.insert(r.head.clone()) {
            queue.push(&r.head);
        }
    }
    while let Some(a) = queue.pop() {
        if let Some(ids) = watch.get(a) {
            for &i in ids {
                missing[i] -= 1;
                if missing[i] == 0 && model.insert(rules[i].head.clone()) {
                    queue.push(&rules[i].head);
                }
            }
        }
    }
    model
}

/// min(P⁻) grounded over `hu`.
pub fn stripped_least_model(
    p: &Program,
    abducibles: &Abducibles,
    hu: &HerbrandUniverse,
) -> BTreeSet<Atom> {
    let minus = ground(&negation_removed(p, abducibles), hu);
    least_model_of(minus.rules())
}

/// Whether a ground rule belongs to Ω: all its positive non-abducible body
/// atoms lie in `min_minus`.
pub fn is_relevant(r: &Rule, abducibles: &Abducibles, min_minus: &BTreeSet<Atom>) -> bool {
    r.body
        .iter()
        .filter(|l| l.is_pos() && !is_abducible(&l.atom, abducibles))
        .all(|l| min_minus.contains(&l.atom))
}

/// Ω_P: ground instances of `p` whose positive non-abducible body atoms are
/// all in min(P⁻).
pub fn relevant_ground_program(
    p: &Program,
    abducibles: &Abducibles,
    hu: &HerbrandUniverse,
) -> GroundProgram {
    let min_minus = stripped_least_model(p, abducibles, hu);
    ground(p, hu)
        .rules()
        .filter(|r| is_relevant(r, abducibles, &min_minus))
        .cloned()
        .collect()
}

/// Ground instances of `r` that belong to Ω, given min(P⁻). Variables are
/// bound by walking the positive body against `min_minus` first, so only
/// candidate instances are produced; remaining variables range over `hu`.
pub fn relevant_instances(
    r: &Rule,
    abducibles: &Abducibles,
    min_minus: &BTreeSet<Atom>,
    hu: &HerbrandUniverse,
) -> Vec<Rule> {
    let pos: Vec<&Atom> = r
        .body
        .iter()
        .filter(|l| l.is_pos() && !is_abducible(&l.atom, abducibles))
        .map(|l| &l.atom)
        .collect();
    let mut partial = vec![Substitution::empty()];
    for a in pos {
        let mut next = Vec::new();
        for s in &partial {
            for m in candidates(a, min_minus) {
                if let Some(s2) = s.match_atom(a, m) {
                    next.push(s2);
                }
            }
        }
        partial = next;
    }
    let vars = r.vars();
    let mut out: IndexSet<Rule> = IndexSet::new();
    for s in partial {
        let rest: Vec<Symbol> = vars
            .iter()
            .filter(|v| s.get(v).is_none())
            .cloned()
            .collect();
        for extra in assignments(&rest, hu) {
            let full = s.compose(&extra);
            if let Some(g) = instantiate(r, &full) {
                out.insert(g);
            }
        }
    }
    out.into_iter().collect()
}

fn candidates<'a>(a: &'a Atom, set: &'a BTreeSet<Atom>) -> impl Iterator<Item = &'a Atom> + 'a {
    let lo = Atom {
        pred: a.pred.clone(),
        args: Vec::new(),
    };
    set.range(lo..)
        .take_while(move |m| m.pred == a.pred)
        .filter(move |m| m.args.len() == a.args.len())
}

/// Ground atoms of `set` matching `pattern`.
pub fn matching_atoms<'a>(
    pattern: &'a Atom,
    set: &'a BTreeSet<Atom>,
) -> impl Iterator<Item = (&'a Atom, Substitution)> + 'a {
    candidates(pattern, set)
        .filter_map(move |m| Substitution::empty().match_atom(pattern, m).map(|s| (m, s)))
}

pub fn dom_symbol() -> Symbol {
    sym(DOM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_framework, parse_program, parse_rule};

    const FW1: &str = "#persistent\nc(c1). c(c2).\n#temporal\nphi1: r(X) :- c(X), not b(X).\n#backup\nphi2: b(X) :- c(X), not r(X).\n#new\n:- r(c1).";

    fn hu(cs: &[&str]) -> HerbrandUniverse {
        HerbrandUniverse::new(cs.iter().map(|c| sym(c)))
    }

    fn rules(text: &str) -> Vec<Rule> {
        parse_program(text).unwrap().rules
    }

    #[test]
    fn constants_of_fw1() {
        let (fw, r_new) = parse_framework(FW1).unwrap();
        let u = herbrand_constants(&fw, &r_new.clone().unwrap()).unwrap();
        assert_eq!(u, hu(&["c1", "c2"]));

        let (mut fw3, _) = parse_framework(FW1).unwrap();
        fw3.t_pst.push(parse_rule("d(c3).").unwrap());
        assert_eq!(
            herbrand_constants(&fw3, &r_new.unwrap()).unwrap(),
            hu(&["c1", "c2", "c3"])
        );
    }

    #[test]
    fn propositional_universe_is_empty_and_grounding_is_identity() {
        let (fw, r_new) = parse_framework("#temporal\np :- not q.\n#new\n:- p.").unwrap();
        let u = herbrand_constants(&fw, &r_new.unwrap()).unwrap();
        assert!(u.is_empty());
        assert_eq!(
            ground(&fw.t_tmp, &u).to_program(),
            fw.t_tmp
                .clone()
                .iter()
                .cloned()
                .map(Rule::unnamed)
                .collect()
        );
    }

    #[test]
    fn variables_without_constants_cannot_ground() {
        let (fw, r_new) = parse_framework("#temporal\np(X) :- q(X).\n#new\n:- p(X).").unwrap();
        assert_eq!(
            herbrand_constants(&fw, &r_new.unwrap()),
            Err(Error::EmptyUniverse)
        );
    }

    #[test]
    fn grounds_fw1_parts() {
        let (fw, _) = parse_framework(FW1).unwrap();
        let u = hu(&["c1", "c2"]);
        assert_eq!(
            ground(&fw.t_tmp, &u).to_program().rules,
            rules("r(c1) :- c(c1), not b(c1). r(c2) :- c(c2), not b(c2).")
        );
        assert_eq!(
            ground(&fw.t_bck, &u).to_program().rules,
            rules("b(c1) :- c(c1), not r(c1). b(c2) :- c(c2), not r(c2).")
        );
        let g = ground(&fw.t_tmp, &u);
        assert_eq!(ground(&g.to_program(), &u), g);
    }

    #[test]
    fn guards_filter_instances() {
        let r = parse_rule("r(X) :- c(X), not b(X), X != c1.").unwrap();
        assert_eq!(
            ground_rule(&r, &hu(&["c1", "c2"])),
            rules("r(c2) :- c(c2), not b(c2).")
        );
    }

    #[test]
    fn range_restriction_transform() {
        let u = hu(&["c1", "c2"]);
        let ok = parse_rule("r(X) :- c(X), not b(X).").unwrap();
        assert_eq!(make_range_restricted(&ok, &u), (ok.clone(), vec![]));
        let bad = parse_rule("p(X) :- not q(X).").unwrap();
        let (fixed, facts) = make_range_restricted(&bad, &u);
        assert_eq!(fixed, parse_rule("p(X) :- dom(X), not q(X).").unwrap());
        assert_eq!(facts, rules("dom(c1). dom(c2)."));
        let prop = parse_rule(":- not p.").unwrap();
        assert_eq!(make_range_restricted(&prop, &u), (prop.clone(), vec![]));
        assert!(is_range_restricted(&fixed, &Abducibles::new()));
    }

    fn tau1() -> (Program, Abducibles) {
        let p = parse_program(
            "c(c1). c(c2). :- r(c1).
             r(X) :- c(X), not b(X), not phi1-*(X).
             b(X) :- c(X), phi2+*(X), not r(X).",
        )
        .unwrap();
        (p, [sym("phi1-*"), sym("phi2+*")].into_iter().collect())
    }

    #[test]
    fn negation_removed_tau1() {
        let (p, a) = tau1();
        assert_eq!(
            negation_removed(&p, &a).rules,
            rules("c(c1). c(c2). r(X) :- c(X). b(X) :- c(X).")
        );
        let definite = parse_program("p :- q. q.").unwrap();
        assert_eq!(negation_removed(&definite, &a), definite);
        let ics = parse_program(":- p. :- not q.").unwrap();
        assert!(negation_removed(&ics, &a).is_empty());
    }

    #[test]
    fn least_model_of_stripped_tau1() {
        let (p, a) = tau1();
        let u = hu(&["c1", "c2"]);
        let m = least_model(&ground(&negation_removed(&p, &a), &u)).unwrap();
        let expected: BTreeSet<Atom> = ["c(c1)", "c(c2)", "r(c1)", "r(c2)", "b(c1)", "b(c2)"]
            .iter()
            .map(|s| parse_rule(&format!("{s}.")).unwrap().head)
            .collect();
        assert_eq!(m, expected);
        assert!(least_model(&GroundProgram::default()).unwrap().is_empty());
        let pq = ground(&parse_program("p :- q.").unwrap(), &u);
        assert!(least_model(&pq).unwrap().is_empty());
        let naf = ground(&parse_program("p :- not q.").unwrap(), &u);
        assert!(matches!(least_model(&naf), Err(Error::NotDefinite(_))));
    }

    #[test]
    fn omega_examples() {
        let (p, a) = tau1();
        let u = hu(&["c1", "c2"]);
        let omega = relevant_ground_program(&p, &a, &u);
        assert_eq!(omega, ground(&p, &u));
        assert!(omega.contains(&parse_rule(":- r(c1).").unwrap()));

        let none = parse_program("p(X) :- q(X), not r(X). s(c1).").unwrap();
        let omega = relevant_ground_program(&none, &Abducibles::new(), &hu(&["c1"]));
        assert_eq!(omega.to_program().rules, rules("s(c1)."));

        let facts = parse_program("a(c1). b.").unwrap();
        assert_eq!(relevant_ground_program(&facts, &a, &u).to_program(), facts);
    }

    #[test]
    fn relevant_instances_agree_with_omega() {
        let (p, a) = tau1();
        let u = hu(&["c1", "c2"]);
        let min_minus = stripped_least_model(&p, &a, &u);
        let omega = relevant_ground_program(&p, &a, &u);
        let via_instances: GroundProgram = p
            .iter()
            .flat_map(|r| relevant_instances(r, &a, &min_minus, &u))
            .collect();
        assert_eq!(via_instances.len(), omega.len());
        assert!(via_instances.is_subset(&omega));
    }
}
