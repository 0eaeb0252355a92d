//! Symbolic representation of function-free normal logic programs.
//!
//! Everything here is an immutable value: terms, atoms, literals and rules
//! are structurally hashable and totally ordered so they can live in
//! ordered sets (assumption sets, ground programs, models) with a
//! reproducible iteration order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Interned-ish name of a predicate, constant, variable or rule.
pub type Symbol = Arc<str>;

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

/// Predicate name reserved for contradiction (⊥).
pub const BOT: &str = "bot";
/// Predicate name reserved for the Herbrand-universe domain predicate.
pub const DOM: &str = "dom";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Symbol),
    Var(Symbol),
}

impl Term {
    pub fn constant(name: &str) -> Self {
        Term::Const(sym(name))
    }

    pub fn var(name: &str) -> Self {
        Term::Var(sym(name))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => f.write_str(c),
            Term::Var(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: sym(pred),
            args,
        }
    }

    /// The nullary contradiction atom ⊥.
    pub fn bot() -> Self {
        Atom::new(BOT, Vec::new())
    }

    pub fn is_bot(&self) -> bool {
        &*self.pred == BOT && self.args.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Variables in order of first occurrence, without repeats.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        collect_vars(&self.args, &mut out);
        out
    }

    pub fn pos(self) -> Literal {
        Literal::pos(self)
    }

    pub fn naf(self) -> Literal {
        Literal::naf(self)
    }
}

fn collect_vars(terms: &[Term], out: &mut Vec<Symbol>) {
    for t in terms {
        if let Term::Var(v) = t {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Positive literals sort before naf literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Naf,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub sign: Sign,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            sign: Sign::Pos,
            atom,
        }
    }

    pub fn naf(atom: Atom) -> Self {
        Literal {
            sign: Sign::Naf,
            atom,
        }
    }

    pub fn is_pos(&self) -> bool {
        self.sign == Sign::Pos
    }

    pub fn is_naf(&self) -> bool {
        self.sign == Sign::Naf
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    /// The complement l̄: flips the sign, keeps the atom.
    pub fn complement(&self) -> Literal {
        Literal {
            sign: match self.sign {
                Sign::Pos => Sign::Naf,
                Sign::Naf => Sign::Pos,
            },
            atom: self.atom.clone(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.atom),
            Sign::Naf => write!(f, "not {}", self.atom),
        }
    }
}

pub fn complement(l: &Literal) -> Literal {
    l.complement()
}

/// A disequality `(t1,...,tk) != (c1,...,ck)`: satisfied by a ground
/// instance unless every `ti` equals `ci`. With `k = 0` it never holds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disequality {
    pub lhs: Vec<Term>,
    pub rhs: Vec<Symbol>,
}

impl Disequality {
    /// `Some(true)` if satisfied, `Some(false)` if violated, `None` while
    /// the left-hand side still has variables.
    pub fn eval(&self) -> Option<bool> {
        let mut all_equal = true;
        for (t, c) in self.lhs.iter().zip(&self.rhs) {
            match t {
                Term::Var(_) => return None,
                Term::Const(k) => {
                    if k != c {
                        all_equal = false;
                    }
                }
            }
        }
        Some(!all_equal)
    }
}

impl fmt::Display for Disequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lhs.len() == 1 {
            return write!(f, "{} != {}", self.lhs[0], self.rhs[0]);
        }
        let lhs: Vec<String> = self.lhs.iter().map(ToString::to_string).collect();
        let rhs: Vec<String> = self.rhs.iter().map(ToString::to_string).collect();
        write!(f, "({}) != ({})", lhs.join(","), rhs.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub name: Option<Symbol>,
    pub head: Atom,
    pub body: Vec<Literal>,
    /// Disequality conjuncts, only produced by revision extraction.
    pub guards: Vec<Disequality>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Rule {
            name: None,
            head,
            body,
            guards: Vec::new(),
        }
    }

    pub fn fact(head: Atom) -> Self {
        Rule::new(head, Vec::new())
    }

    pub fn constraint(body: Vec<Literal>) -> Self {
        Rule::new(Atom::bot(), body)
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(sym(name));
        self
    }

    pub fn unnamed(mut self) -> Self {
        self.name = None;
        self
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_bot()
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground()
            && self.body.iter().all(Literal::is_ground)
            && self
                .guards
                .iter()
                .all(|g| g.lhs.iter().all(Term::is_ground))
    }

    pub fn is_definite(&self) -> bool {
        self.body.iter().all(Literal::is_pos)
    }

    /// The rule's variable tuple: head first, then body left to right,
    /// each variable at its first occurrence.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        collect_vars(&self.head.args, &mut out);
        for l in &self.body {
            collect_vars(&l.atom.args, &mut out);
        }
        for g in &self.guards {
            collect_vars(&g.lhs, &mut out);
        }
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        std::iter::once(&self.head).chain(self.body.iter().map(|l| &l.atom))
    }

    /// Constants in order of first occurrence (guards included).
    pub fn constants(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.constants_into(&mut out);
        out
    }

    pub(crate) fn constants_into(&self, out: &mut Vec<Symbol>) {
        let mut push = |c: &Symbol| {
            if !out.contains(c) {
                out.push(c.clone());
            }
        };
        for a in self.atoms() {
            for t in &a.args {
                if let Term::Const(c) = t {
                    push(c);
                }
            }
        }
        for g in &self.guards {
            for t in &g.lhs {
                if let Term::Const(c) = t {
                    push(c);
                }
            }
            for c in &g.rhs {
                push(c);
            }
        }
    }

    pub fn partition_body(&self, abducibles: &Abducibles) -> BodyParts {
        partition_body(self, abducibles)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_rule(self))
    }
}

/// Set of abducible predicate names.
pub type Abducibles = BTreeSet<Symbol>;

pub fn is_abducible(atom: &Atom, abducibles: &Abducibles) -> bool {
    abducibles.contains(&atom.pred)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BodyParts {
    pub pos: Vec<Literal>,
    pub neg: Vec<Literal>,
    pub abd: Vec<Literal>,
}

/// Splits a body into non-abducible positive literals, non-abducible naf
/// literals, and abducible literals of either sign. Order within each part
/// follows the body.
pub fn partition_body(rule: &Rule, abducibles: &Abducibles) -> BodyParts {
    let mut parts = BodyParts::default();
    for l in &rule.body {
        if is_abducible(&l.atom, abducibles) {
            parts.abd.push(l.clone());
        } else if l.is_pos() {
            parts.pos.push(l.clone());
        } else {
            parts.neg.push(l.clone());
        }
    }
    parts
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Self {
        Program {
            rules: rules.into_iter().collect(),
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub fn extended(&self, more: impl IntoIterator<Item = Rule>) -> Program {
        let mut p = self.clone();
        p.rules.extend(more);
        p
    }

    pub fn constants(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for r in &self.rules {
            r.constants_into(&mut out);
        }
        out
    }

    pub fn has_variables(&self) -> bool {
        self.rules.iter().any(|r| !r.vars().is_empty())
    }

    /// Predicate arities; fails on the first clash.
    pub fn arities(&self) -> Result<BTreeMap<Symbol, usize>, crate::Error> {
        let mut map = BTreeMap::new();
        check_arities(self.rules.iter(), &mut map)?;
        Ok(map)
    }
}

impl<'a> IntoIterator for &'a Program {
    type Item = &'a Rule;
    type IntoIter = std::slice::Iter<'a, Rule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        Program::new(iter)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_arities<'a>(
    rules: impl IntoIterator<Item = &'a Rule>,
    map: &mut BTreeMap<Symbol, usize>,
) -> Result<(), crate::Error> {
    for r in rules {
        for a in r.atoms() {
            match map.get(&a.pred) {
                Some(&n) if n != a.arity() => {
                    return Err(crate::Error::ArityClash {
                        predicate: a.pred.to_string(),
                        expected: n,
                        found: a.arity(),
                    })
                }
                Some(_) => {}
                None => {
                    map.insert(a.pred.clone(), a.arity());
                }
            }
        }
    }
    Ok(())
}

/// Persistent rules, retractable temporal rules and addable backup rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RevisionFramework {
    pub t_pst: Program,
    pub t_tmp: Program,
    pub t_bck: Program,
}

impl RevisionFramework {
    pub fn new(t_pst: Program, t_tmp: Program, t_bck: Program) -> Self {
        RevisionFramework {
            t_pst,
            t_tmp,
            t_bck,
        }
    }

    /// Gives every unnamed temporal rule a name `tmpN` and every unnamed
    /// backup rule `bckN`, skipping names already in use.
    pub fn with_generated_names(mut self) -> Self {
        let mut used: BTreeSet<Symbol> = self
            .t_tmp
            .iter()
            .chain(self.t_bck.iter())
            .filter_map(|r| r.name.clone())
            .collect();
        for (prefix, part) in [("tmp", &mut self.t_tmp), ("bck", &mut self.t_bck)] {
            let mut n = 0;
            for r in &mut part.rules {
                if r.name.is_none() {
                    let name = loop {
                        n += 1;
                        let candidate = sym(&format!("{prefix}{n}"));
                        if !used.contains(&candidate) {
                            break candidate;
                        }
                    };
                    used.insert(name.clone());
                    r.name = Some(name);
                }
            }
        }
        self
    }

    /// Checks name uniqueness across temporal and backup rules, arity
    /// consistency (including `r_new`) and reserved predicates.
    pub fn validate(&self, r_new: Option<&Rule>) -> Result<(), crate::Error> {
        let mut seen = BTreeSet::new();
        for r in self.t_tmp.iter().chain(self.t_bck.iter()) {
            match &r.name {
                None => return Err(crate::Error::UnnamedRule(r.to_string())),
                Some(n) => {
                    if !seen.insert(n.clone()) {
                        return Err(crate::Error::DuplicateRuleName(n.to_string()));
                    }
                }
            }
        }
        let mut arities = BTreeMap::new();
        check_arities(self.all_rules().chain(r_new), &mut arities)?;
        for r in self.all_rules().chain(r_new) {
            if &*r.head.pred == DOM {
                return Err(crate::Error::ReservedPredicate(DOM.to_string()));
            }
            if &*r.head.pred == BOT && !r.head.args.is_empty() {
                return Err(crate::Error::ReservedPredicate(BOT.to_string()));
            }
            if r.body.iter().any(|l| l.atom.is_bot()) {
                return Err(crate::Error::BotInBody(r.to_string()));
            }
        }
        Ok(())
    }

    pub fn all_rules(&self) -> impl Iterator<Item = &Rule> {
        self.t_pst
            .iter()
            .chain(self.t_tmp.iter())
            .chain(self.t_bck.iter())
    }

    pub fn find_rule(&self, name: &str) -> Option<(RulePart, &Rule)> {
        let by_name = |r: &&Rule| r.name.as_deref() == Some(name);
        if let Some(r) = self.t_tmp.iter().find(by_name) {
            return Some((RulePart::Temporal, r));
        }
        self.t_bck
            .iter()
            .find(by_name)
            .map(|r| (RulePart::Backup, r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RulePart {
    Temporal,
    Backup,
}

/// Variable bindings. Ground substitutions map into constants; unifiers may
/// map a variable to another variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<Symbol, Term>);

impl Substitution {
    /// ε
    pub fn empty() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Term)>) -> Self {
        Substitution(pairs.into_iter().map(|(v, t)| (sym(v), t)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn bind(&mut self, var: Symbol, term: Term) {
        self.0.insert(var, term);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.0.iter()
    }

    pub fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        }
    }

    /// The composition θσ: applying it equals applying θ then σ.
    pub fn compose(&self, sigma: &Substitution) -> Substitution {
        let mut out: BTreeMap<Symbol, Term> = self
            .0
            .iter()
            .map(|(v, t)| (v.clone(), sigma.term(t)))
            .collect();
        for (v, t) in &sigma.0 {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        out.retain(|v, t| !matches!(t, Term::Var(w) if w == v));
        Substitution(out)
    }

    /// Matches a pattern atom against a ground atom, extending `self`.
    pub fn match_atom(&self, pattern: &Atom, ground: &Atom) -> Option<Substitution> {
        if pattern.pred != ground.pred || pattern.args.len() != ground.args.len() {
            return None;
        }
        let mut out = self.clone();
        for (p, g) in pattern.args.iter().zip(&ground.args) {
            match out.term(p) {
                Term::Var(v) => out.bind(v, g.clone()),
                bound => {
                    if &bound != g {
                        return None;
                    }
                }
            }
        }
        Some(out)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{t}")?;
        }
        f.write_str("}")
    }
}

/// Things a substitution can be applied to.
pub trait Apply {
    fn apply(&self, s: &Substitution) -> Self;
}

impl Apply for Term {
    fn apply(&self, s: &Substitution) -> Self {
        s.term(self)
    }
}

impl Apply for Atom {
    fn apply(&self, s: &Substitution) -> Self {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| s.term(t)).collect(),
        }
    }
}

impl Apply for Literal {
    fn apply(&self, s: &Substitution) -> Self {
        Literal {
            sign: self.sign,
            atom: self.atom.apply(s),
        }
    }
}

impl Apply for Disequality {
    fn apply(&self, s: &Substitution) -> Self {
        Disequality {
            lhs: self.lhs.iter().map(|t| s.term(t)).collect(),
            rhs: self.rhs.clone(),
        }
    }
}

impl Apply for Rule {
    fn apply(&self, s: &Substitution) -> Self {
        Rule {
            name: self.name.clone(),
            head: self.head.apply(s),
            body: self.body.iter().map(|l| l.apply(s)).collect(),
            guards: self.guards.iter().map(|g| g.apply(s)).collect(),
        }
    }
}

pub fn apply<T: Apply>(s: &Substitution, x: &T) -> T {
    x.apply(s)
}

/// A consistent set of ground literals assumed along one search branch.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delta(BTreeSet<Literal>);

impl Delta {
    pub fn new() -> Self {
        Delta(BTreeSet::new())
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.0.contains(l)
    }

    /// Adds `l`; `None` if that would make the set inconsistent.
    pub fn with(&self, l: Literal) -> Option<Delta> {
        if self.0.contains(&l.complement()) {
            return None;
        }
        let mut next = self.clone();
        next.0.insert(l);
        Some(next)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.0.iter()
    }

    pub fn is_consistent(&self) -> bool {
        self.0.iter().all(|l| !self.0.contains(&l.complement()))
    }

    /// Θ: the positive abducibles.
    pub fn positive_abducibles(&self, abducibles: &Abducibles) -> Theta {
        Theta(
            self.0
                .iter()
                .filter(|l| l.is_pos() && is_abducible(&l.atom, abducibles))
                .map(|l| l.atom.clone())
                .collect(),
        )
    }
}

impl FromIterator<Literal> for Delta {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Delta(iter.into_iter().collect())
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// A set of ground abducible atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theta(pub BTreeSet<Atom>);

impl Theta {
    pub fn new() -> Self {
        Theta(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &Theta) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn as_facts(&self) -> impl Iterator<Item = Rule> + '_ {
        self.0.iter().cloned().map(Rule::fact)
    }
}

impl FromIterator<Atom> for Theta {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        Theta(iter.into_iter().collect())
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Keeps the ⊆-minimal sets, in first-seen order, dropping duplicates.
pub fn minimal_antichain<T: Ord + Clone>(sets: &[BTreeSet<T>]) -> Vec<BTreeSet<T>> {
    let mut out: Vec<BTreeSet<T>> = Vec::new();
    for s in sets {
        if out.contains(s) {
            continue;
        }
        let dominated = sets.iter().any(|t| t.len() < s.len() && t.is_subset(s));
        if !dominated {
            out.push(s.clone());
        }
    }
    out
}
