//! Top-down abductive consistency checking.
//!
//! Four mutually recursive subprocedures, `rule_con`, `literal_con`,
//! `derive` and `deleted_con`, search for a consistent set Δ of ground
//! literals under which the new rule can be added. Every nondeterministic
//! choice (which rule to derive with, whether to falsify or satisfy a body
//! literal, how to settle the head of a deleted rule) is explored by
//! depth-first backtracking, so the search yields every reachable Δ. The
//! positive abducibles of a Δ name instances to delete (`φ-*`) or add
//! (`φ+*`).
//!
//! The search is written in continuation-passing style: each subprocedure
//! receives the branch state and a continuation to call once per way it
//! succeeds. Returning without calling the continuation is failure. State
//! is passed by value, so backtracking never sees a descendant's changes.
//!
//! Selection order is fixed: program rules in order, ground instances in
//! grounding order, body literals left to right, falsifying a literal
//! before satisfying it, deriving a deleted rule's head before assuming it
//! false.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use indexmap::IndexSet;

use crate::grounder::{
    instantiate, matching_atoms, range_restrict_framework, relevant_instances,
    stripped_least_model, HerbrandUniverse,
};
use crate::model::{
    is_abducible, minimal_antichain, Abducibles, Apply, Atom, Delta, Literal, Program,
    RevisionFramework, Rule, Substitution, Theta,
};
use crate::parser::render_clause;
use crate::stable::is_consistent_over;
use crate::translator::{
    apply_revision, extract_revision, translate, AbductiveFramework, Revision,
};
use crate::{Error, Result};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Maximum number of subprocedure calls per search.
    pub step_budget: u64,
    /// Record an indexed call trace for every success branch.
    pub trace: bool,
    /// Test-only mutation: treat every deleted rule as harmless.
    #[doc(hidden)]
    pub skip_deleted_con: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            step_budget: DEFAULT_STEP_BUDGET,
            trace: false,
            skip_deleted_con: false,
        }
    }
}

impl EngineConfig {
    pub fn traced() -> Self {
        EngineConfig {
            trace: true,
            ..Default::default()
        }
    }
}

/// Set of resolvents of `p` w.r.t. a ground literal `l`: for negative `l`,
/// every rule whose head matches the complement becomes a constraint with
/// the same body; for any `l`, every body literal matching `l` is removed.
/// Only the variables of the matched atom are bound. Program order, heads
/// before bodies, duplicates dropped.
pub fn resolve(l: &Literal, p: &Program) -> Vec<Rule> {
    let mut out: IndexSet<Rule> = IndexSet::new();
    for r in p.iter() {
        if l.is_naf() {
            if let Some(s) = Substitution::empty().match_atom(&r.head, &l.atom) {
                let mut c = r.apply(&s).unnamed();
                c.head = Atom::bot();
                out.insert(c);
            }
        }
        for (i, b) in r.body.iter().enumerate() {
            if b.sign != l.sign {
                continue;
            }
            if let Some(s) = Substitution::empty().match_atom(&b.atom, &l.atom) {
                let mut c = r.apply(&s).unnamed();
                c.body.remove(i);
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

/// Rules of `p` containing the complement of `l` in their body, with the
/// matched atom's variables bound.
pub fn del(l: &Literal, p: &Program) -> Vec<Rule> {
    let target = l.complement();
    let mut out: IndexSet<Rule> = IndexSet::new();
    for r in p.iter() {
        for b in &r.body {
            if b.sign != target.sign {
                continue;
            }
            if let Some(s) = Substitution::empty().match_atom(&b.atom, &target.atom) {
                out.insert(r.apply(&s).unnamed());
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proc {
    RuleCon,
    LiteralCon,
    Derive,
    DeletedCon,
}

impl fmt::Display for Proc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proc::RuleCon => "rc",
            Proc::LiteralCon => "lc",
            Proc::Derive => "dr",
            Proc::DeletedCon => "dc",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Call {
        proc: Proc,
        arg: String,
    },
    /// The rule instance picked by `derive`.
    Select {
        rule: String,
    },
}

/// One line of a branch trace. `index` is the nesting path (`1.1.2`); the
/// top-level call has an empty index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub index: Vec<u32>,
    pub event: TraceEvent,
    pub delta: Delta,
}

impl TraceEntry {
    pub fn index_string(&self) -> String {
        self.index
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.index_string();
        if !idx.is_empty() {
            write!(f, "{idx} ")?;
        }
        match &self.event {
            TraceEvent::Call { proc, arg } => write!(f, "{proc}({arg}) Δ={}", self.delta),
            TraceEvent::Select { rule } => write!(f, "select {rule}"),
        }
    }
}

struct TraceNode {
    entry: TraceEntry,
    prev: Option<Rc<TraceNode>>,
}

fn trace_to_vec(mut node: Option<&Rc<TraceNode>>) -> Vec<TraceEntry> {
    let mut out = Vec::new();
    while let Some(n) = node {
        out.push(n.entry.clone());
        node = n.prev.as_ref();
    }
    out.reverse();
    out
}

/// Branch-local search state.
#[derive(Clone)]
pub struct SearchState {
    pub delta: Delta,
    /// Deleted rules already checked on this branch.
    processed: Rc<BTreeSet<Rule>>,
    trace: Option<Rc<TraceNode>>,
    /// Child counters of the open call frames, innermost last.
    counters: Vec<u32>,
}

impl SearchState {
    pub fn new(delta: Delta) -> Self {
        SearchState {
            delta,
            processed: Rc::new(BTreeSet::new()),
            trace: None,
            counters: Vec::new(),
        }
    }

    pub fn trace(&self) -> Vec<TraceEntry> {
        trace_to_vec(self.trace.as_ref())
    }
}

/// A successful branch of the top-level `rule_con`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Success {
    pub delta: Delta,
    pub theta: Theta,
    pub trace: Vec<TraceEntry>,
}

#[derive(Clone, Debug)]
pub struct EngineOutcome {
    pub successes: Vec<Success>,
    /// ⊆-minimal positive-abducible sets over all successes.
    pub minimal_thetas: Vec<Theta>,
    /// One verified revision per minimal Θ, in the same order.
    pub revisions: Vec<Revision>,
    /// Minimal Θ whose revised program failed the consistency re-check.
    pub rejected: Vec<Theta>,
    /// Subprocedure calls spent.
    pub steps: u64,
    /// The range-restricted framework the revisions refer to.
    pub framework: RevisionFramework,
    pub new_rule: Rule,
    pub universe: HerbrandUniverse,
    pub abductive: AbductiveFramework,
}

impl EngineOutcome {
    /// Distinct positive-abducible sets over all successes, first-seen order.
    pub fn success_thetas(&self) -> Vec<Theta> {
        let mut out: Vec<Theta> = Vec::new();
        for s in &self.successes {
            if !out.contains(&s.theta) {
                out.push(s.theta.clone());
            }
        }
        out
    }

    /// Successes whose Θ strictly contains some minimal Θ.
    pub fn non_minimal_successes(&self) -> Vec<&Success> {
        self.successes
            .iter()
            .filter(|s| {
                self.minimal_thetas
                    .iter()
                    .any(|m| m.len() < s.theta.len() && m.is_subset(&s.theta))
            })
            .collect()
    }
}

type Flow = Result<()>;
type Cont<'k> = dyn FnMut(SearchState) -> Flow + 'k;
type DeriveCont<'k> = dyn FnMut(Substitution, SearchState) -> Flow + 'k;

/// The proof procedure over one translated program `P ∪ {R_new}`.
pub struct Revisor {
    program: Program,
    abducibles: Abducibles,
    universe: HerbrandUniverse,
    /// min(P⁻), used for Ω membership and to prune underivable atoms.
    stripped_model: BTreeSet<Atom>,
    config: EngineConfig,
    steps: Cell<u64>,
    /// Results of finished calls, keyed by call and entry state; `None`
    /// while the call is still running. Unused when tracing.
    table: RefCell<HashMap<CallKey, Option<Rc<Vec<Outcome>>>>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Call {
    RuleCon(Rule),
    LiteralCon(Literal),
    Derive(Atom, Vec<Atom>),
    DeletedCon(Rule),
}

type CallKey = (Call, Delta, Rc<BTreeSet<Rule>>);
type Outcome = (Delta, Rc<BTreeSet<Rule>>);

impl Revisor {
    /// `af.program` must already contain the new rule.
    pub fn new(af: &AbductiveFramework, universe: HerbrandUniverse, config: EngineConfig) -> Self {
        let stripped_model = stripped_least_model(&af.program, &af.abducibles, &universe);
        Revisor {
            program: af.program.clone(),
            abducibles: af.abducibles.clone(),
            universe,
            stripped_model,
            config,
            steps: Cell::new(0),
            table: RefCell::new(HashMap::new()),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    fn is_abd(&self, a: &Atom) -> bool {
        is_abducible(a, &self.abducibles)
    }

    /// Every Δ reached by `rule_con(r, delta)`, with its branch state.
    pub fn run(&self, r: &Rule, delta: &Delta) -> Result<Vec<SearchState>> {
        let mut out = Vec::new();
        self.rule_con(r, SearchState::new(delta.clone()), &mut |st| {
            out.push(st);
            Ok(())
        })?;
        Ok(out)
    }

    pub fn rule_con_all(&self, r: &Rule, delta: &Delta) -> Result<Vec<Delta>> {
        Ok(self.run(r, delta)?.into_iter().map(|s| s.delta).collect())
    }

    pub fn literal_con_all(&self, l: &Literal, delta: &Delta) -> Result<Vec<Delta>> {
        let mut out = Vec::new();
        self.literal_con(l, SearchState::new(delta.clone()), &mut |st| {
            out.push(st.delta);
            Ok(())
        })?;
        Ok(out)
    }

    pub fn literal_con_traced(&self, l: &Literal, delta: &Delta) -> Result<Vec<SearchState>> {
        let mut out = Vec::new();
        self.literal_con(l, SearchState::new(delta.clone()), &mut |st| {
            out.push(st);
            Ok(())
        })?;
        Ok(out)
    }

    pub fn derive_all(&self, p: &Atom, delta: &Delta) -> Result<Vec<(Substitution, Delta)>> {
        let mut out = Vec::new();
        self.derive(p, &[], SearchState::new(delta.clone()), &mut |s, st| {
            out.push((s, st.delta));
            Ok(())
        })?;
        Ok(out)
    }

    pub fn deleted_con_all(&self, r: &Rule, delta: &Delta) -> Result<Vec<Delta>> {
        let mut out = Vec::new();
        self.deleted_con(r, SearchState::new(delta.clone()), &mut |st| {
            out.push(st.delta);
            Ok(())
        })?;
        Ok(out)
    }

    fn enter(
        &self,
        mut st: SearchState,
        proc: Proc,
        arg: impl FnOnce() -> String,
    ) -> Result<SearchState> {
        let n = self.steps.get() + 1;
        if n > self.config.step_budget {
            return Err(Error::NonTermination(self.config.step_budget));
        }
        self.steps.set(n);
        if let Some(top) = st.counters.last_mut() {
            *top += 1;
        }
        if self.config.trace {
            let entry = TraceEntry {
                index: st.counters.clone(),
                event: TraceEvent::Call { proc, arg: arg() },
                delta: st.delta.clone(),
            };
            st.trace = Some(Rc::new(TraceNode {
                entry,
                prev: st.trace.take(),
            }));
        }
        st.counters.push(0);
        Ok(st)
    }

    /// Runs `body` once per distinct (call, Δ, processed) and replays the
    /// recorded outcomes on later identical calls. Outcomes depend on
    /// nothing else, so replay yields exactly what re-running would.
    /// Tracing bypasses the table to keep every call in the trace.
    fn tabled(
        &self,
        call: Call,
        st: SearchState,
        k: &mut Cont<'_>,
        body: impl FnOnce(SearchState, &mut Cont<'_>) -> Flow,
    ) -> Flow {
        if self.config.trace {
            return body(st, k);
        }
        let key: CallKey = (call, st.delta.clone(), st.processed.clone());
        let cached = self.table.borrow().get(&key).cloned();
        let outcomes = match cached {
            Some(Some(o)) => o,
            // re-entered with identical state: plain recursion would not end
            Some(None) => return Err(Error::NonTermination(self.config.step_budget)),
            None => {
                self.table.borrow_mut().insert(key.clone(), None);
                let mut out = Vec::new();
                body(st.clone(), &mut |s| {
                    out.push((s.delta, s.processed));
                    Ok(())
                })?;
                let out = Rc::new(out);
                self.table.borrow_mut().insert(key, Some(out.clone()));
                out
            }
        };
        for (delta, processed) in outcomes.iter() {
            let mut s = st.clone();
            s.delta = delta.clone();
            s.processed = processed.clone();
            if let Some(top) = s.counters.last_mut() {
                *top += 1;
            }
            k(s)?;
        }
        Ok(())
    }

    fn note_select(&self, mut st: SearchState, rule: &Rule) -> SearchState {
        if let Some(top) = st.counters.last_mut() {
            *top += 1;
        }
        if self.config.trace {
            let entry = TraceEntry {
                index: st.counters.clone(),
                event: TraceEvent::Select {
                    rule: crate::parser::render_rule(rule),
                },
                delta: st.delta.clone(),
            };
            st.trace = Some(Rc::new(TraceNode {
                entry,
                prev: st.trace.take(),
            }));
        }
        st
    }

    fn leave(mut st: SearchState) -> SearchState {
        st.counters.pop();
        st
    }

    /// Wraps the exit continuation of a call so that each distinct
    /// (Δ, processed) outcome is passed on once. Later work depends on
    /// nothing else, so repeats would only re-run identical searches.
    fn exit_once<'a, 'k: 'a>(k: &'a mut Cont<'k>) -> Box<Cont<'a>> {
        let mut seen: BTreeSet<(Delta, Rc<BTreeSet<Rule>>)> = BTreeSet::new();
        Box::new(move |st: SearchState| {
            if !seen.insert((st.delta.clone(), st.processed.clone())) {
                return Ok(());
            }
            k(Self::leave(st))
        })
    }

    fn instances(&self, r: &Rule) -> Vec<Rule> {
        relevant_instances(r, &self.abducibles, &self.stripped_model, &self.universe)
    }

    /// Checks that adding `r` keeps `P ∪ Δ` consistent: for every ground
    /// instance in Ω, some body literal is falsified or the whole body is
    /// made true and the head is consistently assumed.
    pub fn rule_con(&self, r: &Rule, st: SearchState, k: &mut Cont<'_>) -> Flow {
        self.tabled(Call::RuleCon(r.clone()), st, k, |st, k| {
            self.rule_con_call(r, st, k)
        })
    }

    fn rule_con_call(&self, r: &Rule, st: SearchState, k: &mut Cont<'_>) -> Flow {
        let st = self.enter(st, Proc::RuleCon, || render_clause(r))?;
        let insts = self.instances(r);
        self.rc_instances(&insts, 0, st, &mut *Self::exit_once(k))
    }

    fn rc_instances(&self, insts: &[Rule], i: usize, st: SearchState, k: &mut Cont<'_>) -> Flow {
        match insts.get(i) {
            None => k(st),
            Some(inst) => self.rc_body(inst, 0, st, &mut |st| {
                self.rc_instances(insts, i + 1, st, k)
            }),
        }
    }

    fn rc_body(&self, inst: &Rule, at: usize, st: SearchState, k: &mut Cont<'_>) -> Flow {
        let Some(l) = inst.body.get(at) else {
            let head = &inst.head;
            if head.is_bot() || st.delta.contains(&Literal::naf(head.clone())) {
                return Ok(());
            }
            if st.delta.contains(&Literal::pos(head.clone())) {
                return k(st);
            }
            return self.literal_con(&Literal::pos(head.clone()), st, k);
        };
        if st.delta.contains(l) {
            return self.rc_body(inst, at + 1, st, k);
        }
        if st.delta.contains(&l.complement()) {
            return k(st);
        }
        // case (a): falsify l, which settles the instance
        if l.is_naf() {
            self.derive(&l.atom, &[], st.clone(), &mut |_, st| k(st))?;
        } else {
            self.literal_con(&l.complement(), st.clone(), k)?;
        }
        // case (b): make l true and move on
        if l.is_pos() && !self.is_abd(&l.atom) {
            self.derive(&l.atom, &[], st, &mut |_, st| {
                self.rc_body(inst, at + 1, st, k)
            })
        } else {
            self.literal_con(l, st, &mut |st| self.rc_body(inst, at + 1, st, k))
        }
    }

    /// Assumes the ground literal `l`, then checks every resolvent with
    /// `rule_con` and every deleted rule with `deleted_con`.
    pub fn literal_con(&self, l: &Literal, st: SearchState, k: &mut Cont<'_>) -> Flow {
        self.tabled(Call::LiteralCon(l.clone()), st, k, |st, k| {
            self.literal_con_call(l, st, k)
        })
    }

    fn literal_con_call(&self, l: &Literal, st: SearchState, k: &mut Cont<'_>) -> Flow {
        let st = self.enter(st, Proc::LiteralCon, || l.to_string())?;
        if st.delta.contains(l) {
            return k(Self::leave(st));
        }
        if l.atom.is_bot() {
            return if l.is_naf() {
                k(Self::leave(st))
            } else {
                Ok(())
            };
        }
        let Some(delta) = st.delta.with(l.clone()) else {
            return Ok(());
        };
        debug_assert!(delta.is_consistent());
        let st = SearchState { delta, ..st };
        let resolvents = resolve(l, &self.program);
        let deleted = del(l, &self.program);
        self.lc_resolvents(&resolvents, &deleted, 0, st, &mut *Self::exit_once(k))
    }

    fn lc_resolvents(
        &self,
        resolvents: &[Rule],
        deleted: &[Rule],
        i: usize,
        st: SearchState,
        k: &mut Cont<'_>,
    ) -> Flow {
        match resolvents.get(i) {
            Some(r) => self.rule_con(r, st, &mut |st| {
                self.lc_resolvents(resolvents, deleted, i + 1, st, k)
            }),
            None => self.lc_deleted(deleted, 0, st, k),
        }
    }

    fn lc_deleted(&self, deleted: &[Rule], i: usize, st: SearchState, k: &mut Cont<'_>) -> Flow {
        if self.config.skip_deleted_con {
            return k(st);
        }
        match deleted.get(i) {
            Some(r) => self.deleted_con(r, st, &mut |st| self.lc_deleted(deleted, i + 1, st, k)),
            None => k(st),
        }
    }

    /// Derives `p`. A non-ground `p` is tried at each of its instances in
    /// min(P⁻) and the matching substitution is returned; ground atoms
    /// return ε. `ancestors` holds the atoms being derived on the current
    /// chain of positive subgoals.
    pub fn derive(
        &self,
        p: &Atom,
        ancestors: &[Atom],
        st: SearchState,
        k: &mut DeriveCont<'_>,
    ) -> Flow {
        if p.is_ground() {
            return self.derive_ground(p, ancestors, st, k);
        }
        let candidates: Vec<(Atom, Substitution)> = matching_atoms(p, &self.stripped_model)
            .map(|(a, s)| (a.clone(), s))
            .collect();
        for (a, s) in candidates {
            self.derive_ground(&a, ancestors, st.clone(), &mut |_, st| k(s.clone(), st))?;
        }
        Ok(())
    }

    fn derive_ground(
        &self,
        p: &Atom,
        ancestors: &[Atom],
        st: SearchState,
        k: &mut DeriveCont<'_>,
    ) -> Flow {
        let key = Call::Derive(p.clone(), ancestors.to_vec());
        self.tabled(key, st, &mut |st| k(Substitution::empty(), st), |st, k| {
            self.derive_call(p, ancestors, st, &mut |_, st| k(st))
        })
    }

    fn derive_call(
        &self,
        p: &Atom,
        ancestors: &[Atom],
        st: SearchState,
        k: &mut DeriveCont<'_>,
    ) -> Flow {
        let st = self.enter(st, Proc::Derive, || p.to_string())?;
        let mut exit = |st: SearchState| k(Substitution::empty(), st);
        let done = &mut *Self::exit_once(&mut exit);
        if st.delta.contains(&Literal::pos(p.clone())) {
            return done(st);
        }
        if p.is_bot() || st.delta.contains(&Literal::naf(p.clone())) {
            return Ok(());
        }
        if self.is_abd(p) {
            return self.literal_con(&Literal::pos(p.clone()), st, done);
        }
        if ancestors.contains(p) || !self.stripped_model.contains(p) {
            return Ok(());
        }
        let mut chain = ancestors.to_vec();
        chain.push(p.clone());
        for r in self.program.iter() {
            let Some(theta) = Substitution::empty().match_atom(&r.head, p) else {
                continue;
            };
            let selected = r.apply(&theta);
            let st = self.note_select(st.clone(), &selected);
            let pos: Vec<Atom> = selected
                .body
                .iter()
                .filter(|l| l.is_pos() && !self.is_abd(&l.atom))
                .map(|l| l.atom.clone())
                .collect();
            self.derive_body(
                &pos,
                0,
                Substitution::empty(),
                &chain,
                st,
                &mut |sigma, st| {
                    let Some(inst) = instantiate(&selected, &sigma) else {
                        return Ok(());
                    };
                    let rest: Vec<Literal> = inst
                        .body
                        .iter()
                        .filter(|l| l.is_naf() || self.is_abd(&l.atom))
                        .cloned()
                        .collect();
                    if rest.iter().any(|l| !l.is_ground()) {
                        return Ok(());
                    }
                    self.literal_seq(&rest, 0, st, &mut |st| {
                        self.literal_con(&Literal::pos(p.clone()), st, done)
                    })
                },
            )?;
        }
        Ok(())
    }

    /// Derives the positive body atoms left to right, threading bindings.
    fn derive_body(
        &self,
        pos: &[Atom],
        i: usize,
        theta: Substitution,
        chain: &[Atom],
        st: SearchState,
        k: &mut DeriveCont<'_>,
    ) -> Flow {
        let Some(b) = pos.get(i) else {
            return k(theta, st);
        };
        let goal = b.apply(&theta);
        self.derive(&goal, chain, st, &mut |sigma, st| {
            self.derive_body(pos, i + 1, theta.compose(&sigma), chain, st, k)
        })
    }

    fn literal_seq(&self, lits: &[Literal], i: usize, st: SearchState, k: &mut Cont<'_>) -> Flow {
        match lits.get(i) {
            None => k(st),
            Some(l) => self.literal_con(l, st, &mut |st| self.literal_seq(lits, i + 1, st, k)),
        }
    }

    /// Checks that implicitly deleting `r` is harmless: the head of every
    /// ground instance in Ω is either derived or assumed false.
    pub fn deleted_con(&self, r: &Rule, st: SearchState, k: &mut Cont<'_>) -> Flow {
        self.tabled(Call::DeletedCon(r.clone()), st, k, |st, k| {
            self.deleted_con_call(r, st, k)
        })
    }

    fn deleted_con_call(&self, r: &Rule, st: SearchState, k: &mut Cont<'_>) -> Flow {
        let mut st = self.enter(st, Proc::DeletedCon, || render_clause(r))?;
        if st.processed.contains(r) {
            return k(Self::leave(st));
        }
        let mut processed = (*st.processed).clone();
        processed.insert(r.clone());
        st.processed = Rc::new(processed);
        let insts = self.instances(r);
        self.dc_instances(&insts, 0, st, &mut *Self::exit_once(k))
    }

    fn dc_instances(&self, insts: &[Rule], i: usize, st: SearchState, k: &mut Cont<'_>) -> Flow {
        let Some(inst) = insts.get(i) else {
            return k(st);
        };
        let head = &inst.head;
        let pos = Literal::pos(head.clone());
        let neg = Literal::naf(head.clone());
        if head.is_bot() || st.delta.contains(&pos) || st.delta.contains(&neg) {
            return self.dc_instances(insts, i + 1, st, k);
        }
        // case (a): the head still holds through another rule
        self.derive(head, &[], st.clone(), &mut |_, st| {
            self.dc_instances(insts, i + 1, st, k)
        })?;
        // case (b): the head becomes false
        self.literal_con(&neg, st, &mut |st| self.dc_instances(insts, i + 1, st, k))
    }
}

/// Computes the minimally revised programs for adding `r_new` to `fw`.
///
/// Rules are made range-restricted first (`dom` facts are added to the
/// persistent part when needed). Fails with [`Error::InitialInconsistent`]
/// if `T_pst ∪ T_tmp` has no stable model and with [`Error::Unrevisable`]
/// if no branch succeeds.
pub fn revise(
    fw: &RevisionFramework,
    r_new: &Rule,
    config: &EngineConfig,
) -> Result<EngineOutcome> {
    fw.validate(Some(r_new))?;
    let universe = crate::grounder::herbrand_constants(fw, r_new)?;
    let (fw, r_new) = range_restrict_framework(fw, r_new, &universe);
    let before = fw.t_pst.extended(fw.t_tmp.iter().cloned());
    if !is_consistent_over(&before, &universe) {
        return Err(Error::InitialInconsistent);
    }
    let abductive = translate(&fw, &r_new)?;
    let revisor = Revisor::new(&abductive, universe.clone(), config.clone());
    let new_rule = r_new.clone().unnamed();
    let states = if is_consistent_over(&before.extended([new_rule.clone()]), &universe) {
        // nothing to revise: the empty Θ is the unique minimal answer
        let st = revisor.enter(SearchState::new(Delta::new()), Proc::RuleCon, || {
            render_clause(&new_rule)
        })?;
        vec![Revisor::leave(st)]
    } else {
        revisor.run(&new_rule, &Delta::new())?
    };
    if states.is_empty() {
        return Err(Error::Unrevisable);
    }
    let successes: Vec<Success> = states
        .into_iter()
        .map(|st| Success {
            theta: st.delta.positive_abducibles(&abductive.abducibles),
            trace: st.trace(),
            delta: st.delta,
        })
        .collect();
    let sets: Vec<BTreeSet<Atom>> = successes.iter().map(|s| s.theta.0.clone()).collect();
    let minimal_thetas: Vec<Theta> = minimal_antichain(&sets).into_iter().map(Theta).collect();
    let mut revisions = Vec::new();
    let mut rejected = Vec::new();
    for theta in &minimal_thetas {
        let rev = extract_revision(theta, &fw)?;
        if is_consistent_over(&apply_revision(&rev, &fw, &r_new), &universe) {
            revisions.push(rev);
        } else {
            rejected.push(theta.clone());
        }
    }
    Ok(EngineOutcome {
        successes,
        minimal_thetas,
        revisions,
        rejected,
        steps: revisor.steps(),
        framework: fw,
        new_rule: r_new,
        universe,
        abductive,
    })
}
