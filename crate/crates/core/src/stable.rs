//! Stable model semantics: Gelfond–Lifschitz reduct, model enumeration and
//! generalized stable models of abductive frameworks.
//!
//! Enumeration branches on atoms that occur under `not`, propagating with
//! two least-model bounds: the atoms forced true by rules whose naf atoms
//! are all decided false, and the atoms still derivable by rules none of
//! whose naf atoms is decided true. Every candidate is finally re-checked
//! against the reduct definition. [`Strategy::BruteForce`] keeps the
//! definition-level subset enumeration as a reference.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::grounder::{assignments, ground, least_model_of, GroundProgram, HerbrandUniverse};
use crate::model::{Atom, Program, Rule, Symbol, Term, Theta};
use crate::translator::AbductiveFramework;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Model {
    pub atoms: BTreeSet<Atom>,
}

impl Model {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Model {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.atoms.contains(a)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GeneralizedStableModel {
    pub theta: Theta,
    pub model: Model,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Search,
    /// Every subset of head atoms, checked against the definition.
    BruteForce,
}

/// Π_P^M: drops rules with some `not A`, `A ∈ M`, and deletes the remaining
/// naf literals.
pub fn gl_reduct(p: &GroundProgram, m: &BTreeSet<Atom>) -> GroundProgram {
    p.rules()
        .filter(|r| r.body.iter().all(|l| l.is_pos() || !m.contains(&l.atom)))
        .map(|r| Rule {
            name: None,
            head: r.head.clone(),
            body: r.body.iter().filter(|l| l.is_pos()).cloned().collect(),
            guards: Vec::new(),
        })
        .collect()
}

/// The stable-model condition: `m = min(Π_P^m)` and `⊥ ∉ m`.
pub fn is_stable(p: &GroundProgram, m: &BTreeSet<Atom>) -> bool {
    if m.iter().any(Atom::is_bot) {
        return false;
    }
    let reduct = gl_reduct(p, m);
    &least_model_of(reduct.rules()) == m
}

/// Stable models of `p` grounded over its own constants.
pub fn stable_models(p: &Program) -> Vec<Model> {
    stable_models_over(p, &HerbrandUniverse::of_program(p))
}

pub fn stable_models_over(p: &Program, hu: &HerbrandUniverse) -> Vec<Model> {
    stable_models_ground(&ground(p, hu), Strategy::Search)
}

/// All stable models, sorted.
pub fn stable_models_ground(p: &GroundProgram, strategy: Strategy) -> Vec<Model> {
    let mut out = match strategy {
        Strategy::Search => {
            let mut models = Vec::new();
            Solver::new(p).enumerate(&mut |m| {
                models.push(m);
                true
            });
            models
        }
        Strategy::BruteForce => brute_force(p),
    };
    out.sort();
    out
}

pub fn is_consistent(p: &Program) -> bool {
    is_consistent_over(p, &HerbrandUniverse::of_program(p))
}

pub fn is_consistent_over(p: &Program, hu: &HerbrandUniverse) -> bool {
    is_consistent_ground(&ground(p, hu))
}

pub fn is_consistent_ground(p: &GroundProgram) -> bool {
    let mut found = false;
    Solver::new(p).enumerate(&mut |_| {
        found = true;
        false
    });
    found
}

fn brute_force(p: &GroundProgram) -> Vec<Model> {
    let heads: Vec<Atom> = p
        .rules()
        .map(|r| r.head.clone())
        .filter(|a| !a.is_bot())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(heads.len() < 32, "brute force over {} atoms", heads.len());
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << heads.len()) {
        let m: BTreeSet<Atom> = heads
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        if is_stable(p, &m) {
            out.push(Model { atoms: m });
        }
    }
    out
}

const BOT_ID: usize = usize::MAX;

struct IdRule {
    head: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    Unknown,
    In,
    Out,
}

struct Solver<'a> {
    program: &'a GroundProgram,
    atoms: Vec<Atom>,
    rules: Vec<IdRule>,
    /// rules watching each atom in their positive body
    watch: Vec<Vec<usize>>,
    naf_atoms: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(program: &'a GroundProgram) -> Self {
        let mut ids: BTreeMap<Atom, usize> = BTreeMap::new();
        let mut atoms = Vec::new();
        let mut id = |a: &Atom, atoms: &mut Vec<Atom>| -> usize {
            if a.is_bot() {
                return BOT_ID;
            }
            *ids.entry(a.clone()).or_insert_with(|| {
                atoms.push(a.clone());
                atoms.len() - 1
            })
        };
        let mut rules = Vec::new();
        for r in program.rules() {
            let head = id(&r.head, &mut atoms);
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for l in &r.body {
                let i = id(&l.atom, &mut atoms);
                if l.is_pos() {
                    pos.push(i);
                } else {
                    neg.push(i);
                }
            }
            pos.sort_unstable();
            pos.dedup();
            rules.push(IdRule { head, pos, neg });
        }
        let mut watch = vec![Vec::new(); atoms.len()];
        for (i, r) in rules.iter().enumerate() {
            for &a in &r.pos {
                watch[a].push(i);
            }
        }
        let naf_atoms: BTreeSet<usize> = rules.iter().flat_map(|r| r.neg.iter().copied()).collect();
        Solver {
            program,
            atoms,
            rules,
            watch,
            naf_atoms: naf_atoms.into_iter().collect(),
        }
    }

    /// Least model of the rules passing `active`; second value is whether
    /// ⊥ was derived.
    fn closure(&self, active: impl Fn(&IdRule) -> bool) -> (Vec<bool>, bool) {
        let mut in_model = vec![false; self.atoms.len()];
        let mut missing: Vec<usize> = self.rules.iter().map(|r| r.pos.len()).collect();
        let mut enabled = vec![false; self.rules.len()];
        let mut queue = Vec::new();
        let mut bot = false;
        for (i, r) in self.rules.iter().enumerate() {
            enabled[i] = active(r);
            if enabled[i] && missing[i] == 0 {
                fire(r.head, &mut in_model, &mut queue, &mut bot);
            }
        }
        while let Some(a) = queue.pop() {
            for &i in &self.watch[a] {
                missing[i] -= 1;
                if missing[i] == 0 && enabled[i] {
                    fire(self.rules[i].head, &mut in_model, &mut queue, &mut bot);
                }
            }
        }
        (in_model, bot)
    }

    /// Returns false when the caller asked to stop.
    fn enumerate(&self, emit: &mut dyn FnMut(Model) -> bool) -> bool {
        let values = vec![Value::Unknown; self.atoms.len()];
        self.search(values, emit)
    }

    fn search(&self, mut values: Vec<Value>, emit: &mut dyn FnMut(Model) -> bool) -> bool {
        loop {
            let (lower, bot) = self.closure(|r| r.neg.iter().all(|&a| values[a] == Value::Out));
            if bot {
                return true;
            }
            let (upper, _) = self.closure(|r| r.neg.iter().all(|&a| values[a] != Value::In));
            let mut changed = false;
            for &a in &self.naf_atoms {
                match values[a] {
                    Value::Unknown if lower[a] => {
                        values[a] = Value::In;
                        changed = true;
                    }
                    Value::Unknown if !upper[a] => {
                        values[a] = Value::Out;
                        changed = true;
                    }
                    Value::Out if lower[a] => return true,
                    Value::In if !upper[a] => return true,
                    _ => {}
                }
            }
            if changed {
                continue;
            }
            match self
                .naf_atoms
                .iter()
                .find(|&&a| values[a] == Value::Unknown)
            {
                Some(&a) => {
                    let mut with_in = values.clone();
                    with_in[a] = Value::In;
                    if !self.search(with_in, emit) {
                        return false;
                    }
                    values[a] = Value::Out;
                }
                None => {
                    let model: BTreeSet<Atom> = lower
                        .iter()
                        .enumerate()
                        .filter(|(_, &b)| b)
                        .map(|(i, _)| self.atoms[i].clone())
                        .collect();
                    debug_assert!(is_stable(self.program, &model));
                    return emit(Model { atoms: model });
                }
            }
        }
    }
}

fn fire(head: usize, in_model: &mut [bool], queue: &mut Vec<usize>, bot: &mut bool) {
    if head == BOT_ID {
        *bot = true;
    } else if !in_model[head] {
        in_model[head] = true;
        queue.push(head);
    }
}

/// Every ground abducible of `af` over `hu`, sorted.
pub fn ground_abducibles(af: &AbductiveFramework, hu: &HerbrandUniverse) -> Vec<Atom> {
    let arities = af.program.arities().unwrap_or_default();
    let mut out = BTreeSet::new();
    for pred in &af.abducibles {
        let Some(&k) = arities.get(pred) else {
            continue;
        };
        let vars: Vec<Symbol> = (0..k)
            .map(|i| crate::model::sym(&format!("V{i}")))
            .collect();
        for s in assignments(&vars, hu) {
            out.insert(Atom {
                pred: pred.clone(),
                args: vars.iter().map(|v| s.term(&Term::Var(v.clone()))).collect(),
            });
        }
    }
    out.into_iter().collect()
}

/// Subsets of `items` by ascending size, each size in lexicographic order
/// of index combinations.
pub(crate) fn subsets_by_size<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0..=items.len()).flat_map(move |k| {
        combinations(items.len(), k).map(move |idx| idx.iter().map(|&i| items[i].clone()).collect())
    })
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Every generalized stable model: for each Θ over the ground abducibles
/// (ascending |Θ|), the stable models of `P ∪ Θ`. Exponential in the number
/// of ground abducibles; meant for small frameworks.
pub fn generalized_stable_models(af: &AbductiveFramework) -> Vec<GeneralizedStableModel> {
    let hu = HerbrandUniverse::of_program(&af.program);
    generalized_stable_models_over(af, &hu)
}

pub fn generalized_stable_models_over(
    af: &AbductiveFramework,
    hu: &HerbrandUniverse,
) -> Vec<GeneralizedStableModel> {
    let base = ground(&af.program, hu);
    let abducibles = ground_abducibles(af, hu);
    let mut out = Vec::new();
    for subset in subsets_by_size(&abducibles) {
        let theta: Theta = subset.into_iter().collect();
        let program: GroundProgram = base.rules().cloned().chain(theta.as_facts()).collect();
        for model in stable_models_ground(&program, Strategy::Search) {
            out.push(GeneralizedStableModel {
                theta: theta.clone(),
                model,
            });
        }
    }
    out
}
