//! Translation of a revision framework into an abductive framework, and
//! reconstruction of revised programs from sets of abducibles.
//!
//! A temporal rule `φ: H :- B.` becomes `H :- B, not φ-*(x).` and a backup
//! rule `φ: H :- P, N.` becomes `H :- P, φ+*(x), N.`, where `x` is the
//! rule's variable tuple in first-occurrence order. Assuming `φ-*(c)`
//! deletes the instance at `x = c`; assuming `φ+*(c)` adds it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grounder::{ground, herbrand_constants, HerbrandUniverse};
use crate::model::{
    sym, Abducibles, Atom, Disequality, Literal, Program, RevisionFramework, Rule, RulePart,
    Substitution, Symbol, Term, Theta,
};
use crate::parser::render_rule;
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbductiveFramework {
    pub program: Program,
    pub abducibles: Abducibles,
}

impl fmt::Display for AbductiveFramework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.abducibles.iter().map(|s| &**s).collect();
        writeln!(f, "% abducibles: {}", names.join(", "))?;
        write!(f, "{}", self.program)
    }
}

/// Deletion abducible predicate for a temporal rule name.
pub fn deletion_predicate(rule_name: &str) -> Symbol {
    sym(&format!("{rule_name}-*"))
}

/// Addition abducible predicate for a backup rule name.
pub fn addition_predicate(rule_name: &str) -> Symbol {
    sym(&format!("{rule_name}+*"))
}

fn var_tuple(r: &Rule) -> Vec<Term> {
    r.vars().into_iter().map(Term::Var).collect()
}

fn rule_name(r: &Rule) -> Result<&Symbol> {
    r.name
        .as_ref()
        .ok_or_else(|| Error::UnnamedRule(render_rule(r)))
}

/// τ: `T_pst ∪ {r_new}` verbatim, then temporal rules guarded by
/// `not φ-*(x)`, then backup rules enabled by `φ+*(x)` placed after the
/// positive literals.
pub fn translate(fw: &RevisionFramework, r_new: &Rule) -> Result<AbductiveFramework> {
    let mut abducibles = Abducibles::new();
    for r in fw.t_tmp.iter() {
        abducibles.insert(deletion_predicate(rule_name(r)?));
    }
    for r in fw.t_bck.iter() {
        abducibles.insert(addition_predicate(rule_name(r)?));
    }
    for r in fw.all_rules().chain(std::iter::once(r_new)) {
        for a in r.atoms() {
            if abducibles.contains(&a.pred) {
                return Err(Error::NameCollision(a.pred.to_string()));
            }
        }
    }

    let mut program = Program::default();
    for r in fw.t_pst.iter() {
        program.push(r.clone().unnamed());
    }
    program.push(r_new.clone().unnamed());
    for r in fw.t_tmp.iter() {
        let name = rule_name(r)?;
        let mut t = r.clone().unnamed();
        t.body.push(Literal::naf(Atom {
            pred: deletion_predicate(name),
            args: var_tuple(r),
        }));
        program.push(t);
    }
    for r in fw.t_bck.iter() {
        let name = rule_name(r)?;
        let mut t = r.clone().unnamed();
        let split = t.body.iter().take_while(|l| l.is_pos()).count();
        t.body.insert(
            split,
            Literal::pos(Atom {
                pred: addition_predicate(name),
                args: var_tuple(r),
            }),
        );
        program.push(t);
    }
    Ok(AbductiveFramework {
        program,
        abducibles,
    })
}

/// Deletions and additions realizing one set of abducibles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Revision {
    pub theta: Theta,
    /// Ground temporal instances removed (O).
    pub deletions: Vec<Rule>,
    /// Ground backup instances added (I).
    pub backup_instances: Vec<Rule>,
    /// Temporal rules with deletions, rewritten with disequality guards
    /// that exclude exactly the deleted instances.
    pub guarded: Vec<Rule>,
}

impl Revision {
    /// T_new: added backup instances followed by the guarded rules.
    pub fn additions(&self) -> Vec<Rule> {
        self.backup_instances
            .iter()
            .chain(self.guarded.iter())
            .cloned()
            .collect()
    }

    /// The (O, I) pair as ordered sets.
    pub fn pair(&self) -> (BTreeSet<Rule>, BTreeSet<Rule>) {
        (
            self.deletions.iter().cloned().collect(),
            self.backup_instances.iter().cloned().collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

fn owner<'a>(fw: &'a RevisionFramework, pred: &str) -> Option<(RulePart, &'a Rule)> {
    if let Some(name) = pred.strip_suffix("-*") {
        match fw.find_rule(name) {
            Some((RulePart::Temporal, r)) => return Some((RulePart::Temporal, r)),
            _ => return None,
        }
    }
    if let Some(name) = pred.strip_suffix("+*") {
        if let Some((RulePart::Backup, r)) = fw.find_rule(name) {
            return Some((RulePart::Backup, r));
        }
    }
    None
}

fn binding(r: &Rule, abducible: &Atom) -> Result<Substitution> {
    let vars = r.vars();
    if vars.len() != abducible.args.len() || !abducible.is_ground() {
        return Err(Error::UnknownAbducible(abducible.to_string()));
    }
    let mut s = Substitution::empty();
    for (v, t) in vars.into_iter().zip(&abducible.args) {
        s.bind(v, t.clone());
    }
    Ok(s)
}

/// Reads a set of abducibles back as a revision: `φ-*(c)` deletes the
/// temporal instance at `c`, `φ+*(c)` adds the backup instance at `c`, and
/// every temporal rule with deletions is re-added with a guard excluding
/// exactly those instances.
pub fn extract_revision(theta: &Theta, fw: &RevisionFramework) -> Result<Revision> {
    use crate::model::Apply;
    let mut deletions = Vec::new();
    let mut backup_instances = Vec::new();
    let mut excluded: BTreeMap<usize, Vec<Vec<Symbol>>> = BTreeMap::new();
    for a in theta.iter() {
        let (part, r) = owner(fw, &a.pred).ok_or_else(|| Error::UnknownAbducible(a.to_string()))?;
        let s = binding(r, a)?;
        let instance = r.apply(&s).unnamed();
        match part {
            RulePart::Temporal => {
                deletions.push(instance);
                let idx = fw
                    .t_tmp
                    .iter()
                    .position(|x| x == r)
                    .expect("rule owned by T_tmp");
                let consts = a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => c.clone(),
                        Term::Var(_) => unreachable!("checked ground"),
                    })
                    .collect();
                excluded.entry(idx).or_default().push(consts);
            }
            RulePart::Backup => backup_instances.push(instance),
        }
    }
    let guarded = excluded
        .into_iter()
        .map(|(idx, tuples)| {
            let r = &fw.t_tmp.rules[idx];
            let x = var_tuple(r);
            let mut g = r.clone().unnamed();
            g.guards.extend(tuples.into_iter().map(|rhs| Disequality {
                lhs: x.clone(),
                rhs,
            }));
            g
        })
        .collect();
    Ok(Revision {
        theta: theta.clone(),
        deletions,
        backup_instances,
        guarded,
    })
}

/// `(T_pst ∪ {r_new}) ∪ (Π_{T_tmp} − O) ∪ I`, with the temporal part kept
/// non-ground: untouched rules verbatim, rules with deletions replaced by
/// their guarded form.
pub fn apply_revision(rev: &Revision, fw: &RevisionFramework, r_new: &Rule) -> Program {
    let mut out = Program::default();
    for r in fw.t_pst.iter() {
        out.push(r.clone().unnamed());
    }
    out.push(r_new.clone().unnamed());
    for r in fw.t_tmp.iter() {
        let bare = r.clone().unnamed();
        match rev
            .guarded
            .iter()
            .find(|g| g.head == bare.head && g.body == bare.body)
        {
            Some(g) => out.push(g.clone()),
            None => out.push(bare),
        }
    }
    for r in &rev.backup_instances {
        out.push(r.clone());
    }
    out
}

/// `(T_pst ∪ {r_new}) ∪ (Π_{T_tmp} − O) ∪ I` built directly from a pair,
/// fully ground over `hu`.
pub fn revised_program_from_pair(
    fw: &RevisionFramework,
    r_new: &Rule,
    deletions: &BTreeSet<Rule>,
    additions: &BTreeSet<Rule>,
    hu: &HerbrandUniverse,
) -> Program {
    let mut out = Program::default();
    for r in fw.t_pst.iter() {
        out.push(r.clone().unnamed());
    }
    out.push(r_new.clone().unnamed());
    for r in ground(&fw.t_tmp, hu).rules() {
        if !deletions.contains(r) {
            out.push(r.clone());
        }
    }
    out.rules.extend(additions.iter().cloned());
    out
}

/// The abducible naming an instance `rθ` of a named temporal or backup
/// rule; the inverse of [`extract_revision`] for one element.
pub fn abducible_for_instance(r: &Rule, part: RulePart, instance: &Rule) -> Option<Atom> {
    let name = r.name.as_ref()?;
    let s = Substitution::empty().match_atom(
        &Atom {
            pred: sym("_"),
            args: r.atoms().flat_map(|a| a.args.clone()).collect(),
        },
        &Atom {
            pred: sym("_"),
            args: instance.atoms().flat_map(|a| a.args.clone()).collect(),
        },
    )?;
    let pred = match part {
        RulePart::Temporal => deletion_predicate(name),
        RulePart::Backup => addition_predicate(name),
    };
    Some(Atom {
        pred,
        args: var_tuple(r).iter().map(|t| s.term(t)).collect(),
    })
}

/// JSON form of a revision; rules are rendered in the rule syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionJson {
    pub theta: Vec<String>,
    pub deletions: Vec<String>,
    pub additions: Vec<String>,
    pub revised_program: Vec<String>,
}

impl RevisionJson {
    pub fn new(rev: &Revision, fw: &RevisionFramework, r_new: &Rule) -> Self {
        RevisionJson {
            theta: rev.theta.iter().map(ToString::to_string).collect(),
            deletions: rev.deletions.iter().map(render_rule).collect(),
            additions: rev.additions().iter().map(render_rule).collect(),
            revised_program: apply_revision(rev, fw, r_new)
                .iter()
                .map(render_rule)
                .collect(),
        }
    }

    /// Parses the rendered rules back into a revision.
    pub fn to_revision(&self) -> Result<Revision> {
        let theta = self
            .theta
            .iter()
            .map(|a| crate::parser::parse_rule(&format!("{a}.")).map(|r| r.head))
            .collect::<Result<Theta>>()?;
        let parse_all = |xs: &[String]| -> Result<Vec<Rule>> {
            xs.iter().map(|s| crate::parser::parse_rule(s)).collect()
        };
        let additions = parse_all(&self.additions)?;
        let (guarded, backup_instances) = additions.into_iter().partition(|r| !r.guards.is_empty());
        Ok(Revision {
            theta,
            deletions: parse_all(&self.deletions)?,
            backup_instances,
            guarded,
        })
    }
}

/// Herbrand universe used for every grounding of a framework: all constants
/// of the four parts.
pub fn framework_universe(fw: &RevisionFramework, r_new: &Rule) -> Result<HerbrandUniverse> {
    herbrand_constants(fw, r_new)
}
