//! Brute-force reference for revisions, used to cross-check the engine.
//!
//! Every pair (O, I) with O ⊆ Π_{T_tmp} and I ⊆ Π_{T_bck} is tried by
//! computing stable models of `(T_pst ∪ {r_new}) ∪ (Π_{T_tmp} − O) ∪ I`.
//! Exponential in the number of ground temporal and backup instances, so a
//! bound guards against accidental blow-ups.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{revise, EngineConfig, EngineOutcome};
use crate::grounder::{ground, herbrand_constants, GroundProgram, HerbrandUniverse};
use crate::model::{sym, Atom, Literal, Program, RevisionFramework, Rule, RulePart, Term, Theta};
use crate::parser::render_rule;
use crate::stable::{
    generalized_stable_models_over, ground_abducibles, is_consistent_ground, is_consistent_over,
};
use crate::translator::{
    abducible_for_instance, apply_revision, extract_revision, translate, AbductiveFramework,
};
use crate::{Error, Result};

pub const DEFAULT_ORACLE_BOUND: usize = 16;

/// One consistent pair (O, I) together with the abducibles naming it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RevisionPair {
    pub deletions: BTreeSet<Rule>,
    pub additions: BTreeSet<Rule>,
    pub theta: Theta,
}

#[derive(Clone, Debug, Default)]
pub struct BruteForce {
    /// Every pair whose revised program is consistent.
    pub all: Vec<RevisionPair>,
    /// Those minimal under componentwise ⊆.
    pub minimal: Vec<RevisionPair>,
    /// Number of ground temporal plus backup instances enumerated over.
    pub instances: usize,
}

struct Instance {
    rule: Rule,
    abducible: Atom,
    temporal: bool,
}

fn instances(fw: &RevisionFramework, hu: &HerbrandUniverse) -> Vec<Instance> {
    let mut out = Vec::new();
    for (part, prog, temporal) in [
        (RulePart::Temporal, &fw.t_tmp, true),
        (RulePart::Backup, &fw.t_bck, false),
    ] {
        for r in prog.iter() {
            for g in ground(&Program::new([r.clone()]), hu).rules() {
                let abducible = abducible_for_instance(r, part, g).expect("named instance");
                out.push(Instance {
                    rule: g.clone(),
                    abducible,
                    temporal,
                });
            }
        }
    }
    out
}

/// Enumerates every revision of `fw` by `r_new` (rules must be named, as
/// after [`crate::parser::parse_framework`]).
pub fn brute_force_revisions(
    fw: &RevisionFramework,
    r_new: &Rule,
    bound: usize,
) -> Result<BruteForce> {
    let hu = herbrand_constants(fw, r_new)?;
    let inst = instances(fw, &hu);
    if inst.len() > bound {
        return Err(Error::BoundExceeded {
            what: "ground temporal and backup instances",
            count: inst.len(),
            bound,
        });
    }
    let n = inst.len();
    let base: Vec<Rule> = fw
        .t_pst
        .iter()
        .chain(std::iter::once(r_new))
        .map(|r| r.clone().unnamed())
        .collect();
    // instances are switched individually: two identically written rules
    // under different names are still separate instances
    let valid: Vec<u64> = (0..1u64 << n)
        .into_par_iter()
        .filter(|&mask| {
            let chosen = inst
                .iter()
                .enumerate()
                .filter(|(k, x)| (mask >> k & 1 == 1) != x.temporal);
            let p: Program = base
                .iter()
                .cloned()
                .chain(chosen.map(|(_, x)| x.rule.clone()))
                .collect();
            is_consistent_ground(&ground(&p, &hu))
        })
        .collect();
    let pair = |mask: u64| {
        let mut rp = RevisionPair {
            deletions: BTreeSet::new(),
            additions: BTreeSet::new(),
            theta: Theta::new(),
        };
        for (k, x) in inst.iter().enumerate() {
            if mask >> k & 1 == 1 {
                if x.temporal {
                    rp.deletions.insert(x.rule.clone());
                } else {
                    rp.additions.insert(x.rule.clone());
                }
                rp.theta.0.insert(x.abducible.clone());
            }
        }
        rp
    };
    let minimal_masks: Vec<u64> = valid
        .iter()
        .copied()
        .filter(|&m| !valid.iter().any(|&o| o != m && o & m == o))
        .collect();
    let mut all: Vec<RevisionPair> = valid.into_iter().map(pair).collect();
    let mut minimal: Vec<RevisionPair> = minimal_masks.into_iter().map(pair).collect();
    all.sort();
    minimal.sort();
    debug_assert!(minimal
        .iter()
        .all(|m| !all.iter().any(|a| a != m && a.theta.is_subset(&m.theta))));
    Ok(BruteForce {
        all,
        minimal,
        instances: n,
    })
}

/// Θ-minimal generalized stable models of `af`: every Θ over the ground
/// abducibles such that `P ∪ Θ` is consistent, and the ⊆-minimal ones.
pub fn brute_force_theta(
    af: &AbductiveFramework,
    hu: &HerbrandUniverse,
    bound: usize,
) -> Result<(Vec<Theta>, Vec<Theta>)> {
    let count = ground_abducibles(af, hu).len();
    if count > bound {
        return Err(Error::BoundExceeded {
            what: "ground abducibles",
            count,
            bound,
        });
    }
    let mut all: Vec<Theta> = Vec::new();
    for g in generalized_stable_models_over(af, hu) {
        if !all.contains(&g.theta) {
            all.push(g.theta);
        }
    }
    let minimal = all
        .iter()
        .filter(|t| !all.iter().any(|o| o != *t && o.is_subset(t)))
        .cloned()
        .collect();
    Ok((all, minimal))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub theta: Vec<String>,
    pub deletions: Vec<String>,
    pub additions: Vec<String>,
}

impl From<&RevisionPair> for PairJson {
    fn from(p: &RevisionPair) -> Self {
        PairJson {
            theta: p.theta.iter().map(ToString::to_string).collect(),
            deletions: p.deletions.iter().map(render_rule).collect(),
            additions: p.additions.iter().map(render_rule).collect(),
        }
    }
}

/// Engine results against the brute-force enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub all_revisions: Vec<PairJson>,
    pub minimal_revisions: Vec<PairJson>,
    /// Minimal Θ found by the engine.
    pub engine_minimal: Vec<Vec<String>>,
    pub agreement: bool,
    pub divergences: Vec<String>,
}

fn theta_strings(t: &Theta) -> Vec<String> {
    t.iter().map(ToString::to_string).collect()
}

/// Runs the engine and the brute-force oracle and compares the minimal
/// revisions by the abducibles naming them. An unrevisable framework agrees
/// when the oracle finds no consistent pair either.
pub fn cross_check(
    fw: &RevisionFramework,
    r_new: &Rule,
    config: &EngineConfig,
    bound: usize,
) -> Result<OracleReport> {
    let oracle = brute_force_revisions(fw, r_new, bound)?;
    let engine = match revise(fw, r_new, config) {
        Ok(o) => o.minimal_thetas,
        Err(Error::Unrevisable) => Vec::new(),
        Err(e) => return Err(e),
    };
    let expected: BTreeSet<&Theta> = oracle.minimal.iter().map(|p| &p.theta).collect();
    let found: BTreeSet<&Theta> = engine.iter().collect();
    let mut divergences = Vec::new();
    for t in expected.difference(&found) {
        divergences.push(format!("missing {t}"));
    }
    for t in found.difference(&expected) {
        divergences.push(format!("extra {t}"));
    }
    Ok(OracleReport {
        all_revisions: oracle.all.iter().map(PairJson::from).collect(),
        minimal_revisions: oracle.minimal.iter().map(PairJson::from).collect(),
        engine_minimal: engine.iter().map(theta_strings).collect(),
        agreement: divergences.is_empty(),
        divergences,
    })
}

/// Successful Θ (minimal or not) whose revised program has no stable model.
pub fn soundness_violations(outcome: &EngineOutcome) -> Vec<Theta> {
    let mut bad = Vec::new();
    for theta in outcome.success_thetas() {
        let ok = extract_revision(&theta, &outcome.framework)
            .map(|rev| {
                let p = apply_revision(&rev, &outcome.framework, &outcome.new_rule);
                is_consistent_over(&p, &outcome.universe)
            })
            .unwrap_or(false);
        if !ok {
            bad.push(theta);
        }
    }
    bad
}

/// Shape of random frameworks.
#[derive(Clone, Debug)]
pub struct GenParams {
    pub max_constants: usize,
    pub max_predicates: usize,
    pub max_rules: usize,
    pub max_body: usize,
    pub naf_probability: f64,
    /// Reject frameworks with more ground temporal and backup instances.
    pub max_instances: usize,
    /// Reject frameworks for which no revision exists.
    pub require_revisable: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_constants: 3,
            max_predicates: 4,
            max_rules: 6,
            max_body: 3,
            naf_probability: 0.4,
            max_instances: 12,
            require_revisable: true,
        }
    }
}

const PREDICATES: [&str; 4] = ["p", "q", "r", "s"];

struct Vocab {
    constants: Vec<String>,
    preds: Vec<(&'static str, usize)>,
}

impl Vocab {
    fn random(rng: &mut ChaCha8Rng, params: &GenParams) -> Self {
        let nc = rng.gen_range(1..=params.max_constants.max(1));
        let np = rng.gen_range(2..=params.max_predicates.clamp(2, PREDICATES.len()));
        Vocab {
            constants: (1..=nc).map(|i| format!("c{i}")).collect(),
            preds: PREDICATES[..np]
                .iter()
                .map(|&p| (p, rng.gen_range(0..=1)))
                .collect(),
        }
    }

    fn atom(&self, rng: &mut ChaCha8Rng, var_ok: bool) -> Atom {
        let &(pred, arity) = self.preds.choose(rng).expect("predicates");
        let args = (0..arity)
            .map(|_| {
                if var_ok && rng.gen_bool(0.7) {
                    Term::var("X")
                } else {
                    Term::constant(self.constants.choose(rng).expect("constants"))
                }
            })
            .collect();
        Atom::new(pred, args)
    }

    fn rule(&self, rng: &mut ChaCha8Rng, params: &GenParams, constraint: bool) -> Rule {
        let n = rng.gen_range(1..=params.max_body.max(1));
        let body: Vec<Literal> = (0..n)
            .map(|_| {
                let a = self.atom(rng, true);
                if rng.gen_bool(params.naf_probability) {
                    Literal::naf(a)
                } else {
                    Literal::pos(a)
                }
            })
            .collect();
        let head = if constraint {
            Atom::bot()
        } else {
            self.atom(rng, true)
        };
        Rule::new(head, body)
    }

    fn fact(&self, rng: &mut ChaCha8Rng) -> Rule {
        Rule::fact(self.atom(rng, false))
    }
}

/// A random revision problem: `T_pst ∪ T_tmp` is consistent, adding `r_new`
/// makes it inconsistent, and the oracle bound is respected. Deterministic
/// in `seed`.
pub fn random_framework(seed: u64, params: &GenParams) -> (RevisionFramework, Rule) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(found) = try_framework(&mut rng, params) {
            return found;
        }
    }
}

fn try_framework(rng: &mut ChaCha8Rng, params: &GenParams) -> Option<(RevisionFramework, Rule)> {
    let vocab = Vocab::random(rng, params);
    let n_rules = rng.gen_range(2..=params.max_rules.max(2));
    let n_tmp = rng.gen_range(1..n_rules);
    let n_bck = rng.gen_range(0..=n_rules - n_tmp);
    let n_pst = n_rules - n_tmp - n_bck;
    let mut t_pst: Program = (0..rng.gen_range(1..=2)).map(|_| vocab.fact(rng)).collect();
    for _ in 0..n_pst {
        let r = vocab.rule(rng, params, false);
        t_pst.push(r);
    }
    let t_tmp: Program = (0..n_tmp).map(|_| vocab.rule(rng, params, false)).collect();
    let t_bck: Program = (0..n_bck).map(|_| vocab.rule(rng, params, false)).collect();
    let r_new = if rng.gen_bool(0.7) {
        vocab.rule(rng, params, true)
    } else {
        vocab.rule(rng, params, false)
    };
    let fw = RevisionFramework::new(t_pst, t_tmp, t_bck).with_generated_names();
    fw.validate(Some(&r_new)).ok()?;
    let hu = herbrand_constants(&fw, &r_new).ok()?;
    if instances(&fw, &hu).len() > params.max_instances {
        return None;
    }
    let before = fw.t_pst.extended(fw.t_tmp.iter().cloned());
    if !is_consistent_over(&before, &hu) {
        return None;
    }
    let after = before.extended([r_new.clone()]);
    if is_consistent_over(&after, &hu) {
        return None;
    }
    if params.require_revisable && !has_revision(&fw, &r_new, &hu) {
        return None;
    }
    Some((fw, r_new))
}

/// Whether some Θ makes the translated program consistent, decided by one
/// stable-model search with every ground abducible left free to choose.
fn has_revision(fw: &RevisionFramework, r_new: &Rule, hu: &HerbrandUniverse) -> bool {
    let Ok(af) = translate(fw, r_new) else {
        return false;
    };
    let mut program = ground(&af.program, hu).to_program();
    for a in ground_abducibles(&af, hu) {
        let out = Atom {
            pred: sym(&format!("{}~out", a.pred)),
            args: a.args.clone(),
        };
        program.push(Rule::new(a.clone(), vec![Literal::naf(out.clone())]));
        program.push(Rule::new(out, vec![Literal::naf(a)]));
    }
    is_consistent_over(&program, hu)
}

/// A random ground normal program over `atoms` propositional atoms, with
/// some integrity constraints.
pub fn random_ground_program(seed: u64, atoms: usize) -> GroundProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<Atom> = (0..atoms.max(1))
        .map(|i| Atom::new(&format!("a{i}"), Vec::new()))
        .collect();
    let n_rules = rng.gen_range(1..=2 * names.len());
    (0..n_rules)
        .map(|_| {
            let head = if rng.gen_bool(0.1) {
                Atom::bot()
            } else {
                names.choose(&mut rng).expect("atoms").clone()
            };
            let n = rng.gen_range(0..=3);
            let body = (0..n)
                .map(|_| {
                    let a = names.choose(&mut rng).expect("atoms").clone();
                    if rng.gen_bool(0.4) {
                        Literal::naf(a)
                    } else {
                        Literal::pos(a)
                    }
                })
                .collect();
            Rule::new(head, body)
        })
        .collect()
}
