// The proof procedure's building blocks called directly.

use lprevise::grounder::HerbrandUniverse;
use lprevise::{del, parse_program, parse_rule, resolve, Delta, EngineConfig, Revisor};

fn main() {
    let p = parse_program("r(X) :- c(X), not b(X). b(X) :- c(X), not r(X).").unwrap();
    let not_r = parse_rule("x :- not r(c1).").unwrap().body[0].clone();
    let b = parse_rule("x :- b(c1).").unwrap().body[0].clone();
    for r in resolve(&not_r, &p) {
        println!("resolvent of {not_r}: {r}");
    }
    for r in del(&b, &p) {
        println!("deleted by {b}: {r}");
    }

    let tau = parse_program(include_str!("../fixtures/tau1.lp")).unwrap();
    let af = lprevise::AbductiveFramework {
        abducibles: ["phi1-*", "phi2+*"]
            .into_iter()
            .map(lprevise::model::sym)
            .collect(),
        program: tau.clone(),
    };
    let revisor = Revisor::new(
        &af,
        HerbrandUniverse::of_program(&tau),
        EngineConfig::default(),
    );
    let goal = parse_rule(":- r(c1).").unwrap();
    for d in revisor.rule_con_all(&goal, &Delta::new()).unwrap() {
        println!("rule_con succeeds with Δ = {d}");
    }
}
