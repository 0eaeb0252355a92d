// Herbrand universe, grounding, range restriction and the relevant
// instances Ω.

use lprevise::grounder::{make_range_restricted, relevant_ground_program, stripped_least_model};
use lprevise::{ground, parse_program, parse_rule, HerbrandUniverse};

fn main() {
    let tau = parse_program(include_str!("../fixtures/tau1.lp")).unwrap();
    let hu = HerbrandUniverse::of_program(&tau);
    println!("constants: {:?}", hu.constants());
    let abducibles = ["phi1-*", "phi2+*"]
        .into_iter()
        .map(lprevise::model::sym)
        .collect();
    for a in stripped_least_model(&tau, &abducibles, &hu) {
        println!("min(P⁻) ∋ {a}");
    }
    println!(
        "{} ground rules, {} relevant",
        ground(&tau, &hu).len(),
        relevant_ground_program(&tau, &abducibles, &hu).len()
    );

    let unsafe_rule = parse_rule("p(X) :- not q(X).").unwrap();
    let (safe, dom) = make_range_restricted(&unsafe_rule, &hu);
    println!(
        "{unsafe_rule}  becomes  {safe}  with {} dom facts",
        dom.len()
    );
}
