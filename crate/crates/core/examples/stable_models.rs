// Stable models of the current program, of the program with the new rule,
// and generalized stable models of the translated program.

use lprevise::{generalized_stable_models, parse_framework, parse_program, stable_models, Program};

fn main() {
    let (fw, r_new) = parse_framework(include_str!("../fixtures/fw1.lp")).unwrap();
    let current: Program = fw.t_pst.extended(fw.t_tmp.iter().cloned());
    for m in stable_models(&current) {
        println!("current: {m}");
    }
    let with_new = current.extended(r_new);
    println!(
        "with new rule: {} stable models",
        stable_models(&with_new).len()
    );

    let tau = parse_program(include_str!("../fixtures/tau1.lp")).unwrap();
    let af = lprevise::AbductiveFramework {
        abducibles: ["phi1-*", "phi2+*"]
            .into_iter()
            .map(lprevise::model::sym)
            .collect(),
        program: tau,
    };
    for g in generalized_stable_models(&af).iter().take(6) {
        println!("Θ = {}  M = {}", g.theta, g.model);
    }
}
