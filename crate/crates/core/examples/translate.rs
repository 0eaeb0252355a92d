// Translating a revision framework into an abductive program and reading
// sets of abducibles back as revisions.

use lprevise::{apply_revision, extract_revision, parse_framework, parse_rule, translate, Theta};

fn main() {
    let (fw, r_new) = parse_framework(include_str!("../fixtures/fw1.lp")).unwrap();
    let r_new = r_new.unwrap();
    let af = translate(&fw, &r_new).unwrap();
    println!("{af}");

    for abducible in ["phi1-*(c1)", "phi2+*(c1)"] {
        let theta: Theta = [parse_rule(&format!("{abducible}.")).unwrap().head]
            .into_iter()
            .collect();
        let rev = extract_revision(&theta, &fw).unwrap();
        println!("Θ = {theta}:");
        print!("{}", apply_revision(&rev, &fw, &r_new));
    }
}
