// Indexed call traces of every successful branch.

use lprevise::{parse_framework, revise, EngineConfig};

fn main() {
    let (fw, r_new) = parse_framework(include_str!("../fixtures/fw1.lp")).unwrap();
    let out = revise(&fw, &r_new.unwrap(), &EngineConfig::traced()).unwrap();
    for (i, s) in out.successes.iter().enumerate() {
        println!("branch {} (Θ = {})", i + 1, s.theta);
        for entry in &s.trace {
            println!("  {entry}");
        }
    }
}
