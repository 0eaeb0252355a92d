// Minimal revisions of the car example and of a small reachability program.

use lprevise::{parse_framework, revise, EngineConfig};

fn show(title: &str, text: &str) {
    let (fw, r_new) = parse_framework(text).expect("fixture parses");
    let r_new = r_new.expect("fixture has a #new rule");
    let out = revise(&fw, &r_new, &EngineConfig::default()).expect("revisable");
    println!("== {title}: adding `{r_new}`");
    println!(
        "{} successful branches, {} calls",
        out.successes.len(),
        out.steps
    );
    for rev in &out.revisions {
        println!("Θ = {}", rev.theta);
        for r in &rev.deletions {
            println!("  delete {r}");
        }
        for r in rev.additions() {
            println!("  add    {r}");
        }
    }
}

fn main() {
    show("cars", include_str!("../fixtures/fw1.lp"));
    show("reachability", include_str!("../fixtures/cyclic.lp"));
}
