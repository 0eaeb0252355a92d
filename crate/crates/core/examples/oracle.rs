// Cross-checking the engine against brute-force enumeration on random
// frameworks.

use lprevise::oracle::{cross_check, random_framework, GenParams, DEFAULT_ORACLE_BOUND};
use lprevise::EngineConfig;

fn main() {
    let params = GenParams::default();
    let mut agree = 0;
    let n = 20;
    for seed in 0..n {
        let (fw, r_new) = random_framework(seed, &params);
        let report = cross_check(&fw, &r_new, &EngineConfig::default(), DEFAULT_ORACLE_BOUND)
            .expect("within bounds");
        if report.agreement {
            agree += 1;
        } else {
            println!("seed {seed}: {:?}", report.divergences);
        }
        if seed == 0 {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
    println!("{agree}/{n} frameworks agree");
}
