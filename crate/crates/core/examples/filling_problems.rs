//! Weak composition from pseudo-reflexive graph data, for objects and homs
//! of a category completion and for elements of a set completion.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rezk::completion::{complete, solve, Completion};
use rezk::sample::{random_hom_problem, random_ob_problem, TermSampler};
use rezk::syntax::load_problem;
use rezk::terms::library;
use rezk::DimCtx;

fn main() -> rezk::Result<()> {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/glue_line.problem");
    let (pres, p) = load_problem(&file)?;
    let c = Completion::new(pres);
    let f = solve(&c, &p)?;
    println!("object filler: {}", f.filler);
    println!("  path in {}: {}", f.path_dim, f.path);
    println!("  certificate: {} entries, passed: {}", f.cert.entries.len(), f.cert.passed());

    let c = complete(library::walking_iso());
    let n = c.normalizer();
    let s = TermSampler::new(n, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ctx = DimCtx::new(["i"])?;
    for _ in 0..3 {
        let p = random_ob_problem(&mut rng, &s, &ctx)?;
        let f = solve(&c, &p)?;
        println!("\nobjects over {}: tube {} on {}", ctx, p.tube.payloads().len(), p.cof);
        println!("  filler {}  ({} entries, passed: {})", f.filler, f.cert.entries.len(), f.cert.passed());
        let (p, _, _) = random_hom_problem(&mut rng, &s, &ctx)?;
        let f = solve(&c, &p)?;
        println!("homs: base {}", p.base);
        println!("  filler {}  ({} entries, passed: {})", f.filler, f.cert.entries.len(), f.cert.passed());
    }
    Ok(())
}
