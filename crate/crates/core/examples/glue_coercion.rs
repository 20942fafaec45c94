//! Weak coercion along a line of glue objects: its components, coherence at
//! r = s and agreement with the pieces' coercions.

use std::sync::Arc;

use rezk::cat::derive_wcoe_ob;
use rezk::syntax::parse_term;
use rezk::terms::library;
use rezk::{name, DimCtx, IntervalExpr, Normalizer};

fn main() -> rezk::Result<()> {
    let n = Normalizer::new(Arc::new(library::walking_iso()));
    let z = name("z");
    // over context [i] with line dimension z: x glued to y along z=1, then
    // glued back to x along i=0
    let inner = "gluefwd(x, [(z=1) |-> (y, f, g)])";
    let src = format!("glue(glue(x, [(z=1) |-> (y, f, g)]), [(i=0) |-> (x, inv({inner}), {inner})])");
    let line = n.normalize(&parse_term(&src, &n)?)?;
    println!("line: {line}");
    let w = derive_wcoe_ob(&n, &line, &z)?;
    let levels = [IntervalExpr::Zero, IntervalExpr::One, IntervalExpr::var("r")];
    for r in &levels {
        for s in &levels {
            let iso = w.at(&n, r, s)?;
            println!("wcoe {r} -> {s}: {}", iso.fwd);
        }
    }
    let cert = w.certify(&n, &DimCtx::new(["i"])?)?;
    println!("\ncertificate: {} entries, passed: {}", cert.entries.len(), cert.passed());
    for note in &cert.notes {
        println!("  note: {note}");
    }
    Ok(())
}
