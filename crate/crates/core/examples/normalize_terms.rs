//! Normal forms in the free algebra over the walking isomorphism: rule
//! rewriting, inverses, glue collapse and restriction along substitutions.

use std::sync::Arc;

use rezk::syntax::{parse_subst, parse_term};
use rezk::terms::{library, Config, Strategy};
use rezk::{DimCtx, Normalizer, Term};

fn main() -> rezk::Result<()> {
    let p = Arc::new(library::walking_iso());
    let n = Normalizer::new(p.clone());
    for src in [
        "comp(g, f)",
        "f.g.f",
        "comp(inv(gluefwd(x, [(i=0) |-> (y, f, g)])), gluefwd(x, [(i=0) |-> (y, f, g)]))",
        "comp(gluefwd(x, [(i=0) |-> (y, f, g)]), g)",
        "glue(x, [T |-> (y, f, g)])",
        "glue(x, [(i=0) \\/ (i=1) |-> (y, f, g)])",
    ] {
        let t = parse_term(src, &n)?;
        println!("{src:<48} ~> {}  : {:?}", n.normalize(&t)?, n.sort_of(&t)?);
    }

    // inverses are only formed for glue isos, not for generators
    match parse_term("inv(f)", &n).and_then(|t| n.normalize(&t)) {
        Ok(t) => println!("\ninv(f) ~> {t}"),
        Err(e) => println!("\ninv(f) rejected: {e}"),
    }

    // restricting along i := 0 makes the face true and the glue collapses
    let t = parse_term("glue(x, [(i=0) |-> (y, f, g)])", &n)?;
    let at0 = parse_subst("{i:=0}", &DimCtx::empty(), &DimCtx::new(["i"])?)?;
    println!("\n{t}[i:=0] ~> {}", n.restrict_nf(&t, &at0)?);

    // the normal form does not depend on which redex is rewritten first
    let t = Term::comps(vec![Term::gen("f"), Term::gen("g"), Term::gen("f"), Term::gen("g")]).expect("nonempty");
    for strategy in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Seeded(7)] {
        let cfg = Config {
            strategy,
            ..Config::default()
        };
        println!("{strategy:?}: {}", Normalizer::with_config(p.clone(), cfg).normalize(&t)?);
    }
    Ok(())
}
