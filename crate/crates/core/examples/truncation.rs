//! The set completion of {a, b} is a proposition: any two elements are
//! joined by a path, and open boxes have certified fillers.

use std::path::Path;

use rezk::completion::complete;
use rezk::cube::VarMap;
use rezk::kan::{center_and_path, fibrancy_from_prg, wcom_from_ext, SetInstance, TruncationSpace};
use rezk::syntax::load_problem;
use rezk::terms::library;
use rezk::{DimCtx, IntervalExpr, Normalizer, Term};

fn main() -> rezk::Result<()> {
    let c = complete(library::truncation(&["a", "b"]));
    let n = c.normalizer();
    let space = TruncationSpace { basepoint: Term::gen("a") };
    let cp = center_and_path(&space, n, &DimCtx::empty(), &Term::gen("a"), &Term::gen("b"))?;
    println!("center: {}", cp.center);
    println!("path in {}: {}", cp.path_dim, cp.path);
    for e in [IntervalExpr::Zero, IntervalExpr::One] {
        let m = VarMap::from([(cp.path_dim.clone(), e.clone())]);
        println!("  at {e}: {}", n.nf_map(&cp.path, &m)?);
    }

    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/truncation_face.problem");
    let (pres, p) = load_problem(&file)?;
    let n = Normalizer::new(pres);
    let direct = wcom_from_ext(&n, &p)?;
    let generic = fibrancy_from_prg(&SetInstance, &n, &p)?;
    println!("\nfiller: {}", direct.filler);
    println!("same as the generic construction: {}", direct.filler == generic.filler && direct.path == generic.path);
    println!("certificate: {} entries, passed: {}", direct.cert.entries.len(), direct.cert.passed());
    for note in &direct.cert.notes {
        println!("  note: {note}");
    }
    Ok(())
}
