//! Split weak equivalences and trivial fibrations between finitely presented
//! categories, checked up to a depth.

use std::path::Path;
use std::sync::Arc;

use rezk::cat::{check_split_classes, refl_loop_projection, Functor};
use rezk::syntax::load_functor;
use rezk::terms::library;

fn main() -> rezk::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");

    let id = Functor::identity(Arc::new(library::walking_iso()))?;
    println!("identity on the walking iso:\n{}", check_split_classes(&id, 3).to_text());

    let f = load_functor(&data.join("arrow_into_iso.functor"))?;
    println!("walking arrow into the walking iso:\n{}", check_split_classes(&f, 3).to_text());

    // the projection from reflexive loops is a split trivial fibration
    let pi = refl_loop_projection(Arc::new(library::walking_iso()), 3)?;
    println!("reflexive-loop projection:\n{}", check_split_classes(&pi, 3).to_text());
    Ok(())
}
