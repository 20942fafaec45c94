//! Object counts of the completed discrete category against the
//! stage-by-stage tower, and the shape of both as marked graphs.

use rezk::completion::complete;
use rezk::terms::library;
use rezk::tower::Tower;

fn main() -> rezk::Result<()> {
    let c = complete(library::discrete2());
    for depth in 0..4 {
        let f = c.externalize(depth)?;
        let t = Tower::build(&["x", "y"], &[], depth);
        println!(
            "depth {depth}: fragment {} objects, tower {} objects, isomorphic: {}",
            f.objects.len(),
            t.count(),
            t.matches(&f)
        );
    }
    let f = c.externalize(2)?;
    for a in &f.arrows {
        println!("  {} : {} -> {}", a.term, f.objects[a.src], f.objects[a.dst]);
    }
    Ok(())
}
