//! The completion of the walking isomorphism: the externalized fragment,
//! essential-surjectivity witnesses and the bounded checks that the
//! inclusion is a weak equivalence and that the completion is complete.

use rezk::completion::complete;
use rezk::terms::library;

fn main() -> rezk::Result<()> {
    let c = complete(library::walking_iso());
    let f = c.externalize(3)?;
    println!("depth 3: {} objects, {} homs, {} composites outside the fragment", f.objects.len(), f.homs.len(), f.overflow());
    for o in &f.objects {
        let (base, iso) = c.ess_surj_witness(o)?;
        println!("  {o}  ~  {base}  via {}", iso.fwd);
    }

    let weq = c.verify_weq_dim0(3);
    println!("\nweak equivalence at dimension 0:\n{}", weq.to_text());

    let complete = c.verify_completeness(50, 1);
    println!(
        "completeness: {} pass, {} fail, {} unknown",
        complete.counts.pass, complete.counts.fail, complete.counts.unknown
    );
    Ok(())
}
