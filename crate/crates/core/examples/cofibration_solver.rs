//! Parse cofibrations, put them in normal form and decide entailment,
//! comparing the solver with brute-force evaluation.

use rezk::cofib::{forall_elim, oracle_entails};
use rezk::syntax::parse_cof;
use rezk::{dnf, entails, DimCtx};

fn main() -> rezk::Result<()> {
    let ctx = DimCtx::new(["i", "j"])?;
    let pairs = [
        ("(i=0) /\\ (j=0)", "(i=j)"),
        ("(i=j)", "(i=0) \\/ (i=1)"),
        ("(i=0) \\/ (i=1)", "forall j. (i=0) \\/ (i=1) \\/ (j=j)"),
        ("(i=j) /\\ (j=1)", "(i=1)"),
    ];
    for (a, b) in pairs {
        let (ca, cb) = (parse_cof(a)?, parse_cof(b)?);
        println!(
            "{a}  |-  {b}   solver: {}  oracle: {}",
            entails(&ca, &cb),
            oracle_entails(&ctx, &ca, &cb)
        );
    }

    let c = parse_cof("((i=0) \\/ (j=1)) /\\ ((i=0) \\/ (i=1)) \\/ ((i=0) /\\ (j=0))")?;
    println!("\ndnf of {c}\n   = {}", dnf(&c));

    let body = parse_cof("(i=j) \\/ (j=0) \\/ (j=1)")?;
    println!("forall i. {body}\n   = {}", forall_elim("i", &body));
    Ok(())
}
