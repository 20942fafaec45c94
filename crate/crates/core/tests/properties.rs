use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rezk::cat::derive_wcoe_ob;
use rezk::cube::VarMap;
use rezk::sample::{random_cof, random_expr, random_subst, TermSampler};
use rezk::terms::{library, Node};
use rezk::{dnf, entails, name, DimCtx, IntervalExpr, Normalizer, Term};

const VARS: [&str; 3] = ["i", "j", "k"];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn iso() -> Normalizer {
    Normalizer::new(Arc::new(library::walking_iso()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dnf_is_idempotent(seed in any::<u64>(), size in 1usize..10) {
        let c = random_cof(&mut rng(seed), &VARS, size);
        let d = dnf(&c);
        prop_assert_eq!(dnf(&d.to_cof()), d);
    }

    #[test]
    fn entailment_is_a_preorder(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_cof(&mut r, &VARS, 4);
        let b = random_cof(&mut r, &VARS, 4);
        let c = random_cof(&mut r, &VARS, 4);
        prop_assert!(entails(&a, &a));
        if entails(&a, &b) && entails(&b, &c) {
            prop_assert!(entails(&a, &c));
        }
        // a /\ b entails both, and both entail a \/ b
        let and = rezk::Cof::and(a.clone(), b.clone());
        let or = rezk::Cof::or(a.clone(), b.clone());
        prop_assert!(entails(&and, &a) && entails(&and, &b));
        prop_assert!(entails(&a, &or) && entails(&b, &or));
    }

    #[test]
    fn dnf_commutes_with_substitution(seed in any::<u64>(), size in 1usize..8) {
        let mut r = rng(seed);
        let c = random_cof(&mut r, &VARS, size).eliminate_foralls();
        let ctx = DimCtx::new(VARS).unwrap();
        let m: VarMap = VARS.iter().map(|v| (name(v), random_expr(&mut r, &ctx))).collect();
        prop_assert_eq!(dnf(&c).restrict(&m), dnf(&c.subst_map(&m)));
    }

    #[test]
    fn normalization_is_idempotent_and_congruent(seed in any::<u64>()) {
        let n = iso();
        let mut r = rng(seed);
        let ctx = DimCtx::new(["i"]).unwrap();
        let s = TermSampler::new(&n, 2);
        let t = s.term(&mut r, &ctx).unwrap();
        let nf = n.normalize(&t).unwrap();
        prop_assert_eq!(n.normalize(&nf).unwrap(), nf.clone());
        prop_assert!(n.eq_terms(&t, &nf).unwrap());
        if let rezk::terms::Sort::Hom(_, dst) = n.sort_of(&t).unwrap() {
            let post = Term::id(dst);
            prop_assert!(n.eq_terms(&Term::comp(post.clone(), t.clone()), &Term::comp(post, nf)).unwrap());
        }
    }

    #[test]
    fn restriction_is_functorial(seed in any::<u64>()) {
        let n = Normalizer::new(Arc::new(library::truncation(&["a", "b"])));
        let mut r = rng(seed);
        let i = DimCtx::new(["i", "j"]).unwrap();
        let j = DimCtx::new(["u"]).unwrap();
        let k = DimCtx::new(["v", "w"]).unwrap();
        let t = TermSampler::new(&n, 3).element(&mut r, &i, 3).unwrap();
        let f = random_subst(&mut r, &j, &i);
        let g = random_subst(&mut r, &k, &j);
        let twice = Term::restrict(Term::restrict(t.clone(), f.clone()), g.clone());
        let once = Term::restrict(t, f.compose(&g).unwrap());
        prop_assert_eq!(n.normalize(&twice).unwrap(), n.normalize(&once).unwrap());
    }

    /// Restricting a derived coercion along a substitution of the ambient
    /// context gives the coercion derived for the restricted line.
    #[test]
    fn coercion_is_natural(seed in any::<u64>()) {
        let n = iso();
        let mut r = rng(seed);
        let z = name("z");
        let ctx = DimCtx::new(["i", "j"]).unwrap();
        let big = ctx.extend(z.clone()).unwrap();
        let line = n.normalize(&TermSampler::new(&n, 2).object(&mut r, &big, 2).unwrap()).unwrap();
        let w = derive_wcoe_ob(&n, &line, &z).unwrap();
        let target = DimCtx::new(["u"]).unwrap();
        let sigma = random_subst(&mut r, &target, &ctx).weaken(z.clone()).unwrap();
        let levels = [IntervalExpr::Zero, IntervalExpr::One, IntervalExpr::var("u")];
        let (a, b) = (&levels[seed as usize % 3], &levels[(seed / 3) as usize % 3]);
        let restricted = n.restrict_nf(&line, &sigma).unwrap();
        let w2 = derive_wcoe_ob(&n, &restricted, &z).unwrap();
        // the levels only mention the target context, which sigma fixes
        let whole = w.raw(a, b).unwrap();
        let direct = w2.at(&n, a, b).unwrap();
        prop_assert_eq!(n.nf_map(&whole.fwd, sigma.map()).unwrap(), direct.fwd);
        if let Node::GlueOb(_) = line.node() {
            prop_assert!(w.certify(&n, &ctx).unwrap().passed());
        }
    }
}
