mod common;

use common::user_models;
use confik_core::feature_model::{parse_model, print_model, translate};
use confik_core::logic::Var;
use confik_core::sim::{generate_model, run_rng, SynthParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_models_round_trip_and_have_products(n in 1usize..=14, seed in any::<u64>()) {
        let mut params = SynthParams::new(n);
        params.constraints = n / 4;
        let fm = generate_model(&params, &mut run_rng(seed, 0));
        let text = print_model(&fm);
        // Parsing numbers features in text order, so compare printed forms.
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(print_model(&back), text);
        prop_assert_eq!(user_models(&back.to_clauses()).len(), user_models(&fm.to_clauses()).len());
        let e = translate(&fm);
        prop_assert!(e.vars().iter().all(|v| v.index() < fm.len()));
        let cs = fm.to_clauses();
        prop_assert_eq!(cs.num_vars(), fm.len());
        let products = user_models(&cs);
        prop_assert!(!products.is_empty());
        // Every product holds the root and is closed under parents.
        for p in &products {
            prop_assert!(p.contains(&fm.root().var()));
            for &v in p {
                if let Some((parent, _)) = fm.feature(confik_core::feature_model::FeatureId(v.index())).parent {
                    prop_assert!(p.contains(&parent.var()));
                }
            }
        }
        // The expression and the clauses agree on every valuation.
        let n = fm.len();
        for bits in 0u32..1 << n {
            let val = |v: Var| bits >> v.index() & 1 == 1;
            let mut set: Vec<Var> = (0..n).map(Var::new).filter(|&v| val(v)).collect();
            set.sort();
            prop_assert_eq!(e.eval(&val), products.contains(&set));
        }
    }
}
