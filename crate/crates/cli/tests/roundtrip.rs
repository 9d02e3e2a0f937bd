//! Printed canonical forms parse back to the same value.

use ncham_cli::expr::{eval_form, parse, Vocabulary};
use ncham_core::models::{sample_form, AnyModel, Namespace};
use ncham_core::with_model;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn roundtrip<C: Namespace>(c: &C, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = sample_form(c, &mut rng, 2).unwrap();
    let text = c.render(&x);
    let back = parse(&text, &Vocabulary::of(c))
        .and_then(|e| eval_form(c, &e))
        .map_err(|e| TestCaseError::fail(format!("`{text}`: {e}")))?;
    prop_assert_eq!(&back, &x, "`{}` reparsed as `{}`", text, c.render(&back));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_forms_reparse(seed in any::<u64>(), which in 0usize..6) {
        let desc = ["torus:p=1", "torus:p=3", "matrix:n=2", "matrix:n=3", "cuntz:n=2", "polymat:D=1"][which];
        let m = AnyModel::parse_and_build(desc, None).unwrap();
        with_model!(&m, mm => roundtrip(mm.calc(), seed))?;
    }
}
