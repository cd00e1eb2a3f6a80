use omegapaste::gen::{self, random_raw_term, random_scheme_cell};
use omegapaste::instruction::{normalize, normalize_outer_first, parse_instr, sp, Instr};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn check_globular(t: &Instr) -> Result<(), TestCaseError> {
    let n = t.dim();
    if n >= 1 {
        prop_assert_eq!(t.src().arity().clone(), t.arity().boundary(n - 1).unwrap());
        prop_assert_eq!(t.tgt().arity().clone(), t.arity().boundary(n - 1).unwrap());
    }
    if n >= 2 {
        prop_assert_eq!(t.src().src(), t.tgt().src());
        prop_assert_eq!(t.src().tgt(), t.tgt().tgt());
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn arity_of_standard_instruction(seed in any::<u64>(), dim in 0usize..=4) {
        let mut r = gen::rng(seed);
        let k = random_scheme_cell(&mut r, dim, 4);
        prop_assert_eq!(sp(&k).arity().clone(), k);
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn normal_forms(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let t = random_raw_term(&mut r, dim, 2, 3);
        let n = normalize(&t);
        prop_assert_eq!(&normalize(&n), &n);
        prop_assert_eq!(&normalize_outer_first(&t), &n);
        prop_assert_eq!(n.arity(), t.arity());
        check_globular(&t)?;
        check_globular(&n)?;
        let text = n.to_sexp().to_string();
        prop_assert_eq!(parse_instr(&text).unwrap(), n);
    }
}

#[test]
fn raw_terms_exercise_every_rule() {
    let mut r = gen::rng(11);
    let mut changed = 0;
    for _ in 0..300 {
        let t = random_raw_term(&mut r, 2, 2, 3);
        if normalize(&t) != t {
            changed += 1;
        }
    }
    assert!(changed > 50, "only {changed} raw terms were not already normal");
}
