mod common;

use omegapaste::gen::{self, nested, Grower, Lift};
use omegapaste::strict::{eta_each, mu_shapes, mu_t, unflatten, validate_diagram, Diagram, Diagrams};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn flattening_matches_colimit(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 3);
        let n = nested(&mut g, dim);
        let flat = mu_t(&g.set, &n).unwrap();
        validate_diagram(&g.set, &flat).unwrap();
        let oracle = common::flatten_by_colimit(&g.set, &n);
        prop_assert_eq!(&flat, &oracle);
        let inner: Vec<_> = n.tops.iter().map(|u| u.shape.clone()).collect();
        prop_assert_eq!(mu_shapes(&n.shape, &inner).unwrap(), flat.shape.clone());
    }

    #[test]
    fn unit_laws(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 3);
        let shape = gen::random_scheme_cell(g.rng, dim, 3);
        let d = gen::diagram(&mut g, &shape);
        prop_assert_eq!(&mu_t(&g.set, &eta_each(&g.set, &d)).unwrap(), &d);
        prop_assert_eq!(&mu_t(&g.set, &Diagram::eta(d.clone(), dim)).unwrap(), &d);
    }

    #[test]
    fn associativity(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 2);
        let triple = nested(&mut Lift(&mut g), dim);
        let x = &g.set;
        let inner_first = triple.try_map(|t| mu_t(x, t)).unwrap();
        let left = mu_t(x, &inner_first).unwrap();
        let right = mu_t(x, &mu_t(&Diagrams(x), &triple).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn unflatten_inverts_flattening(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 3);
        let n = nested(&mut g, dim);
        let flat = mu_t(&g.set, &n).unwrap();
        let inner: Vec<_> = n.tops.iter().map(|u| u.shape.clone()).collect();
        prop_assert_eq!(unflatten(&g.set, &n.shape, &inner, &flat).unwrap(), n);
    }
}
