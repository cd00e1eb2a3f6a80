use omegapaste::gen::{self, two_level, CellSource, Grower};
use omegapaste::globular::CellRef;
use omegapaste::instruction::{mu_instr, Instr, L1};
use omegapaste::strict::{mu_t, validate_diagram, Carrier, Diagram};
use omegapaste::weak::{comp_cells, hom_cat, id_cell, xi, Algebra, Free, MCell, MarkedCarrier};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn cells_of(x: &MarkedCarrier, d: &Diagram<CellRef>) -> Diagram<MCell> {
    d.map(|c| x.gen(*c))
}

proptest! {
    #![proptest_config(config(250))]

    #[test]
    fn evaluation_of_unit(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 3);
        let c = g.any(dim);
        let shape = gen::random_scheme_cell(g.rng, dim, 3);
        let d = gen::diagram(&mut g, &shape);
        let phi = gen::random_term_of_arity(g.rng, &shape, 2);
        let x = MarkedCarrier::free(&g.set);
        let composite = xi(&phi, &cells_of(&x, &d)).unwrap();
        for cell in [x.gen(c), composite] {
            let n = cell.dim();
            prop_assert_eq!(xi(&Instr::unit(n), &Diagram::eta(cell.clone(), n)).unwrap(), cell);
        }
    }

    #[test]
    fn evaluation_is_associative(seed in any::<u64>(), dim in 0usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 2);
        let t = two_level(&mut g, dim);
        let x = MarkedCarrier::free(&g.set);
        let inner = t.cells.map(|u| cells_of(&x, u));
        // evaluate each inner piece first
        let tops: Vec<MCell> = t.args.tops.iter().zip(&inner.tops).map(|(c, u)| xi(c, u).unwrap()).collect();
        let bottoms: Vec<MCell> = t.args.bottoms.iter().zip(&inner.bottoms).map(|(c, u)| xi(c, u).unwrap()).collect();
        let outer = Diagram { shape: t.cells.shape.clone(), tops, bottoms };
        validate_diagram(&Free, &outer).unwrap();
        let left = xi(&t.head, &outer).unwrap();
        // or flatten both levels first
        validate_diagram(&L1, &t.args).unwrap();
        let right = xi(&mu_instr(&t.head, &t.args).unwrap(), &mu_t(&Free, &inner).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_and_composite_boundaries(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 3);
        let u = g.any(dim);
        let e = g.tgt(&u);
        let v = g.with_source(&e, dim);
        let a = g.any(dim - 1);
        let x = MarkedCarrier::free(&g.set);
        let (u, v, a) = (x.gen(u), x.gen(v), x.gen(a));
        let ida = id_cell(&a);
        prop_assert_eq!(ida.src(), a.clone());
        prop_assert_eq!(ida.tgt(), a.clone());
        let uv = comp_cells(&u, &v).unwrap();
        prop_assert_eq!(uv.src(), u.src());
        prop_assert_eq!(uv.tgt(), v.tgt());
        let iu = comp_cells(&id_cell(&u.src()), &u).unwrap();
        prop_assert_eq!(iu.src(), u.src());
    }

    #[test]
    fn hom_operations_shift_dimension(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = gen::rng(seed);
        let mut g = Grower::new(&mut r, 3, 3);
        let u = g.any(dim);
        let e = g.tgt(&u);
        let v = g.with_source(&e, dim);
        let x = MarkedCarrier::free(&g.set);
        let (u, v) = (x.gen(u), x.gen(v));
        let (a, b) = (Free.src_at(&u, 0), Free.tgt_at(&u, 0));
        let hom = hom_cat(&Free, &a, &b).unwrap();
        prop_assert_eq!(hom.identity(&u).unwrap(), Free.identity(&u).unwrap());
        if dim >= 2 {
            prop_assert_eq!(hom.compose(&u, &v).unwrap(), Free.compose(&u, &v).unwrap());
            let (f, h) = (Free.src_at(&u, 1), Free.tgt_at(&u, 1));
            let hom2 = hom_cat(&hom, &f, &h).unwrap();
            prop_assert_eq!(hom2.identity(&u).unwrap(), Free.identity(&u).unwrap());
            if dim >= 3 {
                prop_assert_eq!(hom2.compose(&u, &v).unwrap(), Free.compose(&u, &v).unwrap());
            }
        }
    }
}
