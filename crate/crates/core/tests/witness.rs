use omegapaste::gen::{degenerate_cell, marked_pasting};
use omegapaste::globular::GlobularSet;
use omegapaste::instruction::{comp_instr, id_instr, mu_instr, Instr};
use omegapaste::scheme::SchemeCell;
use omegapaste::strict::Diagram;
use omegapaste::weak::{coherence_cell, comp_cells, extend_with_marks, MCell, MKind, MarkedCarrier};
use omegapaste::witness::{equiv_sym, validate_witness, Engine, InverseWitness};

#[test]
fn degenerate_cells_are_witnessed_to_depth_three() {
    for seed in 0..40 {
        let (x, c) = degenerate_cell(seed);
        let mut e = Engine::new(&x);
        let w = e.witness_degenerate(&c, 3).unwrap();
        assert_eq!(validate_witness(&w, 3), Ok(()), "seed {seed}");
    }
}

#[test]
fn pastings_of_marked_cells_are_witnessed() {
    for seed in 0..40 {
        let (x, c) = marked_pasting(seed, 3, 2);
        let mut e = Engine::new(&x);
        let w = e
            .synthesize_witness(&c, 1)
            .unwrap_or_else(|err| panic!("seed {seed}: {err}"));
        assert_eq!(validate_witness(&w, 1), Ok(()), "seed {seed}");
        assert!(
            e.audit().violations.is_empty(),
            "seed {seed}: {:?}",
            e.audit().violations
        );
    }
}

fn line(f: &str, g: &str) -> MarkedCarrier {
    let mut base = GlobularSet::empty(1);
    for p in ["a", "b", "c"] {
        base.push(0, p, None);
    }
    base.push(1, f, Some((0, 1)));
    base.push(1, g, Some((1, 2)));
    let marks = [base.find(1, f).unwrap(), base.find(1, g).unwrap()];
    extend_with_marks(&base, &marks, 2).unwrap()
}

/// Full-dimensional labels that are formal `p` atoms, anywhere inside a cell.
fn p_atoms(c: &MCell, out: &mut Vec<MCell>) {
    match c.kind() {
        MKind::P(u) => out.push(u.clone()),
        MKind::Comp(_, d) => d.tops.iter().for_each(|t| p_atoms(t, out)),
        _ => {}
    }
}

fn chain(c: &MCell) -> Vec<MCell> {
    c.as_comp().map(|(_, d)| d.tops.clone()).unwrap_or_default()
}

#[test]
fn composite_of_two_arrows_follows_the_cancellation_chain() {
    let x = line("f", "g");
    let (f, g) = (x.gen_named("f").unwrap(), x.gen_named("g").unwrap());
    let c = comp_cells(&f, &g).unwrap();
    let mut e = Engine::new(&x);
    let w = e.synthesize_witness(&c, 1).unwrap();
    let steps = chain(&w.p);
    assert_eq!(steps.len(), 5);
    // rebracketing: a coherence cell starting at the composite of c with its inverse
    assert_eq!(steps[0].src(), comp_cells(&c, &w.inverse).unwrap());
    assert!(steps[0].as_comp().unwrap().0.arity().is_degenerate());
    // whiskering the cancellation of g
    let mut ps = Vec::new();
    p_atoms(&steps[1], &mut ps);
    assert_eq!(ps, vec![g.clone()]);
    // unit law, then the remaining cancellation of f
    assert!(steps[2].as_comp().unwrap().0.arity().is_degenerate());
    let mut ps = Vec::new();
    p_atoms(&steps[4], &mut ps);
    assert_eq!(ps, vec![f.clone()]);
    assert_eq!(steps[4].tgt(), w.p.tgt());
}

#[test]
fn inverse_paths_and_transport() {
    for seed in 0..10 {
        let (x, c) = marked_pasting(seed, 2, 3);
        let mut e = Engine::new(&x);
        let w = e.synthesize_witness(&c, 2).unwrap();
        // a second inverse, v composed with an identity, reached by a coherence cell
        let v = &w.inverse;
        let n = v.dim();
        let right_id = mu_instr(
            &comp_instr(n),
            &Diagram {
                shape: SchemeCell::from_rows(vec![n, n], vec![n - 1], n).unwrap(),
                tops: vec![Instr::unit(n), id_instr(n)],
                bottoms: vec![Instr::unit(n - 1)],
            },
        )
        .unwrap();
        let conn = coherence_cell(&Instr::unit(n), &right_id, &Diagram::eta(v.clone(), n)).unwrap();
        assert_ne!(conn.tgt(), *v);
        let wc = e.witness(&conn, 2).unwrap();
        let moved = e.transport_invertibility(&equiv_sym(&w), &wc, 1).unwrap();
        let w2: InverseWitness = equiv_sym(&moved);
        assert_eq!(validate_witness(&w2, 1), Ok(()));
        let (path, pw) = e.unique_inverse_path(&w, &w2, 0).unwrap();
        assert_eq!(path.src(), w.inverse);
        assert_eq!(path.tgt(), w2.inverse);
        assert_eq!(validate_witness(&pw, 0), Ok(()));
    }
}

#[test]
fn unit_law_endpoints() {
    for seed in 0..60 {
        let (x, phi, u, i) = omegapaste::gen::unit_law_instance(seed);
        let c = omegapaste::weak::unit_law_cell(&phi, &u, i).unwrap();
        assert_eq!(c.src(), omegapaste::weak::xi(&phi, &u).unwrap(), "seed {seed}");
        let lowered = omegapaste::weak::delta_exact(&u, i).unwrap();
        let dphi = omegapaste::instruction::delta_instr(&phi, i).unwrap();
        assert_eq!(c.tgt(), omegapaste::weak::xi(&dphi, &lowered).unwrap(), "seed {seed}");
        let mut e = Engine::new(&x);
        let w = e.witness(&c, 1).unwrap();
        assert_eq!(validate_witness(&w, 1), Ok(()));
    }
}
