//! Acceptance run: one PASS/FAIL line per criterion, with counts and wall-clock limits.
//! All comparisons are exact; there are no numeric tolerances.

#![allow(clippy::mutable_key_type)]

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use omegapaste::gen::{self, degenerate_cell, marked_pasting, nested, unit_law_instance, CellSource, Grower, Lift};
use omegapaste::globular::{CellRef, GlobularSet};
use omegapaste::instruction::{
    comp_instr, delta_instr, id_instr, mu_instr, normalize, normalize_outer_first, sp, Instr,
};
use omegapaste::scheme::{parse_scheme, parse_scheme_cell, SchemeCell, ZigZag};
use omegapaste::selftest::example_set;
use omegapaste::strict::{
    delta_diagram, diagram_boundary, eta_each, mu_t, parse_diagram, validate_diagram, Carrier, DeltaVariant, Diagram,
    Diagrams,
};
use omegapaste::weak::{
    coherence_cell, comp_cells, delta_exact, extend_with_marks, hom_cat, id_cell, unit_law_cell, xi, Algebra, Free,
    MCell, MKind, MarkedCarrier,
};
use omegapaste::witness::{core_filter, equiv_sym, validate_witness, CoreMode, Engine};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn long_scheme_boundary() -> Outcome {
    let k = parse_scheme_cell("[3,6,5,7,2,6 / 2,3,4,0,1]").map_err(err)?;
    let got = k.boundary(4).map_err(err)?;
    check(got == parse_scheme_cell("[3,4,4,2,4 / 2,3,0,1]").map_err(err)?, || {
        format!("got {got}")
    })?;
    Ok(format!("s4 = {}", got.scheme()))
}

fn encoding_round_trip() -> Outcome {
    let z = ZigZag::from_nested("[[[ ]],[ ],[[ ],[ ]]]").map_err(err)?;
    check(z.seq() == [-1, 0, 1, 2, 1, 0, 1, 0, 1, 2, 1, 2, 1, 0, -1], || {
        format!("zig-zag {z}")
    })?;
    let table = parse_scheme("[2,1,2,2 / 0,0,1]").map_err(err)?;
    check(z.to_scheme() == table, || "zig-zag to table".into())?;
    check(table.to_zigzag() == z, || "table to zig-zag".into())?;
    check(ZigZag::from_nested(&table.to_nested()).map_err(err)? == z, || {
        "table to nested".into()
    })?;
    Ok(format!("{} entries", z.seq().len()))
}

fn named(x: &GlobularSet, text: &str) -> Result<Diagram<CellRef>, String> {
    parse_diagram(x, text, |n| x.find_any(n).ok()).map_err(err)
}

fn labelled_boundaries() -> Outcome {
    let x = example_set(false);
    let u = named(&x, "[alpha, h, beta, gamma / b, c, j]")?;
    let s = diagram_boundary(&x, &u, 1, false).map_err(err)?;
    let t = diagram_boundary(&x, &u, 1, true).map_err(err)?;
    check(s == named(&x, "[f, h, i / b, c]")?, || "s1".into())?;
    check(t == named(&x, "[g, h, k / b, c]")?, || "t1".into())?;
    Ok("s1, t1 exact".into())
}

fn column_deletion() -> Outcome {
    let x = example_set(true);
    let u = named(&x, "[alpha, idg, beta, i, gamma / g, g, b, c]")?;
    let idg = x.find_any("idg").map_err(err)?;
    for (i, v, want) in [
        (1, DeltaVariant::Exact, "[alpha, beta, i, gamma / g, b, c]"),
        (2, DeltaVariant::Plus, "[alpha, idg, i, gamma / g, b, c]"),
        (4, DeltaVariant::Minus, "[alpha, idg, beta, i, k / g, g, b, c]"),
    ] {
        let got = delta_diagram(&x, &u, i, v, Some(&idg)).map_err(err)?;
        let want = named(&x, want)?;
        check(got.tops == want.tops && got.bottoms == want.bottoms, || {
            format!("column {i}")
        })?;
        check(got.shape.scheme() == want.shape.scheme(), || {
            format!("shape at column {i}")
        })?;
    }
    Ok("3 tables exact".into())
}

fn monad_suite() -> Outcome {
    let mut seeds = gen::rng(500);
    let n = 500;
    for case in 0..n {
        let dim = case % 4;
        let mut r = gen::rng(seeds.gen());
        let mut g = Grower::new(&mut r, 3, 3);
        let shape = gen::random_scheme_cell(g.rng, dim, 3);
        let d = gen::diagram(&mut g, &shape);
        check(mu_t(&g.set, &eta_each(&g.set, &d)).map_err(err)? == d, || {
            format!("left unit, case {case}")
        })?;
        check(mu_t(&g.set, &Diagram::eta(d.clone(), dim)).map_err(err)? == d, || {
            format!("right unit, case {case}")
        })?;

        let nest = nested(&mut g, dim);
        let flat = mu_t(&g.set, &nest).map_err(err)?;
        validate_diagram(&g.set, &flat).map_err(err)?;
        check(flat == common::flatten_by_colimit(&g.set, &nest), || {
            format!("colimit, case {case}")
        })?;

        let mut r = gen::rng(seeds.gen());
        let mut g = Grower::new(&mut r, 3, 2);
        let triple = nested(&mut Lift(&mut g), dim);
        let x = &g.set;
        let left = mu_t(x, &triple.try_map(|t| mu_t(x, t)).map_err(err)?).map_err(err)?;
        let right = mu_t(x, &mu_t(&Diagrams(x), &triple).map_err(err)?).map_err(err)?;
        check(left == right, || format!("associativity, case {case}"))?;
    }
    Ok(format!("{n} nests, 0 discrepancies"))
}

fn instruction_suite() -> Outcome {
    let mut r = gen::rng(501);
    for case in 0..500 {
        let k = gen::random_scheme_cell(&mut r, case % 5, 4);
        check(sp(&k).arity() == &k, || format!("ar(sp({k}))"))?;
    }
    let mut changed = 0;
    for case in 0..1000 {
        let t = gen::random_raw_term(&mut r, case % 4, 2, 3);
        let nf = normalize(&t);
        changed += usize::from(nf != t);
        check(normalize(&nf) == nf, || format!("idempotence on {}", t.to_sexp()))?;
        check(normalize_outer_first(&t) == nf, || format!("order on {}", t.to_sexp()))?;
        let n = t.dim();
        if n >= 1 {
            let b = t.arity().boundary(n - 1).map_err(err)?;
            check(t.src().arity() == &b && t.tgt().arity() == &b, || {
                "boundary arity".into()
            })?;
        }
        if n >= 2 {
            check(t.src().src() == t.tgt().src() && t.src().tgt() == t.tgt().tgt(), || {
                "globularity".into()
            })?;
        }
    }
    Ok(format!("500 schemes, 1000 terms ({changed} rewritten)"))
}

fn algebra_suite() -> Outcome {
    let mut seeds = gen::rng(502);
    let n = 200;
    for case in 0..n {
        let dim = case % 4;
        let mut r = gen::rng(seeds.gen());
        let mut g = Grower::new(&mut r, 3, 2);
        let t = gen::two_level(&mut g, dim);
        let x = MarkedCarrier::free(&g.set);
        let inner = t.cells.map(|u| u.map(|c| x.gen(*c)));
        let eval = |c: &Instr, u: &Diagram<MCell>| xi(c, u).map_err(err);
        let tops = t
            .args
            .tops
            .iter()
            .zip(&inner.tops)
            .map(|(c, u)| eval(c, u))
            .collect::<Result<Vec<_>, _>>()?;
        let bottoms = t
            .args
            .bottoms
            .iter()
            .zip(&inner.bottoms)
            .map(|(c, u)| eval(c, u))
            .collect::<Result<Vec<_>, _>>()?;
        let outer = Diagram {
            shape: t.cells.shape.clone(),
            tops,
            bottoms,
        };
        let left = xi(&t.head, &outer).map_err(err)?;
        let right = xi(
            &mu_instr(&t.head, &t.args).map_err(err)?,
            &mu_t(&Free, &inner).map_err(err)?,
        )
        .map_err(err)?;
        check(left == right, || format!("associativity, case {case}"))?;
        for c in [left, outer.tops[0].clone()] {
            let n = c.dim();
            check(
                xi(&Instr::unit(n), &Diagram::eta(c.clone(), n)).map_err(err)? == c,
                || "unit".into(),
            )?;
        }

        let mut r = gen::rng(seeds.gen());
        let mut g = Grower::new(&mut r, 3, 3);
        let d = 1 + case % 3;
        let u = g.any(d);
        let e = g.tgt(&u);
        let v = g.with_source(&e, d);
        let x = MarkedCarrier::free(&g.set);
        let (u, v) = (x.gen(u), x.gen(v));
        let a = u.src();
        check(id_cell(&a).src() == a && id_cell(&a).tgt() == a, || {
            "identity boundaries".into()
        })?;
        let uv = comp_cells(&u, &v).map_err(err)?;
        check(uv.src() == u.src() && uv.tgt() == v.tgt(), || {
            "composite boundaries".into()
        })?;
        let hom = hom_cat(&Free, &Free.src_at(&u, 0), &Free.tgt_at(&u, 0)).map_err(err)?;
        check(
            hom.identity(&u).map_err(err)? == Free.identity(&u).map_err(err)?,
            || "hom identity".into(),
        )?;
        if d >= 2 {
            check(
                hom.compose(&u, &v).map_err(err)? == Free.compose(&u, &v).map_err(err)?,
                || "hom composite".into(),
            )?;
        }
    }
    Ok(format!("{n} two-level nests and id/comp samples"))
}

fn line_carrier() -> MarkedCarrier {
    let mut base = GlobularSet::empty(1);
    for p in ["a", "b", "c"] {
        base.push(0, p, None);
    }
    base.push(1, "f", Some((0, 1)));
    base.push(1, "g", Some((1, 2)));
    let marks = [base.find(1, "f").unwrap(), base.find(1, "g").unwrap()];
    extend_with_marks(&base, &marks, 2).unwrap()
}

fn p_atoms(c: &MCell, out: &mut Vec<MCell>) {
    match c.kind() {
        MKind::P(u) => out.push(u.clone()),
        MKind::Comp(_, d) => d.tops.iter().for_each(|t| p_atoms(t, out)),
        _ => {}
    }
}

fn degenerate_step(c: &MCell) -> bool {
    c.as_comp().is_some_and(|(phi, _)| phi.arity().is_degenerate())
}

fn witness_suite() -> Outcome {
    // (a)
    for seed in 0..100 {
        let (x, c) = degenerate_cell(seed);
        let w = Engine::new(&x).witness_degenerate(&c, 3).map_err(err)?;
        validate_witness(&w, 3).map_err(|e| format!("(a) seed {seed}: {e}"))?;
    }
    // (b) and (d)
    let mut edges = 0;
    for seed in 0..100 {
        let (x, c) = marked_pasting(seed, 3, 2);
        let mut e = Engine::new(&x);
        let w = e
            .synthesize_witness(&c, 1)
            .map_err(|e| format!("(b) seed {seed}: {e}"))?;
        validate_witness(&w, 1).map_err(|e| format!("(b) seed {seed}: {e}"))?;
        check(e.audit().violations.is_empty(), || {
            format!("(d) seed {seed}: {:?}", e.audit().violations)
        })?;
        edges += e.audit().edges;
    }
    // (c)
    let x = line_carrier();
    let (f, g) = (x.gen_named("f").map_err(err)?, x.gen_named("g").map_err(err)?);
    let c = comp_cells(&f, &g).map_err(err)?;
    let w = Engine::new(&x).synthesize_witness(&c, 1).map_err(err)?;
    let steps = w.p.as_comp().map(|(_, d)| d.tops.clone()).unwrap_or_default();
    check(steps.len() == 5, || format!("(c) {} steps", steps.len()))?;
    let cancels = |s: &MCell| {
        let mut ps = Vec::new();
        p_atoms(s, &mut ps);
        ps
    };
    check(
        steps[0].src() == comp_cells(&c, &w.inverse).map_err(err)? && degenerate_step(&steps[0]),
        || "(c) rebracketing".into(),
    )?;
    check(cancels(&steps[1]) == [g.clone()], || "(c) cancellation of g".into())?;
    check(degenerate_step(&steps[2]) && degenerate_step(&steps[3]), || {
        "(c) unit law and coherence".into()
    })?;
    check(cancels(&steps[4]) == [f.clone()], || "(c) cancellation of f".into())?;
    check(steps[4].tgt() == id_cell(&c.src()), || {
        "(c) lands on the identity".into()
    })?;
    Ok(format!(
        "(a) 100 at depth 3, (b) 100 pastings, (c) rebracket/cancel g/unit/coherence/cancel f, (d) {edges} audited calls, 0 violations"
    ))
}

fn core_suite() -> Outcome {
    const BOUND: usize = 11;
    let point = |with_loop: bool| {
        let mut g = GlobularSet::empty(1);
        g.push(0, "a", None);
        if with_loop {
            g.push(1, "f", Some((0, 0)));
        }
        MarkedCarrier::free(&g)
    };
    let x = point(false);
    let r = core_filter(&x, CoreMode::Groupoid, 2, BOUND, 3);
    let all: HashSet<MCell> = r.cells.iter().cloned().collect();
    check(r.core == all, || {
        format!("point: core {} of {}", r.core.len(), all.len())
    })?;

    let x = point(true);
    let f = x.gen_named("f").map_err(err)?;
    let r2 = core_filter(&x, CoreMode::Groupoid, 2, BOUND, 3);
    let free_of_f: HashSet<MCell> = r2
        .cells
        .iter()
        .filter(|c| {
            let mut gens = HashSet::new();
            c.generators(&mut gens);
            !gens.contains(&f)
        })
        .cloned()
        .collect();
    check(r2.core == free_of_f, || {
        format!("loop: core {} vs expected {}", r2.core.len(), free_of_f.len())
    })?;
    Ok(format!(
        "point: {} cells all kept; loop: {} of {} kept",
        all.len(),
        r2.core.len(),
        r2.cells.len()
    ))
}

fn unit_law_and_inverse_paths() -> Outcome {
    for seed in 0..50 {
        let (_, phi, u, i) = unit_law_instance(seed);
        let c = unit_law_cell(&phi, &u, i).map_err(err)?;
        let lowered = delta_exact(&u, i).map_err(err)?;
        let dphi = delta_instr(&phi, i).map_err(err)?;
        check(c.src() == xi(&phi, &u).map_err(err)?, || {
            format!("unit law source, seed {seed}")
        })?;
        check(c.tgt() == xi(&dphi, &lowered).map_err(err)?, || {
            format!("unit law target, seed {seed}")
        })?;
    }
    for seed in 0..50 {
        let (x, c) = marked_pasting(seed, 2, 3);
        let mut e = Engine::new(&x);
        let w = e.synthesize_witness(&c, 2).map_err(err)?;
        let v = &w.inverse;
        let n = v.dim();
        let right_id = mu_instr(
            &comp_instr(n),
            &Diagram {
                shape: SchemeCell::from_rows(vec![n, n], vec![n - 1], n).map_err(err)?,
                tops: vec![Instr::unit(n), id_instr(n)],
                bottoms: vec![Instr::unit(n - 1)],
            },
        )
        .map_err(err)?;
        let conn = coherence_cell(&Instr::unit(n), &right_id, &Diagram::eta(v.clone(), n)).map_err(err)?;
        let wc = e.witness(&conn, 2).map_err(err)?;
        let moved = e.transport_invertibility(&equiv_sym(&w), &wc, 1).map_err(err)?;
        let w2 = equiv_sym(&moved);
        validate_witness(&w2, 1).map_err(|e| format!("second inverse, seed {seed}: {e}"))?;
        let (path, pw) = e.unique_inverse_path(&w, &w2, 0).map_err(err)?;
        check(path.src() == w.inverse && path.tgt() == w2.inverse, || {
            format!("path endpoints, seed {seed}")
        })?;
        validate_witness(&pw, 0).map_err(|e| format!("path witness, seed {seed}: {e}"))?;
    }
    Ok("50 unit-law cells, 50 inverse paths".into())
}

fn main() {
    let ms = Duration::from_millis;
    let criteria: [Criterion; 10] = [
        ("golden: s4 of a long scheme", ms(1), long_scheme_boundary),
        ("golden: nested/zig-zag/table round trip", ms(1), encoding_round_trip),
        ("golden: s1 and t1 of a labelled diagram", ms(1000), labelled_boundaries),
        ("golden: three column deletions", ms(1000), column_deletion),
        ("monad: units, associativity, colimit oracle", ms(60_000), monad_suite),
        (
            "instruction: arity of sp, normal forms, globularity",
            ms(60_000),
            instruction_suite,
        ),
        (
            "algebra: evaluation laws, id/comp boundaries, hom shift",
            ms(60_000),
            algebra_suite,
        ),
        (
            "witness: degenerate, pastings, chain, termination",
            ms(120_000),
            witness_suite,
        ),
        ("core: point and unmarked loop", ms(60_000), core_suite),
        (
            "unit law and unique inverse endpoints",
            ms(60_000),
            unit_law_and_inverse_paths,
        ),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the time limit")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "{verdict} {name}: {detail} [{:.3} ms, limit {} ms]",
            took.as_secs_f64() * 1e3,
            limit.as_millis()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
