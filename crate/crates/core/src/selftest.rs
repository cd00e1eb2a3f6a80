//! Seeded property suites and fixed examples, runnable from the command line.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::gen::{self, nested, two_level, CellSource, Grower, Lift};
use crate::globular::{realisation, CellRef, GlobularSet};
use crate::instruction::{delta_instr, mu_instr, normalize, normalize_outer_first, parse_instr, sp, Instr, L1};
use crate::scheme::{parse_scheme, parse_scheme_cell, render, Encoding, ZigZag};
use crate::strict::{
    delta_diagram, diagram_boundary, eta_each, mu_shapes, mu_t, parse_diagram, unflatten, validate_diagram, Carrier,
    DeltaVariant, Diagram, Diagrams,
};
use crate::weak::{comp_cells, delta_exact, hom_cat, id_cell, unit_law_cell, xi, Algebra, Free, MarkedCarrier};
use crate::witness::{validate_witness, Engine};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Schemes,
    Monad,
    Instruction,
    Algebra,
    Witness,
    Golden,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Schemes,
        Suite::Monad,
        Suite::Instruction,
        Suite::Algebra,
        Suite::Witness,
        Suite::Golden,
    ];

    /// Cases per property when none is requested.
    pub fn default_cases(self) -> usize {
        match self {
            Suite::Schemes => 500,
            Suite::Monad => 500,
            Suite::Instruction => 1000,
            Suite::Algebra => 200,
            Suite::Witness => 100,
            Suite::Golden => 1,
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "schemes" => Suite::Schemes,
            "monad" => Suite::Monad,
            "instruction" => Suite::Instruction,
            "algebra" => Suite::Algebra,
            "witness" => Suite::Witness,
            "golden" => Suite::Golden,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Schemes => "schemes",
            Suite::Monad => "monad",
            Suite::Instruction => "instruction",
            Suite::Algebra => "algebra",
            Suite::Witness => "witness",
            Suite::Golden => "golden",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub seed: u64,
    /// Rough size of the generated input; smaller ones are listed first.
    pub size: usize,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<Counterexample>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Outcome = Result<(), (usize, String)>;

fn fail<T>(size: usize, detail: impl Into<String>) -> Result<T, (usize, String)> {
    Err((size, detail.into()))
}

fn ensure(ok: bool, size: usize, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        fail(size, detail())
    }
}

fn property(name: &'static str, cases: usize, seed: u64, f: impl Fn(u64) -> Outcome) -> Check {
    let mut r = gen::rng(seed);
    let mut failures = Vec::new();
    for _ in 0..cases {
        let s: u64 = r.gen();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(s))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err((usize::MAX, msg))
        });
        if let Err((size, detail)) = outcome {
            failures.push(Counterexample { seed: s, size, detail });
        }
    }
    failures.sort_by_key(|c| c.size);
    Check { name, cases, failures }
}

fn example(name: &'static str, f: impl Fn() -> Result<(), String>) -> Check {
    let failures = match f() {
        Ok(()) => Vec::new(),
        Err(detail) => vec![Counterexample {
            seed: 0,
            size: 0,
            detail,
        }],
    };
    Check {
        name,
        cases: 1,
        failures,
    }
}

pub fn run_suite(suite: Suite, seed: u64, cases: Option<usize>) -> Vec<Check> {
    let n = cases.unwrap_or_else(|| suite.default_cases());
    match suite {
        Suite::Schemes => schemes(n, seed),
        Suite::Monad => monad(n, seed),
        Suite::Instruction => instruction(n, seed),
        Suite::Algebra => algebra(n, seed),
        Suite::Witness => witness(n, seed),
        Suite::Golden => golden(),
    }
}

fn schemes(n: usize, seed: u64) -> Vec<Check> {
    vec![
        property("encodings round-trip", n, seed, |s| {
            let mut r = gen::rng(s);
            let k = gen::random_scheme(&mut r, 5, 5);
            for enc in [Encoding::Table, Encoding::ZigZag, Encoding::Nested] {
                let back = parse_scheme(&render(&k, enc)).map_err(|e| (k.rank(), e.to_string()))?;
                ensure(back == k, k.rank(), || format!("{k} via {enc:?} gave {back}"))?;
            }
            Ok(())
        }),
        property("boundary of boundary", n, seed, |s| {
            let mut r = gen::rng(s);
            let dim = r.gen_range(1..=5);
            let k = gen::random_scheme_cell(&mut r, dim, 5);
            for m in 0..dim {
                for l in 0..m {
                    let twice = k
                        .boundary(m)
                        .and_then(|b| b.boundary(l))
                        .map_err(|e| (k.rank(), e.to_string()))?;
                    let once = k.boundary(l).map_err(|e| (k.rank(), e.to_string()))?;
                    ensure(twice == once, k.rank(), || format!("{k} at {m} then {l}"))?;
                }
            }
            Ok(())
        }),
        property("realisation cell counts", n, seed, |s| {
            let mut r = gen::rng(s);
            let dim = r.gen_range(0..=4);
            let k = gen::random_scheme_cell(&mut r, dim, 4);
            let disk = |h: usize, d: usize| match h.cmp(&d) {
                std::cmp::Ordering::Greater => 2i64,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
            let got = realisation(&k).set.counts();
            for (d, &c) in got.iter().enumerate() {
                let want: i64 = k.tops().iter().map(|&h| disk(h, d)).sum::<i64>()
                    - k.bottoms().iter().map(|&b| disk(b, d)).sum::<i64>();
                ensure(c as i64 == want, k.rank(), || {
                    format!("{k}: {c} cells in dimension {d}, expected {want}")
                })?;
            }
            Ok(())
        }),
    ]
}

fn monad(n: usize, seed: u64) -> Vec<Check> {
    vec![
        property("unit laws", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 3);
            let dim = g.rng.gen_range(0..=3);
            let k = gen::random_scheme_cell(g.rng, dim, 3);
            let d = gen::diagram(&mut g, &k);
            let size = k.rank();
            let a = mu_t(&g.set, &eta_each(&g.set, &d)).map_err(|e| (size, e.to_string()))?;
            let b = mu_t(&g.set, &Diagram::eta(d.clone(), dim)).map_err(|e| (size, e.to_string()))?;
            ensure(a == d && b == d, size, || format!("unit law fails on shape {k}"))
        }),
        property("associativity", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 2);
            let dim = g.rng.gen_range(0..=3);
            let triple = nested(&mut Lift(&mut g), dim);
            let x = &g.set;
            let size = triple.shape.rank();
            let err = |e: crate::strict::DiagramError| (size, e.to_string());
            let left = mu_t(x, &triple.try_map(|t| mu_t(x, t)).map_err(err)?).map_err(err)?;
            let right = mu_t(x, &mu_t(&Diagrams(x), &triple).map_err(err)?).map_err(err)?;
            ensure(left == right, size, || format!("flattenings differ: {}", left.shape))
        }),
        property("flatten then split", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 3);
            let dim = g.rng.gen_range(0..=3);
            let d = nested(&mut g, dim);
            let size = d.shape.rank();
            let err = |e: crate::strict::DiagramError| (size, e.to_string());
            let flat = mu_t(&g.set, &d).map_err(err)?;
            validate_diagram(&g.set, &flat).map_err(err)?;
            let inner: Vec<_> = d.tops.iter().map(|u| u.shape.clone()).collect();
            ensure(mu_shapes(&d.shape, &inner).map_err(err)? == flat.shape, size, || {
                "shape mismatch".into()
            })?;
            let back = unflatten(&g.set, &d.shape, &inner, &flat).map_err(err)?;
            ensure(back == d, size, || format!("split of {} differs", flat.shape))
        }),
    ]
}

fn instruction(n: usize, seed: u64) -> Vec<Check> {
    vec![
        property("arity of standard instruction", n, seed, |s| {
            let mut r = gen::rng(s);
            let dim = r.gen_range(0..=4);
            let k = gen::random_scheme_cell(&mut r, dim, 4);
            ensure(sp(&k).arity() == &k, k.rank(), || format!("ar(sp({k}))"))
        }),
        property("normal forms", n, seed, |s| {
            let mut r = gen::rng(s);
            let dim = r.gen_range(0..=3);
            let t = gen::random_raw_term(&mut r, dim, 2, 3);
            let size = t.size();
            let nf = normalize(&t);
            ensure(normalize(&nf) == nf, size, || {
                format!("not idempotent on {}", t.to_sexp())
            })?;
            ensure(normalize_outer_first(&t) == nf, size, || {
                format!("order-dependent on {}", t.to_sexp())
            })?;
            let back = parse_instr(&nf.to_sexp().to_string()).map_err(|e| (size, e.to_string()))?;
            ensure(back == nf, size, || format!("syntax round trip of {}", nf.to_sexp()))
        }),
        property("globular boundaries", n, seed, |s| {
            let mut r = gen::rng(s);
            let dim = r.gen_range(1..=3);
            let t = gen::random_raw_term(&mut r, dim, 2, 3);
            let size = t.size();
            let want = t.arity().boundary(dim - 1).map_err(|e| (size, e.to_string()))?;
            ensure(t.src().arity() == &want && t.tgt().arity() == &want, size, || {
                "boundary arity".into()
            })?;
            if dim >= 2 {
                ensure(
                    t.src().src() == t.tgt().src() && t.src().tgt() == t.tgt().tgt(),
                    size,
                    || format!("globularity of {}", t.to_sexp()),
                )?;
            }
            Ok(())
        }),
    ]
}

fn algebra(n: usize, seed: u64) -> Vec<Check> {
    vec![
        property("evaluation of unit", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 3);
            let dim = g.rng.gen_range(0..=3);
            let k = gen::random_scheme_cell(g.rng, dim, 3);
            let d = gen::diagram(&mut g, &k);
            let phi = gen::random_term_of_arity(g.rng, &k, 2);
            let x = MarkedCarrier::free(&g.set);
            let c = xi(&phi, &d.map(|c| x.gen(*c))).map_err(|e| (k.rank(), e.to_string()))?;
            let back = xi(&Instr::unit(dim), &Diagram::eta(c.clone(), dim)).map_err(|e| (k.rank(), e.to_string()))?;
            ensure(back == c, k.rank(), || format!("unit evaluation of {c}"))
        }),
        property("evaluation is associative", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 2);
            let dim = g.rng.gen_range(0..=3);
            let t = two_level(&mut g, dim);
            let size = t.cells.shape.rank();
            let err = |e: crate::weak::WeakError| (size, e.to_string());
            let x = MarkedCarrier::free(&g.set);
            let inner = t.cells.map(|u| u.map(|c| x.gen(*c)));
            let tops = t
                .args
                .tops
                .iter()
                .zip(&inner.tops)
                .map(|(c, u)| xi(c, u))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let bottoms = t
                .args
                .bottoms
                .iter()
                .zip(&inner.bottoms)
                .map(|(c, u)| xi(c, u))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let outer = Diagram {
                shape: t.cells.shape.clone(),
                tops,
                bottoms,
            };
            validate_diagram(&Free, &outer).map_err(|e| (size, e.to_string()))?;
            let left = xi(&t.head, &outer).map_err(err)?;
            let flat = mu_t(&Free, &inner).map_err(|e| (size, e.to_string()))?;
            let right = xi(&mu_instr(&t.head, &t.args).map_err(|e| (size, e.to_string()))?, &flat).map_err(err)?;
            ensure(left == right, size, || format!("{left} vs {right}"))
        }),
        property("identity and composite boundaries", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 3);
            let dim = g.rng.gen_range(1..=3);
            let u = g.any(dim);
            let e = g.tgt(&u);
            let v = g.with_source(&e, dim);
            let x = MarkedCarrier::free(&g.set);
            let (u, v) = (x.gen(u), x.gen(v));
            let a = u.src();
            let uv = comp_cells(&u, &v).map_err(|e| (dim, e.to_string()))?;
            ensure(id_cell(&a).src() == a && id_cell(&a).tgt() == a, dim, || {
                "identity boundaries".into()
            })?;
            ensure(uv.src() == u.src() && uv.tgt() == v.tgt(), dim, || {
                "composite boundaries".into()
            })
        }),
        property("hom operations shift dimension", n, seed, |s| {
            let mut r = gen::rng(s);
            let mut g = Grower::new(&mut r, 3, 3);
            let dim = g.rng.gen_range(2..=3);
            let u = g.any(dim);
            let e = g.tgt(&u);
            let v = g.with_source(&e, dim);
            let x = MarkedCarrier::free(&g.set);
            let (u, v) = (x.gen(u), x.gen(v));
            let err = |e: crate::weak::WeakError| (dim, e.to_string());
            let hom = hom_cat(&Free, &Free.src_at(&u, 0), &Free.tgt_at(&u, 0)).map_err(err)?;
            ensure(
                hom.identity(&u).map_err(err)? == Free.identity(&u).map_err(err)?,
                dim,
                || "identity".into(),
            )?;
            ensure(
                hom.compose(&u, &v).map_err(err)? == Free.compose(&u, &v).map_err(err)?,
                dim,
                || "composite".into(),
            )
        }),
    ]
}

fn witness(n: usize, seed: u64) -> Vec<Check> {
    vec![
        property("degenerate cells to depth 3", n, seed, |s| {
            let (x, c) = gen::degenerate_cell(s);
            let mut e = Engine::new(&x);
            let w = e.witness_degenerate(&c, 3).map_err(|err| (c.size(), err.to_string()))?;
            validate_witness(&w, 3).map_err(|err| (c.size(), err))
        }),
        property("pastings of marked cells", n, seed, |s| {
            let (x, c) = gen::marked_pasting(s, 3, 2);
            let mut e = Engine::new(&x);
            let w = e.synthesize_witness(&c, 1).map_err(|err| (c.size(), err.to_string()))?;
            validate_witness(&w, 1).map_err(|err| (c.size(), err))?;
            ensure(e.audit().violations.is_empty(), c.size(), || {
                format!("{:?}", e.audit().violations)
            })
        }),
        property("unit law endpoints", n.clamp(1, 50), seed, |s| {
            let (_, phi, u, i) = gen::unit_law_instance(s);
            let size = u.shape.rank();
            let err = |e: crate::weak::WeakError| (size, e.to_string());
            let c = unit_law_cell(&phi, &u, i).map_err(err)?;
            let lowered = delta_exact(&u, i).map_err(err)?;
            let dphi = delta_instr(&phi, i).map_err(|e| (size, e.to_string()))?;
            ensure(c.src() == xi(&phi, &u).map_err(err)?, size, || "source".into())?;
            ensure(c.tgt() == xi(&dphi, &lowered).map_err(err)?, size, || "target".into())
        }),
    ]
}

/// Points a..d with parallel arrows and 2-cells; `with_identity` gives the variant
/// carrying an identity 2-cell on `g`.
pub fn example_set(with_identity: bool) -> GlobularSet {
    let mut x = GlobularSet::empty(2);
    for p in ["a", "b", "c", "d"] {
        x.push(0, p, None);
    }
    let arrows: &[(&str, usize, usize)] = if with_identity {
        &[
            ("f", 0, 1),
            ("g", 0, 1),
            ("h", 0, 1),
            ("i", 1, 2),
            ("j", 2, 3),
            ("k", 2, 3),
        ]
    } else {
        &[
            ("f", 0, 1),
            ("g", 0, 1),
            ("h", 1, 2),
            ("i", 2, 3),
            ("j", 2, 3),
            ("k", 2, 3),
        ]
    };
    for &(n, s, t) in arrows {
        x.push(1, n, Some((s, t)));
    }
    let find = |x: &GlobularSet, n: &str| x.find(1, n).expect("declared above").index;
    let cells: &[(&str, &str, &str)] = if with_identity {
        &[
            ("alpha", "f", "g"),
            ("idg", "g", "g"),
            ("beta", "g", "h"),
            ("gamma", "j", "k"),
        ]
    } else {
        &[("alpha", "f", "g"), ("beta", "i", "j"), ("gamma", "j", "k")]
    };
    for &(n, s, t) in cells {
        let b = (find(&x, s), find(&x, t));
        x.push(2, n, Some(b));
    }
    x
}

fn named(x: &GlobularSet, text: &str) -> Result<Diagram<CellRef>, String> {
    parse_diagram(x, text, |n| x.find_any(n).ok()).map_err(|e| e.to_string())
}

fn golden() -> Vec<Check> {
    vec![
        example("boundary of a long scheme", || {
            let k = parse_scheme_cell("[3,6,5,7,2,6 / 2,3,4,0,1]").map_err(|e| e.to_string())?;
            let got = k.boundary(4).map_err(|e| e.to_string())?;
            let want = parse_scheme_cell("[3,4,4,2,4 / 2,3,0,1]").map_err(|e| e.to_string())?;
            (got == want).then_some(()).ok_or(format!("got {got}"))
        }),
        example("nested, zig-zag and table agree", || {
            let z = ZigZag::from_nested("[[[ ]],[ ],[[ ],[ ]]]").map_err(|e| e.to_string())?;
            let want_seq = [-1, 0, 1, 2, 1, 0, 1, 0, 1, 2, 1, 2, 1, 0, -1];
            let table = parse_scheme("[2,1,2,2 / 0,0,1]").map_err(|e| e.to_string())?;
            let ok = z.seq() == want_seq && z.to_scheme() == table && table.to_zigzag() == z;
            ok.then_some(()).ok_or(format!("zig-zag {z}"))
        }),
        example("boundaries of a labelled diagram", || {
            let x = example_set(false);
            let u = named(&x, "[alpha, h, beta, gamma / b, c, j]")?;
            let s = diagram_boundary(&x, &u, 1, false).map_err(|e| e.to_string())?;
            let t = diagram_boundary(&x, &u, 1, true).map_err(|e| e.to_string())?;
            let ok = s == named(&x, "[f, h, i / b, c]")? && t == named(&x, "[g, h, k / b, c]")?;
            ok.then_some(()).ok_or("boundary mismatch".into())
        }),
        example("column deletion", || {
            let x = example_set(true);
            let u = named(&x, "[alpha, idg, beta, i, gamma / g, g, b, c]")?;
            let idg = x.find_any("idg").map_err(|e| e.to_string())?;
            for (i, v, want) in [
                (1, DeltaVariant::Exact, "[alpha, beta, i, gamma / g, b, c]"),
                (2, DeltaVariant::Plus, "[alpha, idg, i, gamma / g, b, c]"),
                (4, DeltaVariant::Minus, "[alpha, idg, beta, i, k / g, g, b, c]"),
            ] {
                let got = delta_diagram(&x, &u, i, v, Some(&idg)).map_err(|e| e.to_string())?;
                let want = named(&x, want)?;
                if got.tops != want.tops || got.bottoms != want.bottoms {
                    return Err(format!("column {i}: got {}", got.map(|c| x.name(*c).to_string())));
                }
            }
            Ok(())
        }),
        example("scheme column deletion", || {
            let k = parse_scheme_cell("[2,2,2,1,2 / 1,1,0,0]").map_err(|e| e.to_string())?;
            let want = parse_scheme_cell("[2,2,1,2 / 1,0,0]").map_err(|e| e.to_string())?;
            (k.delta(1).map_err(|e| e.to_string())? == want)
                .then_some(())
                .ok_or("delta".into())
        }),
        example("instruction boundary of a composite", || {
            let phi = sp(&parse_scheme_cell("[1,1 / 0]").map_err(|e| e.to_string())?);
            let ok = phi.src() == Instr::unit(0) && L1.dim(&phi) == 1;
            ok.then_some(()).ok_or("source of the composite instruction".into())
        }),
    ]
}

/// Runs several suites on worker threads; results come back in the order requested.
pub fn run_all(suites: &[Suite], seed: u64, cases: Option<usize>) -> Vec<(Suite, Vec<Check>)> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&s| (s, scope.spawn(move || run_suite(s, seed, cases))))
            .collect();
        handles
            .into_iter()
            .map(|(s, h)| (s, h.join().expect("suite worker panicked outside a property")))
            .collect()
    })
}
