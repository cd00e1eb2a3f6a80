#![allow(clippy::mutable_key_type)]

use std::collections::HashSet;

use omegapaste::globular::GlobularSet;
use omegapaste::weak::{MCell, MarkedCarrier};
use omegapaste::witness::{core_filter, CoreMode};

const BOUND: usize = 11;

fn point_with_loop(with_loop: bool) -> MarkedCarrier {
    let mut g = GlobularSet::empty(1);
    g.push(0, "a", None);
    if with_loop {
        g.push(1, "f", Some((0, 0)));
    }
    MarkedCarrier::free(&g)
}

#[test]
fn core_of_a_point_is_everything() {
    let x = point_with_loop(false);
    let report = core_filter(&x, CoreMode::Groupoid, 2, BOUND, 3);
    assert!(report.cells.len() > 20);
    let all: HashSet<MCell> = report.cells.iter().cloned().collect();
    assert_eq!(report.core, all);
    assert!(report.closed_under_boundary && report.closed_under_composition);
}

#[test]
fn unmarked_loop_is_excluded_with_everything_built_on_it() {
    let x = point_with_loop(true);
    let f = x.gen_named("f").unwrap();
    let report = core_filter(&x, CoreMode::Groupoid, 2, BOUND, 3);
    let expected: HashSet<MCell> = report
        .cells
        .iter()
        .filter(|c| {
            let mut gens = HashSet::new();
            c.generators(&mut gens);
            !gens.contains(&f)
        })
        .cloned()
        .collect();
    assert!(expected.len() < report.cells.len());
    assert_eq!(report.core, expected);
}

#[test]
fn truncated_core_keeps_low_cells() {
    let x = point_with_loop(true);
    let f = x.gen_named("f").unwrap();
    let report = core_filter(&x, CoreMode::Truncated(1), 1, 5, 2);
    assert!(report.core.contains(&f));
}
