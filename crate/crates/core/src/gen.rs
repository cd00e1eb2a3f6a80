//! Seeded random generators for schemes, diagrams, instruction terms and cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::globular::{CellRef, GlobularSet};
use crate::instruction::{kappa, sp, subst_raw, Instr, L1};
use crate::scheme::{PastingScheme, SchemeCell};
use crate::strict::{Carrier, Diagram, Diagrams};
use crate::weak::{extend_with_marks, id_cell, xi, MCell, MarkedCarrier};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tops in `lo..=hi`, bottoms at least `floor` and below both neighbours.
fn random_rows(r: &mut Rand, rank: usize, lo: usize, hi: usize, floor: usize) -> (Vec<usize>, Vec<usize>) {
    let lo = if rank > 0 { lo.max(floor + 1) } else { lo };
    let tops: Vec<usize> = (0..=rank).map(|_| r.gen_range(lo..=hi)).collect();
    let bottoms = (1..=rank)
        .map(|i| r.gen_range(floor..tops[i - 1].min(tops[i])))
        .collect();
    (tops, bottoms)
}

pub fn random_scheme(r: &mut Rand, max_height: usize, max_rank: usize) -> PastingScheme {
    let rank = if max_height == 0 { 0 } else { r.gen_range(0..=max_rank) };
    let (tops, bottoms) = random_rows(r, rank, 0, max_height, 0);
    PastingScheme::new(tops, bottoms).expect("generated rows are valid")
}

/// A scheme of exactly dimension `dim`, degenerate about a quarter of the time.
pub fn random_scheme_cell(r: &mut Rand, dim: usize, max_rank: usize) -> SchemeCell {
    let height = if dim > 0 && r.gen_bool(0.25) { dim - 1 } else { dim };
    let mut s = random_scheme(r, height, max_rank);
    if height == dim && !s.tops().contains(&dim) {
        let mut tops = s.tops().to_vec();
        let i = r.gen_range(0..tops.len());
        tops[i] = dim;
        s = PastingScheme::new(tops, s.bottoms().to_vec()).expect("raising a top keeps validity");
    }
    SchemeCell::new(s, dim).expect("height within dimension")
}

/// A supply of random cells over some carrier, able to produce a cell with a prescribed source.
pub trait CellSource: Carrier {
    fn rng(&mut self) -> &mut Rand;
    fn max_rank(&self) -> usize;
    fn any(&mut self, dim: usize) -> Self::Cell;
    /// A `k`-cell whose source at the dimension of `e` is `e`.
    fn with_source(&mut self, e: &Self::Cell, k: usize) -> Self::Cell;
}

/// A globular set that grows fresh cells when asked for ones it lacks.
pub struct Grower<'r> {
    pub set: GlobularSet,
    pub rng: &'r mut Rand,
    /// Probability of reusing an existing cell when one fits.
    pub reuse: f64,
    pub max_rank: usize,
}

impl<'r> Grower<'r> {
    pub fn new(rng: &'r mut Rand, max_dim: usize, max_rank: usize) -> Self {
        Grower {
            set: GlobularSet::empty(max_dim),
            rng,
            reuse: 0.5,
            max_rank,
        }
    }

    fn fresh(&mut self, dim: usize, bounds: Option<(CellRef, CellRef)>) -> CellRef {
        let name = format!("x{dim}_{}", self.set.count(dim));
        self.set.push(dim, name, bounds.map(|(s, t)| (s.index, t.index)))
    }

    fn pick(&mut self, candidates: Vec<CellRef>) -> Option<CellRef> {
        if candidates.is_empty() || !self.rng.gen_bool(self.reuse) {
            return None;
        }
        Some(candidates[self.rng.gen_range(0..candidates.len())])
    }

    /// A cell with the same boundary as `c`.
    pub fn parallel_to(&mut self, c: CellRef) -> CellRef {
        if c.dim == 0 {
            return self.any(0);
        }
        let (s, t) = (self.set.src(c), self.set.tgt(c));
        let cands: Vec<CellRef> = self
            .set
            .cells(c.dim)
            .filter(|&x| self.set.src(x) == s && self.set.tgt(x) == t)
            .collect();
        if let Some(x) = self.pick(cands) {
            return x;
        }
        self.fresh(c.dim, Some((s, t)))
    }
}

impl Carrier for Grower<'_> {
    type Cell = CellRef;
    fn dim(&self, c: &CellRef) -> usize {
        c.dim
    }
    fn src(&self, c: &CellRef) -> CellRef {
        self.set.src(*c)
    }
    fn tgt(&self, c: &CellRef) -> CellRef {
        self.set.tgt(*c)
    }
}

impl CellSource for Grower<'_> {
    fn rng(&mut self) -> &mut Rand {
        self.rng
    }

    fn max_rank(&self) -> usize {
        self.max_rank
    }

    fn any(&mut self, dim: usize) -> CellRef {
        let all: Vec<CellRef> = self.set.cells(dim).collect();
        if let Some(c) = self.pick(all) {
            return c;
        }
        if dim == 0 {
            return self.fresh(0, None);
        }
        let s = self.any(dim - 1);
        let t = self.parallel_to(s);
        self.fresh(dim, Some((s, t)))
    }

    fn with_source(&mut self, e: &CellRef, k: usize) -> CellRef {
        let e = *e;
        if k == e.dim {
            return e;
        }
        let cands: Vec<CellRef> = self.set.cells(k).filter(|&x| self.set.src_at(x, e.dim) == e).collect();
        if let Some(x) = self.pick(cands) {
            return x;
        }
        let below = self.with_source(&e, k - 1);
        let other = self.parallel_to(below);
        self.fresh(k, Some((below, other)))
    }
}

impl<S: Carrier + ?Sized> Carrier for &mut S {
    type Cell = S::Cell;
    fn dim(&self, c: &S::Cell) -> usize {
        (**self).dim(c)
    }
    fn src(&self, c: &S::Cell) -> S::Cell {
        (**self).src(c)
    }
    fn tgt(&self, c: &S::Cell) -> S::Cell {
        (**self).tgt(c)
    }
    fn src_at(&self, c: &S::Cell, m: usize) -> S::Cell {
        (**self).src_at(c, m)
    }
    fn tgt_at(&self, c: &S::Cell, m: usize) -> S::Cell {
        (**self).tgt_at(c, m)
    }
}

impl<S: CellSource + ?Sized> CellSource for &mut S {
    fn rng(&mut self) -> &mut Rand {
        (**self).rng()
    }
    fn max_rank(&self) -> usize {
        (**self).max_rank()
    }
    fn any(&mut self, dim: usize) -> S::Cell {
        (**self).any(dim)
    }
    fn with_source(&mut self, e: &S::Cell, k: usize) -> S::Cell {
        (**self).with_source(e, k)
    }
}

/// Random diagrams over a source, themselves a source of cells one level up.
pub struct Lift<S>(pub S);

impl<S: CellSource> Carrier for Lift<S> {
    type Cell = Diagram<S::Cell>;
    fn dim(&self, d: &Self::Cell) -> usize {
        d.dim()
    }
    fn src(&self, d: &Self::Cell) -> Self::Cell {
        Diagrams(&self.0).src(d)
    }
    fn tgt(&self, d: &Self::Cell) -> Self::Cell {
        Diagrams(&self.0).tgt(d)
    }
    fn src_at(&self, d: &Self::Cell, m: usize) -> Self::Cell {
        Diagrams(&self.0).src_at(d, m)
    }
    fn tgt_at(&self, d: &Self::Cell, m: usize) -> Self::Cell {
        Diagrams(&self.0).tgt_at(d, m)
    }
}

impl<S: CellSource> CellSource for Lift<S> {
    fn rng(&mut self) -> &mut Rand {
        self.0.rng()
    }

    fn max_rank(&self) -> usize {
        self.0.max_rank()
    }

    fn any(&mut self, dim: usize) -> Self::Cell {
        let rank = self.0.max_rank();
        let shape = random_scheme_cell(self.0.rng(), dim, rank);
        diagram(&mut self.0, &shape)
    }

    fn with_source(&mut self, e: &Self::Cell, k: usize) -> Self::Cell {
        diagram_with_source(&mut self.0, e, k)
    }
}

/// A random diagram of the given shape.
pub fn diagram<S: CellSource>(s: &mut S, k: &SchemeCell) -> Diagram<S::Cell> {
    let mut tops = vec![s.any(k.tops()[0])];
    let mut bottoms = Vec::new();
    for i in 1..=k.rank() {
        let e = s.tgt_at(&tops[i - 1], k.bottoms()[i - 1]);
        let next = s.with_source(&e, k.tops()[i]);
        bottoms.push(e);
        tops.push(next);
    }
    Diagram {
        shape: k.clone(),
        tops,
        bottoms,
    }
}

/// A `k`-dimensional diagram whose source boundary at `e.dim()` is `e`.
pub fn diagram_with_source<S: CellSource>(s: &mut S, e: &Diagram<S::Cell>, k: usize) -> Diagram<S::Cell> {
    let b = e.dim();
    if k == b {
        return e.clone();
    }
    let max_rank = s.max_rank();
    let mut kt = Vec::new();
    let mut kb = Vec::new();
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    for (j, (x, &h)) in e.tops.iter().zip(e.shape.tops()).enumerate() {
        if j > 0 {
            kb.push(e.shape.bottoms()[j - 1]);
            bottoms.push(e.bottoms[j - 1].clone());
        }
        if h < b || s.rng().gen_bool(0.2) {
            kt.push(h);
            tops.push(x.clone());
            continue;
        }
        // a component over the column: tops above b, inner bottoms at least b
        let rank = s.rng().gen_range(0..=max_rank);
        let (ct, cb) = random_rows(s.rng(), rank, b + 1, k, b);
        let mut prev = s.with_source(x, ct[0]);
        kt.push(ct[0]);
        tops.push(prev.clone());
        for i in 1..ct.len() {
            let bot = s.tgt_at(&prev, cb[i - 1]);
            prev = s.with_source(&bot, ct[i]);
            kb.push(cb[i - 1]);
            bottoms.push(bot);
            kt.push(ct[i]);
            tops.push(prev.clone());
        }
    }
    Diagram {
        shape: SchemeCell::from_rows(kt, kb, k).expect("extension is a valid scheme"),
        tops,
        bottoms,
    }
}

/// An outer diagram of inner diagrams satisfying the boundary conditions.
pub fn nested<S: CellSource>(s: &mut S, dim: usize) -> Diagram<Diagram<S::Cell>> {
    let rank = s.max_rank();
    let outer = random_scheme_cell(s.rng(), dim, rank);
    let mut lift = Lift(s);
    diagram(&mut lift, &outer)
}

/// Forgets labels: the shape-level copy of a nested diagram.
pub fn to_shapes(d: &Diagram<Diagram<CellRef>>) -> Diagram<Diagram<usize>> {
    d.map(|inner| inner.map(|c| c.dim))
}

/// An instruction of arity `k` whose boundary at `e.dim()` is `e` (`e` must have the matching arity).
pub fn instr_over(k: &SchemeCell, e: &Instr) -> Instr {
    if k.dim() == e.dim() {
        return e.clone();
    }
    let below = instr_over(&k.boundary(k.dim() - 1).expect("positive dimension"), e);
    kappa(&below, &below, k).expect("contraction over equal boundaries")
}

/// A random term of arity exactly `k`, possibly with unnormalized substitutions.
pub fn random_term_of_arity(r: &mut Rand, k: &SchemeCell, budget: usize) -> Instr {
    let n = k.dim();
    if budget == 0 || n == 0 || r.gen_bool(0.4) {
        return sp(k);
    }
    let base = random_term_of_arity(r, &k.boundary(n - 1).expect("positive dimension"), budget - 1);
    kappa(&base, &base, k).expect("contraction over equal boundaries")
}

/// A random unnormalized term of dimension `n`.
pub fn random_raw_term(r: &mut Rand, n: usize, max_rank: usize, budget: usize) -> Instr {
    let roll: f64 = r.gen();
    if roll < 0.15 {
        return Instr::unit(n);
    }
    if budget == 0 || roll < 0.5 {
        let k = random_scheme_cell(r, n, max_rank);
        return random_term_of_arity(r, &k, budget.saturating_sub(1));
    }
    let head = if r.gen_bool(0.2) {
        Instr::unit(n)
    } else {
        random_raw_term(r, n, max_rank, budget - 1)
    };
    let args = random_args(r, head.arity(), max_rank, budget - 1);
    subst_raw(&head, &args).expect("arguments built to fit")
}

/// A diagram of instructions of the given shape with matching boundaries.
pub fn random_args(r: &mut Rand, k: &SchemeCell, max_rank: usize, budget: usize) -> Diagram<Instr> {
    let mut tops = vec![random_raw_term(r, k.tops()[0], max_rank, budget)];
    let mut bottoms = Vec::new();
    for i in 1..=k.rank() {
        let b = k.bottoms()[i - 1];
        let e = L1.tgt_at(&tops[i - 1], b);
        let shape = extend_shape(r, e.arity(), k.tops()[i], max_rank);
        let next = if r.gen_bool(0.3) {
            Instr::unit(k.tops()[i]).clone()
        } else {
            instr_over(&shape, &e)
        };
        // a unit only fits when the boundary is itself a unit
        let next = if next.is_unit() && L1.src_at(&next, b) != e {
            instr_over(&shape, &e)
        } else {
            next
        };
        bottoms.push(e);
        tops.push(next);
    }
    Diagram {
        shape: k.clone(),
        tops,
        bottoms,
    }
}

/// A random `k`-dimensional scheme whose boundary at `e.dim()` is `e`.
pub fn extend_shape(r: &mut Rand, e: &SchemeCell, k: usize, max_rank: usize) -> SchemeCell {
    let b = e.dim();
    if k == b {
        return e.clone();
    }
    let mut kt = Vec::new();
    let mut kb = Vec::new();
    for (j, &h) in e.tops().iter().enumerate() {
        if j > 0 {
            kb.push(e.bottoms()[j - 1]);
        }
        if h < b || r.gen_bool(0.2) {
            kt.push(h);
            continue;
        }
        let rank = r.gen_range(0..=max_rank);
        let (ct, cb) = random_rows(r, rank, b + 1, k, b);
        for (i, t) in ct.into_iter().enumerate() {
            if i > 0 {
                kb.push(cb[i - 1]);
            }
            kt.push(t);
        }
    }
    SchemeCell::from_rows(kt, kb, k).expect("extension is a valid scheme")
}

/// An element of the doubly nested construction: an outer instruction, an instruction
/// diagram over its arity, and a nested cell diagram whose inner shapes are the arities
/// of those instructions.
#[derive(Debug, Clone)]
pub struct TwoLevel {
    pub head: Instr,
    pub args: Diagram<Instr>,
    pub cells: Diagram<Diagram<CellRef>>,
}

pub fn two_level(g: &mut Grower<'_>, dim: usize) -> TwoLevel {
    let cells = nested(g, dim);
    let head = random_term_of_arity(g.rng, &cells.shape, 2);
    let mut tops = vec![random_term_of_arity(g.rng, &cells.tops[0].shape, 2)];
    let mut bottoms = Vec::new();
    for i in 1..cells.tops.len() {
        let e = L1.tgt_at(&tops[i - 1], cells.shape.bottoms()[i - 1]);
        tops.push(instr_over(&cells.tops[i].shape, &e));
        bottoms.push(e);
    }
    let args = Diagram {
        shape: cells.shape.clone(),
        tops,
        bottoms,
    };
    TwoLevel { head, args, cells }
}

/// A random pasting of dimension 1 or 2 over a carrier whose positive-dimensional
/// generators are all marked.
pub fn marked_pasting(seed: u64, max_rank: usize, carrier_depth: usize) -> (MarkedCarrier, MCell) {
    let mut r = rng(seed);
    let mut g = Grower::new(&mut r, 2, max_rank);
    let dim = 1 + (seed % 2) as usize;
    let shape = random_scheme_cell(g.rng, dim, max_rank);
    let d = diagram(&mut g, &shape);
    let phi = random_term_of_arity(g.rng, &shape, 1);
    let marks: Vec<CellRef> = (1..=2).flat_map(|k| g.set.cells(k).collect::<Vec<_>>()).collect();
    let x = extend_with_marks(&g.set, &marks, carrier_depth).expect("positive-dimensional marks");
    let c = xi(&phi, &d.map(|c| x.gen(*c))).expect("well-typed pasting");
    (x, c)
}

/// A composite whose instruction has degenerate arity, over an unmarked carrier.
pub fn degenerate_cell(seed: u64) -> (MarkedCarrier, MCell) {
    let mut r = rng(seed);
    let n = 1 + (seed % 3) as usize;
    let mut g = Grower::new(&mut r, n, 3);
    let shape = SchemeCell::new(random_scheme(g.rng, n - 1, 3), n).expect("height below dimension");
    let d = diagram(&mut g, &shape);
    let phi = random_term_of_arity(g.rng, &shape, 2);
    let x = MarkedCarrier::free(&g.set);
    let c = xi(&phi, &d.map(|c| x.gen(*c))).expect("well-typed pasting");
    (x, c)
}

/// A diagram with an identity column at the returned index, and an instruction of its arity.
pub fn unit_law_instance(seed: u64) -> (MarkedCarrier, Instr, Diagram<MCell>, usize) {
    let mut r = rng(seed);
    let n = 1 + (seed % 2) as usize;
    let mut g = Grower::new(&mut r, n, 3);
    let shape = loop {
        let k = random_scheme_cell(g.rng, n, 3);
        if k.tops().contains(&n) {
            break k;
        }
    };
    let d = diagram(&mut g, &shape);
    let full: Vec<usize> = (0..=shape.rank()).filter(|&j| shape.tops()[j] == n).collect();
    let j = full[g.rng.gen_range(0..full.len())];
    let y = g.tgt(&d.tops[j]);
    let x = MarkedCarrier::free(&g.set);
    let mut tops: Vec<MCell> = d.tops.iter().map(|c| x.gen(*c)).collect();
    let mut bottoms: Vec<MCell> = d.bottoms.iter().map(|c| x.gen(*c)).collect();
    let mut kt = shape.tops().to_vec();
    let mut kb = shape.bottoms().to_vec();
    tops.insert(j + 1, id_cell(&x.gen(y)));
    bottoms.insert(j, x.gen(y));
    kt.insert(j + 1, n);
    kb.insert(j, n - 1);
    let k = SchemeCell::from_rows(kt, kb, n).expect("inserting an identity column keeps validity");
    let phi = random_term_of_arity(g.rng, &k, 2);
    (
        x,
        phi,
        Diagram {
            shape: k,
            tops,
            bottoms,
        },
        j + 1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strict::validate_diagram;

    #[test]
    fn nested_diagrams_are_valid() {
        let mut r = rng(7);
        for _ in 0..50 {
            let mut g = Grower::new(&mut r, 3, 3);
            let d = nested(&mut g, 3);
            for inner in &d.tops {
                validate_diagram(&g.set, inner).unwrap();
            }
            g.set.check_globular().unwrap();
        }
    }

    #[test]
    fn extension_has_requested_boundary() {
        let mut r = rng(3);
        for _ in 0..200 {
            let e = random_scheme_cell(&mut r, 1, 3);
            let k = extend_shape(&mut r, &e, 3, 2);
            assert_eq!(k.boundary(1).unwrap(), e);
        }
    }
}
