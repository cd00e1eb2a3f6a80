//! Free weak omega-categories on a globular set, with optional formal inverses.
//!
//! Cells are terms: generators, formal inverse data for marked cells, and
//! composites `(instruction, diagram)` whose contraction head is never
//! flattened into its arguments. Evaluation of a substitution distributes it
//! over its arguments, which makes the algebra laws hold on the nose.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::globular::{CellRef, GlobError, GlobularSet, Presentation};
use crate::instruction::{
    args_from_sexp, coherence_instr, comp_instr, delta_instr, id_instr, instr_from_sexp, kappa, mu_instr, sp,
    suspend_instr, Instr, InstrError, Kind,
};
use crate::scheme::SchemeCell;
use crate::sexpr::{self, Sexp, SyntaxError};
use crate::strict::{
    delta_diagram, diagram_boundary, split_tops, validate_diagram, Carrier, DeltaVariant, Diagram, DiagramError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeakError {
    #[error("instruction arity {arity} does not match diagram shape {shape}")]
    ArityShapeMismatch { arity: String, shape: String },
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("column {0} does not hold an identity cell")]
    NotIdentityAtSlot(usize),
    #[error("cell {0} carries no formal inverse")]
    NotMarkable(String),
    #[error("cannot mark the 0-cell {0}")]
    MarkDimZero(String),
    #[error("lifting square does not commute: {0}")]
    SquareDoesNotCommute(String),
    #[error("cell {0} is not a 0-cell")]
    NotObject(String),
    #[error("malformed cell: {0}")]
    Malformed(String),
    #[error(transparent)]
    Instr(#[from] InstrError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Glob(#[from] GlobError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A cell of the free (marked) weak omega-category.
#[derive(Clone)]
pub struct MCell(Arc<MNode>);

struct MNode {
    kind: MKind,
    dim: usize,
    level: usize,
    hash: u64,
    bounds: OnceLock<(MCell, MCell)>,
}

#[derive(Clone, PartialEq, Eq)]
pub enum MKind {
    Gen {
        name: String,
        cell: CellRef,
    },
    /// Formal inverse of a marked cell.
    Inv(MCell),
    /// Formal cell `u ⊛ u⁻¹ -> id(s u)`.
    P(MCell),
    /// Formal cell `u⁻¹ ⊛ u -> id(t u)`.
    Q(MCell),
    /// Evaluation of a contraction instruction on a diagram.
    Comp(Instr, Diagram<MCell>),
}

impl PartialEq for MCell {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.dim == other.0.dim && self.0.kind == other.0.kind)
    }
}

impl Eq for MCell {}

impl Hash for MCell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for MCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MCell {
    fn mk(kind: MKind, dim: usize, level: usize, bounds: Option<(MCell, MCell)>) -> MCell {
        let mut h = DefaultHasher::new();
        dim.hash(&mut h);
        match &kind {
            MKind::Gen { name, cell } => (0u8, name, cell).hash(&mut h),
            MKind::Inv(u) => (1u8, u.0.hash).hash(&mut h),
            MKind::P(u) => (2u8, u.0.hash).hash(&mut h),
            MKind::Q(u) => (3u8, u.0.hash).hash(&mut h),
            MKind::Comp(phi, d) => {
                (4u8, phi).hash(&mut h);
                for x in &d.tops {
                    x.0.hash.hash(&mut h);
                }
            }
        }
        let lock = OnceLock::new();
        if let Some(b) = bounds {
            let _ = lock.set(b);
        }
        MCell(Arc::new(MNode {
            kind,
            dim,
            level,
            hash: h.finish(),
            bounds: lock,
        }))
    }

    pub fn kind(&self) -> &MKind {
        &self.0.kind
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Nesting of formal witness atoms: generators are level 0, `p`/`q` add one.
    pub fn level(&self) -> usize {
        self.0.level
    }

    fn bounds(&self) -> &(MCell, MCell) {
        self.0.bounds.get_or_init(|| match &self.0.kind {
            MKind::Gen { .. } => unreachable!("generator boundaries are set at construction"),
            MKind::Inv(u) => (u.tgt(), u.src()),
            MKind::P(u) => {
                let v = formal_inv(u);
                (comp_unchecked(u, &v), id_cell(&u.src()))
            }
            MKind::Q(u) => {
                let v = formal_inv(u);
                (comp_unchecked(&v, u), id_cell(&u.tgt()))
            }
            MKind::Comp(phi, d) => {
                let n = self.dim();
                let side = |target: bool| {
                    let f = if target { phi.tgt() } else { phi.src() };
                    let e = diagram_boundary(&Free, d, n - 1, target).expect("valid composite");
                    xi_unchecked(&f, &e)
                };
                (side(false), side(true))
            }
        })
    }

    /// One-step source; must not be called on 0-cells.
    pub fn src(&self) -> MCell {
        assert!(self.dim() > 0, "0-cell has no source");
        self.bounds().0.clone()
    }

    pub fn tgt(&self) -> MCell {
        assert!(self.dim() > 0, "0-cell has no target");
        self.bounds().1.clone()
    }

    pub fn as_comp(&self) -> Option<(&Instr, &Diagram<MCell>)> {
        match &self.0.kind {
            MKind::Comp(phi, d) => Some((phi, d)),
            _ => None,
        }
    }

    /// The cell under an identity composite `id(x)`.
    pub fn as_identity(&self) -> Option<&MCell> {
        match self.as_comp() {
            Some((phi, d)) if d.tops.len() == 1 && *phi == id_instr(self.dim()) => Some(&d.tops[0]),
            _ => None,
        }
    }

    /// Full-dimensional labels of a composite; a non-composite is its own label.
    pub fn fdl(&self) -> Vec<MCell> {
        match self.as_comp() {
            Some((_, d)) => d.full_labels().into_iter().cloned().collect(),
            None => vec![self.clone()],
        }
    }

    /// Term size, counting shared subterms once per occurrence.
    pub fn size(&self) -> usize {
        match &self.0.kind {
            MKind::Gen { .. } => 1,
            MKind::Inv(u) | MKind::P(u) | MKind::Q(u) => 1 + u.size(),
            MKind::Comp(_, d) => 1 + d.tops.iter().map(MCell::size).sum::<usize>(),
        }
    }

    /// Generators occurring anywhere in the term, boundaries excluded.
    pub fn generators(&self, out: &mut HashSet<MCell>) {
        match &self.0.kind {
            MKind::Gen { .. } => {
                out.insert(self.clone());
            }
            MKind::Inv(u) | MKind::P(u) | MKind::Q(u) => u.generators(out),
            MKind::Comp(_, d) => d.tops.iter().for_each(|x| x.generators(out)),
        }
    }
}

/// Carrier view of cells; all structure lives in the cells themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct Free;

impl Carrier for Free {
    type Cell = MCell;
    fn dim(&self, c: &MCell) -> usize {
        c.dim()
    }
    fn src(&self, c: &MCell) -> MCell {
        c.src()
    }
    fn tgt(&self, c: &MCell) -> MCell {
        c.tgt()
    }
}

fn formal_inv(u: &MCell) -> MCell {
    MCell::mk(MKind::Inv(u.clone()), u.dim(), u.level(), None)
}

fn formal_p(u: &MCell) -> MCell {
    MCell::mk(MKind::P(u.clone()), u.dim() + 1, u.level() + 1, None)
}

fn formal_q(u: &MCell) -> MCell {
    MCell::mk(MKind::Q(u.clone()), u.dim() + 1, u.level() + 1, None)
}

/// Evaluation without validating the diagram.
pub(crate) fn xi_unchecked(phi: &Instr, u: &Diagram<MCell>) -> MCell {
    match phi.kind() {
        Kind::Unit(_) => u.tops[0].clone(),
        Kind::Contract { .. } => MCell::mk(MKind::Comp(phi.clone(), u.clone()), phi.dim(), 0, None),
        Kind::Subst { head, args } => {
            let inner: Vec<SchemeCell> = args.tops.iter().map(|a| a.arity().clone()).collect();
            let pieces = split_tops(&Free, &args.shape, &inner, u).expect("diagram fits the arity");
            let tops: Vec<MCell> = args.tops.iter().zip(&pieces).map(|(a, p)| xi_unchecked(a, p)).collect();
            let bottoms = args
                .shape
                .bottoms()
                .iter()
                .enumerate()
                .map(|(i, &b)| Free.tgt_at(&tops[i], b))
                .collect();
            xi_unchecked(
                head,
                &Diagram {
                    shape: args.shape.clone(),
                    tops,
                    bottoms,
                },
            )
        }
    }
}

/// The structure map of the free algebra.
pub fn xi(phi: &Instr, u: &Diagram<MCell>) -> Result<MCell, WeakError> {
    if phi.arity() != &u.shape {
        return Err(WeakError::ArityShapeMismatch {
            arity: phi.arity().to_string(),
            shape: u.shape.to_string(),
        });
    }
    validate_diagram(&Free, u)?;
    Ok(xi_unchecked(phi, u))
}

pub fn id_cell(x: &MCell) -> MCell {
    let n = x.dim() + 1;
    xi_unchecked(
        &id_instr(n),
        &Diagram::eta(x.clone(), n - 1).with_dim(n).expect("valid"),
    )
}

fn comp_unchecked(u: &MCell, v: &MCell) -> MCell {
    let n = u.dim();
    let d = Diagram {
        shape: SchemeCell::from_rows(vec![n, n], vec![n - 1], n).expect("valid"),
        tops: vec![u.clone(), v.clone()],
        bottoms: vec![u.tgt()],
    };
    xi_unchecked(&comp_instr(n), &d)
}

/// `u ⊛ v` along the codimension-one boundary.
pub fn comp_cells(u: &MCell, v: &MCell) -> Result<MCell, WeakError> {
    if u.dim() == 0 || u.dim() != v.dim() || u.tgt() != v.src() {
        return Err(WeakError::BoundaryMismatch(format!("cannot compose {u} with {v}")));
    }
    Ok(comp_unchecked(u, v))
}

/// The standard pasting operation of arity `k`.
pub fn paste(k: &SchemeCell, d: &Diagram<MCell>) -> Result<MCell, WeakError> {
    xi(&sp(k), d)
}

/// The cell `ξ(phi, d) -> ξ(phi2, d)` given by the contraction one level up.
pub fn coherence_cell(phi: &Instr, phi2: &Instr, d: &Diagram<MCell>) -> Result<MCell, WeakError> {
    let c = coherence_instr(phi, phi2, &d.shape)?;
    validate_diagram(&Free, d)?;
    Ok(xi_unchecked(&c, &d.with_dim(d.dim() + 1).map_err(DiagramError::from)?))
}

/// Removes the identity at column `i`, leaving the cell under it in its place when needed.
pub fn delta_exact(d: &Diagram<MCell>, i: usize) -> Result<Diagram<MCell>, WeakError> {
    let x = d
        .tops
        .get(i)
        .and_then(MCell::as_identity)
        .filter(|_| d.shape.tops()[i] == d.dim())
        .ok_or(WeakError::NotIdentityAtSlot(i))?
        .clone();
    Ok(delta_diagram(&Free, d, i, DeltaVariant::Exact, Some(&x))?)
}

/// The cell `ξ(phi, u) -> ξ(δⁱphi, δⁱu)` removing an identity at column `i`.
pub fn unit_law_cell(phi: &Instr, u: &Diagram<MCell>, i: usize) -> Result<MCell, WeakError> {
    let du = delta_exact(u, i)?;
    let n = u.dim();
    let mut chi = crate::instruction::unit_args(&u.shape);
    chi.tops[i] = id_instr(n);
    let merged = mu_instr(phi, &chi)?;
    let dphi = delta_instr(phi, i)?;
    if merged.src() != dphi.src() || merged.tgt() != dphi.tgt() || merged.arity() != dphi.arity() {
        return Err(InstrError::NotParallel.into());
    }
    coherence_cell(&merged, &dphi, &du)
}

/// An instruction-diagram pair with matching arity and shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LCell {
    pub instr: Instr,
    pub diagram: Diagram<MCell>,
}

impl LCell {
    pub fn new(instr: Instr, diagram: Diagram<MCell>) -> Result<Self, WeakError> {
        if instr.arity() != &diagram.shape {
            return Err(WeakError::ArityShapeMismatch {
                arity: instr.arity().to_string(),
                shape: diagram.shape.to_string(),
            });
        }
        validate_diagram(&Free, &diagram)?;
        Ok(LCell { instr, diagram })
    }

    pub fn eta(x: &MCell) -> Self {
        LCell {
            instr: Instr::unit(x.dim()),
            diagram: Diagram::eta(x.clone(), x.dim()),
        }
    }

    pub fn dim(&self) -> usize {
        self.instr.dim()
    }

    /// Componentwise boundary.
    pub fn boundary(&self, target: bool) -> Result<LCell, WeakError> {
        let n = self.dim();
        Ok(LCell {
            instr: self.instr.boundary(target)?,
            diagram: diagram_boundary(&Free, &self.diagram, n - 1, target)?,
        })
    }

    pub fn eval(&self) -> MCell {
        xi_unchecked(&self.instr, &self.diagram)
    }
}

/// Fills a parallel pair of instruction cells over a diagram `v` with a contraction.
pub fn lift_along_ar(source: &LCell, target: &LCell, v: &Diagram<MCell>) -> Result<LCell, WeakError> {
    let n = v.dim();
    if n == 0 {
        return Err(WeakError::SquareDoesNotCommute("0-dimensional diagram".into()));
    }
    let want = v.shape.boundary(n - 1).map_err(DiagramError::from)?;
    if source.instr.arity() != &want || target.instr.arity() != &want {
        return Err(WeakError::SquareDoesNotCommute(
            "arities differ from the shape boundary".into(),
        ));
    }
    if diagram_boundary(&Free, v, n - 1, false)? != source.diagram
        || diagram_boundary(&Free, v, n - 1, true)? != target.diagram
    {
        return Err(WeakError::SquareDoesNotCommute("diagram boundary differs".into()));
    }
    let instr = kappa(&source.instr, &target.instr, &v.shape).map_err(|e| match e {
        InstrError::NotParallel => WeakError::SquareDoesNotCommute("instructions not parallel".into()),
        e => e.into(),
    })?;
    LCell::new(instr, v.clone())
}

/// A free weak omega-category on a globular set, with formal inverse data for marked cells.
#[derive(Debug, Clone)]
pub struct MarkedCarrier {
    base: GlobularSet,
    gens: Vec<Vec<MCell>>,
    marks: HashSet<CellRef>,
    depth: usize,
}

pub fn extend_with_marks(base: &GlobularSet, marks: &[CellRef], depth: usize) -> Result<MarkedCarrier, WeakError> {
    let mut gens: Vec<Vec<MCell>> = Vec::new();
    for d in 0..=base.max_dim() {
        let row = base
            .cells(d)
            .map(|c| {
                let bounds = (d > 0).then(|| {
                    (
                        gens[d - 1][base.src(c).index].clone(),
                        gens[d - 1][base.tgt(c).index].clone(),
                    )
                });
                MCell::mk(
                    MKind::Gen {
                        name: base.name(c).to_string(),
                        cell: c,
                    },
                    d,
                    0,
                    bounds,
                )
            })
            .collect();
        gens.push(row);
    }
    for m in marks {
        if m.dim == 0 {
            return Err(WeakError::MarkDimZero(base.name(*m).to_string()));
        }
    }
    Ok(MarkedCarrier {
        base: base.clone(),
        gens,
        marks: marks.iter().copied().collect(),
        depth,
    })
}

impl MarkedCarrier {
    pub fn free(base: &GlobularSet) -> Self {
        extend_with_marks(base, &[], 0).expect("no marks")
    }

    /// Loads the JSON presentation, honouring optional `marks` and `depth`.
    pub fn from_json(text: &str) -> Result<Self, WeakError> {
        let p: Presentation = serde_json::from_str(text).map_err(|e| GlobError::Presentation(e.to_string()))?;
        let base = crate::globular::validate_globular_set(&p)?;
        let marks = p
            .marks
            .iter()
            .flatten()
            .map(|name| base.find_any(name))
            .collect::<Result<Vec<_>, _>>()?;
        extend_with_marks(&base, &marks, p.depth.unwrap_or(1))
    }

    pub fn base(&self) -> &GlobularSet {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gen(&self, c: CellRef) -> MCell {
        self.gens[c.dim][c.index].clone()
    }

    pub fn generators(&self) -> impl Iterator<Item = &MCell> {
        self.gens.iter().flatten()
    }

    pub fn gen_named(&self, name: &str) -> Result<MCell, WeakError> {
        Ok(self.gen(self.base.find_any(name)?))
    }

    pub fn is_marked(&self, c: CellRef) -> bool {
        self.marks.contains(&c)
    }

    /// Whether formal inverse data exists for `u`.
    pub fn is_markable(&self, u: &MCell) -> bool {
        match u.kind() {
            MKind::Gen { cell, .. } => self.marks.contains(cell) && self.depth > 0,
            MKind::P(_) | MKind::Q(_) => u.level() < self.depth,
            _ => false,
        }
    }

    fn check(&self, u: &MCell) -> Result<(), WeakError> {
        if self.is_markable(u) {
            Ok(())
        } else {
            Err(WeakError::NotMarkable(u.to_string()))
        }
    }

    pub fn inv(&self, u: &MCell) -> Result<MCell, WeakError> {
        self.check(u)?;
        Ok(formal_inv(u))
    }

    pub fn p(&self, u: &MCell) -> Result<MCell, WeakError> {
        self.check(u)?;
        Ok(formal_p(u))
    }

    pub fn q(&self, u: &MCell) -> Result<MCell, WeakError> {
        self.check(u)?;
        Ok(formal_q(u))
    }

    /// Whether a term only uses formal atoms this carrier provides.
    pub fn contains(&self, u: &MCell) -> bool {
        match u.kind() {
            MKind::Gen { cell, .. } => {
                cell.dim <= self.base.max_dim()
                    && cell.index < self.base.count(cell.dim)
                    && &self.gens[cell.dim][cell.index] == u
            }
            MKind::Inv(x) | MKind::P(x) | MKind::Q(x) => self.is_markable(x) && self.contains(x),
            MKind::Comp(_, d) => d.tops.iter().all(|x| self.contains(x)),
        }
    }

    pub fn parse_cell(&self, text: &str) -> Result<MCell, WeakError> {
        self.cell_from_sexp(&sexpr::parse(text)?)
    }

    pub fn cell_from_sexp(&self, e: &Sexp) -> Result<MCell, WeakError> {
        if let Some(name) = e.atom() {
            return self.gen_named(name);
        }
        let items = e.list().unwrap_or(&[]);
        let bad = || WeakError::Malformed(e.to_string());
        match (e.head(), items.len()) {
            (Some("inv"), 2) => self.inv(&self.cell_from_sexp(&items[1])?),
            (Some("p"), 2) => self.p(&self.cell_from_sexp(&items[1])?),
            (Some("q"), 2) => self.q(&self.cell_from_sexp(&items[1])?),
            (Some("id"), 2) => Ok(id_cell(&self.cell_from_sexp(&items[1])?)),
            (Some("comp"), 3) => comp_cells(&self.cell_from_sexp(&items[1])?, &self.cell_from_sexp(&items[2])?),
            (Some("xi"), 3) => {
                let phi = instr_from_sexp(&items[1])?;
                let list = items[2]
                    .list()
                    .filter(|_| items[2].head() == Some("args"))
                    .ok_or_else(bad)?;
                let mut err = None;
                let d = args_from_sexp(
                    &list[1..],
                    phi.arity(),
                    |x| {
                        self.cell_from_sexp(x).map_err(|e| {
                            let msg = e.to_string();
                            err = Some(e);
                            InstrError::Malformed(msg)
                        })
                    },
                    |c: &MCell, b| Free.tgt_at(c, b),
                );
                let d = match (d, err) {
                    (Ok(d), _) => d,
                    (Err(_), Some(e)) => return Err(e),
                    (Err(e), None) => return Err(e.into()),
                };
                xi(&phi, &d)
            }
            _ => Err(bad()),
        }
    }
}

impl Carrier for MarkedCarrier {
    type Cell = MCell;
    fn dim(&self, c: &MCell) -> usize {
        c.dim()
    }
    fn src(&self, c: &MCell) -> MCell {
        c.src()
    }
    fn tgt(&self, c: &MCell) -> MCell {
        c.tgt()
    }
}

impl MCell {
    pub fn to_sexp(&self) -> Sexp {
        let a = |s: &str| Sexp::Atom(s.to_string());
        match self.kind() {
            MKind::Gen { name, .. } => a(name),
            MKind::Inv(u) => Sexp::List(vec![a("inv"), u.to_sexp()]),
            MKind::P(u) => Sexp::List(vec![a("p"), u.to_sexp()]),
            MKind::Q(u) => Sexp::List(vec![a("q"), u.to_sexp()]),
            MKind::Comp(phi, d) => {
                let n = self.dim();
                if d.tops.len() == 1 && *phi == id_instr(n) {
                    Sexp::List(vec![a("id"), d.tops[0].to_sexp()])
                } else if d.tops.len() == 2 && *phi == comp_instr(n) {
                    Sexp::List(vec![a("comp"), d.tops[0].to_sexp(), d.tops[1].to_sexp()])
                } else {
                    let mut items = vec![a("args")];
                    items.extend(d.tops.iter().map(MCell::to_sexp));
                    Sexp::List(vec![a("xi"), phi.to_sexp(), Sexp::List(items)])
                }
            }
        }
    }
}

impl fmt::Display for MCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

/// Rebuilds a term with generators replaced by `f`; composites are re-evaluated.
pub fn rebuild(c: &MCell, f: &dyn Fn(&MCell) -> MCell) -> MCell {
    match c.kind() {
        MKind::Gen { .. } => f(c),
        MKind::Inv(u) => formal_inv(&rebuild(u, f)),
        MKind::P(u) => formal_p(&rebuild(u, f)),
        MKind::Q(u) => formal_q(&rebuild(u, f)),
        MKind::Comp(phi, d) => {
            let tops: Vec<MCell> = d.tops.iter().map(|x| rebuild(x, f)).collect();
            let bottoms = d
                .shape
                .bottoms()
                .iter()
                .enumerate()
                .map(|(i, &b)| Free.tgt_at(&tops[i], b))
                .collect();
            xi_unchecked(
                phi,
                &Diagram {
                    shape: d.shape.clone(),
                    tops,
                    bottoms,
                },
            )
        }
    }
}

/// An algebra for the weak omega-category monad, given by its evaluation map.
pub trait Algebra: Carrier {
    fn eval(&self, phi: &Instr, d: &Diagram<Self::Cell>) -> Result<Self::Cell, WeakError>;

    fn identity(&self, x: &Self::Cell) -> Result<Self::Cell, WeakError> {
        let n = self.dim(x) + 1;
        let d = Diagram::eta(x.clone(), n - 1).with_dim(n).map_err(DiagramError::from)?;
        self.eval(&id_instr(n), &d)
    }

    fn compose(&self, u: &Self::Cell, v: &Self::Cell) -> Result<Self::Cell, WeakError> {
        let n = self.dim(u);
        if n == 0 || self.tgt(u) != self.src(v) {
            return Err(WeakError::BoundaryMismatch("composite".into()));
        }
        let d = Diagram {
            shape: SchemeCell::from_rows(vec![n, n], vec![n - 1], n).map_err(DiagramError::from)?,
            tops: vec![u.clone(), v.clone()],
            bottoms: vec![self.tgt(u)],
        };
        self.eval(&comp_instr(n), &d)
    }

    fn paste(&self, k: &SchemeCell, d: &Diagram<Self::Cell>) -> Result<Self::Cell, WeakError> {
        self.eval(&sp(k), d)
    }
}

impl Algebra for Free {
    fn eval(&self, phi: &Instr, d: &Diagram<MCell>) -> Result<MCell, WeakError> {
        xi(phi, d)
    }
}

impl Algebra for MarkedCarrier {
    fn eval(&self, phi: &Instr, d: &Diagram<MCell>) -> Result<MCell, WeakError> {
        xi(phi, d)
    }
}

/// The hom weak omega-category between two objects: cells shift down one dimension.
pub struct HomAlgebra<'a, A: Algebra> {
    base: &'a A,
    x: A::Cell,
    y: A::Cell,
}

pub fn hom_cat<'a, A: Algebra>(base: &'a A, x: &A::Cell, y: &A::Cell) -> Result<HomAlgebra<'a, A>, WeakError> {
    for c in [x, y] {
        if base.dim(c) != 0 {
            return Err(WeakError::NotObject(format!("{c:?}")));
        }
    }
    Ok(HomAlgebra {
        base,
        x: x.clone(),
        y: y.clone(),
    })
}

impl<A: Algebra> HomAlgebra<'_, A> {
    /// Whether a cell of the base lies in this hom.
    pub fn contains(&self, c: &A::Cell) -> bool {
        self.base.dim(c) >= 1 && self.base.src_at(c, 0) == self.x && self.base.tgt_at(c, 0) == self.y
    }
}

impl<A: Algebra> Carrier for HomAlgebra<'_, A> {
    type Cell = A::Cell;
    fn dim(&self, c: &A::Cell) -> usize {
        self.base.dim(c) - 1
    }
    fn src(&self, c: &A::Cell) -> A::Cell {
        self.base.src(c)
    }
    fn tgt(&self, c: &A::Cell) -> A::Cell {
        self.base.tgt(c)
    }
}

impl<A: Algebra> Algebra for HomAlgebra<'_, A> {
    fn eval(&self, phi: &Instr, d: &Diagram<A::Cell>) -> Result<A::Cell, WeakError> {
        for c in d.tops.iter() {
            if !self.contains(c) {
                return Err(WeakError::BoundaryMismatch(format!("{c:?} is outside the hom")));
            }
        }
        self.base.eval(&suspend_instr(phi), &d.suspend())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::globular::validate_globular_set;

    fn carrier() -> MarkedCarrier {
        let p: Presentation = serde_json::from_str(
            r#"{"max_dim":1,"cells":{"0":["a","b","c"],"1":["f","g"]},
               "src":{"1":{"f":"a","g":"b"}},"tgt":{"1":{"f":"b","g":"c"}},"marks":["f"],"depth":2}"#,
        )
        .unwrap();
        let g = validate_globular_set(&p).unwrap();
        let f = g.find(1, "f").unwrap();
        extend_with_marks(&g, &[f], 2).unwrap()
    }

    #[test]
    fn identity_boundaries() {
        let x = carrier();
        let a = x.gen_named("a").unwrap();
        let i = id_cell(&a);
        assert_eq!((i.src(), i.tgt()), (a.clone(), a));
    }

    #[test]
    fn composite_boundaries_and_formal_atoms() {
        let x = carrier();
        let (f, g) = (x.gen_named("f").unwrap(), x.gen_named("g").unwrap());
        let fg = comp_cells(&f, &g).unwrap();
        assert_eq!(fg.src(), f.src());
        assert_eq!(fg.tgt(), g.tgt());
        let p = x.p(&f).unwrap();
        assert_eq!(p.src(), comp_cells(&f, &x.inv(&f).unwrap()).unwrap());
        assert!(x.p(&p).is_ok());
        assert!(x.p(&x.p(&p).unwrap()).is_err());
        assert!(x.inv(&g).is_err());
    }

    #[test]
    fn right_unitor_endpoints() {
        let x = carrier();
        let f = x.gen_named("f").unwrap();
        let b = f.tgt();
        let d = Diagram {
            shape: SchemeCell::from_rows(vec![1, 1], vec![0], 1).unwrap(),
            tops: vec![f.clone(), id_cell(&b)],
            bottoms: vec![b.clone()],
        };
        let c = unit_law_cell(&comp_instr(1), &d, 1).unwrap();
        assert_eq!(c.src(), comp_cells(&f, &id_cell(&b)).unwrap());
        // the target is the contraction of arity [1], not the unit instruction
        let target = xi(&delta_instr(&comp_instr(1), 1).unwrap(), &Diagram::eta(f.clone(), 1)).unwrap();
        assert_eq!(c.tgt(), target);
        assert_ne!(target, f);
    }

    #[test]
    fn cell_syntax_round_trip() {
        let x = carrier();
        for t in [
            "(comp f g)",
            "(p f)",
            "(id (inv f))",
            "(xi (sp [1,1,1 / 0,0]@1) (args f g (id c)))",
        ] {
            let c = x.parse_cell(t).unwrap();
            assert_eq!(x.parse_cell(&c.to_string()).unwrap(), c);
        }
    }
}
