//! Pasting diagrams over an arbitrary cell universe and the free strict
//! omega-category monad acting on them.

use std::fmt;

use thiserror::Error;

use crate::globular::{CellRef, GlobMap, GlobularSet};
use crate::scheme::{groups, SchemeCell, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("entry {index} has dimension {got}, shape wants {want}")]
    ShapeMismatch { index: String, want: usize, got: usize },
    #[error("boundary mismatch at {0}")]
    BoundaryMismatch(String),
    #[error("column {0} does not hold an identity cell")]
    NotIdentity(usize),
    #[error("precondition of the {0} variant fails at column {1}")]
    PreconditionViolated(&'static str, usize),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("malformed diagram: {0}")]
    Syntax(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// A universe of cells with dimensions, one-step boundaries and decidable equality.
pub trait Carrier {
    type Cell: Clone + Eq + std::hash::Hash + fmt::Debug;

    fn dim(&self, c: &Self::Cell) -> usize;
    /// One-step source; only called on cells of positive dimension.
    fn src(&self, c: &Self::Cell) -> Self::Cell;
    fn tgt(&self, c: &Self::Cell) -> Self::Cell;

    fn src_at(&self, c: &Self::Cell, m: usize) -> Self::Cell {
        let mut c = c.clone();
        while self.dim(&c) > m {
            c = self.src(&c);
        }
        c
    }

    fn tgt_at(&self, c: &Self::Cell, m: usize) -> Self::Cell {
        let mut c = c.clone();
        while self.dim(&c) > m {
            c = self.tgt(&c);
        }
        c
    }
}

/// The terminal globular set: a cell is just its dimension.
#[derive(Debug, Clone, Copy, Default)]
pub struct Point;

impl Carrier for Point {
    type Cell = usize;
    fn dim(&self, c: &usize) -> usize {
        *c
    }
    fn src(&self, c: &usize) -> usize {
        c - 1
    }
    fn tgt(&self, c: &usize) -> usize {
        c - 1
    }
}

impl Carrier for GlobularSet {
    type Cell = CellRef;
    fn dim(&self, c: &CellRef) -> usize {
        c.dim
    }
    fn src(&self, c: &CellRef) -> CellRef {
        GlobularSet::src(self, *c)
    }
    fn tgt(&self, c: &CellRef) -> CellRef {
        GlobularSet::tgt(self, *c)
    }
}

/// A scheme-shaped table of cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram<T> {
    pub shape: SchemeCell,
    pub tops: Vec<T>,
    pub bottoms: Vec<T>,
}

impl<T: Clone> Diagram<T> {
    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// Single-column diagram `[x]` of shape `[dim x]`.
    pub fn eta(x: T, dim: usize) -> Self {
        Diagram {
            shape: SchemeCell::column(dim, dim),
            tops: vec![x],
            bottoms: vec![],
        }
    }

    /// Same table regarded in a higher (or lower) ambient dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Self, SchemeError> {
        Ok(Diagram {
            shape: self.shape.with_dim(dim)?,
            tops: self.tops.clone(),
            bottoms: self.bottoms.clone(),
        })
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> Diagram<U> {
        Diagram {
            shape: self.shape.clone(),
            tops: self.tops.iter().map(&mut f).collect(),
            bottoms: self.bottoms.iter().map(&mut f).collect(),
        }
    }

    pub fn try_map<U, E, F: FnMut(&T) -> Result<U, E>>(&self, mut f: F) -> Result<Diagram<U>, E> {
        Ok(Diagram {
            shape: self.shape.clone(),
            tops: self.tops.iter().map(&mut f).collect::<Result<_, _>>()?,
            bottoms: self.bottoms.iter().map(&mut f).collect::<Result<_, _>>()?,
        })
    }

    /// Entries of full dimension.
    pub fn full_labels(&self) -> Vec<&T> {
        let n = self.dim();
        self.tops
            .iter()
            .zip(self.shape.tops())
            .filter(|(_, &k)| k == n)
            .map(|(u, _)| u)
            .collect()
    }

    pub fn suspend(&self) -> Self {
        Diagram {
            shape: self.shape.suspend(),
            tops: self.tops.clone(),
            bottoms: self.bottoms.clone(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Diagram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tops: Vec<String> = self.tops.iter().map(|x| x.to_string()).collect();
        let bots: Vec<String> = self.bottoms.iter().map(|x| x.to_string()).collect();
        if bots.is_empty() {
            write!(f, "[{}]", tops.join(", "))
        } else {
            write!(f, "[{} / {}]", tops.join(", "), bots.join(", "))
        }
    }
}

/// Splits at `sep` outside any brackets or parentheses.
fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Reads `[u0, u1 / b1]` or `[..]@n`, resolving each entry by name, then validates.
/// Without `@n` the dimension is the largest entry dimension. A trailing `: SHAPE`
/// must agree with the entries' shape.
pub fn parse_diagram<C: Carrier>(
    cx: &C,
    text: &str,
    mut resolve: impl FnMut(&str) -> Option<C::Cell>,
) -> Result<Diagram<C::Cell>, DiagramError> {
    if let [body, shape] = split_top_level(text, ':')[..] {
        let want = crate::scheme::parse_scheme_cell(shape)?;
        let d = parse_diagram(cx, body, resolve)?;
        if d.shape.scheme() != want.scheme() {
            return Err(DiagramError::BoundaryMismatch(format!(
                "entries have shape {}, annotation says {}",
                d.shape, want
            )));
        }
        let d = if shape.contains('@') {
            d.with_dim(want.dim())?
        } else {
            d
        };
        validate_diagram(cx, &d)?;
        return Ok(d);
    }
    let text = text.trim();
    let (body, dim) = match text.rfind(']') {
        Some(end) if text.starts_with('[') => {
            let rest = text[end + 1..].trim();
            let dim = if rest.is_empty() {
                None
            } else {
                let n = rest
                    .strip_prefix('@')
                    .ok_or_else(|| DiagramError::Syntax(format!("trailing `{rest}`")))?;
                Some(
                    n.trim()
                        .parse::<usize>()
                        .map_err(|e| DiagramError::Syntax(e.to_string()))?,
                )
            };
            (&text[1..end], dim)
        }
        _ => return Err(DiagramError::Syntax("expected `[`..`]`".into())),
    };
    let rows = split_top_level(body, '/');
    if rows.len() > 2 {
        return Err(DiagramError::Syntax("more than one `/`".into()));
    }
    let mut read = |row: &str| -> Result<Vec<C::Cell>, DiagramError> {
        if row.trim().is_empty() {
            return Ok(Vec::new());
        }
        split_top_level(row, ',')
            .into_iter()
            .map(|name| {
                let name = name.trim();
                resolve(name).ok_or_else(|| DiagramError::UnknownCell(name.to_string()))
            })
            .collect()
    };
    let tops = read(rows[0])?;
    let bottoms = if rows.len() == 2 { read(rows[1])? } else { Vec::new() };
    if tops.is_empty() {
        return Err(DiagramError::Syntax("no entries".into()));
    }
    let kt: Vec<usize> = tops.iter().map(|u| cx.dim(u)).collect();
    let kb: Vec<usize> = bottoms.iter().map(|u| cx.dim(u)).collect();
    let dim = dim.unwrap_or_else(|| kt.iter().copied().max().unwrap_or(0));
    let shape = SchemeCell::from_rows(kt, kb, dim)?;
    let d = Diagram { shape, tops, bottoms };
    validate_diagram(cx, &d)?;
    Ok(d)
}

/// Checks dimensions and the gluing equations of a diagram.
pub fn validate_diagram<C: Carrier>(cx: &C, d: &Diagram<C::Cell>) -> Result<(), DiagramError> {
    let k = &d.shape;
    if d.tops.len() != k.tops().len() || d.bottoms.len() != k.bottoms().len() {
        return Err(DiagramError::ShapeMismatch {
            index: "length".into(),
            want: k.tops().len(),
            got: d.tops.len(),
        });
    }
    for (i, (u, &want)) in d.tops.iter().zip(k.tops()).enumerate() {
        let got = cx.dim(u);
        if got != want {
            return Err(DiagramError::ShapeMismatch {
                index: format!("top {i}"),
                want,
                got,
            });
        }
    }
    for (i, (b, &want)) in d.bottoms.iter().zip(k.bottoms()).enumerate() {
        let got = cx.dim(b);
        if got != want {
            return Err(DiagramError::ShapeMismatch {
                index: format!("bottom {}", i + 1),
                want,
                got,
            });
        }
        if &cx.tgt_at(&d.tops[i], want) != b || &cx.src_at(&d.tops[i + 1], want) != b {
            return Err(DiagramError::BoundaryMismatch(format!("bottom {}", i + 1)));
        }
    }
    Ok(())
}

/// The source (`target == false`) or target m-boundary.
pub fn diagram_boundary<C: Carrier>(
    cx: &C,
    d: &Diagram<C::Cell>,
    m: usize,
    target: bool,
) -> Result<Diagram<C::Cell>, DiagramError> {
    let shape = d.shape.boundary(m)?;
    let comps = d.shape.transversal_components(m)?;
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    for (g, (lo, hi)) in groups(d.shape.tops(), &comps).into_iter().enumerate() {
        if g > 0 {
            bottoms.push(d.bottoms[lo - 1].clone());
        }
        let cell = if target {
            cx.tgt_at(&d.tops[hi], m)
        } else {
            cx.src_at(&d.tops[lo], m)
        };
        tops.push(cell);
    }
    Ok(Diagram { shape, tops, bottoms })
}

/// Applies a globular map entrywise.
pub fn map_t(f: &GlobMap, d: &Diagram<CellRef>) -> Diagram<CellRef> {
    d.map(|c| f.apply(*c))
}

/// The shape of a diagram, as a diagram over the point.
pub fn shape_diagram(k: &SchemeCell) -> Diagram<usize> {
    Diagram {
        shape: k.clone(),
        tops: k.tops().to_vec(),
        bottoms: k.bottoms().to_vec(),
    }
}

/// Cells of TX: diagrams with diagram boundaries.
pub struct Diagrams<'a, C>(pub &'a C);

impl<C: Carrier> Carrier for Diagrams<'_, C> {
    type Cell = Diagram<C::Cell>;
    fn dim(&self, d: &Self::Cell) -> usize {
        d.dim()
    }
    fn src(&self, d: &Self::Cell) -> Self::Cell {
        diagram_boundary(self.0, d, d.dim() - 1, false).expect("positive dimension")
    }
    fn tgt(&self, d: &Self::Cell) -> Self::Cell {
        diagram_boundary(self.0, d, d.dim() - 1, true).expect("positive dimension")
    }
    fn src_at(&self, d: &Self::Cell, m: usize) -> Self::Cell {
        if d.dim() <= m {
            return d.clone();
        }
        diagram_boundary(self.0, d, m, false).expect("in range")
    }
    fn tgt_at(&self, d: &Self::Cell, m: usize) -> Self::Cell {
        if d.dim() <= m {
            return d.clone();
        }
        diagram_boundary(self.0, d, m, true).expect("in range")
    }
}

/// Where a column of a binary composite came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Left(usize),
    Right(usize),
    /// A column of height at most the gluing level shared by both sides.
    Shared(usize, usize),
}

/// Plan for gluing `a` to `b` along level `m`: origins of result tops and bottoms.
struct Splice {
    tops: Vec<Origin>,
    /// Bottom entries: `Left(i)`/`Right(i)` index bottoms of a side, `Shared(g, _)` is the
    /// boundary column `g` where the two halves of a group meet.
    bottoms: Vec<Origin>,
    shape: SchemeCell,
}

fn plan_splice(a: &SchemeCell, b: &SchemeCell, m: usize) -> Result<Splice, DiagramError> {
    let ea = a.boundary(m)?;
    let eb = b.boundary(m)?;
    if ea.scheme() != eb.scheme() {
        return Err(DiagramError::BoundaryMismatch(format!(
            "{} and {} do not meet along dimension {m}",
            a.scheme(),
            b.scheme()
        )));
    }
    let ga = groups(a.tops(), &a.transversal_components(m)?);
    let gb = groups(b.tops(), &b.transversal_components(m)?);
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    let mut kt = Vec::new();
    let mut kb = Vec::new();
    for (g, (&(alo, ahi), &(blo, bhi))) in ga.iter().zip(&gb).enumerate() {
        if g > 0 {
            bottoms.push(Origin::Left(alo - 1));
            kb.push(a.bottoms()[alo - 1]);
        }
        let a_comp = ahi > alo || a.tops()[alo] > m;
        let b_comp = bhi > blo || b.tops()[blo] > m;
        let push_left =
            |tops: &mut Vec<Origin>, bottoms: &mut Vec<Origin>, kt: &mut Vec<usize>, kb: &mut Vec<usize>| {
                for i in alo..=ahi {
                    if i > alo {
                        bottoms.push(Origin::Left(i - 1));
                        kb.push(a.bottoms()[i - 1]);
                    }
                    tops.push(Origin::Left(i));
                    kt.push(a.tops()[i]);
                }
            };
        match (a_comp, b_comp) {
            (false, false) => {
                tops.push(Origin::Shared(alo, blo));
                kt.push(a.tops()[alo]);
            }
            (true, false) => push_left(&mut tops, &mut bottoms, &mut kt, &mut kb),
            (false, true) | (true, true) => {
                if a_comp {
                    push_left(&mut tops, &mut bottoms, &mut kt, &mut kb);
                    bottoms.push(Origin::Shared(g, ahi));
                    kb.push(m);
                }
                for i in blo..=bhi {
                    if i > blo {
                        bottoms.push(Origin::Right(i - 1));
                        kb.push(b.bottoms()[i - 1]);
                    }
                    tops.push(Origin::Right(i));
                    kt.push(b.tops()[i]);
                }
            }
        }
    }
    let dim = a.dim().max(b.dim());
    Ok(Splice {
        tops,
        bottoms,
        shape: SchemeCell::from_rows(kt, kb, dim)?,
    })
}

/// Composite of `a` and `b` along their common m-boundary.
pub fn compose_along<C: Carrier>(
    cx: &C,
    a: &Diagram<C::Cell>,
    b: &Diagram<C::Cell>,
    m: usize,
) -> Result<Diagram<C::Cell>, DiagramError> {
    let ta = diagram_boundary(cx, a, m, true)?;
    let sb = diagram_boundary(cx, b, m, false)?;
    if ta.tops != sb.tops || ta.bottoms != sb.bottoms {
        return Err(DiagramError::BoundaryMismatch(format!("composite along dimension {m}")));
    }
    let plan = plan_splice(&a.shape, &b.shape, m)?;
    let pick = |o: &Origin, top: bool| match *o {
        Origin::Left(i) => {
            if top {
                a.tops[i].clone()
            } else {
                a.bottoms[i].clone()
            }
        }
        Origin::Right(i) => {
            if top {
                b.tops[i].clone()
            } else {
                b.bottoms[i].clone()
            }
        }
        Origin::Shared(i, j) => {
            if top {
                a.tops[i].clone()
            } else {
                cx.tgt_at(&a.tops[j], m)
            }
        }
    };
    Ok(Diagram {
        tops: plan.tops.iter().map(|o| pick(o, true)).collect(),
        bottoms: plan.bottoms.iter().map(|o| pick(o, false)).collect(),
        shape: plan.shape,
    })
}

/// Inverse of `compose_along` for known factor shapes.
pub fn split_along<C: Carrier>(
    cx: &C,
    a: &SchemeCell,
    b: &SchemeCell,
    m: usize,
    whole: &Diagram<C::Cell>,
) -> Result<(Diagram<C::Cell>, Diagram<C::Cell>), DiagramError> {
    let plan = plan_splice(a, b, m)?;
    if plan.shape.scheme() != whole.shape.scheme() {
        return Err(DiagramError::BoundaryMismatch(format!(
            "{} is not the composite shape {}",
            whole.shape.scheme(),
            plan.shape.scheme()
        )));
    }
    let mut at: Vec<Option<C::Cell>> = vec![None; a.tops().len()];
    let mut ab: Vec<Option<C::Cell>> = vec![None; a.bottoms().len()];
    let mut bt: Vec<Option<C::Cell>> = vec![None; b.tops().len()];
    let mut bb: Vec<Option<C::Cell>> = vec![None; b.bottoms().len()];
    for (o, u) in plan.tops.iter().zip(&whole.tops) {
        match *o {
            Origin::Left(i) => at[i] = Some(u.clone()),
            Origin::Right(i) => bt[i] = Some(u.clone()),
            Origin::Shared(i, j) => {
                at[i] = Some(u.clone());
                bt[j] = Some(u.clone());
            }
        }
    }
    for (o, u) in plan.bottoms.iter().zip(&whole.bottoms) {
        match *o {
            Origin::Left(i) => ab[i] = Some(u.clone()),
            Origin::Right(i) => bb[i] = Some(u.clone()),
            Origin::Shared(..) => {}
        }
    }
    // Columns of height m on one side facing a component on the other are boundaries of it;
    // bottoms between groups are shared.
    let ga = groups(a.tops(), &a.transversal_components(m)?);
    let gb = groups(b.tops(), &b.transversal_components(m)?);
    for (g, (&(alo, ahi), &(blo, bhi))) in ga.iter().zip(&gb).enumerate() {
        if g > 0 {
            let shared = ab[alo - 1].clone();
            bb[blo - 1] = shared;
        }
        if at[alo].is_none() {
            at[alo] = Some(cx.src_at(bt[blo].as_ref().expect("filled"), m));
        }
        if bt[blo].is_none() {
            bt[blo] = Some(cx.tgt_at(at[ahi].as_ref().expect("filled"), m));
        }
        let _ = bhi;
    }
    let unwrap = |v: Vec<Option<C::Cell>>| v.into_iter().map(|x| x.expect("every column is assigned")).collect();
    Ok((
        Diagram {
            shape: a.clone(),
            tops: unwrap(at),
            bottoms: unwrap(ab),
        },
        Diagram {
            shape: b.clone(),
            tops: unwrap(bt),
            bottoms: unwrap(bb),
        },
    ))
}

/// Blocks of the outer shape separated by its lowest bottom entries.
fn blocks(k: &SchemeCell) -> (usize, Vec<(usize, usize)>) {
    let m = *k.bottoms().iter().min().expect("positive rank");
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &b) in k.bottoms().iter().enumerate() {
        if b == m {
            out.push((start, i));
            start = i + 1;
        }
    }
    out.push((start, k.rank()));
    (m, out)
}

fn sub_shape(k: &SchemeCell, lo: usize, hi: usize) -> SchemeCell {
    SchemeCell::from_rows(k.tops()[lo..=hi].to_vec(), k.bottoms()[lo..hi].to_vec(), k.dim())
        .expect("sub-table of a valid table")
}

/// Flattens a diagram of diagrams whose top entries have the outer shape's heights.
pub fn mu_t<C: Carrier>(cx: &C, outer: &Diagram<Diagram<C::Cell>>) -> Result<Diagram<C::Cell>, DiagramError> {
    let tx = Diagrams(cx);
    validate_diagram(&tx, outer)?;
    let flat = flatten_tops(cx, &outer.shape, &outer.tops)?;
    Ok(flat.with_dim(outer.dim())?)
}

fn flatten_tops<C: Carrier>(
    cx: &C,
    k: &SchemeCell,
    tops: &[Diagram<C::Cell>],
) -> Result<Diagram<C::Cell>, DiagramError> {
    if k.rank() == 0 {
        return Ok(tops[0].clone());
    }
    let (m, bl) = blocks(k);
    let mut acc: Option<Diagram<C::Cell>> = None;
    for (lo, hi) in bl {
        let part = flatten_tops(cx, &sub_shape(k, lo, hi), &tops[lo..=hi])?;
        acc = Some(match acc {
            None => part,
            Some(prev) => compose_along(cx, &prev, &part, m)?,
        });
    }
    Ok(acc.expect("at least one block"))
}

/// The shape-level multiplication: splices the tables of a diagram of schemes.
pub fn mu_shapes(k: &SchemeCell, inner: &[SchemeCell]) -> Result<SchemeCell, DiagramError> {
    let flat = flatten_shapes(k, inner)?;
    Ok(flat.with_dim(k.dim())?)
}

fn flatten_shapes(k: &SchemeCell, inner: &[SchemeCell]) -> Result<SchemeCell, DiagramError> {
    if k.rank() == 0 {
        return Ok(inner[0].clone());
    }
    let (m, bl) = blocks(k);
    let mut acc: Option<SchemeCell> = None;
    for (lo, hi) in bl {
        let part = flatten_shapes(&sub_shape(k, lo, hi), &inner[lo..=hi])?;
        acc = Some(match acc {
            None => part,
            Some(prev) => plan_splice(&prev, &part, m)?.shape,
        });
    }
    Ok(acc.expect("at least one block"))
}

/// Cuts a flattened diagram back into pieces of the given inner shapes (tops only;
/// bottom pieces are boundaries of their neighbours).
pub fn split_tops<C: Carrier>(
    cx: &C,
    k: &SchemeCell,
    inner: &[SchemeCell],
    whole: &Diagram<C::Cell>,
) -> Result<Vec<Diagram<C::Cell>>, DiagramError> {
    if k.rank() == 0 {
        return Ok(vec![whole.with_dim(inner[0].dim())?]);
    }
    let (m, bl) = blocks(k);
    let shapes: Vec<SchemeCell> = bl
        .iter()
        .map(|&(lo, hi)| flatten_shapes(&sub_shape(k, lo, hi), &inner[lo..=hi]))
        .collect::<Result<_, _>>()?;
    // prefix composites, so that whole = prefix[last]
    let mut prefix = vec![shapes[0].clone()];
    for s in &shapes[1..] {
        let next = plan_splice(prefix.last().unwrap(), s, m)?.shape;
        prefix.push(next);
    }
    let mut pieces: Vec<Diagram<C::Cell>> = Vec::with_capacity(shapes.len());
    let mut rest = whole.with_dim(prefix.last().unwrap().dim())?;
    for j in (1..shapes.len()).rev() {
        let (left, right) = split_along(cx, &prefix[j - 1], &shapes[j], m, &rest)?;
        pieces.push(right);
        rest = left;
    }
    pieces.push(rest);
    pieces.reverse();
    let mut out = Vec::new();
    for ((lo, hi), piece) in bl.into_iter().zip(pieces) {
        out.extend(split_tops(cx, &sub_shape(k, lo, hi), &inner[lo..=hi], &piece)?);
    }
    Ok(out)
}

/// Full inverse of `mu_t`: rebuilds the outer diagram of pieces.
pub fn unflatten<C: Carrier>(
    cx: &C,
    k: &SchemeCell,
    inner: &[SchemeCell],
    whole: &Diagram<C::Cell>,
) -> Result<Diagram<Diagram<C::Cell>>, DiagramError> {
    let tops = split_tops(cx, k, inner, whole)?;
    let bottoms = k
        .bottoms()
        .iter()
        .enumerate()
        .map(|(i, &b)| diagram_boundary(cx, &tops[i], b, true))
        .collect::<Result<_, _>>()?;
    Ok(Diagram {
        shape: k.clone(),
        tops,
        bottoms,
    })
}

/// Identity on the shape: the outer diagram `[[u0], .., [ur] / [b1], ..]`.
pub fn eta_each<T: Clone, C: Carrier<Cell = T>>(cx: &C, d: &Diagram<T>) -> Diagram<Diagram<T>> {
    Diagram {
        shape: d.shape.clone(),
        tops: d.tops.iter().map(|u| Diagram::eta(u.clone(), cx.dim(u))).collect(),
        bottoms: d.bottoms.iter().map(|u| Diagram::eta(u.clone(), cx.dim(u))).collect(),
    }
}

/// Three variants of deleting a full-dimensional column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaVariant {
    /// Column holds an identity on the given cell.
    Exact,
    /// Column is replaced by its source.
    Plus,
    /// Column is replaced by its target.
    Minus,
}

/// Deletes column `i` per `variant`; for `Exact`, `unit` is the cell the identity sits on.
pub fn delta_diagram<C: Carrier>(
    cx: &C,
    d: &Diagram<C::Cell>,
    i: usize,
    variant: DeltaVariant,
    unit: Option<&C::Cell>,
) -> Result<Diagram<C::Cell>, DiagramError> {
    use crate::scheme::{delta_case, DeltaCase};
    let k = &d.shape;
    let shape = k.delta(i)?;
    let n = k.dim();
    let r = k.rank();
    let low = |j: usize| k.bottoms()[j - 1] + 1 < n;
    let case = delta_case(k, i);
    let (replacement, case) = match variant {
        DeltaVariant::Exact => {
            let x = unit.ok_or(DiagramError::NotIdentity(i))?.clone();
            (x, case)
        }
        DeltaVariant::Plus => {
            if !(i == r || low(i + 1)) {
                return Err(DiagramError::PreconditionViolated("plus", i));
            }
            (cx.src(&d.tops[i]), case)
        }
        DeltaVariant::Minus => {
            if !(i == 0 || low(i)) {
                return Err(DiagramError::PreconditionViolated("minus", i));
            }
            (cx.tgt(&d.tops[i]), case)
        }
    };
    let mut tops = d.tops.clone();
    let mut bottoms = d.bottoms.clone();
    match case {
        DeltaCase::RemoveLeft => {
            tops.remove(i);
            bottoms.remove(i - 1);
        }
        DeltaCase::RemoveRight => {
            tops.remove(i);
            bottoms.remove(i);
        }
        DeltaCase::Lower => tops[i] = replacement,
    }
    Ok(Diagram { shape, tops, bottoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::parse_scheme_cell;

    fn k(t: &str) -> SchemeCell {
        parse_scheme_cell(t).unwrap()
    }

    #[test]
    fn vertical_composite_of_columns() {
        let a = shape_diagram(&k("[2]@2"));
        let c = compose_along(&Point, &a, &a, 1).unwrap();
        assert_eq!(c.shape, k("[2,2 / 1]@2"));
    }

    #[test]
    fn whisker_then_vertical() {
        // (alpha whiskered by h) then (g whiskered by gamma) is alpha beside gamma
        let a = shape_diagram(&k("[2,1 / 0]@2"));
        let b = shape_diagram(&k("[1,2 / 0]@2"));
        let c = compose_along(&Point, &a, &b, 1).unwrap();
        assert_eq!(c.shape, k("[2,2 / 0]@2"));
        let (x, y) = split_along(&Point, &a.shape, &b.shape, 1, &c).unwrap();
        assert_eq!((x, y), (a, b));
    }
}
