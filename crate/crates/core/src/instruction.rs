//! Pasting instructions: the cells of the initial contraction operad, as terms
//! built from units, contractions and substitution, kept in normal form.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::scheme::{parse_scheme_cell, SchemeCell, SchemeError};
use crate::sexpr::{self, Sexp, SyntaxError};
use crate::strict::{diagram_boundary, mu_shapes, unflatten, validate_diagram, Carrier, Diagram, DiagramError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstrError {
    #[error("source and target are not parallel")]
    NotParallel,
    #[error("arity {got} does not match required {want}")]
    ArityMismatch { want: String, got: String },
    #[error("0-dimensional instruction has no boundary")]
    DimZero,
    #[error("column {0} is not full-dimensional")]
    NotFullDimensional(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("malformed term: {0}")]
    Malformed(String),
}

/// A pasting instruction. Cheap to clone; equality is structural on normal forms.
#[derive(Clone)]
pub struct Instr(Arc<Node>);

struct Node {
    kind: Kind,
    arity: SchemeCell,
    hash: u64,
    bounds: OnceLock<(Instr, Instr)>,
}

#[derive(Clone, PartialEq, Eq)]
pub enum Kind {
    Unit(usize),
    Contract { src: Instr, tgt: Instr },
    Subst { head: Instr, args: Diagram<Instr> },
}

impl PartialEq for Instr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.arity == other.0.arity && self.0.kind == other.0.kind)
    }
}

impl Eq for Instr {}

impl Hash for Instr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn digest(kind: &Kind, arity: &SchemeCell) -> u64 {
    let mut h = DefaultHasher::new();
    arity.hash(&mut h);
    match kind {
        Kind::Unit(n) => (0u8, n).hash(&mut h),
        Kind::Contract { src, tgt } => (1u8, src.0.hash, tgt.0.hash).hash(&mut h),
        Kind::Subst { head, args } => {
            2u8.hash(&mut h);
            head.0.hash.hash(&mut h);
            for a in &args.tops {
                a.0.hash.hash(&mut h);
            }
        }
    }
    h.finish()
}

impl Instr {
    fn mk(kind: Kind, arity: SchemeCell) -> Instr {
        let hash = digest(&kind, &arity);
        Instr(Arc::new(Node {
            kind,
            arity,
            hash,
            bounds: OnceLock::new(),
        }))
    }

    /// The unit instruction of dimension n.
    pub fn unit(n: usize) -> Instr {
        Instr::mk(Kind::Unit(n), SchemeCell::column(n, n))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn arity(&self) -> &SchemeCell {
        &self.0.arity
    }

    pub fn dim(&self) -> usize {
        self.0.arity.dim()
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.0.kind, Kind::Unit(_))
    }

    pub fn is_contract(&self) -> bool {
        matches!(self.0.kind, Kind::Contract { .. })
    }

    fn bounds(&self) -> &(Instr, Instr) {
        self.0.bounds.get_or_init(|| match &self.0.kind {
            Kind::Unit(n) => (Instr::unit(n - 1), Instr::unit(n - 1)),
            Kind::Contract { src, tgt } => (src.clone(), tgt.clone()),
            Kind::Subst { head, args } => {
                let n = self.dim();
                let side = |target: bool| {
                    let h = if target { head.tgt() } else { head.src() };
                    let a = diagram_boundary(&L1, args, n - 1, target).expect("valid substitution");
                    reduce(h, a)
                };
                (side(false), side(true))
            }
        })
    }

    /// Source; panics on a 0-dimensional instruction (see `boundary`).
    pub fn src(&self) -> Instr {
        self.bounds().0.clone()
    }

    pub fn tgt(&self) -> Instr {
        self.bounds().1.clone()
    }

    pub fn boundary(&self, target: bool) -> Result<Instr, InstrError> {
        if self.dim() == 0 {
            return Err(InstrError::DimZero);
        }
        Ok(if target { self.tgt() } else { self.src() })
    }

    /// Total node count, used as a size measure.
    pub fn size(&self) -> usize {
        match &self.0.kind {
            Kind::Unit(_) => 1,
            Kind::Contract { src, tgt } => 1 + src.size() + tgt.size(),
            Kind::Subst { head, args } => 1 + head.size() + args.tops.iter().map(Instr::size).sum::<usize>(),
        }
    }
}

/// The instruction carrier; boundaries are the instruction boundaries.
#[derive(Debug, Clone, Copy, Default)]
pub struct L1;

impl Carrier for L1 {
    type Cell = Instr;
    fn dim(&self, c: &Instr) -> usize {
        c.dim()
    }
    fn src(&self, c: &Instr) -> Instr {
        c.src()
    }
    fn tgt(&self, c: &Instr) -> Instr {
        c.tgt()
    }
}

/// Arity of a substitution: the splice of the argument arities.
fn subst_arity(args: &Diagram<Instr>) -> Result<SchemeCell, DiagramError> {
    let inner: Vec<SchemeCell> = args.tops.iter().map(|a| a.arity().clone()).collect();
    mu_shapes(&args.shape, &inner)
}

fn all_units(args: &Diagram<Instr>) -> bool {
    args.tops.iter().all(Instr::is_unit)
}

/// Root rewriting for a substitution whose parts are already normal.
fn reduce(head: Instr, args: Diagram<Instr>) -> Instr {
    match head.kind() {
        Kind::Unit(_) => args.tops[0].clone(),
        _ if all_units(&args) => head,
        Kind::Subst { head: h2, args: a2 } => {
            let inner: Vec<SchemeCell> = a2.tops.iter().map(|a| a.arity().clone()).collect();
            let pieces = unflatten(&L1, &a2.shape, &inner, &args).expect("arguments fit the substituted arity");
            let tops: Vec<Instr> = a2
                .tops
                .iter()
                .zip(pieces.tops)
                .map(|(a, p)| reduce(a.clone(), p))
                .collect();
            let bottoms = a2
                .shape
                .bottoms()
                .iter()
                .enumerate()
                .map(|(i, &b)| L1.tgt_at(&tops[i], b))
                .collect();
            reduce(
                h2.clone(),
                Diagram {
                    shape: a2.shape.clone(),
                    tops,
                    bottoms,
                },
            )
        }
        Kind::Contract { .. } => {
            let arity = subst_arity(&args).expect("arguments fit the head arity");
            Instr::mk(Kind::Subst { head, args }, arity)
        }
    }
}

/// Contraction cell `src -> tgt` of arity `k`.
pub fn kappa(src: &Instr, tgt: &Instr, k: &SchemeCell) -> Result<Instr, InstrError> {
    let n = k.dim();
    if n == 0 {
        return Err(InstrError::DimZero);
    }
    let want = k.boundary(n - 1)?;
    for side in [src, tgt] {
        if side.arity() != &want {
            return Err(InstrError::ArityMismatch {
                want: want.to_string(),
                got: side.arity().to_string(),
            });
        }
    }
    if n >= 2 && (src.src() != tgt.src() || src.tgt() != tgt.tgt()) {
        return Err(InstrError::NotParallel);
    }
    Ok(Instr::mk(
        Kind::Contract {
            src: src.clone(),
            tgt: tgt.clone(),
        },
        k.clone(),
    ))
}

/// Substitution followed by normalization.
pub fn mu_instr(head: &Instr, args: &Diagram<Instr>) -> Result<Instr, InstrError> {
    if &args.shape != head.arity() {
        return Err(DiagramError::ShapeMismatch {
            index: format!("arity {}", head.arity()),
            want: head.dim(),
            got: args.dim(),
        }
        .into());
    }
    validate_diagram(&L1, args)?;
    Ok(reduce(head.clone(), args.clone()))
}

/// Builds a substitution node without rewriting, for exercising `normalize`.
pub fn subst_raw(head: &Instr, args: &Diagram<Instr>) -> Result<Instr, InstrError> {
    if &args.shape != head.arity() {
        return Err(InstrError::ArityMismatch {
            want: head.arity().to_string(),
            got: args.shape.to_string(),
        });
    }
    validate_diagram(&L1, args)?;
    let arity = subst_arity(args)?;
    Ok(Instr::mk(
        Kind::Subst {
            head: head.clone(),
            args: args.clone(),
        },
        arity,
    ))
}

/// Normalizes a term built with `subst_raw`; innermost subterms first.
pub fn normalize(t: &Instr) -> Instr {
    match t.kind() {
        Kind::Unit(_) => t.clone(),
        Kind::Contract { src, tgt } => {
            let (s, u) = (normalize(src), normalize(tgt));
            if &s == src && &u == tgt {
                t.clone()
            } else {
                Instr::mk(Kind::Contract { src: s, tgt: u }, t.arity().clone())
            }
        }
        Kind::Subst { head, args } => {
            let h = normalize(head);
            let a = normalize_args(args);
            reduce(h, a)
        }
    }
}

fn normalize_args(args: &Diagram<Instr>) -> Diagram<Instr> {
    let tops: Vec<Instr> = args.tops.iter().map(normalize).collect();
    let bottoms = args
        .shape
        .bottoms()
        .iter()
        .enumerate()
        .map(|(i, &b)| L1.tgt_at(&tops[i], b))
        .collect();
    Diagram {
        shape: args.shape.clone(),
        tops,
        bottoms,
    }
}

/// Normalizes outermost redexes first: collapses root substitutions before
/// looking inside. Reaches the same normal form as `normalize`.
pub fn normalize_outer_first(t: &Instr) -> Instr {
    match t.kind() {
        Kind::Subst { head, args } => {
            if let Kind::Unit(_) = head.kind() {
                return normalize_outer_first(&args.tops[0]);
            }
            if all_units(args) {
                return normalize_outer_first(head);
            }
            if let Kind::Subst { head: h2, args: a2 } = head.kind() {
                // reassociate raw, then continue from the root
                let inner: Vec<SchemeCell> = a2.tops.iter().map(|a| a.arity().clone()).collect();
                if let Ok(pieces) = unflatten(&L1, &a2.shape, &inner, args) {
                    let tops: Vec<Instr> = a2
                        .tops
                        .iter()
                        .zip(pieces.tops)
                        .map(|(a, p)| subst_raw(a, &p).expect("piece fits"))
                        .collect();
                    let bottoms = a2
                        .shape
                        .bottoms()
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| L1.tgt_at(&tops[i], b))
                        .collect();
                    let d = Diagram {
                        shape: a2.shape.clone(),
                        tops,
                        bottoms,
                    };
                    return normalize_outer_first(&subst_raw(h2, &d).expect("reassociation fits"));
                }
            }
            normalize(t)
        }
        _ => normalize(t),
    }
}

/// Equality of normal forms.
pub fn instr_equal(a: &Instr, b: &Instr) -> bool {
    normalize(a) == normalize(b)
}

/// The standard pasting instruction of a given arity.
pub fn sp(k: &SchemeCell) -> Instr {
    let n = k.dim();
    if k.rank() == 0 && k.tops()[0] == n {
        return Instr::unit(n);
    }
    let b = sp(&k.boundary(n - 1).expect("positive dimension"));
    kappa(&b, &b, k).expect("standard instruction is well typed")
}

/// `kappa(phi, phi2, k)` one dimension up, with `k` lifted to dimension n+1.
pub fn coherence_instr(phi: &Instr, phi2: &Instr, k: &SchemeCell) -> Result<Instr, InstrError> {
    if phi.arity() != k || phi2.arity() != k {
        return Err(InstrError::ArityMismatch {
            want: k.to_string(),
            got: format!("{} / {}", phi.arity(), phi2.arity()),
        });
    }
    if k.dim() >= 1 && (phi.src() != phi2.src() || phi.tgt() != phi2.tgt()) {
        return Err(InstrError::NotParallel);
    }
    kappa(phi, phi2, &k.with_dim(k.dim() + 1)?)
}

/// Contraction with the same boundaries and column `i` removed from the arity.
pub fn delta_instr(phi: &Instr, i: usize) -> Result<Instr, InstrError> {
    let k = phi.arity();
    if k.dim() == 0 || k.tops().get(i) != Some(&k.dim()) {
        return Err(InstrError::NotFullDimensional(i));
    }
    kappa(&phi.src(), &phi.tgt(), &k.delta(i)?)
}

pub fn suspend_instr(phi: &Instr) -> Instr {
    match phi.kind() {
        Kind::Unit(n) => Instr::unit(n + 1),
        Kind::Contract { src, tgt } => Instr::mk(
            Kind::Contract {
                src: suspend_instr(src),
                tgt: suspend_instr(tgt),
            },
            phi.arity().suspend(),
        ),
        Kind::Subst { head, args } => {
            let a = Diagram {
                shape: args.shape.suspend(),
                tops: args.tops.iter().map(suspend_instr).collect(),
                bottoms: args.bottoms.iter().map(suspend_instr).collect(),
            };
            Instr::mk(
                Kind::Subst {
                    head: suspend_instr(head),
                    args: a,
                },
                phi.arity().suspend(),
            )
        }
    }
}

/// `sp([n,n / n-1]@n)`, the binary composition instruction.
pub fn comp_instr(n: usize) -> Instr {
    sp(&SchemeCell::from_rows(vec![n, n], vec![n - 1], n).expect("valid"))
}

/// `sp([n-1]@n)`, the identity instruction.
pub fn id_instr(n: usize) -> Instr {
    sp(&SchemeCell::column(n - 1, n))
}

/// Units filling a diagram of the given shape.
pub fn unit_args(k: &SchemeCell) -> Diagram<Instr> {
    Diagram {
        shape: k.clone(),
        tops: k.tops().iter().map(|&h| Instr::unit(h)).collect(),
        bottoms: k.bottoms().iter().map(|&h| Instr::unit(h)).collect(),
    }
}

impl Instr {
    pub fn to_sexp(&self) -> Sexp {
        let a = |s: &str| Sexp::Atom(s.to_string());
        match self.kind() {
            Kind::Unit(n) => Sexp::List(vec![a("e"), a(&n.to_string())]),
            Kind::Contract { src, tgt } => {
                if *self == sp(self.arity()) {
                    Sexp::List(vec![a("sp"), a(&self.arity().to_string())])
                } else {
                    Sexp::List(vec![
                        a("kappa"),
                        src.to_sexp(),
                        tgt.to_sexp(),
                        a(&self.arity().to_string()),
                    ])
                }
            }
            Kind::Subst { head, args } => {
                let mut items = vec![a("args")];
                items.extend(args.tops.iter().map(Instr::to_sexp));
                Sexp::List(vec![a("mu"), head.to_sexp(), Sexp::List(items)])
            }
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

fn malformed(e: &Sexp) -> InstrError {
    InstrError::Malformed(e.to_string())
}

fn nat(e: &Sexp) -> Result<usize, InstrError> {
    e.atom().and_then(|s| s.parse().ok()).ok_or_else(|| malformed(e))
}

fn scheme_atom(e: &Sexp) -> Result<SchemeCell, InstrError> {
    Ok(parse_scheme_cell(e.atom().ok_or_else(|| malformed(e))?)?)
}

/// Reads an argument list `(args t0 t1 ..)` (bottoms, if given after `/`, are checked).
pub fn args_from_sexp<T, F>(
    items: &[Sexp],
    shape: &SchemeCell,
    mut read: F,
    bound: impl Fn(&T, usize) -> T,
) -> Result<Diagram<T>, InstrError>
where
    T: Clone + PartialEq,
    F: FnMut(&Sexp) -> Result<T, InstrError>,
{
    let split = items.iter().position(|x| x.atom() == Some("/"));
    let (top_items, bot_items) = match split {
        Some(p) => (&items[..p], Some(&items[p + 1..])),
        None => (items, None),
    };
    let tops: Vec<T> = top_items.iter().map(&mut read).collect::<Result<_, _>>()?;
    if tops.len() != shape.tops().len() {
        return Err(InstrError::Malformed(format!(
            "{} arguments for arity {}",
            tops.len(),
            shape
        )));
    }
    let bottoms: Vec<T> = shape
        .bottoms()
        .iter()
        .enumerate()
        .map(|(i, &b)| bound(&tops[i], b))
        .collect();
    if let Some(given) = bot_items {
        let given: Vec<T> = given.iter().map(&mut read).collect::<Result<_, _>>()?;
        if given != bottoms {
            return Err(DiagramError::BoundaryMismatch("stated bottoms".into()).into());
        }
    }
    Ok(Diagram {
        shape: shape.clone(),
        tops,
        bottoms,
    })
}

pub fn instr_from_sexp(e: &Sexp) -> Result<Instr, InstrError> {
    let items = e.list().ok_or_else(|| malformed(e))?;
    match (e.head(), items.len()) {
        (Some("e"), 2) => Ok(Instr::unit(nat(&items[1])?)),
        (Some("sp"), 2) => Ok(sp(&scheme_atom(&items[1])?)),
        (Some("kappa"), 4) => kappa(
            &instr_from_sexp(&items[1])?,
            &instr_from_sexp(&items[2])?,
            &scheme_atom(&items[3])?,
        ),
        (Some("coh"), 4) => coherence_instr(
            &instr_from_sexp(&items[1])?,
            &instr_from_sexp(&items[2])?,
            &scheme_atom(&items[3])?,
        ),
        (Some("delta"), 3) => delta_instr(&instr_from_sexp(&items[2])?, nat(&items[1])?),
        (Some("mu"), 3) => {
            let head = instr_from_sexp(&items[1])?;
            let list = items[2]
                .list()
                .filter(|_| items[2].head() == Some("args"))
                .ok_or_else(|| malformed(&items[2]))?;
            let args = args_from_sexp(&list[1..], head.arity(), instr_from_sexp, |t, b| L1.tgt_at(t, b))?;
            mu_instr(&head, &args)
        }
        _ => Err(malformed(e)),
    }
}

pub fn parse_instr(text: &str) -> Result<Instr, InstrError> {
    instr_from_sexp(&sexpr::parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(t: &str) -> SchemeCell {
        parse_scheme_cell(t).unwrap()
    }

    #[test]
    fn sp_is_section_of_arity() {
        for t in ["[2,1,2,2 / 0,0,1]@2", "[0]@1", "[1,1 / 0]@1", "[3]@3"] {
            assert_eq!(sp(&k(t)).arity(), &k(t));
        }
    }

    #[test]
    fn composite_of_units_is_comp() {
        let c = comp_instr(2);
        let args = unit_args(&k("[2,2 / 1]@2"));
        assert_eq!(mu_instr(&c, &args).unwrap(), c);
    }

    #[test]
    fn source_of_substitution() {
        let c = comp_instr(1);
        let f = kappa(&Instr::unit(0), &Instr::unit(0), &k("[1,1,1 / 0,0]@1")).unwrap();
        let args = Diagram {
            shape: k("[1,1 / 0]@1"),
            tops: vec![f.clone(), Instr::unit(1)],
            bottoms: vec![Instr::unit(0)],
        };
        let m = mu_instr(&c, &args).unwrap();
        assert_eq!(m.arity(), &k("[1,1,1,1 / 0,0,0]@1"));
        assert_eq!(m.src(), Instr::unit(0));
    }

    #[test]
    fn round_trip_syntax() {
        let t = parse_instr("(mu (sp [1,1 / 0]@1) (args (sp [1,1 / 0]@1) (e 1)))").unwrap();
        assert_eq!(parse_instr(&t.to_string()).unwrap(), t);
        assert_eq!(parse_instr("(delta 0 (e 2))").unwrap(), id_instr(2));
    }
}
