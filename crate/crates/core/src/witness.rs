//! Invertibility witnesses: construction, validation and core extraction.
//!
//! A witness for `u : x -> y` is an inverse `v`, cells `p : u ⊛ v -> id x` and
//! `q : v ⊛ u -> id y`, and (down to a chosen depth) witnesses for `p` and `q`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::instruction::{comp_instr, delta_instr, id_instr, kappa, mu_instr, sp, unit_args, Instr, InstrError};
use crate::scheme::SchemeCell;
use crate::sexpr::{self, Sexp};
use crate::strict::{compose_along, delta_diagram, DeltaVariant, Diagram, DiagramError};
use crate::weak::{
    coherence_cell, comp_cells, delta_exact, id_cell, unit_law_cell, xi, Free, LCell, MCell, MKind, MarkedCarrier,
    WeakError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("no inverse available for {0}")]
    MissingInverseAssignment(String),
    #[error("formal witness depth exhausted at {0}")]
    DepthExhausted(String),
    #[error("arity of {0} is not degenerate")]
    NotDegenerate(String),
    #[error("the two witnesses do not invert the same cell")]
    NotInversesOfSameCell,
    #[error("cells are not parallel: {0}")]
    NotParallel(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("construction invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Weak(#[from] WeakError),
}

impl From<InstrError> for WitnessError {
    fn from(e: InstrError) -> Self {
        WitnessError::Weak(e.into())
    }
}

impl From<crate::scheme::SchemeError> for WitnessError {
    fn from(e: crate::scheme::SchemeError) -> Self {
        WitnessError::Weak(DiagramError::from(e).into())
    }
}

impl From<DiagramError> for WitnessError {
    fn from(e: DiagramError) -> Self {
        WitnessError::Weak(e.into())
    }
}

type Result<T> = std::result::Result<T, WitnessError>;

/// Inverse data without the recursive part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub inverse: MCell,
    pub p: MCell,
    pub q: MCell,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseWitness {
    pub subject: MCell,
    pub inverse: MCell,
    pub p: MCell,
    pub q: MCell,
    pub sub_p: Option<Arc<InverseWitness>>,
    pub sub_q: Option<Arc<InverseWitness>>,
}

impl InverseWitness {
    pub fn depth(&self) -> usize {
        match (&self.sub_p, &self.sub_q) {
            (Some(a), Some(b)) => 1 + a.depth().min(b.depth()),
            _ => 0,
        }
    }

    pub fn triple(&self) -> Triple {
        Triple {
            inverse: self.inverse.clone(),
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }

    /// Drops sub-witnesses below depth `d`.
    pub fn truncate(&self, d: usize) -> InverseWitness {
        let sub = |w: &Option<Arc<InverseWitness>>| {
            if d == 0 {
                None
            } else {
                w.as_ref().map(|w| Arc::new(w.truncate(d - 1)))
            }
        };
        InverseWitness {
            sub_p: sub(&self.sub_p),
            sub_q: sub(&self.sub_q),
            ..self.clone()
        }
    }

    pub fn to_sexp(&self) -> Sexp {
        let a = |s: &str| Sexp::Atom(s.to_string());
        let tag = |t: &str, c: &MCell| Sexp::List(vec![a(t), c.to_sexp()]);
        let mut items = vec![
            a("witness"),
            tag("subject", &self.subject),
            tag("inverse", &self.inverse),
            tag("p", &self.p),
            tag("q", &self.q),
        ];
        if let Some(w) = &self.sub_p {
            items.push(Sexp::List(vec![a("sub-p"), w.to_sexp()]));
        }
        if let Some(w) = &self.sub_q {
            items.push(Sexp::List(vec![a("sub-q"), w.to_sexp()]));
        }
        Sexp::List(items)
    }

    pub fn from_sexp(x: &MarkedCarrier, e: &Sexp) -> std::result::Result<InverseWitness, WeakError> {
        let bad = || WeakError::Malformed(e.to_string());
        if e.head() != Some("witness") {
            return Err(bad());
        }
        let mut fields: HashMap<&str, &Sexp> = HashMap::new();
        for item in &e.list().unwrap()[1..] {
            match (item.head(), item.list().map(<[Sexp]>::len)) {
                (Some(t), Some(2)) => {
                    fields.insert(t, &item.list().unwrap()[1]);
                }
                _ => return Err(bad()),
            }
        }
        let cell = |t: &str| fields.get(t).ok_or_else(bad).and_then(|s| x.cell_from_sexp(s));
        let sub = |t: &str| -> std::result::Result<Option<Arc<InverseWitness>>, WeakError> {
            fields
                .get(t)
                .map(|s| InverseWitness::from_sexp(x, s).map(Arc::new))
                .transpose()
        };
        Ok(InverseWitness {
            subject: cell("subject")?,
            inverse: cell("inverse")?,
            p: cell("p")?,
            q: cell("q")?,
            sub_p: sub("sub-p")?,
            sub_q: sub("sub-q")?,
        })
    }

    pub fn parse(x: &MarkedCarrier, text: &str) -> std::result::Result<InverseWitness, WeakError> {
        InverseWitness::from_sexp(x, &sexpr::parse(text)?)
    }
}

impl fmt::Display for InverseWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

/// Checks the four typing equations, recursively to `depth`; the error names the failing one.
pub fn validate_witness(w: &InverseWitness, depth: usize) -> std::result::Result<(), String> {
    let u = &w.subject;
    let n = u.dim();
    if n == 0 {
        return Err("subject is a 0-cell".into());
    }
    let eq = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(format!("{what} fails for {u}"))
        }
    };
    eq(w.inverse.dim() == n, "dim(inverse) = dim(subject)")?;
    eq(w.inverse.src() == u.tgt(), "src(inverse) = tgt(subject)")?;
    eq(w.inverse.tgt() == u.src(), "tgt(inverse) = src(subject)")?;
    eq(
        w.p.dim() == n + 1 && w.q.dim() == n + 1,
        "dim(p) = dim(q) = dim(subject) + 1",
    )?;
    eq(
        w.p.src() == comp_cells(u, &w.inverse).map_err(|e| e.to_string())?,
        "src(p) = subject ⊛ inverse",
    )?;
    eq(w.p.tgt() == id_cell(&u.src()), "tgt(p) = id(src(subject))")?;
    eq(
        w.q.src() == comp_cells(&w.inverse, u).map_err(|e| e.to_string())?,
        "src(q) = inverse ⊛ subject",
    )?;
    eq(w.q.tgt() == id_cell(&u.tgt()), "tgt(q) = id(tgt(subject))")?;
    if depth > 0 {
        for (name, sub, cell) in [("sub-p", &w.sub_p, &w.p), ("sub-q", &w.sub_q, &w.q)] {
            let s = sub
                .as_ref()
                .ok_or_else(|| format!("{name} missing at required depth {depth}"))?;
            if &s.subject != cell {
                return Err(format!("{name} has the wrong subject"));
            }
            validate_witness(s, depth - 1).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(())
}

/// How a recursive call relates to its caller, for the termination audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    /// Sub-witness of a `p` or `q` cell, one depth lower.
    Sub,
    /// Inverse data for a cell or one of its labels.
    Label,
    /// One step of the cancellation chain, one full-dimensional column fewer.
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub kind: FrameKind,
    pub depth: usize,
    pub norm: usize,
    pub size: usize,
}

/// Counters from the termination audit.
#[derive(Debug, Clone, Default)]
pub struct Audit {
    pub edges: usize,
    pub violations: Vec<(Frame, Frame)>,
    pub max_stack: usize,
}

fn norm(c: &MCell) -> usize {
    match c.as_comp() {
        Some((phi, _)) => phi.arity().fdl_norm(),
        None => 1,
    }
}

fn two_column(n: usize) -> SchemeCell {
    SchemeCell::from_rows(vec![n, n], vec![n - 1], n).expect("valid")
}

fn linear(cols: usize, n: usize) -> SchemeCell {
    SchemeCell::from_rows(vec![n; cols], vec![n - 1; cols - 1], n).expect("valid")
}

/// `phi ⊛ psi` as an instruction, on arguments glued along the codimension-one boundary.
fn comp_of_instrs(phi: &Instr, psi: &Instr) -> Result<Instr> {
    let n = phi.dim();
    Ok(mu_instr(
        &comp_instr(n),
        &Diagram {
            shape: two_column(n),
            tops: vec![phi.clone(), psi.clone()],
            bottoms: vec![phi.tgt()],
        },
    )?)
}

/// `id(phi)` as an instruction one dimension up (on the same arity, viewed degenerately).
fn id_of_instr(phi: &Instr) -> Result<Instr> {
    let n = phi.dim() + 1;
    Ok(mu_instr(
        &id_instr(n),
        &Diagram {
            shape: SchemeCell::column(n - 1, n),
            tops: vec![phi.clone()],
            bottoms: vec![],
        },
    )?)
}

/// Paste of cells along a line at their own dimension.
fn paste_line(cells: &[MCell]) -> Result<MCell> {
    let n = cells[0].dim();
    let k = linear(cells.len(), n);
    let d = Diagram {
        shape: k.clone(),
        tops: cells.to_vec(),
        bottoms: cells[..cells.len() - 1].iter().map(MCell::tgt).collect(),
    };
    Ok(xi(&sp(&k), &d)?)
}

/// Reverses each codimension-one component, replacing labels by their inverses.
pub fn invert_diagram(u: &Diagram<MCell>, inverse_of: &dyn Fn(&MCell) -> Option<MCell>) -> Result<Diagram<MCell>> {
    let n = u.dim();
    let k = &u.shape;
    let mut tops = u.tops.clone();
    let mut bottoms = u.bottoms.clone();
    for (lo, hi) in k.transversal_components(n - 1)? {
        for i in lo..=hi {
            tops[i] = inverse_of(&u.tops[hi + lo - i])
                .ok_or_else(|| WitnessError::MissingInverseAssignment(u.tops[hi + lo - i].to_string()))?;
        }
        for i in lo + 1..=hi {
            bottoms[i - 1] = u.bottoms[hi + lo - i].clone();
        }
    }
    Ok(Diagram {
        shape: k.clone(),
        tops,
        bottoms,
    })
}

/// The chosen inverse instruction: contraction with swapped boundaries, on the reversed diagram.
pub fn inverse_instruction(c: &LCell, assign: &dyn Fn(&MCell) -> Option<MCell>) -> Result<LCell> {
    let phi = &c.instr;
    let phi_inv = kappa(&phi.tgt(), &phi.src(), phi.arity())?;
    let u_inv = invert_diagram(&c.diagram, assign)?;
    Ok(LCell::new(phi_inv, u_inv)?)
}

/// Builds and caches witnesses over one marked carrier.
pub struct Engine<'a> {
    carrier: &'a MarkedCarrier,
    store: HashMap<MCell, Arc<InverseWitness>>,
    triples: HashMap<MCell, Triple>,
    memo: HashMap<(MCell, usize), Arc<InverseWitness>>,
    stack: Vec<Frame>,
    audit: Audit,
}

impl<'a> Engine<'a> {
    pub fn new(carrier: &'a MarkedCarrier) -> Self {
        Engine {
            carrier,
            store: HashMap::new(),
            triples: HashMap::new(),
            memo: HashMap::new(),
            stack: Vec::new(),
            audit: Audit::default(),
        }
    }

    pub fn carrier(&self) -> &MarkedCarrier {
        self.carrier
    }

    pub fn audit(&self) -> &Audit {
        &self.audit
    }

    /// Adds a witness (after validating it at its own depth) to the store.
    pub fn register(&mut self, w: &InverseWitness) -> Result<()> {
        validate_witness(w, w.depth()).map_err(WitnessError::Invariant)?;
        self.store.insert(w.subject.clone(), Arc::new(w.clone()));
        Ok(())
    }

    fn enter(&mut self, kind: FrameKind, c: &MCell) {
        let depth = self.stack.last().map_or(0, |top| top.depth);
        let frame = Frame {
            kind,
            depth,
            norm: norm(c),
            size: c.size(),
        };
        self.push(frame);
    }

    fn push(&mut self, frame: Frame) {
        if let Some(&parent) = self.stack.last() {
            self.audit.edges += 1;
            let ok = match frame.kind {
                FrameKind::Sub => frame.depth < parent.depth,
                FrameKind::Label => match parent.kind {
                    FrameKind::Sub => frame.size == parent.size,
                    _ => frame.size < parent.size,
                },
                FrameKind::Chain => match parent.kind {
                    FrameKind::Chain => frame.depth == parent.depth && frame.norm < parent.norm,
                    _ => frame.norm <= parent.norm,
                },
            };
            if !ok {
                self.audit.violations.push((parent, frame));
            }
        }
        self.stack.push(frame);
        self.audit.max_stack = self.audit.max_stack.max(self.stack.len());
    }

    fn leave(&mut self) {
        self.stack.pop();
    }

    /// A witness of the requested depth, by whichever construction applies.
    pub fn witness(&mut self, c: &MCell, depth: usize) -> Result<Arc<InverseWitness>> {
        if let Some(w) = self.memo.get(&(c.clone(), depth)) {
            return Ok(w.clone());
        }
        if let Some(w) = self.store.get(c) {
            if w.depth() >= depth {
                let w = Arc::new(w.truncate(depth));
                self.memo.insert((c.clone(), depth), w.clone());
                return Ok(w);
            }
        }
        if c.dim() == 0 {
            return Err(WitnessError::MissingInverseAssignment(format!("{c} is a 0-cell")));
        }
        self.push(Frame {
            kind: FrameKind::Sub,
            depth,
            norm: norm(c),
            size: c.size(),
        });
        let out = self.witness_inner(c, depth);
        self.leave();
        let w = Arc::new(out?);
        self.memo.insert((c.clone(), depth), w.clone());
        Ok(w)
    }

    fn witness_inner(&mut self, c: &MCell, depth: usize) -> Result<InverseWitness> {
        let t = self.triple(c)?;
        let (sub_p, sub_q) = if depth > 0 {
            (
                Some(self.witness(&t.p, depth - 1)?),
                Some(self.witness(&t.q, depth - 1)?),
            )
        } else {
            (None, None)
        };
        Ok(InverseWitness {
            subject: c.clone(),
            inverse: t.inverse,
            p: t.p,
            q: t.q,
            sub_p,
            sub_q,
        })
    }

    /// Inverse data from the store, the formal atoms, or a construction.
    pub fn triple(&mut self, c: &MCell) -> Result<Triple> {
        if let Some(t) = self.triples.get(c) {
            return Ok(t.clone());
        }
        if let Some(w) = self.store.get(c) {
            return Ok(w.triple());
        }
        self.enter(FrameKind::Label, c);
        let out = self.triple_inner(c);
        self.leave();
        let t = out?;
        self.triples.insert(c.clone(), t.clone());
        Ok(t)
    }

    fn triple_inner(&mut self, c: &MCell) -> Result<Triple> {
        let x = self.carrier;
        if x.is_markable(c) {
            return Ok(Triple {
                inverse: x.inv(c)?,
                p: x.p(c)?,
                q: x.q(c)?,
            });
        }
        match c.kind() {
            MKind::Inv(g) if x.is_markable(g) => Ok(Triple {
                inverse: g.clone(),
                p: x.q(g)?,
                q: x.p(g)?,
            }),
            MKind::Comp(phi, u) => {
                if phi.arity().is_degenerate() {
                    self.degenerate_triple(phi, u)
                } else {
                    self.synthesized_triple(c, phi, u)
                }
            }
            MKind::P(_) | MKind::Q(_) => Err(WitnessError::DepthExhausted(c.to_string())),
            _ => Err(WitnessError::MissingInverseAssignment(c.to_string())),
        }
    }

    /// Inverse data when one exists, `None` otherwise.
    pub fn admits_s_inverse(&mut self, u: &MCell) -> Option<Triple> {
        if u.dim() == 0 {
            return None;
        }
        self.triple(u).ok()
    }

    fn degenerate_triple(&mut self, phi: &Instr, u: &Diagram<MCell>) -> Result<Triple> {
        let phi_inv = kappa(&phi.tgt(), &phi.src(), phi.arity())?;
        let inverse = xi(&phi_inv, u)?;
        let p = coherence_cell(&comp_of_instrs(phi, &phi_inv)?, &id_of_instr(&phi.src())?, u)?;
        let q = coherence_cell(&comp_of_instrs(&phi_inv, phi)?, &id_of_instr(&phi.tgt())?, u)?;
        Ok(Triple { inverse, p, q })
    }

    /// Witness for a composite whose arity is degenerate.
    pub fn witness_degenerate(&mut self, c: &MCell, depth: usize) -> Result<Arc<InverseWitness>> {
        match c.as_comp() {
            Some((phi, _)) if phi.arity().is_degenerate() => self.witness(c, depth),
            _ => Err(WitnessError::NotDegenerate(c.to_string())),
        }
    }

    /// Witness for a pasting whose full-dimensional labels all have inverse data.
    pub fn synthesize_witness(&mut self, c: &MCell, depth: usize) -> Result<Arc<InverseWitness>> {
        for label in c.fdl() {
            if !std::ptr::eq(&label, c) && &label != c {
                self.triple(&label)?;
            }
        }
        self.witness(c, depth)
    }

    fn synthesized_triple(&mut self, c: &MCell, phi: &Instr, u: &Diagram<MCell>) -> Result<Triple> {
        let n = u.dim();
        let mut lab_p: HashMap<MCell, (MCell, MCell)> = HashMap::new();
        let mut lab_q: HashMap<MCell, (MCell, MCell)> = HashMap::new();
        for (x, &h) in u.tops.iter().zip(u.shape.tops()) {
            if h == n && !lab_p.contains_key(x) {
                let t = self.triple(x)?;
                lab_q.insert(t.inverse.clone(), (x.clone(), t.q.clone()));
                lab_p.insert(x.clone(), (t.inverse, t.p));
            }
        }
        let lc = LCell {
            instr: phi.clone(),
            diagram: u.clone(),
        };
        let inv = inverse_instruction(&lc, &|x| lab_p.get(x).map(|e| e.0.clone()))?;
        let inverse = inv.eval();
        self.enter(FrameKind::Chain, c);
        let p = self.p_chain(phi, u, &inv.instr, &inv.diagram, &lab_p);
        self.leave();
        let p = p?;
        self.enter(FrameKind::Chain, c);
        let q = self.p_chain(&inv.instr, &inv.diagram, phi, u, &lab_q);
        self.leave();
        let q = q?;
        Ok(Triple { inverse, p, q })
    }

    /// The cell `ξ(phi, u) ⊛ ξ(phi_i, u_i) -> id(src)` cancelling columns left to right.
    fn p_chain(
        &mut self,
        phi: &Instr,
        u: &Diagram<MCell>,
        phi_i: &Instr,
        u_i: &Diagram<MCell>,
        lab: &HashMap<MCell, (MCell, MCell)>,
    ) -> Result<MCell> {
        let n = u.dim();
        let k = &u.shape;
        let whole = compose_along(&Free, u, u_i, n - 1)?;
        let both = comp_of_instrs(phi, phi_i)?;
        if k.fdl_norm() == 0 {
            return Ok(coherence_cell(&both, &id_of_instr(&phi.src())?, &whole)?);
        }
        let (ib, jb) = k.transversal_components(n - 1)?[0];
        let uj = &u.tops[jb];
        let (vj, pj) = lab
            .get(uj)
            .cloned()
            .ok_or_else(|| WitnessError::MissingInverseAssignment(uj.to_string()))?;
        if &whole.tops[jb] != uj || whole.tops[jb + 1] != vj {
            return Err(WitnessError::Invariant("cancelling pair is not adjacent".into()));
        }
        // merge the cancelling pair into one column
        let k1 = whole.shape.delta(jb).map_err(DiagramError::from)?;
        let mut star_tops = whole.tops.clone();
        star_tops.splice(jb..=jb + 1, [comp_cells(uj, &vj)?]);
        let mut star_bottoms = whole.bottoms.clone();
        star_bottoms.remove(jb);
        let phi1 = kappa(&phi.src(), &phi.src(), &k1)?;
        let mut chi = unit_args(&k1);
        chi.tops[jb] = comp_instr(n);
        let merged = mu_instr(&phi1, &chi)?;
        let w1 = coherence_cell(&both, &merged, &whole)?;

        let mut raised = k1.tops().to_vec();
        raised[jb] = n + 1;
        let k2 = SchemeCell::from_rows(raised, k1.bottoms().to_vec(), n + 1).map_err(DiagramError::from)?;
        let phi2 = kappa(&phi1, &phi1, &k2)?;
        let mut up_tops = star_tops.clone();
        up_tops[jb] = pj;
        let w2 = xi(
            &phi2,
            &Diagram {
                shape: k2,
                tops: up_tops,
                bottoms: star_bottoms.clone(),
            },
        )?;

        let mut id_tops = star_tops;
        id_tops[jb] = id_cell(&uj.src());
        let u_id = Diagram {
            shape: k1,
            tops: id_tops,
            bottoms: star_bottoms,
        };
        let w3 = unit_law_cell(&phi1, &u_id, jb)?;

        let dphi = delta_instr(phi, jb)?;
        let dphi_i = delta_instr(phi_i, ib)?;
        let du = delta_diagram(&Free, u, jb, DeltaVariant::Plus, None)?;
        let du_i = delta_diagram(&Free, u_i, ib, DeltaVariant::Minus, None)?;
        let rest = compose_along(&Free, &du, &du_i, n - 1)?;
        if rest != delta_exact(&u_id, jb)? {
            return Err(WitnessError::Invariant("δ(u_id) differs from δ₊u ⊛ δ₋u_inv".into()));
        }
        let w4 = coherence_cell(&delta_instr(&phi1, jb)?, &comp_of_instrs(&dphi, &dphi_i)?, &rest)?;

        let c5 = xi(&dphi, &du)?;
        self.enter(FrameKind::Chain, &c5);
        let w5 = self.p_chain(&dphi, &du, &dphi_i, &du_i, lab);
        self.leave();
        paste_line(&[w1, w2, w3, w4, w5?])
    }

    /// An invertible cell `v -> v'` between two inverses of the same cell.
    pub fn unique_inverse_path(
        &mut self,
        w_v: &InverseWitness,
        w_v2: &InverseWitness,
        depth: usize,
    ) -> Result<(MCell, Arc<InverseWitness>)> {
        if w_v.subject != w_v2.subject {
            return Err(WitnessError::NotInversesOfSameCell);
        }
        let (u, v, v2) = (&w_v.subject, &w_v.inverse, &w_v2.inverse);
        let n = u.dim();
        let (x, y) = (u.src(), u.tgt());
        let sub_p2 = w_v2
            .sub_p
            .as_ref()
            .ok_or_else(|| WitnessError::DepthExhausted("second witness has no sub-witness for p".into()))?;
        let sub_q = w_v
            .sub_q
            .as_ref()
            .ok_or_else(|| WitnessError::DepthExhausted("first witness has no sub-witness for q".into()))?;
        let p2_inv = sub_p2.inverse.clone();
        self.register(sub_p2)?;
        self.register(&equiv_sym(sub_p2))?;
        self.register(sub_q)?;

        let unit = Instr::unit(n);
        let right_id = mu_instr(
            &comp_instr(n),
            &Diagram {
                shape: two_column(n),
                tops: vec![unit.clone(), id_instr(n)],
                bottoms: vec![Instr::unit(n - 1)],
            },
        )?;
        let left_id = mu_instr(
            &comp_instr(n),
            &Diagram {
                shape: two_column(n),
                tops: vec![id_instr(n), unit.clone()],
                bottoms: vec![Instr::unit(n - 1)],
            },
        )?;
        let s1 = coherence_cell(&unit, &right_id, &Diagram::eta(v.clone(), n))?;
        let whisker_left = SchemeCell::from_rows(vec![n, n + 1], vec![n - 1], n + 1).map_err(DiagramError::from)?;
        let s2 = xi(
            &sp(&whisker_left),
            &Diagram {
                shape: whisker_left,
                tops: vec![v.clone(), p2_inv],
                bottoms: vec![x.clone()],
            },
        )?;
        let three = linear(3, n);
        let row = Diagram {
            shape: three.clone(),
            tops: vec![v.clone(), u.clone(), v2.clone()],
            bottoms: vec![x, y.clone()],
        };
        let nest = |left: bool| -> Result<Instr> {
            let inner = comp_instr(n);
            let tops = if left {
                vec![inner, unit.clone()]
            } else {
                vec![unit.clone(), inner]
            };
            Ok(mu_instr(
                &comp_instr(n),
                &Diagram {
                    shape: two_column(n),
                    tops,
                    bottoms: vec![Instr::unit(n - 1)],
                },
            )?)
        };
        let s3 = coherence_cell(&nest(false)?, &nest(true)?, &row)?;
        let whisker_right = SchemeCell::from_rows(vec![n + 1, n], vec![n - 1], n + 1).map_err(DiagramError::from)?;
        let s4 = xi(
            &sp(&whisker_right),
            &Diagram {
                shape: whisker_right,
                tops: vec![w_v.q.clone(), v2.clone()],
                bottoms: vec![y],
            },
        )?;
        let s5 = coherence_cell(&left_id, &unit, &Diagram::eta(v2.clone(), n))?;
        let path = paste_line(&[s1, s2, s3, s4, s5])?;
        let w = self.witness(&path, depth)?;
        Ok((path, w))
    }

    /// Witness for the composite of two witnessed cells.
    pub fn equiv_trans(
        &mut self,
        w1: &InverseWitness,
        w2: &InverseWitness,
        depth: usize,
    ) -> Result<Arc<InverseWitness>> {
        let c = comp_cells(&w1.subject, &w2.subject)
            .map_err(|_| WitnessError::BoundaryMismatch("subjects are not composable".into()))?;
        self.register(w1)?;
        self.register(w2)?;
        self.witness(&c, depth)
    }

    /// Witness for `v` from a witness for `u` and a witnessed cell `u -> v`.
    pub fn transport_invertibility(
        &mut self,
        u_w: &InverseWitness,
        connect: &InverseWitness,
        depth: usize,
    ) -> Result<Arc<InverseWitness>> {
        let c = &connect.subject;
        let u = &u_w.subject;
        if c.src() != *u {
            return Err(WitnessError::NotParallel(
                "connecting cell does not start at the subject".into(),
            ));
        }
        let v = c.tgt();
        if v.src() != u.src() || v.tgt() != u.tgt() {
            return Err(WitnessError::NotParallel(format!("{u} and {v}")));
        }
        let n = u.dim();
        let w = &u_w.inverse;
        let c_inv = connect.inverse.clone();
        self.register(connect)?;
        self.register(&equiv_sym(connect))?;
        for sub in [&u_w.sub_p, &u_w.sub_q].into_iter().flatten() {
            self.register(sub)?;
        }
        let whisker = |cells: Vec<MCell>, left_tall: bool, shared: MCell| -> Result<MCell> {
            let tops = if left_tall { vec![n + 1, n] } else { vec![n, n + 1] };
            let k = SchemeCell::from_rows(tops, vec![n - 1], n + 1).map_err(DiagramError::from)?;
            Ok(xi(
                &sp(&k),
                &Diagram {
                    shape: k,
                    tops: cells,
                    bottoms: vec![shared],
                },
            )?)
        };
        let p = paste_line(&[whisker(vec![c_inv.clone(), w.clone()], true, u.tgt())?, u_w.p.clone()])?;
        let q = paste_line(&[whisker(vec![w.clone(), c_inv], false, u.src())?, u_w.q.clone()])?;
        let (sub_p, sub_q) = if depth > 0 {
            (Some(self.witness(&p, depth - 1)?), Some(self.witness(&q, depth - 1)?))
        } else {
            (None, None)
        };
        let out = InverseWitness {
            subject: v,
            inverse: w.clone(),
            p,
            q,
            sub_p,
            sub_q,
        };
        validate_witness(&out, depth).map_err(WitnessError::Invariant)?;
        Ok(Arc::new(out))
    }
}

/// The same data read as a witness for the inverse.
pub fn equiv_sym(w: &InverseWitness) -> InverseWitness {
    InverseWitness {
        subject: w.inverse.clone(),
        inverse: w.subject.clone(),
        p: w.q.clone(),
        q: w.p.clone(),
        sub_p: w.sub_q.clone(),
        sub_q: w.sub_p.clone(),
    }
}

/// A structure-preserving map of free cells, given on generators.
pub trait CellMap {
    fn apply(&self, c: &MCell) -> MCell;
}

/// Renames generators; everything else is rebuilt around them.
pub struct Relabel(pub HashMap<MCell, MCell>);

impl CellMap for Relabel {
    fn apply(&self, c: &MCell) -> MCell {
        crate::weak::rebuild(c, &|g| self.0.get(g).cloned().unwrap_or_else(|| g.clone()))
    }
}

pub fn push_witness(f: &dyn CellMap, w: &InverseWitness) -> InverseWitness {
    InverseWitness {
        subject: f.apply(&w.subject),
        inverse: f.apply(&w.inverse),
        p: f.apply(&w.p),
        q: f.apply(&w.q),
        sub_p: w.sub_p.as_ref().map(|s| Arc::new(push_witness(f, s))),
        sub_q: w.sub_q.as_ref().map(|s| Arc::new(push_witness(f, s))),
    }
}

/// Which cells must be invertible to belong to the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreMode {
    /// Every cell of positive dimension.
    Groupoid,
    /// Only cells above the given dimension.
    Truncated(usize),
}

#[derive(Debug, Clone)]
pub struct CoreReport {
    /// Enumerated cells, dimension-major then in construction order.
    pub cells: Vec<MCell>,
    pub core: HashSet<MCell>,
    pub closed_under_boundary: bool,
    pub closed_under_composition: bool,
}

/// Cap on enumerated cells, overridable with `OMEGAPASTE_MAX_CELLS`.
pub fn max_cells() -> usize {
    std::env::var("OMEGAPASTE_MAX_CELLS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(5000)
}

/// Cells built from generators (and formal inverses of marked ones) by identities and
/// binary composites, with term size at most `bound` and dimension at most `max_dim`.
pub fn enumerate_cells(x: &MarkedCarrier, bound: usize, max_dim: usize) -> Vec<MCell> {
    let cap = max_cells();
    let mut seen: HashSet<MCell> = HashSet::new();
    let mut cells: Vec<MCell> = Vec::new();
    let mut add = |c: MCell, cells: &mut Vec<MCell>| {
        if c.size() <= bound && c.dim() <= max_dim && cells.len() < cap && seen.insert(c.clone()) {
            cells.push(c);
        }
    };
    for g in x.generators() {
        add(g.clone(), &mut cells);
        if let Ok(v) = x.inv(g) {
            add(v, &mut cells);
        }
    }
    loop {
        let before = cells.len();
        let snapshot = cells.clone();
        for a in &snapshot {
            add(id_cell(a), &mut cells);
            for b in &snapshot {
                if a.dim() > 0 && a.dim() == b.dim() && a.tgt() == b.src() {
                    if let Ok(c) = comp_cells(a, b) {
                        add(c, &mut cells);
                    }
                }
            }
        }
        if cells.len() == before || cells.len() >= cap {
            break;
        }
    }
    cells.sort_by_key(MCell::dim);
    cells
}

/// The enumerated cells certified hereditarily invertible at `depth`.
pub fn core_filter(x: &MarkedCarrier, mode: CoreMode, depth: usize, bound: usize, max_dim: usize) -> CoreReport {
    let cells = enumerate_cells(x, bound, max_dim);
    let mut engine = Engine::new(x);
    let mut core: HashSet<MCell> = HashSet::new();
    for c in &cells {
        let needs_witness = match mode {
            CoreMode::Groupoid => c.dim() > 0,
            CoreMode::Truncated(n) => c.dim() > n,
        };
        let bounds_in = c.dim() == 0 || (core.contains(&c.src()) && core.contains(&c.tgt()));
        if bounds_in && (!needs_witness || engine.witness(c, depth).is_ok()) {
            core.insert(c.clone());
        }
    }
    let closed_under_boundary = core
        .iter()
        .all(|c| c.dim() == 0 || (core.contains(&c.src()) && core.contains(&c.tgt())));
    let index: HashSet<&MCell> = cells.iter().collect();
    let mut closed_under_composition = true;
    for a in &core {
        for b in &core {
            if a.dim() > 0 && a.dim() == b.dim() && a.tgt() == b.src() {
                if let Ok(c) = comp_cells(a, b) {
                    if index.contains(&c) && !core.contains(&c) {
                        closed_under_composition = false;
                    }
                }
            }
        }
    }
    CoreReport {
        cells,
        core,
        closed_under_boundary,
        closed_under_composition,
    }
}
