//! Finite truncated globular sets, disks, colimits and hom sets.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scheme::SchemeCell;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobError {
    #[error("cell {cell} names a missing {side} {target}")]
    DanglingBoundary {
        cell: String,
        side: &'static str,
        target: String,
    },
    #[error("cell {cell} has no {side}")]
    MissingBoundary { cell: String, side: &'static str },
    #[error("globularity fails at cell {cell}")]
    GlobularityViolation { cell: String },
    #[error("cells have different dimensions {0} and {1}")]
    DimMismatch(usize, usize),
    #[error("duplicate cell name {name} in dimension {dim}")]
    DuplicateName { name: String, dim: usize },
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("cell name {0} is ambiguous across dimensions")]
    AmbiguousName(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
}

/// Position of a cell: dimension plus index within that dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellRef {
    pub dim: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobularSet {
    names: Vec<Vec<String>>,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
}

impl GlobularSet {
    /// A globular set with no cells, truncated at `max_dim`.
    pub fn empty(max_dim: usize) -> Self {
        GlobularSet {
            names: vec![Vec::new(); max_dim + 1],
            src: vec![Vec::new(); max_dim + 1],
            tgt: vec![Vec::new(); max_dim + 1],
        }
    }

    pub fn max_dim(&self) -> usize {
        self.names.len() - 1
    }

    pub fn count(&self, dim: usize) -> usize {
        self.names.get(dim).map_or(0, Vec::len)
    }

    /// Cell counts for dimensions `0..=max_dim`.
    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn name(&self, c: CellRef) -> &str {
        &self.names[c.dim][c.index]
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellRef> + '_ {
        (0..self.count(dim)).map(move |index| CellRef { dim, index })
    }

    pub fn all_cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..=self.max_dim()).flat_map(move |d| self.cells(d))
    }

    pub fn find(&self, dim: usize, name: &str) -> Option<CellRef> {
        self.names
            .get(dim)?
            .iter()
            .position(|n| n == name)
            .map(|index| CellRef { dim, index })
    }

    /// Looks a name up in every dimension; fails when it is absent or ambiguous.
    pub fn find_any(&self, name: &str) -> Result<CellRef, GlobError> {
        let hits: Vec<CellRef> = (0..=self.max_dim()).filter_map(|d| self.find(d, name)).collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(GlobError::UnknownCell(name.to_string())),
            _ => Err(GlobError::AmbiguousName(name.to_string())),
        }
    }

    /// Appends a cell; boundaries are indices one dimension down.
    pub fn push(&mut self, dim: usize, name: impl Into<String>, bounds: Option<(usize, usize)>) -> CellRef {
        while self.names.len() <= dim {
            self.names.push(Vec::new());
            self.src.push(Vec::new());
            self.tgt.push(Vec::new());
        }
        let index = self.names[dim].len();
        self.names[dim].push(name.into());
        if dim > 0 {
            let (s, t) = bounds.expect("positive-dimensional cell needs boundaries");
            self.src[dim].push(s);
            self.tgt[dim].push(t);
        }
        CellRef { dim, index }
    }

    pub fn src(&self, c: CellRef) -> CellRef {
        assert!(c.dim > 0, "0-cells have no source");
        CellRef {
            dim: c.dim - 1,
            index: self.src[c.dim][c.index],
        }
    }

    pub fn tgt(&self, c: CellRef) -> CellRef {
        assert!(c.dim > 0, "0-cells have no target");
        CellRef {
            dim: c.dim - 1,
            index: self.tgt[c.dim][c.index],
        }
    }

    /// Iterated source down to dimension `m`.
    pub fn src_at(&self, mut c: CellRef, m: usize) -> CellRef {
        while c.dim > m {
            c = self.src(c);
        }
        c
    }

    pub fn tgt_at(&self, mut c: CellRef, m: usize) -> CellRef {
        while c.dim > m {
            c = self.tgt(c);
        }
        c
    }

    pub fn is_parallel(&self, u: CellRef, v: CellRef) -> Result<bool, GlobError> {
        if u.dim != v.dim {
            return Err(GlobError::DimMismatch(u.dim, v.dim));
        }
        Ok(u.dim == 0 || (self.src(u) == self.src(v) && self.tgt(u) == self.tgt(v)))
    }

    pub fn check_globular(&self) -> Result<(), GlobError> {
        for d in 2..=self.max_dim() {
            for c in self.cells(d) {
                let (s, t) = (self.src(c), self.tgt(c));
                if self.src(s) != self.src(t) || self.tgt(s) != self.tgt(t) {
                    return Err(GlobError::GlobularityViolation {
                        cell: self.name(c).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The sub-globular set of (n+1)-cells from `x` to `y`, shifted down one dimension.
    pub fn hom(&self, x: CellRef, y: CellRef) -> (GlobularSet, Vec<Vec<usize>>) {
        assert!(x.dim == 0 && y.dim == 0, "hom needs 0-cells");
        let top = self.max_dim().max(1) - 1;
        let mut out = GlobularSet::empty(top);
        // embed[d][i] = index in self at dimension d+1
        let mut embed: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        let mut back: Vec<HashMap<usize, usize>> = vec![HashMap::new(); top + 1];
        for d in 0..=top {
            for c in self.cells(d + 1) {
                if self.src_at(c, 0) != x || self.tgt_at(c, 0) != y {
                    continue;
                }
                let bounds = (d > 0).then(|| (back[d - 1][&self.src(c).index], back[d - 1][&self.tgt(c).index]));
                let r = out.push(d, self.name(c), bounds);
                back[d].insert(c.index, r.index);
                embed[d].push(c.index);
            }
        }
        (out, embed)
    }

    pub fn to_presentation(&self) -> Presentation {
        let mut p = Presentation {
            max_dim: self.max_dim(),
            ..Presentation::default()
        };
        for d in 0..=self.max_dim() {
            let mut names = self.names[d].clone();
            names.sort();
            p.cells.insert(d.to_string(), names);
            if d > 0 {
                let mut s = BTreeMap::new();
                let mut t = BTreeMap::new();
                for c in self.cells(d) {
                    s.insert(self.name(c).to_string(), self.name(self.src(c)).to_string());
                    t.insert(self.name(c).to_string(), self.name(self.tgt(c)).to_string());
                }
                p.src.insert(d.to_string(), s);
                p.tgt.insert(d.to_string(), t);
            }
        }
        p
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_presentation()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, GlobError> {
        let p: Presentation = serde_json::from_str(text).map_err(|e| GlobError::Presentation(e.to_string()))?;
        validate_globular_set(&p)
    }
}

/// Raw JSON presentation; the marked variant adds `marks` and `depth`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub max_dim: usize,
    #[serde(default)]
    pub cells: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub src: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub tgt: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

pub fn validate_globular_set(p: &Presentation) -> Result<GlobularSet, GlobError> {
    let mut g = GlobularSet::empty(p.max_dim);
    for key in p.cells.keys() {
        let d: usize = key
            .parse()
            .map_err(|_| GlobError::Presentation(format!("bad dimension key {key:?}")))?;
        if d > p.max_dim {
            return Err(GlobError::Presentation(format!("dimension {d} above max_dim")));
        }
    }
    for d in 0..=p.max_dim {
        let names = p.cells.get(&d.to_string()).cloned().unwrap_or_default();
        for name in names {
            if g.find(d, &name).is_some() {
                return Err(GlobError::DuplicateName { name, dim: d });
            }
            let bounds = if d == 0 {
                None
            } else {
                let look = |side: &'static str, m: &BTreeMap<String, BTreeMap<String, String>>| {
                    let target = m.get(&d.to_string()).and_then(|row| row.get(&name)).ok_or_else(|| {
                        GlobError::MissingBoundary {
                            cell: name.clone(),
                            side,
                        }
                    })?;
                    g.find(d - 1, target)
                        .map(|c| c.index)
                        .ok_or_else(|| GlobError::DanglingBoundary {
                            cell: name.clone(),
                            side,
                            target: target.clone(),
                        })
                };
                Some((look("source", &p.src)?, look("target", &p.tgt)?))
            };
            g.push(d, name, bounds);
        }
    }
    g.check_globular()?;
    Ok(g)
}

/// Dimension-wise assignment of cells, `map[d][i]` is the image of cell `i` in dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobMap {
    pub map: Vec<Vec<usize>>,
}

impl GlobMap {
    pub fn identity(x: &GlobularSet) -> Self {
        GlobMap {
            map: (0..=x.max_dim()).map(|d| (0..x.count(d)).collect()).collect(),
        }
    }

    pub fn apply(&self, c: CellRef) -> CellRef {
        CellRef {
            dim: c.dim,
            index: self.map[c.dim][c.index],
        }
    }

    pub fn compose(&self, then: &GlobMap) -> GlobMap {
        GlobMap {
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(d, row)| row.iter().map(|&i| then.map[d][i]).collect())
                .collect(),
        }
    }

    /// Checks that the map is total and commutes with source and target.
    pub fn is_valid(&self, dom: &GlobularSet, cod: &GlobularSet) -> bool {
        for d in 0..=dom.max_dim() {
            let row = match self.map.get(d) {
                Some(r) if r.len() == dom.count(d) => r,
                None if dom.count(d) == 0 => continue,
                _ => return false,
            };
            for (i, &j) in row.iter().enumerate() {
                if j >= cod.count(d) {
                    return false;
                }
                if d > 0 {
                    let c = CellRef { dim: d, index: i };
                    let img = CellRef { dim: d, index: j };
                    if self.apply(dom.src(c)) != cod.src(img) || self.apply(dom.tgt(c)) != cod.tgt(img) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `G^n`, or its boundary when `boundary_only` holds. Lower cells are named `s`/`t`, the top cell `c`.
pub fn build_disk(n: usize, boundary_only: bool) -> GlobularSet {
    let mut g = GlobularSet::empty(n);
    for d in 0..n {
        let b = (d > 0).then_some((0, 1));
        g.push(d, "s", b);
        g.push(d, "t", b);
    }
    if !boundary_only {
        g.push(n, "c", (n > 0).then_some((0, 1)));
    }
    g
}

/// The inclusion of the boundary into the disk.
pub fn disk_inclusion(n: usize) -> GlobMap {
    GlobMap::identity(&build_disk(n, true))
}

/// `G^b -> G^n` sending the top cell to the source (`to_target == false`) or target b-cell.
pub fn disk_face(b: usize, n: usize, to_target: bool) -> GlobMap {
    assert!(b < n);
    let mut map: Vec<Vec<usize>> = (0..b).map(|_| vec![0, 1]).collect();
    map.push(vec![usize::from(to_target)]);
    GlobMap { map }
}

/// A colimit with its cocone maps.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub set: GlobularSet,
    pub cocone: Vec<GlobMap>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Colimit of a finite diagram; `arrows` are `(from, to, map)`. Output cells are named
/// `q{dim}_{ordinal}` in order of first appearance.
pub fn glue(objects: &[GlobularSet], arrows: &[(usize, usize, GlobMap)]) -> Colimit {
    let max_dim = objects.iter().map(GlobularSet::max_dim).max().unwrap_or(0);
    // global index of (object, dim, idx)
    let mut offset: Vec<Vec<usize>> = Vec::new();
    let mut total = 0;
    for o in objects {
        let mut row = Vec::new();
        for d in 0..=max_dim {
            row.push(total);
            total += o.count(d);
        }
        offset.push(row);
    }
    let mut uf = UnionFind((0..total).collect());
    for (from, to, f) in arrows {
        for d in 0..=objects[*from].max_dim() {
            for i in 0..objects[*from].count(d) {
                uf.union(offset[*from][d] + i, offset[*to][d] + f.map[d][i]);
            }
        }
    }
    let mut set = GlobularSet::empty(max_dim);
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut cocone: Vec<GlobMap> = objects
        .iter()
        .map(|o| GlobMap {
            map: (0..=o.max_dim()).map(|d| vec![0; o.count(d)]).collect(),
        })
        .collect();
    for d in 0..=max_dim {
        for (k, o) in objects.iter().enumerate() {
            for c in o.cells(d) {
                let root = uf.find(offset[k][d] + c.index);
                let idx = match class_index.get(&root) {
                    Some(&i) => i,
                    None => {
                        let bounds = (d > 0).then(|| {
                            (
                                cocone[k].map[d - 1][o.src(c).index],
                                cocone[k].map[d - 1][o.tgt(c).index],
                            )
                        });
                        let name = format!("q{d}_{}", set.count(d));
                        let r = set.push(d, name, bounds);
                        class_index.insert(root, r.index);
                        r.index
                    }
                };
                cocone[k].map[d][c.index] = idx;
            }
        }
    }
    Colimit { set, cocone }
}

/// The disks and gluing maps whose colimit realises a scheme, in left-to-right order
/// `G^{k0}, G^{b1}, G^{k1}, ..`.
pub fn realisation_diagram(c: &SchemeCell) -> (Vec<GlobularSet>, Vec<(usize, usize, GlobMap)>) {
    let mut objects = vec![build_disk(c.tops()[0], false)];
    let mut arrows = Vec::new();
    for i in 1..=c.rank() {
        let b = c.bottoms()[i - 1];
        let (prev, next) = (c.tops()[i - 1], c.tops()[i]);
        objects.push(build_disk(b, false));
        let bi = objects.len() - 1;
        objects.push(build_disk(next, false));
        arrows.push((bi, bi - 1, disk_face(b, prev, true)));
        arrows.push((bi, bi + 1, disk_face(b, next, false)));
    }
    (objects, arrows)
}

/// The finite globular set presented by a scheme.
pub fn realisation(c: &SchemeCell) -> Colimit {
    let (objects, arrows) = realisation_diagram(c);
    let mut col = glue(&objects, &arrows);
    while col.set.max_dim() < c.dim() {
        col.set.names.push(Vec::new());
        col.set.src.push(Vec::new());
        col.set.tgt.push(Vec::new());
    }
    col
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_face_is_globular() {
        for n in 1..4 {
            for b in 0..n {
                for side in [false, true] {
                    assert!(disk_face(b, n, side).is_valid(&build_disk(b, false), &build_disk(n, false)));
                }
            }
        }
    }

    #[test]
    fn boundary_pushout_of_disks() {
        // gluing two copies of G^{n-1} along their common boundary gives the boundary of G^n
        for n in 1..4 {
            let inner = build_disk(n - 1, true);
            let g = build_disk(n - 1, false);
            let col = glue(
                &[inner.clone(), g.clone(), g],
                &[(0, 1, disk_inclusion(n - 1)), (0, 2, disk_inclusion(n - 1))],
            );
            assert_eq!(col.set.counts()[..n], build_disk(n, true).counts()[..n]);
        }
    }
}
