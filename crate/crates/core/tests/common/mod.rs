//! Independent reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::HashMap;

use omegapaste::globular::{build_disk, disk_face, glue, realisation_diagram, CellRef, GlobMap, GlobularSet};
use omegapaste::scheme::SchemeCell;
use omegapaste::strict::Diagram;

/// Columns of `k` grouped into runs separated by bottoms below `b`.
fn runs_above(k: &SchemeCell, b: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut lo = 0;
    for (j, &x) in k.bottoms().iter().enumerate() {
        if x < b {
            out.push((lo, j));
            lo = j + 1;
        }
    }
    out.push((lo, k.rank()));
    out
}

struct Disks {
    objects: Vec<GlobularSet>,
    labels: Vec<CellRef>,
    arrows: Vec<(usize, usize, GlobMap)>,
}

impl Disks {
    /// Adds the disks of one labelled diagram; returns the object index of each column.
    fn add(&mut self, d: &Diagram<CellRef>) -> Vec<usize> {
        let base = self.objects.len();
        let (objs, arrows) = realisation_diagram(&d.shape);
        let mut labels = vec![d.tops[0]];
        for i in 0..d.bottoms.len() {
            labels.push(d.bottoms[i]);
            labels.push(d.tops[i + 1]);
        }
        self.objects.extend(objs);
        self.labels.extend(labels);
        self.arrows
            .extend(arrows.into_iter().map(|(a, b, f)| (a + base, b + base, f)));
        (0..=d.shape.rank()).map(|j| base + 2 * j).collect()
    }

    /// Glues the columns of a boundary diagram `e` into the side of `u` it bounds.
    fn attach(&mut self, e: &Diagram<CellRef>, e_cols: &[usize], u: &Diagram<CellRef>, u_cols: &[usize], target: bool) {
        let b = e.shape.dim();
        let runs = runs_above(&u.shape, b);
        assert_eq!(runs.len(), e_cols.len(), "boundary column count");
        for (j, &(lo, hi)) in runs.iter().enumerate() {
            let h = u.shape.tops()[lo];
            if lo == hi && h <= b {
                let disk = build_disk(h, false);
                self.arrows.push((e_cols[j], u_cols[lo], GlobMap::identity(&disk)));
            } else {
                let col = if target { hi } else { lo };
                let f = disk_face(b, u.shape.tops()[col], target);
                self.arrows.push((e_cols[j], u_cols[col], f));
            }
        }
    }
}

/// The label of a disk cell, read off the disk's top label.
fn disk_cell_label(x: &GlobularSet, top: CellRef, c: CellRef) -> CellRef {
    if c.dim == top.dim {
        top
    } else if c.index == 0 {
        x.src_at(top, c.dim)
    } else {
        x.tgt_at(top, c.dim)
    }
}

/// Reads a scheme back from the realisation of one: returns the table and the
/// cells playing the tops and bottoms.
pub fn read_scheme(q: &GlobularSet) -> (Vec<usize>, Vec<usize>, Vec<CellRef>, Vec<CellRef>) {
    let points: Vec<CellRef> = q.cells(0).collect();
    let arrows: Vec<CellRef> = if q.max_dim() >= 1 {
        q.cells(1).collect()
    } else {
        Vec::new()
    };
    if arrows.is_empty() {
        assert_eq!(points.len(), 1, "a scheme with no arrows has one point");
        return (vec![0], vec![], vec![points[0]], vec![]);
    }
    let mut start = None;
    for &p in &points {
        if !arrows.iter().any(|&a| q.tgt(a) == p) {
            assert!(start.is_none(), "two initial points");
            start = Some(p);
        }
    }
    let mut cur = start.expect("an initial point");
    let (mut tops, mut bottoms, mut top_cells, mut bottom_cells) = (vec![], vec![], vec![], vec![]);
    let mut first = true;
    loop {
        let out: Vec<CellRef> = arrows.iter().copied().filter(|&a| q.src(a) == cur).collect();
        if out.is_empty() {
            break;
        }
        let next = q.tgt(out[0]);
        assert!(
            out.iter().all(|&a| q.tgt(a) == next),
            "arrows out of a point share a target"
        );
        if !first {
            bottoms.push(0);
            bottom_cells.push(cur);
        }
        first = false;
        let (h, embed) = q.hom(cur, next);
        let lift = |c: CellRef| CellRef {
            dim: c.dim + 1,
            index: embed[c.dim][c.index],
        };
        let (t, b, tc, bc) = read_scheme(&h);
        tops.extend(t.iter().map(|x| x + 1));
        bottoms.extend(b.iter().map(|x| x + 1));
        top_cells.extend(tc.into_iter().map(lift));
        bottom_cells.extend(bc.into_iter().map(lift));
        cur = next;
    }
    assert_eq!(bottoms.len() + 1, tops.len());
    (tops, bottoms, top_cells, bottom_cells)
}

/// Flattens a nested diagram by gluing disks and reading the colimit back.
pub fn flatten_by_colimit(x: &GlobularSet, outer: &Diagram<Diagram<CellRef>>) -> Diagram<CellRef> {
    let mut disks = Disks {
        objects: Vec::new(),
        labels: Vec::new(),
        arrows: Vec::new(),
    };
    let top_cols: Vec<Vec<usize>> = outer.tops.iter().map(|u| disks.add(u)).collect();
    for (i, e) in outer.bottoms.iter().enumerate() {
        let cols = disks.add(e);
        disks.attach(e, &cols, &outer.tops[i], &top_cols[i], true);
        disks.attach(e, &cols, &outer.tops[i + 1], &top_cols[i + 1], false);
    }
    let col = glue(&disks.objects, &disks.arrows);
    let mut label: HashMap<CellRef, CellRef> = HashMap::new();
    for (k, obj) in disks.objects.iter().enumerate() {
        for c in obj.all_cells() {
            let q = col.cocone[k].apply(c);
            let l = disk_cell_label(x, disks.labels[k], c);
            if let Some(prev) = label.insert(q, l) {
                assert_eq!(prev, l, "inconsistent labels glued together");
            }
        }
    }
    let (tops, bottoms, tc, bc) = read_scheme(&col.set);
    Diagram {
        shape: SchemeCell::from_rows(tops, bottoms, outer.shape.dim()).expect("colimit reads as a scheme"),
        tops: tc.iter().map(|c| label[c]).collect(),
        bottoms: bc.iter().map(|c| label[c]).collect(),
    }
}
