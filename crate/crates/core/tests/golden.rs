use omegapaste::globular::{realisation, CellRef, GlobularSet};
use omegapaste::scheme::{convert_encoding, parse_scheme, parse_scheme_cell, Encoding, ZigZag};
use omegapaste::strict::{delta_diagram, diagram_boundary, parse_diagram, shape_diagram, DeltaVariant, Diagram};

const NESTED: &str = "[[[ ]],[ ],[[ ],[ ]]]";
const ZIGZAG: [i64; 15] = [-1, 0, 1, 2, 1, 0, 1, 0, 1, 2, 1, 2, 1, 0, -1];

/// Points a..d, parallel arrows, and three 2-cells; the second set has an identity on `g`.
pub fn two_diagram_set(with_identity: bool) -> GlobularSet {
    let mut x = GlobularSet::empty(2);
    for p in ["a", "b", "c", "d"] {
        x.push(0, p, None);
    }
    let pt = |x: &GlobularSet, n: &str| x.find(0, n).unwrap().index;
    let arrows: &[(&str, &str, &str)] = if with_identity {
        &[
            ("f", "a", "b"),
            ("g", "a", "b"),
            ("h", "a", "b"),
            ("i", "b", "c"),
            ("j", "c", "d"),
            ("k", "c", "d"),
        ]
    } else {
        &[
            ("f", "a", "b"),
            ("g", "a", "b"),
            ("h", "b", "c"),
            ("i", "c", "d"),
            ("j", "c", "d"),
            ("k", "c", "d"),
        ]
    };
    for &(n, s, t) in arrows {
        let b = (pt(&x, s), pt(&x, t));
        x.push(1, n, Some(b));
    }
    let ar = |x: &GlobularSet, n: &str| x.find(1, n).unwrap().index;
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
        let b = (ar(&x, s), ar(&x, t));
        x.push(2, n, Some(b));
    }
    x
}

fn diagram(x: &GlobularSet, text: &str) -> Diagram<CellRef> {
    parse_diagram(x, text, |n| x.find_any(n).ok()).unwrap()
}

#[test]
fn boundary_of_long_scheme() {
    let k = parse_scheme_cell("[3,6,5,7,2,6 / 2,3,4,0,1]").unwrap();
    let want = parse_scheme_cell("[3,4,4,2,4 / 2,3,0,1]").unwrap();
    assert_eq!(k.boundary(4).unwrap(), want);
}

#[test]
fn encodings_round_trip() {
    let z = ZigZag::from_nested(NESTED).unwrap();
    assert_eq!(z.seq(), &ZIGZAG);
    let table = z.to_scheme();
    assert_eq!(table, parse_scheme("[2,1,2,2 / 0,0,1]").unwrap());
    assert_eq!(table.to_zigzag(), z);
    let back = convert_encoding(
        &convert_encoding(NESTED, Encoding::Nested, Encoding::Table).unwrap(),
        Encoding::Table,
        Encoding::Nested,
    )
    .unwrap();
    assert_eq!(ZigZag::from_nested(&back).unwrap(), z);
    let zz = convert_encoding("[2,1,2,2 / 0,0,1]", Encoding::Table, Encoding::ZigZag).unwrap();
    assert_eq!(
        convert_encoding(&zz, Encoding::ZigZag, Encoding::Table).unwrap(),
        "[2,1,2,2 / 0,0,1]"
    );
}

#[test]
fn boundaries_of_labelled_diagram() {
    let x = two_diagram_set(false);
    let u = diagram(&x, "[alpha, h, beta, gamma / b, c, j]");
    assert_eq!(
        u.map(|c| c.dim),
        shape_diagram(&parse_scheme_cell("[2,1,2,2 / 0,0,1]").unwrap())
    );
    assert_eq!(
        diagram_boundary(&x, &u, 1, false).unwrap(),
        diagram(&x, "[f, h, i / b, c]")
    );
    assert_eq!(
        diagram_boundary(&x, &u, 1, true).unwrap(),
        diagram(&x, "[g, h, k / b, c]")
    );
    assert_eq!(diagram(&x, "[alpha, h, beta, gamma / b, c, j] : [2,1,2,2 / 0,0,1]"), u);
    assert!(
        parse_diagram(&x, "[alpha, h, beta, gamma / b, c, j] : [2,2,2,2 / 0,0,1]", |n| x
            .find_any(n)
            .ok())
        .is_err()
    );
}

#[test]
fn column_deletion() {
    let k = parse_scheme_cell("[2,2,2,1,2 / 1,1,0,0]").unwrap();
    assert_eq!(k.delta(1).unwrap(), parse_scheme_cell("[2,2,1,2 / 1,0,0]").unwrap());

    let x = two_diagram_set(true);
    let u = diagram(&x, "[alpha, idg, beta, i, gamma / g, g, b, c]");
    let idg = x.find_any("idg").unwrap();
    let cases = [
        (1, DeltaVariant::Exact, "[alpha, beta, i, gamma / g, b, c]"),
        (2, DeltaVariant::Plus, "[alpha, idg, i, gamma / g, b, c]"),
        (4, DeltaVariant::Minus, "[alpha, idg, beta, i, k / g, g, b, c]"),
    ];
    for (i, variant, want) in cases {
        let got = delta_diagram(&x, &u, i, variant, Some(&idg)).unwrap();
        let want = parse_diagram(&x, want, |n| x.find_any(n).ok()).unwrap();
        let want = Diagram {
            shape: want.shape.with_dim(2).unwrap(),
            ..want
        };
        assert_eq!(got, want, "column {i}");
    }
}

#[test]
fn realisation_counts() {
    let r = realisation(&parse_scheme_cell("[1,1 / 0]").unwrap());
    assert_eq!(r.set.counts(), vec![3, 2]);
}
