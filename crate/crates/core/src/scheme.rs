//! Pasting schemes as integer tables.
//!
//! A scheme `[k0, k1, .., kr / b1, .., br]` lists the dimensions of the
//! pasted cells in the top row and the dimensions of the shared boundaries
//! in the bottom row. Tables are the canonical representation; zig-zag
//! sequences and nested brackets are codecs.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("expected {expected} bottom entries for {tops} top entries, got {got}")]
    LengthMismatch { tops: usize, expected: usize, got: usize },
    #[error("negative entry {0}")]
    NegativeEntry(i64),
    #[error("bottom entry {index} is not strictly below both neighbours")]
    ZigzagViolation { index: usize },
    #[error("scheme has entry {max} above the declared dimension {dim}")]
    DimTooSmall { max: usize, dim: usize },
    #[error("boundary level {m} is out of range for a {dim}-cell")]
    DimensionOutOfRange { m: usize, dim: usize },
    #[error("column {index} has height {height}, expected full dimension {dim}")]
    NotFullDimensional { index: usize, height: usize, dim: usize },
    #[error("column index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("malformed encoding: {0}")]
    MalformedEncoding(String),
}

/// A validated table `k0 > b1 < k1 > b2 < .. kr`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PastingScheme {
    tops: Vec<usize>,
    bottoms: Vec<usize>,
}

impl PastingScheme {
    pub fn new(tops: Vec<usize>, bottoms: Vec<usize>) -> Result<Self, SchemeError> {
        if tops.is_empty() || bottoms.len() + 1 != tops.len() {
            return Err(SchemeError::LengthMismatch {
                tops: tops.len(),
                expected: tops.len().saturating_sub(1),
                got: bottoms.len(),
            });
        }
        for (i, &b) in bottoms.iter().enumerate() {
            if b >= tops[i] || b >= tops[i + 1] {
                return Err(SchemeError::ZigzagViolation { index: i + 1 });
            }
        }
        Ok(PastingScheme { tops, bottoms })
    }

    /// The single-column scheme `[n]`.
    pub fn point(n: usize) -> Self {
        PastingScheme {
            tops: vec![n],
            bottoms: vec![],
        }
    }

    pub fn tops(&self) -> &[usize] {
        &self.tops
    }

    pub fn bottoms(&self) -> &[usize] {
        &self.bottoms
    }

    pub fn rank(&self) -> usize {
        self.bottoms.len()
    }

    pub fn height(&self) -> usize {
        *self.tops.iter().max().expect("non-empty")
    }

    pub fn at_dim(self, dim: usize) -> Result<SchemeCell, SchemeError> {
        SchemeCell::new(self, dim)
    }

    pub fn to_zigzag(&self) -> ZigZag {
        let mut seq = vec![-1i64];
        let mut cur = -1i64;
        let mut walk = |target: i64, seq: &mut Vec<i64>| {
            while cur < target {
                cur += 1;
                seq.push(cur);
            }
            while cur > target {
                cur -= 1;
                seq.push(cur);
            }
        };
        for i in 0..self.tops.len() {
            if i > 0 {
                walk(self.bottoms[i - 1] as i64, &mut seq);
            }
            walk(self.tops[i] as i64, &mut seq);
        }
        walk(-1, &mut seq);
        ZigZag { seq }
    }

    pub fn to_nested(&self) -> String {
        self.to_zigzag().to_nested()
    }
}

/// Checks integer rows and builds a scheme.
pub fn validate_scheme(tops: &[i64], bottoms: &[i64]) -> Result<PastingScheme, SchemeError> {
    let conv = |v: &[i64]| -> Result<Vec<usize>, SchemeError> {
        v.iter()
            .map(|&x| usize::try_from(x).map_err(|_| SchemeError::NegativeEntry(x)))
            .collect()
    };
    PastingScheme::new(conv(tops)?, conv(bottoms)?)
}

impl fmt::Display for PastingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.bottoms.is_empty() {
            write!(f, "[{}]", join(&self.tops))
        } else {
            write!(f, "[{} / {}]", join(&self.tops), join(&self.bottoms))
        }
    }
}

/// A scheme regarded as an n-cell of the terminal strict omega-category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchemeCell {
    scheme: PastingScheme,
    dim: usize,
}

impl SchemeCell {
    pub fn new(scheme: PastingScheme, dim: usize) -> Result<Self, SchemeError> {
        let max = scheme.height();
        if max > dim {
            return Err(SchemeError::DimTooSmall { max, dim });
        }
        Ok(SchemeCell { scheme, dim })
    }

    /// Uses the height of the table as dimension.
    pub fn tight(scheme: PastingScheme) -> Self {
        let dim = scheme.height();
        SchemeCell { scheme, dim }
    }

    pub fn from_rows(tops: Vec<usize>, bottoms: Vec<usize>, dim: usize) -> Result<Self, SchemeError> {
        SchemeCell::new(PastingScheme::new(tops, bottoms)?, dim)
    }

    /// `[m]` as an n-cell.
    pub fn column(m: usize, dim: usize) -> Self {
        assert!(m <= dim, "column height above dimension");
        SchemeCell {
            scheme: PastingScheme::point(m),
            dim,
        }
    }

    pub fn scheme(&self) -> &PastingScheme {
        &self.scheme
    }

    pub fn into_scheme(self) -> PastingScheme {
        self.scheme
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tops(&self) -> &[usize] {
        &self.scheme.tops
    }

    pub fn bottoms(&self) -> &[usize] {
        &self.scheme.bottoms
    }

    pub fn rank(&self) -> usize {
        self.scheme.rank()
    }

    /// Same table, different ambient dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Self, SchemeError> {
        SchemeCell::new(self.scheme.clone(), dim)
    }

    pub fn is_degenerate(&self) -> bool {
        self.scheme.height() < self.dim
    }

    /// Number of columns reaching the full dimension.
    pub fn fdl_norm(&self) -> usize {
        self.tops().iter().filter(|&&k| k == self.dim).count()
    }

    /// Maximal runs of columns above level `m`, left to right, as inclusive index pairs.
    pub fn transversal_components(&self, m: usize) -> Result<Vec<(usize, usize)>, SchemeError> {
        if m >= self.dim {
            return Err(SchemeError::DimensionOutOfRange { m, dim: self.dim });
        }
        Ok(components(self.tops(), self.bottoms(), m))
    }

    /// The m-dimensional source (equal to the target) of this cell.
    pub fn boundary(&self, m: usize) -> Result<SchemeCell, SchemeError> {
        let comps = self.transversal_components(m)?;
        let mut tops = Vec::new();
        let mut bottoms = Vec::new();
        for (g, (lo, hi)) in groups(self.tops(), &comps).into_iter().enumerate() {
            if g > 0 {
                bottoms.push(self.bottoms()[lo - 1]);
            }
            tops.push(if hi > lo || self.tops()[lo] > m {
                m
            } else {
                self.tops()[lo]
            });
        }
        Ok(SchemeCell {
            scheme: PastingScheme { tops, bottoms },
            dim: m,
        })
    }

    /// Removes (or lowers) the full-dimensional column `i`.
    pub fn delta(&self, i: usize) -> Result<SchemeCell, SchemeError> {
        let r = self.rank();
        if i > r {
            return Err(SchemeError::IndexOutOfRange { index: i, rank: r });
        }
        let n = self.dim;
        if self.tops()[i] != n {
            return Err(SchemeError::NotFullDimensional {
                index: i,
                height: self.tops()[i],
                dim: n,
            });
        }
        let mut tops = self.tops().to_vec();
        let mut bottoms = self.bottoms().to_vec();
        match delta_case(self, i) {
            DeltaCase::RemoveLeft => {
                tops.remove(i);
                bottoms.remove(i - 1);
            }
            DeltaCase::RemoveRight => {
                tops.remove(i);
                bottoms.remove(i);
            }
            DeltaCase::Lower => tops[i] = n - 1,
        }
        Ok(SchemeCell {
            scheme: PastingScheme { tops, bottoms },
            dim: n,
        })
    }

    pub fn suspend(&self) -> SchemeCell {
        SchemeCell {
            scheme: PastingScheme {
                tops: self.tops().iter().map(|k| k + 1).collect(),
                bottoms: self.bottoms().iter().map(|k| k + 1).collect(),
            },
            dim: self.dim + 1,
        }
    }
}

impl fmt::Display for SchemeCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.scheme, self.dim)
    }
}

/// Which of the three rewriting cases applies to column `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaCase {
    RemoveLeft,
    RemoveRight,
    Lower,
}

/// Assumes column `i` is full-dimensional.
pub fn delta_case(c: &SchemeCell, i: usize) -> DeltaCase {
    let n = c.dim();
    if i > 0 && c.bottoms()[i - 1] + 1 == n {
        DeltaCase::RemoveLeft
    } else if i < c.rank() && c.bottoms()[i] + 1 == n {
        DeltaCase::RemoveRight
    } else {
        DeltaCase::Lower
    }
}

pub(crate) fn components(tops: &[usize], bottoms: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tops.len() {
        if tops[i] > m {
            let start = i;
            while i + 1 < tops.len() && bottoms[i] >= m {
                i += 1;
            }
            out.push((start, i));
        }
        i += 1;
    }
    out
}

/// Splits `0..len` into the components plus singleton columns outside them.
pub(crate) fn groups(tops: &[usize], comps: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut c = comps.iter().peekable();
    while i < tops.len() {
        match c.peek() {
            Some(&&(lo, hi)) if lo == i => {
                out.push((lo, hi));
                c.next();
                i = hi + 1;
            }
            _ => {
                out.push((i, i));
                i += 1;
            }
        }
    }
    out
}

/// A smooth integer walk from -1 to -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZigZag {
    seq: Vec<i64>,
}

impl ZigZag {
    pub fn new(seq: Vec<i64>) -> Result<Self, SchemeError> {
        let bad = |msg: &str| Err(SchemeError::MalformedEncoding(msg.to_string()));
        if seq.len() < 3 {
            return bad("zig-zag needs at least three entries");
        }
        if seq[0] != -1 || *seq.last().unwrap() != -1 {
            return bad("zig-zag must start and end at -1");
        }
        for w in seq.windows(2) {
            if (w[0] - w[1]).abs() != 1 {
                return bad("zig-zag steps must be +1 or -1");
            }
        }
        if seq[1..seq.len() - 1].iter().any(|&m| m < 0) {
            return bad("zig-zag interior must stay non-negative");
        }
        Ok(ZigZag { seq })
    }

    pub fn seq(&self) -> &[i64] {
        &self.seq
    }

    pub fn to_scheme(&self) -> PastingScheme {
        let s = &self.seq;
        let mut tops = Vec::new();
        let mut bottoms = Vec::new();
        for i in 1..s.len() - 1 {
            if s[i - 1] == s[i + 1] {
                if s[i] > s[i - 1] {
                    tops.push(s[i] as usize);
                } else {
                    bottoms.push(s[i] as usize);
                }
            }
        }
        PastingScheme { tops, bottoms }
    }

    pub fn to_nested(&self) -> String {
        let mut out = String::new();
        for w in self.seq.windows(2) {
            let up = w[1] > w[0];
            match (out.chars().last(), up) {
                (Some('['), false) => out.push_str(" ]"),
                (Some(']'), true) => out.push_str(",["),
                (_, true) => out.push('['),
                (_, false) => out.push(']'),
            }
        }
        out
    }

    /// Bracket-depth scan; commas and whitespace are ignored.
    pub fn from_nested(text: &str) -> Result<Self, SchemeError> {
        let mut seq = vec![-1i64];
        let mut cur = -1i64;
        for ch in text.chars() {
            match ch {
                '[' => cur += 1,
                ']' => cur -= 1,
                ',' => continue,
                c if c.is_whitespace() => continue,
                c => {
                    return Err(SchemeError::MalformedEncoding(format!(
                        "unexpected character {c:?} in nested list"
                    )))
                }
            }
            seq.push(cur);
            if cur < -1 {
                return Err(SchemeError::MalformedEncoding("unbalanced brackets".into()));
            }
        }
        ZigZag::new(seq)
    }
}

impl fmt::Display for ZigZag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.seq.iter().map(|x| x.to_string()).collect();
        write!(f, "zz[{}]", items.join(","))
    }
}

/// One of the three textual encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Table,
    ZigZag,
    Nested,
}

impl std::str::FromStr for Encoding {
    type Err = SchemeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Encoding::Table),
            "zigzag" | "zz" => Ok(Encoding::ZigZag),
            "nested" => Ok(Encoding::Nested),
            other => Err(SchemeError::MalformedEncoding(format!("unknown encoding {other}"))),
        }
    }
}

/// Guesses the encoding of a textual scheme.
pub fn detect_encoding(text: &str) -> Encoding {
    let t = text.trim_start();
    if t.starts_with("zz") {
        Encoding::ZigZag
    } else if t.chars().any(|c| c.is_ascii_digit()) {
        Encoding::Table
    } else {
        Encoding::Nested
    }
}

pub fn parse_scheme(text: &str) -> Result<PastingScheme, SchemeError> {
    match detect_encoding(text) {
        Encoding::Table => parse_table(text),
        Encoding::ZigZag => Ok(parse_zigzag(text)?.to_scheme()),
        Encoding::Nested => Ok(ZigZag::from_nested(text)?.to_scheme()),
    }
}

/// Parses `[..]` or `[.. / ..]`, optionally followed by `@n`.
pub fn parse_scheme_cell(text: &str) -> Result<SchemeCell, SchemeError> {
    match text.rsplit_once('@') {
        Some((body, dim)) => {
            let dim: usize = dim
                .trim()
                .parse()
                .map_err(|_| SchemeError::MalformedEncoding(format!("bad dimension {dim:?}")))?;
            SchemeCell::new(parse_scheme(body)?, dim)
        }
        None => Ok(SchemeCell::tight(parse_scheme(text)?)),
    }
}

fn parse_int_list(body: &str) -> Result<Vec<i64>, SchemeError> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(vec![]);
    }
    body.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<i64>()
                .map_err(|_| SchemeError::MalformedEncoding(format!("bad integer {x:?}")))
        })
        .collect()
}

fn strip_brackets(text: &str) -> Result<&str, SchemeError> {
    let t = text.trim();
    t.strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| SchemeError::MalformedEncoding(format!("expected [..], got {t:?}")))
}

pub fn parse_table(text: &str) -> Result<PastingScheme, SchemeError> {
    let inner = strip_brackets(text)?;
    let (top, bottom) = match inner.split_once('/') {
        Some((t, b)) => {
            if b.trim().is_empty() {
                return Err(SchemeError::MalformedEncoding(
                    "empty bottom row; write rank-0 schemes without '/'".into(),
                ));
            }
            (t, Some(b))
        }
        None => (inner, None),
    };
    let tops = parse_int_list(top)?;
    if tops.is_empty() {
        return Err(SchemeError::MalformedEncoding("empty top row".into()));
    }
    let bottoms = match bottom {
        Some(b) => parse_int_list(b)?,
        None => vec![],
    };
    validate_scheme(&tops, &bottoms)
}

pub fn parse_zigzag(text: &str) -> Result<ZigZag, SchemeError> {
    let t = text.trim();
    let rest = t
        .strip_prefix("zz")
        .ok_or_else(|| SchemeError::MalformedEncoding("zig-zag must start with zz".into()))?;
    ZigZag::new(parse_int_list(strip_brackets(rest)?)?)
}

/// Renders a scheme in the requested encoding.
pub fn render(scheme: &PastingScheme, enc: Encoding) -> String {
    match enc {
        Encoding::Table => scheme.to_string(),
        Encoding::ZigZag => scheme.to_zigzag().to_string(),
        Encoding::Nested => scheme.to_nested(),
    }
}

/// Converts between encodings.
pub fn convert_encoding(text: &str, from: Encoding, to: Encoding) -> Result<String, SchemeError> {
    let scheme = match from {
        Encoding::Table => parse_table(text)?,
        Encoding::ZigZag => parse_zigzag(text)?.to_scheme(),
        Encoding::Nested => ZigZag::from_nested(text)?.to_scheme(),
    };
    Ok(render(&scheme, to))
}
