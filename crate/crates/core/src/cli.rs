//! Command-line front end. Every subcommand maps onto one library operation.
//!
//! Inputs are given inline or as `@path`. Labelled diagrams and cells are read
//! over the carrier loaded with `--set FILE.json`. Exit codes: 0 on success,
//! 1 on a domain error or failed self-test, 2 on a syntax or usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::globular::GlobError;
use crate::instruction::{coherence_instr, delta_instr, parse_instr, sp, Instr, InstrError};
use crate::scheme::{parse_scheme_cell, render, Encoding, SchemeCell, SchemeError};
use crate::selftest::{self, Check, Suite};
use crate::sexpr::SyntaxError;
use crate::strict::{
    compose_along, delta_diagram, diagram_boundary, parse_diagram, DeltaVariant, Diagram, DiagramError, Point,
};
use crate::weak::{coherence_cell, delta_exact, paste, unit_law_cell, MCell, MarkedCarrier, WeakError};
use crate::witness::{core_filter, validate_witness, CoreMode, Engine, InverseWitness, WitnessError};

#[derive(Debug, Parser)]
#[command(
    name = "omegapaste",
    version,
    about = "Pasting schemes, free omega-categories and invertibility witnesses"
)]
pub struct Cli {
    /// Globular set (JSON, optionally with `marks` and `depth`) that cell names refer to.
    #[arg(long, global = true, value_name = "FILE.json")]
    pub set: Option<PathBuf>,
    /// Print results as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Auto,
    Scheme,
    Diagram,
    Instr,
    Cell,
    Witness,
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Source,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Table,
    Zigzag,
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Tikz,
}

/// A suite name or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteArg {
    All,
    One(Suite),
}

fn parse_suite(s: &str) -> Result<SuiteArg, String> {
    if s == "all" {
        Ok(SuiteArg::All)
    } else {
        s.parse().map(SuiteArg::One)
    }
}

/// `inf` or a dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level(pub Option<usize>);

fn parse_level(s: &str) -> Result<Level, String> {
    match s {
        "inf" | "infinity" => Ok(Level(None)),
        n => n
            .parse()
            .map(|n| Level(Some(n)))
            .map_err(|_| format!("expected a number or `inf`, got `{n}`")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an input, printing its canonical form.
    Validate {
        input: String,
        #[arg(long, value_enum, default_value = "auto")]
        kind: Kind,
    },
    /// Source or target boundary at level m of a scheme or labelled diagram.
    Boundary {
        input: String,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "source")]
        side: Side,
    },
    /// Re-encode a pasting scheme.
    Convert {
        input: String,
        #[arg(long, value_enum)]
        to: EncodingArg,
    },
    /// Glue two schemes or diagrams along their level-m boundary.
    Compose {
        first: String,
        second: String,
        #[arg(long)]
        m: usize,
    },
    /// The standard pasting instruction of an arity.
    Sp { arity: String },
    /// The contraction between two parallel instructions of the same arity.
    Coherence {
        first: String,
        second: String,
        /// Evaluate on this diagram instead of printing the instruction.
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Delete column i of a scheme, instruction or diagram.
    Delta {
        input: String,
        #[arg(long)]
        i: usize,
        #[arg(long, conflicts_with = "minus")]
        plus: bool,
        #[arg(long)]
        minus: bool,
    },
    /// Evaluate the standard pasting of a labelled diagram.
    Paste { diagram: String },
    /// The cell removing the identity at column i of a diagram.
    Unitlaw {
        diagram: String,
        #[arg(long)]
        i: usize,
        /// Instruction to apply; defaults to the standard one of the diagram's shape.
        #[arg(long)]
        instr: Option<String>,
    },
    /// Build an invertibility witness for a cell.
    Invert {
        cell: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Enumerate small cells and keep those certified invertible.
    Core {
        /// Cells above this dimension must be invertible; `inf` asks for every positive dimension.
        #[arg(long, value_parser = parse_level, default_value = "inf")]
        n: Level,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Largest term size enumerated.
        #[arg(long, default_value_t = 9)]
        bound: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Run a property suite (`schemes`, `monad`, `instruction`, `algebra`, `witness`, `golden` or `all`).
    Selftest {
        #[arg(value_parser = parse_suite)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per property; each suite has its own default.
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Draw a scheme or labelled diagram.
    Emit {
        input: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Syntax(_) | CliError::Usage(_) => 2,
        }
    }
}

fn scheme_is_syntax(e: &SchemeError) -> bool {
    matches!(e, SchemeError::MalformedEncoding(_))
}

fn diagram_is_syntax(e: &DiagramError) -> bool {
    match e {
        DiagramError::Syntax(_) => true,
        DiagramError::Scheme(s) => scheme_is_syntax(s),
        _ => false,
    }
}

fn instr_is_syntax(e: &InstrError) -> bool {
    match e {
        InstrError::Syntax(_) | InstrError::Malformed(_) => true,
        InstrError::Scheme(s) => scheme_is_syntax(s),
        InstrError::Diagram(d) => diagram_is_syntax(d),
        _ => false,
    }
}

fn weak_is_syntax(e: &WeakError) -> bool {
    match e {
        WeakError::Syntax(_) | WeakError::Malformed(_) => true,
        WeakError::Instr(i) => instr_is_syntax(i),
        WeakError::Diagram(d) => diagram_is_syntax(d),
        _ => false,
    }
}

fn classify(syntax: bool, msg: String) -> CliError {
    if syntax {
        CliError::Syntax(msg)
    } else {
        CliError::Domain(msg)
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        classify(scheme_is_syntax(&e), e.to_string())
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        classify(diagram_is_syntax(&e), e.to_string())
    }
}

impl From<InstrError> for CliError {
    fn from(e: InstrError) -> Self {
        classify(instr_is_syntax(&e), e.to_string())
    }
}

impl From<WeakError> for CliError {
    fn from(e: WeakError) -> Self {
        classify(weak_is_syntax(&e), e.to_string())
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Weak(w) => w.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        CliError::Syntax(e.to_string())
    }
}

impl From<GlobError> for CliError {
    fn from(e: GlobError) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Result of one command: text for the terminal, a JSON form and an exit code.
#[derive(Debug, Clone)]
pub struct Reply {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Reply {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Reply {
            text: text.into(),
            json,
            code: 0,
        }
    }
}

/// Reads `@path` from disk; anything else is the input itself.
pub fn read_input(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn load_set(text: &str) -> Result<MarkedCarrier, CliError> {
    serde_json::from_str::<Value>(text).map_err(|e| CliError::Syntax(format!("set JSON: {e}")))?;
    Ok(MarkedCarrier::from_json(text)?)
}

fn carrier(cli: &Cli) -> Result<MarkedCarrier, CliError> {
    let path = cli
        .set
        .as_ref()
        .ok_or_else(|| CliError::Usage("this input names cells; pass --set FILE.json".into()))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    load_set(&text)
}

/// Diagram over the carrier; entries are cell terms.
pub fn parse_cell_diagram(x: &MarkedCarrier, text: &str) -> Result<Diagram<MCell>, CliError> {
    let mut first_err = None;
    let parsed = parse_diagram(x, text, |t| match x.parse_cell(t) {
        Ok(c) => Some(c),
        Err(e) => {
            first_err.get_or_insert(e);
            None
        }
    });
    match (parsed, first_err) {
        (Ok(d), _) => Ok(d),
        (Err(_), Some(e)) => Err(e.into()),
        (Err(e), None) => Err(e.into()),
    }
}

/// Tight schemes print without their dimension.
pub fn show_scheme(k: &SchemeCell) -> String {
    if k.dim() == k.scheme().height() {
        k.scheme().to_string()
    } else {
        k.to_string()
    }
}

fn looks_like_scheme(text: &str) -> bool {
    let t = text.trim();
    let body = t.strip_prefix("zz").unwrap_or(t);
    body.chars()
        .all(|c| c.is_ascii_digit() || "[]/,@ -".contains(c) || c.is_whitespace())
}

fn detect_kind(text: &str) -> Kind {
    let t = text.trim_start();
    if t.starts_with('{') {
        Kind::Set
    } else if t.starts_with("(witness") {
        Kind::Witness
    } else if let Some(rest) = t.strip_prefix('(') {
        let head: String = rest.trim_start().chars().take_while(|c| c.is_alphanumeric()).collect();
        match head.as_str() {
            "e" | "sp" | "kappa" | "coh" | "delta" | "mu" => Kind::Instr,
            _ => Kind::Cell,
        }
    } else if !t.trim().is_empty() && looks_like_scheme(t) {
        Kind::Scheme
    } else if t.starts_with('[') {
        Kind::Diagram
    } else {
        Kind::Cell
    }
}

/// Runs a parsed command.
pub fn dispatch(cli: &Cli) -> Result<Reply, CliError> {
    match &cli.command {
        Command::Validate { input, kind } => validate(cli, &read_input(input)?, *kind),
        Command::Boundary { input, m, side } => {
            let text = read_input(input)?;
            let target = *side == Side::Target;
            if looks_like_scheme(&text) {
                let b = parse_scheme_cell(&text)?.boundary(*m)?;
                Ok(Reply::ok(show_scheme(&b), json!({ "scheme": show_scheme(&b) })))
            } else {
                let x = carrier(cli)?;
                let d = parse_cell_diagram(&x, &text)?;
                let b = diagram_boundary(&x, &d, *m, target)?;
                Ok(Reply::ok(b.to_string(), json!({ "diagram": b.to_string() })))
            }
        }
        Command::Convert { input, to } => {
            let k = crate::scheme::parse_scheme(&read_input(input)?)?;
            let enc = match to {
                EncodingArg::Table => Encoding::Table,
                EncodingArg::Zigzag => Encoding::ZigZag,
                EncodingArg::Nested => Encoding::Nested,
            };
            let out = render(&k, enc);
            Ok(Reply::ok(out.clone(), json!({ "scheme": out })))
        }
        Command::Compose { first, second, m } => {
            let (a, b) = (read_input(first)?, read_input(second)?);
            if looks_like_scheme(&a) && looks_like_scheme(&b) {
                let (ka, kb) = (parse_scheme_cell(&a)?, parse_scheme_cell(&b)?);
                let d = compose_along(
                    &Point,
                    &crate::strict::shape_diagram(&ka),
                    &crate::strict::shape_diagram(&kb),
                    *m,
                )?;
                Ok(Reply::ok(
                    show_scheme(&d.shape),
                    json!({ "scheme": show_scheme(&d.shape) }),
                ))
            } else {
                let x = carrier(cli)?;
                let d = compose_along(&x, &parse_cell_diagram(&x, &a)?, &parse_cell_diagram(&x, &b)?, *m)?;
                Ok(Reply::ok(
                    d.to_string(),
                    json!({ "diagram": d.to_string(), "shape": d.shape.to_string() }),
                ))
            }
        }
        Command::Sp { arity } => {
            let phi = sp(&parse_scheme_cell(&read_input(arity)?)?);
            Ok(Reply::ok(instr_text(&phi), instr_json(&phi)))
        }
        Command::Coherence { first, second, diagram } => {
            let phi = parse_instr(&read_input(first)?)?;
            let phi2 = parse_instr(&read_input(second)?)?;
            match diagram {
                None => {
                    let c = coherence_instr(&phi, &phi2, phi.arity())?;
                    Ok(Reply::ok(instr_text(&c), instr_json(&c)))
                }
                Some(d) => {
                    let x = carrier(cli)?;
                    let c = coherence_cell(&phi, &phi2, &parse_cell_diagram(&x, &read_input(d)?)?)?;
                    Ok(Reply::ok(cell_text(&c), cell_json(&c)))
                }
            }
        }
        Command::Delta { input, i, plus, minus } => delta(cli, &read_input(input)?, *i, *plus, *minus),
        Command::Paste { diagram } => {
            let x = carrier(cli)?;
            let d = parse_cell_diagram(&x, &read_input(diagram)?)?;
            let c = paste(&d.shape, &d)?;
            Ok(Reply::ok(cell_text(&c), cell_json(&c)))
        }
        Command::Unitlaw { diagram, i, instr } => {
            let x = carrier(cli)?;
            let d = parse_cell_diagram(&x, &read_input(diagram)?)?;
            let phi = match instr {
                Some(t) => parse_instr(&read_input(t)?)?,
                None => sp(&d.shape),
            };
            let c = unit_law_cell(&phi, &d, *i)?;
            Ok(Reply::ok(cell_text(&c), cell_json(&c)))
        }
        Command::Invert { cell, depth } => {
            let x = carrier(cli)?;
            let c = x.parse_cell(&read_input(cell)?)?;
            let mut engine = Engine::new(&x);
            let w = engine.witness(&c, *depth)?;
            validate_witness(&w, *depth).map_err(CliError::Domain)?;
            Ok(Reply::ok(
                w.to_string(),
                json!({ "witness": w.to_string(), "depth": w.depth() }),
            ))
        }
        Command::Core {
            n,
            depth,
            bound,
            max_dim,
        } => {
            let x = carrier(cli)?;
            let mode = match n.0 {
                None => CoreMode::Groupoid,
                Some(k) => CoreMode::Truncated(k),
            };
            let report = core_filter(&x, mode, *depth, *bound, *max_dim);
            let kept: Vec<&MCell> = report.cells.iter().filter(|c| report.core.contains(*c)).collect();
            let mut text = format!(
                "enumerated {}, core {}, closed under boundaries: {}, closed under composites: {}\n",
                report.cells.len(),
                kept.len(),
                yes_no(report.closed_under_boundary),
                yes_no(report.closed_under_composition)
            );
            for c in &kept {
                let _ = writeln!(text, "{} {}", c.dim(), c);
            }
            let json = json!({
                "enumerated": report.cells.len(),
                "core": kept.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "closed_under_boundary": report.closed_under_boundary,
                "closed_under_composition": report.closed_under_composition,
            });
            Ok(Reply::ok(text.trim_end(), json))
        }
        Command::Selftest { suite, seed, cases } => {
            let suites: Vec<Suite> = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                SuiteArg::One(s) => vec![*s],
            };
            Ok(selftest_reply(&selftest::run_all(&suites, *seed, *cases), *seed))
        }
        Command::Emit { input, format } => emit(cli, &read_input(input)?, *format),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn instr_text(phi: &Instr) -> String {
    format!("{phi}\narity {}", show_scheme(phi.arity()))
}

fn instr_json(phi: &Instr) -> Value {
    let mut v = json!({ "instr": phi.to_string(), "arity": phi.arity().to_string() });
    if phi.dim() > 0 {
        v["src"] = json!(phi.src().to_string());
        v["tgt"] = json!(phi.tgt().to_string());
    }
    v
}

fn cell_text(c: &MCell) -> String {
    if c.dim() == 0 {
        format!("{c}\ndim 0")
    } else {
        format!("{c}\ndim {}\nsrc {}\ntgt {}", c.dim(), c.src(), c.tgt())
    }
}

fn cell_json(c: &MCell) -> Value {
    let mut v = json!({ "cell": c.to_string(), "dim": c.dim() });
    if c.dim() > 0 {
        v["src"] = json!(c.src().to_string());
        v["tgt"] = json!(c.tgt().to_string());
    }
    v
}

fn validate(cli: &Cli, text: &str, kind: Kind) -> Result<Reply, CliError> {
    let kind = if kind == Kind::Auto { detect_kind(text) } else { kind };
    match kind {
        Kind::Scheme => {
            let k = parse_scheme_cell(text)?;
            Ok(Reply::ok(
                format!("scheme {}", show_scheme(&k)),
                json!({ "kind": "scheme", "value": show_scheme(&k) }),
            ))
        }
        Kind::Instr => {
            let phi = parse_instr(text)?;
            let mut v = instr_json(&phi);
            v["kind"] = json!("instr");
            Ok(Reply::ok(format!("instr {phi}"), v))
        }
        Kind::Set => {
            let x = load_set(text)?;
            let counts = x.base().counts();
            Ok(Reply::ok(
                format!("set {counts:?}"),
                json!({ "kind": "set", "counts": counts, "depth": x.depth() }),
            ))
        }
        Kind::Diagram => {
            let x = carrier(cli)?;
            let d = parse_cell_diagram(&x, text)?;
            Ok(Reply::ok(
                format!("diagram {d} shape {}", show_scheme(&d.shape)),
                json!({ "kind": "diagram", "value": d.to_string(), "shape": d.shape.to_string() }),
            ))
        }
        Kind::Cell => {
            let x = carrier(cli)?;
            let c = x.parse_cell(text)?;
            let mut v = cell_json(&c);
            v["kind"] = json!("cell");
            Ok(Reply::ok(format!("cell {c} dim {}", c.dim()), v))
        }
        Kind::Witness => {
            let x = carrier(cli)?;
            let w = InverseWitness::parse(&x, text)?;
            let depth = w.depth();
            validate_witness(&w, depth).map_err(CliError::Domain)?;
            Ok(Reply::ok(
                format!("witness valid at depth {depth}"),
                json!({ "kind": "witness", "depth": depth, "subject": w.subject.to_string() }),
            ))
        }
        Kind::Auto => unreachable!("resolved above"),
    }
}

fn delta(cli: &Cli, text: &str, i: usize, plus: bool, minus: bool) -> Result<Reply, CliError> {
    let variant = match (plus, minus) {
        (true, _) => DeltaVariant::Plus,
        (_, true) => DeltaVariant::Minus,
        _ => DeltaVariant::Exact,
    };
    match detect_kind(text) {
        Kind::Scheme => {
            let k = parse_scheme_cell(text)?.delta(i)?;
            Ok(Reply::ok(show_scheme(&k), json!({ "scheme": show_scheme(&k) })))
        }
        Kind::Instr => {
            if variant != DeltaVariant::Exact {
                return Err(CliError::Usage("--plus and --minus apply to diagrams only".into()));
            }
            let phi = delta_instr(&parse_instr(text)?, i)?;
            Ok(Reply::ok(instr_text(&phi), instr_json(&phi)))
        }
        _ => {
            let x = carrier(cli)?;
            let d = parse_cell_diagram(&x, text)?;
            let out = match variant {
                DeltaVariant::Exact => delta_exact(&d, i)?,
                v => delta_diagram(&x, &d, i, v, None)?,
            };
            Ok(Reply::ok(
                out.to_string(),
                json!({ "diagram": out.to_string(), "shape": out.shape.to_string() }),
            ))
        }
    }
}

fn selftest_reply(results: &[(Suite, Vec<Check>)], seed: u64) -> Reply {
    let mut text = String::new();
    let mut suites = Vec::new();
    let mut all_passed = true;
    for (suite, checks) in results {
        let _ = writeln!(text, "suite {suite} (seed {seed})");
        let mut rows = Vec::new();
        for c in checks {
            all_passed &= c.passed();
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            let plural = if c.cases == 1 { "" } else { "s" };
            let _ = writeln!(text, "  {verdict} {} ({} case{plural})", c.name, c.cases);
            for f in c.failures.iter().take(3) {
                let _ = writeln!(text, "    counterexample seed {} size {}: {}", f.seed, f.size, f.detail);
            }
            if c.failures.len() > 3 {
                let _ = writeln!(text, "    ... {} more", c.failures.len() - 3);
            }
            rows.push(json!({
                "check": c.name,
                "cases": c.cases,
                "passed": c.passed(),
                "counterexamples": c.failures.iter().map(|f| json!({ "seed": f.seed, "size": f.size, "detail": f.detail })).collect::<Vec<_>>(),
            }));
        }
        suites.push(json!({ "suite": suite.to_string(), "checks": rows }));
    }
    Reply {
        text: text.trim_end().to_string(),
        json: json!({ "seed": seed, "passed": all_passed, "suites": suites }),
        code: if all_passed { 0 } else { 1 },
    }
}

/// Columns as bars of their height, with the bottoms printed underneath.
pub fn ascii_scheme(k: &SchemeCell) -> String {
    let tops = k.tops();
    let h = k.dim();
    let mut out = String::new();
    for level in (0..=h).rev() {
        let _ = write!(out, "{level:>2} |");
        for (j, &t) in tops.iter().enumerate() {
            if j > 0 {
                out.push_str("   ");
            }
            out.push(if t >= level { '#' } else { ' ' });
        }
        out = out.trim_end().to_string();
        out.push('\n');
    }
    out.push_str("   +");
    out.push_str(&"-".repeat(tops.len() * 4 - 3));
    out.push_str("\n    ");
    for &b in k.bottoms() {
        let _ = write!(out, "  {b:<2}");
    }
    out.trim_end().to_string()
}

/// The zig-zag walk of a scheme as a TikZ path, columns marked at their peaks.
pub fn tikz_scheme(k: &SchemeCell) -> String {
    let z = k.scheme().to_zigzag();
    let pts: Vec<String> = z.seq().iter().enumerate().map(|(x, y)| format!("({x},{y})")).collect();
    let mut out = String::from("\\begin{tikzpicture}[x=0.5cm,y=0.5cm]\n");
    let _ = writeln!(out, "  \\draw[gray!40] (0,-1) -- ({},-1);", z.seq().len() - 1);
    let _ = writeln!(out, "  \\draw[thick] {};", pts.join(" -- "));
    let seq = z.seq();
    let mut col = 0;
    for x in 1..seq.len().saturating_sub(1) {
        if seq[x] > seq[x - 1] && seq[x] > seq[x + 1] {
            let _ = writeln!(out, "  \\node[above] at ({x},{}) {{$k_{{{col}}}$}};", seq[x]);
            col += 1;
        }
    }
    out.push_str("\\end{tikzpicture}");
    out
}

/// A labelled diagram as two aligned rows.
pub fn ascii_diagram(d: &Diagram<MCell>) -> String {
    let tops: Vec<String> = d.tops.iter().map(|c| c.to_string()).collect();
    let bots: Vec<String> = d.bottoms.iter().map(|c| c.to_string()).collect();
    let width = tops.iter().chain(&bots).map(String::len).max().unwrap_or(1);
    let mut top_row = String::new();
    let mut bot_row = " ".repeat(width / 2 + 2);
    for (j, t) in tops.iter().enumerate() {
        let _ = write!(top_row, "{t:^width$}  ");
        if let Some(b) = bots.get(j) {
            let _ = write!(bot_row, "{b:^width$}  ");
        }
    }
    format!(
        "{}\n{}\nshape {}",
        top_row.trim_end(),
        bot_row.trim_end(),
        show_scheme(&d.shape)
    )
}

fn emit(cli: &Cli, text: &str, format: Format) -> Result<Reply, CliError> {
    if looks_like_scheme(text) {
        let k = parse_scheme_cell(text)?;
        let out = match format {
            Format::Ascii => ascii_scheme(&k),
            Format::Tikz => tikz_scheme(&k),
        };
        return Ok(Reply::ok(out.clone(), json!({ "rendering": out })));
    }
    let x = carrier(cli)?;
    let d = parse_cell_diagram(&x, text)?;
    let out = match format {
        Format::Ascii => ascii_diagram(&d),
        Format::Tikz => tikz_scheme(&d.shape),
    };
    Ok(Reply::ok(out.clone(), json!({ "rendering": out })))
}

/// Parses arguments, runs the command and prints its output; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(reply) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&reply.json).expect("serializable")
            } else {
                reply.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            reply.code
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(
                    std::io::stdout().lock(),
                    "{}",
                    json!({ "error": e.to_string(), "code": e.exit_code() })
                );
            } else {
                eprintln!("omegapaste: {e}");
            }
            e.exit_code()
        }
    }
}
