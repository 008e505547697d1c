//! The line-oriented input format for batch verification runs.
//!
//! A spec file is UTF-8 text with `#` comments and bracketed section
//! headers.  Scalars are written `p/q` (or plain integers), formal sums as
//! `coeff word + coeff word + ...`, and words as `·`-joined names.
//!
//! ```text
//! [options]
//! kind = truncated-free        # or commutator-loday, commutator-pair,
//!                              #    associative, loday, loday-pair
//! max-weight = 4               # generated kinds: the truncation weight
//! t-order = 3                  # default cutoffs, overridable by flags
//!
//! [generators]
//! g1 1                         # name degree; explicit pairs add L or A
//! g2 0
//!
//! [deformation]
//! d0 = inner 1 g1·g2·g2        # adjoint by an element, or ...
//! d1 g1 = 1 g2                 # ... explicit values (on generators for
//!                              #     generated kinds, extended by the
//!                              #     Leibniz rule; on the whole basis
//!                              #     otherwise)
//!
//! [gauge]
//! h1 = inner 1 g2·g2           # degree-0 coefficients h_1, h_2, ...
//! ```
//!
//! Explicit kinds declare their basis under `[generators]` and their
//! structure constants under `[product]` (associative / the associative
//! part), `[bracket]` (Loday / the Loday part) and `[pair-action]`
//! (the mixed bracket), one relation per line: `a·b = 1 c + -1/2 d`.
//! Parsing validates everything: axioms, Leibniz rules and the square-zero
//! condition; diagnostics carry the offending line.

use crate::algebra::{
    build_commutator_loday, build_commutator_pair, build_truncated_free, AlgebraKind, AlgebraSpec,
    Deformation, Derivation,
};
use crate::gauge::GaugeGenerator;
use crate::multimap::MultiMap;
use crate::scalar::{self, Scalar};
use crate::space::{BasisSymbol, Component, Elem, Space, SymbolId, Word};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
    /// False for malformed text, true when well-formed content failed a
    /// semantic check (axioms, Leibniz rule, square-zero, degrees); the
    /// message then carries the failing check's witnesses.
    pub validation: bool,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
        validation: false,
    })
}

fn verr<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col: 1,
        msg: msg.into(),
        validation: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    TruncatedFree,
    CommutatorLoday,
    CommutatorPair,
    Associative,
    Loday,
    LodayPair,
}

impl FileKind {
    pub fn generated(self) -> bool {
        matches!(
            self,
            FileKind::TruncatedFree | FileKind::CommutatorLoday | FileKind::CommutatorPair
        )
    }

    pub fn algebra_kind(self) -> AlgebraKind {
        match self {
            FileKind::TruncatedFree | FileKind::Associative => AlgebraKind::Associative,
            FileKind::CommutatorLoday | FileKind::Loday => AlgebraKind::Loday,
            FileKind::CommutatorPair | FileKind::LodayPair => AlgebraKind::LodayPair,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FileKind::TruncatedFree => "truncated-free",
            FileKind::CommutatorLoday => "commutator-loday",
            FileKind::CommutatorPair => "commutator-pair",
            FileKind::Associative => "associative",
            FileKind::Loday => "loday",
            FileKind::LodayPair => "loday-pair",
        }
    }

    fn from_str(s: &str) -> Option<FileKind> {
        Some(match s {
            "truncated-free" => FileKind::TruncatedFree,
            "commutator-loday" => FileKind::CommutatorLoday,
            "commutator-pair" => FileKind::CommutatorPair,
            "associative" => FileKind::Associative,
            "loday" => FileKind::Loday,
            "loday-pair" => FileKind::LodayPair,
            _ => return None,
        })
    }
}

/// Cutoff options carried by the file; command-line flags take precedence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FileOptions {
    pub max_weight: Option<u64>,
    pub max_arity: Option<usize>,
    pub max_word_len: Option<usize>,
    pub t_order: Option<usize>,
}

/// A fully validated input: the algebra, its deformation and gauge data,
/// and the file-level options.
#[derive(Debug)]
pub struct SpecFile {
    pub kind: FileKind,
    pub algebra: AlgebraSpec,
    pub deformation: Option<Deformation>,
    pub gauge: Option<GaugeGenerator>,
    pub options: FileOptions,
    generators: Vec<(String, i64, Component)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Options,
    Generators,
    Product,
    Bracket,
    PairAction,
    Deformation,
    Gauge,
}

struct Line {
    number: usize,
    text: String,
}

fn split_sections(text: &str) -> Result<BTreeMap<&'static str, Vec<Line>>, ParseError> {
    let mut out: BTreeMap<&'static str, Vec<Line>> = BTreeMap::new();
    let mut section = Section::None;
    let mut nonempty = false;
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim().to_string();
        if line.is_empty() {
            continue;
        }
        nonempty = true;
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return err(number, raw.len(), "unterminated section header");
            }
            section = match &line[1..line.len() - 1] {
                "options" => Section::Options,
                "generators" => Section::Generators,
                "product" => Section::Product,
                "bracket" => Section::Bracket,
                "pair-action" => Section::PairAction,
                "deformation" => Section::Deformation,
                "gauge" => Section::Gauge,
                other => return err(number, 1, format!("unknown section `[{other}]`")),
            };
            continue;
        }
        let key = match section {
            Section::None => return err(number, 1, "content before the first section header"),
            Section::Options => "options",
            Section::Generators => "generators",
            Section::Product => "product",
            Section::Bracket => "bracket",
            Section::PairAction => "pair-action",
            Section::Deformation => "deformation",
            Section::Gauge => "gauge",
        };
        out.entry(key)
            .or_default()
            .push(Line { number, text: line });
    }
    if !nonempty {
        return err(1, 1, "empty file");
    }
    Ok(out)
}

fn parse_scalar(token: &str, line: usize) -> Result<Scalar, ParseError> {
    scalar::parse(token).ok_or(ParseError {
        line,
        col: 1,
        msg: format!("malformed scalar `{token}` (expected `p` or `p/q`)"),
        validation: false,
    })
}

fn resolve(space: &Space, name: &str, line: usize) -> Result<SymbolId, ParseError> {
    space.id(name).map_err(|_| ParseError {
        line,
        col: 1,
        msg: format!("unknown basis name `{name}`"),
        validation: false,
    })
}

/// `coeff word + coeff word + ...` or `0`.
fn parse_elem(space: &Space, text: &str, line: usize) -> Result<Elem, ParseError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Elem::zero());
    }
    let mut out = Elem::zero();
    for term in text.split('+') {
        let mut fields = term.split_whitespace();
        let (Some(coeff), Some(word), None) = (fields.next(), fields.next(), fields.next()) else {
            return err(
                line,
                1,
                format!("malformed term `{}` (expected `coeff word`)", term.trim()),
            );
        };
        let c = parse_scalar(coeff, line)?;
        let id = resolve(space, word, line)?;
        out.add_word(Word::single(id), c);
    }
    Ok(out)
}

struct DerivationTable {
    /// index -> (line, inner element or explicit values)
    entries: BTreeMap<usize, DerivationEntry>,
}

enum DerivationEntry {
    Inner { line: usize, elem_text: String },
    Table { lines: Vec<(usize, String, String)> },
}

fn parse_derivation_lines(
    lines: &[Line],
    prefix: char,
    min_index: usize,
) -> Result<DerivationTable, ParseError> {
    let mut entries: BTreeMap<usize, DerivationEntry> = BTreeMap::new();
    for l in lines {
        let (head, rhs) = match l.text.split_once('=') {
            Some((h, r)) => (h.trim(), r.trim()),
            None => return err(l.number, 1, "expected `=`"),
        };
        let mut fields = head.split_whitespace();
        let name = fields.next().unwrap_or("");
        if !name.starts_with(prefix) {
            return err(
                l.number,
                1,
                format!("expected a coefficient name starting with `{prefix}`"),
            );
        }
        let index: usize = match name[1..].parse() {
            Ok(i) => i,
            Err(_) => return err(l.number, 1, format!("malformed coefficient name `{name}`")),
        };
        if index < min_index {
            return err(
                l.number,
                1,
                format!("`{name}` is below the minimum index {min_index}"),
            );
        }
        match fields.next() {
            None => {
                // `dN = inner <elem>`
                let Some(rest) = rhs.strip_prefix("inner") else {
                    return err(
                        l.number,
                        1,
                        "expected `inner <element>` or `dN <symbol> = <element>`",
                    );
                };
                if entries.contains_key(&index) {
                    return err(l.number, 1, format!("duplicate definition of `{name}`"));
                }
                entries.insert(
                    index,
                    DerivationEntry::Inner {
                        line: l.number,
                        elem_text: rest.trim().to_string(),
                    },
                );
            }
            Some(symbol) => {
                if fields.next().is_some() {
                    return err(l.number, 1, "too many fields before `=`");
                }
                let entry = entries
                    .entry(index)
                    .or_insert_with(|| DerivationEntry::Table { lines: Vec::new() });
                match entry {
                    DerivationEntry::Table { lines } => {
                        lines.push((l.number, symbol.to_string(), rhs.to_string()))
                    }
                    DerivationEntry::Inner { .. } => {
                        return err(l.number, 1, format!("`{name}` is already defined as inner"))
                    }
                }
            }
        }
    }
    Ok(DerivationTable { entries })
}

fn build_derivation(
    spec: &AlgebraSpec,
    entry: &DerivationEntry,
    default_degree: i64,
) -> Result<Derivation, ParseError> {
    let space = spec.space();
    match entry {
        DerivationEntry::Inner { line, elem_text } => {
            let xi = parse_elem(space, elem_text, *line)?;
            crate::algebra::inner_derivation(spec, &xi).map_err(|e| ParseError {
                line: *line,
                col: 1,
                msg: e.to_string(),
                validation: true,
            })
        }
        DerivationEntry::Table { lines } => {
            let mut values: BTreeMap<SymbolId, (usize, Elem)> = BTreeMap::new();
            for (line, symbol, rhs) in lines {
                let id = resolve(space, symbol, *line)?;
                let elem = parse_elem(space, rhs, *line)?;
                if values.insert(id, (*line, elem)).is_some() {
                    return err(*line, 1, format!("duplicate value for `{symbol}`"));
                }
            }
            // degree from the first nonzero value
            let mut degree = None;
            for (id, (line, elem)) in &values {
                if elem.is_zero() {
                    continue;
                }
                let out = elem.homogeneous_degree(space).map_err(|e| ParseError {
                    line: *line,
                    col: 1,
                    msg: e.to_string(),
                    validation: true,
                })?;
                if let Some(d) = out {
                    let this = d - space.degree(*id);
                    match degree {
                        None => degree = Some(this),
                        Some(existing) if existing != this => {
                            return verr(*line, format!("degree mismatch: {existing} vs {this}"))
                        }
                        _ => {}
                    }
                }
            }
            let degree = degree.unwrap_or(default_degree);
            let first_line = lines.first().map(|(l, _, _)| *l).unwrap_or(0);
            // values on generators only: extend by the Leibniz rule;
            // otherwise take the table as the complete derivation
            let only_generators = spec
                .free_structure()
                .is_some_and(|f| values.keys().all(|id| f.split[id.index()].is_none()));
            let result = if only_generators && spec.free_structure().is_some() {
                let gv: BTreeMap<SymbolId, Elem> =
                    values.iter().map(|(k, (_, v))| (*k, v.clone())).collect();
                Derivation::from_generator_values(spec, degree, &gv)
            } else {
                let table: BTreeMap<Vec<SymbolId>, Elem> = values
                    .iter()
                    .filter(|(_, (_, v))| !v.is_zero())
                    .map(|(k, (_, v))| (vec![*k], v.clone()))
                    .collect();
                MultiMap::new(space, 1, degree, table).and_then(|map| Derivation::new(spec, map))
            };
            result.map_err(|e| ParseError {
                line: first_line,
                col: 1,
                msg: e.to_string(),
                validation: true,
            })
        }
    }
}

/// Parses and fully validates a spec file: axioms are checked at algebra
/// construction, every derivation is Leibniz-checked, and the deformation
/// is square-zero-checked to its order.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let sections = split_sections(text)?;
    let empty: Vec<Line> = Vec::new();
    let options_lines = sections.get("options").unwrap_or(&empty);
    let mut kind = None;
    let mut options = FileOptions::default();
    for l in options_lines {
        let (key, value) = match l.text.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => return err(l.number, 1, "expected `key = value`"),
        };
        match key {
            "kind" => {
                kind = Some(FileKind::from_str(value).ok_or(ParseError {
                    line: l.number,
                    col: 1,
                    msg: format!("unknown kind `{value}`"),
                    validation: false,
                })?)
            }
            "max-weight" => {
                options.max_weight = Some(value.parse().map_err(|_| ParseError {
                    line: l.number,
                    col: 1,
                    msg: "malformed weight".into(),
                    validation: false,
                })?)
            }
            "max-arity" => {
                options.max_arity = Some(value.parse().map_err(|_| ParseError {
                    line: l.number,
                    col: 1,
                    msg: "malformed arity".into(),
                    validation: false,
                })?)
            }
            "max-word-len" => {
                options.max_word_len = Some(value.parse().map_err(|_| ParseError {
                    line: l.number,
                    col: 1,
                    msg: "malformed length".into(),
                    validation: false,
                })?)
            }
            "t-order" => {
                options.t_order = Some(value.parse().map_err(|_| ParseError {
                    line: l.number,
                    col: 1,
                    msg: "malformed order".into(),
                    validation: false,
                })?)
            }
            other => return err(l.number, 1, format!("unknown option `{other}`")),
        }
    }
    let Some(kind) = kind else {
        return err(1, 1, "missing `kind = ...` under [options]");
    };
    let gen_lines = sections.get("generators").unwrap_or(&empty);
    if gen_lines.is_empty() {
        return err(1, 1, "missing [generators] section");
    }
    let mut generators: Vec<(String, i64, Component)> = Vec::new();
    for l in gen_lines {
        let mut fields = l.text.split_whitespace();
        let name = fields.next().unwrap_or("").to_string();
        let Some(degree_tok) = fields.next() else {
            return err(l.number, 1, "expected `name degree [L|A]`");
        };
        let degree: i64 = degree_tok.parse().map_err(|_| ParseError {
            line: l.number,
            col: 1,
            msg: format!("malformed degree `{degree_tok}`"),
            validation: false,
        })?;
        let component = match (fields.next(), kind.algebra_kind()) {
            (None, AlgebraKind::LodayPair) if !kind.generated() => {
                return err(
                    l.number,
                    1,
                    "pair bases declare a component: `name degree L|A`",
                )
            }
            (None, _) => Component::Plain,
            (Some("L"), AlgebraKind::LodayPair) => Component::LodayPart,
            (Some("A"), AlgebraKind::LodayPair) => Component::AssocPart,
            (Some(other), _) => return err(l.number, 1, format!("unexpected field `{other}`")),
        };
        if name.contains('\u{b7}') && !kind.generated() {
            return err(
                l.number,
                1,
                "explicit basis names must not contain the word separator",
            );
        }
        generators.push((name, degree, component));
    }
    // the algebra itself
    let first_line = gen_lines.first().map(|l| l.number).unwrap_or(1);
    let semantic = |e: crate::Error| ParseError {
        line: first_line,
        col: 1,
        msg: e.to_string(),
        validation: true,
    };
    let algebra = if kind.generated() {
        for key in ["product", "bracket", "pair-action"] {
            if sections.contains_key(key) {
                return err(
                    sections[key][0].number,
                    1,
                    format!(
                        "[{key}] is not allowed for generated kind `{}`",
                        kind.as_str()
                    ),
                );
            }
        }
        let Some(max_weight) = options.max_weight else {
            return err(
                1,
                1,
                "generated kinds need `max-weight = ...` under [options]",
            );
        };
        let gens: Vec<(String, i64)> = generators.iter().map(|(n, d, _)| (n.clone(), *d)).collect();
        match kind {
            FileKind::TruncatedFree => build_truncated_free(&gens, max_weight).map_err(semantic)?,
            FileKind::CommutatorLoday => {
                build_commutator_loday(&gens, max_weight).map_err(semantic)?
            }
            FileKind::CommutatorPair => {
                build_commutator_pair(&gens, max_weight).map_err(semantic)?
            }
            _ => unreachable!(),
        }
    } else {
        let symbols: Vec<BasisSymbol> = generators
            .iter()
            .map(|(n, d, c)| BasisSymbol::in_component(n.clone(), *d, *c))
            .collect();
        let space = Space::new(symbols).map_err(semantic)?;
        let mut values: BTreeMap<Vec<SymbolId>, Elem> = BTreeMap::new();
        let table_sections: &[(&str, Option<(Component, Component)>)] = match kind.algebra_kind() {
            AlgebraKind::Associative => &[("product", None)],
            AlgebraKind::Loday => &[("bracket", None)],
            AlgebraKind::LodayPair => &[
                (
                    "product",
                    Some((Component::AssocPart, Component::AssocPart)),
                ),
                (
                    "bracket",
                    Some((Component::LodayPart, Component::LodayPart)),
                ),
                (
                    "pair-action",
                    Some((Component::LodayPart, Component::AssocPart)),
                ),
            ],
        };
        for (section_name, expected_components) in table_sections {
            let Some(lines) = sections.get(*section_name) else {
                continue;
            };
            for l in lines {
                let (lhs, rhs) = match l.text.split_once('=') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => return err(l.number, 1, "expected `a·b = coeff word + ...`"),
                };
                let letters: Vec<&str> = lhs.split('\u{b7}').map(str::trim).collect();
                if letters.len() != 2 {
                    return err(l.number, 1, "structure constants are binary: `a·b = ...`");
                }
                let a = resolve(&space, letters[0], l.number)?;
                let b = resolve(&space, letters[1], l.number)?;
                if let Some((ca, cb)) = expected_components {
                    if space.component(a) != *ca || space.component(b) != *cb {
                        return err(
                            l.number,
                            1,
                            format!("[{section_name}] entries take ({ca:?}, {cb:?}) arguments"),
                        );
                    }
                }
                let elem = parse_elem(&space, rhs, l.number)?;
                if values.insert(vec![a, b], elem).is_some() {
                    return err(
                        l.number,
                        1,
                        format!("duplicate structure constant for `{lhs}`"),
                    );
                }
            }
        }
        let product = MultiMap::new(&space, 2, 0, values).map_err(semantic)?;
        AlgebraSpec::new(space, kind.algebra_kind(), product).map_err(semantic)?
    };
    // deformation
    let deformation = match sections.get("deformation") {
        None => None,
        Some(lines) => {
            let table = parse_derivation_lines(lines, 'd', 0)?;
            let top = table.entries.keys().next_back().copied().unwrap_or(0);
            let mut deltas = Vec::new();
            for i in 0..=top {
                match table.entries.get(&i) {
                    Some(entry) => deltas.push(build_derivation(&algebra, entry, 1)?),
                    None => deltas.push(Derivation::zero(1)),
                }
            }
            let first = lines.first().map(|l| l.number).unwrap_or(1);
            Some(Deformation::new(&algebra, deltas).map_err(|e| ParseError {
                line: first,
                col: 1,
                msg: e.to_string(),
                validation: true,
            })?)
        }
    };
    // gauge
    let gauge = match sections.get("gauge") {
        None => None,
        Some(lines) => {
            let table = parse_derivation_lines(lines, 'h', 1)?;
            let top = table.entries.keys().next_back().copied().unwrap_or(0);
            let mut hs = Vec::new();
            for i in 1..=top {
                match table.entries.get(&i) {
                    Some(entry) => hs.push(build_derivation(&algebra, entry, 0)?),
                    None => hs.push(Derivation::zero(0)),
                }
            }
            let first = lines.first().map(|l| l.number).unwrap_or(1);
            Some(GaugeGenerator::new(hs).map_err(|e| ParseError {
                line: first,
                col: 1,
                msg: e.to_string(),
                validation: true,
            })?)
        }
    };
    Ok(SpecFile {
        kind,
        algebra,
        deformation,
        gauge,
        options,
        generators,
    })
}

/// Canonical re-serialization.  Deformation and gauge coefficients come out
/// as explicit value tables (adjoint forms are expanded), so a reparsed
/// file reproduces the same validated content.
pub fn serialize(file: &SpecFile) -> String {
    let mut out = String::new();
    out.push_str("[options]\n");
    out.push_str(&format!("kind = {}\n", file.kind.as_str()));
    if let Some(w) = file.options.max_weight {
        out.push_str(&format!("max-weight = {w}\n"));
    }
    if let Some(a) = file.options.max_arity {
        out.push_str(&format!("max-arity = {a}\n"));
    }
    if let Some(l) = file.options.max_word_len {
        out.push_str(&format!("max-word-len = {l}\n"));
    }
    if let Some(t) = file.options.t_order {
        out.push_str(&format!("t-order = {t}\n"));
    }
    out.push_str("\n[generators]\n");
    for (name, degree, component) in &file.generators {
        match component {
            Component::Plain => out.push_str(&format!("{name} {degree}\n")),
            Component::LodayPart => out.push_str(&format!("{name} {degree} L\n")),
            Component::AssocPart => out.push_str(&format!("{name} {degree} A\n")),
        }
    }
    let space = file.algebra.space();
    if !file.kind.generated() {
        let mut by_section: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for (key, val) in file.algebra.product().support() {
            let (a, b) = (key[0], key[1]);
            let section = match file.kind.algebra_kind() {
                AlgebraKind::Associative => "product",
                AlgebraKind::Loday => "bracket",
                AlgebraKind::LodayPair => match (space.component(a), space.component(b)) {
                    (Component::AssocPart, Component::AssocPart) => "product",
                    (Component::LodayPart, Component::LodayPart) => "bracket",
                    _ => "pair-action",
                },
            };
            by_section.entry(section).or_default().push(format!(
                "{} = {}",
                space.render_tuple(key),
                val.render(space)
            ));
        }
        for (section, mut lines) in by_section {
            out.push_str(&format!("\n[{section}]\n"));
            lines.sort();
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
    }
    let render_table = |out: &mut String, name: String, d: &Derivation| {
        let mut lines: Vec<(String, String)> = Vec::new();
        for (key, val) in d.map().support() {
            lines.push((space.symbol(key[0]).name.clone(), val.render(space)));
        }
        lines.sort();
        for (sym, val) in lines {
            out.push_str(&format!("{name} {sym} = {val}\n"));
        }
    };
    if let Some(def) = &file.deformation {
        out.push_str("\n[deformation]\n");
        for (i, d) in def.deltas().iter().enumerate() {
            render_table(&mut out, format!("d{i}"), d);
        }
    }
    if let Some(gauge) = &file.gauge {
        out.push_str("\n[gauge]\n");
        for (i, h) in gauge.coefficients().iter().enumerate() {
            render_table(&mut out, format!("h{}", i + 1), h);
        }
    }
    out
}

/// Structural equality of parsed content: same basis, same structure
/// constants, same deformation and gauge coefficient values, same options.
pub fn same_content(a: &SpecFile, b: &SpecFile) -> bool {
    if a.kind != b.kind || a.options != b.options || a.generators != b.generators {
        return false;
    }
    if a.algebra.product() != b.algebra.product() {
        return false;
    }
    let deltas = |f: &SpecFile| -> Vec<MultiMap> {
        f.deformation
            .as_ref()
            .map(|d| d.deltas().iter().map(|x| x.map().clone()).collect())
            .unwrap_or_default()
    };
    if deltas(a) != deltas(b) {
        return false;
    }
    let hs = |f: &SpecFile| -> Vec<MultiMap> {
        f.gauge
            .as_ref()
            .map(|g| g.coefficients().iter().map(|x| x.map().clone()).collect())
            .unwrap_or_default()
    };
    hs(a) == hs(b)
}

/// Every single-coefficient sign flip of the file, as mutated texts.  Each
/// output differs from the input in exactly one scalar token on the right
/// side of a relation (structure constants, derivation values and adjoint
/// elements alike).
pub fn scalar_sign_mutations(text: &str) -> Vec<String> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut in_relation_section = false;
    for (li, raw) in lines.iter().enumerate() {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.starts_with('[') {
            in_relation_section = matches!(
                stripped,
                "[product]" | "[bracket]" | "[pair-action]" | "[deformation]" | "[gauge]"
            );
            continue;
        }
        if !in_relation_section || stripped.is_empty() {
            continue;
        }
        let Some(eq) = raw.find('=') else { continue };
        let rhs = &raw[eq + 1..];
        let rhs_terms = rhs.strip_prefix(" inner").unwrap_or(rhs);
        // locate coefficient tokens: the first field of each `+`-separated term
        let mut offset = eq + 1 + (rhs.len() - rhs_terms.len());
        for term in rhs_terms.split('+') {
            let trimmed = term.trim_start();
            let lead = term.len() - trimmed.len();
            let coeff_len = trimmed.split_whitespace().next().map(str::len).unwrap_or(0);
            if coeff_len > 0 && trimmed != "0" {
                let start = offset + lead;
                let coeff = &raw[start..start + coeff_len];
                let flipped = match coeff.strip_prefix('-') {
                    Some(rest) => rest.to_string(),
                    None => format!("-{coeff}"),
                };
                let mut mutated_line = String::new();
                mutated_line.push_str(&raw[..start]);
                mutated_line.push_str(&flipped);
                mutated_line.push_str(&raw[start + coeff_len..]);
                let mut mutated = lines.clone();
                mutated[li] = &mutated_line;
                out.push(mutated.join("\n"));
            }
            offset += term.len() + 1;
        }
    }
    out
}
