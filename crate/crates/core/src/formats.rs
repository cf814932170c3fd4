//! Line-oriented text formats. Every format starts with a `p <kind> ...`
//! header; blank lines and `#` comments are ignored, and DIMACS also skips
//! `c` lines. Writers emit the canonical form, which parses back to the same
//! bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use thiserror::Error;

use crate::cutting_planes::LinIneq;
use crate::formula::{PartialAssignment, Rational, Var};
use crate::polycalc::{multilinearize, Indeterminate, Polynomial};
use crate::resk::{KDnf, Term};
use crate::resolution::{Clause, Cnf, Literal};
use crate::sampling::{ExplicitDistribution, MaskSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

/// Errors from reading an input file.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
}

/// Reads `path` and parses it with `parse`.
pub fn read_with<T>(
    path: &Path,
    parse: impl FnOnce(&str) -> Result<T, ParseError>,
) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.to_path_buf(), source })?;
    parse(&text).map_err(|source| InputError::Parse { path: path.to_path_buf(), source })
}

/// A token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    col: usize,
    text: &'a str,
}

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn tokens(&self) -> Vec<Tok<'a>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Tok { col: s + 1, text: &self.text[s..i] });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push(Tok { col: s + 1, text: &self.text[s..] });
        }
        out
    }

    fn col_of(&self, sub: &str) -> usize {
        sub.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }
}

/// Content lines with comments stripped.
fn content_lines(text: &str, dimacs: bool) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let trimmed = body.trim_start();
            if trimmed.trim_end().is_empty() {
                return None;
            }
            if dimacs && (trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t")) {
                return None;
            }
            Some(Line { no: i + 1, text: body.trim_end() })
        })
        .collect()
}

fn parse_usize(t: Tok<'_>, line: usize, what: &str) -> Result<usize, ParseError> {
    t.text.parse().or_else(|_| err(line, t.col, format!("expected {what}, found '{}'", t.text)))
}

/// Parses `p <kind> a b ...` and returns the integer fields.
fn header(lines: &[Line<'_>], kind: &str, fields: &[&str]) -> Result<Vec<usize>, ParseError> {
    let Some(first) = lines.first() else {
        return err(1, 1, format!("missing 'p {kind}' header"));
    };
    let toks = first.tokens();
    if toks.len() < 2 || toks[0].text != "p" || toks[1].text != kind {
        return err(first.no, 1, format!("expected 'p {kind}' header"));
    }
    if toks.len() != 2 + fields.len() {
        return err(first.no, 1, format!("header takes fields: {}", fields.join(" ")));
    }
    toks[2..].iter().zip(fields).map(|(t, f)| parse_usize(*t, first.no, f)).collect()
}

fn check_count(lines: &[Line<'_>], m: usize, got: usize, text: &str) -> Result<(), ParseError> {
    if m != got {
        let at = lines.last().map_or(text.lines().count().max(1), |l| l.no);
        return err(at, 1, format!("header declares {m} entries, found {got}"));
    }
    Ok(())
}

fn parse_var(s: &str, n: usize, line: usize, col: usize) -> Result<Var, ParseError> {
    let Some(digits) = s.strip_prefix('x') else {
        return err(line, col, format!("expected a variable x<i>, found '{s}'"));
    };
    match digits.parse::<u32>() {
        Ok(i) if i >= 1 && i as usize <= n => Ok(Var::new(i)),
        Ok(i) => err(line, col, format!("variable x{i} out of range 1..={n}")),
        Err(_) => err(line, col, format!("expected a variable x<i>, found '{s}'")),
    }
}

/// Parses `a`, `a/b`, or a decimal like `0.25` as an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.parse().ok()?;
        let b: BigInt = b.parse().ok()?;
        if b == BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::from(0),
            d => d.parse().ok()?,
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let mag = int_part * &scale + frac.parse::<BigInt>().ok()?;
        return Some(Rational::new(if neg { -mag } else { mag }, scale));
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

fn parse_bits(s: &str, n: usize, line: usize, col: usize) -> Result<Vec<bool>, ParseError> {
    if s.chars().count() != n {
        return err(line, col, format!("expected {n} bits, found '{s}'"));
    }
    s.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => err(line, col + i, format!("expected 0 or 1, found '{c}'")),
        })
        .collect()
}

fn bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

// ---- DIMACS CNF ----

pub fn parse_cnf(text: &str) -> Result<Cnf, ParseError> {
    let lines = content_lines(text, true);
    let h = header(&lines, "cnf", &["variables", "clauses"])?;
    let (n, m) = (h[0], h[1]);
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut open_at = None;
    for line in &lines[1..] {
        for t in line.tokens() {
            let v: i64 = match t.text.parse() {
                Ok(v) => v,
                Err(_) => return err(line.no, t.col, format!("expected a literal, found '{}'", t.text)),
            };
            if v == 0 {
                clauses.push(Clause::new(current.drain(..)));
                open_at = None;
                continue;
            }
            if v.unsigned_abs() as usize > n {
                return err(line.no, t.col, format!("literal {v} out of range for {n} variables"));
            }
            open_at.get_or_insert((line.no, t.col));
            current.push(Literal::from_dimacs(v));
        }
    }
    if let Some((l, c)) = open_at {
        return err(l, c, "clause is not terminated by 0");
    }
    check_count(&lines, m, clauses.len(), text)?;
    Ok(Cnf::new(n, clauses).expect("literals range-checked"))
}

pub fn write_cnf(cnf: &Cnf) -> String {
    let mut s = format!("p cnf {} {}\n", cnf.num_vars(), cnf.len());
    for c in cnf.clauses() {
        match c.literals() {
            Some(lits) => {
                for l in lits {
                    write!(s, "{} ", l.to_dimacs()).unwrap();
                }
            }
            None => s.push_str("1 -1 "),
        }
        s.push_str("0\n");
    }
    s
}

// ---- partial assignments ----

pub fn parse_pasgn(text: &str) -> Result<(usize, Vec<PartialAssignment>), ParseError> {
    let lines = content_lines(text, false);
    let h = header(&lines, "pasgn", &["variables", "assignments"])?;
    let (n, m) = (h[0], h[1]);
    let mut out = Vec::new();
    for line in &lines[1..] {
        let toks = line.tokens();
        if toks.len() != 1 {
            return err(line.no, 1, "expected one assignment per line");
        }
        let t = toks[0];
        let rho: PartialAssignment = t.text.parse().or_else(|e| err(line.no, t.col, e))?;
        if rho.len() != n {
            return err(line.no, t.col, format!("expected {n} characters, found {}", rho.len()));
        }
        out.push(rho);
    }
    check_count(&lines, m, out.len(), text)?;
    Ok((n, out))
}

pub fn write_pasgn(n: usize, examples: &[PartialAssignment]) -> String {
    let mut s = format!("p pasgn {n} {}\n", examples.len());
    for rho in examples {
        writeln!(s, "{rho}").unwrap();
    }
    s
}

// ---- k-DNFs ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KdnfFile {
    pub n: usize,
    pub k: usize,
    pub formulas: Vec<KDnf>,
}

fn parse_kdnf_line(line: &Line<'_>, n: usize, k: usize) -> Result<KDnf, ParseError> {
    let body = line.text.trim();
    match body {
        "T" => return Ok(KDnf::True),
        "F" => return Ok(KDnf::falsum()),
        _ => {}
    }
    let mut terms = Vec::new();
    for part in body.split('|') {
        let mut lits = Vec::new();
        for lit in part.split('&') {
            let lit = lit.trim();
            let col = line.col_of(lit);
            if lit.is_empty() {
                return err(line.no, col, "empty literal");
            }
            let (positive, name) = match lit.strip_prefix('-') {
                Some(rest) => (false, rest),
                None => (true, lit),
            };
            lits.push(Literal::new(parse_var(name, n, line.no, col)?, positive));
        }
        let size = lits.iter().collect::<BTreeSet<_>>().len();
        if size > k {
            return err(line.no, line.col_of(part.trim_start()), format!("term has {size} literals, more than k = {k}"));
        }
        // a complementary term is false and drops out
        if let Some(t) = Term::new(lits) {
            terms.push(t);
        }
    }
    Ok(KDnf::new(terms))
}

pub fn parse_kdnf(text: &str) -> Result<KdnfFile, ParseError> {
    let lines = content_lines(text, false);
    let h = header(&lines, "kdnf", &["variables", "k", "formulas"])?;
    let (n, k, m) = (h[0], h[1], h[2]);
    let formulas =
        lines[1..].iter().map(|l| parse_kdnf_line(l, n, k)).collect::<Result<Vec<_>, _>>()?;
    check_count(&lines, m, formulas.len(), text)?;
    Ok(KdnfFile { n, k, formulas })
}

pub fn write_kdnf(file: &KdnfFile) -> String {
    let mut s = format!("p kdnf {} {} {}\n", file.n, file.k, file.formulas.len());
    for f in &file.formulas {
        writeln!(s, "{f}").unwrap();
    }
    s
}

// ---- polynomials ----

fn parse_poly_line(line: &Line<'_>, n: usize) -> Result<Polynomial, ParseError> {
    if line.text.trim() == "0" {
        return Ok(Polynomial::zero());
    }
    let mut terms = Vec::new();
    for part in line.text.split(';') {
        let sub = Line { no: line.no, text: part };
        let offset = line.col_of(part) - 1;
        let toks = sub.tokens();
        let Some(first) = toks.first() else {
            return err(line.no, offset + 1, "empty term");
        };
        let Some(c) = parse_rational(first.text).filter(|_| !first.text.contains('.')) else {
            return err(line.no, offset + first.col, format!("expected a coefficient, found '{}'", first.text));
        };
        let mut exps: BTreeMap<Indeterminate, u32> = BTreeMap::new();
        for t in &toks[1..] {
            let (dual, name) = match t.text.strip_prefix('~') {
                Some(rest) => (true, rest),
                None => (false, t.text),
            };
            let var = parse_var(name, n, line.no, offset + t.col)?;
            *exps.entry(Indeterminate { var, dual }).or_default() += 1;
        }
        terms.push((c, exps.into_iter().collect::<Vec<_>>()));
    }
    Ok(multilinearize(&terms))
}

pub fn parse_poly(text: &str) -> Result<(usize, Vec<Polynomial>), ParseError> {
    let lines = content_lines(text, false);
    let h = header(&lines, "poly", &["variables", "polynomials"])?;
    let (n, m) = (h[0], h[1]);
    let polys = lines[1..].iter().map(|l| parse_poly_line(l, n)).collect::<Result<Vec<_>, _>>()?;
    check_count(&lines, m, polys.len(), text)?;
    Ok((n, polys))
}

pub fn write_poly(n: usize, polys: &[Polynomial]) -> String {
    let mut s = format!("p poly {n} {}\n", polys.len());
    for p in polys {
        writeln!(s, "{p}").unwrap();
    }
    s
}

// ---- linear inequalities ----

fn parse_cp_line(line: &Line<'_>, n: usize) -> Result<LinIneq, ParseError> {
    let toks = line.tokens();
    let Some(ge) = toks.iter().position(|t| t.text == ">=") else {
        return err(line.no, 1, "expected '>='");
    };
    if ge + 2 != toks.len() {
        return err(line.no, toks[ge].col, "expected exactly one bound after '>='");
    }
    let b = toks[ge + 1];
    let bound: BigInt =
        b.text.parse().or_else(|_| err(line.no, b.col, format!("expected an integer bound, found '{}'", b.text)))?;
    let lhs = &toks[..ge];
    if lhs.len() == 1 && lhs[0].text == "0" {
        return Ok(LinIneq::new([], bound));
    }
    if lhs.is_empty() {
        return err(line.no, 1, "empty left-hand side; write 0 for no terms");
    }
    let mut terms = Vec::new();
    for t in lhs {
        let Some((v, c)) = t.text.split_once(':') else {
            return err(line.no, t.col, format!("expected x<i>:<int>, found '{}'", t.text));
        };
        let var = parse_var(v, n, line.no, t.col)?;
        let c: BigInt = c
            .parse()
            .or_else(|_| err(line.no, t.col + v.len() + 1, format!("expected an integer coefficient, found '{c}'")))?;
        terms.push((var, c));
    }
    Ok(LinIneq::new(terms, bound))
}

pub fn parse_cp(text: &str) -> Result<(usize, Vec<LinIneq>), ParseError> {
    let lines = content_lines(text, false);
    let h = header(&lines, "cp", &["variables", "inequalities"])?;
    let (n, m) = (h[0], h[1]);
    let out = lines[1..].iter().map(|l| parse_cp_line(l, n)).collect::<Result<Vec<_>, _>>()?;
    check_count(&lines, m, out.len(), text)?;
    Ok((n, out))
}

pub fn write_cp(n: usize, ineqs: &[LinIneq]) -> String {
    let mut s = format!("p cp {n} {}\n", ineqs.len());
    for x in ineqs {
        writeln!(s, "{x}").unwrap();
    }
    s
}

// ---- distributions and mask tables ----

pub fn parse_dist(text: &str) -> Result<ExplicitDistribution, ParseError> {
    let lines = content_lines(text, false);
    let h = header(&lines, "dist", &["variables", "points"])?;
    let (n, m) = (h[0], h[1]);
    let mut support = Vec::new();
    for line in &lines[1..] {
        let toks = line.tokens();
        if toks.len() != 2 {
            return err(line.no, 1, "expected '<num>/<den> <bits>'");
        }
        let w = parse_rational(toks[0].text)
            .filter(|_| !toks[0].text.contains('.'))
            .map_or_else(|| err(line.no, toks[0].col, format!("expected a weight, found '{}'", toks[0].text)), Ok)?;
        support.push((parse_bits(toks[1].text, n, line.no, toks[1].col)?, w));
    }
    check_count(&lines, m, support.len(), text)?;
    let at = lines.first().map_or(1, |l| l.no);
    ExplicitDistribution::new(n, support).or_else(|e| err(at, 1, e.to_string()))
}

pub fn write_dist(dist: &ExplicitDistribution) -> String {
    let mut s = format!("p dist {} {}\n", dist.num_vars(), dist.support().len());
    for (x, w) in dist.support() {
        writeln!(s, "{w} {}", bits(x)).unwrap();
    }
    s
}

/// `n` characters with `1` marking a hidden coordinate.
fn parse_hidden(s: &str, n: usize, line: usize, col: usize) -> Result<BTreeSet<Var>, ParseError> {
    Ok(parse_bits(s, n, line, col)?
        .into_iter()
        .enumerate()
        .filter(|(_, h)| *h)
        .map(|(i, _)| Var::from_idx(i))
        .collect())
}

fn hidden_bits(n: usize, hidden: &BTreeSet<Var>) -> String {
    (0..n).map(|i| if hidden.contains(&Var::from_idx(i)) { '1' } else { '0' }).collect()
}

/// A `p mask n m` table: lines `<assignment bits> <hidden bits>`.
pub fn parse_mask_table(text: &str) -> Result<(usize, MaskSpec), ParseError> {
    let lines = content_lines(text, false);
    let h = header(&lines, "mask", &["variables", "entries"])?;
    let (n, m) = (h[0], h[1]);
    let mut table = BTreeMap::new();
    for line in &lines[1..] {
        let toks = line.tokens();
        if toks.len() != 2 {
            return err(line.no, 1, "expected '<assignment bits> <hidden bits>'");
        }
        let x = parse_bits(toks[0].text, n, line.no, toks[0].col)?;
        let hidden = parse_hidden(toks[1].text, n, line.no, toks[1].col)?;
        if table.insert(x, hidden).is_some() {
            return err(line.no, toks[0].col, "repeated assignment");
        }
    }
    check_count(&lines, m, table.len(), text)?;
    Ok((n, MaskSpec::Table(table)))
}

pub fn write_mask_table(n: usize, table: &BTreeMap<Vec<bool>, BTreeSet<Var>>) -> String {
    let mut s = format!("p mask {n} {}\n", table.len());
    for (x, hidden) in table {
        writeln!(s, "{} {}", bits(x), hidden_bits(n, hidden)).unwrap();
    }
    s
}

/// Inline mask spec: `fixed:<hidden bits>`, `iid:<probability>` or
/// `table:<path>`, the path taken relative to `base`.
pub fn parse_mask_spec(spec: &str, n: usize, base: &Path) -> Result<MaskSpec, InputError> {
    let inline = |source: ParseError| InputError::Parse { path: PathBuf::from("<mask>"), source };
    let Some((kind, arg)) = spec.split_once(':') else {
        return Err(inline(ParseError {
            line: 1,
            column: 1,
            message: format!("expected fixed:, iid: or table:, found '{spec}'"),
        }));
    };
    let col = kind.len() + 2;
    match kind {
        "fixed" => parse_hidden(arg, n, 1, col).map(MaskSpec::Fixed).map_err(inline),
        "iid" => match parse_rational(arg) {
            Some(p) => Ok(MaskSpec::Independent(p)),
            None => Err(inline(ParseError { line: 1, column: col, message: format!("bad probability '{arg}'") })),
        },
        "table" => {
            let path = base.join(arg);
            let (tn, mask) = read_with(&path, parse_mask_table)?;
            if tn != n {
                return Err(InputError::Parse {
                    path,
                    source: ParseError { line: 1, column: 1, message: format!("table has {tn} variables, expected {n}") },
                });
            }
            Ok(mask)
        }
        other => Err(inline(ParseError { line: 1, column: 1, message: format!("unknown mask kind '{other}'") })),
    }
}

/// Inverse of [`parse_mask_spec`] for inline masks; tables have no inline form.
pub fn write_mask_spec(n: usize, mask: &MaskSpec) -> Option<String> {
    match mask {
        MaskSpec::Fixed(h) => Some(format!("fixed:{}", hidden_bits(n, h))),
        MaskSpec::Independent(p) => Some(format!("iid:{p}")),
        MaskSpec::Table(_) => None,
    }
}
