//! Text formats.
//!
//! ```text
//! cay 1                      p=3 m=1 poly=1,2,1        ghm 1
//! v=2                        v=3                       p=2 m=2 poly=1,1,1
//! labels=1,a                 group=z3.cay   (opt.)     v=4
//! 0 1                        0 0 0                     0 0 0 0
//! 1 0                        0 1 2                     ...
//!                            0 2 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Field elements are
//! integer encodings. A `.coc` without a `group=` line is over `Z_p^k`
//! (`v = p^k`) in lexicographic order.

use std::fs;
use std::path::Path;

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::gh_matrix::Matrix;
use crate::group::Group;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Significant lines with their 1-based numbers.
struct Lines<'a> {
    inner: Vec<(usize, &'a str)>,
    pos: usize,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let inner: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .collect();
        let last = text.lines().count().max(1);
        Lines { inner, pos: 0, last }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self.inner.get(self.pos).copied();
        self.pos += 1;
        item.ok_or_else(|| parse_err(self.last, 1, format!("unexpected end of input, expected {what}")))
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.inner.get(self.pos).copied()
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some((n, l)) => Err(parse_err(n, column_of(l, l.trim_start()), "trailing content")),
            None => Ok(()),
        }
    }
}

/// 1-based column of `part` inside `line` (`part` must be a subslice).
fn column_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

/// Whitespace-separated tokens with their columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |t| (column_of(line, t), t))
}

fn number<T: std::str::FromStr>(line_no: usize, col: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line_no, col, format!("expected a non-negative integer, found `{tok}`")))
}

/// `key=value` as the whole line.
fn key_value<'a>(line_no: usize, line: &'a str, key: &str) -> Result<(usize, &'a str)> {
    let t = line.trim_start();
    let col = column_of(line, t);
    match t.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
        Some(v) => Ok((col + key.len() + 1, v.trim())),
        None => Err(parse_err(line_no, col, format!("expected `{key}=`"))),
    }
}

fn header(lines: &mut Lines, magic: &str) -> Result<()> {
    let (n, l) = lines.next(magic)?;
    let t = l.trim_start();
    if t.split_whitespace().collect::<Vec<_>>() != [magic, "1"] {
        return Err(parse_err(n, column_of(l, t), format!("expected `{magic} 1`")));
    }
    Ok(())
}

/// `p=<p> m=<m> poly=<c_0>,...,<c_m>`.
fn field_line(lines: &mut Lines) -> Result<Field> {
    let (n, l) = lines.next("field header")?;
    let mut p = None;
    let mut m = None;
    let mut poly = None;
    for (col, tok) in tokens(l) {
        let (key, val) = tok.split_once('=').ok_or_else(|| parse_err(n, col, format!("expected key=value, found `{tok}`")))?;
        let vcol = col + key.len() + 1;
        match key {
            "p" => p = Some(number::<u32>(n, vcol, val)?),
            "m" => m = Some(number::<u32>(n, vcol, val)?),
            "poly" => {
                let mut cs = Vec::new();
                let mut c = vcol;
                for part in val.split(',') {
                    cs.push(number::<u32>(n, c, part)?);
                    c += part.len() + 1;
                }
                poly = Some((vcol, cs));
            }
            _ => return Err(parse_err(n, col, format!("unknown key `{key}`"))),
        }
    }
    let (p, m) = match (p, m) {
        (Some(p), Some(m)) => (p, m),
        _ => return Err(parse_err(n, 1, "field header needs p= and m=")),
    };
    match poly {
        Some((col, cs)) => Field::new(p, m, &cs).map_err(|e| parse_err(n, col, e.to_string())),
        None => Field::with_default(p, m).map_err(|e| parse_err(n, 1, e.to_string())),
    }
}

fn order_line(lines: &mut Lines) -> Result<usize> {
    let (n, l) = lines.next("v=")?;
    let (col, val) = key_value(n, l, "v")?;
    let v: usize = number(n, col, val)?;
    if v == 0 {
        return Err(parse_err(n, col, "order must be positive"));
    }
    Ok(v)
}

/// `v` rows of `v` integers below `bound`.
fn square_rows(lines: &mut Lines, v: usize, bound: usize) -> Result<Vec<u32>> {
    let mut data = Vec::with_capacity(v * v);
    for i in 0..v {
        let (n, l) = lines.next(&format!("row {}", i + 1))?;
        let mut count = 0;
        for (col, tok) in tokens(l) {
            let x: u32 = number(n, col, tok)?;
            if x as usize >= bound {
                return Err(parse_err(n, col, format!("entry {x} out of range (must be < {bound})")));
            }
            count += 1;
            if count > v {
                return Err(parse_err(n, col, format!("row has more than {v} entries")));
            }
            data.push(x);
        }
        if count < v {
            return Err(parse_err(n, l.len() + 1, format!("row has {count} entries, expected {v}")));
        }
    }
    Ok(data)
}

/// A Cayley table, optionally labelled.
pub fn parse_cay(text: &str) -> Result<Group> {
    let mut lines = Lines::new(text);
    header(&mut lines, "cay")?;
    let v = order_line(&mut lines)?;
    let mut labels = None;
    if let Some((n, l)) = lines.peek() {
        if l.trim_start().starts_with("labels=") {
            lines.next("labels")?;
            let (col, val) = key_value(n, l, "labels")?;
            let ls: Vec<String> = val.split(',').map(|s| s.trim().to_string()).collect();
            if ls.len() != v {
                return Err(parse_err(n, col, format!("{} labels for order {v}", ls.len())));
            }
            labels = Some((n, ls));
        }
    }
    let first_row = lines.peek().map_or(1, |(n, _)| n);
    let table = square_rows(&mut lines, v, v)?;
    lines.finish()?;
    let g = Group::from_table(v, table).map_err(|e| parse_err(first_row, 1, e.to_string()))?;
    match labels {
        Some((n, ls)) => g.with_labels(ls).map_err(|e| parse_err(n, 1, e.to_string())),
        None => Ok(g),
    }
}

pub fn write_cay(g: &Group) -> String {
    let v = g.order();
    let mut out = format!("cay 1\nv={v}\n");
    if let Some(ls) = g.labels() {
        out.push_str(&format!("labels={}\n", ls.join(",")));
    }
    for a in 0..v {
        let row: Vec<String> = (0..v).map(|b| g.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `Z_p^k` when `v = p^k`.
fn default_group(field: &Field, v: usize) -> Option<Group> {
    let p = field.p() as usize;
    let mut k = 0;
    let mut n = 1;
    while n < v {
        n *= p;
        k += 1;
    }
    (n == v).then(|| Group::elementary_abelian(field.p(), k).expect("prime characteristic"))
}

/// A cocycle table; `resolve` loads the `.cay` named by a `group=` line.
pub fn parse_coc_with(text: &str, resolve: &dyn Fn(&str) -> Result<Group>) -> Result<Cocycle> {
    let mut lines = Lines::new(text);
    let field = field_line(&mut lines)?;
    let v = order_line(&mut lines)?;
    let mut group = None;
    if let Some((n, l)) = lines.peek() {
        if l.trim_start().starts_with("group=") {
            lines.next("group")?;
            let (col, path) = key_value(n, l, "group")?;
            let g = resolve(path).map_err(|e| match e {
                Error::Parse { line, column, message } => {
                    parse_err(n, col, format!("in {path} at {line}:{column}: {message}"))
                }
                other => parse_err(n, col, format!("cannot load {path}: {other}")),
            })?;
            if g.order() != v {
                return Err(parse_err(n, col, format!("group has order {}, expected {v}", g.order())));
            }
            group = Some(g);
        }
    }
    let group = match group {
        Some(g) => g,
        None => default_group(&field, v)
            .ok_or_else(|| parse_err(lines.peek().map_or(1, |(n, _)| n), 1, format!("v={v} is not a power of p; add group=")))?,
    };
    let table = square_rows(&mut lines, v, field.q())?;
    lines.finish()?;
    Cocycle::check(group, field, table.into_iter().map(|x| x as Fe).collect())
}

/// Reads a `.coc`, resolving `group=` relative to the file.
pub fn read_coc(path: &Path) -> Result<Cocycle> {
    let text = read_text(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_coc_with(&text, &|rel| read_cay(&dir.join(rel)))
}

/// Parses a `.coc` that has no `group=` line.
pub fn parse_coc(text: &str) -> Result<Cocycle> {
    parse_coc_with(text, &|path| Err(Error::DomainMismatch(format!("no resolver for {path}"))))
}

/// `group` names the `.cay` to reference; it is required unless the group
/// is `Z_p^k` in lexicographic order.
pub fn write_coc(psi: &Cocycle, group: Option<&str>) -> Result<String> {
    let v = psi.order();
    let mut out = format!("{}\nv={v}\n", psi.field().header());
    match group {
        Some(path) => out.push_str(&format!("group={path}\n")),
        None => {
            let plain = default_group(psi.field(), v).is_some_and(|g| g.cayley_table() == psi.group().cayley_table());
            if !plain {
                return Err(Error::DomainMismatch("group is not Z_p^k in lexicographic order; name a .cay".into()));
            }
        }
    }
    push_rows(&mut out, psi.table(), v);
    Ok(out)
}

fn push_rows(out: &mut String, data: &[Fe], v: usize) {
    for row in data.chunks(v) {
        let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

/// A square matrix over a field (not yet checked to be GH).
pub fn parse_ghm(text: &str) -> Result<Matrix> {
    let mut lines = Lines::new(text);
    header(&mut lines, "ghm")?;
    let field = field_line(&mut lines)?;
    let v = order_line(&mut lines)?;
    let data = square_rows(&mut lines, v, field.q())?;
    lines.finish()?;
    Matrix::new(field, v, v, data.into_iter().map(|x| x as Fe).collect())
}

pub fn write_ghm(m: &Matrix) -> String {
    let mut out = format!("ghm 1\n{}\nv={}\n", m.field().header(), m.rows());
    push_rows(&mut out, m.data(), m.cols());
    out
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn read_cay(path: &Path) -> Result<Group> {
    parse_cay(&read_text(path)?)
}

pub fn read_ghm(path: &Path) -> Result<Matrix> {
    parse_ghm(&read_text(path)?)
}
