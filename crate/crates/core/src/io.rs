//! Text formats.
//!
//! Matrix: a header `rows cols real|complex`, then `rows` lines of `cols`
//! whitespace-separated entries; complex entries are written `re,im`.
//! Blank lines and lines starting with `#` are ignored.
//!
//! Form: a matrix followed by an optional `kind=general|symmetric|skew` line.
//! Subspace: a matrix whose columns span it.
//! Relation: a line `nx ny` followed by an (nx+ny)-row spanning matrix.
//! Config: `key = value` lines.
//! Path: relation files plus a manifest with lines `index t ker_dim file`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{Form, FormKind};
use crate::relations::Relation;
use crate::scalar::{Field, Scalar, Tolerance};
use crate::subspace::Subspace;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// A parsed matrix in the field its header declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl AnyMatrix {
    pub fn field(&self) -> Field {
        match self {
            AnyMatrix::Real(_) => Field::Real,
            AnyMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Real(m) => m.shape(),
            AnyMatrix::Complex(m) => m.shape(),
        }
    }

    /// Real matrices embed; complex ones are rejected.
    pub fn into_real(self) -> Result<DMatrix<f64>> {
        match self {
            AnyMatrix::Real(m) => Ok(m),
            AnyMatrix::Complex(_) => Err(parse_err("expected a real matrix")),
        }
    }

    pub fn into_complex(self) -> DMatrix<Complex64> {
        match self {
            AnyMatrix::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            AnyMatrix::Complex(m) => m,
        }
    }

    pub fn into_field<T: Scalar>(self) -> Result<DMatrix<T>> {
        match T::FIELD {
            Field::Real => Ok(self.into_real()?.map(|x| T::from_real(x))),
            Field::Complex => Ok(self.into_complex().map(T::from_c64)),
        }
    }
}

fn parse_entry(tok: &str, field: Field, line: usize) -> Result<Complex64> {
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s
            .parse()
            .map_err(|_| parse_err(format!("line {line}: bad number `{s}`")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("line {line}: non-finite entry `{s}`")));
        }
        Ok(v)
    };
    match field {
        Field::Real => Ok(Complex64::new(num(tok)?, 0.0)),
        Field::Complex => match tok.split_once(',') {
            Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
            None => Ok(Complex64::new(num(tok)?, 0.0)),
        },
    }
}

/// Parses one matrix from the front of `lines`, leaving the rest unconsumed.
fn parse_matrix_lines<'a, I>(lines: &mut I) -> Result<AnyMatrix>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (ln, header) = lines.next().ok_or_else(|| parse_err("missing matrix header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(parse_err(format!("line {ln}: header must be `rows cols real|complex`")));
    }
    let rows: usize = parts[0]
        .parse()
        .map_err(|_| parse_err(format!("line {ln}: bad row count")))?;
    let cols: usize = parts[1]
        .parse()
        .map_err(|_| parse_err(format!("line {ln}: bad column count")))?;
    let field: Field = parts[2].parse().map_err(|_| parse_err(format!("line {ln}: bad field `{}`", parts[2])))?;
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (ln, row) = match lines.next() {
            Some(x) => x,
            // A matrix with zero columns has no entries to write on its rows.
            None if cols == 0 => continue,
            None => return Err(parse_err(format!("expected {rows} rows, found {r}"))),
        };
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != cols {
            return Err(parse_err(format!("line {ln}: expected {cols} entries, found {}", toks.len())));
        }
        for t in toks {
            data.push(parse_entry(t, field, ln)?);
        }
    }
    let m = DMatrix::from_row_iterator(rows, cols, data);
    Ok(match field {
        Field::Real => AnyMatrix::Real(m.map(|z| z.re)),
        Field::Complex => AnyMatrix::Complex(m),
    })
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let mut lines = content_lines(text);
    let m = parse_matrix_lines(&mut lines)?;
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(format!("line {ln}: trailing content after matrix")));
    }
    Ok(m)
}

fn format_component(v: f64) -> String {
    // Shortest representation that round-trips; normalize negative zero.
    if v == 0.0 {
        "0".into()
    } else if v.abs() < 1e-5 || v.abs() >= 1e15 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn write_matrix<T: Scalar>(m: &DMatrix<T>) -> String {
    let mut out = format!("{} {} {}\n", m.nrows(), m.ncols(), T::FIELD);
    for r in 0..m.nrows() {
        if m.ncols() == 0 {
            continue;
        }
        let row: Vec<String> = (0..m.ncols())
            .map(|c| {
                let z = m[(r, c)].to_c64();
                match T::FIELD {
                    Field::Real => format_component(z.re),
                    Field::Complex => format!("{},{}", format_component(z.re), format_component(z.im)),
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A parsed form file.
#[derive(Clone, Debug, PartialEq)]
pub struct FormFile {
    pub matrix: AnyMatrix,
    pub kind: FormKind,
}

impl FormFile {
    pub fn build<T: Scalar>(self, tol: Tolerance) -> Result<Form<T>> {
        Form::new(self.matrix.into_field()?, self.kind, tol)
    }
}

pub fn parse_form(text: &str) -> Result<FormFile> {
    let mut lines = content_lines(text);
    let matrix = parse_matrix_lines(&mut lines)?;
    let mut kind = FormKind::General;
    if let Some((ln, l)) = lines.next() {
        let v = l
            .strip_prefix("kind=")
            .or_else(|| l.strip_prefix("kind ="))
            .ok_or_else(|| parse_err(format!("line {ln}: expected `kind=` trailer")))?;
        kind = v
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("line {ln}: unknown form kind `{}`", v.trim())))?;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(format!("line {ln}: trailing content after form")));
    }
    Ok(FormFile { matrix, kind })
}

pub fn write_form<T: Scalar>(f: &Form<T>) -> String {
    format!("{}kind={}\n", write_matrix(f.matrix()), f.kind())
}

/// A parsed relation file.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationFile {
    pub nx: usize,
    pub ny: usize,
    pub span: AnyMatrix,
}

impl RelationFile {
    pub fn build<T: Scalar>(self, tol: Tolerance) -> Result<Relation<T>> {
        Relation::span(self.nx, self.ny, &self.span.into_field()?, tol)
    }
}

pub fn parse_relation(text: &str) -> Result<RelationFile> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| parse_err("missing relation header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(format!("line {ln}: relation header must be `nx ny`")));
    }
    let nx: usize = parts[0].parse().map_err(|_| parse_err(format!("line {ln}: bad nx")))?;
    let ny: usize = parts[1].parse().map_err(|_| parse_err(format!("line {ln}: bad ny")))?;
    let span = parse_matrix_lines(&mut lines)?;
    if span.shape().0 != nx + ny {
        return Err(parse_err(format!(
            "spanning matrix has {} rows, expected nx + ny = {}",
            span.shape().0,
            nx + ny
        )));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(format!("line {ln}: trailing content after relation")));
    }
    Ok(RelationFile { nx, ny, span })
}

/// Writes the orthonormal graph basis.
pub fn write_relation<T: Scalar>(r: &Relation<T>) -> String {
    format!("{} {}\n{}", r.nx(), r.ny(), write_matrix(r.graph().basis()))
}

pub fn parse_subspace<T: Scalar>(text: &str, tol: Tolerance) -> Result<Subspace<T>> {
    Subspace::span(&parse_matrix(text)?.into_field()?, tol)
}

/// `key = value` lines; duplicate keys are an error.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (ln, l) in content_lines(text) {
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| parse_err(format!("line {ln}: expected `key = value`")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(parse_err(format!("line {ln}: empty key")));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(parse_err(format!("line {ln}: duplicate key `{k}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub index: usize,
    pub t: f64,
    pub ker_dim: usize,
    pub file: String,
}

pub fn write_manifest(entries: &[ManifestEntry]) -> String {
    let mut out = String::from("# index t ker_dim file\n");
    for e in entries {
        out.push_str(&format!("{} {} {} {}\n", e.index, format_component(e.t), e.ker_dim, e.file));
    }
    out
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    content_lines(text)
        .map(|(ln, l)| {
            let p: Vec<&str> = l.split_whitespace().collect();
            if p.len() != 4 {
                return Err(parse_err(format!("line {ln}: expected `index t ker_dim file`")));
            }
            let bad = |what: &str| parse_err(format!("line {ln}: bad {what}"));
            Ok(ManifestEntry {
                index: p[0].parse().map_err(|_| bad("index"))?,
                t: p[1].parse().map_err(|_| bad("parameter"))?,
                ker_dim: p[2].parse().map_err(|_| bad("kernel dimension"))?,
                file: p[3].to_string(),
            })
        })
        .collect()
}

/// Writes `step_NNNN.rel` files and `index.txt` into `dir`.
pub fn write_path(dir: &Path, ts: &[f64], relations: &[Relation<f64>]) -> Result<Vec<ManifestEntry>> {
    fs::create_dir_all(dir).map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.display())))?;
    let mut entries = Vec::with_capacity(relations.len());
    for (i, (t, r)) in ts.iter().zip(relations).enumerate() {
        let file = format!("step_{i:04}.rel");
        fs::write(dir.join(&file), write_relation(r))
            .map_err(|e| Error::InvalidArgument(format!("{file}: {e}")))?;
        entries.push(ManifestEntry {
            index: i,
            t: *t,
            ker_dim: r.ker().dim(),
            file,
        });
    }
    fs::write(dir.join("index.txt"), write_manifest(&entries))
        .map_err(|e| Error::InvalidArgument(format!("index.txt: {e}")))?;
    Ok(entries)
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}
