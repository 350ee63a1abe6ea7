//! Mesh file formats.
//!
//! * `native`: `VERTICES n` followed by `x y` lines, `EDGES m` followed by
//!   `v0 v1` lines, `CELLS c` followed by `k e1 ... ek` lines (0-based indices,
//!   edges listed counterclockwise). `#` starts a comment.
//! * `fvca5-typ2`: the FVCA5 benchmark layout with a `vertices` block and a
//!   `cells` block giving each cell as `nv i1 ... inv` (1-based vertex
//!   indices). Any further blocks (edges, ...) are ignored; edges are inferred.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::Mesh;
use crate::{HhoError, Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Native,
    Fvca5Typ2,
}

impl FromStr for MeshFormat {
    type Err = HhoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "native" => Ok(MeshFormat::Native),
            "fvca5-typ2" | "typ2" | "fvca5" => Ok(MeshFormat::Fvca5Typ2),
            other => Err(HhoError::Config(format!("unknown mesh format '{other}'"))),
        }
    }
}

impl MeshFormat {
    /// `.typ2` files are FVCA5, anything else native.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("typ2") => MeshFormat::Fvca5Typ2,
            _ => MeshFormat::Native,
        }
    }
}

pub fn load_mesh(path: impl AsRef<Path>, format: MeshFormat) -> Result<Mesh> {
    let text = fs::read_to_string(path)?;
    match format {
        MeshFormat::Native => parse_native(&text),
        MeshFormat::Fvca5Typ2 => parse_fvca5(&text),
    }
}

pub fn save_mesh(mesh: &Mesh, path: impl AsRef<Path>, format: MeshFormat) -> Result<()> {
    let text = match format {
        MeshFormat::Native => write_native(mesh),
        MeshFormat::Fvca5Typ2 => write_fvca5(mesh),
    };
    fs::write(path, text)?;
    Ok(())
}

/// Tokenised lines with comments and blank lines removed, keeping 1-based
/// line numbers for error messages.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            let toks: Vec<&str> = l.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        })
        .collect()
}

fn num<T: FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| HhoError::parse(line, format!("cannot parse '{tok}'")))
}

struct Cursor<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let last = self.lines.last().map_or(0, |l| l.0);
        let item = self.lines.get(self.pos).cloned().ok_or_else(|| {
            HhoError::parse(last, format!("unexpected end of file, expected {what}"))
        })?;
        self.pos += 1;
        Ok(item)
    }

    /// Reads `KEYWORD count`, possibly split over two lines (FVCA5 style).
    fn header(&mut self, keyword: &str) -> Result<usize> {
        let (ln, toks) = self.next(keyword)?;
        if !toks[0].eq_ignore_ascii_case(keyword) {
            return Err(HhoError::parse(
                ln,
                format!("expected '{keyword}', found '{}'", toks[0]),
            ));
        }
        match toks.get(1) {
            Some(t) => num(t, ln),
            None => {
                let (ln, toks) = self.next("count")?;
                num(toks[0], ln)
            }
        }
    }
}

fn point(toks: &[&str], ln: usize) -> Result<Point> {
    if toks.len() < 2 {
        return Err(HhoError::parse(ln, "expected 'x y'"));
    }
    Ok(Point::new(num(toks[0], ln)?, num(toks[1], ln)?))
}

fn counted_list(toks: &[&str], ln: usize) -> Result<Vec<usize>> {
    let k: usize = num(toks[0], ln)?;
    if toks.len() != k + 1 {
        return Err(HhoError::parse(
            ln,
            format!("expected {k} indices, found {}", toks.len() - 1),
        ));
    }
    toks[1..].iter().map(|t| num(t, ln)).collect()
}

pub fn parse_native(text: &str) -> Result<Mesh> {
    let mut cur = Cursor {
        lines: lines(text),
        pos: 0,
    };
    let nv = cur.header("VERTICES")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, toks) = cur.next("vertex")?;
        vertices.push(point(&toks, ln)?);
    }
    let ne = cur.header("EDGES")?;
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (ln, toks) = cur.next("edge")?;
        if toks.len() != 2 {
            return Err(HhoError::parse(ln, "expected 'v0 v1'"));
        }
        edges.push([num(toks[0], ln)?, num(toks[1], ln)?]);
    }
    let nc = cur.header("CELLS")?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (ln, toks) = cur.next("cell")?;
        cells.push(counted_list(&toks, ln)?);
    }
    Mesh::from_edges(vertices, edges, cells)
}

pub fn parse_fvca5(text: &str) -> Result<Mesh> {
    let mut cur = Cursor {
        lines: lines(text),
        pos: 0,
    };
    let nv = cur.header("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, toks) = cur.next("vertex")?;
        vertices.push(point(&toks, ln)?);
    }
    let nc = cur.header("cells")?;
    let mut loops = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (ln, toks) = cur.next("cell")?;
        let ids = counted_list(&toks, ln)?;
        let lp = ids
            .into_iter()
            .map(|i| {
                i.checked_sub(1)
                    .ok_or_else(|| HhoError::parse(ln, "vertex indices are 1-based"))
            })
            .collect::<Result<Vec<_>>>()?;
        loops.push(lp);
    }
    Mesh::from_vertex_loops(vertices, loops)
}

/// Native text; coordinates use the shortest representation that round-trips.
pub fn write_native(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "VERTICES {}", mesh.vertices.len());
    for v in &mesh.vertices {
        let _ = writeln!(s, "{} {}", v.x, v.y);
    }
    let _ = writeln!(s, "EDGES {}", mesh.edges.len());
    for e in &mesh.edges {
        let _ = writeln!(s, "{} {}", e.vertices[0], e.vertices[1]);
    }
    let _ = writeln!(s, "CELLS {}", mesh.cells.len());
    for c in &mesh.cells {
        let _ = write!(s, "{}", c.edges.len());
        for e in &c.edges {
            let _ = write!(s, " {e}");
        }
        s.push('\n');
    }
    s
}

pub fn write_fvca5(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices\n{}", mesh.vertices.len());
    for v in &mesh.vertices {
        let _ = writeln!(s, "{} {}", v.x, v.y);
    }
    let _ = writeln!(s, "cells\n{}", mesh.cells.len());
    for c in &mesh.cells {
        let _ = write!(s, "{}", c.vertices.len());
        for v in &c.vertices {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    s
}
