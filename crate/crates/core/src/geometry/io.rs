//! ASCII OFF surfaces and the companion TET volume format.
//!
//! TET layout: a `TET` header line, a line `<vertices> <cells>`, one
//! `x y z` line per vertex, one line of four zero-based indices per cell.
//! Blank lines and `#` comments are ignored in both formats.

use std::fmt::Write as _;
use std::path::Path;

use super::{TetrahedralMesh, TriangulatedSurface};
use crate::{Error, Point, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-empty line with comments stripped, with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str, last_line: usize) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| Error::Parse {
            line: last_line + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn parse_numbers<T: std::str::FromStr>(line: usize, s: &str, count: usize, what: &str) -> Result<Vec<T>> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() < count {
        return Err(Error::Parse {
            line,
            message: format!("expected {count} values for {what}, found {}", fields.len()),
        });
    }
    fields[..count]
        .iter()
        .map(|f| {
            f.parse::<T>().map_err(|_| Error::Parse {
                line,
                message: format!("cannot parse `{f}` in {what}"),
            })
        })
        .collect()
}

fn parse_point(line: usize, s: &str) -> Result<Point> {
    let v: Vec<f64> = parse_numbers(line, s, 3, "vertex")?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse {
            line,
            message: "non-finite vertex coordinate".into(),
        });
    }
    Ok([v[0], v[1], v[2]])
}

/// Parse OFF text into raw vertices and triangles, without validation.
pub fn parse_off(text: &str) -> Result<(Vec<Point>, Vec<[usize; 3]>)> {
    let mut lines = Lines::new(text);
    let (mut ln, header) = lines.expect("OFF header", 0)?;
    // The counts may share the header line.
    let counts_str = match header.strip_prefix("OFF") {
        Some(rest) if rest.trim().is_empty() => {
            let (l, s) = lines.expect("vertex and face counts", ln)?;
            ln = l;
            s
        }
        Some(rest) => rest,
        None => {
            return Err(Error::Parse {
                line: ln,
                message: "missing OFF header".into(),
            })
        }
    };
    let counts: Vec<usize> = parse_numbers(ln, counts_str, 2, "counts")?;
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, s) = lines.expect("vertex", ln)?;
        ln = l;
        vertices.push(parse_point(l, s)?);
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (l, s) = lines.expect("face", ln)?;
        ln = l;
        let k: Vec<usize> = parse_numbers(l, s, 1, "face size")?;
        if k[0] != 3 {
            return Err(Error::Parse {
                line: l,
                message: format!("only triangular faces are supported, found a {}-gon", k[0]),
            });
        }
        let v: Vec<usize> = parse_numbers(l, s, 4, "face")?;
        if v[1..].iter().any(|&i| i >= nv) {
            return Err(Error::Parse {
                line: l,
                message: format!("face index out of range (vertex count {nv})"),
            });
        }
        triangles.push([v[1], v[2], v[3]]);
    }
    Ok((vertices, triangles))
}

/// Read and validate an OFF surface.
pub fn load_off(path: impl AsRef<Path>) -> Result<TriangulatedSurface> {
    let text = std::fs::read_to_string(path)?;
    let (v, t) = parse_off(&text)?;
    TriangulatedSurface::new(v, t)
}

pub fn to_off_string(surface: &TriangulatedSurface) -> String {
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} 0", surface.vertices().len(), surface.num_triangles()).unwrap();
    for v in surface.vertices() {
        writeln!(s, "{:?} {:?} {:?}", v[0], v[1], v[2]).unwrap();
    }
    for t in surface.triangles() {
        writeln!(s, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    s
}

pub fn save_off(surface: &TriangulatedSurface, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_off_string(surface))?;
    Ok(())
}

/// Parse TET text into raw vertices and cells, without validation.
pub fn parse_tet(text: &str) -> Result<(Vec<Point>, Vec<[usize; 4]>)> {
    let mut lines = Lines::new(text);
    let (mut ln, header) = lines.expect("TET header", 0)?;
    if header != "TET" {
        return Err(Error::Parse {
            line: ln,
            message: "missing TET header".into(),
        });
    }
    let (l, s) = lines.expect("vertex and cell counts", ln)?;
    ln = l;
    let counts: Vec<usize> = parse_numbers(l, s, 2, "counts")?;
    let (nv, nc) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, s) = lines.expect("vertex", ln)?;
        ln = l;
        vertices.push(parse_point(l, s)?);
    }
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (l, s) = lines.expect("cell", ln)?;
        ln = l;
        let v: Vec<usize> = parse_numbers(l, s, 4, "cell")?;
        if v.iter().any(|&i| i >= nv) {
            return Err(Error::Parse {
                line: l,
                message: format!("cell index out of range (vertex count {nv})"),
            });
        }
        cells.push([v[0], v[1], v[2], v[3]]);
    }
    Ok((vertices, cells))
}

pub fn load_tet(path: impl AsRef<Path>) -> Result<TetrahedralMesh> {
    let text = std::fs::read_to_string(path)?;
    let (v, c) = parse_tet(&text)?;
    TetrahedralMesh::new(v, c)
}

pub fn to_tet_string(mesh: &TetrahedralMesh) -> String {
    let mut s = String::new();
    writeln!(s, "TET").unwrap();
    writeln!(s, "{} {}", mesh.vertices().len(), mesh.num_cells()).unwrap();
    for v in mesh.vertices() {
        writeln!(s, "{:?} {:?} {:?}", v[0], v[1], v[2]).unwrap();
    }
    for t in mesh.tets() {
        writeln!(s, "{} {} {} {}", t[0], t[1], t[2], t[3]).unwrap();
    }
    s
}

pub fn save_tet(mesh: &TetrahedralMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_tet_string(mesh))?;
    Ok(())
}
