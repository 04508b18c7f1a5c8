//! Plain ASCII mesh files.
//!
//! ```text
//! nv nt
//! x y boundary_flag          (nv lines)
//! v0 v1 v2 ref_edge parent   (nt lines, parent = -1 when absent)
//! ```
//!
//! Coordinates are written with 17 significant digits so they read back
//! bit-exact. The refinement level is not stored; it reads back as 0.

use std::io::{BufRead, Write};

use super::{Mesh, Point2, Triangle};
use crate::error::{Error, Result};

pub fn mesh_io_write<W: Write>(mesh: &Mesh, mut sink: W) -> Result<()> {
    writeln!(sink, "{} {}", mesh.n_vertices(), mesh.n_triangles())?;
    for (p, &b) in mesh.vertices.iter().zip(&mesh.boundary_vertex_flags) {
        writeln!(sink, "{:.16e} {:.16e} {}", p.x, p.y, u8::from(b))?;
    }
    for t in &mesh.triangles {
        let parent = t.parent.map_or(-1, |p| p as i64);
        writeln!(
            sink,
            "{} {} {} {} {}",
            t.v[0], t.v[1], t.v[2], t.ref_edge, parent
        )?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn fields<'a, const N: usize>(line: usize, text: &'a str) -> Result<[&'a str; N]> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| parse_err(line, format!("expected {N} fields, found {}", p.len())))
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {s:?}")))
}

/// Reads a mesh and re-validates it; a hanging node or an inconsistent
/// boundary flag is reported as an error.
pub fn mesh_io_read<R: BufRead>(source: R) -> Result<Mesh> {
    let mut lines = source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(s))) => Ok((n, s)),
            Some((n, Err(e))) => Err(parse_err(n, e.to_string())),
            None => Err(parse_err(
                0,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    };

    let (n, header) = next("header")?;
    let [nv, nt] = fields::<2>(n, &header)?;
    let (nv, nt): (usize, usize) = (num(n, nv)?, num(n, nt)?);

    let mut vertices = Vec::with_capacity(nv);
    let mut flags = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, s) = next("vertex")?;
        let [x, y, b] = fields::<3>(n, &s)?;
        vertices.push(Point2::new(num(n, x)?, num(n, y)?));
        flags.push(match b {
            "0" => false,
            "1" => true,
            _ => {
                return Err(parse_err(
                    n,
                    format!("boundary flag must be 0 or 1, got {b:?}"),
                ))
            }
        });
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (n, s) = next("triangle")?;
        let [a, b, c, r, p] = fields::<5>(n, &s)?;
        let parent: i64 = num(n, p)?;
        let parent = match parent {
            -1 => None,
            p if p >= 0 => Some(p as usize),
            p => return Err(parse_err(n, format!("invalid parent {p}"))),
        };
        triangles.push(Triangle {
            v: [num(n, a)?, num(n, b)?, num(n, c)?],
            ref_edge: num(n, r)?,
            parent,
            level: 0,
        });
    }
    if let Ok((n, _)) = next("end of file") {
        return Err(parse_err(n, "trailing data after the last triangle"));
    }

    let mesh = Mesh::new(vertices, triangles)?;
    if let Some(w) = (0..nv).find(|&w| mesh.boundary_vertex_flags[w] != flags[w]) {
        return Err(parse_err(
            2 + w,
            format!("boundary flag of vertex {w} disagrees with the mesh topology"),
        ));
    }
    Ok(mesh)
}
