//! OFF-style text meshes: counts, vertex lines, triangle lines.
//!
//! Extra per-vertex scalar columns may follow the coordinates; their names
//! are listed in a `# columns:` comment line.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::mesh::SurfaceMesh;
use super::shape::Vec3;
use crate::error::{Error, Result};

pub fn write_off<W: Write>(
    out: &mut W,
    vertices: &[Vec3],
    triangles: &[[usize; 3]],
    columns: &[(&str, &[f64])],
) -> Result<()> {
    for (name, values) in columns {
        if values.len() != vertices.len() {
            return Err(Error::SampleCount {
                expected: vertices.len(),
                got: values.len(),
            });
        }
        if name.contains(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!("column name {name:?} contains whitespace")));
        }
    }
    let mut text = String::from("OFF\n");
    if !columns.is_empty() {
        let names: Vec<&str> = columns.iter().map(|c| c.0).collect();
        let _ = writeln!(text, "# columns: x y z {}", names.join(" "));
    }
    let _ = writeln!(text, "{} {} 0", vertices.len(), triangles.len());
    for (i, v) in vertices.iter().enumerate() {
        let _ = write!(text, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z);
        for (_, values) in columns {
            let _ = write!(text, " {:.17e}", values[i]);
        }
        text.push('\n');
    }
    for t in triangles {
        let _ = writeln!(text, "3 {} {} {}", t[0], t[1], t[2]);
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn write_mesh_off<W: Write>(out: &mut W, mesh: &SurfaceMesh) -> Result<()> {
    write_off(
        out,
        mesh.vertices(),
        mesh.triangles(),
        &[("H", mesh.mean_curvature())],
    )
}

/// Parsed OFF content; extra columns are returned by name.
#[derive(Debug, Clone)]
pub struct OffData {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    pub columns: Vec<(String, Vec<f64>)>,
}

pub fn read_off<R: BufRead>(input: R) -> Result<OffData> {
    let mut names: Vec<String> = Vec::new();
    let mut lines = Vec::new();
    for line in input.lines() {
        let line = line?;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("# columns:") {
            names = rest.split_whitespace().skip(3).map(str::to_string).collect();
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        lines.push(trimmed.to_string());
    }
    let mut it = lines.iter();
    match it.next() {
        Some(h) if h == "OFF" => {}
        _ => return Err(Error::Parse("missing OFF header".into())),
    }
    let counts: Vec<usize> = it
        .next()
        .ok_or_else(|| Error::Parse("missing counts line".into()))?
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad count {s:?}"))))
        .collect::<Result<_>>()?;
    if counts.len() < 2 {
        return Err(Error::Parse("counts line needs vertex and face counts".into()));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    let mut extra: Vec<Vec<f64>> = vec![Vec::with_capacity(nv); names.len()];
    for k in 0..nv {
        let line = it
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {nv} vertices, found {k}")))?;
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}"))))
            .collect::<Result<_>>()?;
        if nums.len() != 3 + names.len() {
            return Err(Error::Parse(format!(
                "vertex line {k} has {} fields, expected {}",
                nums.len(),
                3 + names.len()
            )));
        }
        vertices.push(Vec3::new(nums[0], nums[1], nums[2]));
        for (col, v) in extra.iter_mut().zip(&nums[3..]) {
            col.push(*v);
        }
    }
    let mut triangles = Vec::with_capacity(nf);
    for k in 0..nf {
        let line = it
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {nf} faces, found {k}")))?;
        let idx: Vec<usize> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad index {s:?}"))))
            .collect::<Result<_>>()?;
        if idx.len() != 4 || idx[0] != 3 {
            return Err(Error::Parse(format!("face {k} is not a triangle")));
        }
        triangles.push([idx[1], idx[2], idx[3]]);
    }
    Ok(OffData {
        vertices,
        triangles,
        columns: names.into_iter().zip(extra).collect(),
    })
}

/// Reads an OFF file as a generic mesh (discrete curvature, imported tag).
pub fn read_mesh_off<R: BufRead>(input: R) -> Result<SurfaceMesh> {
    let data = read_off(input)?;
    SurfaceMesh::from_triangles(data.vertices, data.triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_surface, ParametricShape};

    #[test]
    fn round_trip_preserves_mesh() {
        let mesh = make_surface(&ParametricShape::spheroid(2.0, 1.0), 1).unwrap();
        let mut buf = Vec::new();
        write_mesh_off(&mut buf, &mesh).unwrap();
        let data = read_off(buf.as_slice()).unwrap();
        assert_eq!(data.triangles, mesh.triangles());
        assert_eq!(data.vertices, mesh.vertices());
        assert_eq!(data.columns[0].0, "H");
        assert_eq!(data.columns[0].1, mesh.mean_curvature());
        let back = read_mesh_off(buf.as_slice()).unwrap();
        assert!((back.total_area() - mesh.total_area()).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_off("OF\n".as_bytes()).is_err());
        assert!(read_off("OFF\n1 0 0\n1 2\n".as_bytes()).is_err());
        assert!(read_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n".as_bytes()).is_err());
    }
}
