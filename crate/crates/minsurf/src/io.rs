//! The `.hdmesh` plain-text mesh format.
//!
//! ```text
//! HDMESH 1
//! v x y z u v chart        (one per vertex; chart -1 when absent)
//! f i j k                  (one per face, 0-based vertex indices)
//! ```
//!
//! Writers emit coordinates with 17 significant digits so every `f64`
//! round-trips exactly. The format carries no generator metadata; on read,
//! [`read_surface`] recovers the kind for exactly parametrized surfaces
//! (plane, helicoid) by fitting the chart relation and verifying it at every
//! vertex, and otherwise labels the mesh imported.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::generators::HelicoidSpec;
use crate::mesh::{build_mesh, MeshedSurface, ParamPoint, Point3, SurfaceKind, TriMesh, NO_CHART};

pub fn write_mesh(path: &Path, surface: &MeshedSurface) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "HDMESH 1")?;
    let mesh = &surface.mesh;
    for (p, q) in mesh.vertices().iter().zip(mesh.params().iter()) {
        writeln!(
            w,
            "v {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {}",
            p.x, p.y, p.z, q.u, q.v, q.chart
        )?;
    }
    for f in mesh.faces() {
        writeln!(w, "f {} {} {}", f[0], f[1], f[2])?;
    }
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<TriMesh> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let pstr = path.display().to_string();
    let fmt = |line: usize, message: String| Error::Format {
        path: pstr.clone(),
        line,
        message,
    };

    let mut vertices = Vec::new();
    let mut params = Vec::new();
    let mut faces = Vec::new();
    let mut saw_header = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lno = idx + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if !saw_header {
            if t != "HDMESH 1" {
                return Err(fmt(lno, format!("expected header 'HDMESH 1', got '{t}'")));
            }
            saw_header = true;
            continue;
        }
        let mut it = t.split_whitespace();
        match it.next() {
            Some("v") => {
                let nums: Vec<&str> = it.collect();
                if nums.len() != 6 {
                    return Err(fmt(lno, format!("vertex line needs 6 fields, got {}", nums.len())));
                }
                let mut vals = [0.0f64; 5];
                for (k, s) in nums[..5].iter().enumerate() {
                    vals[k] = s
                        .parse()
                        .map_err(|e| fmt(lno, format!("bad number '{s}': {e}")))?;
                }
                let chart: i32 = nums[5]
                    .parse()
                    .map_err(|e| fmt(lno, format!("bad chart id '{}': {e}", nums[5])))?;
                vertices.push(Point3::new(vals[0], vals[1], vals[2]));
                params.push(ParamPoint::new(vals[3], vals[4], chart));
            }
            Some("f") => {
                let nums: Vec<&str> = it.collect();
                if nums.len() != 3 {
                    return Err(fmt(lno, format!("face line needs 3 indices, got {}", nums.len())));
                }
                let mut tri = [0u32; 3];
                for (k, s) in nums.iter().enumerate() {
                    tri[k] = s
                        .parse()
                        .map_err(|e| fmt(lno, format!("bad index '{s}': {e}")))?;
                }
                faces.push(tri);
            }
            Some(other) => {
                return Err(fmt(lno, format!("unknown record '{other}'")));
            }
            None => {}
        }
    }
    if !saw_header {
        return Err(fmt(0, "empty file".into()));
    }
    build_mesh(vertices, params, faces)
}

/// Reads a mesh and recovers its kind when the chart relation identifies it.
pub fn read_surface(path: &Path) -> Result<MeshedSurface> {
    let mesh = read_mesh(path)?;
    let kind = recognize_kind(&mesh);
    Ok(MeshedSurface::new(mesh, kind))
}

/// Identifies plane and helicoid meshes from their parametric charts.
///
/// Plane: every vertex satisfies (x, y, z) = (u, v, 0). Helicoid: every
/// vertex satisfies (x, y, z) = (u cos v, u sin v, c v) for the pitch `c`
/// fitted by least squares from z against v. The residual tolerance is
/// relative to the mesh extent.
pub fn recognize_kind(mesh: &TriMesh) -> SurfaceKind {
    if mesh.vertex_count() == 0 || mesh.params().iter().any(|q| q.chart == NO_CHART) {
        return SurfaceKind::Imported;
    }
    let scale = mesh
        .vertices()
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max)
        .max(1e-12);
    let tol = 1e-9 * scale;

    let is_plane = mesh
        .vertices()
        .iter()
        .zip(mesh.params().iter())
        .all(|(p, q)| {
            (p.x - q.u).abs() <= tol && (p.y - q.v).abs() <= tol && p.z.abs() <= tol
        });
    if is_plane {
        let radius = mesh
            .vertices()
            .iter()
            .map(|p| (p.x * p.x + p.y * p.y).sqrt())
            .fold(0.0, f64::max);
        return SurfaceKind::Plane { radius, rings: 0 };
    }

    // Fit pitch from z = c v.
    let (mut num, mut den) = (0.0, 0.0);
    for (p, q) in mesh.vertices().iter().zip(mesh.params().iter()) {
        num += p.z * q.v;
        den += q.v * q.v;
    }
    if den <= 1e-18 {
        return SurfaceKind::Imported;
    }
    let pitch = num / den;
    if pitch.abs() <= 1e-12 {
        return SurfaceKind::Imported;
    }
    let is_helicoid = mesh
        .vertices()
        .iter()
        .zip(mesh.params().iter())
        .all(|(p, q)| {
            (p.x - q.u * q.v.cos()).abs() <= tol
                && (p.y - q.u * q.v.sin()).abs() <= tol
                && (p.z - pitch * q.v).abs() <= tol
        });
    if is_helicoid {
        let rho_max = mesh.params().iter().map(|q| q.u.abs()).fold(0.0, f64::max);
        let (v_lo, v_hi) = mesh.params().iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), q| (lo.min(q.v), hi.max(q.v)),
        );
        return SurfaceKind::Helicoid {
            spec: HelicoidSpec::recovered(pitch, rho_max, v_lo, v_hi),
        };
    }
    SurfaceKind::Imported
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_helicoid, make_plane_disk, HelicoidSpec};
    use tempfile::tempdir;

    #[test]
    fn round_trip_is_exact_and_recognizes_the_helicoid() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("h.hdmesh");
        let h = make_helicoid(&HelicoidSpec::new(0.7, 1.3, (-2.1, 2.1), (6, 24))).unwrap();
        write_mesh(&path, &h).unwrap();
        let back = read_surface(&path).unwrap();
        assert_eq!(back.mesh.vertex_count(), h.mesh.vertex_count());
        for (a, b) in h.mesh.vertices().iter().zip(back.mesh.vertices().iter()) {
            assert_eq!(a, b, "coordinates must round-trip bit-exactly");
        }
        assert_eq!(back.mesh.faces(), h.mesh.faces());
        match back.kind {
            SurfaceKind::Helicoid { spec } => {
                assert!((spec.pitch - 0.7).abs() < 1e-12, "pitch {}", spec.pitch)
            }
            ref k => panic!("expected helicoid, recognized {}", k.name()),
        }
    }

    #[test]
    fn plane_is_recognized() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("p.hdmesh");
        let p = make_plane_disk(1.5, 6).unwrap();
        write_mesh(&path, &p).unwrap();
        let back = read_surface(&path).unwrap();
        assert!(matches!(back.kind, SurfaceKind::Plane { .. }));
    }

    #[test]
    fn malformed_input_reports_the_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.hdmesh");
        std::fs::write(&path, "HDMESH 1\nv 0 0 0 0 0 0\nv 1 0 0 1 0 0\nv 0 1 0 0 1 0\nq 1 2 3\n").unwrap();
        let err = read_mesh(&path).unwrap_err();
        match err {
            Error::Format { line, .. } => assert_eq!(line, 5),
            other => panic!("unexpected error {other}"),
        }
    }
}
