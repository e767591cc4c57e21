//! Triangle-mesh surface patches with parametric charts.
//!
//! A [`TriMesh`] is validated at construction: faces must reference distinct
//! valid vertices, every undirected edge borders at most two faces, winding is
//! globally consistent, and faces below the degeneracy threshold are rejected.
//! A [`MeshedSurface`] wraps a mesh with its generator metadata (kind, pitch,
//! closed-form curvature tag) and the cached longest edge length.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Faces with area below this (in squared model units) are rejected at build
/// time; downstream geodesic and area code assumes nondegeneracy.
pub const DEGENERATE_AREA: f64 = 1e-14;

/// A point in ambient Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn sub(&self, o: &Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn add(&self, o: &Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn scale(&self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(&self, o: &Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, o: &Point3) -> f64 {
        self.sub(o).norm()
    }

    pub fn normalized(&self) -> Point3 {
        let n = self.norm();
        if n > 0.0 {
            self.scale(1.0 / n)
        } else {
            *self
        }
    }

    pub fn midpoint(&self, o: &Point3) -> Point3 {
        Point3::new(
            0.5 * (self.x + o.x),
            0.5 * (self.y + o.y),
            0.5 * (self.z + o.z),
        )
    }
}

/// Chart id marking a vertex without parametric coordinates (imported meshes).
pub const NO_CHART: i32 = -1;

/// Parametric coordinates of a vertex inside a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub u: f64,
    pub v: f64,
    pub chart: i32,
}

impl ParamPoint {
    pub fn new(u: f64, v: f64, chart: i32) -> Self {
        Self { u, v, chart }
    }

    pub fn none() -> Self {
        Self {
            u: 0.0,
            v: 0.0,
            chart: NO_CHART,
        }
    }
}

/// A validated, oriented, edge-manifold triangle mesh.
///
/// Vertex indices are dense integers starting at 0; faces are stored as index
/// triples. `params` is parallel to `vertices` (chart `-1` means no chart).
/// Immutable after construction; safe to share read-only across workers.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<Point3>,
    params: Vec<ParamPoint>,
    faces: Vec<[u32; 3]>,
    boundary_vertex: Vec<bool>,
}

/// Validates and assembles a mesh. Computes boundary flags; rejects meshes
/// with invalid indices, non-finite coordinates, degenerate faces,
/// non-manifold edges, or inconsistent winding.
pub fn build_mesh(
    vertices: Vec<Point3>,
    params: Vec<ParamPoint>,
    faces: Vec<[u32; 3]>,
) -> Result<TriMesh> {
    TriMesh::new(vertices, params, faces)
}

impl TriMesh {
    pub fn new(
        vertices: Vec<Point3>,
        params: Vec<ParamPoint>,
        faces: Vec<[u32; 3]>,
    ) -> Result<Self> {
        if params.len() != vertices.len() {
            return Err(Error::LengthMismatch {
                context: "params must be parallel to vertices",
                left: params.len(),
                right: vertices.len(),
            });
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteVertex { vertex: i });
            }
        }
        let n = vertices.len() as u32;
        for (fi, f) in faces.iter().enumerate() {
            let [a, b, c] = *f;
            if a >= n || b >= n || c >= n || a == b || b == c || a == c {
                return Err(Error::InvalidFace {
                    face: fi,
                    indices: [a as usize, b as usize, c as usize],
                });
            }
            let area = triangle_area(
                &vertices[a as usize],
                &vertices[b as usize],
                &vertices[c as usize],
            );
            if !(area > DEGENERATE_AREA) {
                return Err(Error::DegenerateFace {
                    face: fi,
                    area,
                    threshold: DEGENERATE_AREA,
                });
            }
        }

        // Directed-edge census: manifoldness, orientation, boundary flags.
        let mut edge_faces: HashMap<(u32, u32), (usize, [usize; 2])> =
            HashMap::with_capacity(faces.len() * 3 / 2);
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let a = f[k];
                let b = f[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                let entry = edge_faces.entry(key).or_insert((0, [usize::MAX; 2]));
                if entry.0 >= 2 {
                    return Err(Error::NonManifoldEdge {
                        a: key.0 as usize,
                        b: key.1 as usize,
                        count: entry.0 + 1,
                    });
                }
                entry.1[entry.0] = fi;
                entry.0 += 1;
            }
        }
        for (&(a, b), &(count, fs)) in &edge_faces {
            if count == 2 {
                let d0 = directed_edge_sense(&faces[fs[0]], a, b);
                let d1 = directed_edge_sense(&faces[fs[1]], a, b);
                if d0 == d1 {
                    return Err(Error::InconsistentOrientation {
                        a: a as usize,
                        b: b as usize,
                        f0: fs[0],
                        f1: fs[1],
                    });
                }
            }
        }
        let mut boundary_vertex = vec![false; vertices.len()];
        for (&(a, b), &(count, _)) in &edge_faces {
            if count == 1 {
                boundary_vertex[a as usize] = true;
                boundary_vertex[b as usize] = true;
            }
        }

        Ok(Self {
            vertices,
            params,
            faces,
            boundary_vertex,
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn params(&self) -> &[ParamPoint] {
        &self.params
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary_vertex
    }

    /// Distinct undirected edges as (min, max) index pairs.
    pub fn undirected_edges(&self) -> Vec<(u32, u32)> {
        let mut edges: Vec<(u32, u32)> = self
            .faces
            .iter()
            .flat_map(|f| {
                [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]
                    .into_iter()
                    .map(|(a, b)| (a.min(b), a.max(b)))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn face_area(&self, fi: usize) -> f64 {
        let [a, b, c] = self.faces[fi];
        triangle_area(
            &self.vertices[a as usize],
            &self.vertices[b as usize],
            &self.vertices[c as usize],
        )
    }

    pub fn total_area(&self) -> f64 {
        (0..self.faces.len()).map(|fi| self.face_area(fi)).sum()
    }

    /// Longest edge length.
    pub fn max_edge_length(&self) -> f64 {
        self.undirected_edges()
            .iter()
            .map(|&(a, b)| self.vertices[a as usize].dist(&self.vertices[b as usize]))
            .fold(0.0, f64::max)
    }

    /// V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let e = self.undirected_edges().len() as i64;
        let f = self.faces.len() as i64;
        v - e + f
    }

    /// Boundary loops as ordered vertex cycles, oriented consistently with the
    /// mesh winding (each boundary directed edge appears in exactly one loop).
    /// A closed mesh returns an empty list.
    pub fn boundary_loops(&self) -> Vec<Vec<u32>> {
        // A directed edge is boundary iff its reverse never occurs.
        let mut directed: HashMap<(u32, u32), ()> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                directed.insert((f[k], f[(k + 1) % 3]), ());
            }
        }
        // Boundary direction follows the face winding: keep (a, b) present
        // with (b, a) absent.
        let mut next: HashMap<u32, u32> = HashMap::new();
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                next.insert(a, b);
            }
        }
        let mut loops = Vec::new();
        let mut starts: Vec<u32> = next.keys().copied().collect();
        starts.sort_unstable();
        let mut visited: HashMap<u32, ()> = HashMap::new();
        for s in starts {
            if visited.contains_key(&s) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = s;
            loop {
                cycle.push(cur);
                visited.insert(cur, ());
                cur = next[&cur];
                if cur == s {
                    break;
                }
            }
            loops.push(cycle);
        }
        loops
    }

    /// Disk check: V - E + F = 1 and exactly one boundary loop.
    pub fn is_disk(&self) -> bool {
        self.euler_characteristic() == 1 && self.boundary_loops().len() == 1
    }

    /// One uniform midpoint subdivision: each face splits into four, new
    /// vertices at edge midpoints. Geometry is unchanged (the refined faces
    /// are coplanar sub-triangles), so every new edge is exactly half of an
    /// original one and `max_edge_length` halves.
    pub fn midpoint_subdivide(&self) -> TriMesh {
        let edges = self.undirected_edges();
        let mut mid_of: HashMap<(u32, u32), u32> = HashMap::with_capacity(edges.len());
        let mut vertices = self.vertices.clone();
        let mut params = self.params.clone();
        let mut boundary = self.boundary_vertex.clone();

        // Which undirected edges are boundary (single incidence)?
        let mut incidence: HashMap<(u32, u32), u8> = HashMap::with_capacity(edges.len());
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *incidence.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }

        for &(a, b) in &edges {
            let id = vertices.len() as u32;
            let pa = &self.vertices[a as usize];
            let pb = &self.vertices[b as usize];
            vertices.push(pa.midpoint(pb));
            let qa = self.params[a as usize];
            let qb = self.params[b as usize];
            let chart = if qa.chart == qb.chart { qa.chart } else { NO_CHART };
            params.push(ParamPoint::new(
                0.5 * (qa.u + qb.u),
                0.5 * (qa.v + qb.v),
                chart,
            ));
            boundary.push(incidence[&(a, b)] == 1);
            mid_of.insert((a, b), id);
        }

        let mid = |a: u32, b: u32| mid_of[&(a.min(b), a.max(b))];
        let mut faces = Vec::with_capacity(self.faces.len() * 4);
        for f in &self.faces {
            let [a, b, c] = *f;
            let (mab, mbc, mca) = (mid(a, b), mid(b, c), mid(c, a));
            faces.push([a, mab, mca]);
            faces.push([mab, b, mbc]);
            faces.push([mca, mbc, c]);
            faces.push([mab, mbc, mca]);
        }

        TriMesh {
            vertices,
            params,
            faces,
            boundary_vertex: boundary,
        }
    }
}

fn directed_edge_sense(face: &[u32; 3], a: u32, b: u32) -> bool {
    // true if the face traverses the edge as a -> b
    for k in 0..3 {
        if face[k] == a && face[(k + 1) % 3] == b {
            return true;
        }
    }
    false
}

pub fn triangle_area(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    0.5 * b.sub(a).cross(&c.sub(a)).norm()
}

/// Generator metadata attached to a [`MeshedSurface`].
#[derive(Debug, Clone)]
pub enum SurfaceKind {
    /// Flat disk in the x3 = 0 plane; |A|^2 is identically zero.
    Plane { radius: f64, rings: usize },
    /// Helicoid (u cos v, u sin v, c v); |A|^2(u) = 2c^2/(c^2+u^2)^2.
    Helicoid { spec: crate::generators::HelicoidSpec },
    /// Sub-band of a helicoid away from the axis, winding `turns` times.
    MultigraphAnnulus {
        pitch: f64,
        rho_min: f64,
        rho_max: f64,
        turns: f64,
        /// Single-valued over its planar projection (turns <= 1/2), so every
        /// subset is a graph.
        certified_graph: bool,
    },
    /// Integrated from Weierstrass data; the expression source (when built
    /// from expressions) allows regeneration at finer resolution.
    Weierstrass {
        source: Option<crate::weierstrass::WeierstrassSource>,
    },
    Imported,
}

impl SurfaceKind {
    /// Closed-form |A|^2 at axis distance |u|, when the kind has one.
    pub fn analytic_a2(&self, u: f64) -> Option<f64> {
        match self {
            SurfaceKind::Plane { .. } => Some(0.0),
            SurfaceKind::Helicoid { spec } => Some(crate::analytic::helicoid_a2(spec.pitch, u)),
            SurfaceKind::MultigraphAnnulus { pitch, .. } => {
                Some(crate::analytic::helicoid_a2(*pitch, u))
            }
            _ => None,
        }
    }

    pub fn has_analytic_curvature(&self) -> bool {
        matches!(
            self,
            SurfaceKind::Plane { .. }
                | SurfaceKind::Helicoid { .. }
                | SurfaceKind::MultigraphAnnulus { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceKind::Plane { .. } => "plane",
            SurfaceKind::Helicoid { .. } => "helicoid",
            SurfaceKind::MultigraphAnnulus { .. } => "multigraph-annulus",
            SurfaceKind::Weierstrass { .. } => "weierstrass",
            SurfaceKind::Imported => "imported",
        }
    }

    /// Pitch of the underlying helicoid, for helicoid-family kinds.
    pub fn pitch(&self) -> Option<f64> {
        match self {
            SurfaceKind::Helicoid { spec } => Some(spec.pitch),
            SurfaceKind::MultigraphAnnulus { pitch, .. } => Some(*pitch),
            _ => None,
        }
    }
}

/// A triangulated surface patch together with its generator metadata and the
/// cached longest edge length. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MeshedSurface {
    pub mesh: TriMesh,
    pub kind: SurfaceKind,
    pub h_max: f64,
}

impl MeshedSurface {
    pub fn new(mesh: TriMesh, kind: SurfaceKind) -> Self {
        let h_max = mesh.max_edge_length();
        Self { mesh, kind, h_max }
    }

    /// Axis distance of a vertex: |u| from the chart when present, otherwise
    /// the spatial distance to the x3-axis (they coincide on helicoids).
    pub fn axis_distance(&self, v: usize) -> f64 {
        let q = self.mesh.params()[v];
        if q.chart != NO_CHART {
            q.u.abs()
        } else {
            let p = self.mesh.vertices()[v];
            (p.x * p.x + p.y * p.y).sqrt()
        }
    }

    /// Vertex nearest the ambient origin (the designated center of the
    /// experiment pipelines).
    pub fn vertex_nearest_origin(&self) -> usize {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.mesh.vertices().iter().enumerate() {
            let d = p.norm();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Uniform rescaling by `lambda > 0`. Helicoid-family metadata maps to the
    /// rescaled member (pitch lambda*c, parameters (lambda*u, v)); other kinds
    /// become imported.
    pub fn scaled(&self, lambda: f64) -> MeshedSurface {
        assert!(lambda > 0.0, "scale factor must be positive");
        let vertices: Vec<Point3> = self
            .mesh
            .vertices()
            .iter()
            .map(|p| p.scale(lambda))
            .collect();
        let params: Vec<ParamPoint> = self
            .mesh
            .params()
            .iter()
            .map(|q| {
                if q.chart == NO_CHART {
                    *q
                } else {
                    ParamPoint::new(lambda * q.u, q.v, q.chart)
                }
            })
            .collect();
        let mesh = TriMesh {
            vertices,
            params,
            faces: self.mesh.faces.clone(),
            boundary_vertex: self.mesh.boundary_vertex.clone(),
        };
        let kind = match &self.kind {
            SurfaceKind::Helicoid { spec } => SurfaceKind::Helicoid {
                spec: spec.scaled(lambda),
            },
            SurfaceKind::MultigraphAnnulus {
                pitch,
                rho_min,
                rho_max,
                turns,
                certified_graph,
            } => SurfaceKind::MultigraphAnnulus {
                pitch: lambda * pitch,
                rho_min: lambda * rho_min,
                rho_max: lambda * rho_max,
                turns: *turns,
                certified_graph: *certified_graph,
            },
            _ => SurfaceKind::Imported,
        };
        MeshedSurface::new(mesh, kind)
    }

    /// Combinatorial midpoint refinement (geometry unchanged).
    pub fn subdivided(&self) -> MeshedSurface {
        MeshedSurface::new(self.mesh.midpoint_subdivide(), self.kind.clone())
    }
}
