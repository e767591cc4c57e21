//! Discretized model surfaces: planar disks, helicoids, and annular
//! multi-valued graph bands extracted from helicoids.
//!
//! The helicoid parametrization is fixed as X(u, v) = (u cos v, u sin v, c v)
//! with the x3-axis on the surface; the axis distance of a vertex is |u|.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{build_mesh, MeshedSurface, ParamPoint, Point3, SurfaceKind};

/// Largest angular step the helicoid and annulus generators accept.
pub const MAX_ANGULAR_STEP: f64 = PI / 8.0;

/// Parameters of a helicoid patch over [-rho_max, rho_max] x v_range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HelicoidSpec {
    pub pitch: f64,
    pub rho_max: f64,
    pub v_range: (f64, f64),
    /// Grid cells along u and v. A recovered spec (read back from a file)
    /// carries (0, 0) and cannot be regenerated.
    pub resolution: (usize, usize),
}

impl HelicoidSpec {
    pub fn new(pitch: f64, rho_max: f64, v_range: (f64, f64), resolution: (usize, usize)) -> Self {
        Self {
            pitch,
            rho_max,
            v_range,
            resolution,
        }
    }

    pub(crate) fn recovered(pitch: f64, rho_max: f64, v_lo: f64, v_hi: f64) -> Self {
        Self {
            pitch,
            rho_max,
            v_range: (v_lo, v_hi),
            resolution: (0, 0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pitch > 0.0) || !self.pitch.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pitch must be positive, got {}",
                self.pitch
            )));
        }
        if !(self.rho_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rho_max must be positive, got {}",
                self.rho_max
            )));
        }
        if !(self.v_range.1 > self.v_range.0) {
            return Err(Error::InvalidParameter(format!(
                "v_range must have positive length, got ({}, {})",
                self.v_range.0, self.v_range.1
            )));
        }
        if self.resolution.0 < 2 || self.resolution.1 < 8 {
            return Err(Error::InvalidParameter(format!(
                "resolution must be at least (2, 8), got {:?}",
                self.resolution
            )));
        }
        Ok(())
    }

    pub fn angular_step(&self) -> f64 {
        (self.v_range.1 - self.v_range.0) / self.resolution.1 as f64
    }

    /// The rescaled member: pitch lambda*c over the lambda-scaled band.
    pub fn scaled(&self, lambda: f64) -> HelicoidSpec {
        HelicoidSpec {
            pitch: lambda * self.pitch,
            rho_max: lambda * self.rho_max,
            v_range: self.v_range,
            resolution: self.resolution,
        }
    }

    /// Same patch at doubled grid resolution.
    pub fn refined(&self) -> HelicoidSpec {
        HelicoidSpec {
            resolution: (self.resolution.0 * 2, self.resolution.1 * 2),
            ..self.clone()
        }
    }
}

/// Flat disk of the given radius in the x3 = 0 plane: `rings` concentric
/// rings of 6*rings vertices each around a center vertex. Every spoke is a
/// straight radial polyline, so graph distances from the center are exact.
pub fn make_plane_disk(radius: f64, rings: usize) -> Result<MeshedSurface> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if rings < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 rings, got {rings}"
        )));
    }
    let m = 6 * rings;
    let mut vertices = vec![Point3::new(0.0, 0.0, 0.0)];
    let mut params = vec![ParamPoint::new(0.0, 0.0, 0)];
    for i in 1..=rings {
        let r = radius * i as f64 / rings as f64;
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            let (x, y) = (r * t.cos(), r * t.sin());
            vertices.push(Point3::new(x, y, 0.0));
            params.push(ParamPoint::new(x, y, 0));
        }
    }

    let ring_start = |i: usize| (1 + (i - 1) * m) as u32;
    let mut faces: Vec<[u32; 3]> = Vec::with_capacity(m * (2 * rings - 1));
    for k in 0..m as u32 {
        faces.push([0, ring_start(1) + k, ring_start(1) + (k + 1) % m as u32]);
    }
    for i in 1..rings {
        let (s_in, s_out) = (ring_start(i), ring_start(i + 1));
        for k in 0..m as u32 {
            let k1 = (k + 1) % m as u32;
            faces.push([s_in + k, s_out + k, s_out + k1]);
            faces.push([s_in + k, s_out + k1, s_in + k1]);
        }
    }

    let mesh = build_mesh(vertices, params, faces)?;
    debug_assert!(mesh.is_disk());
    Ok(MeshedSurface::new(mesh, SurfaceKind::Plane { radius, rings }))
}

/// Helicoid patch X(u, v) = (u cos v, u sin v, c v) sampled on a uniform
/// (n_u x n_v) grid over [-rho_max, rho_max] x v_range.
pub fn make_helicoid(spec: &HelicoidSpec) -> Result<MeshedSurface> {
    spec.validate()?;
    if spec.angular_step() > MAX_ANGULAR_STEP * (1.0 + 1e-12) {
        return Err(Error::ResolutionTooCoarse {
            step: spec.angular_step(),
            max: MAX_ANGULAR_STEP,
        });
    }
    let (n_u, n_v) = spec.resolution;
    let (v0, v1) = spec.v_range;
    let c = spec.pitch;
    let mut vertices = Vec::with_capacity((n_u + 1) * (n_v + 1));
    let mut params = Vec::with_capacity(vertices.capacity());
    for j in 0..=n_v {
        let v = v0 + (v1 - v0) * j as f64 / n_v as f64;
        let (sv, cv) = v.sin_cos();
        for i in 0..=n_u {
            let u = -spec.rho_max + 2.0 * spec.rho_max * i as f64 / n_u as f64;
            vertices.push(Point3::new(u * cv, u * sv, c * v));
            params.push(ParamPoint::new(u, v, 0));
        }
    }
    let faces = grid_faces(n_u, n_v);
    let mesh = build_mesh(vertices, params, faces)?;
    Ok(MeshedSurface::new(
        mesh,
        SurfaceKind::Helicoid { spec: spec.clone() },
    ))
}

/// Triangulates an (n_u x n_v)-cell grid with the main diagonal; vertex (i, j)
/// sits at index j*(n_u+1)+i. The main-diagonal split is invariant under the
/// 180-degree grid rotation, which keeps the mesh combinatorially symmetric
/// under (u, v) -> (-u, -v).
pub(crate) fn grid_faces(n_u: usize, n_v: usize) -> Vec<[u32; 3]> {
    let stride = (n_u + 1) as u32;
    let mut faces = Vec::with_capacity(2 * n_u * n_v);
    for j in 0..n_v as u32 {
        for i in 0..n_u as u32 {
            let a = j * stride + i;
            let b = a + 1;
            let c = a + stride;
            let d = c + 1;
            faces.push([a, b, d]);
            faces.push([a, d, c]);
        }
    }
    faces
}

/// Extracts the sub-band u in [rho_min, rho_max] (positive sign of u) of a
/// helicoid, with v spanning `turns` full rotations centered in the parent's
/// v range. The band excludes the axis, so it projects to the planar annulus
/// rho_min <= |(x1, x2)| <= rho_max, covering it `turns` times; for
/// turns <= 1/2 the band is a single-valued graph and every subset of it is
/// graphical.
pub fn extract_annular_multigraph(
    parent: &MeshedSurface,
    rho_min: f64,
    rho_max: f64,
    turns: f64,
) -> Result<MeshedSurface> {
    let spec = match &parent.kind {
        SurfaceKind::Helicoid { spec } => spec.clone(),
        k => {
            return Err(Error::InvalidParameter(format!(
                "annular multigraph extraction needs a helicoid parent, got {}",
                k.name()
            )))
        }
    };
    let span = 2.0 * PI * turns;
    let (v0, v1) = spec.v_range;
    let fits = rho_min > 0.0
        && rho_min < rho_max
        && rho_max <= spec.rho_max * (1.0 + 1e-12)
        && turns > 0.0
        && span <= (v1 - v0) * (1.0 + 1e-12);
    if !fits {
        return Err(Error::RangeOutsideParent {
            lo: rho_min,
            hi: rho_max,
            turns,
        });
    }
    let v_mid = 0.5 * (v0 + v1);
    let (w_lo, w_hi) = (v_mid - 0.5 * span, v_mid + 0.5 * span);
    let tol = 1e-9 * (1.0 + spec.rho_max);
    let mesh = &parent.mesh;
    let selected: Vec<bool> = mesh
        .params()
        .iter()
        .map(|q| {
            q.u >= rho_min - tol && q.u <= rho_max + tol && q.v >= w_lo - tol && q.v <= w_hi + tol
        })
        .collect();

    let mut remap = vec![u32::MAX; mesh.vertex_count()];
    let mut vertices = Vec::new();
    let mut params = Vec::new();
    for (i, sel) in selected.iter().enumerate() {
        if *sel {
            remap[i] = vertices.len() as u32;
            vertices.push(mesh.vertices()[i]);
            params.push(mesh.params()[i]);
        }
    }
    let faces: Vec<[u32; 3]> = mesh
        .faces()
        .iter()
        .filter(|f| f.iter().all(|&v| selected[v as usize]))
        .map(|f| [remap[f[0] as usize], remap[f[1] as usize], remap[f[2] as usize]])
        .collect();
    if faces.is_empty() {
        return Err(Error::RangeOutsideParent {
            lo: rho_min,
            hi: rho_max,
            turns,
        });
    }

    let (mut lo_u, mut hi_u) = (f64::INFINITY, f64::NEG_INFINITY);
    for q in &params {
        lo_u = lo_u.min(q.u);
        hi_u = hi_u.max(q.u);
    }
    let sub = build_mesh(vertices, params, faces)?;
    Ok(MeshedSurface::new(
        sub,
        SurfaceKind::MultigraphAnnulus {
            pitch: spec.pitch,
            rho_min: lo_u,
            rho_max: hi_u,
            turns,
            certified_graph: turns <= 0.5 + 1e-12,
        },
    ))
}

/// Regenerates a surface at doubled grid resolution when its generator is
/// known; falls back to combinatorial midpoint subdivision otherwise.
pub fn refine_surface(surface: &MeshedSurface) -> Result<MeshedSurface> {
    match &surface.kind {
        SurfaceKind::Plane { radius, rings } if *rings > 0 => make_plane_disk(*radius, rings * 2),
        SurfaceKind::Helicoid { spec } if spec.resolution.0 > 0 => make_helicoid(&spec.refined()),
        SurfaceKind::Weierstrass { source: Some(src) } => {
            crate::weierstrass::evaluate_expressions(&src.refined())
        }
        _ => Ok(surface.subdivided()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use approx::assert_relative_eq;

    #[test]
    fn plane_disk_is_a_disk_with_the_right_area() {
        let disk = make_plane_disk(2.0, 24).unwrap();
        assert!(disk.mesh.is_disk());
        let area = disk.mesh.total_area();
        assert_relative_eq!(area, 4.0 * PI, max_relative = 0.01);
        // A flat disk has no curvature anywhere.
        assert_eq!(disk.kind.analytic_a2(0.3), Some(0.0));
    }

    #[test]
    fn helicoid_topology_symmetry_and_axis() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 2.0, (-PI, PI), (8, 32))).unwrap();
        assert!(h.mesh.is_disk());
        // The grid contains the axis column u = 0 and the vertical segment
        // on it: X(0, v) = (0, 0, v).
        let axis: Vec<usize> = (0..h.mesh.vertex_count())
            .filter(|&i| h.mesh.params()[i].u == 0.0)
            .collect();
        assert_eq!(axis.len(), 33);
        for &i in &axis {
            let p = h.mesh.vertices()[i];
            assert!(p.x.abs() < 1e-15 && p.y.abs() < 1e-15);
        }
    }

    #[test]
    fn helicoid_rejects_coarse_angular_steps() {
        let err = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-PI, PI), (4, 8))).unwrap_err();
        assert!(matches!(err, Error::ResolutionTooCoarse { .. }), "{err}");
    }

    #[test]
    fn helicoid_analytic_curvature_examples() {
        let spec = HelicoidSpec::new(1.0, 3.0, (-1.0, 1.0), (12, 16));
        let h = make_helicoid(&spec).unwrap();
        // At the axis |A|^2 = 2/c^2 = 2; far out it decays to zero.
        assert_relative_eq!(h.kind.analytic_a2(0.0).unwrap(), 2.0);
        assert!(h.kind.analytic_a2(50.0).unwrap() < 1e-5);
        // Closed form against the finite-difference oracle once more, through
        // the surface metadata path.
        for &u in &[0.0, 0.4, 1.9] {
            let (a2, _) =
                analytic::finite_difference_curvature(|a, b| analytic::helicoid_point(1.0, a, b), u, 0.2, 1e-4);
            assert_relative_eq!(h.kind.analytic_a2(u).unwrap(), a2, max_relative = 1e-6);
        }
    }

    #[test]
    fn annulus_band_is_an_embedded_strip_that_winds() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-1.5 * PI, 1.5 * PI), (10, 48))).unwrap();
        let band = extract_annular_multigraph(&h, 0.5, 1.0, 1.0).unwrap();
        // One full turn of the band is an embedded strip: a topological disk
        // whose projection winds once around the axis.
        assert_eq!(band.mesh.euler_characteristic(), 1);
        assert_eq!(band.mesh.boundary_loops().len(), 1);
        match band.kind {
            SurfaceKind::MultigraphAnnulus { turns, certified_graph, .. } => {
                assert_eq!(turns, 1.0);
                assert!(!certified_graph);
            }
            _ => panic!("wrong kind"),
        }
        // Winding of the projection along a grid row of the band.
        let row_u = band.mesh.params()[0].u;
        let mut row: Vec<(f64, f64)> = band
            .mesh
            .params()
            .iter()
            .zip(band.mesh.vertices().iter())
            .filter(|(q, _)| (q.u - row_u).abs() < 1e-12)
            .map(|(q, p)| (q.v, p.y.atan2(p.x)))
            .collect();
        row.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut winding = 0.0;
        for w in row.windows(2) {
            let mut d = w[1].1 - w[0].1;
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            winding += d;
        }
        assert_relative_eq!(winding, 2.0 * PI, max_relative = 0.05);
    }

    #[test]
    fn half_turn_band_is_certified_graphical() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-PI, PI), (10, 32))).unwrap();
        let band = extract_annular_multigraph(&h, 0.5, 1.0, 0.5).unwrap();
        match band.kind {
            SurfaceKind::MultigraphAnnulus { certified_graph, .. } => assert!(certified_graph),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn axis_band_is_rejected() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-PI, PI), (10, 32))).unwrap();
        for (lo, hi, turns) in [(0.0, 1.0, 0.5), (0.5, 1.5, 0.5), (0.5, 1.0, 3.0)] {
            let err = extract_annular_multigraph(&h, lo, hi, turns).unwrap_err();
            assert!(matches!(err, Error::RangeOutsideParent { .. }), "{err}");
        }
    }

    #[test]
    fn refined_helicoid_halves_h_max() {
        let spec = HelicoidSpec::new(0.5, 1.0, (-PI, PI), (8, 32));
        let h = make_helicoid(&spec).unwrap();
        let r = refine_surface(&h).unwrap();
        assert!((r.h_max - 0.5 * h.h_max).abs() <= 0.1 * 0.5 * h.h_max);
    }
}
