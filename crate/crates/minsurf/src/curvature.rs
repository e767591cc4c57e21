//! Second-fundamental-form norm estimation, minimality residuals, and
//! blow-up pair verification.
//!
//! The quadric-fit estimator fits a full second-order patch over the 2-ring
//! in the vertex tangent frame (normal from the area-weighted face-normal
//! average) and reads the principal curvatures off the fitted shape operator.
//! Surfaces with closed-form metadata use it directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{MeshedSurface, Point3};

/// Default relative tolerance for blow-up pair verification; dominated by the
/// curvature-estimate error at the shipped resolutions.
pub const BLOW_UP_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurvatureMethod {
    Analytic,
    QuadricFit,
}

/// Per-vertex |A|^2 and mean curvature H (signed relative to the estimated
/// vertex normal). Vertices without an estimate (boundary vertices under the
/// quadric fit) carry `None`.
#[derive(Debug, Clone)]
pub struct CurvatureField {
    pub a2: Vec<Option<f64>>,
    pub h: Vec<Option<f64>>,
    pub method: CurvatureMethod,
}

impl CurvatureField {
    /// Max |H| over estimated interior vertices.
    pub fn max_abs_h(&self) -> f64 {
        self.h
            .iter()
            .flatten()
            .map(|h| h.abs())
            .fold(0.0, f64::max)
    }
}

/// Estimates the curvature field with the default method choice: analytic
/// when closed-form metadata is available, quadric fit otherwise.
pub fn estimate_curvature(surface: &MeshedSurface) -> Result<CurvatureField> {
    if surface.kind.has_analytic_curvature() {
        estimate_curvature_with(surface, CurvatureMethod::Analytic)
    } else {
        estimate_curvature_with(surface, CurvatureMethod::QuadricFit)
    }
}

pub fn estimate_curvature_with(
    surface: &MeshedSurface,
    method: CurvatureMethod,
) -> Result<CurvatureField> {
    match method {
        CurvatureMethod::Analytic => {
            if !surface.kind.has_analytic_curvature() {
                return Err(Error::InvalidParameter(format!(
                    "surface kind '{}' has no closed-form curvature",
                    surface.kind.name()
                )));
            }
            let n = surface.mesh.vertex_count();
            let mut a2 = Vec::with_capacity(n);
            for i in 0..n {
                let u = surface.mesh.params()[i].u;
                a2.push(surface.kind.analytic_a2(u));
            }
            // All shipped closed forms are minimal surfaces.
            let h = vec![Some(0.0); n];
            Ok(CurvatureField {
                a2,
                h,
                method: CurvatureMethod::Analytic,
            })
        }
        CurvatureMethod::QuadricFit => quadric_fit_field(surface),
    }
}

/// Numerical minimality certificate: max |H| over interior vertices, always
/// from the quadric fit (the analytic tag would make the check circular).
pub fn mean_curvature_residual(surface: &MeshedSurface) -> Result<f64> {
    let field = estimate_curvature_with(surface, CurvatureMethod::QuadricFit)?;
    Ok(field.max_abs_h())
}

fn quadric_fit_field(surface: &MeshedSurface) -> Result<CurvatureField> {
    let mesh = &surface.mesh;
    let n = mesh.vertex_count();

    // one-ring adjacency
    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
    for f in mesh.faces() {
        for k in 0..3 {
            let a = f[k] as usize;
            let b = f[(k + 1) % 3];
            if !neighbors[a].contains(&b) {
                neighbors[a].push(b);
            }
            let c = f[(k + 2) % 3];
            if !neighbors[a].contains(&c) {
                neighbors[a].push(c);
            }
        }
    }

    // area-weighted vertex normals
    let mut normals = vec![Point3::new(0.0, 0.0, 0.0); n];
    for f in mesh.faces() {
        let [a, b, c] = *f;
        let pa = &mesh.vertices()[a as usize];
        let pb = &mesh.vertices()[b as usize];
        let pc = &mesh.vertices()[c as usize];
        let fnorm = pb.sub(pa).cross(&pc.sub(pa)); // length = 2 * area
        for &v in f {
            normals[v as usize] = normals[v as usize].add(&fnorm.scale(0.5));
        }
    }

    let mut a2 = vec![None; n];
    let mut h = vec![None; n];
    for vi in 0..n {
        if mesh.is_boundary_vertex(vi) {
            continue;
        }
        // two-ring, distinct, excluding the vertex itself
        let mut ring: Vec<u32> = Vec::new();
        for &w in &neighbors[vi] {
            if w as usize != vi && !ring.contains(&w) {
                ring.push(w);
            }
            for &w2 in &neighbors[w as usize] {
                if w2 as usize != vi && !ring.contains(&w2) {
                    ring.push(w2);
                }
            }
        }
        if ring.len() < 6 {
            return Err(Error::InsufficientNeighborhood {
                vertex: vi,
                found: ring.len(),
                needed: 6,
            });
        }

        let nrm = normals[vi].normalized();
        let t1 = pick_orthogonal(&nrm);
        let t2 = nrm.cross(&t1);
        let origin = mesh.vertices()[vi];

        // least squares for z = a x^2/2 + b x y + c y^2/2 + d x + e y, with
        // coordinates normalized by the mean neighbor distance to keep the
        // normal equations well conditioned at any mesh scale
        let scale = ring
            .iter()
            .map(|&w| mesh.vertices()[w as usize].dist(&origin))
            .sum::<f64>()
            / ring.len() as f64;
        let inv = 1.0 / scale;
        let mut ata = [[0.0f64; 5]; 5];
        let mut atb = [0.0f64; 5];
        for &w in &ring {
            let d = mesh.vertices()[w as usize].sub(&origin);
            let (x, y, z) = (d.dot(&t1) * inv, d.dot(&t2) * inv, d.dot(&nrm) * inv);
            let row = [0.5 * x * x, x * y, 0.5 * y * y, x, y];
            for r in 0..5 {
                for c in 0..5 {
                    ata[r][c] += row[r] * row[c];
                }
                atb[r] += row[r] * z;
            }
        }
        let sol = match solve5(ata, atb) {
            Some(s) => s,
            None => {
                return Err(Error::InsufficientNeighborhood {
                    vertex: vi,
                    found: ring.len(),
                    needed: 6,
                })
            }
        };
        // undo the normalization: quadratic coefficients pick up 1/scale
        let (fa, fb, fc, fd, fe) = (
            sol[0] * inv,
            sol[1] * inv,
            sol[2] * inv,
            sol[3],
            sol[4],
        );

        // Shape operator of the graph z(x, y) at the origin with gradient
        // (d, e) and Hessian [[a, b], [b, c]].
        let g = 1.0 + fd * fd + fe * fe;
        let sg = g.sqrt();
        let ii = [[fa / sg, fb / sg], [fb / sg, fc / sg]];
        let i_mat = [[1.0 + fd * fd, fd * fe], [fd * fe, 1.0 + fe * fe]];
        let det_i = i_mat[0][0] * i_mat[1][1] - i_mat[0][1] * i_mat[1][0];
        let inv_i = [
            [i_mat[1][1] / det_i, -i_mat[0][1] / det_i],
            [-i_mat[1][0] / det_i, i_mat[0][0] / det_i],
        ];
        let s00 = inv_i[0][0] * ii[0][0] + inv_i[0][1] * ii[1][0];
        let s01 = inv_i[0][0] * ii[0][1] + inv_i[0][1] * ii[1][1];
        let s10 = inv_i[1][0] * ii[0][0] + inv_i[1][1] * ii[1][0];
        let s11 = inv_i[1][0] * ii[0][1] + inv_i[1][1] * ii[1][1];
        let mean = 0.5 * (s00 + s11);
        let gauss = s00 * s11 - s01 * s10;
        a2[vi] = Some((4.0 * mean * mean - 2.0 * gauss).max(0.0));
        h[vi] = Some(mean);
    }

    Ok(CurvatureField {
        a2,
        h,
        method: CurvatureMethod::QuadricFit,
    })
}

fn pick_orthogonal(n: &Point3) -> Point3 {
    let cand = if n.x.abs() < 0.9 {
        Point3::new(1.0, 0.0, 0.0)
    } else {
        Point3::new(0.0, 1.0, 0.0)
    };
    cand.sub(&n.scale(cand.dot(n))).normalized()
}

fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    for col in 0..5 {
        let mut piv = col;
        for r in col + 1..5 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..5 {
            let f = a[r][col] / a[col][col];
            for c in col..5 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 5];
    for r in (0..5).rev() {
        let mut s = b[r];
        for c in r + 1..5 {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// A verified blow-up pair: the measured supremum of |A|^2 over the extrinsic
/// ball of radius `scale` about the center satisfies
/// `sup <= 4 C^2 / scale^2 = 4 |A|^2(center)` within the declared tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct BlowUpPair {
    pub center: usize,
    pub scale: f64,
    pub constant: f64,
    /// Measured sup of |A|^2 over mesh vertices inside the extrinsic ball.
    pub sup_check: f64,
    pub center_value: f64,
    /// 4 C^2 / s^2, the curvature bound the sup is compared against.
    pub bound: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowUpViolation {
    pub center: usize,
    pub scale: f64,
    pub constant: f64,
    pub sup_check: f64,
    pub center_value: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub sup_ok: bool,
    pub equality_ok: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict")]
pub enum BlowUpCheck {
    Accepted(BlowUpPair),
    Rejected(BlowUpViolation),
}

impl BlowUpCheck {
    pub fn is_accepted(&self) -> bool {
        matches!(self, BlowUpCheck::Accepted(_))
    }
}

/// Verifies whether (y, s) is a C-blow-up pair at mesh level: the sup of
/// |A|^2 over all mesh vertices inside the extrinsic ball B_s(y) must stay
/// below 4C^2/s^2 (relaxed by `tol`), and 4C^2/s^2 must equal 4|A|^2(y)
/// within `tol`. The ball may meet more of the surface than the component
/// through y; that is intended.
pub fn check_blow_up_pair(
    surface: &MeshedSurface,
    center: usize,
    scale: f64,
    constant: f64,
    tol: f64,
) -> Result<BlowUpCheck> {
    if !(scale > 0.0) || !(constant > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale and constant must be positive (s={scale}, C={constant})"
        )));
    }
    let field = estimate_curvature(surface)?;
    let center_a2 = field.a2[center].ok_or(Error::BlowUpUnverified {
        vertex: center,
        reason: "no curvature estimate at the center (boundary vertex)".into(),
    })?;

    let cp = surface.mesh.vertices()[center];
    let mut sup = f64::NEG_INFINITY;
    let mut count = 0usize;
    for (i, p) in surface.mesh.vertices().iter().enumerate() {
        if p.dist(&cp) <= scale {
            if let Some(a2) = field.a2[i] {
                sup = sup.max(a2);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::EmptyBall {
            center,
            radius: scale,
        });
    }

    let bound = 4.0 * constant * constant / (scale * scale);
    let center4 = 4.0 * center_a2;
    let sup_ok = sup <= bound * (1.0 + tol);
    let equality_ok = center4 > 0.0 && (bound - center4).abs() <= tol * center4;

    if sup_ok && equality_ok {
        Ok(BlowUpCheck::Accepted(BlowUpPair {
            center,
            scale,
            constant,
            sup_check: sup,
            center_value: center_a2,
            bound,
            tolerance: tol,
        }))
    } else {
        let reason = if center4 <= 0.0 {
            "4C^2/s^2 = 4|A|^2(y) is unsatisfiable for finite s when |A|^2(y) = 0".to_string()
        } else if !equality_ok {
            format!(
                "equality clause fails: 4C^2/s^2 = {bound:.6e} vs 4|A|^2(y) = {center4:.6e}"
            )
        } else {
            format!("sup |A|^2 = {sup:.6e} exceeds 4C^2/s^2 = {bound:.6e}")
        };
        Ok(BlowUpCheck::Rejected(BlowUpViolation {
            center,
            scale,
            constant,
            sup_check: sup,
            center_value: center_a2,
            bound,
            tolerance: tol,
            sup_ok,
            equality_ok,
            reason,
        }))
    }
}

/// The blow-up scale s = C/|A|(y) forced by the equality clause of the
/// definition. The caller should confirm the sup condition with
/// [`check_blow_up_pair`].
pub fn blow_up_scale(surface: &MeshedSurface, center: usize, constant: f64) -> Result<f64> {
    let field = estimate_curvature(surface)?;
    let a2 = field.a2[center].ok_or(Error::BlowUpUnverified {
        vertex: center,
        reason: "no curvature estimate at the center".into(),
    })?;
    if a2 <= 1e-30 {
        return Err(Error::ZeroCurvatureAtCenter { vertex: center });
    }
    Ok(constant / a2.sqrt())
}

/// Smallest K such that sup over vertices outside B_delta of |A|^2 is at
/// most K * delta^-4, over the supplied deltas. This is the envelope check
/// used by the family validator.
pub fn curvature_decay_envelope(surface: &MeshedSurface, deltas: &[f64]) -> Result<f64> {
    let field = estimate_curvature(surface)?;
    let mut k = 0.0f64;
    for &delta in deltas {
        let mut sup = 0.0f64;
        for (i, p) in surface.mesh.vertices().iter().enumerate() {
            if p.norm() >= delta {
                if let Some(a2) = field.a2[i] {
                    sup = sup.max(a2);
                }
            }
        }
        k = k.max(sup * delta.powi(4));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_helicoid, make_plane_disk, HelicoidSpec};
    use crate::mesh::{build_mesh, MeshedSurface, ParamPoint, SurfaceKind};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn uv_sphere(radius: f64, n_lat: usize, n_lon: usize) -> MeshedSurface {
        let mut v = vec![Point3::new(0.0, 0.0, radius)];
        for i in 1..n_lat {
            let phi = PI * i as f64 / n_lat as f64;
            for j in 0..n_lon {
                let th = 2.0 * PI * j as f64 / n_lon as f64;
                v.push(Point3::new(
                    radius * phi.sin() * th.cos(),
                    radius * phi.sin() * th.sin(),
                    radius * phi.cos(),
                ));
            }
        }
        v.push(Point3::new(0.0, 0.0, -radius));
        let south = (v.len() - 1) as u32;
        let idx = |i: usize, j: usize| (1 + (i - 1) * n_lon + (j % n_lon)) as u32;
        let mut f = Vec::new();
        for j in 0..n_lon {
            f.push([0, idx(1, j), idx(1, j + 1)]);
        }
        for i in 1..n_lat - 1 {
            for j in 0..n_lon {
                f.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                f.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        for j in 0..n_lon {
            f.push([south, idx(n_lat - 1, j + 1), idx(n_lat - 1, j)]);
        }
        let n = v.len();
        let mesh = build_mesh(v, vec![ParamPoint::none(); n], f).unwrap();
        MeshedSurface::new(mesh, SurfaceKind::Imported)
    }

    #[test]
    fn plane_curvature_vanishes() {
        let disk = make_plane_disk(1.0, 10).unwrap();
        let f = estimate_curvature(&disk).unwrap();
        assert_eq!(f.method, CurvatureMethod::Analytic);
        assert!(f.a2.iter().flatten().all(|&a| a == 0.0));
        // and the discrete estimator agrees
        let fq = estimate_curvature_with(&disk, CurvatureMethod::QuadricFit).unwrap();
        assert!(fq.a2.iter().flatten().all(|&a| a < 1e-16));
        assert!(mean_curvature_residual(&disk).unwrap() < 1e-10);
    }

    #[test]
    fn helicoid_axis_quadric_fit_matches_closed_form() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-0.8, 0.8), (24, 24))).unwrap();
        let f = estimate_curvature_with(&h, CurvatureMethod::QuadricFit).unwrap();
        let axis: Vec<usize> = (0..h.mesh.vertex_count())
            .filter(|&i| h.mesh.params()[i].u == 0.0 && !h.mesh.is_boundary_vertex(i))
            .collect();
        assert!(!axis.is_empty());
        for &i in &axis {
            let a2 = f.a2[i].unwrap();
            assert_relative_eq!(a2, 2.0, max_relative = 0.02);
        }
    }

    #[test]
    fn sphere_control_is_non_minimal_with_the_right_curvatures() {
        let s = uv_sphere(2.0, 28, 56);
        let f = estimate_curvature(&s).unwrap();
        assert_eq!(f.method, CurvatureMethod::QuadricFit);
        let mut checked = 0;
        for i in 0..s.mesh.vertex_count() {
            let p = s.mesh.vertices()[i];
            if p.z.abs() > 1.4 {
                continue; // skip pole fans, where the grid is irregular
            }
            if let (Some(a2), Some(h)) = (f.a2[i], f.h[i]) {
                assert_relative_eq!(a2, 0.5, max_relative = 0.05);
                assert_relative_eq!(h.abs(), 0.5, max_relative = 0.05);
                checked += 1;
            }
        }
        assert!(checked > 100);
        // The minimality residual correctly flags the sphere as non-minimal.
        let res = mean_curvature_residual(&s).unwrap();
        assert_relative_eq!(res, 0.5, max_relative = 0.1);
    }

    #[test]
    fn helicoid_residual_contracts_under_refinement() {
        let coarse = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-1.0, 1.0), (10, 10))).unwrap();
        let fine = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-1.0, 1.0), (20, 20))).unwrap();
        let r0 = mean_curvature_residual(&coarse).unwrap();
        let r1 = mean_curvature_residual(&fine).unwrap();
        assert!(r1 < 0.6 * r0, "r0={r0}, r1={r1}");
    }

    #[test]
    fn insufficient_neighborhood_is_reported() {
        // A 2x2 grid: the single interior vertex has a full 2-ring, but a
        // one-quad fan around it... shrink further: a 4-vertex fan where the
        // interior vertex has only 3 distinct 2-ring neighbors.
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(-0.5, 0.9, 0.0),
            Point3::new(-0.5, -0.9, 0.0),
        ];
        let f = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]];
        let mesh = build_mesh(v, vec![ParamPoint::none(); 4], f).unwrap();
        let s = MeshedSurface::new(mesh, SurfaceKind::Imported);
        let err = estimate_curvature_with(&s, CurvatureMethod::QuadricFit).unwrap_err();
        assert!(matches!(err, Error::InsufficientNeighborhood { vertex: 0, .. }), "{err}");
    }

    #[test]
    fn blow_up_at_the_axis_accepts_and_rejects_per_the_definition() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.5, (-1.2, 1.2), (20, 20))).unwrap();
        let center = h.vertex_nearest_origin();
        assert_eq!(h.axis_distance(center), 0.0);

        // s = C/|A|(0) = 1/sqrt(2): sup = 2, bound = 8, 4|A|^2(0) = 8.
        let s = blow_up_scale(&h, center, 1.0).unwrap();
        assert_relative_eq!(s, 1.0 / 2.0f64.sqrt(), max_relative = 1e-12);
        let chk = check_blow_up_pair(&h, center, s, 1.0, BLOW_UP_TOL).unwrap();
        match chk {
            BlowUpCheck::Accepted(p) => {
                assert_relative_eq!(p.sup_check, 2.0, max_relative = 1e-9);
                assert_relative_eq!(p.bound, 8.0, max_relative = 1e-12);
                assert_relative_eq!(4.0 * p.center_value, 8.0, max_relative = 1e-12);
            }
            BlowUpCheck::Rejected(v) => panic!("expected acceptance: {}", v.reason),
        }

        // Inflating the scale by 10 breaks the equality clause
        // (4C^2/s^2 = 0.08 while 4|A|^2(0) = 8).
        let chk = check_blow_up_pair(&h, center, 10.0 * s, 1.0, BLOW_UP_TOL).unwrap();
        match chk {
            BlowUpCheck::Rejected(v) => {
                assert!(!v.equality_ok, "{}", v.reason);
                assert_relative_eq!(v.bound, 0.08, max_relative = 1e-12);
            }
            BlowUpCheck::Accepted(_) => panic!("inflated scale must be rejected"),
        }
    }

    #[test]
    fn plane_has_no_blow_up_pair() {
        let disk = make_plane_disk(1.0, 8).unwrap();
        let c = disk.vertex_nearest_origin();
        assert!(matches!(
            blow_up_scale(&disk, c, 1.0),
            Err(Error::ZeroCurvatureAtCenter { .. })
        ));
        let chk = check_blow_up_pair(&disk, c, 0.5, 1.0, BLOW_UP_TOL).unwrap();
        assert!(!chk.is_accepted());
    }

    #[test]
    fn blow_up_scale_examples() {
        // |A|^2(0) = 2/c^2; c = 2, C = 1 gives s = c/sqrt(2) = sqrt(2).
        let h = make_helicoid(&HelicoidSpec::new(2.0, 2.0, (-1.0, 1.0), (16, 16))).unwrap();
        let c = h.vertex_nearest_origin();
        let s = blow_up_scale(&h, c, 1.0).unwrap();
        assert_relative_eq!(s, 2.0f64.sqrt(), max_relative = 1e-12);
        // Theorem-2 normalization: |A|^2(0) = 2 a^-4 gives s = C a^2/sqrt(2),
        // realized by the pitch c = a^2 helicoid.
        let a: f64 = 0.6;
        let h = make_helicoid(&HelicoidSpec::new(a * a, 1.0, (-1.0, 1.0), (16, 16))).unwrap();
        let cdx = h.vertex_nearest_origin();
        for constant in [1.0, 2.0] {
            let s = blow_up_scale(&h, cdx, constant).unwrap();
            assert_relative_eq!(s, constant * a * a / 2.0f64.sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn scaling_covariance_of_curvature_and_blow_up_scale() {
        let lam = 2.5;
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-1.0, 1.0), (20, 20))).unwrap();
        let hs = h.scaled(lam);
        let f = estimate_curvature_with(&h, CurvatureMethod::QuadricFit).unwrap();
        let fs = estimate_curvature_with(&hs, CurvatureMethod::QuadricFit).unwrap();
        for i in 0..h.mesh.vertex_count() {
            if let (Some(a), Some(b)) = (f.a2[i], fs.a2[i]) {
                if a > 1e-6 {
                    assert_relative_eq!(b, a / (lam * lam), max_relative = 0.01);
                }
            }
        }
        let c = h.vertex_nearest_origin();
        let s0 = blow_up_scale(&h, c, 1.0).unwrap();
        let s1 = blow_up_scale(&hs, c, 1.0).unwrap();
        assert_relative_eq!(s1, lam * s0, max_relative = 0.01);
    }

    #[test]
    fn helicoid_a2_strictly_decreases_in_axis_distance() {
        let h = make_helicoid(&HelicoidSpec::new(0.7, 2.0, (-1.0, 1.0), (40, 16))).unwrap();
        let mut us: Vec<f64> = h.mesh.params().iter().map(|q| q.u.abs()).collect();
        us.sort_by(|a, b| a.partial_cmp(b).unwrap());
        us.dedup();
        for w in us.windows(2) {
            let a0 = h.kind.analytic_a2(w[0]).unwrap();
            let a1 = h.kind.analytic_a2(w[1]).unwrap();
            assert!(a1 < a0, "|A|^2 must strictly decrease in |u|");
        }
    }
}
