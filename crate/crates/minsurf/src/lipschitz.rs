//! Vertex-level correspondences between meshes sharing combinatorics,
//! bi-Lipschitz constant estimation on edges, and the density-transport
//! inequality check.

use serde::Serialize;

use crate::density::{intrinsic_density, DensityReport};
use crate::error::{Error, Result};
use crate::mesh::{MeshedSurface, ParamPoint, Point3, SurfaceKind};

/// A vertex-level map between two meshes with the same face list. Stretch
/// bounds are the extremal target/source edge-length ratios over shared
/// edges; a map is accepted as alpha-bi-Lipschitz at mesh level iff
/// (stretch_lo, stretch_hi) lies inside (1/alpha, alpha). Edge sampling makes
/// this a necessary condition, not a proof of smooth bi-Lipschitzness.
#[derive(Debug)]
pub struct LipschitzCorrespondence<'a> {
    pub source: &'a MeshedSurface,
    pub target: &'a MeshedSurface,
    pub vertex_map: Vec<Point3>,
    pub stretch_lo: f64,
    pub stretch_hi: f64,
}

impl<'a> LipschitzCorrespondence<'a> {
    /// Index-wise correspondence: vertex i of the source maps to vertex i of
    /// the target (vertex_map = target positions).
    pub fn identity_indexed(
        source: &'a MeshedSurface,
        target: &'a MeshedSurface,
    ) -> Result<Self> {
        let map = target.mesh.vertices().to_vec();
        Self::with_vertex_map(source, target, map)
    }

    pub fn with_vertex_map(
        source: &'a MeshedSurface,
        target: &'a MeshedSurface,
        vertex_map: Vec<Point3>,
    ) -> Result<Self> {
        if source.mesh.faces() != target.mesh.faces() {
            return Err(Error::CombinatoricsMismatch {
                detail: format!(
                    "face lists differ ({} vs {} faces or different triples)",
                    source.mesh.face_count(),
                    target.mesh.face_count()
                ),
            });
        }
        if vertex_map.len() != source.mesh.vertex_count() {
            return Err(Error::LengthMismatch {
                context: "vertex_map must cover every source vertex",
                left: vertex_map.len(),
                right: source.mesh.vertex_count(),
            });
        }
        // injectivity on the sampled vertices: exact duplicate positions
        let mut order: Vec<usize> = (0..vertex_map.len()).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (&vertex_map[a], &vertex_map[b]);
            p.x.total_cmp(&q.x)
                .then(p.y.total_cmp(&q.y))
                .then(p.z.total_cmp(&q.z))
        });
        for w in order.windows(2) {
            if vertex_map[w[0]] == vertex_map[w[1]] {
                return Err(Error::NonInjectiveVertexMap {
                    v0: w[0].min(w[1]),
                    v1: w[0].max(w[1]),
                });
            }
        }

        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &(a, b) in source.mesh.undirected_edges().iter() {
            let ls = source.mesh.vertices()[a as usize].dist(&source.mesh.vertices()[b as usize]);
            let lt = vertex_map[a as usize].dist(&vertex_map[b as usize]);
            let r = lt / ls;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Ok(Self {
            source,
            target,
            vertex_map,
            stretch_lo: lo,
            stretch_hi: hi,
        })
    }

    pub fn accepts_alpha(&self, alpha: f64) -> bool {
        alpha > 1.0 && self.stretch_lo > 1.0 / alpha && self.stretch_hi < alpha
    }

    /// Extremal singular values of the per-triangle affine maps. These bound
    /// the true PL Lipschitz constants (edge ratios only sample directions).
    pub fn triangle_singular_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for f in self.source.mesh.faces() {
            let [a, b, c] = *f;
            let sv = self.source.mesh.vertices();
            let e1 = sv[b as usize].sub(&sv[a as usize]);
            let e2 = sv[c as usize].sub(&sv[a as usize]);
            let f1 = self.vertex_map[b as usize].sub(&self.vertex_map[a as usize]);
            let f2 = self.vertex_map[c as usize].sub(&self.vertex_map[a as usize]);
            // generalized eigenvalues of (H, G): sigma^2 solves
            // det(H - lambda G) = 0 with Gram matrices G (source), H (target)
            let (g11, g12, g22) = (e1.dot(&e1), e1.dot(&e2), e2.dot(&e2));
            let (h11, h12, h22) = (f1.dot(&f1), f1.dot(&f2), f2.dot(&f2));
            let det_g = g11 * g22 - g12 * g12;
            let det_h = h11 * h22 - h12 * h12;
            let mid = g11 * h22 + g22 * h11 - 2.0 * g12 * h12;
            let disc = (mid * mid - 4.0 * det_g * det_h).max(0.0).sqrt();
            let l_hi = (mid + disc) / (2.0 * det_g);
            let l_lo = (mid - disc) / (2.0 * det_g);
            hi = hi.max(l_hi.max(0.0).sqrt());
            lo = lo.min(l_lo.max(0.0).sqrt());
        }
        (lo, hi)
    }
}

/// Extremal edge-length ratios of a correspondence.
pub fn estimate_bilipschitz(corr: &LipschitzCorrespondence<'_>) -> (f64, f64) {
    (corr.stretch_lo, corr.stretch_hi)
}

/// One side of the density-transport inequality with its slack and budget.
#[derive(Debug, Clone, Serialize)]
pub struct TransportSide {
    /// rhs - lhs of the inequality as evaluated (>= -budget passes)
    pub slack: f64,
    pub budget: f64,
    pub ok: bool,
}

/// Report for a^-4 theta_{s/a}(p, source) <= theta_s(f p, target)
///                <= a^4 theta_{sa}(p, source).
#[derive(Debug, Clone, Serialize)]
pub struct TransportReport {
    pub alpha: f64,
    pub vertex: usize,
    pub scale: f64,
    pub source_low: DensityReport,
    pub target_mid: DensityReport,
    pub source_high: DensityReport,
    pub lower: TransportSide,
    pub upper: TransportSide,
}

impl TransportReport {
    pub fn holds(&self) -> bool {
        self.lower.ok && self.upper.ok
    }
}

/// Evaluates the density-transport inequalities through a correspondence
/// accepted as alpha-bi-Lipschitz, each side relaxed by the combined density
/// error budgets. All three intrinsic balls must avoid the boundary.
pub fn check_density_transport(
    corr: &LipschitzCorrespondence<'_>,
    vertex: usize,
    scale: f64,
    alpha: f64,
) -> Result<TransportReport> {
    if !corr.accepts_alpha(alpha) {
        return Err(Error::InvalidParameter(format!(
            "correspondence stretches ({}, {}) are not inside (1/{alpha}, {alpha})",
            corr.stretch_lo, corr.stretch_hi
        )));
    }
    let lo = intrinsic_density(corr.source, vertex, scale / alpha)?;
    let mid = intrinsic_density(corr.target, vertex, scale)?;
    let hi = intrinsic_density(corr.source, vertex, scale * alpha)?;
    for rep in [&lo, &mid, &hi] {
        if rep.boundary_truncated {
            return Err(Error::BoundaryTruncatedBall {
                vertex,
                radius: rep.scale,
            });
        }
    }
    let a4 = alpha.powi(4);
    // lower: a^-4 theta_{s/a} <= theta_s(target)
    let lower_budget = lo.error_estimate * lo.value / a4 + mid.error_estimate * mid.value;
    let lower_slack = mid.value - lo.value / a4;
    // upper: theta_s(target) <= a^4 theta_{sa}
    let upper_budget = mid.error_estimate * mid.value + a4 * hi.error_estimate * hi.value;
    let upper_slack = a4 * hi.value - mid.value;
    Ok(TransportReport {
        alpha,
        vertex,
        scale,
        lower: TransportSide {
            slack: lower_slack,
            budget: lower_budget,
            ok: lower_slack >= -lower_budget,
        },
        upper: TransportSide {
            slack: upper_slack,
            budget: upper_budget,
            ok: upper_slack >= -upper_budget,
        },
        source_low: lo,
        target_mid: mid,
        source_high: hi,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MatchedPoint {
    pub vertex: usize,
    pub achieved: f64,
    pub residual: f64,
}

/// Picks a vertex of `boundary_set` whose axis distance is nearest
/// `target`. This is the matching device of the obstruction argument: on a
/// helicoid, points at equal axis distance have equal density ratios, so only
/// the axis distance of the matched point matters.
pub fn helicoid_match_point(
    surface: &MeshedSurface,
    boundary_set: &[usize],
    target: f64,
) -> Result<MatchedPoint> {
    if boundary_set.is_empty() {
        return Err(Error::InvalidParameter(
            "boundary set must be nonempty".into(),
        ));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut best: Option<MatchedPoint> = None;
    for &v in boundary_set {
        let d = surface.axis_distance(v);
        lo = lo.min(d);
        hi = hi.max(d);
        let r = (d - target).abs();
        if best.map_or(true, |b| r < b.residual) {
            best = Some(MatchedPoint {
                vertex: v,
                achieved: d,
                residual: r,
            });
        }
    }
    if target < lo || target > hi {
        return Err(Error::TargetOutOfRange { target, lo, hi });
    }
    Ok(best.unwrap())
}

/// Deterministic smooth planar distortion of a disk: low-frequency
/// sinusoidal displacement of the chart with bounded gradient, seeded by a
/// splitmix64 stream. Used by the transport property battery and examples.
pub fn random_sinusoidal_distortion(
    disk: &MeshedSurface,
    seed: u64,
    amplitude: f64,
) -> Result<MeshedSurface> {
    let mut state = seed;
    let mut next = move || {
        // splitmix64
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64 // in [0, 1)
    };
    let mut coeff = || (2.0 * next() - 1.0) * amplitude;
    let (ax, bx, cx, dx) = (coeff(), coeff(), coeff(), coeff());
    let (ay, by, cy, dy) = (coeff(), coeff(), coeff(), coeff());
    let (px, py) = (next() * 3.0, next() * 3.0);

    let vertices: Vec<Point3> = disk
        .mesh
        .vertices()
        .iter()
        .map(|p| {
            let (u, v) = (p.x, p.y);
            let du = ax * (1.3 * u + px).sin() + bx * (1.7 * v).cos() + cx * u + dx * v;
            let dv = ay * (1.1 * v + py).sin() + by * (1.9 * u).cos() + cy * v + dy * u;
            Point3::new(u + du, v + dv, 0.0)
        })
        .collect();
    let params: Vec<ParamPoint> = disk.mesh.params().to_vec();
    let mesh = crate::mesh::build_mesh(vertices, params, disk.mesh.faces().to_vec())?;
    Ok(MeshedSurface::new(mesh, SurfaceKind::Imported))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_helicoid, make_plane_disk, HelicoidSpec};
    use approx::assert_relative_eq;

    #[test]
    fn identity_and_uniform_scaling_stretches() {
        let disk = make_plane_disk(1.0, 8).unwrap();
        let corr = LipschitzCorrespondence::identity_indexed(&disk, &disk).unwrap();
        assert_eq!(estimate_bilipschitz(&corr), (1.0, 1.0));

        let scaled = disk.scaled(2.5);
        let corr = LipschitzCorrespondence::identity_indexed(&disk, &scaled).unwrap();
        let (lo, hi) = estimate_bilipschitz(&corr);
        assert_relative_eq!(lo, 2.5, max_relative = 1e-12);
        assert_relative_eq!(hi, 2.5, max_relative = 1e-12);
        assert!(corr.accepts_alpha(2.5 * (1.0 + 1e-6)));
        assert!(!corr.accepts_alpha(2.5));
    }

    #[test]
    fn shear_stretches_match_the_singular_values() {
        // (u, v) -> (u, v + 0.1 u): singular values of [[1, 0], [0.1, 1]]
        // are sqrt of (2.01 +- sqrt(0.0401))/2.
        let disk = make_plane_disk(1.0, 24).unwrap();
        let sheared: Vec<Point3> = disk
            .mesh
            .vertices()
            .iter()
            .map(|p| Point3::new(p.x, p.y + 0.1 * p.x, 0.0))
            .collect();
        let target = MeshedSurface::new(
            crate::mesh::build_mesh(
                sheared.clone(),
                disk.mesh.params().to_vec(),
                disk.mesh.faces().to_vec(),
            )
            .unwrap(),
            SurfaceKind::Imported,
        );
        let corr = LipschitzCorrespondence::with_vertex_map(&disk, &target, sheared).unwrap();
        let s_hi = ((2.01 + 0.0401f64.sqrt()) / 2.0).sqrt();
        let s_lo = ((2.01 - 0.0401f64.sqrt()) / 2.0).sqrt();
        assert_relative_eq!(corr.stretch_hi, s_hi, max_relative = 0.02);
        assert_relative_eq!(corr.stretch_lo, s_lo, max_relative = 0.02);
        // the per-triangle singular range recovers them exactly
        let (lo, hi) = corr.triangle_singular_range();
        assert_relative_eq!(hi, s_hi, max_relative = 1e-9);
        assert_relative_eq!(lo, s_lo, max_relative = 1e-9);
    }

    #[test]
    fn inversion_swaps_and_inverts_the_bounds() {
        let disk = make_plane_disk(1.0, 12).unwrap();
        let warped = random_sinusoidal_distortion(&disk, 7, 0.05).unwrap();
        let fwd = LipschitzCorrespondence::identity_indexed(&disk, &warped).unwrap();
        let bwd = LipschitzCorrespondence::identity_indexed(&warped, &disk).unwrap();
        assert_relative_eq!(bwd.stretch_lo, 1.0 / fwd.stretch_hi, max_relative = 1e-12);
        assert_relative_eq!(bwd.stretch_hi, 1.0 / fwd.stretch_lo, max_relative = 1e-12);
    }

    #[test]
    fn composition_bounds_multiply() {
        let disk = make_plane_disk(1.0, 12).unwrap();
        let mid = random_sinusoidal_distortion(&disk, 11, 0.04).unwrap();
        let far = random_sinusoidal_distortion(&mid, 13, 0.04).unwrap();
        let f = LipschitzCorrespondence::identity_indexed(&disk, &mid).unwrap();
        let g = LipschitzCorrespondence::identity_indexed(&mid, &far).unwrap();
        let fg = LipschitzCorrespondence::identity_indexed(&disk, &far).unwrap();
        let alpha = f.stretch_hi.max(1.0 / f.stretch_lo) * (1.0 + 1e-9);
        let beta = g.stretch_hi.max(1.0 / g.stretch_lo) * (1.0 + 1e-9);
        assert!(fg.stretch_hi < alpha * beta);
        assert!(fg.stretch_lo > 1.0 / (alpha * beta));
    }

    #[test]
    fn non_injective_and_mismatched_maps_are_rejected() {
        let disk = make_plane_disk(1.0, 6).unwrap();
        let mut collapsed = disk.mesh.vertices().to_vec();
        collapsed[3] = collapsed[5];
        let err = LipschitzCorrespondence::with_vertex_map(&disk, &disk, collapsed).unwrap_err();
        assert!(matches!(err, Error::NonInjectiveVertexMap { .. }), "{err}");

        let other = make_plane_disk(1.0, 7).unwrap();
        let err = LipschitzCorrespondence::identity_indexed(&disk, &other).unwrap_err();
        assert!(matches!(err, Error::CombinatoricsMismatch { .. }), "{err}");
    }

    #[test]
    fn identity_transport_is_an_equality_up_to_numerics() {
        let disk = make_plane_disk(1.0, 16).unwrap();
        let corr = LipschitzCorrespondence::identity_indexed(&disk, &disk).unwrap();
        let rep = check_density_transport(&corr, 0, 0.3, 1.0 + 1e-9).unwrap();
        assert!(rep.holds());
        assert!(rep.lower.slack.abs() < 1e-6);
        assert!(rep.upper.slack.abs() < 1e-6);
    }

    #[test]
    fn scaling_transport_matches_the_exact_relation() {
        // target = lambda-scaled disk: theta^target_s = theta^source_{s/l}.
        let lam = 1.2;
        let disk = make_plane_disk(1.0, 16).unwrap();
        let scaled = disk.scaled(lam);
        let corr = LipschitzCorrespondence::identity_indexed(&disk, &scaled).unwrap();
        let alpha = lam * (1.0 + 1e-6);
        let rep = check_density_transport(&corr, 0, 0.3, alpha).unwrap();
        assert!(rep.holds(), "lower {:?} upper {:?}", rep.lower, rep.upper);
    }

    #[test]
    fn transport_battery_small() {
        let disk = make_plane_disk(1.0, 14).unwrap();
        let mut tried = 0;
        let mut seed = 101u64;
        while tried < 12 {
            seed += 1;
            let warped = match random_sinusoidal_distortion(&disk, seed, 0.06) {
                Ok(w) => w,
                Err(_) => continue, // a draw can fold a triangle; skip it
            };
            let corr = LipschitzCorrespondence::identity_indexed(&disk, &warped).unwrap();
            let (slo, shi) = corr.triangle_singular_range();
            let alpha = shi.max(1.0 / slo) * (1.0 + 1e-9);
            if alpha > 1.3 {
                continue;
            }
            // interior point and a scale that keeps all three balls interior
            let vertex = 1 + (seed as usize % 30);
            let rep = check_density_transport(&corr, vertex, 0.15, alpha).unwrap();
            assert!(
                rep.holds(),
                "seed {seed}: lower {:?} upper {:?}",
                rep.lower,
                rep.upper
            );
            tried += 1;
        }
    }

    #[test]
    fn match_point_on_a_helicoid_boundary() {
        let h = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-1.0, 1.0), (20, 16))).unwrap();
        let boundary: Vec<usize> = (0..h.mesh.vertex_count())
            .filter(|&i| h.mesh.is_boundary_vertex(i))
            .collect();
        let m = helicoid_match_point(&h, &boundary, 0.5).unwrap();
        assert!(m.residual <= 0.05 + 1e-12, "residual {}", m.residual);
        assert_relative_eq!(h.axis_distance(m.vertex), m.achieved);
        // an exact grid value has residual zero
        let m = helicoid_match_point(&h, &boundary, 1.0).unwrap();
        assert_eq!(m.residual, 0.0);
        // outside the achieved range
        let band: Vec<usize> = boundary
            .iter()
            .copied()
            .filter(|&i| h.axis_distance(i) >= 0.5)
            .collect();
        let err = helicoid_match_point(&h, &band, 0.2).unwrap_err();
        assert!(matches!(err, Error::TargetOutOfRange { .. }), "{err}");
    }
}
