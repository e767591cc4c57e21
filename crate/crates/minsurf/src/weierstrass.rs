//! Weierstrass-representation surfaces from Gauss map and height
//! differential.
//!
//! The surface is X(z) = Re of the path integral from the basepoint of
//! (1/2 (1/g - g), i/2 (1/g + g), 1) dh over a rectangle in the complex
//! plane. Integrals run along grid-aligned staircase paths with a two-point
//! Gauss-Legendre rule per grid step, cached per node via cumulative row and
//! column sums. Both staircase orders (row-then-column and column-then-row)
//! are computed for every node; their maximum disagreement is the built-in
//! path-independence self-check, compared against a Richardson estimate of
//! the quadrature error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::generators::grid_faces;
use crate::mesh::{build_mesh, MeshedSurface, ParamPoint, Point3, SurfaceKind};

/// Expression-backed Weierstrass data (regenerable at finer resolution).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeierstrassSource {
    /// Gauss map g(z) as an expression.
    pub g: String,
    /// Height differential coefficient: dh = dh_expr(z) dz.
    pub dh: String,
    /// Rectangle [re0, re1] x [im0, im1].
    pub domain: [f64; 4],
    pub basepoint: [f64; 2],
    /// Grid cells (n_re, n_im).
    pub res: (usize, usize),
}

impl WeierstrassSource {
    pub fn refined(&self) -> WeierstrassSource {
        WeierstrassSource {
            res: (self.res.0 * 2, self.res.1 * 2),
            ..self.clone()
        }
    }
}

/// Path-independence self-check numbers from one evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PathCheck {
    /// Max over grid nodes of the disagreement between the two staircase
    /// path integrals (coordinate-wise complex modulus).
    pub discrepancy: f64,
    /// Richardson estimate of the composite quadrature error; evaluation
    /// fails once the discrepancy exceeds ten times this.
    pub tolerance: f64,
}

/// The classical g = e^z height-one data on [-1, 1] x [-pi, pi] (a catenoid).
pub fn preset_ez(res: (usize, usize)) -> WeierstrassSource {
    WeierstrassSource {
        g: "exp(z)".into(),
        dh: "1".into(),
        domain: [-1.0, 1.0, -std::f64::consts::PI, std::f64::consts::PI],
        basepoint: [0.0, 0.0],
        res,
    }
}

pub fn evaluate_expressions(src: &WeierstrassSource) -> Result<MeshedSurface> {
    Ok(evaluate_expressions_checked(src)?.0)
}

pub fn evaluate_expressions_checked(src: &WeierstrassSource) -> Result<(MeshedSurface, PathCheck)> {
    let g = Expr::parse(&src.g)?;
    let dh = Expr::parse(&src.dh)?;
    weierstrass_evaluate_checked(
        &|z| g.eval(z),
        &|z| dh.eval(z),
        src.domain,
        src.basepoint,
        src.res,
        Some(src.clone()),
    )
}

pub fn weierstrass_evaluate(
    g: &dyn Fn(Complex64) -> Complex64,
    dh: &dyn Fn(Complex64) -> Complex64,
    domain: [f64; 4],
    basepoint: [f64; 2],
    res: (usize, usize),
    source: Option<WeierstrassSource>,
) -> Result<MeshedSurface> {
    Ok(weierstrass_evaluate_checked(g, dh, domain, basepoint, res, source)?.0)
}

/// Integrand (phi_1, phi_2, phi_3) = (1/2 (1/g - g), i/2 (1/g + g), 1) dh.
fn integrand(
    g: &dyn Fn(Complex64) -> Complex64,
    dh: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
) -> Result<[Complex64; 3]> {
    let gv = g(z);
    let dhv = dh(z);
    let bad = |reason: &str| Error::SingularIntegrand {
        re: z.re,
        im: z.im,
        reason: reason.to_string(),
    };
    if !gv.re.is_finite() || !gv.im.is_finite() {
        return Err(bad("g is not finite"));
    }
    if !dhv.re.is_finite() || !dhv.im.is_finite() {
        return Err(bad("dh is not finite"));
    }
    if gv.norm() < 1e-12 {
        return Err(bad("g vanishes (pole of 1/g not cancelled by dh)"));
    }
    let inv = Complex64::new(1.0, 0.0) / gv;
    let phi = [
        0.5 * (inv - gv) * dhv,
        Complex64::new(0.0, 0.5) * (inv + gv) * dhv,
        dhv,
    ];
    for p in &phi {
        if !p.re.is_finite() || !p.im.is_finite() || p.norm() > 1e12 {
            return Err(bad("integrand overflow"));
        }
    }
    Ok(phi)
}

/// One straight segment [za, zb] with the 2-point Gauss-Legendre rule.
fn segment_integral(
    g: &dyn Fn(Complex64) -> Complex64,
    dh: &dyn Fn(Complex64) -> Complex64,
    za: Complex64,
    zb: Complex64,
) -> Result<[Complex64; 3]> {
    let dz = zb - za;
    let mid = 0.5 * (za + zb);
    let off = dz * (0.5 / 3.0f64.sqrt());
    let p1 = integrand(g, dh, mid - off)?;
    let p2 = integrand(g, dh, mid + off)?;
    Ok([
        0.5 * dz * (p1[0] + p2[0]),
        0.5 * dz * (p1[1] + p2[1]),
        0.5 * dz * (p1[2] + p2[2]),
    ])
}

pub fn weierstrass_evaluate_checked(
    g: &dyn Fn(Complex64) -> Complex64,
    dh: &dyn Fn(Complex64) -> Complex64,
    domain: [f64; 4],
    basepoint: [f64; 2],
    res: (usize, usize),
    source: Option<WeierstrassSource>,
) -> Result<(MeshedSurface, PathCheck)> {
    let [re0, re1, im0, im1] = domain;
    let (n, m) = res;
    if !(re1 > re0) || !(im1 > im0) {
        return Err(Error::InvalidParameter(format!(
            "domain must be a nondegenerate rectangle, got {domain:?}"
        )));
    }
    if n < 2 || m < 2 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least (2, 2), got {res:?}"
        )));
    }
    if basepoint[0] < re0 || basepoint[0] > re1 || basepoint[1] < im0 || basepoint[1] > im1 {
        return Err(Error::InvalidParameter(format!(
            "basepoint {basepoint:?} lies outside the domain {domain:?}"
        )));
    }
    let dre = (re1 - re0) / n as f64;
    let dim = (im1 - im0) / m as f64;
    let node = |i: usize, j: usize| Complex64::new(re0 + dre * i as f64, im0 + dim * j as f64);
    // snap the basepoint to its nearest grid node
    let i0 = (((basepoint[0] - re0) / dre).round() as usize).min(n);
    let j0 = (((basepoint[1] - im0) / dim).round() as usize).min(m);

    // The sampled domain must be free of singularities before any
    // integration: g nonvanishing and finite, dh finite, at every grid node.
    for j in 0..=m {
        for i in 0..=n {
            integrand(g, dh, node(i, j))?;
        }
    }

    let zero3 = [Complex64::new(0.0, 0.0); 3];
    let add3 = |a: &[Complex64; 3], b: &[Complex64; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let sub3 = |a: &[Complex64; 3], b: &[Complex64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let max_norm = |a: &[Complex64; 3]| a.iter().map(|c| c.norm()).fold(0.0, f64::max);

    // cumulative integrals along a line of nodes, signed relative to `from`
    let line_cumulative = |nodes: &dyn Fn(usize) -> Complex64,
                           len: usize,
                           from: usize|
     -> Result<Vec<[Complex64; 3]>> {
        let mut out = vec![zero3; len + 1];
        for k in from..len {
            let seg = segment_integral(g, dh, nodes(k), nodes(k + 1))?;
            out[k + 1] = add3(&out[k], &seg);
        }
        for k in (0..from).rev() {
            let seg = segment_integral(g, dh, nodes(k), nodes(k + 1))?;
            out[k] = sub3(&out[k + 1], &seg);
        }
        Ok(out)
    };

    let base_row = line_cumulative(&|i| node(i, j0), n, i0)?;
    let base_col = line_cumulative(&|j| node(i0, j), m, j0)?;

    // Path A: along the base row to (i, j0), then along column i.
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut path_a = vec![zero3; (n + 1) * (m + 1)];
    for i in 0..=n {
        let col = line_cumulative(&|j| node(i, j), m, j0)?;
        for j in 0..=m {
            path_a[idx(i, j)] = add3(&base_row[i], &col[j]);
        }
    }
    // Path B: along the base column to (i0, j), then along row j; vertices
    // are the symmetrized average of the two paths.
    let mut discrepancy = 0.0f64;
    let mut worst = (0usize, 0usize);
    let mut verts = vec![Point3::new(0.0, 0.0, 0.0); (n + 1) * (m + 1)];
    let mut params = vec![ParamPoint::new(0.0, 0.0, 0); (n + 1) * (m + 1)];
    for j in 0..=m {
        let row = line_cumulative(&|i| node(i, j), n, i0)?;
        for i in 0..=n {
            let b = add3(&base_col[j], &row[i]);
            let a = path_a[idx(i, j)];
            let d = max_norm(&sub3(&a, &b));
            if d > discrepancy {
                discrepancy = d;
                worst = (i, j);
            }
            verts[idx(i, j)] = Point3::new(
                0.5 * (a[0] + b[0]).re,
                0.5 * (a[1] + b[1]).re,
                0.5 * (a[2] + b[2]).re,
            );
            let zz = node(i, j);
            params[idx(i, j)] = ParamPoint::new(zz.re, zz.im, 0);
        }
    }

    // Richardson estimate of the composite quadrature error: a halved-step
    // line integral shares endpoints with the full-step one, so their
    // difference is (1 - 1/16) of the full-step error. The two-path
    // discrepancy mixes errors of different rows and columns, so the
    // estimate takes the worst over the boundary lines and the base lines
    // (boundary-term cancellations on a symmetric base line would otherwise
    // understate it).
    // Partial paths matter: errors can cancel over a full line (periodic
    // integrands) while a half line keeps them, so each probed line is
    // estimated over its halves as well.
    let line_richardson = |along_re: bool, fixed: usize, k0: usize, k1: usize| -> Result<f64> {
        let step = if along_re { dre } else { dim };
        let mut full = zero3;
        let mut half_sum = zero3;
        for k in k0..k1 {
            let za = if along_re {
                node(k, fixed)
            } else {
                node(fixed, k)
            };
            let dir = if along_re {
                Complex64::new(step, 0.0)
            } else {
                Complex64::new(0.0, step)
            };
            full = add3(&full, &segment_integral(g, dh, za, za + dir)?);
            half_sum = add3(&half_sum, &segment_integral(g, dh, za, za + 0.5 * dir)?);
            half_sum = add3(&half_sum, &segment_integral(g, dh, za + 0.5 * dir, za + dir)?);
        }
        Ok(max_norm(&sub3(&full, &half_sum)) * (16.0 / 15.0))
    };
    let probe = |along_re: bool, fixed: usize| -> Result<f64> {
        let len = if along_re { n } else { m };
        Ok(line_richardson(along_re, fixed, 0, len)?
            .max(line_richardson(along_re, fixed, 0, len / 2)?)
            .max(line_richardson(along_re, fixed, len / 2, len)?))
    };
    let row_err = probe(true, 0)?.max(probe(true, m)?).max(probe(true, j0)?);
    let col_err = probe(false, 0)?.max(probe(false, n)?).max(probe(false, i0)?);
    let scale = verts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let tolerance = 4.0 * (row_err + col_err) + 1e-13 * (1.0 + scale);
    let check = PathCheck {
        discrepancy,
        tolerance,
    };
    if discrepancy > 10.0 * tolerance {
        let zz = node(worst.0, worst.1);
        return Err(Error::PathDependenceDetected {
            re: zz.re,
            im: zz.im,
            discrepancy,
            tolerance,
        });
    }

    let mesh = build_mesh(verts, params, grid_faces(n, m))?;
    Ok((
        MeshedSurface::new(mesh, SurfaceKind::Weierstrass { source }),
        check,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::mean_curvature_residual;
    use approx::assert_relative_eq;

    #[test]
    fn ez_preset_is_a_catenoid() {
        // g = e^z, dh = dz integrates to (1 - cosh x cos y, -cosh x sin y, x)
        // up to quadrature error: the distance to the axis through (1, 0)
        // equals cosh of the height. Identified, not assumed.
        let s = evaluate_expressions(&preset_ez((48, 48))).unwrap();
        for p in s.mesh.vertices() {
            let rho = ((p.x - 1.0).powi(2) + p.y * p.y).sqrt();
            assert_relative_eq!(rho, p.z.cosh(), max_relative = 1e-6);
        }
        assert!(s.mesh.is_disk());
    }

    #[test]
    fn catenoid_minimality_residual_contracts_under_refinement() {
        let r0 = mean_curvature_residual(&evaluate_expressions(&preset_ez((16, 16))).unwrap()).unwrap();
        let r1 = mean_curvature_residual(&evaluate_expressions(&preset_ez((32, 32))).unwrap()).unwrap();
        let r2 = mean_curvature_residual(&evaluate_expressions(&preset_ez((64, 64))).unwrap()).unwrap();
        assert!(r1 < 0.6 * r0, "r0={r0} r1={r1}");
        assert!(r2 < 0.6 * r1, "r1={r1} r2={r2}");
    }

    #[test]
    fn path_independence_for_entire_data_is_tiny() {
        let (_, check) = evaluate_expressions_checked(&preset_ez((256, 256))).unwrap();
        assert!(check.discrepancy < 1e-8, "discrepancy {}", check.discrepancy);
    }

    #[test]
    fn constant_gauss_map_yields_a_plane_not_a_rejection() {
        // g == 1 makes phi = (0, i, 1) dz: the image is an isometric copy of
        // the chart in the x1 = 0 plane. Faces are non-degenerate and the
        // build succeeds; nothing collapses.
        let src = WeierstrassSource {
            g: "1".into(),
            dh: "1".into(),
            domain: [-1.0, 1.0, -1.0, 1.0],
            basepoint: [0.0, 0.0],
            res: (8, 8),
        };
        let s = evaluate_expressions(&src).unwrap();
        for p in s.mesh.vertices() {
            assert!(p.x.abs() < 1e-12);
        }
        assert!(mean_curvature_residual(&s).unwrap() < 1e-9);
    }

    #[test]
    fn vanishing_height_differential_degenerates() {
        let src = WeierstrassSource {
            g: "exp(z)".into(),
            dh: "0".into(),
            domain: [-1.0, 1.0, -1.0, 1.0],
            basepoint: [0.0, 0.0],
            res: (4, 4),
        };
        let err = evaluate_expressions(&src).unwrap_err();
        assert!(matches!(err, Error::DegenerateFace { .. }), "{err}");
    }

    #[test]
    fn vanishing_gauss_map_is_singular() {
        let src = WeierstrassSource {
            g: "z".into(),
            dh: "1".into(),
            domain: [-1.0, 1.0, -1.0, 1.0],
            basepoint: [-1.0, -1.0],
            res: (8, 8),
        };
        let err = evaluate_expressions(&src).unwrap_err();
        assert!(matches!(err, Error::SingularIntegrand { .. }), "{err}");
    }

    #[test]
    fn non_holomorphic_data_trips_the_self_check() {
        // g(z) = conj(z) + 4 is smooth, nonvanishing, and not holomorphic:
        // the two staircase orders disagree at area scale.
        let g = |z: Complex64| z.conj() + Complex64::new(4.0, 0.0);
        let dh = |_z: Complex64| Complex64::new(1.0, 0.0);
        let err = weierstrass_evaluate(
            &g,
            &dh,
            [-1.0, 1.0, -1.0, 1.0],
            [0.0, 0.0],
            (16, 16),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::PathDependenceDetected { .. }), "{err}");
    }
}
