//! Curvature of a helicoid: the discrete quadric-fit estimate against the
//! closed form |A|^2(u) = 2c^2/(c^2 + u^2)^2, plus the minimality residual
//! under refinement.
//!
//! ```bash
//! cargo run --example helicoid_curvature
//! ```

use minsurf::curvature::{estimate_curvature_with, mean_curvature_residual, CurvatureMethod};
use minsurf::generators::{make_helicoid, HelicoidSpec};

fn main() -> minsurf::Result<()> {
    let spec = HelicoidSpec::new(1.0, 2.0, (-1.0, 1.0), (40, 20));
    let h = make_helicoid(&spec)?;
    let field = estimate_curvature_with(&h, CurvatureMethod::QuadricFit)?;

    println!("pitch-1 helicoid, h_max {:.4}", h.h_max);
    println!("{:>7} {:>12} {:>12} {:>9}", "|u|", "quadric fit", "closed form", "rel err");
    for k in 0..=8 {
        let u = 0.25 * k as f64;
        // nearest interior vertex on the v = 0 row
        let probe = (0..h.mesh.vertex_count())
            .filter(|&i| !h.mesh.is_boundary_vertex(i) && h.mesh.params()[i].v == 0.0)
            .min_by(|&a, &b| {
                let da = (h.mesh.params()[a].u - u).abs();
                let db = (h.mesh.params()[b].u - u).abs();
                da.total_cmp(&db)
            })
            .unwrap();
        let got = field.a2[probe].unwrap();
        let truth = h.kind.analytic_a2(h.mesh.params()[probe].u.abs()).unwrap();
        println!(
            "{:>7.3} {:>12.6} {:>12.6} {:>8.3}%",
            h.mesh.params()[probe].u.abs(),
            got,
            truth,
            100.0 * (got - truth).abs() / truth
        );
    }

    println!("\nminimality residual max |H| under refinement:");
    for res in [10usize, 20, 40] {
        let hh = make_helicoid(&HelicoidSpec::new(1.0, 1.0, (-1.0, 1.0), (res, res)))?;
        println!("  {:>3} x {:<3} -> {:.6}", res, res, mean_curvature_residual(&hh)?);
    }
    Ok(())
}
