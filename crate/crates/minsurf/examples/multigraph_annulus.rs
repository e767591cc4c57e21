//! Annular multi-valued graph bands of a helicoid: the embedded strip winds
//! `turns` times over its planar annulus; for turns <= 1/2 it is a
//! single-valued graph and the density ratio obeys the graph bound 2.
//!
//! ```bash
//! cargo run --example multigraph_annulus
//! ```

use std::f64::consts::PI;

use minsurf::density::{graph_density_check, GraphEvidence};
use minsurf::generators::{extract_annular_multigraph, make_helicoid, HelicoidSpec};
use minsurf::SurfaceKind;

fn main() -> minsurf::Result<()> {
    let parent = make_helicoid(&HelicoidSpec::new(0.25, 1.5, (-2.0 * PI, 2.0 * PI), (48, 288)))?;

    for turns in [0.5, 1.0, 2.0] {
        let band = extract_annular_multigraph(&parent, 0.6, 1.5, turns)?;
        let (certified, rho_min) = match band.kind {
            SurfaceKind::MultigraphAnnulus { certified_graph, rho_min, .. } => {
                (certified_graph, rho_min)
            }
            _ => unreachable!(),
        };
        println!(
            "band u in [0.6, 1.5] x {turns} turns: {} vertices, chi = {}, {} boundary loop(s), \
             single-valued graph: {certified}",
            band.mesh.vertex_count(),
            band.mesh.euler_characteristic(),
            band.mesh.boundary_loops().len(),
        );
        if certified {
            let probe = (0..band.mesh.vertex_count())
                .find(|&i| {
                    !band.mesh.is_boundary_vertex(i) && band.axis_distance(i) > rho_min + 0.3
                })
                .unwrap();
            let rep = graph_density_check(&band, probe, 0.2, GraphEvidence::FromMetadata)?;
            println!(
                "  graph bound at an interior point: theta = {:.4} <= {:.4}: {}",
                rep.report.value,
                rep.threshold,
                if rep.pass { "pass" } else { "fail" }
            );
        }
    }

    // the band must exclude the axis
    match extract_annular_multigraph(&parent, 0.0, 1.0, 0.5) {
        Err(e) => println!("rho_min = 0 refused: {e}"),
        Ok(_) => println!("unexpectedly accepted an axis band"),
    }
    Ok(())
}
