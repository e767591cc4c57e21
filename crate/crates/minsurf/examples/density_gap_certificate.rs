//! The full obstruction pipeline on a helicoid rescaling: verify the blow-up
//! pair, check the separation of the probe components, measure the inner
//! density against 4 alpha^8 and the matched boundary point against the
//! graph bound 2, and emit the certificate whose transported chain
//! "2 alpha^4 >= 4 alpha^4" is false.
//!
//! Takes ~10-20 s: the probe component must clear a separation of
//! 4 alpha^2 r s, which forces a mesh of about a million vertices.
//!
//! ```bash
//! cargo run --example density_gap_certificate
//! ```

use minsurf::experiment::{
    lemma_radius_search, run_density_gap, ExperimentConfig, ResolutionControls,
};
use minsurf::generators::{make_helicoid, HelicoidSpec};

fn main() -> minsurf::Result<()> {
    let epsilon = 0.1f64;
    let alpha = 1.0 + epsilon;
    let target = 4.0 * alpha.powi(8);

    eprintln!("step 1: axis-density table for the inner radius factor r ...");
    let grid: Vec<f64> = (4..=17).map(|k| 4.0 * k as f64).collect();
    let lemma = lemma_radius_search(
        1.0,
        1.0,
        target,
        &grid,
        &ResolutionControls {
            du_over_pitch: 1.5,
            arc_to_du: 6.0,
        },
    )?;
    let r = lemma.found_radius_factor() + 4.0;
    eprintln!("  first crossing at R = {}, using r = {r}", lemma.found_radius_factor());

    eprintln!("step 2: building the rescaled surface and running the pipeline ...");
    let pitch = 0.5;
    let s = pitch / 2.0f64.sqrt();
    let sigma_out = alpha * alpha * r * s;
    let probe_target = 2.2 * 4.0 * sigma_out;
    let box_u = 1.02 * probe_target;
    let box_v = box_u / pitch;
    let du = 6.0 * pitch;
    let n_u = ((2.0 * box_u / du).ceil() as usize + 1) & !1usize;
    let rho_p = (2.2 * sigma_out).min(0.47 * probe_target);
    let dv = 0.5 * sigma_out / (rho_p + sigma_out);
    let n_v = ((2.0 * box_v / dv).ceil() as usize + 1) & !1usize;
    let surface = make_helicoid(&HelicoidSpec::new(pitch, box_u, (-box_v, box_v), (n_u, n_v)))?;
    let outer = surface.mesh.vertices().iter().map(|p| p.norm()).fold(0.0, f64::max);
    eprintln!(
        "  surface: {} vertices (box u +-{box_u:.1}, {:.0} turns)",
        surface.mesh.vertex_count(),
        box_v / std::f64::consts::PI / 2.0 * 2.0
    );

    let config = ExperimentConfig {
        epsilon,
        omega: probe_target / outer,
        gamma: 0.0,
        blow_up_constant: 1.0,
        density_target: target,
        inner_radius_factor: r,
        resolution: ResolutionControls::default(),
    };
    let cert = run_density_gap(&surface, &config)?;

    println!("{}", serde_json::to_string_pretty(&cert).expect("serializable"));
    eprintln!(
        "\nvalid: {} | inner {:.4} vs threshold {:.4} | outer {:.4} vs 2 | chain 2a^4 >= 4a^4: {}",
        cert.valid,
        cert.inner.value,
        cert.inner_threshold,
        cert.outer.graph.report.value,
        cert.chain.holds
    );
    Ok(())
}
