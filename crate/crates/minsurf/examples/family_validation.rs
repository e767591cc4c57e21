//! Structural predicates on a surface family: center-curvature growth, the
//! 2 a^-4 normalization with its sup bound, the K delta^-4 curvature
//! envelope, and the multigraph-decomposition certificate — exercised on
//! helicoid rescalings (pitch a^2, so |A|^2(0) = 2 a^-4 exactly). Supply any
//! other family through the same entry point to test it against the same
//! predicates.
//!
//! ```bash
//! cargo run --example family_validation
//! ```

use minsurf::experiment::{helicoid_rescaling, validate_family_properties, ResolutionControls};

fn main() -> minsurf::Result<()> {
    let res = ResolutionControls {
        du_over_pitch: 1.0,
        arc_to_du: 6.0,
    };
    let a_values = [0.85, 0.72, 0.61, 0.52];
    let surfaces: Vec<_> = a_values
        .iter()
        .map(|&a| helicoid_rescaling(a, &res))
        .collect::<minsurf::Result<_>>()?;
    for (s, a) in surfaces.iter().zip(a_values.iter()) {
        println!(
            "a = {a}: pitch {:.4}, {} vertices",
            a * a,
            s.mesh.vertex_count()
        );
    }

    let deltas = [0.3, 0.5, 0.7, 0.9];
    let report = validate_family_properties(&surfaces, &a_values, 80.0, &deltas, 0.05)?;
    println!("\ncenter-curvature growth: {}", verdict(report.growth_ok));
    for item in &report.items {
        println!(
            "a = {:.2}: |A|^2(0) = {:>8.3} (expect {:>8.3}) {} | sup = {:>8.3} <= 4|A|^2(0) {} | multigraph {}",
            item.a_value,
            item.center_a2,
            2.0 * item.a_value.powi(-4),
            verdict(item.normalization_ok),
            item.sup_a2,
            verdict(item.sup_bound_ok),
            verdict(item.multigraph_certified),
        );
    }
    println!(
        "curvature envelope: smallest K with sup outside B_delta <= K delta^-4 is {:.2} \
         (probe {}): {}",
        report.fitted_k,
        report.k_probe,
        verdict(report.decay_ok)
    );
    println!("family: {}", verdict(report.all_ok));
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}
