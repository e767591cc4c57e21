//! Axis-density radius search: tabulates theta_{R s}(0) on a helicoid with a
//! verified blow-up pair (0, s) and finds the first R clearing a density
//! target — here 4 alpha^8, the inner threshold of the obstruction argument.
//!
//! ```bash
//! cargo run --example lemma_radius_search
//! ```

use minsurf::experiment::{lemma_radius_search, ResolutionControls};

fn main() -> minsurf::Result<()> {
    let alpha: f64 = 1.1;
    let target = 4.0 * alpha.powi(8);
    let grid: Vec<f64> = (2..=16).map(|k| 4.0 * k as f64).collect();
    let res = ResolutionControls {
        du_over_pitch: 1.25,
        arc_to_du: 5.0,
    };
    let out = lemma_radius_search(1.0, 1.0, target, &grid, &res)?;
    println!(
        "pitch 1, C = 1: blow-up scale s = {:.4}; target D = 4 alpha^8 = {target:.4} (alpha = {alpha})",
        out.blow_up_scale
    );
    println!("{:>5} {:>9} {:>9} {:>8}", "R", "R*s", "theta", "budget");
    for (i, row) in out.table.iter().enumerate() {
        println!(
            "{:>5} {:>9.3} {:>9.4} {:>8.3}{}",
            row.radius_factor,
            row.scale,
            row.theta,
            row.error_estimate,
            if i == out.found { "   <- first crossing" } else { "" }
        );
    }
    Ok(())
}
