//! The density ratio as a proxy for axis distance: at a fixed large scale,
//! the intrinsic density on a helicoid is large near the axis and decays
//! toward the flat value 1 (inside the graph bound 2) away from it.
//!
//! ```bash
//! cargo run --example density_profile > profile.csv
//! ```

use minsurf::density::intrinsic_density;
use minsurf::generators::{make_helicoid, HelicoidSpec};

fn main() -> minsurf::Result<()> {
    let h = make_helicoid(&HelicoidSpec::new(1.0, 14.0, (-14.0, 14.0), (112, 500)))?;
    let s = 6.0;
    eprintln!(
        "pitch-1 helicoid, {} vertices; theta at fixed scale s = {s}",
        h.mesh.vertex_count()
    );
    println!("axis_distance,theta");
    for k in 0..=14 {
        let target = 0.5 * k as f64;
        // probe vertex: nearest to the requested axis distance at mid height
        let probe = (0..h.mesh.vertex_count())
            .filter(|&i| !h.mesh.is_boundary_vertex(i))
            .min_by(|&a, &b| {
                let qa = h.mesh.params()[a];
                let qb = h.mesh.params()[b];
                let da = (qa.u.abs() - target).abs() + 0.01 * qa.v.abs();
                let db = (qb.u.abs() - target).abs() + 0.01 * qb.v.abs();
                da.total_cmp(&db)
            })
            .unwrap();
        let rep = intrinsic_density(&h, probe, s)?;
        println!("{},{}", h.axis_distance(probe), rep.value);
    }
    Ok(())
}
