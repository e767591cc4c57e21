//! Flat-disk calibration: the intrinsic and extrinsic density ratios at the
//! center of a plane disk are 1 at every scale below the radius.
//!
//! ```bash
//! cargo run --example plane_calibration
//! ```

use minsurf::density::{extrinsic_density, intrinsic_density};
use minsurf::generators::make_plane_disk;

fn main() -> minsurf::Result<()> {
    let disk = make_plane_disk(1.0, 24)?;
    let center = disk.vertex_nearest_origin();
    println!(
        "unit disk: {} vertices, {} faces, h_max {:.4}",
        disk.mesh.vertex_count(),
        disk.mesh.face_count(),
        disk.h_max
    );
    println!("{:>6} {:>10} {:>10} {:>10}", "s", "theta", "Theta", "budget");
    for k in 1..=8 {
        let s = 0.1 * k as f64;
        let i = intrinsic_density(&disk, center, s)?;
        let e = extrinsic_density(&disk, center, s)?;
        println!(
            "{:>6.2} {:>10.5} {:>10.5} {:>10.4}{}",
            s,
            i.value,
            e.value,
            i.error_estimate,
            if i.boundary_truncated { "  (truncated)" } else { "" }
        );
    }
    Ok(())
}
