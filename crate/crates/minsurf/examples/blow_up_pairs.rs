//! Blow-up pairs: at the helicoid axis the scale s = C/|A|(0) = C c/sqrt(2)
//! makes (0, s) a verified pair (sup |A|^2 = 2/c^2 <= 4C^2/s^2 = 8/c^2 with
//! equality in the center clause); the plane has none, and the scale is
//! covariant under rescaling.
//!
//! ```bash
//! cargo run --example blow_up_pairs
//! ```

use minsurf::curvature::{blow_up_scale, check_blow_up_pair, BlowUpCheck, BLOW_UP_TOL};
use minsurf::generators::{make_helicoid, make_plane_disk, HelicoidSpec};

fn main() -> minsurf::Result<()> {
    for pitch in [0.5, 1.0, 2.0] {
        for constant in [1.0, 2.0] {
            let extent = 1.5 * constant * pitch;
            let spec = HelicoidSpec::new(pitch, extent, (-extent / pitch, extent / pitch), (24, 24));
            let h = make_helicoid(&spec)?;
            let center = h.vertex_nearest_origin();
            let s = blow_up_scale(&h, center, constant)?;
            match check_blow_up_pair(&h, center, s, constant, BLOW_UP_TOL)? {
                BlowUpCheck::Accepted(p) => println!(
                    "pitch {pitch:>4}, C {constant}: s = {s:.4}  sup|A|^2 = {:.4} <= 4C^2/s^2 = {:.4} = 4|A|^2(0): accepted",
                    p.sup_check, p.bound
                ),
                BlowUpCheck::Rejected(v) => println!("pitch {pitch}, C {constant}: REJECTED ({})", v.reason),
            }
        }
    }

    let disk = make_plane_disk(1.0, 12)?;
    match blow_up_scale(&disk, disk.vertex_nearest_origin(), 1.0) {
        Err(e) => println!("plane disk: {e}"),
        Ok(s) => println!("plane disk: unexpected scale {s}"),
    }

    let h = make_helicoid(&HelicoidSpec::new(1.0, 1.5, (-1.5, 1.5), (24, 24)))?;
    let lam = 3.0;
    let s0 = blow_up_scale(&h, h.vertex_nearest_origin(), 1.0)?;
    let hs = h.scaled(lam);
    let s1 = blow_up_scale(&hs, hs.vertex_nearest_origin(), 1.0)?;
    println!("scaling covariance: s({lam} * surface) = {s1:.4} = {lam} * {s0:.4}");
    Ok(())
}
