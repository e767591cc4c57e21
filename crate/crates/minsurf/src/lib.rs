//! Discrete minimal-surface geometry: meshed model surfaces (planes,
//! helicoids, annular multi-valued graph bands, Weierstrass-representation
//! surfaces), curvature and blow-up pair verification, geodesic density
//! ratios, bi-Lipschitz distortion estimation, and the density-gap
//! obstruction pipeline with machine-readable certificates.
//!
//! Start with the runnable examples (`cargo run --example plane_calibration`,
//! etc.); each one exercises a single capability end to end. The `minsurf`
//! binary exposes the same operations as subcommands over `.hdmesh` files.

pub mod analytic;
pub mod curvature;
pub mod density;
pub mod error;
pub mod expr;
pub mod experiment;
pub mod generators;
pub mod geodesic;
pub mod io;
pub mod lipschitz;
pub mod mesh;
pub mod weierstrass;

pub use error::{Error, Result};
pub use mesh::{build_mesh, MeshedSurface, ParamPoint, Point3, SurfaceKind, TriMesh};
