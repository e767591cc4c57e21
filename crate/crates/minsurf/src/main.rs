use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use minsurf::curvature::{
    blow_up_scale, check_blow_up_pair, estimate_curvature, estimate_curvature_with,
    CurvatureMethod, BLOW_UP_TOL,
};
use minsurf::density::{extrinsic_density, intrinsic_density, DensityKind};
use minsurf::experiment::{lemma_radius_search, run_density_gap, validate_family_properties};
use minsurf::generators::{extract_annular_multigraph, make_helicoid, make_plane_disk, HelicoidSpec};
use minsurf::io::{read_surface, write_mesh};
use minsurf::lipschitz::{check_density_transport, LipschitzCorrespondence};
use minsurf::mesh::Point3;
use minsurf::weierstrass::{evaluate_expressions, preset_ez, WeierstrassSource};

/// Mesh-level minimal-surface toolkit: generators, curvature, blow-up pairs,
/// density ratios, bi-Lipschitz checks, and obstruction experiments.
#[derive(Parser)]
#[command(name = "minsurf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a surface and write it as .hdmesh
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Per-vertex curvature as CSV (vertex,u,v,A2,H)
    Curvature {
        file: PathBuf,
        #[arg(long, default_value = "auto")]
        method: String,
        /// Output format: csv or json (stdout)
        #[arg(long, default_value = "csv")]
        out: String,
    },
    /// Verify a blow-up pair and emit the JSON report
    Blowup {
        file: PathBuf,
        #[arg(long)]
        center_vertex: usize,
        #[arg(long)]
        constant: f64,
        /// Scale s; defaults to C/|A|(center)
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Density ratio at a vertex, or a profile over axis distances
    Density {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long)]
        scale: f64,
        #[arg(long, default_value = "intrinsic")]
        kind: String,
        #[arg(long)]
        json: bool,
        /// "axis-distance" emits CSV axis_distance,theta over a vertex sweep
        #[arg(long)]
        profile: Option<String>,
    },
    /// Bi-Lipschitz acceptance and optional density transport check
    LipschitzCheck {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// CSV lines vertex_index,x,y,z overriding the target positions
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        alpha: f64,
        /// "p,s": also check the transport inequalities at vertex p, scale s
        #[arg(long)]
        transport: Option<String>,
    },
    /// Obstruction pipelines
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum GenerateCmd {
    Helicoid {
        #[arg(long)]
        pitch: f64,
        #[arg(long)]
        rho_max: f64,
        /// Total turns: v spans [-pi*turns, pi*turns]
        #[arg(long)]
        turns: f64,
        /// Grid cells "nu,nv"
        #[arg(long)]
        res: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    Plane {
        #[arg(long)]
        radius: f64,
        /// Ring count
        #[arg(long)]
        res: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Annular multigraph band of a helicoid parent
    Annulus {
        /// Parent helicoid .hdmesh
        #[arg(long)]
        parent: PathBuf,
        #[arg(long)]
        rho_min: f64,
        #[arg(long)]
        rho_max: f64,
        #[arg(long)]
        turns: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    Weierstrass {
        /// Built-in data: "ez" (g = e^z, dh = dz)
        #[arg(long)]
        preset: Option<String>,
        /// JSON spec {"g","dh","domain","basepoint","res"}
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Grid cells "n,m" for presets
        #[arg(long, default_value = "64,64")]
        res: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Emit an obstruction certificate for a surface
    DensityGap {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate theta_{R s}(axis) and find the first R clearing D
    LemmaSearch {
        #[arg(long)]
        pitch: f64,
        #[arg(long = "C")]
        constant: f64,
        #[arg(long = "D")]
        target: f64,
        /// "lo:hi:n" inclusive grid
        #[arg(long)]
        r_grid: String,
    },
    /// Check the structural family predicates from a JSON manifest
    ValidateFamily {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Args, serde::Deserialize)]
struct FamilyManifest {
    surfaces: Vec<PathBuf>,
    a_values: Vec<f64>,
    #[serde(rename = "K_probe")]
    k_probe: f64,
    delta_grid: Vec<f64>,
    #[serde(default = "default_family_tol")]
    tolerance: f64,
}

fn default_family_tol() -> f64 {
    0.05
}

fn parse_pair(text: &str) -> anyhow::Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        bail!("expected 'a,b', got '{text}'");
    }
    Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate(cmd) => generate(cmd),
        Command::Curvature { file, method, out } => curvature(&file, &method, &out),
        Command::Blowup {
            file,
            center_vertex,
            constant,
            scale,
        } => blowup(&file, center_vertex, constant, scale),
        Command::Density {
            file,
            vertex,
            scale,
            kind,
            json,
            profile,
        } => density(&file, vertex, scale, &kind, json, profile.as_deref()),
        Command::LipschitzCheck {
            source,
            target,
            map,
            alpha,
            transport,
        } => lipschitz_check(&source, &target, map.as_deref(), alpha, transport.as_deref()),
        Command::Experiment(cmd) => experiment(cmd),
    }
}

fn generate(cmd: GenerateCmd) -> anyhow::Result<()> {
    match cmd {
        GenerateCmd::Helicoid {
            pitch,
            rho_max,
            turns,
            res,
            output,
        } => {
            let (nu, nv) = parse_pair(&res)?;
            let half = std::f64::consts::PI * turns;
            let spec = HelicoidSpec::new(pitch, rho_max, (-half, half), (nu, nv));
            let surface = make_helicoid(&spec)?;
            write_mesh(&output, &surface)?;
            eprintln!(
                "helicoid pitch {pitch}: {} vertices, {} faces, h_max {:.6}",
                surface.mesh.vertex_count(),
                surface.mesh.face_count(),
                surface.h_max
            );
        }
        GenerateCmd::Plane { radius, res, output } => {
            let surface = make_plane_disk(radius, res)?;
            write_mesh(&output, &surface)?;
            eprintln!(
                "plane disk radius {radius}: {} vertices, h_max {:.6}",
                surface.mesh.vertex_count(),
                surface.h_max
            );
        }
        GenerateCmd::Annulus {
            parent,
            rho_min,
            rho_max,
            turns,
            output,
        } => {
            let parent = read_surface(&parent)?;
            let band = extract_annular_multigraph(&parent, rho_min, rho_max, turns)?;
            write_mesh(&output, &band)?;
            eprintln!(
                "annular band [{rho_min}, {rho_max}] x {turns} turns: {} vertices",
                band.mesh.vertex_count()
            );
        }
        GenerateCmd::Weierstrass {
            preset,
            spec,
            res,
            output,
        } => {
            let source: WeierstrassSource = match (preset.as_deref(), spec) {
                (Some("ez"), None) => {
                    let (n, m) = parse_pair(&res)?;
                    preset_ez((n, m))
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&text)?
                }
                _ => bail!("use exactly one of --preset ez or --spec file.json"),
            };
            let surface = evaluate_expressions(&source)?;
            write_mesh(&output, &surface)?;
            eprintln!(
                "weierstrass surface: {} vertices, h_max {:.6}",
                surface.mesh.vertex_count(),
                surface.h_max
            );
        }
    }
    Ok(())
}

fn curvature(file: &std::path::Path, method: &str, out: &str) -> anyhow::Result<()> {
    let surface = read_surface(file)?;
    let field = match method {
        "auto" => estimate_curvature(&surface)?,
        "analytic" => estimate_curvature_with(&surface, CurvatureMethod::Analytic)?,
        "quadric-fit" => estimate_curvature_with(&surface, CurvatureMethod::QuadricFit)?,
        other => bail!("unknown method '{other}' (auto | analytic | quadric-fit)"),
    };
    match out {
        "csv" => {
            println!("vertex,u,v,A2,H");
            for i in 0..surface.mesh.vertex_count() {
                let q = surface.mesh.params()[i];
                if let (Some(a2), Some(h)) = (field.a2[i], field.h[i]) {
                    println!("{i},{},{},{a2},{h}", q.u, q.v);
                }
            }
        }
        "json" => {
            let rows: Vec<serde_json::Value> = (0..surface.mesh.vertex_count())
                .filter_map(|i| {
                    let q = surface.mesh.params()[i];
                    match (field.a2[i], field.h[i]) {
                        (Some(a2), Some(h)) => Some(serde_json::json!({
                            "vertex": i, "u": q.u, "v": q.v, "A2": a2, "H": h
                        })),
                        _ => None,
                    }
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
        other => bail!("unknown output format '{other}' (csv | json)"),
    }
    Ok(())
}

fn blowup(
    file: &std::path::Path,
    center: usize,
    constant: f64,
    scale: Option<f64>,
) -> anyhow::Result<()> {
    let surface = read_surface(file)?;
    let s = match scale {
        Some(s) => s,
        None => blow_up_scale(&surface, center, constant)?,
    };
    let check = check_blow_up_pair(&surface, center, s, constant, BLOW_UP_TOL)?;
    println!("{}", serde_json::to_string_pretty(&check)?);
    if !check.is_accepted() {
        std::process::exit(2);
    }
    Ok(())
}

fn density(
    file: &std::path::Path,
    vertex: Option<usize>,
    scale: f64,
    kind: &str,
    json: bool,
    profile: Option<&str>,
) -> anyhow::Result<()> {
    let surface = read_surface(file)?;
    if let Some(profile) = profile {
        if profile != "axis-distance" {
            bail!("unknown profile '{profile}'");
        }
        // one probe vertex per axis-distance bin, nearest the middle height
        let n_bins = 24usize;
        let max_rho = (0..surface.mesh.vertex_count())
            .map(|i| surface.axis_distance(i))
            .fold(0.0, f64::max);
        println!("axis_distance,theta");
        for b in 0..n_bins {
            let target = max_rho * (b as f64 + 0.5) / n_bins as f64;
            let probe = (0..surface.mesh.vertex_count())
                .filter(|&i| !surface.mesh.is_boundary_vertex(i))
                .min_by(|&i, &j| {
                    let di = (surface.axis_distance(i) - target).abs()
                        + 0.01 * surface.mesh.vertices()[i].z.abs();
                    let dj = (surface.axis_distance(j) - target).abs()
                        + 0.01 * surface.mesh.vertices()[j].z.abs();
                    di.total_cmp(&dj)
                });
            if let Some(p) = probe {
                let rep = intrinsic_density(&surface, p, scale)?;
                println!("{},{}", surface.axis_distance(p), rep.value);
            }
        }
        return Ok(());
    }
    let vertex = vertex.context("--vertex is required without --profile")?;
    let rep = match kind {
        "intrinsic" => intrinsic_density(&surface, vertex, scale)?,
        "extrinsic" => extrinsic_density(&surface, vertex, scale)?,
        other => bail!("unknown kind '{other}' (intrinsic | extrinsic)"),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        let tag = match rep.kind {
            DensityKind::Intrinsic => "theta",
            DensityKind::Extrinsic => "Theta",
        };
        println!(
            "{tag}_{}({}) = {:.6} (area {:.6}, error budget {:.4}{})",
            rep.scale,
            vertex,
            rep.value,
            rep.area,
            rep.error_estimate,
            if rep.boundary_truncated {
                ", boundary-truncated"
            } else {
                ""
            }
        );
    }
    Ok(())
}

fn lipschitz_check(
    source: &std::path::Path,
    target: &std::path::Path,
    map: Option<&std::path::Path>,
    alpha: f64,
    transport: Option<&str>,
) -> anyhow::Result<()> {
    let src = read_surface(source)?;
    let tgt = read_surface(target)?;
    let corr = match map {
        None => LipschitzCorrespondence::identity_indexed(&src, &tgt)?,
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let mut positions = tgt.mesh.vertices().to_vec();
            for (lno, line) in text.lines().enumerate() {
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let parts: Vec<&str> = t.split(',').collect();
                if parts.len() != 4 {
                    bail!("map line {} needs vertex_index,x,y,z", lno + 1);
                }
                let idx: usize = parts[0].trim().parse()?;
                positions[idx] = Point3::new(
                    parts[1].trim().parse()?,
                    parts[2].trim().parse()?,
                    parts[3].trim().parse()?,
                );
            }
            LipschitzCorrespondence::with_vertex_map(&src, &tgt, positions)?
        }
    };
    let accepted = corr.accepts_alpha(alpha);
    println!(
        "stretch range: ({:.6}, {:.6}); alpha = {alpha}: {}",
        corr.stretch_lo,
        corr.stretch_hi,
        if accepted { "accepted" } else { "rejected" }
    );
    if let Some(spec) = transport {
        if !accepted {
            bail!("transport check requires an accepted correspondence");
        }
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 2 {
            bail!("--transport expects 'p,s'");
        }
        let p: usize = parts[0].trim().parse()?;
        let s: f64 = parts[1].trim().parse()?;
        let rep = check_density_transport(&corr, p, s, alpha)?;
        println!("{}", serde_json::to_string_pretty(&rep)?);
        if !rep.holds() {
            std::process::exit(2);
        }
    }
    Ok(())
}

fn experiment(cmd: ExperimentCmd) -> anyhow::Result<()> {
    match cmd {
        ExperimentCmd::DensityGap {
            surface,
            config,
            out,
        } => {
            let surface = read_surface(&surface)?;
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let config: minsurf::experiment::ExperimentConfig = serde_json::from_str(&text)?;
            let cert = run_density_gap(&surface, &config)?;
            let json = serde_json::to_string_pretty(&cert)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &json)?;
                    eprintln!(
                        "certificate written to {} (valid: {})",
                        path.display(),
                        cert.valid
                    );
                }
                None => println!("{json}"),
            }
        }
        ExperimentCmd::LemmaSearch {
            pitch,
            constant,
            target,
            r_grid,
        } => {
            let parts: Vec<&str> = r_grid.split(':').collect();
            if parts.len() != 3 {
                bail!("--r-grid expects 'lo:hi:n'");
            }
            let lo: f64 = parts[0].parse()?;
            let hi: f64 = parts[1].parse()?;
            let n: usize = parts[2].parse()?;
            if n < 2 || !(hi > lo) {
                bail!("--r-grid needs hi > lo and n >= 2");
            }
            let grid: Vec<f64> = (0..n)
                .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                .collect();
            let out = lemma_radius_search(
                pitch,
                constant,
                target,
                &grid,
                &minsurf::experiment::ResolutionControls::default(),
            )?;
            println!("R,scale,theta,error,truncated");
            for row in &out.table {
                println!(
                    "{},{},{},{},{}",
                    row.radius_factor, row.scale, row.theta, row.error_estimate,
                    row.boundary_truncated
                );
            }
            eprintln!(
                "first R with theta >= {target}: {} (theta = {:.4})",
                out.found_radius_factor(),
                out.table[out.found].theta
            );
        }
        ExperimentCmd::ValidateFamily { manifest } => {
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("reading {}", manifest.display()))?;
            let m: FamilyManifest = serde_json::from_str(&text)?;
            let surfaces: Vec<_> = m
                .surfaces
                .iter()
                .map(|p| read_surface(p))
                .collect::<Result<_, _>>()?;
            let rep =
                validate_family_properties(&surfaces, &m.a_values, m.k_probe, &m.delta_grid, m.tolerance)?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            if !rep.all_ok {
                std::process::exit(2);
            }
        }
    }
    Ok(())
}
