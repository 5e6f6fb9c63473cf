use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isoasym::config::{build_family, read_config, BuiltFamily};
use isoasym::marching::{triple_from_type1, triple_from_type2};
use isoasym::mesh::{tessellate, write_obj};
use isoasym::presets::{get_preset, list_presets, MarchingSpec, PRESET_IDS};
use isoasym::report::{report_to_csv, report_to_json};
use isoasym::surface::SurfaceFamily;
use isoasym::verify::{
    verify_family_report, verify_preset, ToleranceSet, VerificationReport,
};

#[derive(Parser)]
#[command(name = "isoasym", version, about = "Surface families through a common asymptotic curve in Minkowski 3-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in presets
    List,
    /// Show a preset's domains, claims and notes
    Info { target: String },
    /// Run the verification battery on a preset or config file
    Verify {
        /// Preset id or path to a config file
        target: String,
        #[command(flatten)]
        opts: VerifyOpts,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV report here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tessellate and export an OBJ mesh
    Mesh {
        target: String,
        #[arg(long, value_parser = parse_grid, default_value = "50x50")]
        grid: (usize, usize),
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep one series coefficient of a structured spec
    Sweep {
        /// Preset id or config file carrying a type1/type2 spec
        target: String,
        /// Coefficient name: a1,K a2,K or a3,K (K is 1-based)
        #[arg(long)]
        param: String,
        /// Comma-separated values
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long, value_parser = parse_grid, default_value = "50x50")]
        grid: (usize, usize),
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long, value_parser = parse_grid, default_value = "50x50")]
    grid: (usize, usize),
    #[arg(long)]
    tol_exact: Option<f64>,
    #[arg(long)]
    tol_fd: Option<f64>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected NUxNV, e.g. 50x50")?;
    let nu: usize = a.parse().map_err(|_| format!("bad grid dimension '{a}'"))?;
    let nv: usize = b.parse().map_err(|_| format!("bad grid dimension '{b}'"))?;
    if nu < 2 || nv < 2 {
        return Err("grid must be at least 2x2".into());
    }
    Ok((nu, nv))
}

/// A target on the command line: preset id first, config path second.
enum Target {
    Preset(String),
    Config(BuiltFamily),
}

fn resolve_target(target: &str) -> Result<Target, String> {
    if get_preset(target).is_ok() {
        return Ok(Target::Preset(target.to_string()));
    }
    let path = Path::new(target);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg = read_config(&text).map_err(|e| e.to_string())?;
        let built = build_family(&cfg).map_err(|e| e.to_string())?;
        return Ok(Target::Config(built));
    }
    Err(format!(
        "'{target}' is neither a preset id ({}) nor an existing config file",
        PRESET_IDS.join(", ")
    ))
}

fn print_report(r: &VerificationReport) {
    println!("family: {}", r.family_id);
    println!(
        "{:<32} {:>14} {:>10} {:>8}  {}",
        "check", "max residual", "tolerance", "samples", "status"
    );
    for c in &r.checks {
        let status = match (c.passed, c.advisory) {
            (true, false) => "pass",
            (false, false) => "FAIL",
            (true, true) => "pass (advisory)",
            (false, true) => "warn (advisory)",
        };
        println!(
            "{:<32} {:>14.6e} {:>10.1e} {:>8}  {}",
            c.name, c.max_residual, c.tolerance, c.sample_count, status
        );
    }
    for d in &r.discrepancies {
        println!("discrepancy: {d}");
    }
    println!("overall: {}", if r.overall { "pass" } else { "FAIL" });
}

fn cmd_list() {
    println!("{:<12} description", "id");
    for (id, desc) in list_presets() {
        println!("{id:<12} {desc}");
    }
}

fn cmd_info(target: &str) -> Result<(), String> {
    let p = get_preset(target).map_err(|e| e.to_string())?;
    println!("id: {}", p.id);
    println!("description: {}", p.description);
    println!("u domain: [{}, {}]", p.family.u_domain.0, p.family.u_domain.1);
    println!("v domain: [{}, {}]", p.family.v_domain.0, p.family.v_domain.1);
    println!("v0: {}", p.family.v0());
    println!("curve class: {}", p.claims.curve_class);
    if let Some(c) = p.claims.surface_class {
        println!("surface class: {c}");
    }
    println!("claims minimal: {}", p.claims.minimal);
    println!("notes: {}", p.notes);
    Ok(())
}

fn cmd_verify(
    target: &str,
    opts: &VerifyOpts,
    json: Option<&Path>,
    csv: Option<&Path>,
) -> Result<bool, String> {
    let mut tols = ToleranceSet::default();
    if let Some(x) = opts.tol_exact {
        tols.exact = x;
    }
    if let Some(x) = opts.tol_fd {
        tols.fd = x;
    }
    let report = match resolve_target(target)? {
        Target::Preset(id) => {
            let p = get_preset(&id).map_err(|e| e.to_string())?;
            verify_preset(&p, opts.grid, &tols)
        }
        Target::Config(b) => {
            let tols = if opts.tol_exact.is_none() && opts.tol_fd.is_none() {
                b.tolerances
            } else {
                tols
            };
            verify_family_report(&b.id, &b.family, opts.grid, &tols)
        }
    };
    print_report(&report);
    if let Some(path) = json {
        std::fs::write(path, report_to_json(&report)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = csv {
        std::fs::write(path, report_to_csv(&report)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(report.overall)
}

fn cmd_mesh(target: &str, grid: (usize, usize), out: &Path) -> Result<(), String> {
    let family = match resolve_target(target)? {
        Target::Preset(id) => get_preset(&id).map_err(|e| e.to_string())?.family,
        Target::Config(b) => b.family,
    };
    let mesh = tessellate(&family, grid.0, grid.1).map_err(|e| e.to_string())?;
    write_obj(&mesh, out).map_err(|e| e.to_string())?;
    println!(
        "wrote {} ({} vertices, {} faces)",
        out.display(),
        mesh.vertices.len(),
        mesh.faces.len()
    );
    Ok(())
}

/// Parse "a3,1" / "a3_1" / "a31" into (row 3, 1-based index 1).
fn parse_param(p: &str) -> Result<(usize, usize), String> {
    let rest = p
        .strip_prefix('a')
        .ok_or_else(|| format!("unknown coefficient '{p}': expected a1,K a2,K or a3,K"))?;
    let mut digits = rest.chars();
    let row = digits
        .next()
        .and_then(|c| c.to_digit(10))
        .filter(|&r| (1..=3).contains(&r))
        .ok_or_else(|| format!("unknown coefficient row in '{p}'"))? as usize;
    let idx_str: String = digits.filter(|c| c.is_ascii_digit()).collect();
    let idx: usize = if idx_str.is_empty() { 1 } else { idx_str.parse().unwrap() };
    if idx < 1 {
        return Err(format!("coefficient index must be >= 1 in '{p}'"));
    }
    Ok((row, idx))
}

fn spec_of(target: &str) -> Result<(String, SurfaceFamily, MarchingSpec, ToleranceSet), String> {
    match resolve_target(target)? {
        Target::Preset(id) => {
            let p = get_preset(&id).map_err(|e| e.to_string())?;
            let spec = p
                .spec
                .clone()
                .ok_or_else(|| format!("preset '{id}' has no structured spec to sweep"))?;
            Ok((p.id.to_string(), p.family, spec, ToleranceSet::default()))
        }
        Target::Config(b) => {
            let spec = b
                .spec
                .ok_or_else(|| "config has no type1/type2 spec to sweep".to_string())?;
            Ok((b.id, b.family, spec, b.tolerances))
        }
    }
}

fn cmd_sweep(
    target: &str,
    param: &str,
    values: &[f64],
    grid: (usize, usize),
    out: &Path,
) -> Result<bool, String> {
    if values.is_empty() {
        return Err("no sweep values given".into());
    }
    let (row, idx) = parse_param(param)?;
    let (id, base_family, spec, tols) = spec_of(target)?;

    let coeff_len = |s: &MarchingSpec| {
        let b = match s {
            MarchingSpec::Type1(t) => t,
            MarchingSpec::Type2(t) => &t.base,
        };
        match row {
            1 => b.a1.len(),
            2 => b.a2.len(),
            _ => b.a3.len(),
        }
    };
    if idx > coeff_len(&spec) {
        return Err(format!(
            "coefficient {param} not present: row a{row} has {} coefficients",
            coeff_len(&spec)
        ));
    }

    std::fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let mut summary = String::from("value,max_asymptotic_residual,overall\n");
    let mut all_pass = true;
    for &value in values {
        let mut spec = spec.clone();
        {
            let b = match &mut spec {
                MarchingSpec::Type1(t) => t,
                MarchingSpec::Type2(t) => &mut t.base,
            };
            let coeffs = match row {
                1 => &mut b.a1,
                2 => &mut b.a2,
                _ => &mut b.a3,
            };
            coeffs[idx - 1] = value;
        }
        let triple = match &spec {
            MarchingSpec::Type1(t) => triple_from_type1(t),
            MarchingSpec::Type2(t) => triple_from_type2(t),
        };
        let family = SurfaceFamily::new(base_family.curve.clone(), triple, base_family.u_domain);
        let report = verify_family_report(&id, &family, grid, &tols);
        all_pass &= report.overall;

        let tag = format!("{param}_{value}").replace([',', '/'], "_");
        let mesh = tessellate(&family, grid.0, grid.1).map_err(|e| e.to_string())?;
        write_obj(&mesh, &out.join(format!("{tag}.obj"))).map_err(|e| e.to_string())?;
        std::fs::write(out.join(format!("{tag}.json")), report_to_json(&report))
            .map_err(|e| e.to_string())?;

        let max_asym = report
            .check("asymptotic_residual")
            .map(|c| c.max_residual)
            .unwrap_or(f64::INFINITY);
        summary.push_str(&format!("{value},{max_asym},{}\n", report.overall));
        println!(
            "{param} = {value}: max asymptotic residual {max_asym:.6e}, overall {}",
            if report.overall { "pass" } else { "FAIL" }
        );
    }
    let summary_path = out.join("summary.csv");
    std::fs::write(&summary_path, summary).map_err(|e| format!("{}: {e}", summary_path.display()))?;
    println!("wrote {}", summary_path.display());
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, String> = match &cli.command {
        Command::List => {
            cmd_list();
            Ok(true)
        }
        Command::Info { target } => cmd_info(target).map(|_| true),
        Command::Verify { target, opts, json, csv } => {
            cmd_verify(target, opts, json.as_deref(), csv.as_deref())
        }
        Command::Mesh { target, grid, out } => cmd_mesh(target, *grid, out).map(|_| true),
        Command::Sweep { target, param, values, grid, out } => {
            cmd_sweep(target, param, values, *grid, out)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
