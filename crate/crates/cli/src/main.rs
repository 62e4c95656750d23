//! Command-line front end for dunklkit.

mod commands;
mod grammar;
mod report;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use commands::{Grid, ModeArg, RouteArg};
use dunklkit::kernel::MultiplicityParam;
use grammar::{canonical, parse_spec, Parsed};
use report::{Format, Meta, Outcome, Verdict};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dunklkit", version, about = "Dunkl kernel, transform and monotonicity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// leave the generation time out of the report
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// absolute quadrature tolerance (overrides DUNKLKIT_QUAD_TOL)
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    legendre_order: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// E_k(x, y) and E_k(−ix, y) on a grid of x
    EvalKernel {
        #[arg(long)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "-2:2:9")]
        grid: Grid,
    },
    /// Dunkl transform of a spec on a grid of ξ
    Transform {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:13")]
        grid: Grid,
    },
    /// Dunkl translate τ_yφ on a grid of x
    Translate {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:13")]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
    },
    /// Dunkl complete monotonicity on (−σ, σ)
    CheckCm {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 4)]
        orders: usize,
        #[arg(long, default_value_t = 41)]
        grid_size: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Dunkl positive definiteness at a set of points
    CheckPd {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        points: Vec<f64>,
    },
    /// CM of φ = ∫E_k(−x, y)dμ(y) together with PD of φ(x²)
    Schoenberg {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, default_value_t = 8)]
        orders: usize,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        points: Vec<f64>,
    },
    /// Sonine integral: closed form against quadrature
    Sonine {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value = "0:3:13")]
        grid: Grid,
    },
    /// Compare the Kummer closed forms with the quadrature oracle
    Theorem6 {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:13")]
        grid: Grid,
        #[arg(long, default_value_t = 3.0)]
        sigma: f64,
        #[arg(long, default_value_t = 8)]
        orders: usize,
    },
    /// Convexity criterion for W_kφ ≥ 0 and CM of φ(√|x|)
    Convexity {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "0:5:21")]
        grid: Grid,
        #[arg(long, default_value_t = 2)]
        orders: usize,
    },
}

fn parse(text: &str) -> anyhow::Result<Parsed> {
    parse_spec(text).map_err(|e| anyhow::anyhow!("in spec '{text}': {e}"))
}

/// k from the flag, else from the spec, else 0; the two must agree when both are given.
fn resolve_k(flag: Option<f64>, parsed: &Parsed) -> anyhow::Result<MultiplicityParam> {
    let k = match (flag, parsed.k()) {
        (Some(a), Some(b)) if a != b => bail!("--k {a} disagrees with k={b} in the spec"),
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => 0.0,
    };
    Ok(MultiplicityParam::new(k)?)
}

fn run(cli: &Cli) -> anyhow::Result<Verdict> {
    let quad = commands::quad_config(cli.abs_tol, cli.rel_tol, cli.legendre_order)?;
    let quad_json = serde_json::to_value(quad)?;
    let (name, config, outcome): (&str, serde_json::Value, Outcome) = match &cli.command {
        Command::EvalKernel { k, y, grid } => {
            let kp = MultiplicityParam::new(*k)?;
            ("eval-kernel", json!({ "k": k, "y": y, "grid": grid }), commands::eval_kernel(kp, *y, grid)?)
        }
        Command::Transform { k, spec, grid } => {
            let p = parse(spec)?;
            let kp = resolve_k(*k, &p)?;
            let config = json!({ "k": kp.value(), "spec": canonical(&p), "grid": grid, "quad": quad_json });
            ("transform", config, commands::transform(kp, &p.into_function(), grid, &quad)?)
        }
        Command::Translate { k, spec, y, grid, route } => {
            let p = parse(spec)?;
            let kp = resolve_k(*k, &p)?;
            let config = json!({ "k": kp.value(), "spec": canonical(&p), "y": y, "grid": grid, "route": route, "quad": quad_json });
            ("translate", config, commands::translate(kp, &p.into_function(), *y, grid, *route, &quad)?)
        }
        Command::CheckCm { k, spec, sigma, orders, grid_size, mode } => {
            let p = parse(spec)?;
            let kp = resolve_k(*k, &p)?;
            let config =
                json!({ "k": kp.value(), "spec": canonical(&p), "sigma": sigma, "orders": orders, "grid_size": grid_size, "mode": mode, "quad": quad_json });
            ("check-cm", config, commands::check_cm(kp, &p.into_function(), *sigma, *orders, *grid_size, *mode, &quad)?)
        }
        Command::CheckPd { k, spec, points } => {
            let p = parse(spec)?;
            let kp = resolve_k(*k, &p)?;
            let config = json!({ "k": kp.value(), "spec": canonical(&p), "points": points, "quad": quad_json });
            ("check-pd", config, commands::check_pd(kp, &p.into_function(), points, &quad)?)
        }
        Command::Schoenberg { k, spec, sigma, orders, points } => {
            let p = parse(spec)?;
            let Parsed::Measure(mu) = &p else { bail!("schoenberg needs a measure spec, got '{spec}'") };
            let kp = MultiplicityParam::new(*k)?;
            let config = json!({ "k": k, "spec": canonical(&p), "sigma": sigma, "orders": orders, "points": points, "quad": quad_json });
            ("schoenberg", config, commands::schoenberg(kp, mu, *sigma, *orders, points, &quad)?)
        }
        Command::Sonine { k, p, grid } => ("sonine", json!({ "k": k, "p": p, "grid": grid, "quad": quad_json }), commands::sonine(*k, *p, grid, &quad)?),
        Command::Theorem6 { k, p, grid, sigma, orders } => {
            let config = json!({ "k": k, "p": p, "grid": grid, "sigma": sigma, "orders": orders, "quad": quad_json });
            ("theorem6", config, commands::theorem6(k, p, grid, *sigma, *orders, &quad)?)
        }
        Command::Convexity { k, spec, grid, orders } => {
            let p = parse(spec)?;
            let kp = resolve_k(*k, &p)?;
            let config = json!({ "k": kp.value(), "spec": canonical(&p), "grid": grid, "orders": orders, "quad": quad_json });
            ("convexity", config, commands::convexity(kp, &p.into_function(), grid, *orders, &quad)?)
        }
    };
    let timestamp =
        if cli.no_timestamp { None } else { Some(std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)) };
    let meta = Meta { command: name, config, timestamp };
    let mut buf = Vec::new();
    match cli.format {
        Format::Json => report::write_json(&mut buf, &meta, &outcome)?,
        Format::Csv => report::write_csv(&mut buf, &meta, &outcome)?,
    }
    match &cli.output {
        Some(path) => std::fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&buf).context("writing to stdout")?;
            out.flush().context("writing to stdout")?;
        }
    }
    Ok(outcome.verdict)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Verdict::Fail) => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dunklkit: {e:#}");
            ExitCode::from(1)
        }
    }
}
