//! Command-line front end: binds JSON body specs to the library's
//! section, inversion, and characterization operations and emits CSV or
//! JSON reports with a CI-friendly exit-code contract (0 success, 1 error,
//! 2 verdict contradicts --expect).

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde_json::json;

use tomo::asymptotics::{boundary_exponent, finite_expansion_test, oscillatory_integral};
use tomo::bodies::{Body, Direction};
use tomo::grid::DirectionGrid;
use tomo::harmonics::{harmonic_profile, test_coefficient_polynomiality, HarmonicBasis};
use tomo::moments::{
    detect_ellipsoid, fit_homogeneous, geometric_series_check, moment_table, moments_up_to,
    recover_support_product, tangent_moments, TangentMeasure,
};
use tomo::polyalg::{
    derivative_at_zero, has_real_singularities, hilbert_transform, test_polynomial_integrability,
    test_power_polynomiality, AlgebraicEquation, Poly, Singularities, DEFAULT_FIT_TOL,
};
use tomo::report::DetectionReport;
use tomo::slice::{
    cutoff_volume, fourier_slice, invert_radon_3d_body, section_function, section_profile,
    CutoffSign, QuadratureConfig,
};
use tomo::{Result, TomoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "tomo",
    about = "Section functions of convex bodies and their tomography tests",
    arg_required_else_help = true,
    disable_help_subcommand = true
)]
struct Cli {
    /// Path to a JSON body spec ({"type":"ellipsoid"|"polytope"|"lpball", ...}).
    #[arg(long, global = true)]
    body: Option<PathBuf>,
    /// Direction as comma-separated coordinates, e.g. 0,0,1 (normalized).
    #[arg(long, global = true, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Offset along the direction.
    #[arg(long, global = true, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Grid size (profile points, or directions per circle / polar ring).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Fit tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// RNG seed for Monte-Carlo paths.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Expected verdict (exit 2 if the computed verdict differs).
    #[arg(long, global = true)]
    expect: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Section function A_K(xi, t), or a whole profile with --grid.
    Section,
    /// Cutoff volume V- (or V+ with --sign plus) at offset t.
    Cutoff {
        #[arg(long, value_enum, default_value_t = Sign::Minus)]
        sign: Sign,
    },
    /// Fourier slice of the indicator at frequency lambda along xi.
    FourierSlice {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Back-projection inversion of the section data at a point (n = 3).
    Invert {
        /// Evaluation point as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Polynomiality fit of the section profile along xi.
    Polyfit {
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
    },
    /// Polynomiality of the m-th power of the section function.
    PowerTest {
        #[arg(long)]
        power: u32,
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
    },
    /// Hilbert transform of the section profile at offset t.
    Hilbert,
    /// k-th derivative of the profile at t = 0.
    Derivatives {
        #[arg(long)]
        order: usize,
    },
    /// Real singularities of an algebraic section equation (JSON file of
    /// psi_j(t) coefficient rows, ascending in both w and t).
    Singularities {
        #[arg(long)]
        eq: PathBuf,
    },
    /// Moments M_k of the section function along xi (k = 0..=k-max).
    Moments {
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Range condition: M_k over a direction grid fits a degree-k form.
    RangeCheck {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Geometric-series law of the tangent-measure moment system.
    TangentSystem {
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Support product h(xi) h(-xi) recovered from four moment tables.
    RecoverProduct,
    /// Translated support-product quadratic-form test for ellipsoids.
    DetectEllipsoid,
    /// Boundary tangency exponent along xi.
    BoundaryExponent {
        #[arg(long, default_value_t = 0.05)]
        window: f64,
        #[arg(long, default_value_t = 24)]
        points: usize,
    },
    /// Finite stationary-phase expansion fit of I(lambda).
    StationaryPhase {
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Harmonic coefficient profiles and their polynomiality in t.
    Harmonics {
        #[arg(long = "L", default_value_t = 4)]
        l_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sign {
    Minus,
    Plus,
}

fn main() -> ExitCode {
    // exit 2 is reserved for verdict mismatches, so usage errors map to 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_body(cli: &Cli) -> Result<Body> {
    let path = cli
        .body
        .as_ref()
        .ok_or_else(|| TomoError::Invalid("--body is required for this command".into()))?;
    let text = std::fs::read_to_string(path)?;
    Body::from_json(&text)
}

fn parse_vector(text: &str, what: &str) -> Result<DVector<f64>> {
    let coords: std::result::Result<Vec<f64>, _> =
        text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let coords =
        coords.map_err(|e| TomoError::Invalid(format!("could not parse {what}: {e}")))?;
    Ok(DVector::from_vec(coords))
}

fn parse_xi(cli: &Cli) -> Result<Direction> {
    let text = cli
        .xi
        .as_ref()
        .ok_or_else(|| TomoError::Invalid("--xi is required for this command".into()))?;
    Direction::from_vector(parse_vector(text, "--xi")?)
}

fn need_t(cli: &Cli) -> Result<f64> {
    cli.t
        .ok_or_else(|| TomoError::Invalid("--t is required for this command".into()))
}

fn quad_config(cli: &Cli) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::default();
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg
}

fn direction_grid(cli: &Cli, dim: usize) -> Arc<DirectionGrid> {
    Arc::new(match (dim, cli.grid) {
        (2, Some(m)) => DirectionGrid::circle(m.max(8) / 2 * 2),
        (_, Some(m)) => DirectionGrid::sphere(m.max(4), 2 * m.max(4)),
        (n, None) => DirectionGrid::default_for_dim(n),
    })
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes())?,
        None => println!("{}", text.trim_end_matches('\n')),
    }
    Ok(())
}

/// Exit 2 when --expect names a different verdict than the report carries.
fn check_expectation(cli: &Cli, verdict: &str) -> ExitCode {
    match &cli.expect {
        Some(want) if want != verdict => {
            eprintln!("expected verdict {want}, got {verdict}");
            ExitCode::from(2)
        }
        _ => ExitCode::SUCCESS,
    }
}

fn emit_report(cli: &Cli, report: &DetectionReport) -> Result<ExitCode> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(report)?,
        Format::Csv => {
            let mut s = String::from("label,degree,relative_residual,verdict\n");
            for item in &report.items {
                s.push_str(&format!(
                    "{},{},{:e},{}\n",
                    item.label,
                    item.degree.map_or(String::new(), |d| d.to_string()),
                    item.relative_residual,
                    item.verdict
                ));
            }
            s
        }
    };
    emit(cli, &text)?;
    Ok(check_expectation(cli, &report.verdict.to_string()))
}

fn default_directions(dim: usize, count: usize) -> Vec<Direction> {
    let grid = DirectionGrid::default_for_dim(dim);
    let step = (grid.len() / count).max(1);
    grid.points.iter().step_by(step).take(count).cloned().collect()
}

fn validate_thread_cap() -> Result<()> {
    if let Ok(v) = std::env::var("TOMO_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| TomoError::Invalid(format!("TOMO_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(TomoError::Invalid("TOMO_THREADS must be >= 1".into()));
        }
        // all commands currently run single-threaded, so any cap >= 1 holds
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode> {
    validate_thread_cap()?;
    let cfg = quad_config(cli);
    let tol = cli.tol.unwrap_or(DEFAULT_FIT_TOL);
    match &cli.cmd {
        Cmd::Section => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            if let Some(grid) = cli.grid {
                let profile = section_profile(&body, &xi, grid, &cfg)?;
                let text = match cli.format {
                    Format::Csv => {
                        let head: Vec<String> =
                            (1..=xi.dim()).map(|i| format!("xi_{i}")).collect();
                        let mut s = format!("{},t,A,err\n", head.join(","));
                        for ((t, a), e) in profile
                            .offsets
                            .iter()
                            .zip(&profile.values)
                            .zip(&profile.err)
                        {
                            let coords: Vec<String> =
                                xi.coords().iter().map(|c| format!("{c}")).collect();
                            s.push_str(&format!("{},{t},{a},{e:e}\n", coords.join(",")));
                        }
                        s
                    }
                    Format::Json => serde_json::to_string_pretty(&json!({
                        "xi": xi.coords().as_slice(),
                        "support": profile.support,
                        "offsets": profile.offsets,
                        "values": profile.values,
                        "err": profile.err,
                    }))?,
                };
                emit(cli, &text)?;
            } else {
                let t = need_t(cli)?;
                let (value, _) = section_function(&body, &xi, t, &cfg)?;
                emit(cli, &format!("{value:.10}"))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cutoff { sign } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let t = need_t(cli)?;
            let sign = match sign {
                Sign::Minus => CutoffSign::Minus,
                Sign::Plus => CutoffSign::Plus,
            };
            let v = cutoff_volume(&body, &xi, t, sign, &cfg)?;
            emit(cli, &format!("{v:.10}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::FourierSlice { lambda } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let v = fourier_slice(&body, &xi, *lambda, &cfg)?;
            let text = match cli.format {
                Format::Csv => format!("lambda,re,im\n{lambda},{},{}\n", v.re, v.im),
                Format::Json => {
                    serde_json::to_string_pretty(&json!({"lambda": lambda, "re": v.re, "im": v.im}))?
                }
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Invert { x } => {
            let body = load_body(cli)?;
            let x = parse_vector(x, "--x")?;
            let grid = direction_grid(cli, 3);
            let bp = invert_radon_3d_body(&body, &x, &grid, &cfg)?;
            let text = match cli.format {
                Format::Csv => format!("value,near_boundary\n{},{}\n", bp.value, bp.near_boundary),
                Format::Json => serde_json::to_string_pretty(
                    &json!({"value": bp.value, "near_boundary": bp.near_boundary}),
                )?,
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Polyfit { max_degree } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let report = test_polynomial_integrability(&body, &[xi], *max_degree, tol, &cfg)?;
            emit_report(cli, &report)
        }
        Cmd::PowerTest { power, max_degree } => {
            let body = load_body(cli)?;
            let dirs = match &cli.xi {
                Some(_) => vec![parse_xi(cli)?],
                None => default_directions(body.dim(), 8),
            };
            let report = test_power_polynomiality(&body, *power, &dirs, *max_degree, tol, &cfg)?;
            emit_report(cli, &report)
        }
        Cmd::Hilbert => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let t = need_t(cli)?;
            let profile = section_profile(&body, &xi, cli.grid.unwrap_or(64).max(8), &cfg)?;
            let (value, warn) = hilbert_transform(&profile, t)?;
            if warn {
                eprintln!("warning: offset near the edge of the sampled profile");
            }
            emit(cli, &format!("{value:.10}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Derivatives { order } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let profile = section_profile(&body, &xi, cli.grid.unwrap_or(64).max(8), &cfg)?;
            let v = derivative_at_zero(&profile, *order)?;
            emit(cli, &format!("{v:.10}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Singularities { eq } => {
            let text = std::fs::read_to_string(eq)?;
            let rows: Vec<Vec<f64>> = serde_json::from_str(&text)?;
            let eq = AlgebraicEquation::new(rows.into_iter().map(Poly::new).collect())?;
            let outcome = has_real_singularities(&eq)?;
            let (verdict, roots) = match &outcome {
                Singularities::Free => ("free", Vec::new()),
                Singularities::Singular(r) => ("singular", r.clone()),
                Singularities::DegenerateAtInfinity => ("degenerate-at-infinity", Vec::new()),
            };
            emit(
                cli,
                &serde_json::to_string_pretty(&json!({"verdict": verdict, "roots": roots}))?,
            )?;
            Ok(check_expectation(cli, verdict))
        }
        Cmd::Moments { k_max } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let ms = moments_up_to(&body, &xi, *k_max, &cfg)?;
            let text = match cli.format {
                Format::Csv => {
                    let head: Vec<String> = (1..=xi.dim()).map(|i| format!("xi_{i}")).collect();
                    let coords: Vec<String> =
                        xi.coords().iter().map(|c| format!("{c}")).collect();
                    let mut s = format!("{},k,value\n", head.join(","));
                    for (k, v) in ms.iter().enumerate() {
                        s.push_str(&format!("{},{k},{v}\n", coords.join(",")));
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&json!({
                    "xi": xi.coords().as_slice(),
                    "moments": ms,
                }))?,
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::RangeCheck { k } => {
            let body = load_body(cli)?;
            let grid = direction_grid(cli, body.dim());
            let table = moment_table(&body, *k, &grid, &cfg)?;
            let fit = fit_homogeneous(&table, if cli.tol.is_some() { tol } else { 1e-6 })?;
            let verdict = fit.verdict.to_string();
            emit(
                cli,
                &serde_json::to_string_pretty(&json!({
                    "k": fit.k,
                    "coefficients": fit.coefficients,
                    "relative_residual": fit.relative_residual,
                    "verdict": verdict,
                }))?,
            )?;
            Ok(check_expectation(cli, &verdict))
        }
        Cmd::TangentSystem { k_max } => {
            let body = load_body(cli)?;
            let grid = direction_grid(cli, body.dim());
            let tm = TangentMeasure::from_body(&body, grid)?;
            let tables: Vec<_> = (0..=*k_max).map(|k| tangent_moments(&tm, k)).collect();
            let dev = geometric_series_check(&tables, &tm.h)?;
            emit(
                cli,
                &serde_json::to_string_pretty(&json!({"max_deviation": dev}))?,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::RecoverProduct => {
            let body = load_body(cli)?;
            let grid = direction_grid(cli, body.dim());
            let tm = TangentMeasure::from_body(&body, grid.clone())?;
            let tables: [_; 4] = std::array::from_fn(|k| tangent_moments(&tm, k));
            let rec = recover_support_product(&tables);
            let text = match cli.format {
                Format::Csv => {
                    let head: Vec<String> =
                        (1..=grid.dim).map(|i| format!("xi_{i}")).collect();
                    let mut s = format!("{},product\n", head.join(","));
                    for (xi, v) in grid.points.iter().zip(&rec) {
                        let coords: Vec<String> =
                            xi.coords().iter().map(|c| format!("{c}")).collect();
                        let val = v.map_or(String::new(), |v| format!("{v}"));
                        s.push_str(&format!("{},{val}\n", coords.join(",")));
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&json!({
                    "products": rec,
                }))?,
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::DetectEllipsoid => {
            let body = load_body(cli)?;
            let report = detect_ellipsoid(&body, if cli.tol.is_some() { tol } else { 1e-9 })?;
            emit_report(cli, &report)
        }
        Cmd::BoundaryExponent { window, points } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let alpha = boundary_exponent(&body, &xi, *window, *points, &cfg)?;
            emit(cli, &format!("{alpha:.6}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::StationaryPhase { degree } => {
            let body = load_body(cli)?;
            let xi = parse_xi(cli)?;
            let report = finite_expansion_test(&body, &xi, *degree, &cfg)?;
            let verdict = report.verdict.to_string();
            let text = match cli.format {
                Format::Csv => {
                    // sampled I(lambda) over the fit grid's range
                    let width = report.b_plus - report.b_minus;
                    let mut s = String::from("lambda,re,im\n");
                    for j in 0..64 {
                        let lam = (10.0 / width)
                            * (100.0f64.ln() * j as f64 / 63.0).exp();
                        let v = oscillatory_integral(&body, &xi, lam, &cfg)?;
                        s.push_str(&format!("{lam},{},{}\n", v.re, v.im));
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&json!({
                    "b_plus": report.b_plus,
                    "b_minus": report.b_minus,
                    "order": report.order,
                    "coefficients": report
                        .coefficients
                        .iter()
                        .map(|c| vec![c.re, c.im])
                        .collect::<Vec<_>>(),
                    "relative_residual": report.relative_residual,
                    "verdict": verdict,
                }))?,
            };
            emit(cli, &text)?;
            Ok(check_expectation(cli, &verdict))
        }
        Cmd::Harmonics { l_max } => {
            let body = load_body(cli)?;
            match cli.format {
                Format::Csv => {
                    let grid = direction_grid(cli, body.dim());
                    let basis = HarmonicBasis::new(grid, *l_max)?;
                    let profile = harmonic_profile(&body, &basis, 32, &cfg)?;
                    let mut s = String::from("k,alpha,t,p_value\n");
                    for ((k, alpha), row) in profile.labels.iter().zip(&profile.coefficients) {
                        for (t, v) in profile.offsets.iter().zip(row) {
                            s.push_str(&format!("{k},{alpha},{t},{v}\n"));
                        }
                    }
                    emit(cli, &s)?;
                    Ok(ExitCode::SUCCESS)
                }
                Format::Json => {
                    let report = test_coefficient_polynomiality(&body, *l_max, tol, &cfg)?;
                    emit_report(cli, &report)
                }
            }
        }
    }
}
