//! `wzb`: command-line front end for the wzborel toolkit.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported on stderr), 2 on
//! usage errors. Machine output (CSV/JSON) goes to stdout or `--output`;
//! diagnostics never pollute stdout.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use config::FileConfig;
use wzborel::borel::borel;
use wzborel::mellin::{h_subtracted, h_taylor};
use wzborel::physical::{
    approx_solve, ode_reference, ratio_table, ratio_table_f64, rg_tower, sd_solve, RatioLaw,
};
use wzborel::rayquad::{solve_ray_opts, zeta_odd_f64, Ray, RayOptions};
use wzborel::scalars::{Rational, ZetaPoly};
use wzborel::series::FormalSeries;
use wzborel::singular::{
    convolution_weight_check, domb_sykes, exponent_negative, exponent_positive, series_weight,
    weight_audit,
};

#[derive(Parser)]
#[command(
    name = "wzb",
    about = "Anomalous dimension of the massless Wess-Zumino model: exact series, Borel-plane singularities, ray quadrature",
    version
)]
struct Cli {
    /// Plain-text key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for `--output`-relative paths (also WZB_OUTPUT_DIR).
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Run independent report sections on threads (deterministic merge).
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Full,
    Approx,
    Ode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesPick {
    Gamma,
    F,
    L,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sign {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

#[derive(Subcommand)]
enum Cmd {
    /// Anomalous-dimension series coefficients.
    Gamma {
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = Model::Full)]
        model: Model,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Taylor data of the one-loop Mellin kernel.
    Mellin {
        #[arg(long)]
        order: Option<usize>,
        /// Subtract the first k infrared pole pairs.
        #[arg(long, default_value_t = 0)]
        subtract: u32,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact singularity exponents at xi = +-k/3.
    Exponents {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        sign: Sign,
    },
    /// Domb-Sykes scan of the nearest Borel singularity.
    Singularities {
        #[arg(long, value_enum, default_value_t = Model::Ode)]
        model: Model,
        #[arg(long)]
        order: Option<usize>,
        /// Fit window "lo,hi" over ratio indices (default upper half).
        #[arg(long)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Consecutive-coefficient ratios against an affine law.
    Ratios {
        #[arg(long, value_enum, default_value_t = Model::Ode)]
        model: Model,
        /// Which series of the approximate system to use.
        #[arg(long, value_enum, default_value_t = SeriesPick::Gamma)]
        series: SeriesPick,
        /// Affine law such as "-(3n+2)", "-(3n+5)" or "3n".
        #[arg(long, allow_hyphen_values = true)]
        law: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Zeta-weight audit of the exact series.
    Weights {
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// March the truncated Borel-plane system along a complex ray.
    Ray {
        /// Endpoint "RE,IM".
        #[arg(long)]
        to: String,
        #[arg(long)]
        steps: Option<usize>,
        /// Guard distance from singular points.
        #[arg(long)]
        delta: Option<f64>,
        /// Initialize this many nodes from the exact series.
        #[arg(long)]
        taylor_boot: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full JSON summary: series, ratios, singularities, weights, ray,
    /// invariant suites.
    Report {
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        ratio_order: Option<usize>,
        #[arg(long)]
        ray_steps: Option<usize>,
        /// Ray endpoint "RE,IM".
        #[arg(long)]
        ray_to: Option<String>,
        /// Seed for the randomized invariant suites.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match &cli.config {
        Some(path) => match FileConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("wzb: {e}");
                return ExitCode::from(2);
            }
        },
        None => FileConfig::default(),
    };
    match run(&cli, &file_cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wzb: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, cfg: &FileConfig) -> Result<(), String> {
    match &cli.cmd {
        Cmd::Gamma {
            order,
            model,
            out,
            output,
        } => {
            let order = effective(*order, cfg, "order", 10)?;
            let text = match model {
                Model::Full => {
                    let g = sd_solve(order).map_err(|e| e.to_string())?;
                    render_zeta_series(&g, *out)
                }
                Model::Approx => {
                    let g = approx_solve(order).map_err(|e| e.to_string())?.gamma;
                    render_rational_series(&g, *out)
                }
                Model::Ode => {
                    let g = ode_reference(order).map_err(|e| e.to_string())?;
                    render_rational_series(&g, *out)
                }
            };
            emit(cli, cfg, output.as_deref(), &text)
        }
        Cmd::Mellin {
            order,
            subtract,
            out,
            output,
        } => {
            let order = effective(*order, cfg, "order", 8)?;
            let h = if *subtract == 0 {
                h_taylor(order).map_err(|e| e.to_string())?
            } else {
                h_subtracted(*subtract, order).map_err(|e| e.to_string())?
            };
            let convention = if *subtract > 0 {
                "subtracted P_l(y)/(l+x) + P_l(x)/(l+y) with P_l truncated at the working order; \
                 residual differences from other regularizations are rational"
            } else {
                "plain Taylor data"
            };
            let text = match out {
                OutFormat::Json => {
                    let mut triples = Vec::new();
                    for d in 0..=h.order() {
                        for m in 0..=d {
                            triples.push(json!({
                                "m": m,
                                "n": d - m,
                                "coeff": h.get(m, d - m),
                            }));
                        }
                    }
                    serde_json::to_string_pretty(&json!({
                        "order": order,
                        "subtract": subtract,
                        "convention": convention,
                        "coefficients": triples,
                    }))
                    .unwrap()
                        + "\n"
                }
                OutFormat::Csv => {
                    let mut s = format!(
                        "# order={order} subtract={subtract} convention={convention}\nm,n,coefficient\n"
                    );
                    for d in 0..=h.order() {
                        for m in 0..=d {
                            s.push_str(&format!(
                                "{},{},{}\n",
                                m,
                                d - m,
                                csv_quote(&h.get(m, d - m).to_string())
                            ));
                        }
                    }
                    s
                }
            };
            emit(cli, cfg, output.as_deref(), &text)
        }
        Cmd::Exponents { k, sign } => {
            if *k == 0 {
                return Err("k must be >= 1".into());
            }
            let value = match sign {
                Sign::Plus => exponent_positive(*k),
                Sign::Minus => exponent_negative(*k),
            };
            println!("{value}");
            Ok(())
        }
        Cmd::Singularities {
            model,
            order,
            window,
            out,
            output,
        } => {
            let default_order = match model {
                Model::Full => 16,
                _ => 120,
            };
            let order = effective(*order, cfg, "order", default_order)?;
            let report = match model {
                Model::Ode => {
                    let g = ode_reference(order).map_err(|e| e.to_string())?;
                    let b = borel(&g).map_err(|e| e.to_string())?;
                    let series = FormalSeries::from_coeffs(b.coeffs().to_vec());
                    let w = parse_window(window.as_deref(), series.order())?;
                    domb_sykes(&series, w).map_err(|e| e.to_string())?
                }
                Model::Approx => {
                    let g = approx_solve(order).map_err(|e| e.to_string())?.gamma;
                    let b = borel(&g).map_err(|e| e.to_string())?;
                    let series = FormalSeries::from_coeffs(b.coeffs().to_vec());
                    let w = parse_window(window.as_deref(), series.order())?;
                    domb_sykes(&series, w).map_err(|e| e.to_string())?
                }
                Model::Full => {
                    let g = sd_solve(order).map_err(|e| e.to_string())?;
                    let b = borel(&g).map_err(|e| e.to_string())?;
                    let coeffs: Vec<f64> = b
                        .coeffs()
                        .iter()
                        .map(|c| c.eval_with(zeta_odd_f64))
                        .collect();
                    let w = parse_window(window.as_deref(), coeffs.len() - 1)?;
                    wzborel::singular::domb_sykes_f64(&coeffs, w).map_err(|e| e.to_string())?
                }
            };
            let text = match out {
                OutFormat::Json => {
                    serde_json::to_string_pretty(&json!({
                        "order": order,
                        "report": report,
                    }))
                    .unwrap()
                        + "\n"
                }
                OutFormat::Csv => format!(
                    "location_re,location_im,exponent,window_lo,window_hi\n{},{},{},{},{}\n",
                    report.location.re,
                    report.location.im,
                    report.exponent,
                    report.fit_window.0,
                    report.fit_window.1
                ),
            };
            emit(cli, cfg, output.as_deref(), &text)
        }
        Cmd::Ratios {
            model,
            series,
            law,
            order,
            out,
            output,
        } => {
            let order = effective(*order, cfg, "order", 120)?;
            let law = RatioLaw::parse(law).map_err(|e| e.to_string())?;
            let table = match (model, series) {
                (Model::Ode, _) => {
                    let g = ode_reference(order).map_err(|e| e.to_string())?;
                    ratio_table(g.coeffs(), &law).map_err(|e| e.to_string())?
                }
                (Model::Approx, pick) => {
                    let sys = approx_solve(order).map_err(|e| e.to_string())?;
                    let coeffs = match pick {
                        SeriesPick::Gamma => sys.gamma.coeffs(),
                        SeriesPick::F => sys.f.coeffs(),
                        SeriesPick::L => sys.l.coeffs(),
                    };
                    ratio_table(coeffs, &law).map_err(|e| e.to_string())?
                }
                (Model::Full, _) => {
                    let g = sd_solve(order).map_err(|e| e.to_string())?;
                    let coeffs: Vec<f64> = g
                        .coeffs()
                        .iter()
                        .map(|c| c.eval_with(zeta_odd_f64))
                        .collect();
                    ratio_table_f64(&coeffs, &law).map_err(|e| e.to_string())?
                }
            };
            let text = match out {
                OutFormat::Csv => {
                    let mut s = String::from("n,ratio,predicted,rel_deviation\n");
                    for r in &table.rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            r.n, r.ratio, r.predicted, r.rel_deviation
                        ));
                    }
                    s
                }
                OutFormat::Json => {
                    let rows: Vec<_> = table
                        .rows
                        .iter()
                        .map(|r| {
                            json!({"n": r.n, "ratio": r.ratio, "predicted": r.predicted,
                                   "rel_deviation": r.rel_deviation})
                        })
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "order": order,
                        "rows": rows,
                        "gaps": table.gaps,
                    }))
                    .unwrap()
                        + "\n"
                }
            };
            emit(cli, cfg, output.as_deref(), &text)
        }
        Cmd::Weights { order, out, output } => {
            let order = effective(*order, cfg, "order", 10)?;
            let g = sd_solve(order).map_err(|e| e.to_string())?;
            let audit = weight_audit(&g);
            let b = borel(&g).map_err(|e| e.to_string())?;
            let conv = convolution_weight_check(&b, &b);
            let tower = rg_tower(&g, 4.min(order));
            let tower_rows: Vec<_> = tower
                .iter()
                .enumerate()
                .map(|(i, gk)| {
                    let w = borel(gk)
                        .map(|bk| series_weight(bk.coeffs()).to_string())
                        .unwrap_or_else(|e| e.to_string());
                    (i + 1, w)
                })
                .collect();
            let text = match out {
                OutFormat::Json => {
                    let tower_json: Vec<_> = tower_rows
                        .iter()
                        .map(|(n, w)| json!({"n": n, "weight": w, "predicted": 1 - *n as i64}))
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "order": order,
                        "audit": audit,
                        "tower": tower_json,
                        "gamma_convolution_bound": {
                            "holds": conv.holds,
                            "witness": conv.witness,
                            "lhs": conv.lhs.to_string(),
                            "bound": conv.rhs_bound.to_string(),
                        },
                    }))
                    .unwrap()
                        + "\n"
                }
                OutFormat::Csv => {
                    let mut s = String::from("p,weight,generic,exception\n");
                    for r in &audit.rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            r.p, r.weight, r.generic, r.exception
                        ));
                    }
                    s
                }
            };
            emit(cli, cfg, output.as_deref(), &text)
        }
        Cmd::Ray {
            to,
            steps,
            delta,
            taylor_boot,
            out,
            output,
        } => {
            let endpoint = parse_complex(to)?;
            let steps = effective(*steps, cfg, "steps", 2000)?;
            let delta = match delta {
                Some(d) => *d,
                None => cfg
                    .get_parsed::<f64>("delta")?
                    .unwrap_or(wzborel::rayquad::DEFAULT_RAY_GUARD),
            };
            let ray = Ray::with_guard(endpoint, steps, delta).map_err(|e| e.to_string())?;
            let sol = solve_ray_opts(
                &ray,
                &RayOptions {
                    taylor_boot: *taylor_boot,
                },
            )
            .map_err(|e| e.to_string())?;
            let text = match out {
                OutFormat::Csv => sol.to_csv(),
                OutFormat::Json => {
                    let samples: Vec<_> = sol
                        .samples
                        .iter()
                        .map(|s| {
                            json!({
                                "xi": {"re": s.xi.re, "im": s.xi.im},
                                "gamma": {"re": s.gamma_hat.re, "im": s.gamma_hat.im},
                                "g": {"re": s.g.re, "im": s.g.im},
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "steps": steps,
                        "delta": delta,
                        "quadratic_term_dropped": sol.scheme.quadratic_term_dropped,
                        "samples": samples,
                    }))
                    .unwrap()
                        + "\n"
                }
            };
            emit(cli, cfg, output.as_deref(), &text)
        }
        Cmd::Report {
            order,
            ratio_order,
            ray_steps,
            ray_to,
            seed,
            output,
        } => {
            let defaults = report::ReportConfig::default();
            let rc = report::ReportConfig {
                order: effective(*order, cfg, "order", defaults.order)?,
                ratio_order: effective(*ratio_order, cfg, "ratio_order", defaults.ratio_order)?,
                ray_steps: effective(*ray_steps, cfg, "ray_steps", defaults.ray_steps)?,
                ray_endpoint: match ray_to {
                    Some(t) => parse_complex(t)?,
                    None => match cfg.get("ray_to") {
                        Some(t) => parse_complex(t)?,
                        None => defaults.ray_endpoint,
                    },
                },
                seed: effective(*seed, cfg, "seed", defaults.seed)?,
                trials: defaults.trials,
            };
            let (doc, ok) = report::build(&rc, cli.parallel);
            let text = serde_json::to_string_pretty(&doc).unwrap() + "\n";
            emit(cli, cfg, output.as_deref(), &text)?;
            if ok {
                Ok(())
            } else {
                Err("one or more report sections failed; see the failures list".into())
            }
        }
    }
}

fn effective<T: std::str::FromStr + Copy>(
    flag: Option<T>,
    cfg: &FileConfig,
    key: &str,
    default: T,
) -> Result<T, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(cfg.get_parsed::<T>(key)?.unwrap_or(default))
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got `{text}`"))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| format!("bad real part `{re}`"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| format!("bad imaginary part `{im}`"))?;
    Ok(Complex64::new(re, im))
}

fn parse_window(text: Option<&str>, order: usize) -> Result<(usize, usize), String> {
    match text {
        None => Ok((order / 2, order)),
        Some(t) => {
            let (lo, hi) = t
                .split_once(',')
                .ok_or_else(|| format!("expected LO,HI, got `{t}`"))?;
            let lo = lo.trim().parse().map_err(|_| "bad window start")?;
            let hi = hi.trim().parse().map_err(|_| "bad window end")?;
            Ok((lo, hi))
        }
    }
}

fn render_zeta_series(g: &FormalSeries<ZetaPoly>, out: OutFormat) -> String {
    match out {
        OutFormat::Csv => {
            let mut s = String::from("n,coefficient\n");
            for (n, c) in g.coeffs().iter().enumerate() {
                s.push_str(&format!("{},{}\n", n, csv_quote(&c.to_string())));
            }
            s
        }
        OutFormat::Json => {
            serde_json::to_string_pretty(&json!({
                "order": g.order(),
                "coefficients": g.coeffs(),
            }))
            .unwrap()
                + "\n"
        }
    }
}

fn render_rational_series(g: &FormalSeries<Rational>, out: OutFormat) -> String {
    match out {
        OutFormat::Csv => {
            let mut s = String::from("n,coefficient\n");
            for (n, c) in g.coeffs().iter().enumerate() {
                s.push_str(&format!("{},{}\n", n, c));
            }
            s
        }
        OutFormat::Json => {
            serde_json::to_string_pretty(&json!({
                "order": g.order(),
                "coefficients": g.coeffs(),
            }))
            .unwrap()
                + "\n"
        }
    }
}

/// Quote a CSV field if it contains separators or quotes.
fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn emit(
    cli: &Cli,
    cfg: &FileConfig,
    output: Option<&std::path::Path>,
    text: &str,
) -> Result<(), String> {
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let base = config::output_dir(cli.output_dir.as_deref(), cfg);
            let full = if path.is_absolute() {
                path.to_path_buf()
            } else {
                base.join(path)
            };
            if let Some(parent) = full.parent() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
            }
            std::fs::write(&full, text).map_err(|e| format!("cannot write {}: {e}", full.display()))
        }
    }
}
