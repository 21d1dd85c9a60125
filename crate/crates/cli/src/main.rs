//! Command-line entry point for the p-adic Jaynes-Cummings workbench.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on domain errors
//! (reported as a structured JSON error object on stdout).

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use padicjc::error::PadicError;
use padicjc::jc::{self, MomentumValue};
use padicjc::normal_forms;
use padicjc::oracle::{self, CensusConfig};
use padicjc::prime::Prime;
use padicjc::quadratic;
use padicjc::scalar::{PadicScalar, SeriesTruncation};
use padicjc::spin;
use padicjc::verify;
use padicjc::viz;

#[derive(Parser)]
#[command(
    name = "padicjc",
    about = "Exact p-adic arithmetic and the p-adic Jaynes-Cummings model",
    version
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 3)]
    prime: u64,
    /// Guaranteed digits for truncated results (PADICJC_PRECISION
    /// overrides the default).
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Seed for all randomized verification samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Shard count for censuses.
    #[arg(long, global = true, default_value_t = 1)]
    shards: usize,
}

struct RunConfig {
    prime: Prime,
    trunc: SeriesTruncation,
    output: Option<std::path::PathBuf>,
    seed: u64,
    shards: usize,
}

impl ConfigArgs {
    fn build(&self) -> Result<RunConfig, PadicError> {
        let prime = Prime::new(self.prime)?;
        let precision = match self.precision {
            Some(p) => p,
            None => match std::env::var("PADICJC_PRECISION") {
                Ok(value) => value.parse().map_err(|_| {
                    PadicError::ParseError(format!("bad PADICJC_PRECISION: {value:?}"))
                })?,
                Err(_) => SeriesTruncation::DEFAULT_DIGITS,
            },
        };
        if precision < 8 {
            return Err(PadicError::ParseError(
                "precision must be at least 8".into(),
            ));
        }
        Ok(RunConfig {
            prime,
            trunc: SeriesTruncation::new(precision)?,
            output: self.output.clone(),
            seed: self.seed,
            shards: self.shards.max(1),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F = (J, H) at a phase point.
    Eval {
        /// x,y,z,u,v in scalar syntax (use ';' to separate truncated
        /// scalars, whose syntax contains commas).
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Classify a phase point as regular / rank 0 / rank 1.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Fiber descriptor at (j, h); with --z also the V-membership there.
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Sample this many fiber points over --z.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Image membership of (j, h).
    Image {
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Closed-form rotation-orbit count on x^2 + y^2 = k.
    Orbits {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        /// Also enumerate the census labels at the given window.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 6)]
        mod_exp: u32,
    },
    /// Spin fiber classification over a range of integer heights.
    Spin {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        z_min: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        z_max: i64,
    },
    /// Normal-form frames and identity reports.
    NormalForm {
        /// Rank-1 parameter (exact rational).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Rank-0 pole (+1 or -1).
        #[arg(long, allow_hyphen_values = true)]
        pole: Option<i8>,
    },
    /// Oscillator flow series coefficients.
    Flow {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        y0: String,
        #[arg(long, default_value_t = 12)]
        degree: usize,
    },
    /// Figure-data export.
    Viz {
        #[arg(long, value_parser = ["critical-set", "fiber", "circle-sectors"])]
        dataset: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long, default_value_t = 4)]
        mod_exp: u32,
        #[arg(long, default_value_t = 4)]
        grid_radius: i64,
        #[arg(long, default_value_t = 40)]
        count: usize,
    },
    /// Brute-force residue censuses.
    Oracle {
        #[arg(long, value_parser = ["squares", "orbits", "spin", "jc"])]
        task: String,
        #[arg(long, default_value_t = 6)]
        mod_exp: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Run the invariant suite; exits nonzero on any failure.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let config = match cli.config.build() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let exit = match run(&cli.command, &config) {
        Ok(Output::Json(value)) => {
            emit(&config, &value);
            0
        }
        Ok(Output::FileWritten(value)) => {
            // the payload already went to --output; the summary goes to
            // standard output
            print_or_exit(&serde_json::to_string_pretty(&value).expect("serializable"));
            0
        }
        Err((operation, err)) => {
            let value = json!({
                "error": {
                    "operation": operation,
                    "message": err.to_string(),
                }
            });
            emit(&config, &value);
            2
        }
    };
    std::process::exit(exit);
}

fn emit(config: &RunConfig, value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                std::process::exit(1);
            }
        }
        None => print_or_exit(&text),
    }
}

/// Prints to stdout, exiting quietly when the pipe is closed early.
fn print_or_exit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

enum Output {
    Json(Value),
    /// The command wrote its payload to `--output` itself.
    FileWritten(Value),
}

type OpResult = Result<Output, (String, PadicError)>;

fn done(value: Value) -> OpResult {
    Ok(Output::Json(value))
}

fn op<T>(name: &str, r: Result<T, PadicError>) -> Result<T, (String, PadicError)> {
    r.map_err(|e| (name.to_string(), e))
}

fn parse_scalar(config: &RunConfig, op_name: &str, text: &str) -> Result<PadicScalar, (String, PadicError)> {
    op(op_name, PadicScalar::parse(config.prime, text))
}

fn parse_point(config: &RunConfig, op_name: &str, text: &str) -> Result<jc::PhasePoint, (String, PadicError)> {
    let parts: Vec<&str> = if text.contains(';') {
        text.split(';').collect()
    } else {
        text.split(',').collect()
    };
    if parts.len() != 5 {
        return Err((
            op_name.to_string(),
            PadicError::ParseError(format!("a phase point needs 5 coordinates, got {}", parts.len())),
        ));
    }
    let coords: Vec<PadicScalar> = parts
        .iter()
        .map(|part| parse_scalar(config, op_name, part))
        .collect::<Result<_, _>>()?;
    op(
        op_name,
        jc::PhasePoint::new(
            coords[0].clone(),
            coords[1].clone(),
            coords[2].clone(),
            coords[3].clone(),
            coords[4].clone(),
        ),
    )
}

fn momentum(config: &RunConfig, op_name: &str, j: &str, h: &str) -> Result<MomentumValue, (String, PadicError)> {
    Ok(MomentumValue::new(
        parse_scalar(config, op_name, j)?,
        parse_scalar(config, op_name, h)?,
    ))
}

fn point_json(q: &jc::PhasePoint) -> Value {
    json!(q.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn run(command: &Command, config: &RunConfig) -> OpResult {
    match command {
        Command::Eval { point } => {
            let q = parse_point(config, "eval", point)?;
            let f = op("eval", jc::evaluate_f(&q))?;
            done(json!({"j": f.j.to_string(), "h": f.h.to_string()}))
        }
        Command::Classify { point } => {
            let q = parse_point(config, "classify", point)?;
            let class = op("classify", jc::classify_point(&q))?;
            let rank = op("classify", jc::jacobian_rank(&q))?;
            let value = match class {
                jc::CriticalClassification::Regular => json!({
                    "classification": "regular", "jacobianRank": rank,
                }),
                jc::CriticalClassification::Rank0 { pole } => json!({
                    "classification": "rank0", "pole": pole, "jacobianRank": rank,
                }),
                jc::CriticalClassification::Rank1 { a } => json!({
                    "classification": "rank1", "a": a.to_string(), "jacobianRank": rank,
                }),
            };
            done(value)
        }
        Command::Fiber { j, h, z, samples } => {
            let jh = momentum(config, "fiber", j, h)?;
            let report = op("fiber", jc::fiber_descriptor(&jh, config.trunc))?;
            let mut value = json!({
                "variant": report.variant.as_str(),
                "a": report.a.as_ref().map(|a| a.to_string()),
                "flags": report.flags,
            });
            if let Some(z_text) = z {
                let z = parse_scalar(config, "fiber", z_text)?;
                let membership = op("fiber", jc::v_set_membership(&jh, &z, config.trunc))?;
                let (kind, b) = match &membership {
                    jc::VMembership::None => ("none", None),
                    jc::VMembership::SingleZero => ("single-zero", Some("0".to_string())),
                    jc::VMembership::Pair { b } => ("pair", Some(b.to_string())),
                };
                value["zSlice"] = json!({"z": z.to_string(), "membership": kind, "b": b});
                if *samples > 0 && !matches!(membership, jc::VMembership::None) {
                    let b = match membership {
                        jc::VMembership::Pair { b } => b,
                        _ => PadicScalar::zero(config.prime),
                    };
                    let points =
                        op("fiber", jc::sample_fiber(&jh, &z, &b, *samples, config.trunc))?;
                    value["witnesses"] = json!(points.iter().map(point_json).collect::<Vec<_>>());
                }
            }
            done(value)
        }
        Command::Image { j, h } => {
            let jh = momentum(config, "image", j, h)?;
            let verdict = op("image", jc::jc_image_test(&jh, config.trunc))?;
            let value = match verdict {
                jc::ImageVerdict::InImage { witness, reason } => json!({
                    "verdict": "InImage",
                    "reason": reason,
                    "witness": witness.map(|q| point_json(&q)),
                }),
                jc::ImageVerdict::NotInImage { reason } => json!({
                    "verdict": "NotInImage", "reason": reason,
                }),
                jc::ImageVerdict::Unknown { report } => json!({
                    "verdict": "Unknown", "report": report,
                }),
            };
            done(value)
        }
        Command::Orbits {
            k,
            r,
            enumerate,
            mod_exp,
        } => {
            let k = parse_scalar(config, "orbits", k)?;
            let count = op("orbits", quadratic::orbit_count(*r, &k))?;
            let mut value = match count.count {
                quadratic::OrbitCountValue::Finite(n) => json!({"count": n}),
                quadratic::OrbitCountValue::InfiniteFamily {
                    per_order,
                    includes_origin,
                } => json!({
                    "count": "infinite-family",
                    "perOrder": per_order,
                    "includesOrigin": includes_origin,
                }),
            };
            if *enumerate {
                let cfg = op(
                    "orbits",
                    CensusConfig::new(config.prime, *mod_exp).map(|c| c.with_shards(config.shards)),
                )?;
                let labels = op("orbits", oracle::census_orbit_labels(&cfg, &k, *r))?;
                value["labels"] = json!(labels
                    .iter()
                    .map(|(x, y)| json!({"r": r, "x": x, "y": y}))
                    .collect::<Vec<_>>());
            }
            done(value)
        }
        Command::Spin { z, z_min, z_max } => {
            let heights: Vec<PadicScalar> = match z {
                Some(text) => vec![parse_scalar(config, "spin", text)?],
                None => (*z_min..=*z_max)
                    .map(|n| PadicScalar::from_integer(config.prime, n))
                    .collect(),
            };
            let mut rows = Vec::new();
            for z in heights {
                let class = op("spin", spin::spin_fiber_classify(&z))?;
                let in_image = op("spin", spin::spin_image_contains(&z))?;
                rows.push(json!({
                    "z": z.to_string(),
                    "fiber": class.as_str(),
                    "inImage": in_image,
                }));
            }
            done(json!({"prime": config.prime.value(), "table": rows}))
        }
        Command::NormalForm { a, pole } => match (a, pole) {
            (Some(a_text), None) => {
                let a = parse_scalar(config, "normal-form", a_text)?;
                let a_rat = a.as_rational().cloned().ok_or_else(|| {
                    (
                        "normal-form".to_string(),
                        PadicError::ParseError("the parameter a must be exact".into()),
                    )
                })?;
                let frame = op("normal-form", normal_forms::rank1_frame(&a_rat))?;
                // a rational witness when 1 - a^2 is a nonzero rational
                // square: (u, v) = (s/a, s)
                let report = {
                    let one = PadicScalar::one(config.prime);
                    let s2 = op("normal-form", one.sub(&a.mul(&a).unwrap()))?;
                    match s2.sqrt(config.trunc) {
                        Ok(root) if root.is_exact() => {
                            let u = op("normal-form", root.div(&a))?;
                            Some(op(
                                "normal-form",
                                normal_forms::verify_rank1_identities(
                                    &a_rat,
                                    &u.known_value(),
                                    &root.known_value(),
                                ),
                            )?)
                        }
                        _ => None,
                    }
                };
                done(json!({
                    "a": a.to_string(),
                    "alpha": frame.alpha.to_string(),
                    "beta": frame.beta.to_string(),
                    "gamma": frame.gamma.to_string(),
                    "omega1Coefficient": frame.omega1_coefficient.to_string(),
                    "B": matrix_json(&frame.b),
                    "D": matrix_json(&frame.d),
                    "identities": report.map(|r| checks_json(&r)),
                }))
            }
            (None, Some(pole)) => {
                let frames = normal_forms::rank0_frames();
                let report = op("normal-form", normal_forms::verify_rank0_normal_form(*pole))?;
                let (c, b) = if *pole == -1 {
                    (&frames.elliptic_c, &frames.elliptic_b)
                } else {
                    (&frames.focus_c, &frames.focus_b)
                };
                done(json!({
                    "pole": pole,
                    "C": matrix_json(c),
                    "B": matrix_json(b),
                    "identities": checks_json(&report),
                }))
            }
            _ => Err((
                "normal-form".to_string(),
                PadicError::ParseError("pass exactly one of --a or --pole".into()),
            )),
        },
        Command::Flow { x0, y0, degree } => {
            let x0 = parse_scalar(config, "flow", x0)?;
            let y0 = parse_scalar(config, "flow", y0)?;
            let (x0r, y0r) = match (x0.as_rational(), y0.as_rational()) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                _ => {
                    return Err((
                        "flow".to_string(),
                        PadicError::ParseError("flow initial values must be exact".into()),
                    ))
                }
            };
            let (x, y) = padicjc::flows::oscillator_flow_series(&x0r, &y0r, *degree);
            done(json!({
                "x": x.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "y": y.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }))
        }
        Command::Viz {
            dataset,
            depth,
            j,
            h,
            mod_exp,
            grid_radius,
            count,
        } => {
            let (data, mapping) = match dataset.as_str() {
                "critical-set" => (
                    op("viz", viz::critical_set_dataset(config.prime, *grid_radius))?,
                    viz::FigureMapping::TwoDim,
                ),
                "fiber" => {
                    let jh = momentum(
                        config,
                        "viz",
                        j.as_deref().unwrap_or("22"),
                        h.as_deref().unwrap_or("1"),
                    )?;
                    (
                        op("viz", viz::fiber_dataset(config.prime, &jh, *mod_exp))?,
                        viz::FigureMapping::OneDim,
                    )
                }
                _ => (
                    op("viz", viz::circle_sector_dataset(config.prime, *count))?,
                    viz::FigureMapping::TwoDim,
                ),
            };
            let content = op("viz", viz::render_figure(&data, mapping, *depth))?;
            match &config.output {
                Some(path) => {
                    std::fs::write(path, &content).map_err(|e| {
                        ("viz".to_string(), PadicError::IoFailure(e.to_string()))
                    })?;
                    Ok(Output::FileWritten(
                        json!({"written": path.display().to_string(), "rows": data.len()}),
                    ))
                }
                None => {
                    print!("{content}");
                    Ok(Output::FileWritten(json!({"rows": data.len()})))
                }
            }
        }
        Command::Oracle {
            task,
            mod_exp,
            k,
            r,
            z,
            j,
            h,
        } => {
            let cfg = op(
                "oracle",
                CensusConfig::new(config.prime, *mod_exp).map(|c| c.with_shards(config.shards)),
            )?;
            match task.as_str() {
                "squares" => {
                    let census = op("oracle", oracle::census_squares(&cfg))?;
                    done(json!({
                        "modulus": census.modulus,
                        "unitSquareClasses": census.unit_square_classes.len(),
                        "zeroIncluded": census.zero_included,
                    }))
                }
                "orbits" => {
                    let k = parse_scalar(config, "oracle", k.as_deref().unwrap_or("1"))?;
                    let count = op("oracle", oracle::census_orbits(&cfg, &k, *r))?;
                    done(json!({"k": k.to_string(), "r": r, "count": count}))
                }
                "spin" => {
                    let z = parse_scalar(config, "oracle", z.as_deref().unwrap_or("0"))?;
                    let census = op("oracle", oracle::census_spin_fiber(&cfg, &z))?;
                    done(json!({
                        "z": z.to_string(),
                        "zeroLevel": census.zero_level,
                        "classesPerOrder": census
                            .classes_per_order
                            .iter()
                            .map(|(r, c)| json!({"r": r, "classes": c}))
                            .collect::<Vec<_>>(),
                    }))
                }
                _ => {
                    let jh = momentum(
                        config,
                        "oracle",
                        j.as_deref().unwrap_or("1"),
                        h.as_deref().unwrap_or("0"),
                    )?;
                    let census = op("oracle", oracle::census_jc(&cfg, &jh))?;
                    done(json!({
                        "j": jh.j.to_string(),
                        "h": jh.h.to_string(),
                        "zMarginal": census
                            .z_entries
                            .iter()
                            .map(|e| json!({"z": e.z, "kind": e.kind.label()}))
                            .collect::<Vec<_>>(),
                        "tupleHistogram": census.tuple_histogram.map(|hist| {
                            hist.iter()
                                .map(|(z, n)| json!({"z": z, "count": n}))
                                .collect::<Vec<_>>()
                        }),
                    }))
                }
            }
        }
        Command::Verify { quick } => {
            let results = verify::run_suite(config.seed, *quick);
            let mut all_ok = true;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                eprintln!("{status} {} ({})", r.name, r.details);
                all_ok &= r.passed;
            }
            if !all_ok {
                return Err((
                    "verify".to_string(),
                    PadicError::ConstraintViolated("invariant suite failed".into()),
                ));
            }
            done(json!({
                "checks": results.len(),
                "passed": results.iter().filter(|r| r.passed).count(),
            }))
        }
    }
}

fn matrix_json(m: &padicjc::ratmat::RationalMatrix) -> Value {
    json!((0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn checks_json(report: &normal_forms::IdentityReport) -> Value {
    json!(report
        .checks
        .iter()
        .map(|(name, ok)| json!({"check": name, "passed": ok}))
        .collect::<Vec<_>>())
}
