//! `euler` — analysis and evaluation of generalized Euler integrals.
//!
//! Every subcommand consumes the same JSON problem spec (variables,
//! factor polynomials, exponents) and writes a JSON result to stdout
//! with the canonicalized spec embedded; a short human summary goes to
//! stderr. Exit codes: 0 success, 2 precondition violation, 3 numeric
//! failure, 4 parse error.

use std::io::Read;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use euler_core::convergence::check_convergence;
use euler_core::critpoints::{all_critical_points, positive_critical_point};
use euler_core::error::Error;
use euler_core::gkz::operator::diffop_to_json;
use euler_core::gkz::{check_nonresonant, gkz_system, specialize, RestVar, TorusRecipe};
use euler_core::integrate::{
    evaluate, evaluate_deterministic, evaluate_idelta, sector_decompose, QuadratureResult,
};
use euler_core::laurent::{moduli_minors, rat_to_f64, symanzik, Graph};
use euler_core::limits::{field_theory_limit, high_energy_limit, limit_sweep};
use euler_core::polytope::newton_polytope;
use euler_core::shiftops::{annihilator_generators, beta_reduction_symbolic, verify_shift};
use euler_core::spec::{IntegralSpec, SpecFile};

#[derive(Parser)]
#[command(name = "euler", about = "Generalized Euler integral toolkit", version)]
struct Cli {
    /// Worker thread cap (default: available cores). Output is
    /// independent of this setting.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polytopes of the spec's factors (V- and H-representations)
    Newton {
        #[arg(long)]
        spec: String,
    },
    /// Convergence decision and Γ-factor skeleton
    Convergence {
        #[arg(long)]
        spec: String,
        /// also print the Γ-factor product to stderr
        #[arg(long)]
        gamma: bool,
    },
    /// Critical points of log L (all complex, or the positive one)
    Critical {
        #[arg(long)]
        spec: String,
        /// only the positive critical point, by concave Newton iteration
        #[arg(long)]
        positive: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Field-theory and high-energy limits
    Limits {
        #[arg(long)]
        spec: String,
        /// comma-separated δ values for an empirical sweep
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte-Carlo (or deterministic) evaluation of the integral
    Integrate {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// evaluate I(δ) instead of I
        #[arg(long)]
        delta: Option<f64>,
        /// dump the sector list
        #[arg(long)]
        emit_sectors: bool,
        /// tensor Gauss–Laguerre backend (n ≤ 2)
        #[arg(long)]
        deterministic: bool,
    },
    /// GKZ system: Cayley matrix, toric binomials, Euler operators
    Gkz {
        #[arg(long)]
        spec: String,
        /// torus-specialization recipe file
        #[arg(long)]
        specialize: Option<String>,
        #[arg(long)]
        degree_bound: Option<usize>,
    },
    /// Shift (difference) operators in (s, ν)
    Shift {
        #[arg(long)]
        spec: String,
        /// verify the annihilators numerically against quadrature
        #[arg(long)]
        verify: bool,
        /// beta-family reduction coefficient c^{a,b}
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        beta_reduce: Option<Vec<i64>>,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Symanzik polynomials of a graph
    Symanzik {
        #[arg(long)]
        graph: String,
    },
    /// Moduli-space factor polynomials for m marked points
    Moduli {
        #[arg(long)]
        m: usize,
    },
    /// δ-sweep as CSV on stdout
    Sweep {
        #[arg(long)]
        spec: String,
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli.command) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.or_else(|| std::env::var("EULER_SEED").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidSpec(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("reading {path}: {e}")))
    }
}

fn load_spec(path: &str) -> Result<(IntegralSpec, Value), Error> {
    let text = read_input(path)?;
    let file: SpecFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { pos: 0, msg: format!("spec JSON: {e}") })?;
    let spec = file.to_spec()?;
    let canonical = serde_json::to_value(SpecFile::canonical(&spec)).unwrap();
    Ok((spec, canonical))
}

fn emit(command: &str, spec_json: Option<Value>, result: Value) {
    let mut obj = json!({ "command": command, "result": result });
    if let Some(s) = spec_json {
        obj["spec"] = s;
    }
    println!("{}", serde_json::to_string_pretty(&obj).unwrap());
}

fn rational_json(r: &BigRational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "approx": rat_to_f64(r),
    })
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn quadrature_json(q: &QuadratureResult) -> Value {
    json!({
        "estimate": complex_json(q.estimate),
        "std_error": { "re": q.std_error.0, "im": q.std_error.1 },
        "samples": q.samples,
        "seed": q.seed,
        "per_sector": q.per_sector.iter().map(|s| json!({
            "vertex_index": s.vertex_index,
            "estimate": complex_json(s.estimate),
            "std_error": { "re": s.std_error.0, "im": s.std_error.1 },
            "samples": s.samples,
        })).collect::<Vec<_>>(),
    })
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Newton { spec } => {
            let (spec, canonical) = load_spec(&spec)?;
            let mut items = Vec::new();
            for (f, text) in spec.polys.iter().zip(canonical["f"].as_array().unwrap()) {
                let p = newton_polytope(f)?;
                items.push(json!({
                    "factor": text,
                    "dim": p.dim(),
                    "polytope": serde_json::to_value(p.to_json()).unwrap(),
                }));
            }
            eprintln!("{} Newton polytope(s)", items.len());
            emit("newton", Some(canonical), Value::Array(items));
            Ok(())
        }
        Command::Convergence { spec, gamma } => {
            let (spec, canonical) = load_spec(&spec)?;
            let report = check_convergence(&spec)?;
            let skel_text = report.skeleton.as_ref().map(|s| s.display());
            if gamma {
                if let Some(t) = &skel_text {
                    eprintln!("{t}");
                }
            }
            eprintln!(
                "converges: {} ({})",
                report.converges,
                if report.exact { "exact" } else { "float fallback" }
            );
            let result = json!({
                "converges": report.converges,
                "exact": report.exact,
                "reasons": serde_json::to_value(&report.reasons).unwrap(),
                "gamma_skeleton": report.skeleton.as_ref().map(|s| s.factors.iter().map(|f| json!({
                    "r": f.r.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "w": f.w.iter().map(rational_json).collect::<Vec<_>>(),
                    "text": f.display(),
                })).collect::<Vec<_>>()),
                "gamma_product": skel_text,
                "violated_facets": report.violated.iter().map(|v| json!({
                    "text": v.factor.display(),
                    "boundary": v.boundary,
                })).collect::<Vec<_>>(),
                "polytope": report.polytope.as_ref().map(|p| serde_json::to_value(p.to_json()).unwrap()),
            });
            emit("convergence", Some(canonical), result);
            Ok(())
        }
        Command::Critical { spec, positive, seed } => {
            let (spec, canonical) = load_spec(&spec)?;
            if positive {
                let p = positive_critical_point(&spec)?;
                eprintln!(
                    "positive critical point found in {} Newton steps (‖grad‖∞ = {:.2e})",
                    p.iterations, p.gradient_norm
                );
                let result = json!({
                    "point": p.point,
                    "hessian_minus_log_l": p.hessian,
                    "gradient_norm": p.gradient_norm,
                    "iterations": p.iterations,
                });
                emit("critical", Some(canonical), result);
            } else {
                let seed = resolve_seed(seed);
                let set = all_critical_points(&spec, seed)?;
                eprintln!("{} critical point(s), {} path failure(s)", set.count, set.path_failures);
                let result = json!({
                    "count": set.count,
                    "points": set.points.iter().map(|x| x.iter().map(|z| complex_json(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "residuals": set.residuals,
                    "hessians_minus_log_l": set.hessians.iter().map(|h| complex_json(*h)).collect::<Vec<_>>(),
                    "path_failures": set.path_failures,
                    "warnings": set.warnings,
                    "seed": seed,
                });
                emit("critical", Some(canonical), result);
            }
            Ok(())
        }
        Command::Limits { spec, sweep, samples, seed } => {
            let (spec, canonical) = load_spec(&spec)?;
            let seed = resolve_seed(seed);
            let ft = field_theory_limit(&spec, seed)?;
            let he = high_energy_limit(&spec).ok();
            let sweep_rows = match &sweep {
                Some(deltas) => Some(limit_sweep(&spec, deltas, samples, seed)?),
                None => None,
            };
            eprintln!(
                "field-theory limit: {} (gap {:.2e}, {})",
                rat_to_f64(&ft.dual_volume_normalized),
                ft.agreement_gap,
                if ft.reliable { "reliable" } else { "UNRELIABLE" }
            );
            let result = json!({
                "dual_volume_normalized": rational_json(&ft.dual_volume_normalized),
                "dual_volume_euclidean": rational_json(&ft.dual_volume_euclidean),
                "critical_sum": complex_json(ft.critical_sum),
                "agreement_gap": ft.agreement_gap,
                "count": ft.count,
                "reliable": ft.reliable,
                "high_energy": he.map(|h| json!({
                    "point": h.point,
                    "l_at_point": h.l_at_a,
                    "hessian": h.hessian,
                    "prefactor": complex_json(h.prefactor),
                })),
                "sweep": sweep_rows.map(|rows| rows.iter().map(|r| json!({
                    "delta": r.delta,
                    "estimate": complex_json(r.result.estimate),
                    "std_error": { "re": r.result.std_error.0, "im": r.result.std_error.1 },
                })).collect::<Vec<_>>()),
            });
            emit("limits", Some(canonical), result);
            Ok(())
        }
        Command::Integrate { spec, samples, seed, delta, emit_sectors, deterministic } => {
            let (spec, canonical) = load_spec(&spec)?;
            let seed = resolve_seed(seed);
            let sectors_json = if emit_sectors {
                let sectors = sector_decompose(&spec)?;
                Some(
                    sectors
                        .iter()
                        .map(|s| {
                            json!({
                                "vertex_index": s.vertex_index,
                                "vertex": s.vertex.iter().map(rational_json).collect::<Vec<_>>(),
                                "rays": s.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                                "det_abs": rational_json(&s.det_abs),
                            })
                        })
                        .collect::<Vec<_>>(),
                )
            } else {
                None
            };
            let result = if deterministic {
                if delta.is_some() {
                    return Err(Error::Precondition(
                        "--deterministic does not take --delta".into(),
                    ));
                }
                let v = evaluate_deterministic(&spec, 64)?;
                eprintln!("deterministic estimate: {}", v.re);
                json!({
                    "backend": "gauss-laguerre",
                    "estimate": complex_json(v),
                    "sectors": sectors_json,
                })
            } else {
                let q = match delta {
                    Some(d) => evaluate_idelta(&spec, d, samples, seed)?,
                    None => evaluate(&spec, samples, seed)?,
                };
                eprintln!(
                    "estimate: {} ± {} ({} samples)",
                    q.estimate.re, q.std_error.0, q.samples
                );
                let mut obj = quadrature_json(&q);
                obj["backend"] = json!("monte-carlo");
                if let Some(d) = delta {
                    obj["delta"] = json!(d);
                }
                obj["sectors"] = sectors_json.map(Value::Array).unwrap_or(Value::Null);
                obj
            };
            emit("integrate", Some(canonical), result);
            Ok(())
        }
        Command::Gkz { spec, specialize: recipe_path, degree_bound } => {
            let (spec, canonical) = load_spec(&spec)?;
            let system = gkz_system(&spec, degree_bound)?;
            let znames = system.z_names();
            let pnames = system.param_names();
            let resonance = check_nonresonant(&system.cayley, &spec.s, &spec.nu)?;
            let specialized = match &recipe_path {
                Some(path) => {
                    let text = read_input(path)?;
                    let raw: Value = serde_json::from_str(&text)
                        .map_err(|e| Error::Parse { pos: 0, msg: format!("recipe JSON: {e}") })?;
                    let recipe = parse_recipe(&raw)?;
                    let ops = specialize(&system, &recipe)?;
                    let tnames: Vec<String> =
                        recipe.rest.iter().map(|r| r.name.clone()).collect();
                    Some(
                        ops.iter()
                            .map(|op| diffop_to_json(op, &tnames, &pnames))
                            .collect::<Vec<_>>(),
                    )
                }
                None => None,
            };
            eprintln!(
                "GKZ system: {} binomial(s), {} Euler operator(s); beta = -(s, nu); {}",
                system.binomials.len(),
                system.euler_ops.len(),
                if resonance.nonresonant { "non-resonant" } else { "RESONANT" }
            );
            let result = json!({
                "beta_convention": "beta = -(s, nu)",
                "cayley": {
                    "matrix": system.cayley.matrix,
                    "labels": system.cayley.labels.iter().map(|(i, a)| json!({
                        "factor": i + 1,
                        "exponent": a,
                    })).collect::<Vec<_>>(),
                    "rank": system.cayley.rank,
                },
                "degree_bound": system.degree_bound,
                "binomials": system.binomials.iter().map(|b| diffop_to_json(b, &znames, &pnames)).collect::<Vec<_>>(),
                "euler_operators": system.euler_ops.iter().map(|e| diffop_to_json(e, &znames, &pnames)).collect::<Vec<_>>(),
                "nonresonant": resonance.nonresonant,
                "resonance_witness": resonance.witness.map(|(r, v)| json!({
                    "ray": r.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "pairing": v,
                })),
                "specialized": specialized,
            });
            emit("gkz", Some(canonical), result);
            Ok(())
        }
        Command::Shift { spec, verify, beta_reduce, samples, seed } => {
            let (spec, canonical) = load_spec(&spec)?;
            let gens = annihilator_generators(&spec);
            let seed = resolve_seed(seed);
            let verification = if verify {
                let mut reports = Vec::new();
                for op in &gens {
                    let r = verify_shift(&spec, op, samples, seed)?;
                    reports.push(json!({
                        "operator": op.to_text(),
                        "total": complex_json(r.total),
                        "propagated_error": r.propagated_error,
                        "pass": r.pass,
                    }));
                }
                Some(reports)
            } else {
                None
            };
            let beta_c = match beta_reduce {
                Some(ab) => {
                    let (a, b) = (ab[0], ab[1]);
                    let sym = beta_reduction_symbolic(a, b);
                    let names = euler_core::params::param_names(1, 1);
                    Some(json!({
                        "a": a,
                        "b": b,
                        "coefficient": sym.to_text(&names),
                    }))
                }
                None => None,
            };
            eprintln!("{} annihilator generator(s)", gens.len());
            let result = json!({
                "generators": gens.iter().map(|g| g.to_text()).collect::<Vec<_>>(),
                "verification": verification,
                "beta_reduction": beta_c,
            });
            emit("shift", Some(canonical), result);
            Ok(())
        }
        Command::Symanzik { graph } => {
            let text = read_input(&graph)?;
            let raw: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse { pos: 0, msg: format!("graph JSON: {e}") })?;
            let g = parse_graph(&raw)?;
            let (u, f) = symanzik(&g)?;
            let vars: Vec<String> = (1..=g.n_edges()).map(|k| format!("x{k}")).collect();
            eprintln!("U = {}", u.to_text(&vars));
            eprintln!("F = {}", f.to_text_kin(&vars));
            let result = json!({
                "vars": vars,
                "u": u.to_text(&vars),
                "u_json": serde_json::to_value(u.to_json(&vars)).unwrap(),
                "f": f.to_text_kin(&vars),
            });
            emit("symanzik", None, result);
            Ok(())
        }
        Command::Moduli { m } => {
            let polys = moduli_minors(m)?;
            let n = m - 3;
            let vars: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
            let texts: Vec<String> = polys.iter().map(|p| p.to_text(&vars)).collect();
            eprintln!("{} factor(s) in {} variable(s)", texts.len(), n);
            let result = json!({
                "m": m,
                "vars": vars,
                "f": texts,
            });
            emit("moduli", None, result);
            Ok(())
        }
        Command::Sweep { spec, deltas, samples, seed } => {
            let (spec, _) = load_spec(&spec)?;
            let seed = resolve_seed(seed);
            let rows = limit_sweep(&spec, &deltas, samples, seed)?;
            println!("delta,estimate_re,estimate_im,std_error_re,std_error_im,samples");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    row.delta,
                    row.result.estimate.re,
                    row.result.estimate.im,
                    row.result.std_error.0,
                    row.result.std_error.1,
                    row.result.samples
                );
            }
            eprintln!("{} sweep row(s)", rows.len());
            Ok(())
        }
    }
}

/// Recipe file: {"fixed": [1,2,3], "rest": [{"col": 6, "name": "t1", "sign": -1}, ...]}
/// with 1-based column indices matching z1..zN.
fn parse_recipe(raw: &Value) -> Result<TorusRecipe, Error> {
    let bad = || Error::InvalidSpec("recipe must have fixed: [cols] and rest: [{col,name,sign}]".into());
    let fixed: Vec<usize> = raw["fixed"]
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|v| v.as_u64().map(|x| (x as usize).saturating_sub(1)).ok_or_else(bad))
        .collect::<Result<_, _>>()?;
    let rest: Vec<RestVar> = raw["rest"]
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|v| {
            Ok(RestVar {
                col: v["col"].as_u64().map(|x| (x as usize).saturating_sub(1)).ok_or_else(bad)?,
                name: v["name"].as_str().ok_or_else(bad)?.to_string(),
                sign: v["sign"].as_i64().unwrap_or(1),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(TorusRecipe { fixed, rest })
}

/// Graph file: {"vertices": 3, "edges": [[0,1],[1,2],[0,2]],
/// "legs": [[0,"t1"],[1,"t2"],[2,"t3"]]} with 0-based vertex indices.
fn parse_graph(raw: &Value) -> Result<Graph, Error> {
    let bad = || Error::InvalidSpec("graph must have vertices, edges: [[u,v]], legs: [[v,name]]".into());
    let vertices = raw["vertices"].as_u64().ok_or_else(bad)? as usize;
    let internal_edges: Vec<(usize, usize)> = raw["edges"]
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|e| {
            let pair = e.as_array().ok_or_else(bad)?;
            Ok((
                pair[0].as_u64().ok_or_else(bad)? as usize,
                pair[1].as_u64().ok_or_else(bad)? as usize,
            ))
        })
        .collect::<Result<_, _>>()?;
    let external_legs: Vec<(usize, String)> = raw["legs"]
        .as_array()
        .map(|legs| {
            legs.iter()
                .map(|e| {
                    let pair = e.as_array().ok_or_else(bad)?;
                    Ok((
                        pair[0].as_u64().ok_or_else(bad)? as usize,
                        pair[1].as_str().ok_or_else(bad)?.to_string(),
                    ))
                })
                .collect::<Result<_, _>>()
        })
        .transpose()?
        .unwrap_or_default();
    if internal_edges.iter().any(|&(a, b)| a >= vertices || b >= vertices)
        || external_legs.iter().any(|(v, _)| *v >= vertices)
    {
        return Err(Error::InvalidSpec("vertex index out of range".into()));
    }
    Ok(Graph { vertices, internal_edges, external_legs })
}
