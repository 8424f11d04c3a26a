//! Thin command-line front end over the rotorlab library.
//!
//! Exit codes: 0 success, 1 identity/assertion failure, 2 usage error.

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rotorlab::conjectures::{
    claim4_max_scan, conj1_scan, conj3_profile, default_t_grid, delta_decay_fit,
    gaussian_diff_sequence, local_extrema_f64, unimodal_certificate_1d, unimodal_certificate_2d,
};
use rotorlab::kernel::PathCountTable;
use rotorlab::machine::{linear_run, run, RationalConfig};
use rotorlab::scenario::{generate, Scenario};
use rotorlab::weights::{decomposition_check, discrepancy};
use rotorlab::{ExactRational, LatticePoint, RotorError};
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rotorlab", about = "Rotor-router machine laboratory on Z^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the P-machine on a scenario and write the final configuration.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the MoveEvent trace as JSON lines next to --out.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the linear (even-split) machine on a scenario.
    Linear {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Theorem-1 discrepancies for a parametric scenario family.
    DiscrepancySweep {
        /// Family name; "point-source" puts n chips at the origin.
        #[arg(long, default_value = "point-source")]
        family: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Target vertex, comma-separated coordinates.
        #[arg(long, default_value = "0")]
        v: String,
        /// Comma-separated list of n values.
        #[arg(long, default_value = "2,4,8,16,32,64,128,256")]
        n_list: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-offset weight contributions Delta_w for one scenario and target.
    Decompose {
        #[arg(long)]
        scenario: PathBuf,
        /// Target vertex; defaults to the scenario's first target.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump exact path counts (t, coords..., numerator, denominator-exponent).
    KernelDump {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 16)]
        t_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conjecture and claim scanners.
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
    /// Generate a deterministic parity-pure scenario from a seed.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 16)]
        n: u64,
        #[arg(long, default_value_t = 50)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConjectureCmd {
    /// Sign changes of W_{2n}(v, xi) over n, for v in a box.
    SignChanges {
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Built-in xi preset: delta | dipole | quadrupole.
        #[arg(long, default_value = "dipole")]
        xi: String,
        #[arg(long, default_value_t = 10)]
        v_max: i64,
        #[arg(long, default_value_t = 80)]
        n_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unimodality of S_n(v) in n (certified for d=1,2; reported for d=3).
    Unimodal {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value = "3")]
        v: String,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the decay exponent of |Delta_w| for a point-source run.
    DeltaDecay {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 64)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count local extrema of the Gaussian difference f(t).
    Extrema {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "10,0")]
        x: String,
        #[arg(long, default_value = "1,1")]
        z: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum of |f(t)| and its argmax against d|x|^2/(d+2).
    Claim4 {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Semicolon-separated x points, e.g. "10,0;20,0;40,0".
        #[arg(long, default_value = "10,0;14,0;20,0;28,0;40,0")]
        x_list: String,
        #[arg(long, default_value = "1,1")]
        z: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str, d: usize) -> Result<LatticePoint, RotorError> {
    let coords: Result<Vec<i64>, _> = s.split(',').map(|c| c.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|e| RotorError::InvalidScenario(format!("bad point '{s}': {e}")))?;
    if coords.len() != d {
        return Err(RotorError::InvalidScenario(format!(
            "point '{s}' has {} coordinates, expected {d}",
            coords.len()
        )));
    }
    Ok(LatticePoint::new(coords))
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<(), RotorError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn rational_str(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_f64(r: &ExactRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn load_scenario(path: &Path) -> Result<Scenario, RotorError> {
    let text = fs::read_to_string(path)?;
    Scenario::from_json(&text)
}

fn config_csv(entries: impl Iterator<Item = (LatticePoint, String)>, d: usize, value_header: &str) -> String {
    let mut out = String::new();
    let coords: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    out.push_str(&format!("{},{}\n", coords.join(","), value_header));
    for (p, v) in entries {
        let cs: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("{},{}\n", cs.join(","), v));
    }
    out
}

fn run_command(cmd: Command) -> Result<(), RotorError> {
    match cmd {
        Command::Simulate { scenario, out, trace, format } => {
            let sc = load_scenario(&scenario)?;
            if sc.parity_class().is_none() {
                eprintln!("warning: chip placements mix parities; discrepancy bounds presume parity-pure input");
            }
            let result = run(&sc.chip_config(), &sc.rotor_field(), sc.n);
            let final_cfg = result.final_config();
            let content = match format {
                Format::Csv => config_csv(
                    final_cfg.iter().map(|(p, c)| (p.clone(), c.to_string())),
                    sc.d,
                    "count",
                ),
                Format::Json => {
                    let rows: Vec<_> = final_cfg.iter().map(|(p, c)| json!([p, c])).collect();
                    format!("{}\n", serde_json::to_string_pretty(&json!({"d": sc.d, "chips": rows}))?)
                }
            };
            write_out(&out, &content)?;
            if trace {
                let trace_path = out
                    .as_ref()
                    .map(|p| p.with_extension("trace.jsonl"))
                    .unwrap_or_else(|| PathBuf::from("trace.jsonl"));
                let mut f = fs::File::create(trace_path)?;
                for ev in result.events() {
                    writeln!(f, "{}", serde_json::to_string(ev)?)?;
                }
            }
            Ok(())
        }
        Command::Linear { scenario, out } => {
            let sc = load_scenario(&scenario)?;
            let final_cfg = linear_run(&RationalConfig::from_chips(&sc.chip_config()), sc.n);
            let content = config_csv(
                final_cfg
                    .iter()
                    .map(|(p, m)| (p.clone(), format!("{},{}", rational_str(m), rational_f64(m)))),
                sc.d,
                "mass,mass_float",
            );
            write_out(&out, &content)
        }
        Command::DiscrepancySweep { family, d, v, n_list, out } => {
            if family != "point-source" {
                return Err(RotorError::InvalidScenario(format!(
                    "unknown family '{family}' (supported: point-source)"
                )));
            }
            let v = parse_point(&v, d)?;
            let ns: Result<Vec<u64>, _> = n_list.split(',').map(|s| s.trim().parse::<u64>()).collect();
            let ns = ns.map_err(|e| RotorError::InvalidScenario(format!("bad n list: {e}")))?;
            let t_max = ns.iter().copied().max().unwrap_or(0);
            if v.parity() != 0 {
                eprintln!("warning: target parity does not match the even point source");
            }
            let table = PathCountTable::build_symmetric(d, t_max);
            let mut content = String::from("n,discrepancy,discrepancy_float\n");
            for n in ns {
                let chips = rotorlab::ChipConfig::from_entries(d, [(LatticePoint::origin(d), n)]);
                let rotors = rotorlab::RotorField::new(d, 0);
                let disc = discrepancy(&table, &chips, &rotors, n, &v)?;
                content.push_str(&format!("{n},{},{}\n", rational_str(&disc), rational_f64(&disc)));
            }
            write_out(&out, &content)
        }
        Command::Decompose { scenario, target, out } => {
            let sc = load_scenario(&scenario)?;
            let v = match target {
                Some(t) => parse_point(&t, sc.d)?,
                None => sc.targets.first().cloned().ok_or_else(|| {
                    RotorError::InvalidScenario("no --target given and scenario has no targets".into())
                })?,
            };
            let table = PathCountTable::build_symmetric(sc.d, sc.n);
            let trace = run(&sc.chip_config(), &sc.rotor_field(), sc.n);
            let report = decomposition_check(&table, &trace, &v)?;
            let mut content = String::new();
            let coords: Vec<String> = (0..sc.d).map(|i| format!("w{i}")).collect();
            content.push_str(&format!("{},delta,norm,delta_float\n", coords.join(",")));
            for (w, dw) in &report.deltas {
                let cs: Vec<String> = w.0.iter().map(|c| c.to_string()).collect();
                content.push_str(&format!(
                    "{},{},{},{}\n",
                    cs.join(","),
                    rational_str(dw),
                    w.l2_norm(),
                    rational_f64(dw)
                ));
            }
            write_out(&out, &content)
        }
        Command::KernelDump { d, t_max, out } => {
            let table = PathCountTable::build(d, t_max);
            let mut content = String::new();
            let coords: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
            content.push_str(&format!("t,{},numerator,denominator_exponent\n", coords.join(",")));
            for t in 0..=t_max {
                let mut rows: Vec<_> = table.level(t).iter().collect();
                rows.sort_by(|a, b| a.0.cmp(b.0));
                for (p, n) in rows {
                    let cs: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
                    content.push_str(&format!("{t},{},{n},{t}\n", cs.join(",")));
                }
            }
            write_out(&out, &content)
        }
        Command::Conjecture(cmd) => run_conjecture(cmd),
        Command::Generate { seed, d, n, budget, out } => {
            if d == 0 || d > 4 {
                return Err(RotorError::InvalidScenario(format!("unsupported dimension {d}")));
            }
            let sc = generate(seed, d, n, budget);
            write_out(&out, &format!("{}\n", sc.to_json()))
        }
    }
}

fn xi_preset(name: &str, d: usize) -> Result<RationalConfig, RotorError> {
    use num_bigint::BigInt;
    let one = ExactRational::from(BigInt::from(1));
    let mut xi = RationalConfig::new(d);
    let mut unit2 = vec![0i64; d];
    unit2[0] = 2;
    match name {
        "delta" => xi.add_mass(LatticePoint::origin(d), one),
        "dipole" => {
            xi.add_mass(LatticePoint::origin(d), one.clone());
            xi.add_mass(LatticePoint::new(unit2), -one);
        }
        "quadrupole" => {
            let mut neg2 = vec![0i64; d];
            neg2[0] = -2;
            xi.add_mass(LatticePoint::new(unit2), one.clone());
            xi.add_mass(LatticePoint::new(neg2), one.clone());
            xi.add_mass(LatticePoint::origin(d), -(one.clone() + one));
        }
        other => {
            return Err(RotorError::InvalidScenario(format!(
                "unknown xi preset '{other}' (supported: delta, dipole, quadrupole)"
            )))
        }
    }
    Ok(xi)
}

fn run_conjecture(cmd: ConjectureCmd) -> Result<(), RotorError> {
    match cmd {
        ConjectureCmd::SignChanges { d, xi, v_max, n_max, out } => {
            let config = xi_preset(&xi, d)?;
            let table = PathCountTable::build_symmetric(d, n_max);
            let mut content = String::from("v,sign_changes\n");
            let mut max_count = 0;
            let vs: Vec<i64> = (-v_max..=v_max).collect();
            for v0 in vs {
                let mut coords = vec![0i64; d];
                coords[0] = v0;
                let v = LatticePoint::new(coords);
                let (_, profile) = conj1_scan(&table, &config, &v, n_max)?;
                max_count = max_count.max(profile.sign_changes);
                content.push_str(&format!("{v},{}\n", profile.sign_changes));
            }
            let summary = json!({"xi": xi, "d": d, "n_max": n_max, "max_sign_changes": max_count, "status": "report"});
            write_out(&out, &format!("{content}{summary}\n"))
        }
        ConjectureCmd::Unimodal { d, v, n_max, out } => {
            let v = parse_point(&v, d)?;
            let (certified, mode_n) = match d {
                1 => {
                    let x = v.0[0].unsigned_abs();
                    let mode = unimodal_certificate_1d(x, n_max);
                    (mode.is_some(), mode)
                }
                2 => {
                    let mut c: Vec<u64> = v.0.iter().map(|a| a.unsigned_abs()).collect();
                    c.sort_unstable_by(|a, b| b.cmp(a));
                    (unimodal_certificate_2d(c[0], c[1], n_max), None)
                }
                _ => (false, None),
            };
            let table_max = n_max.min(400);
            let table = PathCountTable::build_symmetric(d, table_max);
            let (values, profile) = conj3_profile(&table, &v, table_max)?;
            let mode_from_scan = profile.mode_index.map(|i| v.parity() as u64 + 2 * i as u64);
            let mut content = String::from("n,p\n");
            let mut n = v.parity() as u64;
            for val in &values {
                content.push_str(&format!("{n},{}\n", rational_f64(val)));
                n += 2;
            }
            let summary = json!({
                "d": d, "v": format!("{v}"), "n_max": n_max,
                "certified_unimodal": certified,
                "mode": mode_n.or(mode_from_scan),
                "status": if d <= 2 { "pass" } else { "report" },
            });
            if d <= 2 && !certified {
                eprintln!("unimodality certificate failed for d={d}, v={v}");
                return Err(RotorError::IdentityViolation);
            }
            write_out(&out, &format!("{content}{summary}\n"))
        }
        ConjectureCmd::DeltaDecay { d, n, out } => {
            let table = PathCountTable::build_symmetric(d, n);
            let chips = rotorlab::ChipConfig::from_entries(d, [(LatticePoint::origin(d), n)]);
            let trace = run(&chips, &rotorlab::RotorField::new(d, 0), n);
            let origin = LatticePoint::origin(d);
            let offsets: Vec<LatticePoint> = (4..=(n as i64 / 3).max(8))
                .map(|w| {
                    let mut c = vec![0i64; d];
                    c[0] = w;
                    LatticePoint::new(c)
                })
                .collect();
            let fit = delta_decay_fit(&table, &trace, &origin, &offsets)?;
            let mut content = String::from("norm,abs_delta\n");
            if let Some(f) = &fit {
                for (ln_norm, ln_delta) in &f.points {
                    content.push_str(&format!("{},{}\n", ln_norm.exp(), ln_delta.exp()));
                }
            }
            let summary = match fit {
                Some(f) => json!({
                    "d": d, "n": n, "slope": f.slope, "residual": f.residual,
                    "target": -((d as i64) + 1), "status": "report",
                }),
                None => json!({"d": d, "n": n, "slope": null, "status": "undefined (all deltas zero)"}),
            };
            write_out(&out, &format!("{content}{summary}\n"))
        }
        ConjectureCmd::Extrema { d, x, z, out } => {
            let x = parse_point(&x, d)?;
            let z = parse_point(&z, d)?;
            let (t0, t1) = default_t_grid(&x);
            let vals = gaussian_diff_sequence(d, &x, &z, t0, t1);
            let count = local_extrema_f64(&vals, 1e-12);
            let mut content = String::from("t,f\n");
            for (i, v) in vals.iter().enumerate() {
                content.push_str(&format!("{},{v}\n", t0 + 2 * i as u64));
            }
            let summary = json!({
                "d": d, "x": format!("{x}"), "z": format!("{z}"),
                "t_range": [t0, t1], "local_extrema": count,
                "bound": 6, "status": if count <= 6 { "pass" } else { "fail" },
            });
            write_out(&out, &format!("{content}{summary}\n"))?;
            if count > 6 {
                return Err(RotorError::IdentityViolation);
            }
            Ok(())
        }
        ConjectureCmd::Claim4 { d, x_list, z, out } => {
            let z = parse_point(&z, d)?;
            let xs: Result<Vec<LatticePoint>, _> =
                x_list.split(';').map(|s| parse_point(s.trim(), d)).collect();
            let xs = xs?;
            let rows = claim4_max_scan(d, &xs, &z);
            let mut content = String::from("x,max_abs_f,argmax_t,predicted_t,scaled_max\n");
            for row in &rows {
                content.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.x,
                    row.max_abs,
                    row.argmax_t,
                    row.predicted_t,
                    row.max_abs * row.x.l2_norm().powi(d as i32 + 1)
                ));
            }
            let within = rows.iter().all(|r| {
                r.x.l2_norm() < 10.0
                    || (r.argmax_t as f64 - r.predicted_t).abs() <= 0.2 * r.predicted_t
            });
            let summary = json!({"d": d, "argmax_within_20pct": within, "status": if within { "pass" } else { "fail" }});
            write_out(&out, &format!("{content}{summary}\n"))?;
            if !within {
                return Err(RotorError::IdentityViolation);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ROTORLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RotorError::IdentityViolation) => {
            eprintln!("error: {}", RotorError::IdentityViolation);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
