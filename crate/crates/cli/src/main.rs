use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use elliptica::elliptic::{phi_exact, EllipticParams};
use elliptica::fixedpoint::{
    catalog, catalog_manifold, consistency_check, equivariant_index, rigidity_check, simplify_character,
    special_orders, twist_split_check, Backend, IndexValue, SpinCircleManifold,
};
use elliptica::zem::{run_suites, LatticeElement, SuiteConfig, SUITES};
use elliptica::Error;

#[derive(Parser)]
#[command(name = "elliptica", version, about = "Elliptic genus identities, equivariant indices and rigidity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Truncation order in p = q^(1/4).
    #[arg(long = "q-order", default_value_t = 80)]
    q_order: usize,
    /// Modular parameter, e.g. `i` or `0.1+1.2i`.
    #[arg(long, default_value = "i", value_parser = parse_complex)]
    tau: Complex64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites (`all` for every suite).
    Verify {
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        /// Largest dimension of the random normal spaces.
        #[arg(long = "max-dim", default_value_t = 8)]
        max_dim: usize,
        /// Skip the exact series sub-checks.
        #[arg(long)]
        numeric_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Equivariant index of a twisted Dirac operator.
    Index {
        /// Manifold JSON file, or `catalog:NAME`.
        #[arg(long)]
        manifold: String,
        /// `none`, `tangent_witten`, `T`, `S2T`, `L2T`, `L3T` or a twist named in the file.
        #[arg(long, default_value = "none")]
        twist: String,
        /// Also evaluate numerically at this z.
        #[arg(long, value_parser = parse_complex)]
        at: Option<Complex64>,
        #[command(flatten)]
        common: Common,
    },
    /// Check Witten rigidity coefficientwise.
    Rigidity {
        #[arg(long)]
        manifold: String,
        /// Flip the sign of one weight, given as POINT.PLANE.
        #[arg(long)]
        flip: Option<String>,
        /// Also report the S²T and Λ³T twisted indices separately.
        #[arg(long)]
        split: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Special orders and their torsion points; with --gamma, a consistency
    /// check at a non-special torsion point.
    Special {
        #[arg(long)]
        manifold: String,
        /// Torsion point as `alpha,beta,k`.
        #[arg(long)]
        gamma: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the p-expansion of Φ_i.
    Expand {
        #[arg(long, default_value_t = 1)]
        phi: u8,
        #[command(flatten)]
        common: Common,
    },
    /// List the bundled manifolds, print one, or export all to a directory.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.replace(' ', "");
    match t.as_str() {
        "i" | "+i" => return Ok(Complex64::new(0.0, 1.0)),
        "-i" => return Ok(Complex64::new(0.0, -1.0)),
        _ => {}
    }
    let t = t.replace("+i", "+1i").replace("-i", "-1i");
    t.parse::<Complex64>().map_err(|e| format!("invalid complex number `{s}`: {e}"))
}

/// Failure class of a command: mathematical (exit 1) or input (exit 2).
enum Failure {
    Math(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema { .. } | Error::UnknownSuite(_) | Error::Invalid(_) | Error::SpecialPoint { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Math(other.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn params(c: &Common) -> Result<EllipticParams, Failure> {
    Ok(EllipticParams::new(c.tau)?.with_truncation_order(c.q_order))
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Math(e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_manifold(spec: &str) -> Result<SpinCircleManifold, Failure> {
    let m = match spec.strip_prefix("catalog:") {
        Some(name) => catalog_manifold(name)?,
        None => {
            let src = fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
            SpinCircleManifold::from_json(&src)?
        }
    };
    if let Some(w) = m.parity_warning() {
        eprintln!("warning: {w}");
    }
    Ok(m)
}

fn verify(suites: &[String], max_dim: usize, numeric_only: bool, c: &Common) -> CmdResult {
    for s in suites {
        if s != "all" && !SUITES.contains(&s.as_str()) {
            return Err(Error::UnknownSuite(s.clone()).into());
        }
    }
    let config = SuiteConfig {
        trials: c.trials,
        seed: c.seed,
        tol: c.tol,
        max_dim,
        truncation_order: c.q_order,
        exact: !numeric_only,
    };
    let names: Vec<&str> = suites.iter().map(String::as_str).collect();
    let reports = run_suites(&names, &config)?;
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        eprintln!(
            "{:<22} {} max residual {:.3e}, {} failures, {} exact checks",
            r.suite,
            if r.passed { "pass" } else { "FAIL" },
            r.max_residual,
            r.failures.len(),
            r.exact.len()
        );
    }
    let value = json!({
        "seed": c.seed,
        "trials": c.trials,
        "tol": c.tol,
        "q_order": c.q_order,
        "max_dim": max_dim,
        "passed": passed,
        "suites": reports,
    });
    emit(&value, c.out.as_deref())?;
    Ok(passed)
}

fn index(manifold: &str, twist: &str, at: Option<Complex64>, c: &Common) -> CmdResult {
    let m = load_manifold(manifold)?;
    let spec = m.twist(twist)?;
    let p = params(c)?;
    let mut value = json!({ "manifold": m.name, "twist": twist });
    let mut ok = true;
    match equivariant_index(&m, &spec, &p, Backend::Exact)? {
        IndexValue::Character(f) => {
            let ch = simplify_character(&f);
            ok = ch.laurent().is_some();
            value["rational"] = Value::from(f.to_string());
            value["character"] = Value::from(ch.to_string());
            value["integral"] = Value::from(ok);
            eprintln!("{} twisted by {twist}: {ch}", m.name);
        }
        IndexValue::Series(s) => {
            value["series"] = serde_json::to_value(s.to_json()).map_err(|e| Failure::Math(e.to_string()))?;
            eprintln!("{} Witten series through p^{}", m.name, s.order());
        }
        IndexValue::Number(_) => unreachable!("exact backend"),
    }
    if let Some(z) = at {
        if let IndexValue::Number(v) = equivariant_index(&m, &spec, &p, Backend::Numeric(z))? {
            value["at"] = json!({ "z": [z.re, z.im], "value": [v.re, v.im] });
        }
    }
    emit(&value, c.out.as_deref())?;
    Ok(ok)
}

fn rigidity(manifold: &str, flip: Option<&str>, split: bool, c: &Common) -> CmdResult {
    let mut m = load_manifold(manifold)?;
    if let Some(f) = flip {
        let (pt, pl) = f
            .split_once('.')
            .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
            .ok_or_else(|| Failure::Usage(format!("--flip expects POINT.PLANE, got `{f}`")))?;
        m = m.with_flipped_weight(pt, pl)?;
    }
    let report = rigidity_check(&m, c.q_order)?;
    eprintln!(
        "{}: {} through p^{}{}",
        m.name,
        if report.rigid { "rigid" } else { "NOT rigid" },
        c.q_order,
        if report.rigid {
            String::new()
        } else {
            format!(", non-constant at p^{:?}", report.non_constant_orders)
        }
    );
    let mut value = serde_json::to_value(&report).map_err(|e| Failure::Math(e.to_string()))?;
    if split {
        let s = twist_split_check(&m)?;
        eprintln!(
            "S2T constant: {}, L3T constant: {}, sum constant: {}",
            s.s2_constant, s.l3_constant, s.sum_constant
        );
        value["split"] = serde_json::to_value(&s).map_err(|e| Failure::Math(e.to_string()))?;
    }
    emit(&value, c.out.as_deref())?;
    Ok(report.rigid)
}

fn special(manifold: &str, gamma: Option<&str>, c: &Common) -> CmdResult {
    let m = load_manifold(manifold)?;
    let so = special_orders(&m);
    eprintln!("{}: special orders {:?}", m.name, so.orders);
    let mut value = serde_json::to_value(&so).map_err(|e| Failure::Math(e.to_string()))?;
    let mut ok = true;
    if let Some(g) = gamma {
        let parts: Vec<i64> = g
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Usage(format!("--gamma expects alpha,beta,k, got `{g}`")))?;
        let [alpha, beta, k] = parts[..] else {
            return Err(Failure::Usage(format!("--gamma expects alpha,beta,k, got `{g}`")));
        };
        let gamma = LatticeElement::torsion(alpha, beta, k)?;
        let r = consistency_check(&m, &gamma, &params(c)?, c.trials, c.seed, c.tol)?;
        eprintln!("consistency at γ = {}: max residual {:.3e}", r.gamma, r.max_residual);
        ok = r.passed;
        value["consistency"] = serde_json::to_value(&r).map_err(|e| Failure::Math(e.to_string()))?;
    }
    emit(&value, c.out.as_deref())?;
    Ok(ok)
}

fn expand(i: u8, c: &Common) -> CmdResult {
    let s = phi_exact(i, c.q_order)?;
    let json = s.to_json();
    eprintln!("Φ{i} through p^{}: p^0 coefficient {}", c.q_order, json.coeffs[0]);
    emit(&json!({ "phi": i, "series": json }), c.out.as_deref())?;
    Ok(true)
}

fn catalog_cmd(name: Option<&str>, export: Option<&Path>) -> CmdResult {
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for (n, src) in catalog() {
            let path = dir.join(format!("{n}.json"));
            fs::write(&path, src).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        eprintln!("wrote {} manifolds to {}", catalog().len(), dir.display());
        return Ok(true);
    }
    match name {
        Some(n) => {
            let m = catalog_manifold(n)?;
            println!("{}", m.to_json());
        }
        None => {
            let list: Vec<Value> = catalog()
                .iter()
                .map(|(n, src)| {
                    let m = SpinCircleManifold::from_json(src).expect("catalog entry parses");
                    json!({ "name": n, "title": m.name, "dim": m.dim(), "points": m.points.len() })
                })
                .collect();
            emit(&list, None)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify {
            suite,
            max_dim,
            numeric_only,
            common,
        } => verify(suite, *max_dim, *numeric_only, common),
        Command::Index {
            manifold,
            twist,
            at,
            common,
        } => index(manifold, twist, *at, common),
        Command::Rigidity {
            manifold,
            flip,
            split,
            common,
        } => rigidity(manifold, flip.as_deref(), *split, common),
        Command::Special {
            manifold,
            gamma,
            common,
        } => special(manifold, gamma.as_deref(), common),
        Command::Expand { phi, common } => expand(*phi, common),
        Command::Catalog { name, export } => catalog_cmd(name.as_deref(), export.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
