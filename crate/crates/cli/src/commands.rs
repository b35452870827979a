use std::fs;
use std::path::Path;

use geodiv_core::complexity::classical::{complexity_classical, MarginalFamily, ProjectionReport};
use geodiv_core::complexity::quantum::{many_party_correlation, QuantumProjectionReport};
use geodiv_core::quantum::{canonical_divergence_quantum, dual_divergence_quantum, quantum_relative_entropy};
use geodiv_core::simplex::{canonical_divergence_simplex, dual_divergence_simplex, kl};
use geodiv_core::{OptimizerConfig, QuadratureConfig};
use serde_json::json;

use crate::error::CliError;
use crate::report::Report;
use crate::selftest;
use crate::state::StateFile;
use crate::{usage, ComplexityArgs, DivergenceArgs, DivergenceKind, SelftestArgs};

pub fn divergence(args: &DivergenceArgs, stamp: bool) -> Result<u8, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(tol) = args.tol {
        cfg.tolerance = tol;
    }
    if let Some(points) = args.points {
        cfg.base_points = points;
    }
    cfg.validate()?;
    let a = StateFile::load(&args.a)?;
    let b = StateFile::load(&args.b)?;

    use DivergenceKind::*;
    // value, and the closed form it should equal; the geodesic integral for closed forms
    let (value, oracle) = match args.kind {
        Kl | Canonical | Dual => {
            let (p, q) = (a.probability_vector()?, b.probability_vector()?);
            match args.kind {
                Kl => (kl(&p, &q)?, lazy(args.compare_oracle, || canonical_divergence_simplex(&p, &q, &cfg))?),
                Canonical => (canonical_divergence_simplex(&p, &q, &cfg)?, lazy(args.compare_oracle, || kl(&p, &q))?),
                _ => (dual_divergence_simplex(&p, &q, &cfg)?, lazy(args.compare_oracle, || kl(&q, &p))?),
            }
        }
        Qre | CanonicalQ | DualQ => {
            let (r1, r2) = (a.density()?, b.density()?);
            match args.kind {
                Qre => (
                    quantum_relative_entropy(&r1, &r2)?,
                    lazy(args.compare_oracle, || canonical_divergence_quantum(&r1, &r2, &cfg))?,
                ),
                CanonicalQ => (
                    canonical_divergence_quantum(&r1, &r2, &cfg)?,
                    lazy(args.compare_oracle, || quantum_relative_entropy(&r1, &r2))?,
                ),
                _ => (
                    dual_divergence_quantum(&r1, &r2, &cfg)?,
                    lazy(args.compare_oracle, || quantum_relative_entropy(&r2, &r1))?,
                ),
            }
        }
    };

    let config = json!({
        "command": "divergence",
        "kind": args.kind.name(),
        "a": args.a.display().to_string(),
        "b": args.b.display().to_string(),
        "tol": cfg.tolerance,
        "points": cfg.base_points,
        "compare_oracle": args.compare_oracle,
    });
    let mut report = Report::new(args.kind.name(), value, config);
    if let Some(o) = oracle {
        report = report.with_oracle(o);
    }
    println!("{}", report.stamped(stamp).to_json());
    Ok(0)
}

fn lazy(enabled: bool, f: impl FnOnce() -> geodiv_core::Result<f64>) -> geodiv_core::Result<Option<f64>> {
    enabled.then(f).transpose()
}

fn load_family(words: &[String], n_sites: usize) -> Result<MarginalFamily, CliError> {
    match words {
        [name] if name == "singletons" => Ok(MarginalFamily::singletons(n_sites)),
        [name] if name == "pairs" => Ok(MarginalFamily::pairs(n_sites)),
        [name] if name == "full" => Ok(MarginalFamily::full(n_sites)),
        [name, file] if name == "subsets" => {
            let path = Path::new(file);
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let subsets: Vec<Vec<usize>> = serde_json::from_str(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            Ok(MarginalFamily::new(n_sites, subsets)?)
        }
        [] => Err(usage("--classical needs --family")),
        other => Err(usage(format!("unrecognized family {other:?}"))),
    }
}

pub fn complexity(args: &ComplexityArgs, stamp: bool) -> Result<u8, CliError> {
    let state = StateFile::load(&args.state)?;
    let mut config = json!({
        "command": "complexity",
        "state": args.state.display().to_string(),
        "bits": args.bits,
    });

    let (quantity, outcome, cfg) = if args.classical {
        let p = state.joint()?;
        let family = load_family(&args.family, p.space.n_sites())?;
        let cfg = optimizer(OptimizerConfig::ipf(), args);
        config["mode"] = json!("classical");
        config["family"] = json!(family.subsets());
        let outcome = match complexity_classical(&p, &family, &cfg) {
            Ok(r) => Ok(classical_summary(&r)),
            Err(geodiv_core::Error::IpfNotConverged(r)) => Err(classical_summary(&r)),
            Err(e) => return Err(e.into()),
        };
        ("complexity-classical", outcome, cfg)
    } else {
        let rho = state.multiqubit()?;
        let k = args.k.ok_or_else(|| usage("--quantum needs --k"))?;
        let cfg = optimizer(OptimizerConfig::gibbs(), args);
        config["mode"] = json!("quantum");
        config["k"] = json!(k);
        let outcome = match many_party_correlation(&rho, k, &cfg) {
            Ok(r) => Ok(quantum_summary(&r)),
            Err(geodiv_core::Error::GibbsNotConverged(r)) => Err(quantum_summary(&r)),
            Err(e) => return Err(e.into()),
        };
        ("complexity-quantum", outcome, cfg)
    };
    config["tol"] = json!(cfg.tolerance);
    config["max_iter"] = json!(cfg.max_iterations);

    let (converged, (value, iterations, residual)) = match outcome {
        Ok(s) => (true, s),
        Err(s) => (false, s),
    };
    let mut report = Report::new(quantity, value, config);
    report.iterations = Some(iterations);
    report.residual = Some(residual);
    if args.bits {
        report = report.in_bits();
    }
    println!("{}", report.stamped(stamp).to_json());
    if converged {
        Ok(0)
    } else {
        eprintln!("geodiv: projection did not converge (residual {residual:e} after {iterations} iterations)");
        Ok(3)
    }
}

fn optimizer(mut cfg: OptimizerConfig, args: &ComplexityArgs) -> OptimizerConfig {
    if let Some(tol) = args.tol {
        cfg.tolerance = tol;
    }
    if let Some(m) = args.max_iter {
        cfg.max_iterations = m;
    }
    cfg
}

fn classical_summary(r: &ProjectionReport) -> (f64, usize, f64) {
    (r.divergence, r.iterations, r.residual)
}

fn quantum_summary(r: &QuantumProjectionReport) -> (f64, usize, f64) {
    (r.divergence, r.iterations, r.gradient_residual)
}

pub fn selftest(args: &SelftestArgs) -> u8 {
    let outcomes = selftest::run_all(args.seed, args.trials);
    print!("{}", selftest::format_table(&outcomes));
    let mut failed = false;
    for o in &outcomes {
        for f in &o.failures {
            failed = true;
            let record = json!({
                "suite": o.name,
                "seed": args.seed,
                "case": f.case,
                "detail": f.detail,
                "inputs": f.inputs,
            });
            eprintln!("{}", serde_json::to_string(&record).expect("failure records serialize"));
        }
    }
    u8::from(failed)
}
