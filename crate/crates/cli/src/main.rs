use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use sorep::certcheck::{build_bundle, factorization_failures, verify_bundle, BuildOptions, CertificateBundle};
use sorep::exactpoly::{Rational, UniPoly};
use sorep::obstruct::{condition_star_with, PointSet};
use sorep::registry::{decomposers, lp_solvers};
use sorep::repforge::{FactorTerm, PsdFactorization};
use sorep::tensorcalc::{s_polynomial, TensorDecomposition};

/// Exact second-order cone representations of convex polynomial epigraphs.
#[derive(Parser)]
#[command(name = "sorep", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the support-cone representation and its certificate bundle.
    Repr {
        #[arg(long)]
        poly: PathBuf,
        /// Largest radius to try.
        #[arg(long)]
        cap: Rational,
        /// Bisection tolerance for the radius search.
        #[arg(long)]
        precision: Rational,
        #[arg(long)]
        out: PathBuf,
        /// Use this decomposition instead of computing one.
        #[arg(long)]
        decomp: Option<PathBuf>,
        /// Decomposition strategy: auto, strict or flat.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Number of tangent certificates to emit.
        #[arg(long, default_value_t = 21)]
        samples: usize,
    },
    /// Emit the rank-one PSD factorization induced by a decomposition.
    Factorize {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        radius: Rational,
        /// Decomposition to use; computed with the strict strategy when absent.
        #[arg(long)]
        decomp: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check every certificate in a bundle.
    Verify {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Print the S-polynomial S(m, n).
    Spoly {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u32,
    },
    /// Check the subset condition on a finite point sample.
    Obstruct {
        #[arg(long)]
        points: PathBuf,
        #[arg(short)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// LP kernel: simplex or fourier-motzkin.
        #[arg(long, default_value = "simplex")]
        lp: String,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit 1: the input was understood and a check failed.
/// Exit 2: the input could not be used.
enum Failure {
    Check(String),
    Input(String),
}

impl From<sorep::Error> for Failure {
    fn from(e: sorep::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    sorep::json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult {
    let text = sorep::json::to_canonical_string(value)?;
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    print!("{}", sorep::json::to_canonical_string(value)?);
    Ok(())
}

fn repr(
    poly: &Path,
    cap: Rational,
    precision: Rational,
    out: &Path,
    decomp: Option<&Path>,
    method: &str,
    samples: usize,
) -> CmdResult {
    let f: UniPoly = read_json(poly)?;
    let decomp: Option<TensorDecomposition> = decomp.map(read_json).transpose()?;
    let registry = decomposers();
    let strategy = registry.get(method)?;
    let opts = BuildOptions {
        cap,
        precision,
        decomp,
        strategy: strategy.as_ref(),
        samples,
    };
    let (_, bundle) = build_bundle(&f, &opts)?;
    write_json(out, &bundle)?;
    eprintln!(
        "a = {}, {} terms, {} generator certificates",
        bundle.a,
        bundle.decomp.terms.len(),
        bundle.generator_certs.len()
    );
    Ok(())
}

fn factorize(poly: &Path, radius: Rational, decomp: Option<&Path>, out: &Path) -> CmdResult {
    let f: UniPoly = read_json(poly)?;
    let decomp: TensorDecomposition = match decomp {
        Some(p) => read_json(p)?,
        None => decomposers().get("strict")?.decompose(&f)?,
    };
    if decomp.flat_order > 0 {
        return Err(Failure::Input(format!(
            "no rank-one factorization at a flat point (flat order {})",
            decomp.flat_order
        )));
    }
    let fac = PsdFactorization {
        a: radius,
        terms: decomp
            .terms
            .iter()
            .map(|t| FactorTerm {
                p: t.p.clone(),
                q: t.q.clone(),
            })
            .collect(),
    };
    write_json(out, &fac)?;
    let failures = factorization_failures(&f, &fac);
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures.join("\n")))
    }
}

fn verify(bundle: &Path) -> CmdResult {
    let b: CertificateBundle = read_json(bundle)?;
    let result = verify_bundle(&b);
    print_json(&result)?;
    if result.ok {
        Ok(())
    } else {
        Err(Failure::Check(result.failures.join("\n")))
    }
}

fn obstruct(points: &Path, d: usize, jobs: usize, lp: &str, out: Option<&Path>) -> CmdResult {
    let s: PointSet = read_json(points)?;
    let solver = lp_solvers().get(lp)?;
    let report = condition_star_with(&s, d, solver.as_ref(), jobs.max(1))?;
    print_json(&report)?;
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    match &report.failing_subset {
        None => Ok(()),
        Some(t) => Err(Failure::Check(format!("no separating functional for subset {t:?}"))),
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Repr {
            poly,
            cap,
            precision,
            out,
            decomp,
            method,
            samples,
        } => repr(&poly, cap, precision, &out, decomp.as_deref(), &method, samples),
        Cmd::Factorize {
            poly,
            radius,
            decomp,
            out,
        } => factorize(&poly, radius, decomp.as_deref(), &out),
        Cmd::Verify { bundle } => verify(&bundle),
        Cmd::Spoly { m, n } => print_json(&s_polynomial(m, n)?),
        Cmd::Obstruct {
            points,
            d,
            jobs,
            lp,
            out,
        } => obstruct(&points, d, jobs, &lp, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
