//! `qsasaki`: verify the structure of `M_{l,m}` and compute its cohomology.
//!
//! Exit status is 0 when everything requested passes, 1 when a check fails,
//! and 2 for invalid arguments.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qsasaki::cohomology::{poincare_factors, poincare_polynomial, quotient_betti};
use qsasaki::obstruction::{obstruction_for, ObstructionVerdict};
use qsasaki::verifier::{run_all, Config, SuiteReport};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "qsasaki",
    version,
    about = "Structure checks and exact cohomology for (S^{4l+3} x T^{4m})/Z4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every pointwise and exact structure check.
    Verify(VerifyArgs),
    /// Betti numbers b_0..b_{4(l+m)+3} of the quotient.
    Betti(Common),
    /// Poincaré polynomial of the quotient.
    Poincare {
        #[command(flatten)]
        common: Common,
        /// Print as (1+t^{4l+3}) times the torus-invariant polynomial.
        #[arg(long)]
        factored: bool,
    },
    /// Test whether the quotient can split as a 3-Sasakian times a hyper-Kähler manifold.
    Obstruction(Common),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9, value_parser = positive_real)]
    tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

fn positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive real, got {s}"))
    }
}

enum Outcome {
    Pass,
    Fail,
}

fn emit(common: &Common, body: &str) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json(v: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn strings(v: &[usize]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let c = &args.common;
    let cfg = Config::new(c.l, c.m, args.samples as usize, args.seed, args.tol);
    let report: SuiteReport = run_all(&cfg)?;
    let body = match c.format {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = format!(
                "M_{{{},{}}}: dimension {}, {} samples, seed {}, tol {:e}\n",
                c.l,
                c.m,
                4 * (c.l + c.m) + 3,
                cfg.samples,
                cfg.seed,
                cfg.tol
            );
            for check in &report.checks {
                s.push_str(&check.to_string());
            }
            s.push_str(if report.passed {
                "overall: PASS\n"
            } else {
                "overall: FAIL\n"
            });
            s
        }
    };
    emit(c, &body)?;
    if report.passed {
        Ok(Outcome::Pass)
    } else {
        for check in report.checks.iter().filter(|c| !c.passed) {
            let items: Vec<&str> = check
                .residuals
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.name.as_str())
                .chain(check.certificates.iter().filter(|c| !c.passed).map(|c| c.name.as_str()))
                .collect();
            eprintln!("failed: {} ({})", check.check, items.join("; "));
        }
        Ok(Outcome::Fail)
    }
}

fn cmd_betti(c: &Common) -> anyhow::Result<Outcome> {
    let qb = quotient_betti(c.l, c.m)?;
    let body = match c.format {
        Format::Text => strings(&qb.betti).join(",") + "\n",
        Format::Json => to_json(&json!({
            "l": c.l,
            "m": c.m,
            "dimension": 4 * (c.l + c.m) + 3,
            "betti": strings(&qb.betti),
            "torus_invariants": strings(&qb.torus_invariants),
            "sphere_action": { "top_degree": qb.sphere.top_degree, "on_h0": qb.sphere.on_h0, "on_top": qb.sphere.on_top },
        }))?,
    };
    emit(c, &body)?;
    Ok(Outcome::Pass)
}

fn cmd_poincare(c: &Common, factored: bool) -> anyhow::Result<Outcome> {
    let p = poincare_polynomial(c.l, c.m)?;
    let factors = poincare_factors(c.l, c.m)?;
    let factored_str = factors
        .as_ref()
        .map(|(s, t)| format!("({})({})", s.to_compact_string(), t.to_compact_string()));
    let body = match c.format {
        Format::Text => match (factored, &factored_str) {
            (true, Some(f)) => f.clone() + "\n",
            (true, None) => anyhow::bail!("P does not factor as (1+t^d) times the torus-invariant polynomial"),
            (false, _) => format!("{p}\n"),
        },
        Format::Json => to_json(&json!({
            "l": c.l,
            "m": c.m,
            "coefficients": p,
            "display": p.to_string(),
            "factored": factored_str,
        }))?,
    };
    emit(c, &body)?;
    Ok(Outcome::Pass)
}

fn render_verdict(v: &ObstructionVerdict) -> String {
    let verdict = serde_json::to_value(v.verdict)
        .ok()
        .and_then(|x| x.as_str().map(String::from))
        .unwrap_or_default();
    let mut s = format!("{verdict}\nP(t) = {}\n", v.poincare);
    for c in &v.candidates {
        let status = if c.ruled_out { "ruled out" } else { "not ruled out" };
        s.push_str(&format!(
            "candidate {} P''(t) = {}: {status}\n",
            c.candidate.name, c.candidate.polynomial
        ));
        s.push_str(&format!(
            "  lower bound (1+t^{})P''(t) = {}\n",
            v.sasakian_dim, c.lower_bound
        ));
        if let Some(w) = &c.witness {
            s.push_str(&format!(
                "  witness: degree {} coefficient {} > {}\n",
                w.degree, w.bound, w.actual
            ));
        }
    }
    for n in &v.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

fn cmd_obstruction(c: &Common) -> anyhow::Result<Outcome> {
    let v = obstruction_for(c.l, c.m)?;
    let body = match c.format {
        Format::Text => render_verdict(&v),
        Format::Json => to_json(&v)?,
    };
    emit(c, &body)?;
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Betti(c) => cmd_betti(c),
        Command::Poincare { common, factored } => cmd_poincare(common, *factored),
        Command::Obstruction(c) => cmd_obstruction(c),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<qsasaki::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
