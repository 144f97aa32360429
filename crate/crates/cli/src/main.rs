//! `qrecur`: build r_I polynomials, emit recursive Q-curvature formulae and
//! run the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qrecur_core::coeffs::assemble_formula;
use qrecur_core::formula::RecursiveFormula;
use qrecur_core::report::Report;
use qrecur_core::residue::ResidueEngine;
use qrecur_core::rpoly::{HalfIntegerSet, RTable};
use qrecur_core::verify;
use qrecur_core::{Composition, Rational};

/// Largest N accepted by the residue route.
const RESIDUE_MAX_N: u32 = 8;
/// Largest composition size accepted by `rpoly`.
const RPOLY_MAX_SIZE: u32 = 16;

#[derive(Parser)]
#[command(name = "qrecur", version, about = "Exact recursive formulae for Q-curvatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Rpoly,
    Residue,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Tables,
    Alpha,
    Formulas,
    Spheres,
    Cross,
    Universality,
    Closed,
    Conjectures,
}

#[derive(Subcommand)]
enum Command {
    /// Print r_I with its values on the half-integer nodes and on -|I|..2.
    Rpoly {
        /// Composition, e.g. 2,1
        #[arg(long = "I", value_name = "COMPOSITION")]
        index: String,
        /// Print only r_I at this rational point.
        #[arg(long, allow_hyphen_values = true)]
        eval: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Emit the recursive formula for Q_{2N}.
    Formula {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, value_enum, default_value = "rpoly")]
        source: SourceArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest N (formulas 8, spheres 8, cross 5, universality 4,
        /// alpha 20, closed 14; conjectures: generating-function degree + 1, default 12).
        #[arg(long = "max-N")]
        max_n: Option<u32>,
        /// Largest composition size for the conjectural r_I identities.
        #[arg(long = "max-size", default_value_t = 6)]
        max_size: u32,
        /// Even dimensions for the universality residuals (default 4N, 4N+2, 4N+4).
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<i64>>,
        /// Einstein scales for the sphere suite.
        #[arg(long, allow_hyphen_values = true, default_value = "1,2,-1,5/7")]
        lambdas: String,
        /// Largest N for the Einstein scaling check.
        #[arg(long = "einstein-max-N", default_value_t = 6)]
        einstein_max_n: u32,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<qrecur_core::Error> for Failure {
    fn from(e: qrecur_core::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rpoly { index, eval, format } => cmd_rpoly(&index, eval.as_deref(), format),
        Command::Formula { n, source, format, out } => cmd_formula(n, source, format, out),
        Command::Verify {
            suite,
            max_n,
            max_size,
            dims,
            lambdas,
            einstein_max_n,
        } => cmd_verify(suite, max_n, max_size, dims, &lambdas, einstein_max_n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn cmd_rpoly(index: &str, eval: Option<&str>, format: Format) -> CmdResult {
    let index: Composition = index.parse().map_err(|e| usage(format!("{e}")))?;
    if index.size() > RPOLY_MAX_SIZE {
        return Err(usage(format!("|I| must be at most {RPOLY_MAX_SIZE}")));
    }
    let x = eval
        .map(|s| {
            s.parse::<Rational>()
                .map_err(|e| usage(format!("bad --eval value: {e}")))
        })
        .transpose()?;
    let mut table = RTable::new();
    let r = table.build_r(&index)?;
    if let Some(x) = x {
        println!("{}", r.poly.eval(&x));
        return Ok(());
    }
    let k = index.size() as i64;
    let points: Vec<Rational> = HalfIntegerSet::new(index.size())
        .points()
        .iter()
        .cloned()
        .chain((-k..=2).map(Rational::from_int))
        .collect();
    let values: Vec<(Rational, Rational)> = points.iter().map(|x| (x.clone(), r.poly.eval(x))).collect();
    match format {
        Format::Text | Format::Latex => {
            let body = if matches!(format, Format::Latex) {
                r.poly.to_latex()
            } else {
                r.poly.to_text()
            };
            println!("r_({index}) = {body}");
            for (x, v) in &values {
                println!("r_({index})({x}) = {v}");
            }
        }
        Format::Json => {
            let json = serde_json::json!({
                "I": index,
                "coefficients": r.poly.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "values": values
                    .iter()
                    .map(|(x, v)| serde_json::json!({"x": x.to_string(), "value": v.to_string()}))
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&json).expect("json"));
        }
    }
    Ok(())
}

fn render(f: &RecursiveFormula, format: Format) -> String {
    match format {
        Format::Text => f.to_text(),
        Format::Latex => f.to_latex(),
        Format::Json => f.to_json(),
    }
}

fn cmd_formula(n: u32, source: SourceArg, format: Format, out: Option<PathBuf>) -> CmdResult {
    if n < 2 {
        return Err(usage("--N must be at least 2"));
    }
    let f = match source {
        SourceArg::Rpoly => assemble_formula(&mut RTable::new(), n)?,
        SourceArg::Residue => {
            if n > RESIDUE_MAX_N {
                return Err(usage(format!("the residue route supports N <= {RESIDUE_MAX_N}")));
            }
            ResidueEngine::new().critical_formula(n)?
        }
    };
    let text = render(&f, format);
    match out {
        Some(path) => fs::write(&path, text + "\n")
            .map_err(|e| Failure::Check(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_verify(
    suite: Suite,
    max_n: Option<u32>,
    max_size: u32,
    dims: Option<Vec<i64>>,
    lambdas: &str,
    einstein_max_n: u32,
) -> CmdResult {
    let lambdas = verify::parse_rationals(lambdas).map_err(|e| usage(e.to_string()))?;
    if lambdas.iter().any(Rational::is_zero) {
        return Err(usage("--lambdas must be nonzero"));
    }
    let default_n = match suite {
        Suite::Formulas | Suite::Spheres => 8,
        Suite::Cross => 5,
        Suite::Universality => 4,
        Suite::Alpha => 20,
        Suite::Closed => 14,
        Suite::Conjectures => 12,
        Suite::Tables => 0,
    };
    let n_max = max_n.unwrap_or(default_n);
    if suite != Suite::Tables && n_max < 2 {
        return Err(usage("--max-N must be at least 2"));
    }
    if suite == Suite::Cross && n_max > RESIDUE_MAX_N {
        return Err(usage(format!("the residue route supports N <= {RESIDUE_MAX_N}")));
    }
    if let Some(d) = &dims {
        if let Some(bad) = d.iter().find(|&&n| n % 2 != 0 || n < 4 * n_max as i64) {
            return Err(usage(format!("dimension {bad} must be even and at least 4 * max-N")));
        }
    }
    if max_size < 1 {
        return Err(usage("--max-size must be at least 1"));
    }

    let mut table = RTable::new();
    let reports: Vec<Report> = match suite {
        Suite::Tables => vec![verify::tables(&mut table)?],
        Suite::Alpha => verify::alpha(n_max, n_max - 1)?,
        Suite::Formulas => verify::formulas(&mut table, n_max)?,
        Suite::Spheres => verify::spheres(&mut table, n_max, einstein_max_n.min(n_max), &lambdas)?,
        Suite::Cross => vec![verify::cross(&mut table, &mut ResidueEngine::new(), n_max)?],
        Suite::Universality => {
            let dims_fn = move |order: u32| dims.clone().unwrap_or_else(|| verify::default_dims(order));
            vec![verify::universality(&mut ResidueEngine::new(), n_max, &dims_fn)?]
        }
        Suite::Closed => vec![verify::closed_forms(&mut table, n_max)?],
        Suite::Conjectures => verify::conjectures(&mut table, max_size, n_max - 1)?,
    };

    for r in &reports {
        println!("{r}");
    }
    let (ok, conjecture_message) = summarize(&reports);
    if let Some(msg) = conjecture_message {
        eprintln!("{msg}");
    }
    if !ok {
        return Err(Failure::Check("verification failed".into()));
    }
    Ok(())
}

/// Whether every check passed, and the distinguished message when an
/// unproven identity fails.
fn summarize(reports: &[Report]) -> (bool, Option<String>) {
    let conjectures: Vec<&str> = reports
        .iter()
        .filter(|r| r.conjectural && !r.all_passed())
        .map(|r| r.title.as_str())
        .collect();
    let ok = reports.iter().all(Report::all_passed);
    let msg = (!conjectures.is_empty()).then(|| {
        format!(
            "CONJECTURE FAILURE: an unproven identity does not hold ({}). This is a finding about the identities, not an engine defect.",
            conjectures.join("; ")
        )
    });
    (ok, msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjecture_failures_are_distinguished() {
        let mut proven = Report::new("proven");
        proven.pass("a");
        let mut conj = Report::conjectural("conj");
        conj.pass("b");
        assert_eq!(summarize(&[proven.clone(), conj.clone()]), (true, None));

        conj.fail("c", "counterexample");
        let (ok, msg) = summarize(&[proven.clone(), conj]);
        assert!(!ok);
        assert!(msg.unwrap().starts_with("CONJECTURE FAILURE"));

        proven.fail("d", "diff");
        assert_eq!(summarize(&[proven]), (false, None));
    }
}
