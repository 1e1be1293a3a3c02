mod args;
mod output;

use std::process::ExitCode;

use clap::Parser;
use squeeze_cert::bounds::{certify, CertifyConfig};
use squeeze_cert::domains::DomainSpec;
use squeeze_cert::numerics::{constants_csv, universal_bounds, CVector, Complex64};
use squeeze_cert::verify::{kappa_probe, suite_lemmas, suite_star, suite_strictness, SuiteConfig, SuiteReport};
use squeeze_cert::{fixtures, Error};

use args::{Cli, Command, Format, Suite};
use output::{bound_csv, probe_csv, suite_csv, Envelope, RunConfig};

const EXIT_FAIL: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Why a run stopped: bad input (64) or a failed check or pipeline stage (2).
enum Failure {
    Usage(String),
    Pipeline(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Pipeline(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok((text, passed)) => {
            if let Err(e) = emit(&cli, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Pipeline(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Rendered output and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let config = RunConfig::from_cli(cli);
    match &cli.command {
        Command::Constants { n_max } => {
            if !(2..=64).contains(n_max) {
                return Err(Failure::Usage(format!("--n-max must be in 2..=64, got {n_max}")));
            }
            let text = match cli.format {
                Format::Csv => constants_csv(*n_max)?,
                Format::Json => {
                    let rows = (2..=*n_max).map(universal_bounds).collect::<Result<Vec<_>, _>>()?;
                    Envelope::new(config, &rows).to_json()
                }
            };
            Ok((text, true))
        }
        Command::Bound { spec, class, point } => {
            let text = std::fs::read_to_string(spec)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", spec.display())))?;
            let mut d = DomainSpec::from_json(&text)?;
            if let Some(class) = class {
                d = d.with_class((*class).into()).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let point = match point {
                Some(p) => parse_point(p, d.dim())?,
                None => CVector::zeros(d.dim()),
            };
            let d = d.recentered(&point)?;
            let report = certify(&d, &certify_config(cli))?;
            let text = match cli.format {
                Format::Json => Envelope::new(config, &report).to_json(),
                Format::Csv => bound_csv(&report),
            };
            Ok((text, true))
        }
        Command::Verify { suite, n, trials } => {
            let dims = n.dims();
            let suite_config = SuiteConfig {
                trials: *trials,
                boundary_samples: cli.samples.unwrap_or(SuiteConfig::default().boundary_samples),
                tol: cli.tol.unwrap_or(SuiteConfig::default().tol),
                seed: cli.seed,
                ..SuiteConfig::default()
            };
            let run_suite = |s: Suite| -> Result<SuiteReport, Failure> {
                Ok(match s {
                    Suite::Star => suite_star(&dims, &suite_config)?,
                    Suite::Lemmas => suite_lemmas(&dims, &suite_config)?,
                    Suite::Strictness => {
                        let fixtures: Vec<_> =
                            fixtures::catalog()?.into_iter().filter(|(_, d)| dims.contains(&d.dim())).collect();
                        if fixtures.is_empty() {
                            return Err(Failure::Usage("no catalog fixture has a dimension in --n".into()));
                        }
                        suite_strictness(&fixtures, &certify_config(cli))?
                    }
                    Suite::All => unreachable!("expanded below"),
                })
            };
            let report = match suite {
                Suite::All => {
                    let parts = [Suite::Star, Suite::Lemmas, Suite::Strictness]
                        .into_iter()
                        .map(run_suite)
                        .collect::<Result<Vec<_>, _>>()?;
                    SuiteReport::combine("all", parts)
                }
                s => run_suite(*s)?,
            };
            let passed = report.passed();
            let text = match cli.format {
                Format::Json => Envelope::new(config, &report).to_json(),
                Format::Csv => suite_csv(&report),
            };
            Ok((text, passed))
        }
        Command::ProbeKappa { family, n, budget, class } => {
            if *budget == 0 {
                return Err(Failure::Usage("--budget must be at least 1".into()));
            }
            if *n < 2 {
                return Err(Failure::Usage(format!("--n must be at least 2, got {n}")));
            }
            let report = kappa_probe(*family, *n, *budget, class.map(Into::into), &certify_config(cli))?;
            let passed = report.passed();
            let text = match cli.format {
                Format::Json => Envelope::new(config, &report).to_json(),
                Format::Csv => probe_csv(&report),
            };
            Ok((text, passed))
        }
    }
}

fn certify_config(cli: &Cli) -> CertifyConfig {
    let defaults = CertifyConfig::default();
    CertifyConfig {
        seed: cli.seed,
        samples: cli.samples.unwrap_or(defaults.samples),
        tol: cli.tol.unwrap_or(defaults.tol),
        ..defaults
    }
}

/// `[[re, im], ...]` with one pair per coordinate.
fn parse_point(text: &str, n: usize) -> Result<CVector, Failure> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("--point expects [[re, im], ...]: {e}")))?;
    if pairs.len() != n {
        return Err(Failure::Usage(format!("--point has {} coordinates, the domain has {n}", pairs.len())));
    }
    Ok(pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
}
