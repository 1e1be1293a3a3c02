use serde::Serialize;
use squeeze_cert::bounds::BoundReport;
use squeeze_cert::numerics::fmt17;
use squeeze_cert::verify::{KappaProbeReport, SuiteReport};

use crate::args::{ClassArg, Cli, Command, DimRange, Format, Suite};

/// The invocation, echoed into every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<DimRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<String>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let mut c = RunConfig {
            command: "",
            n: None,
            n_range: None,
            spec: None,
            point: None,
            class: None,
            suite: None,
            family: None,
            trials: None,
            budget: None,
            samples: cli.samples,
            seed: cli.seed,
            tol: cli.tol,
            format: cli.format,
            out: cli.out.as_ref().map(|p| p.display().to_string()),
            threads: cli.threads,
        };
        match &cli.command {
            Command::Constants { n_max } => {
                c.command = "constants";
                c.n = Some(*n_max as usize);
            }
            Command::Bound { spec, class, point } => {
                c.command = "bound";
                c.spec = Some(spec.display().to_string());
                c.class = *class;
                c.point = point.clone();
            }
            Command::Verify { suite, n, trials } => {
                c.command = "verify";
                c.suite = Some(*suite);
                c.n_range = Some(*n);
                c.trials = Some(*trials);
            }
            Command::ProbeKappa { family, n, budget, class } => {
                c.command = "probe-kappa";
                c.family = Some(serde_json::to_value(family).expect("family serializes").as_str().unwrap_or("").to_string());
                c.n = Some(*n);
                c.budget = Some(*budget);
                c.class = *class;
            }
        }
        c
    }
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

/// `{schema, tool, run_config, report}`.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    tool: Tool,
    run_config: RunConfig,
    report: &'a T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(run_config: RunConfig, report: &'a T) -> Self {
        Envelope {
            schema: squeeze_cert::SCHEMA,
            tool: Tool { name: "squeeze-cert", version: env!("CARGO_PKG_VERSION") },
            run_config,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn bound_csv(r: &BoundReport) -> String {
    let gap = r.margins.normalizer.row_gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let class = serde_json::to_value(r.class).expect("class serializes");
    format!(
        "n,class,certified_s,certified_s_hat,witness_s,witness_s_hat,alpha_max,min_row_gap\n{},{},{},{},{},{},{},{}\n",
        r.n,
        class.as_str().unwrap_or(""),
        fmt17(r.certified_universal_s),
        fmt17(r.certified_universal_s_hat),
        opt(r.witness_bound_s),
        opt(r.witness_bound_s_hat),
        fmt17(r.margins.normalizer.alpha_max),
        if gap.is_finite() { fmt17(gap) } else { String::new() },
    )
}

pub fn suite_csv(r: &SuiteReport) -> String {
    let mut out = String::from("suite,check,n,trials,violations,worst_margin\n");
    for c in &r.checks {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.suite,
            c.name,
            c.n.map(|n| n.to_string()).unwrap_or_default(),
            c.trials,
            c.violations,
            if c.worst_margin.is_finite() { fmt17(c.worst_margin) } else { String::new() },
        ));
    }
    out
}

pub fn probe_csv(r: &KappaProbeReport) -> String {
    let mut out = String::from("index,params,witness_s,witness_s_hat,error\n");
    for m in &r.members {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            m.index,
            quote(&m.params.to_string()),
            opt(m.witness_s),
            opt(m.witness_s_hat),
            quote(m.error.as_deref().unwrap_or("")),
        ));
    }
    out
}
