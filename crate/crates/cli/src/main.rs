//! `stepval`: evaluate step functions and their exact functionals, run the
//! property suites, and compute n-dimensional ball-overlap ratios.
//!
//! Every subcommand emits one JSON object on stdout. Exit codes: 0 on
//! success, 1 when a property check fails, 2 on usage or parse errors.

use std::time::Instant;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use stepval_core::cesaro::{cesaro_eval, cesaro_limit_left, cesaro_limit_right};
use stepval_core::checker::{run_all, run_suite, GenConfig, Report, SuiteId};
use stepval_core::rational::Rational;
use stepval_core::text::{parse_rational, parse_stepfn, parse_valuation, DslError};
use stepval_core::ultra::{ultralimit, UltrafilterTag, Ultralimit};
use stepval_core::valuation::{banach_limit, evaluate};
use stepval_ndim::{
    overlap_ratio_caps, overlap_ratio_layers, overlap_ratio_mc, DEFAULT_LAYER_TOL,
};

#[derive(Parser)]
#[command(
    name = "stepval",
    about = "Exact functionals on eventually periodic rational step functions",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

impl SideArg {
    fn tag(self) -> UltrafilterTag {
        match self {
            SideArg::Right => UltrafilterTag::right(),
            SideArg::Left => UltrafilterTag::left(),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            SideArg::Right => "right",
            SideArg::Left => "left",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RatioMethod {
    Caps,
    Layers,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at a point, or dump (x, u(x)) samples
    Eval {
        /// Function expression, e.g. "periodic(2; [0,1)=1, [1,2)=0)"
        function: String,
        /// Point to evaluate at (rational, e.g. "-3/2")
        #[arg(long)]
        at: Option<String>,
        /// Emit samples over "start,end,step" instead of a single value
        #[arg(long, value_name = "START,END,STEP")]
        dump_samples: Option<String>,
    },
    /// Cesàro-like average at a point, or its limit with a certificate
    Cesaro {
        function: String,
        #[arg(long, conflicts_with = "limit")]
        at: Option<String>,
        /// Return the limit at infinity plus its convergence certificate
        #[arg(long)]
        limit: bool,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Exact Banach limit
    Blim {
        function: String,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Ultralimit: determined value or the exact candidate set
    Ultralimit {
        function: String,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Evaluate a valuation spec on a function
    Valuate {
        function: String,
        /// e.g. "blim(id)", "right(blim(clamp(-1,1)))",
        /// "series(poly(1/2):1/2; tail=1/2)"
        #[arg(long)]
        spec: String,
    },
    /// Run a property suite (or all of them)
    Check {
        /// Suite id or "all"
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 200)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Valuation spec for the valuation suites (default "blim(id)")
        #[arg(long)]
        spec: Option<String>,
    },
    /// Ball-overlap ratio |B_x(t) ∩ B_x(0)| / |B_x(0)|
    NdimRatio {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        x: f64,
        /// Displacement vector, comma separated: "v1,v2,..."
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value_t = RatioMethod::Caps)]
        method: RatioMethod,
        /// Absolute tolerance for the layers method
        #[arg(long)]
        tol: Option<f64>,
        /// Sample count for the Monte Carlo method
        #[arg(long, default_value_t = 1_000_000)]
        points: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// The one JSON object every subcommand prints.
#[derive(Serialize, Default)]
struct Output {
    command: &'static str,
    inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_bound: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    determined: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidates: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reports: Option<Value>,
    elapsed_ms: u64,
}

struct Failure {
    kind: &'static str,
    message: String,
    line: Option<usize>,
    col: Option<usize>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: "usage",
            message: message.into(),
            line: None,
            col: None,
        }
    }

    fn evaluation(message: impl Into<String>) -> Self {
        Self {
            kind: "evaluation",
            message: message.into(),
            line: None,
            col: None,
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        let pos = e.pos();
        Self {
            kind: "parse",
            message: e.to_string(),
            line: Some(pos.line),
            col: Some(pos.col),
        }
    }
}

macro_rules! from_eval_error {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::evaluation(e.to_string())
            }
        }
    )*};
}

from_eval_error!(
    stepval_core::stepfn::StepFnError,
    stepval_core::valuation::ValuationError,
    stepval_core::checker::CheckerError,
    stepval_ndim::NdimError
);

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(
                e.kind(),
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion
            ) {
                print!("{e}");
                std::process::exit(0);
            }
            emit_error(
                "usage",
                &Failure::usage(e.render().to_string().trim().to_string()),
            );
            std::process::exit(2);
        }
    };
    let started = Instant::now();
    let (command_name, outcome) = dispatch(cli.command);
    match outcome {
        Ok(mut out) => {
            out.elapsed_ms = started.elapsed().as_millis() as u64;
            println!("{}", serde_json::to_string(&out).expect("output serializes"));
            let failed = out.passed == Some(false);
            std::process::exit(if failed { 1 } else { 0 });
        }
        Err(failure) => {
            emit_error(command_name, &failure);
            std::process::exit(2);
        }
    }
}

fn emit_error(command: &str, failure: &Failure) {
    let mut error = serde_json::Map::new();
    error.insert("kind".into(), json!(failure.kind));
    error.insert("message".into(), json!(failure.message));
    if let Some(line) = failure.line {
        error.insert("line".into(), json!(line));
        error.insert("col".into(), json!(failure.col));
    }
    println!(
        "{}",
        json!({ "command": command, "error": Value::Object(error) })
    );
}

fn dispatch(cmd: Command) -> (&'static str, Result<Output, Failure>) {
    match cmd {
        Command::Eval {
            function,
            at,
            dump_samples,
        } => ("eval", cmd_eval(&function, at.as_deref(), dump_samples.as_deref())),
        Command::Cesaro {
            function,
            at,
            limit,
            side,
        } => ("cesaro", cmd_cesaro(&function, at.as_deref(), limit, side)),
        Command::Blim { function, side } => ("blim", cmd_blim(&function, side)),
        Command::Ultralimit { function, side } => ("ultralimit", cmd_ultralimit(&function, side)),
        Command::Valuate { function, spec } => ("valuate", cmd_valuate(&function, &spec)),
        Command::Check {
            suite,
            samples,
            seed,
            spec,
        } => ("check", cmd_check(&suite, samples, seed, spec.as_deref())),
        Command::NdimRatio {
            dim,
            x,
            t,
            method,
            tol,
            points,
            seed,
        } => ("ndim-ratio", cmd_ndim_ratio(dim, x, &t, method, tol, points, seed)),
    }
}

fn rat_str(r: &Rational) -> String {
    r.to_string()
}

fn cmd_eval(
    function: &str,
    at: Option<&str>,
    dump_samples: Option<&str>,
) -> Result<Output, Failure> {
    let u = parse_stepfn(function)?;
    let mut out = Output {
        command: "eval",
        exact: true,
        ..Output::default()
    };
    match (at, dump_samples) {
        (Some(x), None) => {
            let x = parse_rational(x)?;
            out.inputs = json!({ "fn": u.to_string(), "at": rat_str(&x) });
            out.value = Some(rat_str(&u.eval(&x)));
        }
        (None, Some(range)) => {
            let parts: Vec<&str> = range.split(',').collect();
            if parts.len() != 3 {
                return Err(Failure::usage("--dump-samples expects START,END,STEP"));
            }
            let start = parse_rational(parts[0].trim())?;
            let end = parse_rational(parts[1].trim())?;
            let step = parse_rational(parts[2].trim())?;
            if !step.is_positive() || end < start {
                return Err(Failure::usage(
                    "--dump-samples needs START <= END and STEP > 0",
                ));
            }
            let count = ((&end - &start) / &step).to_integer();
            if count.to_u64().is_none_or(|c| c > 100_000) {
                return Err(Failure::usage("--dump-samples would emit too many points"));
            }
            out.inputs = json!({
                "fn": u.to_string(),
                "start": rat_str(&start),
                "end": rat_str(&end),
                "step": rat_str(&step),
            });
            let mut samples = Vec::new();
            let mut x = start;
            while x <= end {
                samples.push((rat_str(&x), rat_str(&u.eval(&x))));
                x += &step;
            }
            out.samples = Some(samples);
        }
        _ => {
            return Err(Failure::usage(
                "eval needs exactly one of --at or --dump-samples",
            ))
        }
    }
    Ok(out)
}

fn cmd_cesaro(
    function: &str,
    at: Option<&str>,
    limit: bool,
    side: SideArg,
) -> Result<Output, Failure> {
    let u = parse_stepfn(function)?;
    let mut out = Output {
        command: "cesaro",
        exact: true,
        ..Output::default()
    };
    if limit {
        let lim = match side {
            SideArg::Right => cesaro_limit_right(&u),
            SideArg::Left => cesaro_limit_left(&u),
        };
        out.inputs = json!({ "fn": u.to_string(), "limit": true, "side": side.as_str() });
        out.value = Some(rat_str(&lim.mean));
        out.error_bound = Some(json!({
            "certificate_numerator": rat_str(&lim.certificate_numerator),
            "valid_from": rat_str(&lim.valid_from),
        }));
    } else {
        let x = at.ok_or_else(|| Failure::usage("cesaro needs --at X or --limit"))?;
        let x = parse_rational(x)?;
        out.inputs = json!({ "fn": u.to_string(), "at": rat_str(&x) });
        out.value = Some(rat_str(&cesaro_eval(&u, &x)));
    }
    Ok(out)
}

fn cmd_blim(function: &str, side: SideArg) -> Result<Output, Failure> {
    let u = parse_stepfn(function)?;
    let value = banach_limit(&u, &side.tag());
    Ok(Output {
        command: "blim",
        inputs: json!({ "fn": u.to_string(), "side": side.as_str() }),
        value: Some(rat_str(&value)),
        exact: true,
        ..Output::default()
    })
}

fn cmd_ultralimit(function: &str, side: SideArg) -> Result<Output, Failure> {
    let u = parse_stepfn(function)?;
    let mut out = Output {
        command: "ultralimit",
        inputs: json!({ "fn": u.to_string(), "side": side.as_str() }),
        exact: true,
        ..Output::default()
    };
    match ultralimit(&u, &side.tag()) {
        Ultralimit::Determined(l) => {
            out.determined = Some(true);
            out.value = Some(rat_str(&l));
        }
        Ultralimit::Undetermined(cs) => {
            out.determined = Some(false);
            out.candidates = Some(cs.iter().map(rat_str).collect());
        }
    }
    Ok(out)
}

fn cmd_valuate(function: &str, spec_text: &str) -> Result<Output, Failure> {
    let u = parse_stepfn(function)?;
    let spec = parse_valuation(spec_text)?;
    let ev = evaluate(&spec, &u)?;
    Ok(Output {
        command: "valuate",
        inputs: json!({ "fn": u.to_string(), "spec": spec.to_string() }),
        value: Some(rat_str(&ev.value)),
        exact: ev.truncation_error.is_zero(),
        error_bound: Some(json!(rat_str(&ev.truncation_error))),
        ..Output::default()
    })
}

fn cmd_check(
    suite: &str,
    samples: u32,
    seed: u64,
    spec_text: Option<&str>,
) -> Result<Output, Failure> {
    let spec = spec_text.map(parse_valuation).transpose()?;
    let cfg = GenConfig {
        seed,
        samples,
        ..GenConfig::default()
    };
    let reports: Vec<Report> = if suite == "all" {
        run_all(&cfg, spec.as_ref())?
    } else {
        let id: SuiteId = suite.parse()?;
        vec![run_suite(id, &cfg, spec.as_ref())?]
    };
    let passed = reports.iter().all(|r| r.passed);
    let counterexample = reports
        .iter()
        .find_map(|r| r.counterexample.as_ref())
        .map(|ce| serde_json::to_value(ce).expect("counterexample serializes"));
    Ok(Output {
        command: "check",
        inputs: json!({
            "suite": suite,
            "samples": samples,
            "spec": spec.map(|s| s.to_string()).unwrap_or_else(|| "blim(id)".into()),
        }),
        passed: Some(passed),
        exact: true,
        counterexample,
        seed: Some(seed),
        reports: Some(serde_json::to_value(&reports).expect("reports serialize")),
        ..Output::default()
    })
}

fn cmd_ndim_ratio(
    dim: usize,
    x: f64,
    t: &str,
    method: RatioMethod,
    tol: Option<f64>,
    points: u64,
    seed: u64,
) -> Result<Output, Failure> {
    let t: Vec<f64> = t
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Failure::usage(format!("bad component in --t: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if t.len() != dim {
        return Err(Failure::usage(format!(
            "--t has {} components, --dim is {dim}",
            t.len()
        )));
    }
    let t_norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut out = Output {
        command: "ndim-ratio",
        exact: false,
        ..Output::default()
    };
    let method_name;
    match method {
        RatioMethod::Caps => {
            method_name = "caps";
            out.ratio = Some(overlap_ratio_caps(dim, x, t_norm)?);
        }
        RatioMethod::Layers => {
            method_name = "layers";
            let tol = tol.unwrap_or(DEFAULT_LAYER_TOL);
            out.ratio = Some(overlap_ratio_layers(dim, x, t_norm, tol)?);
            out.error_bound = Some(json!(tol));
        }
        RatioMethod::Mc => {
            method_name = "mc";
            let est = overlap_ratio_mc(dim, x, t_norm, points, seed)?;
            out.ratio = Some(est.value);
            out.error_bound = Some(json!(est.stderr));
            out.seed = Some(seed);
        }
    }
    out.inputs = json!({
        "dim": dim,
        "x": x,
        "t": t,
        "method": method_name,
    });
    Ok(out)
}
