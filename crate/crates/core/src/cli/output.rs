use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering};

use rug::Complex;
use serde_json::{json, Value};

use super::{
    CommandKind, ConstantName, OutputFormat, RunConfiguration, EXIT_INCONCLUSIVE, EXIT_INTERRUPTED, EXIT_MISMATCH,
    EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE,
};
use crate::bailey::{
    chain_step, parse_monomial, verify_pair, BaileyPair, CandidateSearch, ChainParameters, FormalSeries, Outcome,
    PairDefinition, VerificationReport,
};
use crate::error::Error;
use crate::limits::{self, float_text, ConvergenceReport, RegularizationReport};
use crate::qcore::QMonomial;

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(EXIT_USAGE, format!("write failed: {e}"))
    }
}

type Exit = std::result::Result<i32, Failure>;

pub(super) fn dispatch(config: &RunConfiguration, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send), interrupt: &AtomicBool) -> i32 {
    let mut file;
    let out: &mut dyn Write = match &config.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };
    let result = match config.command {
        CommandKind::PairVerify => pair_verify(config, out, stderr),
        CommandKind::PairChain => pair_chain(config, out, stderr),
        CommandKind::Lvalue => lvalue(config, out),
        CommandKind::Constant if config.constant == Some(ConstantName::Gamma) => gamma(config, out),
        CommandKind::Constant => lvalue(config, out),
        CommandKind::Table => table(config, out, interrupt),
    };
    let flushed = out.flush();
    match result {
        Ok(code) => {
            if let Err(e) = flushed {
                let _ = writeln!(stderr, "error: write failed: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn load(config: &RunConfiguration) -> Result<PairDefinition, Failure> {
    let path = config.definition.as_deref().expect("pair commands carry a definition path");
    PairDefinition::load(path).map_err(|e| Failure(EXIT_USAGE, format!("{}:{e}", path.display())))
}

/// 0 when some candidate verifies, else 3 when any is inconclusive, else 2.
fn search_code<'a>(outcomes: impl IntoIterator<Item = &'a Outcome>) -> i32 {
    let mut any_inconclusive = false;
    let mut any = false;
    for o in outcomes {
        any = true;
        match o {
            Outcome::Verified => return EXIT_OK,
            Outcome::Inconclusive { .. } => any_inconclusive = true,
            Outcome::Mismatch { .. } => {}
        }
    }
    if any_inconclusive || !any {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_MISMATCH
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::Verified => "verified".into(),
        Outcome::Mismatch { n, power: Some(p) } => format!("mismatch at n = {n}, first differing power q^{p}"),
        Outcome::Mismatch { n, power: None } => format!("mismatch at n = {n}"),
        Outcome::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

fn report_json(a: &QMonomial, rep: &VerificationReport) -> Value {
    let mut v = serde_json::to_value(rep).expect("verification reports serialize");
    v["a"] = Value::String(a.to_string());
    v
}

fn search_json(search: &CandidateSearch) -> Value {
    json!({
        "validated": search.validated().map(|a| a.to_string()),
        "candidates": search.reports.iter().map(|(a, r)| report_json(a, r)).collect::<Vec<_>>(),
    })
}

fn write_report_text(out: &mut dyn Write, a: &QMonomial, rep: &VerificationReport) -> io::Result<()> {
    writeln!(out, "a = {a}: {} ({:?}, {}, n <= {})", outcome_text(&rep.outcome), rep.relation, rep.algebra, rep.depth)
}

fn pair_verify(config: &RunConfiguration, out: &mut dyn Write, _stderr: &mut dyn Write) -> Exit {
    let def = load(config)?;
    let search = def.verify(config.depth, config.truncation_order)?;
    match config.format {
        OutputFormat::Json => {
            let mut v = search_json(&search);
            v["pair"] = Value::String(def.name.clone());
            writeln!(out, "{v}")?;
        }
        OutputFormat::Csv => {
            writeln!(out, "a,status,n,power")?;
            for (a, rep) in &search.reports {
                let (status, n, p) = match &rep.outcome {
                    Outcome::Verified => ("verified", String::new(), String::new()),
                    Outcome::Mismatch { n, power } => {
                        ("mismatch", n.to_string(), power.map(|p| p.to_string()).unwrap_or_default())
                    }
                    Outcome::Inconclusive { .. } => ("inconclusive", String::new(), String::new()),
                };
                writeln!(out, "{a},{status},{n},{p}")?;
            }
        }
        OutputFormat::Text => {
            writeln!(out, "pair {}", def.name)?;
            for (a, rep) in &search.reports {
                write_report_text(out, a, rep)?;
            }
        }
    }
    Ok(search_code(search.reports.iter().map(|(_, r)| &r.outcome)))
}

fn pair_chain(config: &RunConfiguration, out: &mut dyn Write, _stderr: &mut dyn Write) -> Exit {
    let def = load(config)?;
    let monomial = |text: &Option<String>, label: &str| {
        parse_monomial(text.as_deref().unwrap_or("-1")).map_err(|e| Failure(EXIT_USAGE, format!("{label}: {e}")))
    };
    let params = ChainParameters::new(monomial(&config.rho1, "rho1")?, monomial(&config.rho2, "rho2")?)?;
    let steps = config.steps.unwrap_or(1);
    let alg = FormalSeries::new(config.truncation_order.unwrap_or(def.order));
    let depth = config.depth.unwrap_or(def.depth);

    // per candidate, the worst outcome over the input pair and every step
    let mut per_candidate = Vec::new();
    let mut rows = Vec::new();
    for a in &def.a_candidates {
        let mut pair: BaileyPair<FormalSeries> = def.pair(a);
        let mut worst = Outcome::Verified;
        for step in 0..=steps {
            if step > 0 {
                pair = chain_step(&pair, &params)?;
            }
            let rep = verify_pair(&alg, &pair, depth)?;
            worst = match (&worst, &rep.outcome) {
                (Outcome::Mismatch { .. }, _) => worst,
                (_, Outcome::Mismatch { .. }) => rep.outcome.clone(),
                (Outcome::Inconclusive { .. }, _) => worst,
                (_, o) => o.clone(),
            };
            rows.push((a.clone(), step, rep));
        }
        per_candidate.push(worst);
    }

    match config.format {
        OutputFormat::Json => {
            let v = json!({
                "pair": def.name,
                "rho1": params.rho1().to_string(),
                "rho2": params.rho2().to_string(),
                "steps": rows.iter().map(|(a, step, rep)| {
                    let mut v = report_json(a, rep);
                    v["step"] = json!(step);
                    v
                }).collect::<Vec<_>>(),
            });
            writeln!(out, "{v}")?;
        }
        OutputFormat::Csv => {
            writeln!(out, "a,step,status,n,power")?;
            for (a, step, rep) in &rows {
                let (status, n, p) = match &rep.outcome {
                    Outcome::Verified => ("verified", String::new(), String::new()),
                    Outcome::Mismatch { n, power } => {
                        ("mismatch", n.to_string(), power.map(|p| p.to_string()).unwrap_or_default())
                    }
                    Outcome::Inconclusive { .. } => ("inconclusive", String::new(), String::new()),
                };
                writeln!(out, "{a},{step},{status},{n},{p}")?;
            }
        }
        OutputFormat::Text => {
            writeln!(out, "pair {} under rho1 = {}, rho2 = {}", def.name, params.rho1(), params.rho2())?;
            for (a, step, rep) in &rows {
                write!(out, "step {step}: ")?;
                write_report_text(out, a, rep)?;
            }
        }
    }
    Ok(search_code(&per_candidate))
}

fn tolerance_code(config: &RunConfiguration, err: &rug::Float) -> i32 {
    match config.tolerance {
        Some(t) if err.is_nan() || err.to_f64() > t => EXIT_TOLERANCE,
        _ => EXIT_OK,
    }
}

fn complex_text(z: &Complex) -> String {
    if z.imag().is_zero() {
        float_text(z.real())
    } else {
        let im = float_text(z.imag());
        let sign = if im.starts_with('-') { "" } else { "+" };
        format!("{}{sign}{im}i", float_text(z.real()))
    }
}

fn convergence_json(rep: &ConvergenceReport) -> Value {
    let mut v = rep.to_json();
    v["unscaled"] = limits::complex_json(&rep.unscaled());
    v
}

fn lvalue(config: &RunConfiguration, out: &mut dyn Write) -> Exit {
    let (chi, s) = config.target()?;
    let ctx = config.context()?;
    let schedule = config.schedule()?;
    let mut rep = limits::outer_limit(&chi, &s, &schedule, &config.extrapolation(), &ctx)?;
    if !config.timings {
        rep = rep.without_timings();
    }
    match config.format {
        OutputFormat::Json => writeln!(out, "{}", convergence_json(&rep))?,
        OutputFormat::Csv => write!(out, "{}", rep.to_csv())?,
        OutputFormat::Text => {
            writeln!(out, "L/sqrt(pi)  {}", complex_text(&rep.extrapolated))?;
            writeln!(out, "L           {}", complex_text(&rep.unscaled()))?;
            writeln!(out, "err_est     {}", float_text(&rep.err_est))?;
            writeln!(out, "weight      {}", rep.weight)?;
            writeln!(out, "s           {}", rep.s)?;
            writeln!(out, "method      {}", rep.method)?;
            writeln!(out, "precision   {} bits", rep.precision_bits)?;
            writeln!(out, "schedule    {:?}", schedule)?;
        }
    }
    Ok(tolerance_code(config, &rep.err_est))
}

fn gamma(config: &RunConfiguration, out: &mut dyn Write) -> Exit {
    let ctx = config.context()?;
    let schedule = config.schedule()?;
    let grid = limits::default_delta_grid();
    let mut rep: RegularizationReport = limits::euler_mascheroni_regularized(&grid, &schedule, &config.extrapolation(), &ctx)?;
    if !config.timings {
        rep.runs = rep.runs.into_iter().map(ConvergenceReport::without_timings).collect();
    }
    match config.format {
        OutputFormat::Json => {
            let mut v = rep.to_json();
            v["gamma"] = limits::complex_json(&rep.gamma());
            writeln!(out, "{v}")?;
        }
        OutputFormat::Csv => write!(out, "{}", rep.to_csv())?,
        OutputFormat::Text => {
            writeln!(out, "gamma/sqrt(pi)  {}", complex_text(&rep.extrapolated_gamma_over_sqrt_pi))?;
            writeln!(out, "gamma           {}", complex_text(&rep.gamma()))?;
            writeln!(out, "err_est         {}", float_text(&rep.err_est))?;
            let deltas: Vec<String> = rep.delta_grid.iter().map(|d| d.to_string()).collect();
            writeln!(out, "delta grid      {}", deltas.join(", "))?;
            writeln!(out, "method          {} per delta, polynomial in delta", config.extrapolation())?;
        }
    }
    Ok(tolerance_code(config, &rep.err_est))
}

fn table(config: &RunConfiguration, out: &mut dyn Write, interrupt: &AtomicBool) -> Exit {
    let (chi, s) = config.target()?;
    let ctx = config.context()?;
    let schedule = config.schedule()?;
    let accel = config.extrapolation().clamped(schedule.len());
    let format = config.format;
    if format == OutputFormat::Csv {
        writeln!(out, "{}", limits::CSV_HEADER)?;
        out.flush()?;
    }
    let mut write_error = None;
    let result = limits::outer_limit_streaming(&chi, &s, &schedule, &accel, &ctx, |row| {
        let mut record = row.record.clone();
        if !config.timings {
            record.elapsed = std::time::Duration::ZERO;
        }
        let line = match format {
            OutputFormat::Csv => limits::record_csv(&record),
            _ => limits::record_line(&record),
        };
        if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
            write_error = Some(e);
            return ControlFlow::Break(());
        }
        if interrupt.load(Ordering::SeqCst) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let Some(rep) = result else {
        return Ok(EXIT_INTERRUPTED);
    };
    match format {
        OutputFormat::Csv => writeln!(out, "{}", limits::extrapolated_csv(&rep))?,
        _ => writeln!(out, "{}", limits::extrapolated_line(&rep))?,
    }
    Ok(tolerance_code(config, &rep.err_est))
}
