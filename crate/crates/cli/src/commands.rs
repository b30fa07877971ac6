use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use gmcat::adjoint::{check_adjunction, witness_hat_unit_failure, FreeAlgebra, Mode};
use gmcat::catoperad::{validate_operad, CatOperad};
use gmcat::dalgebra::{underlying, validate_algebra};
use gmcat::dmulticat::{validate_multicat, DMulticat};
use gmcat::opmonad::checks::check_cartesian;
use gmcat::opmonad::{Monad, MonadElem};
use gmcat::report::{Check, Report};
use gmcat::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{load_algebra, load_multicat, load_operad};
use crate::{Cli, Command, Kind};

const SAMPLED_SQUARES: usize = 10;

#[derive(Debug, Serialize)]
struct Echo {
    command: String,
    inputs: Vec<String>,
    operad: String,
    truncate: usize,
    bound: usize,
    seed: u64,
    hat: bool,
    require_sigma_free: bool,
}

#[derive(Debug, Serialize)]
struct Output {
    command: Echo,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<Report>,
    #[serde(skip_serializing_if = "Value::is_null")]
    data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn echo(cli: &Cli) -> Echo {
    let path = |p: &Path| p.display().to_string();
    let (command, inputs, hat) = match &cli.command {
        Command::Validate { kind, path: p } => {
            let name = match kind {
                Kind::Operad => "validate operad",
                Kind::Multicat => "validate multicat",
                Kind::Algebra => "validate algebra",
            };
            (name, p.iter().map(|p| path(p)).collect(), false)
        }
        Command::Free { path: p, hom, hat } => {
            let mut inputs = vec![path(p)];
            inputs.extend(hom.iter().cloned());
            ("free", inputs, *hat)
        }
        Command::Underlying { path: p } => ("underlying", vec![path(p)], false),
        Command::CheckAdjunction { multicat, algebra, hat } => ("check-adjunction", vec![path(multicat), path(algebra)], *hat),
    };
    Echo {
        command: command.into(),
        inputs,
        operad: cli.operad.clone(),
        truncate: cli.truncate.unwrap_or(cli.bound),
        bound: cli.bound,
        seed: cli.seed,
        hat,
        require_sigma_free: cli.require_sigma_free,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Precondition(_) => 2,
        Error::BoundExceeded { .. } => 3,
        _ => 1,
    }
}

fn report_code(r: &Report) -> u8 {
    if r.any_failed() {
        1
    } else if r.any_bound_exceeded() {
        3
    } else {
        0
    }
}

/// Runs the command and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = execute(cli);
    let (code, output) = match result {
        Ok((report, data)) => (
            report_code(&report),
            Output {
                command: echo(cli),
                report: Some(report),
                data,
                error: None,
            },
        ),
        Err(e) => (
            error_code(&e),
            Output {
                command: echo(cli),
                report: None,
                data: Value::Null,
                error: Some(e.to_string()),
            },
        ),
    };
    let text = serde_json::to_string_pretty(&output).expect("output serializes");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    let shown = if cli.json { format!("{text}\n") } else { summary(&output) };
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().write_all(shown.as_bytes());
    code
}

fn summary(o: &Output) -> String {
    let mut out = String::new();
    if let Some(r) = &o.report {
        out.push_str(&r.summary());
    }
    if !o.data.is_null() {
        out.push_str(&serde_json::to_string_pretty(&o.data).expect("data serializes"));
        out.push('\n');
    }
    if let Some(e) = &o.error {
        out.push_str(&format!("error: {e}\n"));
    }
    out
}

fn operad(cli: &Cli) -> Result<CatOperad> {
    let truncate = cli.truncate.unwrap_or(cli.bound);
    if cli.bound == 0 {
        return Err(Error::Parse("the bound must be at least 1".into()));
    }
    if truncate < cli.bound {
        return Err(Error::Parse(format!("truncation {truncate} is below the bound {}", cli.bound)));
    }
    load_operad(&cli.operad, truncate)
}

fn monad(cli: &Cli) -> Result<Arc<Monad>> {
    let op = operad(cli)?;
    if op.max_level() < cli.bound {
        return Err(Error::Parse(format!("operad truncation {} is below the bound {}", op.max_level(), cli.bound)));
    }
    Ok(Arc::new(Monad::new(Arc::new(op))?))
}

fn sigma_free_check(op: &CatOperad) -> Check {
    let mut check = Check::new("sigma-free");
    match op.freeness_witness() {
        None => check.record(true, String::new),
        Some(w) => check.fail(w),
    }
    check
}

fn require_path(path: &Option<std::path::PathBuf>) -> Result<&Path> {
    path.as_deref().ok_or_else(|| Error::Parse("an input path is required".into()))
}

fn execute(cli: &Cli) -> Result<(Report, Value)> {
    match &cli.command {
        Command::Validate { kind: Kind::Operad, .. } => {
            let op = operad(cli)?;
            let mut report = validate_operad(&op);
            if cli.require_sigma_free {
                report.push(sigma_free_check(&op));
            }
            if report.is_valid() && op.is_sigma_free() {
                let monad = Monad::new(Arc::new(op))?;
                for j in 0..2 {
                    report.extend(check_cartesian(&monad, j, cli.seed, SAMPLED_SQUARES, cli.bound));
                }
            }
            Ok((report, Value::Null))
        }
        Command::Validate { kind: Kind::Multicat, path } => {
            let m = load_multicat(require_path(path)?, monad(cli)?, cli.bound)?;
            Ok((validate_multicat(&m), Value::Null))
        }
        Command::Validate { kind: Kind::Algebra, path } => {
            let a = load_algebra(require_path(path)?, monad(cli)?, cli.bound)?;
            Ok((validate_algebra(&a, cli.bound), Value::Null))
        }
        Command::Free { path, hom, hat } => free(cli, path, hom, *hat),
        Command::Underlying { path } => {
            let a = load_algebra(path, monad(cli)?, cli.bound)?;
            let mut report = validate_algebra(&a, cli.bound);
            if !report.is_valid() {
                return Ok((report, Value::Null));
            }
            let u = underlying(&a)?;
            let m = &u.multicat;
            report.extend(validate_multicat(m));
            let mut by_arity = BTreeMap::new();
            let morphisms: Vec<Value> = m
                .morphisms()
                .indices()
                .map(|f| {
                    *by_arity.entry(m.source(f).arity()).or_insert(0usize) += 1;
                    json!({
                        "label": m.morphisms().label(f).to_string(),
                        "target": m.objects().label(m.target(f)).to_string(),
                        "source": m.show_elem(m.source(f)),
                    })
                })
                .collect();
            let objects: Vec<String> = m.objects().labels().iter().map(|l| l.to_string()).collect();
            Ok((report, json!({ "objects": objects, "morphisms_by_arity": by_arity, "morphisms": morphisms })))
        }
        Command::CheckAdjunction { multicat, algebra, hat } => {
            let monad = monad(cli)?;
            let m = Arc::new(load_multicat(multicat, monad.clone(), cli.bound)?);
            let a = load_algebra(algebra, monad, cli.bound)?;
            let mode = if *hat { Mode::Provisional } else { Mode::Quotient };
            let report = check_adjunction(m.clone(), &a, cli.bound, mode);
            let data = if *hat {
                match witness_hat_unit_failure(m.clone(), cli.bound)? {
                    Some(w) => {
                        let quotient = FreeAlgebra::new(m, Mode::Quotient, cli.bound)?;
                        json!({
                            "witness": w.description,
                            "equivalent_in_quotient": quotient.equivalent(&w.unit_of_action, &w.action_on_unit)?,
                        })
                    }
                    None => json!({ "witness": null }),
                }
            } else {
                Value::Null
            };
            Ok((report, data))
        }
    }
}

/// Parses a comma-separated list of object names into a plain list.
fn object_list(m: &DMulticat, text: &str) -> Result<MonadElem<usize>> {
    let names: Vec<&str> = if text.trim().is_empty() { Vec::new() } else { text.split(',').map(str::trim).collect() };
    let entries = names
        .iter()
        .map(|name| {
            m.objects()
                .indices()
                .find(|&x| m.objects().label(x).to_string() == *name)
                .ok_or_else(|| Error::Parse(format!("unknown object {name:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let monad = m.monad();
    let n = entries.len();
    monad.operad().require_level(n)?;
    let op = (0..monad.operad().size(0, n))
        .find(|&op| monad.is_canonical_op(0, n, op))
        .ok_or_else(|| Error::internal("no canonical operad element"))?;
    monad.elem(0, op, entries)
}

fn free(cli: &Cli, path: &Path, hom: &[String], hat: bool) -> Result<(Report, Value)> {
    let [src, tgt] = hom else {
        return Err(Error::Parse("--hom SRC TGT is required".into()));
    };
    let m = Arc::new(load_multicat(path, monad(cli)?, cli.bound)?);
    let (a, b) = (object_list(&m, src)?, object_list(&m, tgt)?);
    let mode = if hat { Mode::Provisional } else { Mode::Quotient };
    let free = FreeAlgebra::new(m.clone(), mode, cli.bound)?;
    let set = free.hom(&a, &b)?;
    let reps = set.representatives();
    let mut report = Report::new("free");
    let mut check = Check::new("hom-set");
    check.record(reps.iter().all(|h| free.is_morphism(h)), || "a representative is malformed".into());
    report.push(check);
    let data = json!({
        "source": m.show_elem(&a),
        "target": m.show_elem(&b),
        "elements": set.elements.len(),
        "relations": set.relations,
        "classes": reps.len(),
        "representatives": reps.iter().map(|h| free.show(h)).collect::<Vec<_>>(),
    });
    Ok((report, data))
}
