//! `orthosym`: reconstruction of maps on rank-one idempotents, symmetry checks
//! on indefinite spaces, and the self-test driver.
//!
//! Exit codes: 0 success, 1 malformed input, 2 not induced / not a symmetry,
//! 3 self-test failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use orthosym_core::json::{
    CharacterizationJson, IdempotentJson, MatrixJson, ReconstructionJson, SpaceJson, SymmetryJson,
};
use orthosym_core::selftest::{run_all, SelftestConfig};
use orthosym_core::transform::{probe_set, reconstruct_with_validation};
use orthosym_core::{
    characterize, induce, is_symmetry, recover_inducing_operator, Error, RankOneIdempotent, RayMap,
    ScalarField, TransformHandle,
};

const DEFAULT_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "orthosym",
    version,
    about = "Zero-product preserving maps and indefinite symmetries"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Global {
    /// Dimension used when the input does not fix one.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..))]
    n: u64,
    #[arg(long, global = true, value_enum, default_value_t = FieldArg::Complex)]
    field: FieldArg,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Check tolerance; for `selftest` it overrides every suite threshold.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random samples per check.
    #[arg(long, global = true, default_value_t = 500)]
    samples: usize,
    #[arg(long = "in", global = true)]
    #[serde(skip)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for ScalarField {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => ScalarField::Real,
            FieldArg::Complex => ScalarField::Complex,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recover the operator inducing a map on rank-one idempotents.
    Reconstruct,
    /// Tabulate an induced map on the reconstruction probe set.
    ProbeTable {
        /// Replace the response to this probe with the response to the next one.
        #[arg(long)]
        corrupt: Option<usize>,
    },
    /// Characterize an operator on an indefinite space, or recover one from its ray map.
    Symmetry,
    /// Run every property suite.
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
}

#[derive(Deserialize, Debug)]
#[serde(tag = "phi", rename_all = "snake_case")]
enum PhiInput {
    Induced {
        operator: MatrixJson,
    },
    Identity {
        n: Option<usize>,
        field: Option<ScalarField>,
    },
    Table {
        n: usize,
        field: ScalarField,
        entries: Vec<TableEntry>,
    },
}

#[derive(Serialize, Deserialize, Debug)]
struct TableEntry {
    input: IdempotentJson,
    output: IdempotentJson,
}

#[derive(Deserialize, Debug)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum SymmetryInput {
    Characterize {
        space: SpaceJson,
        operator: MatrixJson,
    },
    Recover {
        space: SpaceJson,
        operator: MatrixJson,
    },
}

/// A failed run: the exit code plus an optional report body.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
    summary: String,
}

impl Failure {
    fn malformed(e: impl std::fmt::Display) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
            report: None,
            summary: String::new(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInduced { .. }
            | Error::DegenerateProbe { .. }
            | Error::DegenerateImage { .. } => 2,
            _ => 1,
        };
        let report = (code == 2).then(|| {
            let residual = match e {
                Error::NotInduced { residual } if residual.is_finite() => json!(residual),
                _ => Value::Null,
            };
            json!({"error": "not_induced", "residual": residual, "detail": e.to_string()})
        });
        Self {
            code,
            message: e.to_string(),
            report,
            summary: String::new(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::malformed(format!("{e:#}"))
    }
}

struct Success {
    report: Value,
    summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let global = cli.global.clone();
    let (name, outcome) = match &cli.command {
        Command::Reconstruct => ("reconstruct", cmd_reconstruct(&global)),
        Command::ProbeTable { corrupt } => ("probe-table", cmd_probe_table(&global, *corrupt)),
        Command::Symmetry => ("symmetry", cmd_symmetry(&global)),
        Command::Selftest {
            cases,
            n_min,
            n_max,
        } => ("selftest", cmd_selftest(&global, *cases, *n_min, *n_max)),
    };
    let (code, body, summary) = match outcome {
        Ok(s) => (0, Some(s.report), s.summary),
        Err(f) => {
            eprintln!("orthosym {name}: {}", f.message);
            (f.code, f.report, f.summary)
        }
    };
    if let Some(body) = body {
        if let Err(e) = emit(name, &global, body) {
            eprintln!("orthosym {name}: {e:#}");
            return ExitCode::from(1);
        }
    }
    if !summary.is_empty() {
        if global.out.is_some() {
            print!("{summary}");
        } else {
            eprint!("{summary}");
        }
    }
    ExitCode::from(code)
}

fn emit(command: &str, global: &Global, body: Value) -> anyhow::Result<()> {
    let tol = if command == "selftest" {
        global.tol
    } else {
        Some(global.tol.unwrap_or(DEFAULT_TOL))
    };
    let mut report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": global.seed,
        "config": {"command": command, "n": global.n, "field": global.field, "tol": tol, "samples": global.samples},
    });
    if let (Value::Object(head), Value::Object(rest)) = (&mut report, body) {
        head.extend(rest);
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &global.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_input<T: for<'de> Deserialize<'de>>(global: &Global) -> Result<T, Failure> {
    let text = match &global.input {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => std::io::read_to_string(std::io::stdin()).context("reading standard input")?,
    };
    serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("invalid input: {e}")))
}

fn probe_list(probes: &[RankOneIdempotent], field: ScalarField) -> Value {
    json!(probes
        .iter()
        .map(|p| IdempotentJson::from_rank_one(p, field))
        .collect::<Vec<_>>())
}

fn cmd_reconstruct(global: &Global) -> Result<Success, Failure> {
    let input: PhiInput = read_input(global)?;
    let (phi, validation) = match input {
        PhiInput::Induced { operator } => {
            let a = operator.to_operator()?;
            (induce(&a, operator.field)?, None)
        }
        PhiInput::Identity { n, field } => {
            let n = n.unwrap_or(global.n as usize);
            (
                TransformHandle::identity(n, field.unwrap_or(global.field.into())),
                None,
            )
        }
        PhiInput::Table { n, field, entries } => {
            let mut table = Vec::with_capacity(entries.len());
            for e in entries {
                table.push((e.input.to_rank_one()?, e.output.to_rank_one()?));
            }
            let inputs: Vec<RankOneIdempotent> = table.iter().map(|(p, _)| p.clone()).collect();
            let phi = TransformHandle::from_table(n, field, table);
            for (index, p) in probe_set(n, field).iter().enumerate() {
                if let Err(Error::MissingEntry) = phi.eval(p) {
                    return Err(Failure::malformed(format!(
                        "table has no response for probe {index}"
                    )));
                }
            }
            (phi, Some(inputs))
        }
    };
    let field = phi.field();
    let validation = match validation {
        Some(v) => v,
        None => {
            let mut sampler = orthosym_core::sampling::Sampler::new(global.seed, field);
            (0..global.samples.min(100))
                .map(|_| sampler.rank_one(phi.dim()))
                .collect()
        }
    };
    let result = reconstruct_with_validation(&phi, &validation)?;
    let mut report = serde_json::to_value(ReconstructionJson::from_result(&result, field))
        .map_err(Failure::malformed)?;
    report["probe_set"] = probe_list(&probe_set(phi.dim(), field), field);
    let summary = format!(
        "induced: n = {}, auto = {}, residual = {:.3e}, probes = {}\n",
        phi.dim(),
        auto_name(result.operator.auto()),
        result.residual,
        result.probes_used
    );
    Ok(Success { report, summary })
}

fn auto_name(a: orthosym_core::Automorphism) -> &'static str {
    match a {
        orthosym_core::Automorphism::Identity => "id",
        orthosym_core::Automorphism::Conjugation => "conj",
    }
}

fn cmd_probe_table(global: &Global, corrupt: Option<usize>) -> Result<Success, Failure> {
    let input: PhiInput = read_input(global)?;
    let PhiInput::Induced { operator } = input else {
        return Err(Failure::malformed(
            "probe-table needs an \"induced\" operator",
        ));
    };
    let field = operator.field;
    let phi = induce(&operator.to_operator()?, field)?;
    let probes = probe_set(phi.dim(), field);
    let mut outputs = probes
        .iter()
        .map(|p| phi.eval(p))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(k) = corrupt {
        if k >= outputs.len() {
            return Err(Failure::malformed(format!(
                "probe index {k} out of range (0..{})",
                outputs.len()
            )));
        }
        outputs[k] = outputs[(k + 1) % outputs.len()].clone();
    }
    let entries: Vec<TableEntry> = probes
        .iter()
        .zip(&outputs)
        .map(|(p, q)| TableEntry {
            input: IdempotentJson::from_rank_one(p, field),
            output: IdempotentJson::from_rank_one(q, field),
        })
        .collect();
    let report = json!({"phi": "table", "n": phi.dim(), "field": field, "entries": entries});
    Ok(Success {
        report,
        summary: format!("{} probe responses\n", entries.len()),
    })
}

fn cmd_symmetry(global: &Global) -> Result<Success, Failure> {
    let input: SymmetryInput = read_input(global)?;
    let tol = global.tol.unwrap_or(DEFAULT_TOL);
    match input {
        SymmetryInput::Characterize { space, operator } => {
            let space = space.to_space()?;
            let u = operator.to_operator()?;
            let ch = characterize(&space, &u)?;
            let check = is_symmetry(
                &space,
                &RayMap::induced(&u),
                global.samples,
                global.seed,
                tol,
            )?;
            let report = json!({
                "characterization": CharacterizationJson::from(ch),
                "check": SymmetryJson::from_report(&check, space.field()),
            });
            let summary = format!(
                "characterization: {}, {} violations in {} pairs\n",
                report["characterization"]["kind"].as_str().unwrap_or("?"),
                check.violations.len(),
                check.pairs_tested
            );
            if ch.is_symmetry() {
                Ok(Success { report, summary })
            } else {
                Err(Failure {
                    code: 2,
                    message: "not a symmetry".into(),
                    report: Some(report),
                    summary,
                })
            }
        }
        SymmetryInput::Recover { space, operator } => {
            let space = space.to_space()?;
            let u = operator.to_operator()?;
            let validation = global.samples.min(100);
            let result =
                recover_inducing_operator(&space, &RayMap::induced(&u), validation, global.seed)?;
            let report =
                json!({"recovered": ReconstructionJson::from_result(&result, space.field())});
            let summary = format!(
                "recovered: auto = {}, residual = {:.3e}\n",
                auto_name(result.operator.auto()),
                result.residual
            );
            Ok(Success { report, summary })
        }
    }
}

fn cmd_selftest(
    global: &Global,
    cases: usize,
    n_min: usize,
    n_max: usize,
) -> Result<Success, Failure> {
    if n_min < 3 || n_max < n_min {
        return Err(Failure::malformed(format!(
            "need 3 <= n-min <= n-max, got {n_min}..{n_max}"
        )));
    }
    let cfg = SelftestConfig {
        n_min,
        n_max,
        cases,
        seed: global.seed,
        tol_override: global.tol,
    };
    let start = Instant::now();
    let outcomes = run_all(&cfg);
    let mut summary = String::new();
    if cases == 0 {
        eprintln!("warning: budget 0, every suite passes vacuously");
    }
    for o in &outcomes {
        summary.push_str(&format!(
            "{:<28} {}  {}/{} ok",
            o.name,
            if o.passed() { "PASS" } else { "FAIL" },
            o.checked - o.failures,
            o.checked
        ));
        if let Some(note) = &o.note {
            summary.push_str(&format!("  ({note})"));
        }
        summary.push('\n');
    }
    eprintln!(
        "selftest finished in {:.2} s",
        start.elapsed().as_secs_f64()
    );
    let passed = outcomes.iter().all(|o| o.passed());
    let report = json!({
        "cases": cases,
        "n_range": [n_min, n_max],
        "passed": passed,
        "suites": outcomes.iter().map(|o| json!({
            "name": o.name, "passed": o.passed(), "checked": o.checked, "failures": o.failures, "note": o.note,
        })).collect::<Vec<_>>(),
    });
    if passed {
        Ok(Success { report, summary })
    } else {
        Err(Failure {
            code: 3,
            message: "some suites failed".into(),
            report: Some(report),
            summary,
        })
    }
}
