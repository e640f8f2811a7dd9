//! Command implementations shared by the binary and the test suites.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use rigiditylab_core::conjugacy::{
    reconcile_nonorientable, synthesize_conjugacy, ConjugacyStatus, ReconcileStatus,
};
use rigiditylab_core::element::Orientation;
use rigiditylab_core::models::{self, Backend};
use rigiditylab_core::rat::{self, Rat};
use rigiditylab_core::reps::{compare_spectra, CompareOutcome, Representation};

use crate::json::{
    conjugacy_to_json, model_from_json, reconcile_to_json, spectrum_to_json,
};
use crate::report::build_report;
use crate::suites;
use crate::svg;

/// Exit codes: 0 affirmative, 1 negative verdict, 2 usage (clap), 3 model
/// or validation failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Clone, Debug)]
pub struct ModelSource {
    pub path: Option<String>,
    pub builtin: Option<String>,
    pub backend: Backend,
    pub seed: u64,
}

impl ModelSource {
    pub fn load(&self) -> Result<Representation> {
        match (&self.path, &self.builtin) {
            (Some(p), None) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("reading model file `{p}`"))?;
                let v: Value = serde_json::from_str(&text)
                    .with_context(|| format!("parsing model file `{p}`"))?;
                model_from_json(&v)
            }
            (None, Some(name)) => models::builtin(name, self.backend, self.seed)
                .map_err(|e| anyhow!("builtin model: {e}")),
            (Some(_), Some(_)) => bail!("give either a model file or a builtin name, not both"),
            (None, None) => bail!("no model given (use --model or --builtin)"),
        }
    }

    pub fn describe(&self) -> Value {
        json!({
            "path": self.path,
            "builtin": self.builtin,
            "backend": match self.backend {
                Backend::Pl { grid } => json!({"kind": "pl", "grid": grid}),
                Backend::Moebius => json!({"kind": "moebius"}),
            },
            "seed": self.seed,
        })
    }
}

/// Validation word length used before running commands; spectra and
/// conjugacy synthesis rely on the hyperbolic-like property.
const VALIDATE_LEN: usize = 2;

pub struct CommandOutput {
    pub report: Value,
    pub exit: i32,
    pub summary: String,
}

pub fn cmd_spectrum(source: &ModelSource, l: usize, oriented: bool) -> Result<CommandOutput> {
    let rep = source.load()?;
    rep.validate(VALIDATE_LEN)
        .map_err(|e| anyhow!("model validation: {e}"))?;
    let spec = rep.spectrum(l, oriented)?;
    let classes = spec.entries.len();
    let with_fp = spec
        .entries
        .values()
        .filter(|e| e.has_fixed_points)
        .count();
    let config = json!({
        "model": source.describe(),
        "length_bound": l,
        "oriented": oriented,
    });
    let report = build_report(
        "spectrum",
        config,
        spectrum_to_json(&spec),
        json!([]),
        json!({ "classes": classes, "with_fixed_points": with_fp }),
    );
    Ok(CommandOutput {
        report,
        exit: EXIT_OK,
        summary: format!("spectrum: {classes} classes, {with_fp} with fixed points"),
    })
}

pub fn cmd_compare(
    source1: &ModelSource,
    source2: &ModelSource,
    l: usize,
    oriented: bool,
) -> Result<CommandOutput> {
    let rep1 = source1.load()?;
    let rep2 = source2.load()?;
    rep1.validate(VALIDATE_LEN)
        .map_err(|e| anyhow!("first model validation: {e}"))?;
    rep2.validate(VALIDATE_LEN)
        .map_err(|e| anyhow!("second model validation: {e}"))?;
    let config = json!({
        "model1": source1.describe(),
        "model2": source2.describe(),
        "length_bound": l,
        "oriented": oriented,
    });
    let has_reversing = rep1
        .generators()
        .iter()
        .any(|(_, e)| matches!(e.orientation(), Ok(Orientation::Reversing)));
    if has_reversing {
        let report = reconcile_nonorientable(&rep1, &rep2, l)?;
        let ok = report.status == ReconcileStatus::Conjugate;
        let summary = match &report.status {
            ReconcileStatus::Conjugate => {
                format!("conjugate (defect {:.3e})", report.defect)
            }
            ReconcileStatus::Mismatch { witness } => format!("mismatch at `{witness}`"),
            ReconcileStatus::NonzeroResidual { generator } => {
                format!("nonzero translation residual on `{generator}`")
            }
            ReconcileStatus::OrientationTypeMismatch { generator } => {
                format!("orientation type differs on `{generator}`")
            }
        };
        let out = build_report(
            "compare",
            config,
            reconcile_to_json(&report),
            json!([]),
            json!({}),
        );
        return Ok(CommandOutput {
            report: out,
            exit: if ok { EXIT_OK } else { EXIT_NEGATIVE },
            summary,
        });
    }
    match compare_spectra(&rep1, &rep2, l, oriented)? {
        CompareOutcome::Mismatch {
            witness,
            in_first,
            in_second,
        } => {
            let out = build_report(
                "compare",
                config,
                json!({ "status": "mismatch" }),
                json!([{ "witness_word": witness.to_string(),
                         "has_fixed_points": { "first": in_first, "second": in_second } }]),
                json!({}),
            );
            Ok(CommandOutput {
                report: out,
                exit: EXIT_NEGATIVE,
                summary: format!("spectra differ at `{witness}`"),
            })
        }
        CompareOutcome::Equal => {
            let result = synthesize_conjugacy(&rep1, &rep2, l)?;
            let ok = result.status == ConjugacyStatus::Conjugate;
            let summary = match &result.status {
                ConjugacyStatus::Conjugate => format!(
                    "conjugate: defect {:.3e} (bound {:.3e})",
                    result.defect, result.defect_bound
                ),
                ConjugacyStatus::Mismatch { witness } => format!("mismatch at `{witness}`"),
                ConjugacyStatus::OrderViolation { first, second } => {
                    format!("order violation between `{first}` and `{second}`")
                }
            };
            let out = build_report(
                "compare",
                config,
                conjugacy_to_json(&result),
                json!([]),
                json!({ "samples": result.sample_pairs.len() }),
            );
            Ok(CommandOutput {
                report: out,
                exit: if ok { EXIT_OK } else { EXIT_NEGATIVE },
                summary,
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_lemmas(
    source: &ModelSource,
    seed: u64,
    cases: usize,
    scan_n: i64,
    n_max: u32,
    eps: &Rat,
    density_cases: usize,
) -> Result<CommandOutput> {
    if scan_n == 0 || n_max == 0 {
        bail!("usage: N must be positive");
    }
    let rep = source.load()?;
    rep.validate(VALIDATE_LEN)
        .map_err(|e| anyhow!("model validation: {e}"))?;
    let outcomes = suites::run_all(&rep, seed, cases, scan_n, n_max, eps, density_cases)?;
    let all_pass = outcomes.iter().all(|o| o.passed());
    let verdicts: Vec<Value> = outcomes.iter().map(|o| o.to_json()).collect();
    let witnesses: Vec<Value> = outcomes
        .iter()
        .filter_map(|o| {
            o.first_counterexample
                .as_ref()
                .map(|c| json!({ "suite": o.name, "counterexample": c }))
        })
        .collect();
    let work: u64 = outcomes.iter().map(|o| o.work).sum();
    let config = json!({
        "model": source.describe(),
        "seed": seed,
        "cases": cases,
        "scan_n": scan_n,
        "n_max": n_max,
        "epsilon": rat::display(eps),
        "density_cases": density_cases,
    });
    let summary = outcomes
        .iter()
        .map(|o| format!("{}: {}/{}", o.name, o.cases - o.failures, o.cases))
        .collect::<Vec<_>>()
        .join(", ");
    let report = build_report(
        "lemmas",
        config,
        json!(verdicts),
        json!(witnesses),
        json!({ "work": work }),
    );
    Ok(CommandOutput {
        report,
        exit: if all_pass { EXIT_OK } else { EXIT_NEGATIVE },
        summary,
    })
}

pub fn cmd_render(
    preset: Option<&str>,
    scene_path: Option<&Path>,
    out_path: &Path,
) -> Result<CommandOutput> {
    let scene = match (preset, scene_path) {
        (Some(name), None) => svg::preset(name)?,
        (None, Some(p)) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading scene `{}`", p.display()))?;
            serde_json::from_str(&text).context("parsing scene JSON")?
        }
        (Some(_), Some(_)) => bail!("usage: give a preset or --scene, not both"),
        (None, None) => bail!("usage: a preset name or --scene file is required"),
    };
    let svg_text = svg::render_svg(&scene)?;
    fs::write(out_path, &svg_text)
        .with_context(|| format!("writing `{}`", out_path.display()))?;
    let config = json!({
        "preset": preset,
        "scene": scene_path.map(|p| p.display().to_string()),
        "out": out_path.display().to_string(),
    });
    let report = build_report(
        "render",
        config,
        json!({ "bytes": svg_text.len() }),
        json!([]),
        json!({}),
    );
    Ok(CommandOutput {
        report,
        exit: EXIT_OK,
        summary: format!("wrote {} bytes to {}", svg_text.len(), out_path.display()),
    })
}
