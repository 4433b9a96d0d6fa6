//! Command execution: builds the problem from its descriptor, dispatches to
//! the library, and assembles the machine-readable report.
//!
//! Exit codes: 0 on success, 2 when the mathematics forbids the request
//! (limit point where a coupling matrix was asked for, a failed strict
//! positivity gate), 1 on numerical or configuration failure.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use slkvn_core::boundary::{boundary_frame, boundary_values, BvEntry};
use slkvn_core::classify::{classify_endpoint, deficiency_index, EndpointClass};
use slkvn_core::extensions::{
    coupled, friedrichs, krein_with, separated, separated_at, Extension, ExtensionSpec,
    GateOptions, KreinOptions, PositivityReport,
};
use slkvn_core::oracles::verify_problem;
use slkvn_core::spectra::{eigenvalues, EigenOptions, SpectralResult};
use slkvn_core::{SLProblem, Side, SlError};

use crate::config::{
    serialize, Command, ExtensionDescriptor, ProblemDescriptor, RunConfig,
};
use crate::expr;
use crate::CliError;

pub fn build_problem(desc: &ProblemDescriptor) -> Result<SLProblem, CliError> {
    let compile = |name: &str, src: &str| -> Result<Arc<dyn Fn(f64) -> f64 + Send + Sync>, CliError> {
        let node = expr::parse(src)
            .map_err(|e| CliError::Config(format!("problem.{name}: {e}")))?;
        Ok(Arc::new(move |x| node.eval(x)))
    };
    let problem = match desc {
        ProblemDescriptor::Bessel { alpha, beta, gamma, b } => {
            SLProblem::bessel(*alpha, *beta, *gamma, *b)
        }
        ProblemDescriptor::BlackHole {
            alpha,
            beta,
            b,
            p0,
            r0,
            lower,
            upper,
        } => SLProblem::black_hole(
            compile("p0", p0)?,
            compile("r0", r0)?,
            *lower,
            *upper,
            *alpha,
            *beta,
            *b,
        ),
        ProblemDescriptor::Jacobi { alpha, beta } => SLProblem::jacobi(*alpha, *beta),
        ProblemDescriptor::Expression { a, b, p, q, r, cutoff } => {
            let pf = compile("p", p)?;
            let qf = compile("q", q)?;
            let rf = compile("r", r)?;
            match cutoff {
                Some(c) => SLProblem::from_callables_with_cutoff(*a, *b, *c, pf, qf, rf),
                None => SLProblem::from_callables(*a, *b, pf, qf, rf),
            }
        }
    };
    problem.map_err(CliError::Core)
}

fn resolve_extension(
    problem: &SLProblem,
    desc: &ExtensionDescriptor,
    gate: &GateOptions,
) -> Result<Extension, SlError> {
    match desc {
        ExtensionDescriptor::Friedrichs => friedrichs(problem),
        ExtensionDescriptor::Krein => Ok(krein_with(
            problem,
            &KreinOptions {
                gate: gate.clone(),
                cross_check: false,
            },
        )?
        .extension),
        ExtensionDescriptor::Separated { gamma, delta } => match (gamma, delta) {
            (Some(g), Some(d)) => separated(*g, *d),
            (Some(g), None) => separated_at(Side::A, *g),
            (None, Some(d)) => separated_at(Side::B, *d),
            (None, None) => Err(SlError::InvalidParameter(
                "separated extension needs at least one angle".into(),
            )),
        },
        ExtensionDescriptor::Coupled { phi, r } => coupled(*phi, *r),
    }
}

fn class_json(c: &EndpointClass) -> Value {
    json!({
        "class": c.class.to_string(),
        "method": c.method,
        "detail": c.detail,
    })
}

fn spec_json(spec: &ExtensionSpec) -> Value {
    match spec {
        ExtensionSpec::Separated { gamma, delta } => json!({
            "variant": "separated",
            "gamma": gamma.map(Value::from).unwrap_or(Value::Null),
            "delta": delta.map(Value::from).unwrap_or(Value::Null),
        }),
        ExtensionSpec::Coupled { phi, r } => json!({
            "variant": "coupled",
            "phi": phi,
            // row-major entries
            "r": [r[0][0], r[0][1], r[1][0], r[1][1]],
        }),
        ExtensionSpec::NoBoundaryConditions => json!({"variant": "none"}),
    }
}

fn bv_json(entry: &BvEntry) -> Value {
    json!({
        "value": entry.value,
        "derivative": entry.derivative,
        "value_spread": entry.value_diag.spread,
        "derivative_spread": entry.derivative_diag.spread,
    })
}

fn gate_json(rep: &PositivityReport) -> Value {
    json!({
        "lambda_min": if rep.lambda_min.is_finite() { Value::from(rep.lambda_min) } else { Value::String("inf".into()) },
        "margin": rep.eps,
        "strictly_positive": rep.strictly_positive,
        "detail": rep.detail,
    })
}

fn spectrum_json(res: &SpectralResult) -> Value {
    json!({
        "window": [res.window.0, res.window.1],
        "extension": spec_json(&res.extension),
        "eigenvalues": res.eigenvalues.iter().map(|e| json!({
            "value": e.value,
            "multiplicity": e.multiplicity,
            "residual": e.residual,
            "reduced_confidence": e.reduced_confidence,
        })).collect::<Vec<_>>(),
    })
}

fn error_kind(e: &SlError) -> &'static str {
    match e {
        SlError::InvalidParameter(_) => "invalid-parameter",
        SlError::OutOfDomain { .. } => "out-of-domain",
        SlError::IntegrationFailure { .. } => "integration-failure",
        SlError::MismatchedAbscissae { .. } => "mismatched-abscissae",
        SlError::VanishingSolution { .. } => "vanishing-solution",
        SlError::Indeterminate { .. } => "indeterminate-classification",
        SlError::NotBoundedBelow { .. } => "not-bounded-below",
        SlError::NotInMaximalDomain { .. } => "not-in-maximal-domain",
        SlError::StrictPositivityRequired { .. } => "strict-positivity-required",
        SlError::LimitPoint { .. } => "limit-point",
        SlError::DeficiencyMismatch { .. } => "deficiency-mismatch",
        SlError::NotStrictlyPositive(_) => "not-strictly-positive",
        SlError::GammaPole(_) => "gamma-pole",
        SlError::SingularSystem(_) => "singular-system",
        SlError::InternalContradiction(_) => "internal-contradiction",
        SlError::Unsupported(_) => "unsupported",
    }
}

fn execute(config: &RunConfig) -> Result<Value, CliError> {
    let problem = build_problem(&config.problem)?;
    let gate_opts = GateOptions {
        eps_tol: config.options.tol.unwrap_or(1e-6),
        lambda_hi: None,
        parallel: true,
    };
    let lambda0 = config.options.lambda0.unwrap_or(0.0);
    let result = match config.command {
        Command::Classify => {
            let def = deficiency_index(&problem).map_err(CliError::Core)?;
            json!({
                "at_a": class_json(&def.at_a),
                "at_b": class_json(&def.at_b),
                "deficiency_index": def.value,
            })
        }
        Command::Frame => {
            let frame = boundary_frame(&problem, lambda0).map_err(CliError::Core)?;
            let side_json = |fs: &Option<slkvn_core::boundary::FrameSide>| match fs {
                Some(fs) => json!({
                    "classification": fs.class.class.to_string(),
                    "principal": fs.pair.principal.description,
                    "nonprincipal": fs.pair.nonprincipal.description,
                    "w_check": fs.pair.w_check,
                }),
                None => Value::Null,
            };
            json!({
                "lambda0": lambda0,
                "at_a": side_json(&frame.at_a),
                "at_b": side_json(&frame.at_b),
            })
        }
        Command::Bv => {
            let g_src = config.options.g.as_ref().ok_or_else(|| {
                CliError::Config("options.g: required for the bv command".into())
            })?;
            let g_node = expr::parse(g_src)
                .map_err(|e| CliError::Config(format!("options.g: {e}")))?;
            let frame = boundary_frame(&problem, lambda0).map_err(CliError::Core)?;
            let prob = problem.clone();
            let scale = problem.scale();
            let (lo, hi) = problem.domain();
            let g_eval = move |x: f64| -> slkvn_core::Result<(f64, f64)> {
                let (p, _, _) = prob.eval_coefficients(x)?;
                // fourth-order central difference, step limited by the
                // distance to the endpoints
                let room = (x - lo).min(hi - x).abs();
                let h = (4e-4 * scale).min(0.25 * room).max(1e-12 * scale);
                let d = (8.0 * (g_node.eval(x + h) - g_node.eval(x - h))
                    - (g_node.eval(x + 2.0 * h) - g_node.eval(x - 2.0 * h)))
                    / (12.0 * h);
                Ok((g_node.eval(x), p * d))
            };
            let data = boundary_values(&problem, &frame, &g_eval).map_err(CliError::Core)?;
            json!({
                "g": g_src,
                "at_a": data.at_a.as_ref().map(bv_json).unwrap_or(Value::Null),
                "at_b": data.at_b.as_ref().map(bv_json).unwrap_or(Value::Null),
            })
        }
        Command::Friedrichs => {
            let ext = friedrichs(&problem).map_err(CliError::Core)?;
            json!({ "extension": spec_json(&ext.spec) })
        }
        Command::Krein => {
            let res = krein_with(
                &problem,
                &KreinOptions {
                    gate: gate_opts.clone(),
                    cross_check: true,
                },
            )
            .map_err(CliError::Core)?;
            let mut m = Map::new();
            m.insert("extension".into(), spec_json(&res.extension.spec));
            m.insert("gate".into(), gate_json(&res.gate));
            if let Some(det) = res.det {
                m.insert("det".into(), json!(det));
            }
            if let Some(angle) = res.angle {
                m.insert("angle".into(), json!(angle));
            }
            if let Some(cond) = res.angle_condition {
                m.insert("angle_condition".into(), json!(cond));
            }
            if let Some(dev) = res.cross_check_dev {
                m.insert("cross_check_deviation".into(), json!(dev));
            }
            Value::Object(m)
        }
        Command::Spectrum => {
            let ext_desc = config
                .options
                .extension
                .as_ref()
                .ok_or_else(|| CliError::Config("options.extension: required for spectrum".into()))?;
            let window = config
                .options
                .window
                .ok_or_else(|| CliError::Config("options.window: required for spectrum".into()))?;
            let ext = resolve_extension(&problem, ext_desc, &gate_opts).map_err(CliError::Core)?;
            let frame = boundary_frame(&problem, 0.0).map_err(CliError::Core)?;
            let opts = EigenOptions {
                nodes: config.options.nodes.unwrap_or(400),
                rel_tol: config.options.tol.unwrap_or(1e-9).min(1e-6),
                parallel: true,
            };
            let res = eigenvalues(&problem, &frame, &ext, window, &opts).map_err(CliError::Core)?;
            spectrum_json(&res)
        }
        Command::Verify => {
            let reports = verify_problem(&problem).map_err(CliError::Core)?;
            let all_pass = reports.iter().all(|r| r.pass);
            json!({
                "pass": all_pass,
                "checks": reports.iter().map(|r| json!({
                    "name": r.name,
                    "closed": r.closed,
                    "numeric": r.numeric,
                    "abs_dev": r.abs_dev,
                    "rel_dev": r.rel_dev,
                    "tol": r.tol,
                    "pass": r.pass,
                })).collect::<Vec<_>>(),
            })
        }
    };
    let mut classification = Map::new();
    if let Ok(a) = classify_endpoint(&problem, Side::A, 0.0) {
        classification.insert("at_a".into(), Value::String(a.class.to_string()));
    }
    if let Ok(b) = classify_endpoint(&problem, Side::B, 0.0) {
        classification.insert("at_b".into(), Value::String(b.class.to_string()));
    }
    let mut root = Map::new();
    root.insert("result".into(), result);
    root.insert("endpoints".into(), Value::Object(classification));
    Ok(Value::Object(root))
}

/// Run a config and produce the (report, exit code) pair.
pub fn run(config: &RunConfig) -> (Value, i32) {
    let mut report = Map::new();
    report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    report.insert("command".into(), json!(config.command.as_str()));
    report.insert("config".into(), serialize(config));
    match execute(config) {
        Ok(body) => {
            for (k, v) in body.as_object().unwrap() {
                report.insert(k.clone(), v.clone());
            }
            (Value::Object(report), 0)
        }
        Err(CliError::Core(e)) => {
            let code = if e.is_mathematical_refusal() { 2 } else { 1 };
            report.insert(
                "error".into(),
                json!({
                    "kind": error_kind(&e),
                    "message": e.to_string(),
                    "mathematical_refusal": e.is_mathematical_refusal(),
                }),
            );
            (Value::Object(report), code)
        }
        Err(e) => {
            report.insert(
                "error".into(),
                json!({
                    "kind": "config",
                    "message": e.to_string(),
                    "mathematical_refusal": false,
                }),
            );
            (Value::Object(report), 1)
        }
    }
}
