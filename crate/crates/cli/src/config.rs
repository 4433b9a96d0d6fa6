//! Run configuration: schema-validated parsing of the JSON config, with
//! unknown keys rejected by path, plus the normalizing serializer used for
//! the round-trip guarantee.

use serde_json::{json, Map, Value};
use std::collections::BTreeSet;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Frame,
    Bv,
    Friedrichs,
    Krein,
    Spectrum,
    Verify,
}

impl Command {
    pub fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "classify" => Command::Classify,
            "frame" => Command::Frame,
            "bv" => Command::Bv,
            "friedrichs" => Command::Friedrichs,
            "krein" => Command::Krein,
            "spectrum" => Command::Spectrum,
            "verify" => Command::Verify,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Frame => "frame",
            Command::Bv => "bv",
            Command::Friedrichs => "friedrichs",
            Command::Krein => "krein",
            Command::Spectrum => "spectrum",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemDescriptor {
    Bessel {
        alpha: f64,
        beta: f64,
        gamma: f64,
        b: f64,
    },
    BlackHole {
        alpha: f64,
        beta: f64,
        b: f64,
        p0: String,
        r0: String,
        lower: f64,
        upper: f64,
    },
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    Expression {
        a: f64,
        b: f64,
        p: String,
        q: String,
        r: String,
        cutoff: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionDescriptor {
    Friedrichs,
    Krein,
    Separated {
        gamma: Option<f64>,
        delta: Option<f64>,
    },
    Coupled {
        phi: f64,
        r: [[f64; 2]; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub window: Option<(f64, f64)>,
    pub tol: Option<f64>,
    pub lambda0: Option<f64>,
    pub g: Option<String>,
    pub nodes: Option<usize>,
    pub extension: Option<ExtensionDescriptor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub problem: ProblemDescriptor,
    pub options: RunOptions,
}

fn bad(path: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {message}"))
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn get_f64(map: &Map<String, Value>, path: &str, key: &str) -> Result<f64, CliError> {
    let v = map
        .get(key)
        .ok_or_else(|| bad(&format!("{path}{key}"), "required"))?;
    num_value(v, &format!("{path}{key}"))
}

/// Numbers, or the strings "inf" / "-inf" for interval endpoints.
fn num_value(v: &Value, path: &str) -> Result<f64, CliError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| bad(path, "not representable as a float")),
        Value::String(s) => match s.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(bad(path, format!("expected a number, got '{other}'"))),
        },
        _ => Err(bad(path, "expected a number")),
    }
}

fn get_string(map: &Map<String, Value>, path: &str, key: &str) -> Result<String, CliError> {
    map.get(key)
        .ok_or_else(|| bad(&format!("{path}{key}"), "required"))?
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| bad(&format!("{path}{key}"), "expected a string"))
}

fn reject_unknown(
    map: &Map<String, Value>,
    path: &str,
    allowed: &[&str],
) -> Result<(), CliError> {
    let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
    for key in map.keys() {
        if !allowed.contains(key.as_str()) {
            return Err(bad(&format!("{path}{key}"), "unknown key"));
        }
    }
    Ok(())
}

fn parse_problem(map: &Map<String, Value>, path: &str) -> Result<ProblemDescriptor, CliError> {
    let family = get_string(map, path, "family")?;
    match family.as_str() {
        "bessel" => {
            reject_unknown(map, path, &["family", "alpha", "beta", "gamma", "b"])?;
            Ok(ProblemDescriptor::Bessel {
                alpha: get_f64(map, path, "alpha")?,
                beta: get_f64(map, path, "beta")?,
                gamma: get_f64(map, path, "gamma")?,
                b: get_f64(map, path, "b")?,
            })
        }
        "black_hole" => {
            reject_unknown(
                map,
                path,
                &["family", "alpha", "beta", "b", "p0", "r0", "m", "M"],
            )?;
            let p0 = map
                .get("p0")
                .map(|v| v.as_str().map(|s| s.to_string()))
                .unwrap_or(Some("1".into()))
                .ok_or_else(|| bad(&format!("{path}p0"), "expected a string"))?;
            let r0 = map
                .get("r0")
                .map(|v| v.as_str().map(|s| s.to_string()))
                .unwrap_or(Some("1".into()))
                .ok_or_else(|| bad(&format!("{path}r0"), "expected a string"))?;
            let lower = match map.get("m") {
                Some(v) => num_value(v, &format!("{path}m"))?,
                None => 1e-12,
            };
            let upper = match map.get("M") {
                Some(v) => num_value(v, &format!("{path}M"))?,
                None => 1e12,
            };
            Ok(ProblemDescriptor::BlackHole {
                alpha: get_f64(map, path, "alpha")?,
                beta: get_f64(map, path, "beta")?,
                b: get_f64(map, path, "b")?,
                p0,
                r0,
                lower,
                upper,
            })
        }
        "jacobi" => {
            reject_unknown(map, path, &["family", "alpha", "beta"])?;
            Ok(ProblemDescriptor::Jacobi {
                alpha: get_f64(map, path, "alpha")?,
                beta: get_f64(map, path, "beta")?,
            })
        }
        "expression" => {
            reject_unknown(map, path, &["family", "a", "b", "p", "q", "r", "cutoff"])?;
            Ok(ProblemDescriptor::Expression {
                a: get_f64(map, path, "a")?,
                b: get_f64(map, path, "b")?,
                p: get_string(map, path, "p")?,
                q: get_string(map, path, "q")?,
                r: get_string(map, path, "r")?,
                cutoff: match map.get("cutoff") {
                    Some(v) => Some(num_value(v, &format!("{path}cutoff"))?),
                    None => None,
                },
            })
        }
        other => Err(bad(
            &format!("{path}family"),
            format!("unknown family '{other}' (bessel, black_hole, jacobi, expression)"),
        )),
    }
}

fn parse_extension(v: &Value, path: &str) -> Result<ExtensionDescriptor, CliError> {
    let map = as_object(v, path)?;
    let kind = get_string(map, &format!("{path}."), "type")?;
    match kind.as_str() {
        "friedrichs" => {
            reject_unknown(map, &format!("{path}."), &["type"])?;
            Ok(ExtensionDescriptor::Friedrichs)
        }
        "krein" => {
            reject_unknown(map, &format!("{path}."), &["type"])?;
            Ok(ExtensionDescriptor::Krein)
        }
        "separated" => {
            reject_unknown(map, &format!("{path}."), &["type", "gamma", "delta"])?;
            let gamma = match map.get("gamma") {
                Some(v) => Some(num_value(v, &format!("{path}.gamma"))?),
                None => None,
            };
            let delta = match map.get("delta") {
                Some(v) => Some(num_value(v, &format!("{path}.delta"))?),
                None => None,
            };
            if gamma.is_none() && delta.is_none() {
                return Err(bad(
                    &format!("{path}.gamma"),
                    "separated extension needs gamma and/or delta",
                ));
            }
            Ok(ExtensionDescriptor::Separated { gamma, delta })
        }
        "coupled" => {
            reject_unknown(map, &format!("{path}."), &["type", "phi", "r"])?;
            let phi = match map.get("phi") {
                Some(v) => num_value(v, &format!("{path}.phi"))?,
                None => 0.0,
            };
            let rv = map
                .get("r")
                .ok_or_else(|| bad(&format!("{path}.r"), "required"))?;
            let rows = rv
                .as_array()
                .ok_or_else(|| bad(&format!("{path}.r"), "expected a 2x2 array"))?;
            if rows.len() != 2 {
                return Err(bad(&format!("{path}.r"), "expected 2 rows"));
            }
            let mut r = [[0.0; 2]; 2];
            for (i, row) in rows.iter().enumerate() {
                let cols = row
                    .as_array()
                    .filter(|c| c.len() == 2)
                    .ok_or_else(|| bad(&format!("{path}.r[{i}]"), "expected 2 entries"))?;
                for (j, c) in cols.iter().enumerate() {
                    r[i][j] = num_value(c, &format!("{path}.r[{i}][{j}]"))?;
                }
            }
            Ok(ExtensionDescriptor::Coupled { phi, r })
        }
        other => Err(bad(
            &format!("{path}.type"),
            format!("unknown extension type '{other}'"),
        )),
    }
}

fn parse_options(v: &Value, path: &str) -> Result<RunOptions, CliError> {
    let map = as_object(v, path)?;
    reject_unknown(
        map,
        &format!("{path}."),
        &["window", "tol", "lambda0", "g", "nodes", "extension"],
    )?;
    let window = match map.get("window") {
        Some(v) => {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad(&format!("{path}.window"), "expected [lo, hi]"))?;
            Some((
                num_value(&arr[0], &format!("{path}.window[0]"))?,
                num_value(&arr[1], &format!("{path}.window[1]"))?,
            ))
        }
        None => None,
    };
    Ok(RunOptions {
        window,
        tol: match map.get("tol") {
            Some(v) => Some(num_value(v, &format!("{path}.tol"))?),
            None => None,
        },
        lambda0: match map.get("lambda0") {
            Some(v) => Some(num_value(v, &format!("{path}.lambda0"))?),
            None => None,
        },
        g: match map.get("g") {
            Some(v) => Some(
                v.as_str()
                    .map(|s| s.to_string())
                    .ok_or_else(|| bad(&format!("{path}.g"), "expected a string"))?,
            ),
            None => None,
        },
        nodes: match map.get("nodes") {
            Some(v) => Some(
                v.as_u64()
                    .ok_or_else(|| bad(&format!("{path}.nodes"), "expected a positive integer"))?
                    as usize,
            ),
            None => None,
        },
        extension: match map.get("extension") {
            Some(v) => Some(parse_extension(v, &format!("{path}.extension"))?),
            None => None,
        },
    })
}

/// Parse a config, optionally reconciling with a command given on the
/// command line: the config's own "command" wins a consistency check, and
/// may be omitted when the CLI supplies one.
pub fn parse_config_with_command(
    text: &str,
    cli_command: Option<&str>,
) -> Result<RunConfig, CliError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    let map = as_object(&root, "config")?;

    // nested form has a "problem" object; the flat form carries the problem
    // fields at top level alongside "command"
    let nested = map.contains_key("problem");
    if nested {
        reject_unknown(map, "", &["problem", "command", "options"])?;
    }

    let command_str = match map.get("command") {
        Some(v) => Some(
            v.as_str()
                .map(|s| s.to_string())
                .ok_or_else(|| bad("command", "expected a string"))?,
        ),
        None => None,
    };
    let command_str = match (command_str, cli_command) {
        (Some(c), Some(cli)) if c != cli => {
            return Err(CliError::Config(format!(
                "command: config says '{c}' but the command line says '{cli}'"
            )))
        }
        (Some(c), _) => c,
        (None, Some(cli)) => cli.to_string(),
        (None, None) => return Err(CliError::Config("command: required".into())),
    };
    let command = Command::parse(&command_str).ok_or_else(|| {
        bad(
            "command",
            format!(
                "unknown command '{command_str}' (classify, frame, bv, friedrichs, krein, spectrum, verify)"
            ),
        )
    })?;

    let problem = if nested {
        parse_problem(as_object(map.get("problem").unwrap(), "problem")?, "problem.")?
    } else {
        // flat form: everything except command/options describes the problem
        let mut flat = map.clone();
        flat.remove("command");
        flat.remove("options");
        parse_problem(&flat, "")?
    };

    let options = match map.get("options") {
        Some(v) => parse_options(v, "options")?,
        None => RunOptions::default(),
    };

    Ok(RunConfig {
        command,
        problem,
        options,
    })
}

/// Parse a self-contained config (the "command" key is required).
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    parse_config_with_command(text, None)
}

/// Normalized serialization; `parse_config(serialize(c))` returns `c`.
pub fn serialize(config: &RunConfig) -> Value {
    let problem = match &config.problem {
        ProblemDescriptor::Bessel { alpha, beta, gamma, b } => json!({
            "family": "bessel", "alpha": alpha, "beta": beta, "gamma": gamma, "b": b,
        }),
        ProblemDescriptor::BlackHole {
            alpha,
            beta,
            b,
            p0,
            r0,
            lower,
            upper,
        } => json!({
            "family": "black_hole", "alpha": alpha, "beta": beta, "b": b,
            "p0": p0, "r0": r0, "m": lower, "M": upper,
        }),
        ProblemDescriptor::Jacobi { alpha, beta } => json!({
            "family": "jacobi", "alpha": alpha, "beta": beta,
        }),
        ProblemDescriptor::Expression { a, b, p, q, r, cutoff } => {
            let endpoint = |v: f64| -> Value {
                if v == f64::INFINITY {
                    Value::String("inf".into())
                } else if v == f64::NEG_INFINITY {
                    Value::String("-inf".into())
                } else {
                    json!(v)
                }
            };
            let mut m = json!({
                "family": "expression", "a": endpoint(*a), "b": endpoint(*b),
                "p": p, "q": q, "r": r,
            });
            if let Some(c) = cutoff {
                m.as_object_mut().unwrap().insert("cutoff".into(), json!(c));
            }
            m
        }
    };
    let mut options = Map::new();
    if let Some((lo, hi)) = config.options.window {
        options.insert("window".into(), json!([lo, hi]));
    }
    if let Some(t) = config.options.tol {
        options.insert("tol".into(), json!(t));
    }
    if let Some(l) = config.options.lambda0 {
        options.insert("lambda0".into(), json!(l));
    }
    if let Some(g) = &config.options.g {
        options.insert("g".into(), json!(g));
    }
    if let Some(n) = config.options.nodes {
        options.insert("nodes".into(), json!(n));
    }
    if let Some(ext) = &config.options.extension {
        let v = match ext {
            ExtensionDescriptor::Friedrichs => json!({"type": "friedrichs"}),
            ExtensionDescriptor::Krein => json!({"type": "krein"}),
            ExtensionDescriptor::Separated { gamma, delta } => {
                let mut m = Map::new();
                m.insert("type".into(), json!("separated"));
                if let Some(g) = gamma {
                    m.insert("gamma".into(), json!(g));
                }
                if let Some(d) = delta {
                    m.insert("delta".into(), json!(d));
                }
                Value::Object(m)
            }
            ExtensionDescriptor::Coupled { phi, r } => json!({
                "type": "coupled", "phi": phi,
                "r": [[r[0][0], r[0][1]], [r[1][0], r[1][1]]],
            }),
        };
        options.insert("extension".into(), v);
    }
    let mut root = Map::new();
    root.insert("command".into(), json!(config.command.as_str()));
    root.insert("problem".into(), problem);
    if !options.is_empty() {
        root.insert("options".into(), Value::Object(options));
    }
    Value::Object(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_bessel_config_parses() {
        let cfg = parse_config(
            r#"{"problem":{"family":"bessel","alpha":0,"beta":0,"gamma":0.5,"b":1},"command":"krein"}"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::Krein);
        assert!(matches!(cfg.problem, ProblemDescriptor::Bessel { gamma, .. } if gamma == 0.5));
    }

    #[test]
    fn missing_command_is_an_error() {
        let err = parse_config(r#"{"problem":{"family":"jacobi","alpha":0,"beta":0}}"#).unwrap_err();
        assert_eq!(err.to_string(), "config error: command: required");
    }

    #[test]
    fn flat_form_parses() {
        let cfg =
            parse_config(r#"{"family":"jacobi","alpha":0.5,"beta":0.5,"command":"krein"}"#).unwrap();
        assert!(matches!(cfg.problem, ProblemDescriptor::Jacobi { alpha, beta } if alpha == 0.5 && beta == 0.5));
    }

    #[test]
    fn unknown_keys_rejected_with_path() {
        let err = parse_config(
            r#"{"problem":{"family":"bessel","alpha":0,"beta":0,"gamma":0.5,"b":1,"extra":1},"command":"krein"}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("problem.extra"), "{err}");
        let err = parse_config(
            r#"{"problem":{"family":"jacobi","alpha":0,"beta":0},"command":"krein","options":{"windw":[0,1]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("options.windw"), "{err}");
    }

    #[test]
    fn cli_command_reconciliation() {
        let text = r#"{"problem":{"family":"jacobi","alpha":0,"beta":0}}"#;
        let cfg = parse_config_with_command(text, Some("classify")).unwrap();
        assert_eq!(cfg.command, Command::Classify);
        let text = r#"{"problem":{"family":"jacobi","alpha":0,"beta":0},"command":"krein"}"#;
        assert!(parse_config_with_command(text, Some("classify")).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{
            "problem": {"family":"expression","a":0,"b":"inf","p":"1","q":"x^2","r":"1","cutoff":50},
            "command": "spectrum",
            "options": {"window":[0,25],"extension":{"type":"separated","gamma":0.0,"delta":1.2},"nodes":500}
        }"#;
        let cfg = parse_config(text).unwrap();
        let serialized = serialize(&cfg);
        let cfg2 = parse_config(&serialized.to_string()).unwrap();
        assert_eq!(cfg, cfg2);
    }
}
