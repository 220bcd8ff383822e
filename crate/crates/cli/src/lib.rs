//! Subcommand implementations for the `optstop` binary.
//!
//! Every command reads or writes an [`InstanceFile`] and returns a
//! [`Report`]; `main.rs` only parses arguments and prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use optstop::dist::finite_only;
use optstop::eval::{evaluate_order, hindsight_max, makespan_value};
use optstop::fptas::{solve_common_endpoints, solve_general_left};
use optstop::oracle::{brute_force_order, DEFAULT_TIE_TOLERANCE};
use optstop::prophet::prophet_ratio;
use optstop::rules::{classify_st, solve_nested_uniform};
use optstop::shape::ZeroMidOne;
use optstop::two_point::{self, TwoPointInstance};
use optstop::{Dist, HardnessInstance, UniformDist};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const INSTANCE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] optstop::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("malformed instance: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for internal invariant failures, 2 for everything the caller can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(optstop::Error::Invariant(_)) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub variables: Vec<Dist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

impl InstanceFile {
    pub fn new(variables: Vec<Dist>) -> Self {
        Self {
            version: INSTANCE_VERSION,
            variables,
            metadata: None,
        }
    }

    pub fn from_slice(bytes: &[u8]) -> CliResult<Self> {
        let file: Self = serde_json::from_slice(bytes)?;
        if file.version != INSTANCE_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported instance version {}, expected {INSTANCE_VERSION}",
                file.version
            )));
        }
        if file.variables.is_empty() {
            return Err(CliError::Usage("instance has no variables".into()));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub arguments: Value,
    /// SHA-256 of the instance file bytes, read or written.
    pub instance_digest: String,
    pub result: Value,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Plain `key: value` lines for the terminal.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} ({:.3} ms)\n", self.command, self.wall_time_ms);
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                let _ = writeln!(out, "  {k}: {v}");
            }
        } else {
            let _ = writeln!(out, "  {}", self.result);
        }
        out
    }
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Loaded {
    file: InstanceFile,
    digest: String,
}

fn load(path: &Path) -> CliResult<Loaded> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Loaded {
        file: InstanceFile::from_slice(&bytes)?,
        digest: digest(&bytes),
    })
}

fn finish(command: &str, arguments: Value, digest: String, result: Value, start: Instant) -> Report {
    Report {
        command: command.into(),
        arguments,
        instance_digest: digest,
        result,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn resolve_order(order: Option<&[usize]>, n: usize) -> Vec<usize> {
    order.map_or_else(|| (0..n).collect(), <[usize]>::to_vec)
}

pub fn cmd_evaluate(path: &Path, order: Option<&[usize]>) -> CliResult<Report> {
    let start = Instant::now();
    let Loaded { file, digest } = load(path)?;
    let order = resolve_order(order, file.variables.len());
    let res = evaluate_order(&file.variables, &order).map_err(|e| CliError::Usage(e.to_string()))?;
    let seq: Vec<&Dist> = order.iter().map(|&i| &file.variables[i]).collect();
    let profile = makespan_value(&seq);
    let mut result = json!({
        "ordering": res.order,
        "value": res.value,
        "thresholds": res.thresholds,
        "excess": profile.excess,
        "continuation": profile.continuation,
        "makespan": profile.makespan,
    });
    if let Ok(e_max) = hindsight_max(&file.variables) {
        result["e_max"] = json!(e_max);
    }
    let args = json!({ "instance": path, "order": order });
    Ok(finish("evaluate", args, digest, result, start))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Brute,
    TwoPoint,
    Fptas,
    NestedUniform,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::TwoPoint => "two-point",
            Method::Fptas => "fptas",
            Method::NestedUniform => "nested-uniform",
        }
    }
}

pub fn cmd_solve(path: &Path, method: Method, eps: Option<f64>) -> CliResult<Report> {
    let start = Instant::now();
    match (method, eps) {
        (Method::Fptas, None) => return Err(CliError::Usage("--eps is required for fptas".into())),
        (m, Some(_)) if m != Method::Fptas => {
            return Err(CliError::Usage(format!("--eps does not apply to {}", m.name())))
        }
        _ => {}
    }
    let Loaded { file, digest } = load(path)?;
    let vars = &file.variables;
    let result = match method {
        Method::Brute => {
            let oracle = brute_force_order(vars, DEFAULT_TIE_TOLERANCE)?;
            let res = evaluate_order(vars, oracle.best_ordering())?;
            json!({
                "ordering": res.order,
                "value": res.value,
                "thresholds": res.thresholds,
                "optimal_orderings": oracle.best_orderings,
            })
        }
        Method::TwoPoint => {
            let res = two_point::solve(&TwoPointInstance::from_dists(vars)?);
            json!({ "ordering": res.order, "value": res.value, "thresholds": res.thresholds })
        }
        Method::NestedUniform => {
            let uniforms = vars
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    d.as_uniform().copied().ok_or_else(|| {
                        optstop::Error::InstanceShape(format!("variable {i} is not uniform"))
                    })
                })
                .collect::<Result<Vec<UniformDist>, _>>()?;
            let res = solve_nested_uniform(&uniforms).map_err(|e| match e {
                optstop::Error::NotNested => optstop::Error::InstanceShape(e.to_string()),
                e => e,
            })?;
            json!({ "ordering": res.order, "value": res.value, "thresholds": res.thresholds })
        }
        Method::Fptas => {
            let eps = eps.expect("checked above");
            let finite = finite_only(vars).map_err(|e| optstop::Error::InstanceShape(e.to_string()))?;
            let common = finite.iter().all(|d| ZeroMidOne::parse(d).is_ok());
            let res = if common {
                solve_common_endpoints(&finite, eps)?
            } else {
                solve_general_left(&finite, eps)?
            };
            let exact = evaluate_order(&finite, &res.ordering)?;
            json!({
                "ordering": res.ordering,
                "value": res.value,
                "thresholds": exact.thresholds,
                "solver": if common { "common-endpoints" } else { "general-left" },
                "epsilon": eps,
                "partitions_kept": res.partitions_kept,
                "partitions_before_trim": res.partitions_before_trim,
                "s_indices": res.s_indices,
                "t_indices": res.t_indices,
                "pinned_last": res.pinned_last,
            })
        }
    };
    let args = json!({ "instance": path, "method": method.name(), "eps": eps });
    Ok(finish("solve", args, digest, result, start))
}

pub fn cmd_prophet(path: &Path) -> CliResult<Report> {
    let start = Instant::now();
    let Loaded { file, digest } = load(path)?;
    let report = prophet_ratio(&TwoPointInstance::from_dists(&file.variables)?)?;
    let args = json!({ "instance": path });
    Ok(finish("prophet", args, digest, serde_json::to_value(report)?, start))
}

pub fn cmd_gen_hardness(integers: &[u64], target: u64, out: &Path) -> CliResult<Report> {
    let start = Instant::now();
    let inst = HardnessInstance::generate(integers, target).map_err(|e| CliError::Usage(e.to_string()))?;
    let m: Vec<f64> = inst.dists.iter().map(|d| d.atoms()[1]).collect();
    let mut file = InstanceFile::new(inst.dists.iter().cloned().map(Dist::from).collect());
    let mut meta = Map::new();
    meta.insert("gamma".into(), json!(inst.gamma()));
    meta.insert("B".into(), json!(target));
    file.metadata = Some(meta);
    let text = file.to_json();
    std::fs::write(out, &text).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let result = json!({
        "out": out,
        "gamma": inst.gamma(),
        "B": target,
        "m": m,
    });
    let args = json!({ "integers": integers, "target": target, "out": out });
    Ok(finish("gen-hardness", args, digest(text.as_bytes()), result, start))
}

/// Classifies `order`, or the oracle's first optimal ordering when absent.
pub fn cmd_check_structure(path: &Path, order: Option<&[usize]>) -> CliResult<Report> {
    let start = Instant::now();
    let Loaded { file, digest } = load(path)?;
    let finite = finite_only(&file.variables).map_err(|e| optstop::Error::InstanceShape(e.to_string()))?;
    let order = match order {
        Some(o) => o.to_vec(),
        None => brute_force_order(&finite, DEFAULT_TIE_TOLERANCE)?.best_ordering().to_vec(),
    };
    let res = evaluate_order(&finite, &order).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = classify_st(&res, &finite)?;
    let mut result = serde_json::to_value(report)?;
    result["ordering"] = json!(res.order);
    result["value"] = json!(res.value);
    result["thresholds"] = json!(res.thresholds);
    let args = json!({ "instance": path, "order": order });
    Ok(finish("check-structure", args, digest, result, start))
}
