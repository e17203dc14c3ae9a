//! JSON formats for problems, Schur parameters, Leech data and realizations.
//!
//! Matrices are nested row-major arrays whose entries are `[re, im]` pairs or
//! bare real numbers.

use anyhow::{anyhow, bail, Context, Result};
use ltonp::fronts::{CommutantLiftingInstance, LeechInstance};
use ltonp::kernel::{c64, CMatrix};
use ltonp::problem::ProblemData;
use ltonp::solver::SchurParameter;
use ltonp::RationalSystem;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;

fn parse_entry(v: &Value) -> Result<ltonp::C64> {
    match v {
        Value::Number(n) => Ok(c64(n.as_f64().ok_or_else(|| anyhow!("bad number"))?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| anyhow!("bad real part"))?;
            let im = pair[1].as_f64().ok_or_else(|| anyhow!("bad imaginary part"))?;
            Ok(c64(re, im))
        }
        other => bail!("matrix entry must be a number or [re, im], got {other}"),
    }
}

pub fn parse_matrix(v: &Value) -> Result<CMatrix> {
    let rows = v.as_array().ok_or_else(|| anyhow!("matrix must be an array of rows"))?;
    let parsed: Vec<Vec<ltonp::C64>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| anyhow!("matrix row must be an array"))?
                .iter()
                .map(parse_entry)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != cols) {
        bail!("ragged matrix rows");
    }
    Ok(CMatrix::from_fn(parsed.len(), cols, |i, j| parsed[i][j]))
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(rename = "Z")]
    pub z: Value,
    #[serde(rename = "B")]
    pub b: Value,
    #[serde(rename = "Btilde")]
    pub btilde: Value,
}

impl ProblemFile {
    pub fn matrices(&self) -> Result<(CMatrix, CMatrix, CMatrix)> {
        Ok((
            parse_matrix(&self.z).context("Z")?,
            parse_matrix(&self.b).context("B")?,
            parse_matrix(&self.btilde).context("Btilde")?,
        ))
    }

    pub fn problem(&self) -> Result<ProblemData> {
        let (z, b, bt) = self.matrices()?;
        Ok(ProblemData::new(z, b, bt)?)
    }

    pub fn lifting(&self) -> Result<CommutantLiftingInstance> {
        let (z, b, btilde) = self.matrices()?;
        Ok(CommutantLiftingInstance { z, b, btilde })
    }

    pub fn from_problem(prob: &ProblemData) -> Self {
        Self { z: matrix_json(&prob.z), b: matrix_json(&prob.b), btilde: matrix_json(&prob.btilde) }
    }
}

pub fn system_json(s: &RationalSystem) -> Value {
    json!({
        "alpha": matrix_json(&s.alpha),
        "beta": matrix_json(&s.beta),
        "gamma": matrix_json(&s.gamma),
        "delta": matrix_json(&s.delta),
        "contractive_system_matrix": s.contractive_system_matrix,
        "spectral_radius_alpha": s.spectral_radius_alpha,
    })
}

pub fn parse_system(v: &Value) -> Result<RationalSystem> {
    let get = |k: &str| parse_matrix(v.get(k).ok_or_else(|| anyhow!("system needs {k}"))?).context(k.to_owned());
    Ok(RationalSystem::new(get("alpha")?, get("beta")?, get("gamma")?, get("delta")?)?)
}

/// `{"constant": M}` or `{"system": {alpha, beta, gamma, delta}}`.
pub fn parse_parameter(v: &Value) -> Result<SchurParameter> {
    if let Some(m) = v.get("constant") {
        return Ok(SchurParameter::Constant(parse_matrix(m)?));
    }
    if let Some(s) = v.get("system") {
        return Ok(SchurParameter::Dynamic(parse_system(s)?));
    }
    bail!("parameter file needs a \"constant\" or \"system\" key")
}

pub fn parameter_json(x: &SchurParameter) -> Value {
    match x {
        SchurParameter::Constant(m) => json!({ "constant": matrix_json(m) }),
        SchurParameter::Dynamic(s) => json!({ "system": system_json(s) }),
    }
}

/// `{"G": [coefficients], "K": [coefficients], "N": order}`.
pub fn parse_leech(v: &Value) -> Result<LeechInstance> {
    let list = |k: &str| -> Result<Vec<CMatrix>> {
        v.get(k)
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("Leech file needs a {k} array"))?
            .iter()
            .map(parse_matrix)
            .collect()
    };
    let order = v.get("N").and_then(Value::as_u64).ok_or_else(|| anyhow!("Leech file needs integer N"))?;
    Ok(LeechInstance::new(list("G")?, list("K")?, order as usize)?)
}

pub fn leech_json(l: &LeechInstance) -> Value {
    json!({
        "G": l.g_coeffs.iter().map(matrix_json).collect::<Vec<_>>(),
        "K": l.k_coeffs.iter().map(matrix_json).collect::<Vec<_>>(),
        "N": l.order,
    })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_problem(path: &Path) -> Result<ProblemFile> {
    Ok(serde_json::from_value(read_json(path)?)?)
}
