//! JSON file formats: operators, functions, scan requests and calculus
//! requests/results.  Octonions serialize as arrays of eight reals in basis
//! order everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octonion::Octonion;
use crate::paralin::{OctMatrix, Side};
use crate::slicefun::SlicePolynomial;

pub fn oct_to_array(a: Octonion) -> [f64; 8] {
    a.c
}

pub fn oct_from_array(c: [f64; 8]) -> Result<Octonion> {
    let a = Octonion::new(c);
    if !a.is_finite() {
        return Err(Error::Domain("octonion coordinates must be finite".into()));
    }
    Ok(a)
}

/// `{"n": ..., "entries": row-major n x n array of 8-real arrays}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 8]>>,
}

impl OperatorJson {
    pub fn from_matrix(t: &OctMatrix) -> OperatorJson {
        OperatorJson {
            n: t.dim(),
            entries: t
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(oct_to_array).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<OctMatrix> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch(format!(
                "operator file declares n = {} but entries are {}x{}",
                self.n,
                self.entries.len(),
                self.entries.first().map_or(0, |r| r.len())
            )));
        }
        let mut rows = Vec::with_capacity(self.n);
        for row in &self.entries {
            let mut out = Vec::with_capacity(self.n);
            for &c in row {
                out.push(oct_from_array(c)?);
            }
            rows.push(out);
        }
        OctMatrix::from_rows(rows)
    }
}

/// Vectors serialize as JSON arrays of n octonion arrays.
pub fn vector_to_json(x: &crate::bimodule::OctVector) -> Vec<[f64; 8]> {
    x.0.iter().map(|&a| oct_to_array(a)).collect()
}

pub fn vector_from_json(entries: &[[f64; 8]]) -> Result<crate::bimodule::OctVector> {
    let mut out = Vec::with_capacity(entries.len());
    for &c in entries {
        out.push(oct_from_array(c)?);
    }
    Ok(crate::bimodule::OctVector(out))
}

/// `{"side": "left"|"right", "coeffs": array of 8-real arrays}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionJson {
    pub side: String,
    pub coeffs: Vec<[f64; 8]>,
}

impl FunctionJson {
    pub fn from_polynomial(p: &SlicePolynomial) -> FunctionJson {
        FunctionJson {
            side: side_name(p.side).into(),
            coeffs: p.coeffs.iter().map(|&a| oct_to_array(a)).collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<SlicePolynomial> {
        let side = parse_side(&self.side)?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(oct_from_array(c)?);
        }
        Ok(SlicePolynomial::new(side, coeffs))
    }
}

pub fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

pub fn parse_side(name: &str) -> Result<Side> {
    match name {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(Error::Domain(format!(
            "side must be \"left\" or \"right\", got \"{other}\""
        ))),
    }
}

/// Named builtin functions: `pow:m` and `exp:N` (truncated exponential).
pub fn builtin_function(spec: &str, side: Side) -> Result<Option<SlicePolynomial>> {
    if let Some(m) = spec.strip_prefix("pow:") {
        let m: usize = m
            .parse()
            .map_err(|_| Error::Domain(format!("bad power in \"{spec}\"")))?;
        return Ok(Some(SlicePolynomial::monomial(side, m)));
    }
    if let Some(n) = spec.strip_prefix("exp:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Domain(format!("bad truncation order in \"{spec}\"")))?;
        return Ok(Some(SlicePolynomial::exp_truncated(side, n)));
    }
    Ok(None)
}

/// Scan request: operator file reference plus slice/grid parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRequestJson {
    pub op: String,
    pub j: [f64; 8],
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub resolution: usize,
    pub kind: String,
    pub horizon: u32,
    pub pa_tol: f64,
}

/// Calculus request: operator file, function spec, slice unit, contour.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CalcRequestJson {
    pub op: String,
    pub function: String,
    pub j: [f64; 8],
    pub contour: ContourJson,
    pub side: String,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContourJson {
    pub center: f64,
    pub radius: f64,
    pub nodes: usize,
}

/// Calculus result: operator entries plus the quadrature diagnostics and
/// run provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CalcResultJson {
    pub operator: OperatorJson,
    pub error_estimate: f64,
    pub provenance: ProvenanceJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub tool_version: String,
    pub config_hash: String,
    pub nodes: usize,
    pub radius: f64,
    pub center: f64,
    pub horizon: u32,
    pub tolerances: ToleranceJson,
    pub power_assoc_evidence: String,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ToleranceJson {
    pub pa_tol: f64,
    pub quad_tol: f64,
}
