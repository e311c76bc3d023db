//! File formats shared by the library and the command-line tool.
//!
//! Tuples serialize as
//!
//! ```json
//! {"n": 3, "d": 2, "kind": "pure", "states": [[[re, im], [re, im]], ...]}
//! ```
//!
//! with mixed tuples carrying `n` matrices of `d` rows of `[re, im]` pairs
//! instead. Gram matrices serialize as `{"n": …, "entries": [[[re, im], …], …]}`
//! and boundary samples as CSV with header `theta,re,im,radius`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::range::BoundarySample;
use crate::state::{DensityMatrix, MixedTuple, PureTuple, StateVector, Tuple};
use crate::synthesis::{Method, SynthesisResult};
use crate::C64;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub n: usize,
    pub d: usize,
    pub kind: Kind,
    pub states: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisJson {
    #[serde(flatten)]
    pub tuple: TupleJson,
    pub method: Method,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramJson {
    pub n: usize,
    pub entries: Vec<Vec<Pair>>,
}

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn matrix_rows(m: &DMatrix<C64>) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

fn field_error(field: String, err: impl std::fmt::Display) -> Error {
    Error::Format(format!("field `{field}`: {err}"))
}

fn rows_to_matrix(rows: &[Vec<Pair>], d: usize, field: &str) -> Result<DMatrix<C64>> {
    if rows.len() != d {
        return Err(field_error(field.into(), format!("expected {d} rows, found {}", rows.len())));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(field_error(
                format!("{field}[{r}]"),
                format!("expected {d} entries, found {}", row.len()),
            ));
        }
    }
    Ok(DMatrix::from_fn(d, d, |r, c| complex(rows[r][c])))
}

impl TupleJson {
    pub fn from_pure(tuple: &PureTuple) -> Self {
        let states: Vec<Vec<Pair>> = tuple
            .states()
            .iter()
            .map(|s| s.amplitudes().iter().copied().map(pair).collect())
            .collect();
        TupleJson {
            n: tuple.len(),
            d: tuple.dim(),
            kind: Kind::Pure,
            states: serde_json::to_value(states).expect("plain numbers serialize"),
        }
    }

    pub fn from_mixed(tuple: &MixedTuple) -> Self {
        let states: Vec<Vec<Vec<Pair>>> = tuple
            .states()
            .iter()
            .map(|rho| matrix_rows(rho.entries()))
            .collect();
        TupleJson {
            n: tuple.len(),
            d: tuple.dim(),
            kind: Kind::Mixed,
            states: serde_json::to_value(states).expect("plain numbers serialize"),
        }
    }

    pub fn from_tuple(tuple: &Tuple) -> Self {
        match tuple {
            Tuple::Pure(t) => Self::from_pure(t),
            Tuple::Mixed(t) => Self::from_mixed(t),
        }
    }

    /// Validates shapes and state invariants, naming the offending field.
    pub fn to_tuple(&self) -> Result<Tuple> {
        if self.n == 0 {
            return Err(field_error("n".into(), "must be at least 1"));
        }
        if self.d == 0 {
            return Err(field_error("d".into(), "must be at least 1"));
        }
        match self.kind {
            Kind::Pure => {
                let raw: Vec<Vec<Pair>> = serde_json::from_value(self.states.clone())
                    .map_err(|e| field_error("states".into(), e))?;
                if raw.len() != self.n {
                    return Err(field_error(
                        "states".into(),
                        format!("expected n = {} states, found {}", self.n, raw.len()),
                    ));
                }
                let states = raw
                    .iter()
                    .enumerate()
                    .map(|(j, amps)| {
                        if amps.len() != self.d {
                            return Err(field_error(
                                format!("states[{j}]"),
                                format!("expected d = {} amplitudes, found {}", self.d, amps.len()),
                            ));
                        }
                        let v = DVector::from_iterator(self.d, amps.iter().copied().map(complex));
                        StateVector::new(v).map_err(|e| field_error(format!("states[{j}]"), e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Tuple::Pure(PureTuple::new(states)?))
            }
            Kind::Mixed => {
                let raw: Vec<Vec<Vec<Pair>>> = serde_json::from_value(self.states.clone())
                    .map_err(|e| field_error("states".into(), e))?;
                if raw.len() != self.n {
                    return Err(field_error(
                        "states".into(),
                        format!("expected n = {} states, found {}", self.n, raw.len()),
                    ));
                }
                let states = raw
                    .iter()
                    .enumerate()
                    .map(|(j, rows)| {
                        let field = format!("states[{j}]");
                        let m = rows_to_matrix(rows, self.d, &field)?;
                        DensityMatrix::new(m).map_err(|e| field_error(field, e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Tuple::Mixed(MixedTuple::new(states)?))
            }
        }
    }
}

/// Parses tuple JSON text; syntax errors report line and column.
pub fn parse_tuple(text: &str) -> Result<Tuple> {
    let raw: TupleJson = serde_json::from_str(text).map_err(|e| {
        Error::Format(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    raw.to_tuple()
}

pub fn tuple_to_json(tuple: &Tuple) -> String {
    serde_json::to_string_pretty(&TupleJson::from_tuple(tuple)).expect("serializable")
}

pub fn synthesis_to_json(result: &SynthesisResult) -> String {
    let out = SynthesisJson {
        tuple: TupleJson::from_pure(&result.tuple),
        method: result.method,
        residual: result.residual,
    };
    serde_json::to_string_pretty(&out).expect("serializable")
}

impl GramJson {
    pub fn from_gram(h: &GramMatrix) -> Self {
        GramJson {
            n: h.n(),
            entries: matrix_rows(h.entries()),
        }
    }

    pub fn to_gram(&self) -> Result<GramMatrix> {
        let m = rows_to_matrix(&self.entries, self.n, "entries")?;
        GramMatrix::new(m).map_err(|e| field_error("entries".into(), e))
    }
}

pub fn parse_gram(text: &str) -> Result<GramMatrix> {
    let raw: GramJson = serde_json::from_str(text).map_err(|e| {
        Error::Format(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    raw.to_gram()
}

/// `theta,re,im,radius` rows.
pub fn boundary_csv(samples: &[BoundarySample]) -> String {
    let mut out = String::from("theta,re,im,radius\n");
    for s in samples {
        writeln!(out, "{},{},{},{}", s.theta, s.point.re, s.point.im, s.radius).expect("string write");
    }
    out
}
