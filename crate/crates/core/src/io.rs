//! JSON forms of parameter vectors, phase points and states.
//!
//! Exact values are written as `"num/den"` strings; float values as JSON
//! numbers. Readers accept either where the conversion is lossless.

use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::backlund::TransformedState;
use crate::error::{Error, Result};
use crate::hamiltonian::PhasePoint;
use crate::scalar::{parse_rational, rational_to_f64, Rational, Scalar};
use crate::weyl::{ParameterVector, RANK};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Text(String),
    Number(f64),
}

impl JsonScalar {
    pub fn exact<T: Display>(x: &T) -> Self {
        JsonScalar::Text(x.to_string())
    }

    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            JsonScalar::Text(t) => {
                parse_rational(t).ok_or_else(|| Error::Parse(format!("not a rational: {t:?}")))
            }
            JsonScalar::Number(x) if x.is_finite() && x.fract() == 0.0 && x.abs() < 9.0e15 => {
                Ok(Rational::from_i64(*x as i64))
            }
            JsonScalar::Number(x) => Err(Error::Parse(format!(
                "non-integer number {x} in exact mode; write it as a \"num/den\" string"
            ))),
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            JsonScalar::Number(x) => Ok(*x),
            JsonScalar::Text(_) => self.to_rational().map(|r| rational_to_f64(&r)),
        }
    }
}

fn fixed<const N: usize, T>(
    name: &str,
    v: &[JsonScalar],
    f: impl Fn(&JsonScalar) -> Result<T>,
) -> Result<[T; N]> {
    if v.len() != N {
        return Err(Error::Parse(format!(
            "{name}: expected {N} entries, found {}",
            v.len()
        )));
    }
    let items = v.iter().map(f).collect::<Result<Vec<T>>>()?;
    items
        .try_into()
        .map_err(|_| Error::Parse(format!("{name}: wrong length")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub alpha: Vec<JsonScalar>,
}

impl ParamsJson {
    pub fn from_exact<T: Display>(a: &ParameterVector<T>) -> Self {
        ParamsJson {
            alpha: a.0.iter().map(JsonScalar::exact).collect(),
        }
    }

    pub fn to_exact(&self) -> Result<ParameterVector<Rational>> {
        fixed::<RANK, _>("alpha", &self.alpha, JsonScalar::to_rational).map(ParameterVector)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub q: Vec<JsonScalar>,
    pub p: Vec<JsonScalar>,
    pub s: JsonScalar,
}

impl PointJson {
    pub fn from_exact<T: Display>(z: &PhasePoint<T>) -> Self {
        PointJson {
            q: z.q.iter().map(JsonScalar::exact).collect(),
            p: z.p.iter().map(JsonScalar::exact).collect(),
            s: JsonScalar::exact(&z.s),
        }
    }

    pub fn from_f64(z: &PhasePoint<f64>) -> Self {
        PointJson {
            q: z.q.iter().map(|&x| JsonScalar::Number(x)).collect(),
            p: z.p.iter().map(|&x| JsonScalar::Number(x)).collect(),
            s: JsonScalar::Number(z.s),
        }
    }

    pub fn to_exact(&self) -> Result<PhasePoint<Rational>> {
        Ok(PhasePoint {
            q: fixed::<3, _>("q", &self.q, JsonScalar::to_rational)?,
            p: fixed::<3, _>("p", &self.p, JsonScalar::to_rational)?,
            s: self.s.to_rational()?,
        })
    }

    pub fn to_f64(&self) -> Result<PhasePoint<f64>> {
        Ok(PhasePoint {
            q: fixed::<3, _>("q", &self.q, JsonScalar::to_f64)?,
            p: fixed::<3, _>("p", &self.p, JsonScalar::to_f64)?,
            s: self.s.to_f64()?,
        })
    }
}

/// `{"q": [...], "p": [...], "s": ..., "alpha": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub q: Vec<JsonScalar>,
    pub p: Vec<JsonScalar>,
    pub s: JsonScalar,
    pub alpha: Vec<JsonScalar>,
}

impl StateJson {
    pub fn from_exact<T: Display + Scalar>(st: &TransformedState<T>) -> Self {
        let z = PointJson::from_exact(&st.point);
        StateJson {
            q: z.q,
            p: z.p,
            s: z.s,
            alpha: ParamsJson::from_exact(&st.params).alpha,
        }
    }

    pub fn from_f64(st: &TransformedState<f64>) -> Self {
        let z = PointJson::from_f64(&st.point);
        StateJson {
            q: z.q,
            p: z.p,
            s: z.s,
            alpha: st.params.0.iter().map(|&x| JsonScalar::Number(x)).collect(),
        }
    }

    fn point(&self) -> PointJson {
        PointJson {
            q: self.q.clone(),
            p: self.p.clone(),
            s: self.s.clone(),
        }
    }

    pub fn to_exact(&self) -> Result<TransformedState<Rational>> {
        Ok(TransformedState {
            point: self.point().to_exact()?,
            params: ParamsJson {
                alpha: self.alpha.clone(),
            }
            .to_exact()?,
        })
    }

    pub fn to_f64(&self) -> Result<TransformedState<f64>> {
        Ok(TransformedState {
            point: self.point().to_f64()?,
            params: ParameterVector(fixed::<RANK, _>("alpha", &self.alpha, JsonScalar::to_f64)?),
        })
    }
}

pub fn parse_state(text: &str) -> Result<StateJson> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
