//! JSON wire forms for ring elements and code files.
//!
//! An element of `Z_{p^v}` is an integer. An element of `F_q[u]/(u^v)` is an
//! array of `v` arrays of `m` integers: little-endian in `u`, then in the
//! field generator.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::ring::{ChainRing, Elem, Family, RingDescriptor};

impl ChainRing {
    pub fn encode(&self, a: Elem) -> Value {
        match self.family() {
            Family::Zpv => Value::from(a.code()),
            Family::FqU => {
                let (p, m) = (self.p(), self.m());
                let mut code = a.code();
                let mut blocks = Vec::with_capacity(self.v() as usize);
                for _ in 0..self.v() {
                    let mut block = Vec::with_capacity(m as usize);
                    for _ in 0..m {
                        block.push(Value::from(code % p));
                        code /= p;
                    }
                    blocks.push(Value::Array(block));
                }
                Value::Array(blocks)
            }
        }
    }

    pub fn decode(&self, value: &Value) -> Result<Elem> {
        let bad = || Error::Encoding(format!("{value} is not an element of {}", self.name()));
        match self.family() {
            Family::Zpv => {
                let x = value.as_u64().ok_or_else(bad)?;
                if x >= self.size() as u64 {
                    return Err(bad());
                }
                Ok(Elem(x as u32))
            }
            Family::FqU => {
                let blocks = value
                    .as_array()
                    .filter(|b| b.len() == self.v() as usize)
                    .ok_or_else(bad)?;
                let (p, m) = (self.p(), self.m());
                let mut code: u64 = 0;
                let mut scale: u64 = 1;
                for block in blocks {
                    let digits = block
                        .as_array()
                        .filter(|d| d.len() == m as usize)
                        .ok_or_else(bad)?;
                    for d in digits {
                        let d = d.as_u64().filter(|&d| d < p as u64).ok_or_else(bad)?;
                        code += d * scale;
                        scale *= p as u64;
                    }
                }
                Ok(Elem(code as u32))
            }
        }
    }

    pub fn encode_vec(&self, xs: &[Elem]) -> Vec<Value> {
        xs.iter().map(|&x| self.encode(x)).collect()
    }

    pub fn decode_vec(&self, xs: &[Value]) -> Result<Vec<Elem>> {
        xs.iter().map(|x| self.decode(x)).collect()
    }
}

/// `{"ring": ..., "n": ..., "generators": [[element, ...], ...]}` plus
/// optional descriptive fields on output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub ring: RingDescriptor,
    pub n: usize,
    pub generators: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_vector: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<bool>,
}

impl CodeFile {
    pub fn from_code(code: &LinearCode) -> Self {
        let ring = code.ring();
        CodeFile {
            ring: ring.descriptor(),
            n: code.len(),
            generators: code.rows().iter().map(|r| ring.encode_vec(r)).collect(),
            type_vector: Some(code.type_vector().to_vec()),
            cardinality: Some(code.cardinality_string()),
            free: Some(code.is_free()),
        }
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let ring = ChainRing::new(&self.ring)?;
        let rows = self
            .generators
            .iter()
            .map(|g| {
                if g.len() != self.n {
                    return Err(Error::LengthMismatch {
                        expected: self.n,
                        got: g.len(),
                    });
                }
                ring.decode_vec(g)
            })
            .collect::<Result<Vec<_>>>()?;
        LinearCode::new(&ring, self.n, rows)
    }
}
