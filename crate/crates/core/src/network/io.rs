//! JSON form of a network: `{"n", "edges": [{"i", "j", "w"}], "fields", "in", "out"}`
//! with 1-based vertices and exact weight strings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SpinNetwork;
use crate::error::{Error, Result};
use crate::exact::ExactReal;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub i: usize,
    pub j: usize,
    pub w: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<Value>>,
    #[serde(rename = "in")]
    pub input: usize,
    #[serde(rename = "out")]
    pub output: usize,
    /// Optional mirror involution as a 1-based permutation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<Vec<usize>>,
}

fn exact_value(v: &Value) -> Result<ExactReal> {
    match v {
        Value::String(s) => ExactReal::parse(s),
        Value::Number(n) => ExactReal::parse(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number or string, got {other}"))),
    }
}

fn one_based(k: usize, n: usize, what: &str) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::InvalidNetwork(format!("{what} index {k} outside 1..={n}")));
    }
    Ok(k - 1)
}

impl NetworkFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_network(&self) -> Result<SpinNetwork> {
        let n = self.n;
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push((one_based(e.i, n, "edge")?, one_based(e.j, n, "edge")?, exact_value(&e.w)?));
        }
        let fields = match &self.fields {
            Some(f) => f.iter().map(exact_value).collect::<Result<Vec<_>>>()?,
            None => vec![ExactReal::zero(); n],
        };
        let net = SpinNetwork::new(n, edges, fields, one_based(self.input, n, "input")?, one_based(self.output, n, "output")?)?;
        match &self.mirror {
            Some(m) => {
                let perm = m.iter().map(|&k| one_based(k, n, "mirror")).collect::<Result<Vec<_>>>()?;
                net.with_mirror(perm)
            }
            None => Ok(net),
        }
    }

    pub fn from_network(net: &SpinNetwork) -> Self {
        NetworkFile {
            n: net.n(),
            edges: net
                .couplings()
                .iter()
                .map(|(&(i, j), w)| EdgeEntry { i: i + 1, j: j + 1, w: Value::String(w.to_string()) })
                .collect(),
            fields: Some(net.fields().iter().map(|f| Value::String(f.to_string())).collect()),
            input: net.input() + 1,
            output: net.output() + 1,
            mirror: net.declared_mirror().map(|m| m.iter().map(|&k| k + 1).collect()),
        }
    }
}

pub fn parse_network(text: &str) -> Result<SpinNetwork> {
    NetworkFile::from_json(text)?.to_network()
}
