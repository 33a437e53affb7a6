//! Serialized differential forms: components keyed by comma-separated
//! index tuples such as `"0,2"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DiffForm;
use crate::error::{Error, Result};
use crate::ring::json::{terms_from_json, terms_to_json, TermJson};
use crate::ring::WeightedRing;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub p: usize,
    pub weights: Vec<u32>,
    pub components: BTreeMap<String, Vec<TermJson>>,
}

pub fn index_key(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_key(key: &str, p: usize, nvars: usize) -> Result<Vec<usize>> {
    let idx: Vec<usize> = if key.trim().is_empty() {
        Vec::new()
    } else {
        key.split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad component key {key:?}"))))
            .collect::<Result<_>>()?
    };
    if idx.len() != p {
        return Err(Error::Input(format!("component key {key:?} does not have {p} indices")));
    }
    if let Some(&i) = idx.iter().find(|&&i| i >= nvars) {
        return Err(Error::Index { index: i, nvars });
    }
    Ok(idx)
}

impl FormJson {
    pub fn from_form(w: &DiffForm) -> Self {
        FormJson {
            p: w.degree_p(),
            weights: w.ring().weights().to_vec(),
            components: w.components().map(|(i, a)| (index_key(i), terms_to_json(a))).collect(),
        }
    }

    pub fn to_form(&self) -> Result<DiffForm> {
        let ring = WeightedRing::new(self.weights.clone())?;
        self.to_form_in(&ring)
    }

    pub fn to_form_in(&self, ring: &WeightedRing) -> Result<DiffForm> {
        if ring.weights() != self.weights.as_slice() {
            return Err(Error::RingMismatch);
        }
        let mut w = DiffForm::zero(ring, self.p);
        for (key, terms) in &self.components {
            let idx = parse_key(key, self.p, ring.nvars())?;
            w.add_component(idx, &terms_from_json(ring, terms)?);
        }
        Ok(w)
    }
}
