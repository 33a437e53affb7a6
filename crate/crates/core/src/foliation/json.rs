//! Serialized maps and foliations.

use serde::{Deserialize, Serialize};

use super::RationalMapLift;
use crate::error::{Error, Result};
use crate::exterior::json::FormJson;
use crate::ring::json::PolyJson;
use crate::ring::WeightedRing;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub k: i64,
    pub target_weights: Vec<u32>,
    pub polys: Vec<PolyJson>,
}

impl MapJson {
    pub fn from_map(f: &RationalMapLift) -> Self {
        MapJson {
            k: f.k(),
            target_weights: f.target().weights().to_vec(),
            polys: f.polys().iter().map(PolyJson::from_poly).collect(),
        }
    }

    pub fn to_map(&self) -> Result<RationalMapLift> {
        let target = WeightedRing::new(self.target_weights.clone())?;
        let polys = self.polys.iter().map(PolyJson::to_poly).collect::<Result<Vec<_>>>()?;
        let f = RationalMapLift::new(&target, polys)?;
        if f.k() != self.k {
            return Err(Error::DegreeMismatch(format!("declared k = {} but components have k = {}", self.k, f.k())));
        }
        Ok(f)
    }
}

/// A 1-form together with its declared degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliationJson {
    #[serde(flatten)]
    pub form: FormJson,
    pub delta: i64,
}
