//! JSON input formats.
//!
//! A Verblunsky source is either an explicit list
//!
//! ```json
//! { "alphas": [0.5, 0.25, [0.1, 0.0]] }
//! ```
//!
//! where an entry may be a real or a `[re, im]` pair with zero imaginary part,
//! or a named family
//!
//! ```json
//! { "family": "mass_point", "params": { "m": 0.5 }, "n": 12 }
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Family;
use crate::seqcore::VerblunskySequence;

/// One coefficient as written in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl AlphaEntry {
    fn to_complex(self) -> Complex64 {
        match self {
            Self::Real(x) => Complex64::new(x, 0.0),
            Self::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Where a Verblunsky sequence comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSource {
    Explicit {
        alphas: Vec<AlphaEntry>,
    },
    Family {
        family: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
        n: usize,
    },
}

impl AlphaSource {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("alpha source: {e}")))
    }

    /// The family, for a family source.
    pub fn family(&self) -> Result<Option<Family>> {
        match self {
            Self::Explicit { .. } => Ok(None),
            Self::Family { family, params, .. } => {
                let param = params.get("alpha").or_else(|| params.get("m")).copied();
                if params.len() > 1 {
                    return Err(Error::InvalidInput(format!(
                        "family {family:?} takes a single parameter, got {params:?}"
                    )));
                }
                Family::from_name(family, param).map(Some)
            }
        }
    }

    pub fn sequence(&self) -> Result<VerblunskySequence> {
        match self {
            Self::Explicit { alphas } => {
                let values: Vec<Complex64> = alphas.iter().map(|a| a.to_complex()).collect();
                VerblunskySequence::from_complex(&values)
            }
            Self::Family { n, .. } => self.family()?.expect("family source").sequence(*n),
        }
    }
}
