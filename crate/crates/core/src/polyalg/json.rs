use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, NPoly, TrigPoly};
use crate::error::Error;

/// Wire form of a polynomial:
/// `{"nvars": n, "terms": [{"alpha": [..], "re": x, "im": y}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<i32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<TrigPoly> for PolyJson {
    fn from(p: TrigPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(a, c)| TermJson {
                    alpha: a.entries().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl From<NPoly> for PolyJson {
    fn from(p: NPoly) -> Self {
        p.into_trig().into()
    }
}

impl TryFrom<PolyJson> for TrigPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self, Error> {
        TrigPoly::from_terms(
            j.nvars,
            j.terms
                .into_iter()
                .map(|t| (MultiIndex::new(t.alpha), Complex64::new(t.re, t.im))),
        )
    }
}

impl TryFrom<PolyJson> for NPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self, Error> {
        NPoly::from_trig(TrigPoly::try_from(j)?)
    }
}
