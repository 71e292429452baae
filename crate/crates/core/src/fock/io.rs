//! JSON state files: `{"mode_dims": [d1, d2], "entries": [[i, j, k, l, re, im], ...]}`
//! where each entry sets `ρ[(i,k),(j,l)]`. Unlisted entries are zero.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FockOperator, Positivity, TwoModeState};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub mode_dims: Vec<usize>,
    pub entries: Vec<[f64; 6]>,
}

fn as_index(v: f64, bound: usize, what: &str) -> Result<usize> {
    if v.fract() != 0.0 || v < 0.0 || v >= bound as f64 {
        return Err(Error::StateFile(format!(
            "{what} index {v} is not an integer in 0..{bound}"
        )));
    }
    Ok(v as usize)
}

impl StateFile {
    pub fn to_operator(&self) -> Result<FockOperator> {
        let [da, db] = match self.mode_dims[..] {
            [da, db] if da > 0 && db > 0 => [da, db],
            _ => {
                return Err(Error::StateFile(format!(
                    "mode_dims must list two positive cutoffs, got {:?}",
                    self.mode_dims
                )))
            }
        };
        let mut data = CMatrix::zeros(da * db, da * db);
        for e in &self.entries {
            let i = as_index(e[0], da, "i")?;
            let j = as_index(e[1], da, "j")?;
            let k = as_index(e[2], db, "k")?;
            let l = as_index(e[3], db, "l")?;
            if !e[4].is_finite() || !e[5].is_finite() {
                return Err(Error::StateFile("non-finite matrix entry".into()));
            }
            data[(i * db + k, j * db + l)] = C64::new(e[4], e[5]);
        }
        FockOperator::new(data, vec![da, db])
    }

    pub fn from_operator(op: &FockOperator) -> Result<Self> {
        let [da, db] = match op.mode_dims() {
            [da, db] => [*da, *db],
            _ => return Err(Error::StateFile("state files hold two-mode operators".into())),
        };
        let mut entries = Vec::new();
        for r in 0..da * db {
            for c in 0..da * db {
                let z = op.data()[(r, c)];
                if z != C64::new(0.0, 0.0) {
                    let (i, k) = (r / db, r % db);
                    let (j, l) = (c / db, c % db);
                    entries.push([i as f64, j as f64, k as f64, l as f64, z.re, z.im]);
                }
            }
        }
        Ok(Self {
            mode_dims: vec![da, db],
            entries,
        })
    }
}

/// Parses a state from JSON text. The result must be hermitian with unit trace.
pub fn state_from_json(text: &str) -> Result<TwoModeState> {
    let file: StateFile = serde_json::from_str(text)?;
    TwoModeState::new(file.to_operator()?, Positivity::Unknown)
}

pub fn state_to_json(op: &FockOperator) -> Result<String> {
    Ok(serde_json::to_string(&StateFile::from_operator(op)?)?)
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<TwoModeState> {
    let text = std::fs::read_to_string(path)?;
    state_from_json(&text)
}
