//! JSON state files.
//!
//! ```json
//! {"kind": "pure", "re": [0.7071067811865476, 0, 0, 0.7071067811865476]}
//! {"kind": "density", "dim": 2, "re": [0.5, 0, 0, 0.5], "im": [0, 0, 0, 0]}
//! ```
//! Density matrices are row-major; `im` may be omitted for real input.

use std::fs;
use std::path::Path;

use qmetro::{ComplexMatrix, DensityMatrix, HermitianMatrix, PureState, C64};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Raw {
    Pure {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
    Density {
        dim: usize,
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
}

pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl LoadedState {
    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        match self {
            LoadedState::Pure(p) => Ok(p.to_density()?),
            LoadedState::Mixed(d) => Ok(d.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            LoadedState::Pure(p) => p.dim(),
            LoadedState::Mixed(d) => d.dim(),
        }
    }

    /// Qubit count, when the dimension is a power of two.
    pub fn qubits(&self) -> Result<usize, CliError> {
        let d = self.dim();
        if d.is_power_of_two() {
            Ok(d.trailing_zeros() as usize)
        } else {
            Err(CliError::Usage(format!("state dimension {d} is not a qubit register")))
        }
    }
}

fn complex(re: Vec<f64>, im: Option<Vec<f64>>) -> Result<Vec<C64>, CliError> {
    match im {
        None => Ok(re.into_iter().map(|r| C64::new(r, 0.0)).collect()),
        Some(im) if im.len() == re.len() => Ok(re.into_iter().zip(im).map(|(r, i)| C64::new(r, i)).collect()),
        Some(im) => Err(CliError::Usage(format!("re has {} entries but im has {}", re.len(), im.len()))),
    }
}

pub fn parse(text: &str) -> Result<LoadedState, CliError> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad state file: {e}")))?;
    match raw {
        Raw::Pure { re, im } => Ok(LoadedState::Pure(PureState::new(complex(re, im)?)?)),
        Raw::Density { dim, re, im } => {
            let m = ComplexMatrix::from_row_major(dim, &complex(re, im)?)?;
            Ok(LoadedState::Mixed(DensityMatrix::new(HermitianMatrix::new(m)?)?))
        }
    }
}

pub fn load(path: &Path) -> Result<LoadedState, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read state {}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_and_density() {
        let h = 0.5f64.sqrt();
        let p = parse(&format!(r#"{{"kind":"pure","re":[{h},0,0,{h}]}}"#)).unwrap();
        assert_eq!(p.qubits().unwrap(), 2);
        let d = parse(r#"{"kind":"density","dim":2,"re":[0.5,0,0,0.5],"im":[0,0,0,0]}"#).unwrap();
        assert_eq!(d.dim(), 2);
        assert!(parse(r#"{"kind":"density","dim":2,"re":[1,0,0,1]}"#).is_err());
        assert!(parse(r#"{"kind":"pure","re":[1,0,0]}"#).unwrap().qubits().is_err());
    }
}
