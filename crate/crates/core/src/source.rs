//! Loading and saving states, and the compact factory grammar the CLI uses.
//!
//! State files are JSON documents:
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "kind": "pure",
//!   "data": [[0.7071067811865476, 0.0], 0.0, 0.0, 0.7071067811865476]
//! }
//! ```
//!
//! `data` holds the amplitude vector (`kind: "pure"`, length `D`) or the
//! row-major density matrix (`kind: "density"`, length `D^2`); each entry is
//! either a bare real or an `[re, im]` pair. Loaded states pass the full
//! validation in [`crate::tensor`].
//!
//! Factory specs are strings like `ghz:4`, `ghz:3:theta=1.5708:pattern=010`,
//! `w:5`, `cluster:6` and `wnoise:<pure spec>:p=0.8`; anything that does not
//! start with a factory keyword is treated as a file path.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{ghz_with, linear_cluster, w_state, white_noise_mix};
use crate::tensor::{DensityOperator, PureState, fidelity_pure};

/// A state loaded from a file or produced by a factory: either pure or
/// mixed.
#[derive(Debug, Clone)]
pub enum StateInput {
    Pure(PureState),
    Density(DensityOperator),
}

impl StateInput {
    pub fn dims(&self) -> &[usize] {
        match self {
            StateInput::Pure(p) => p.dims(),
            StateInput::Density(d) => d.dims(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, StateInput::Pure(_))
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            StateInput::Pure(p) => Some(p),
            StateInput::Density(_) => None,
        }
    }

    /// The state as a density operator, projecting if pure.
    pub fn to_density(&self) -> DensityOperator {
        match self {
            StateInput::Pure(p) => p.to_density(),
            StateInput::Density(d) => d.clone(),
        }
    }

    /// `<phi| rho |phi>`, without materializing a projector when pure.
    pub fn fidelity_with(&self, phi: &PureState) -> Result<f64> {
        match self {
            StateInput::Pure(p) => Ok(p.overlap(phi)?.norm_sqr()),
            StateInput::Density(d) => fidelity_pure(d, phi),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pure,
    Density,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn to_c64(&self) -> C64 {
        match *self {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }

    fn from_c64(z: C64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    kind: Kind,
    data: Vec<Entry>,
}

/// Parses the JSON state-file format from a string.
pub fn state_from_json(text: &str) -> Result<StateInput> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let total: usize = file.dims.iter().product();
    match file.kind {
        Kind::Pure => {
            let amps: Vec<C64> = file.data.iter().map(Entry::to_c64).collect();
            let psi = PureState::new(file.dims, DVector::from_vec(amps))?;
            Ok(StateInput::Pure(psi))
        }
        Kind::Density => {
            if file.data.len() != total * total {
                return Err(Error::AmplitudeLength {
                    got: file.data.len(),
                    expected: total.saturating_mul(total),
                });
            }
            let mat = DMatrix::from_fn(total, total, |r, c| file.data[r * total + c].to_c64());
            Ok(StateInput::Density(DensityOperator::new(file.dims, mat)?))
        }
    }
}

/// Renders a state in the JSON state-file format (full precision).
pub fn state_to_json(state: &StateInput) -> String {
    let file = match state {
        StateInput::Pure(p) => StateFile {
            dims: p.dims().to_vec(),
            kind: Kind::Pure,
            data: p.amplitudes().iter().map(|&z| Entry::from_c64(z)).collect(),
        },
        StateInput::Density(d) => {
            let m = d.matrix();
            let n = m.nrows();
            let mut data = Vec::with_capacity(n * n);
            for r in 0..n {
                for c in 0..n {
                    data.push(Entry::from_c64(m[(r, c)]));
                }
            }
            StateFile {
                dims: d.dims().to_vec(),
                kind: Kind::Density,
                data,
            }
        }
    };
    serde_json::to_string_pretty(&file).expect("state file serialization cannot fail")
}

pub fn read_state_file(path: &Path) -> Result<StateInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    state_from_json(&text)
}

pub fn write_state_file(path: &Path, state: &StateInput) -> Result<()> {
    let mut text = state_to_json(state);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parse(format!("expected an integer {what}, got '{s}'")))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("expected a number for {what}, got '{s}'")))
}

fn parse_ghz_spec(rest: &str) -> Result<PureState> {
    let mut parts = rest.split(':');
    let n = parse_usize(parts.next().unwrap_or(""), "qubit count")?;
    let mut theta = 0.0;
    let mut pattern = 0u64;
    for part in parts {
        if let Some(v) = part.strip_prefix("theta=") {
            theta = parse_f64(v, "theta")?;
        } else if let Some(v) = part.strip_prefix("pattern=") {
            pattern = u64::from_str_radix(v, 2)
                .map_err(|_| Error::Parse(format!("pattern must be a bitstring, got '{v}'")))?;
            if v.len() != n {
                return Err(Error::Parse(format!(
                    "pattern '{v}' has {} bits for {n} qubits",
                    v.len()
                )));
            }
        } else {
            return Err(Error::Parse(format!("unknown ghz option '{part}'")));
        }
    }
    ghz_with(n, theta, pattern)
}

/// Resolves a state spec: a factory string or a path to a state file.
pub fn parse_state_spec(spec: &str) -> Result<StateInput> {
    let s = spec.trim();
    if let Some(rest) = s.strip_prefix("wnoise:") {
        let (inner, p) = rest.rsplit_once(":p=").ok_or_else(|| {
            Error::Parse(format!("wnoise spec needs a ':p=<visibility>' suffix: '{s}'"))
        })?;
        let p = parse_f64(p, "visibility")?;
        let psi = parse_pure_spec(inner)?;
        return Ok(StateInput::Density(white_noise_mix(&psi, p)?));
    }
    if let Some(rest) = s.strip_prefix("ghz:") {
        return Ok(StateInput::Pure(parse_ghz_spec(rest)?));
    }
    if let Some(rest) = s.strip_prefix("w:") {
        return Ok(StateInput::Pure(w_state(parse_usize(rest, "qubit count")?)?));
    }
    if let Some(rest) = s.strip_prefix("cluster:") {
        return Ok(StateInput::Pure(linear_cluster(parse_usize(
            rest,
            "qubit count",
        )?)?));
    }
    read_state_file(Path::new(s))
}

/// Like [`parse_state_spec`] but insists on a pure state (for reference
/// states).
pub fn parse_pure_spec(spec: &str) -> Result<PureState> {
    match parse_state_spec(spec)? {
        StateInput::Pure(p) => Ok(p),
        StateInput::Density(_) => Err(Error::Parse(format!(
            "'{spec}' is a mixed state; a pure state is required here"
        ))),
    }
}
