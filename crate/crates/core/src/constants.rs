//! Physical constants and the JSON document they are loaded from.
//!
//! All kernels work in dimensionless units: energies as E/m0c^2 and
//! lengths in units of the reduced Compton wavelength hbar/m0c. The
//! constants here are only used to convert at the input/output boundary.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Built-in CODATA 2018 values.
pub const DEFAULT_DOCUMENT: &str = r#"{
  "alpha": 7.2973525693e-3,
  "electron_rest_energy_eV": 0.51099895000e6,
  "hbar_c_eV_nm": 197.3269804,
  "planck_eV_s": 4.135667696e-15
}"#;

pub const DEFAULT_PROVENANCE: &str = "CODATA 2018 (built-in)";

const KEY_ALPHA: &str = "alpha";
const KEY_REST: &str = "electron_rest_energy_eV";
const KEY_HBAR_C: &str = "hbar_c_eV_nm";
const KEY_PLANCK: &str = "planck_eV_s";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Fine-structure constant.
    pub alpha: f64,
    /// m0 c^2 in eV.
    pub electron_rest_energy: f64,
    /// hbar c in eV nm.
    pub hbar_c: f64,
    /// Planck constant h in eV s, used to turn energy differences into
    /// line frequencies.
    pub planck_frequency_factor: f64,
    /// Where the values came from; printed in report headers.
    pub provenance: String,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::from_json_str(DEFAULT_DOCUMENT, DEFAULT_PROVENANCE)
            .expect("built-in constants document is valid")
    }
}

impl PhysicalConstants {
    /// Parse a complete constants document. `alpha`,
    /// `electron_rest_energy_eV` and `hbar_c_eV_nm` are required;
    /// `planck_eV_s` falls back to the built-in value.
    pub fn from_json_str(text: &str, provenance: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Constants(e.to_string()))?;
        let map = value
            .as_object()
            .ok_or_else(|| Error::Constants("expected a JSON object".into()))?;
        Self::from_map(map, provenance)
    }

    /// Built-in document with selected keys replaced. An empty map yields
    /// the defaults.
    pub fn with_overrides(overrides: &Map<String, Value>) -> Result<Self> {
        let mut map: Map<String, Value> =
            serde_json::from_str(DEFAULT_DOCUMENT).expect("built-in document parses");
        for (key, value) in overrides {
            map.insert(key.clone(), value.clone());
        }
        let provenance = if overrides.is_empty() {
            DEFAULT_PROVENANCE.to_string()
        } else {
            let mut keys: Vec<&str> = overrides.keys().map(String::as_str).collect();
            keys.sort_unstable();
            format!("{DEFAULT_PROVENANCE} with overrides [{}]", keys.join(", "))
        };
        Self::from_map(&map, &provenance)
    }

    /// Same constants with a different fine-structure constant.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let out = Self {
            alpha,
            provenance: format!("{} with alpha = {alpha}", self.provenance),
            ..self.clone()
        };
        out.validate()?;
        Ok(out)
    }

    fn from_map(map: &Map<String, Value>, provenance: &str) -> Result<Self> {
        for key in map.keys() {
            if ![KEY_ALPHA, KEY_REST, KEY_HBAR_C, KEY_PLANCK].contains(&key.as_str()) {
                return Err(Error::Constants(format!("unknown key `{key}`")));
            }
        }
        let get = |key: &str| -> Result<f64> {
            map.get(key)
                .ok_or_else(|| Error::Constants(format!("missing key `{key}`")))?
                .as_f64()
                .ok_or_else(|| Error::Constants(format!("`{key}` is not a number")))
        };
        let planck = match map.get(KEY_PLANCK) {
            Some(_) => get(KEY_PLANCK)?,
            None => Self::default_planck(),
        };
        let constants = Self {
            alpha: get(KEY_ALPHA)?,
            electron_rest_energy: get(KEY_REST)?,
            hbar_c: get(KEY_HBAR_C)?,
            planck_frequency_factor: planck,
            provenance: provenance.to_string(),
        };
        constants.validate()?;
        Ok(constants)
    }

    fn default_planck() -> f64 {
        let map: Map<String, Value> =
            serde_json::from_str(DEFAULT_DOCUMENT).expect("built-in document parses");
        map[KEY_PLANCK]
            .as_f64()
            .expect("built-in planck is numeric")
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            (KEY_ALPHA, self.alpha),
            (KEY_REST, self.electron_rest_energy),
            (KEY_HBAR_C, self.hbar_c),
            (KEY_PLANCK, self.planck_frequency_factor),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Constants(format!(
                    "`{name}` must be finite and strictly positive, got {value}"
                )));
            }
        }
        if self.alpha >= 0.5 {
            return Err(Error::Constants(format!(
                "alpha must be below 0.5, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Reduced Compton wavelength hbar/m0c in nm; the internal length unit.
    pub fn compton_length_nm(&self) -> f64 {
        self.hbar_c / self.electron_rest_energy
    }
}

/// Test and exploration helper: constants with an arbitrary fine-structure
/// constant, including zero, which the validated constructors reject.
/// Only the closed-form kernels accept such a value.
pub fn unchecked_with_alpha(base: &PhysicalConstants, alpha: f64) -> PhysicalConstants {
    PhysicalConstants {
        alpha,
        provenance: format!("{} with alpha = {alpha} (unchecked)", base.provenance),
        ..base.clone()
    }
}
