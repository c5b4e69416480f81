//! Simulation configuration, read from a single JSON document.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{make_grid, PeriodicGrid};
use crate::symbols::DissipationSpec;

/// An L^p exponent in `[1, ∞]`; serialized as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(pub f64);

impl Exponent {
    pub const INF: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "L^p exponent must be >= 1, got {p}"
            )));
        }
        Ok(Self(p))
    }

    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }

    /// Column and map key: `"2"`, `"1.5"`, `"inf"`.
    pub fn label(self) -> String {
        if self.is_inf() {
            "inf".to_string()
        } else {
            format!("{}", self.0)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(Self::INF),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("not an L^p exponent: {s:?}")))?;
                Self::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_inf() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VelocityKind {
    Zero,
    /// 2D divergence-free field from a stream function.
    Stream,
    /// Analytic field with nonzero divergence.
    Compressible,
    /// Sampled components supplied by the caller.
    Custom,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE", deny_unknown_fields)]
pub enum TimeDependence {
    #[default]
    Steady,
    /// The steady field times `cos(frequency·t)`.
    Oscillatory { frequency: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocityConfig {
    pub kind: VelocityKind,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub time_dependence: TimeDependence,
    /// Components for `CUSTOM`, one flat row-major array per axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Vec<f64>>>,
}

fn default_cfl() -> f64 {
    0.5
}

fn default_sample_every() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub dim: usize,
    pub n: usize,
    pub half_width: f64,
    pub spec: DissipationSpec,
    pub velocity: VelocityConfig,
    pub theta_seed: u64,
    pub p_list: Vec<Exponent>,
    pub t_final: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    /// Where the norm series CSV goes; the CLI fills this from `--out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
    /// Where the JSON report goes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_path: Option<PathBuf>,
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        make_grid(self.dim, self.n, self.half_width)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.grid().map_err(|e| Error::Config(e.to_string()))?;
        self.spec
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.p_list.is_empty() {
            return bad("p_list must not be empty".into());
        }
        if let Some(p) = self.p_list.iter().find(|p| p.0.is_nan() || p.0 < 1.0) {
            return bad(format!("p_list entries must be >= 1, got {}", p.0));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!(
                "t_final must be finite and >= 0, got {}",
                self.t_final
            ));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return bad(format!("cfl must be positive, got {}", self.cfl));
        }
        if self.sample_every == 0 {
            return bad("sample_every must be >= 1".into());
        }
        let v = &self.velocity;
        if !(v.amplitude >= 0.0 && v.amplitude.is_finite()) {
            return bad(format!(
                "velocity amplitude must be >= 0, got {}",
                v.amplitude
            ));
        }
        if v.kind == VelocityKind::Stream && self.dim != 2 {
            return bad("STREAM velocity requires dim = 2".into());
        }
        if let TimeDependence::Oscillatory { frequency } = v.time_dependence {
            if !frequency.is_finite() {
                return bad("oscillation frequency must be finite".into());
            }
        }
        match (v.kind, &v.samples) {
            (VelocityKind::Custom, None) => return bad("CUSTOM velocity needs `samples`".into()),
            (VelocityKind::Custom, Some(s)) => {
                let len = self.n.pow(self.dim as u32);
                if s.len() != self.dim || s.iter().any(|c| c.len() != len) {
                    return bad(format!(
                        "CUSTOM samples must be {} arrays of {len} values",
                        self.dim
                    ));
                }
            }
            (_, Some(_)) => return bad("`samples` is only allowed for CUSTOM velocity".into()),
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "dim": 2, "n": 32, "half_width": 3.141592653589793,
        "spec": {"variant": "A", "gamma": 1.0, "beta": 1.0, "lambda": 2.0, "nu": 0.1},
        "velocity": {"kind": "STREAM", "amplitude": 1.0, "seed": 42},
        "theta_seed": 7, "p_list": [1, 2, "inf"], "t_final": 0.5
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = SimConfig::from_json(BASE).unwrap();
        assert_eq!(c.p_list, vec![Exponent(1.0), Exponent(2.0), Exponent::INF]);
        assert_eq!(c.cfl, 0.5);
        assert_eq!(c.sample_every, 1);
        assert_eq!(c.velocity.time_dependence, TimeDependence::Steady);
    }

    #[test]
    fn round_trips_through_json() {
        let c = SimConfig::from_json(BASE).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(SimConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let typo = BASE.replace("\"theta_seed\"", "\"theta_sead\"");
        assert!(matches!(SimConfig::from_json(&typo), Err(Error::Config(_))));
        let nested = BASE.replace("\"gamma\"", "\"gama\"");
        assert!(matches!(
            SimConfig::from_json(&nested),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn invalid_values_are_rejected() {
        for (from, to) in [
            ("[1, 2, \"inf\"]", "[]"),
            ("[1, 2, \"inf\"]", "[0.5]"),
            ("\"n\": 32", "\"n\": 30"),
            ("\"gamma\": 1.0", "\"gamma\": 2.5"),
            ("\"dim\": 2", "\"dim\": 1"),
        ] {
            let text = BASE.replace(from, to);
            assert!(SimConfig::from_json(&text).is_err(), "{to}");
        }
    }

    #[test]
    fn oscillatory_velocity_parses() {
        let text = BASE.replace(
            "\"seed\": 42",
            "\"seed\": 42, \"time_dependence\": {\"OSCILLATORY\": {\"frequency\": 2.0}}",
        );
        let c = SimConfig::from_json(&text).unwrap();
        assert_eq!(
            c.velocity.time_dependence,
            TimeDependence::Oscillatory { frequency: 2.0 }
        );
    }
}
