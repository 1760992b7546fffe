//! Input documents: ideal functions, circle sets and group actions, read from
//! files, stdin (`-`) or inline JSON.

use std::collections::BTreeMap;
use std::io::Read;
use std::sync::Arc;

use rotalg_core::circle_sets::CircleSet;
use rotalg_core::diophantine::{Angle, AngleDescriptor, AngleError};
use rotalg_core::ideal_calculus::{IdealError, IdealFunction, JoinPolicy, WindowDefault};
use rotalg_sandbox::SandboxError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {origin}: {message}")]
    Read { origin: String, message: String },
    #[error("invalid document in {origin}: {message}")]
    Json { origin: String, message: String },
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error("inputs are defined over different angles")]
    AngleConflict,
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Sandbox(#[from] SandboxError),
    #[error("{0}")]
    Options(String),
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
}

/// Sets keyed by index, written as a JSON object with decimal keys in
/// numeric order.
pub mod indexed {
    use super::*;

    pub fn serialize<S: Serializer>(values: &BTreeMap<i64, CircleSet>, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(values.len()))?;
        for (n, v) in values {
            map.serialize_entry(&n.to_string(), v)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, CircleSet>, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, CircleSet>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.trim().parse::<i64>().map(|n| (n, v)).map_err(|_| D::Error::custom(format!("bad index `{k}`"))))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub q: i64,
    #[serde(rename = "P")]
    pub p: CircleSet,
}

fn full_default() -> WindowDefault {
    WindowDefault::Full
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "kebab-case")]
pub enum IdealSpec {
    Basic {
        q: i64,
        #[serde(rename = "P")]
        p: CircleSet,
    },
    Window {
        #[serde(default = "full_default")]
        default: WindowDefault,
        #[serde(with = "indexed")]
        values: BTreeMap<i64, CircleSet>,
    },
    Join {
        gens: Vec<GeneratorDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleDescriptor>,
    #[serde(flatten)]
    pub form: IdealSpec,
}

impl IdealDoc {
    /// Builds the function; `policy` fills in what a join document leaves out.
    pub fn build(&self, angle: &Arc<Angle>, policy: JoinPolicy) -> Result<IdealFunction, InputError> {
        let norm = |s: &CircleSet| s.clone().normalize(angle);
        Ok(match &self.form {
            IdealSpec::Basic { q, p } => IdealFunction::basic(angle.clone(), *q, norm(p))?,
            IdealSpec::Window { default, values } => {
                IdealFunction::window(angle.clone(), values.iter().map(|(n, v)| (*n, norm(v))).collect(), *default)?
            }
            IdealSpec::Join { gens, depth, window } => {
                let policy = JoinPolicy { depth: depth.unwrap_or(policy.depth), window: window.unwrap_or(policy.window) };
                IdealFunction::join_of_basics(angle.clone(), gens.iter().map(|g| (g.q, norm(&g.p))).collect(), policy)?
            }
        })
    }

    /// Depth and window stored in a join document.
    pub fn policy_hint(&self) -> (Option<usize>, Option<i64>) {
        match &self.form {
            IdealSpec::Join { depth, window, .. } => (*depth, *window),
            _ => (None, None),
        }
    }
}

/// A circle set, optionally with the angle its orbit points refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleDescriptor>,
    #[serde(flatten)]
    pub set: CircleSet,
}

#[derive(Debug, Clone)]
pub enum PlotInput {
    Set(SetDoc),
    Ideal(IdealDoc),
}

impl PlotInput {
    pub fn angle(&self) -> Option<&AngleDescriptor> {
        match self {
            PlotInput::Set(d) => d.angle.as_ref(),
            PlotInput::Ideal(d) => d.angle.as_ref(),
        }
    }
}

/// Reads `-` from stdin, text starting with `{` as inline JSON, anything
/// else as a path.
pub fn load_text(arg: &str) -> Result<(String, String), InputError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(("inline JSON".into(), arg.to_string()));
    }
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| InputError::Read { origin: "stdin".into(), message: e.to_string() })?;
        return Ok(("stdin".into(), text));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| InputError::Read { origin: arg.into(), message: e.to_string() })?;
    Ok((arg.to_string(), text))
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(origin: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Json { origin: origin.into(), message: e.to_string() })
}

pub fn load_ideal(arg: &str) -> Result<IdealDoc, InputError> {
    let (origin, text) = load_text(arg)?;
    parse_json(&origin, &text)
}

pub fn load_plot_input(arg: &str) -> Result<PlotInput, InputError> {
    let (origin, text) = load_text(arg)?;
    let value: serde_json::Value = parse_json(&origin, &text)?;
    if value.get("repr").is_some() {
        parse_json(&origin, &text).map(PlotInput::Ideal)
    } else {
        parse_json(&origin, &text).map(PlotInput::Set)
    }
}

/// The `--angle` flag wins, then the angle the documents agree on, then the
/// fallback (normally `ROTALG_DEFAULT_ANGLE`), then the golden angle.
pub fn resolve_angle<'a>(
    flag: Option<&str>,
    documents: impl IntoIterator<Item = Option<&'a AngleDescriptor>>,
    fallback: Option<&str>,
) -> Result<Arc<Angle>, InputError> {
    let descriptor = match flag {
        Some(text) => AngleDescriptor::parse(text)?,
        None => {
            let mut found: Option<&AngleDescriptor> = None;
            for d in documents.into_iter().flatten() {
                match found {
                    Some(f) if f != d => return Err(InputError::AngleConflict),
                    _ => found = Some(d),
                }
            }
            match (found, fallback) {
                (Some(d), _) => d.clone(),
                (None, Some(text)) => AngleDescriptor::parse(text)?,
                (None, None) => AngleDescriptor::golden(),
            }
        }
    };
    Ok(Arc::new(Angle::new(descriptor)?))
}
